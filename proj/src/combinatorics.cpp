/*
 * Copyright 2026 The mdlsys Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "mdlsys/combinatorics.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "mdlsys/errors.hpp"

namespace mdlsys {

namespace bmp = boost::multiprecision;

Word::Word(std::vector<int> l, int alphabet) : letters(std::move(l)), d(alphabet) {
  if (d < 1) throw DimensionError("alphabet size must be >= 1");
  for (int k : letters)
    if (k < 1 || k > d)
      throw DimensionError("letter " + std::to_string(k) + " outside [1, " +
                           std::to_string(d) + "]");
}

Word Word::parse(const std::string& digits, int alphabet) {
  std::vector<int> l;
  if (digits.find('.') != std::string::npos) {
    std::stringstream ss(digits);
    std::string tok;
    while (std::getline(ss, tok, '.'))
      if (!tok.empty()) l.push_back(std::stoi(tok));
  } else {
    for (char c : digits) {
      if (c < '0' || c > '9') throw InputError("bad word '" + digits + "'");
      l.push_back(c - '0');
    }
  }
  return Word(std::move(l), alphabet);
}

Word Word::concat(const Word& w) const {
  std::vector<int> l = letters;
  l.insert(l.end(), w.letters.begin(), w.letters.end());
  return Word(std::move(l), std::max(d, w.d));
}

Word Word::prepend(int j) const {
  std::vector<int> l;
  l.reserve(letters.size() + 1);
  l.push_back(j);
  l.insert(l.end(), letters.begin(), letters.end());
  return Word(std::move(l), d);
}

Word Word::append(int j) const {
  std::vector<int> l = letters;
  l.push_back(j);
  return Word(std::move(l), d);
}

std::string Word::str() const {
  std::string s;
  for (std::size_t i = 0; i < letters.size(); ++i) {
    if (d > 9 && i > 0) s += '.';
    s += std::to_string(letters[i]);
  }
  return s;
}

std::strong_ordering Word::operator<=>(const Word& o) const {
  if (auto c = letters.size() <=> o.letters.size(); c != 0) return c;
  if (auto c = letters <=> o.letters; c != 0) return c;
  return d <=> o.d;
}

MultiIndex::MultiIndex(std::vector<int> entries) : n(std::move(entries)) {
  for (int k : n)
    if (k < 0) throw DimensionError("multi-index entries must be >= 0");
}

MultiIndex MultiIndex::unit(int d, int j) {
  std::vector<int> e(d, 0);
  e.at(j - 1) = 1;
  return MultiIndex(std::move(e));
}

int MultiIndex::total() const {
  int s = 0;
  for (int k : n) s += k;
  return s;
}

MultiIndex MultiIndex::plus(int j) const {
  MultiIndex r = *this;
  ++r.n.at(j - 1);
  return r;
}

std::optional<MultiIndex> MultiIndex::minus(int j) const {
  if (n.at(j - 1) == 0) return std::nullopt;
  MultiIndex r = *this;
  --r.n[j - 1];
  return r;
}

std::string MultiIndex::str() const {
  std::string s = "(";
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(n[i]);
  }
  return s + ")";
}

std::strong_ordering MultiIndex::operator<=>(const MultiIndex& o) const {
  if (auto c = total() <=> o.total(); c != 0) return c;
  return n <=> o.n;
}

std::uint64_t max_words() {
  static const std::uint64_t cap = [] {
    const char* env = std::getenv("MDLSYS_MAX_WORDS");
    if (env && *env) {
      char* end = nullptr;
      unsigned long long v = std::strtoull(env, &end, 10);
      if (end && *end == '\0' && v > 0) return static_cast<std::uint64_t>(v);
    }
    return std::uint64_t{1} << 22;
  }();
  return cap;
}

std::vector<Word> enumerate_words(int d, int N) {
  return enumerate_words(d, N, max_words());
}

std::vector<Word> enumerate_words(int d, int N, std::uint64_t cap) {
  if (d < 1 || N < 0) throw DimensionError("enumerate_words needs d >= 1, N >= 0");
  std::uint64_t count = 1;
  for (int i = 0; i < N; ++i) {
    if (count > cap / static_cast<std::uint64_t>(d))
      throw ResourceError("d^N = " + std::to_string(d) + "^" + std::to_string(N) +
                          " exceeds word cap " + std::to_string(cap));
    count *= static_cast<std::uint64_t>(d);
  }
  if (count > cap)
    throw ResourceError("word count exceeds cap " + std::to_string(cap));
  std::vector<Word> out;
  out.reserve(count);
  std::vector<int> l(N, 1);
  for (std::uint64_t c = 0; c < count; ++c) {
    out.emplace_back(l, d);
    for (int pos = N - 1; pos >= 0; --pos) {
      if (l[pos] < d) {
        ++l[pos];
        break;
      }
      l[pos] = 1;
    }
  }
  return out;
}

std::vector<Word> enumerate_words_upto(int d, int N) {
  std::vector<Word> out;
  for (int k = 0; k <= N; ++k) {
    auto lvl = enumerate_words(d, k);
    out.insert(out.end(), lvl.begin(), lvl.end());
  }
  return out;
}

namespace {
void fill_multi(int d, int pos, int remaining, std::vector<int>& cur,
                std::vector<MultiIndex>& out) {
  if (pos == d - 1) {
    cur[pos] = remaining;
    out.emplace_back(cur);
    return;
  }
  for (int k = 0; k <= remaining; ++k) {
    cur[pos] = k;
    fill_multi(d, pos + 1, remaining - k, cur, out);
  }
}
}  // namespace

std::vector<MultiIndex> enumerate_multi(int d, int N) {
  if (d < 1 || N < 0) throw DimensionError("enumerate_multi needs d >= 1, N >= 0");
  std::vector<MultiIndex> out;
  std::vector<int> cur(d, 0);
  fill_multi(d, 0, N, cur, out);
  return out;
}

std::vector<MultiIndex> enumerate_multi_upto(int d, int N) {
  std::vector<MultiIndex> out;
  for (int k = 0; k <= N; ++k) {
    auto lvl = enumerate_multi(d, k);
    out.insert(out.end(), lvl.begin(), lvl.end());
  }
  return out;
}

Word transpose(const Word& v) {
  std::vector<int> l(v.letters.rbegin(), v.letters.rend());
  return Word(std::move(l), v.d);
}

MultiIndex abelianize(const Word& v) {
  std::vector<int> n(v.d, 0);
  for (int k : v.letters) ++n[k - 1];
  return MultiIndex(std::move(n));
}

bmp::cpp_int multi_factorial(const MultiIndex& n) {
  bmp::cpp_int r = 1;
  for (int k : n.n)
    for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

MultinomialWeight multinomial_weight(const MultiIndex& n, int cap) {
  const int N = n.total();
  if (N > cap)
    throw ResourceError("|n| = " + std::to_string(N) + " exceeds weight cap " +
                        std::to_string(cap));
  bmp::cpp_int top = 1;
  for (int i = 2; i <= N; ++i) top *= i;
  const bmp::cpp_int bottom = multi_factorial(n);
  MultinomialWeight w;
  w.exact = bmp::cpp_rational(top, bottom);
  // |n|!/n! is an integer; the division is exact.
  const bmp::cpp_int count = top / bottom;
  w.value = count.convert_to<double>();
  w.inverse = 1.0 / w.value;
  return w;
}

std::optional<Word> left_quotient(int k, const Word& v) {
  if (v.empty() || v.first() != k) return std::nullopt;
  return Word(std::vector<int>(v.letters.begin() + 1, v.letters.end()), v.d);
}

}  // namespace mdlsys
