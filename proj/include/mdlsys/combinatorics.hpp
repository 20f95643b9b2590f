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

#ifndef MDLSYS_COMBINATORICS_HPP
#define MDLSYS_COMBINATORICS_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace mdlsys {

// A word v = i_N ... i_1 over the letters {1..d}, stored in written order.
// letters.front() is i_N (leftmost); the operator power A^v is the product
// A_{i_N} ... A_{i_1} taken in the same written order. Every module reads
// words this way.
struct Word {
  std::vector<int> letters;
  int d = 1;

  Word() = default;
  Word(std::vector<int> l, int alphabet);

  static Word unit(int alphabet) { return Word({}, alphabet); }
  static Word parse(const std::string& digits, int alphabet);

  std::size_t length() const { return letters.size(); }
  bool empty() const { return letters.empty(); }
  int first() const { return letters.front(); }
  int last() const { return letters.back(); }

  // v·w and j·v, w·j.
  Word concat(const Word& w) const;
  Word prepend(int j) const;
  Word append(int j) const;

  // Digit string for d <= 9, dot separated otherwise; "" for the unit.
  std::string str() const;

  bool operator==(const Word& o) const = default;
  // Shortlex: shorter words first, then lexicographic.
  std::strong_ordering operator<=>(const Word& o) const;
};

struct MultiIndex {
  std::vector<int> n;

  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> entries);
  static MultiIndex zero(int d) { return MultiIndex(std::vector<int>(d, 0)); }
  static MultiIndex unit(int d, int j);  // e_j, j in [1, d]

  int dim() const { return static_cast<int>(n.size()); }
  int total() const;
  int operator[](int k) const { return n[k]; }

  // n + e_j and n - e_j (j in [1, d]); minus returns nullopt off the orthant.
  MultiIndex plus(int j) const;
  std::optional<MultiIndex> minus(int j) const;

  std::string str() const;

  bool operator==(const MultiIndex& o) const = default;
  // Graded: smaller total first, then lexicographic.
  std::strong_ordering operator<=>(const MultiIndex& o) const;
};

// Cap on d^N for word enumeration. Reads MDLSYS_MAX_WORDS once, default 2^22.
std::uint64_t max_words();

// All d^N words of length N, lexicographic. Throws ResourceError above cap.
std::vector<Word> enumerate_words(int d, int N);
std::vector<Word> enumerate_words(int d, int N, std::uint64_t cap);
// All words with length <= N in shortlex order.
std::vector<Word> enumerate_words_upto(int d, int N);

// All multi-indices with |n| = N, lexicographic.
std::vector<MultiIndex> enumerate_multi(int d, int N);
std::vector<MultiIndex> enumerate_multi_upto(int d, int N);

Word transpose(const Word& v);
MultiIndex abelianize(const Word& v);

struct MultinomialWeight {
  boost::multiprecision::cpp_rational exact;  // |n|!/n!
  double value = 0.0;
  // n!/|n|!, the Arveson norm weight.
  double inverse = 0.0;
};

inline constexpr int kDefaultWeightCap = 40;

// |n|!/n! = #a^{-1}(n). Throws ResourceError when |n| exceeds cap.
MultinomialWeight multinomial_weight(const MultiIndex& n,
                                     int cap = kDefaultWeightCap);

// n! as an exact integer.
boost::multiprecision::cpp_int multi_factorial(const MultiIndex& n);

// k^{-1}v: v' when v = k v', nullopt otherwise.
std::optional<Word> left_quotient(int k, const Word& v);

}  // namespace mdlsys

#endif  // MDLSYS_COMBINATORICS_HPP
