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

#ifndef MDLSYS_ERRORS_HPP
#define MDLSYS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mdlsys {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Enumeration or weight computation would exceed a configured cap.
class ResourceError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// Singular resolvent, non-Hermitian input, indefinite factorization.
class NumericError : public Error {
 public:
  using Error::Error;
};

// A theorem hypothesis (contractivity, commutativity, observability) fails.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

// Malformed file or request.
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace mdlsys

#endif  // MDLSYS_ERRORS_HPP
