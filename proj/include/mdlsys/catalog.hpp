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

#ifndef MDLSYS_CATALOG_HPP
#define MDLSYS_CATALOG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mdlsys/io.hpp"
#include "mdlsys/systems.hpp"

namespace mdlsys {

OutputPair reverse_stein_pair();
OutputPair a_stable_pair();
OutputPair a_obs_pair();
OutputPair not_shift_inv_pair();
OutputPair e331_pair(cplx a);
OutputPair e332_pair(cplx a);

// The matrix printed for G^a - sum_j A_j* G^a A_j in the reverse-Stein example.
Mat reverse_stein_published();
// s_k = (k+1)/(2k+1), k = 0..count-1.
std::vector<double> hankel_sequence(int count);

// Uniform points in the open ball of the given radius.
std::vector<Point> sample_ball_points(int d, int count, double radius, std::uint64_t seed);

std::vector<std::string> catalog_ids();

struct ExampleOutcome {
  bool pass = false;
  Json report;
};

// Runs the canonical checks of a registered example. Unknown ids throw
// InputError listing the registry.
ExampleOutcome run_paper_example(const std::string& id, double tol = kDefaultTol,
                                 std::uint64_t seed = 7);

}  // namespace mdlsys

#endif  // MDLSYS_CATALOG_HPP
