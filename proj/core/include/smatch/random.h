// Copyright 2026 The smatch Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SMATCH_RANDOM_H_
#define SMATCH_RANDOM_H_

#include <cstdint>
#include <random>

namespace smatch {

// All stochastic operations take the engine explicitly; a fixed seed gives a
// reproducible result on a given standard library implementation.
using Rng = std::mt19937_64;

inline Rng MakeRng(std::uint64_t seed) { return Rng(seed); }

}  // namespace smatch

#endif  // SMATCH_RANDOM_H_
