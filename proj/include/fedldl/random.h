// Copyright 2026 The FedLDL Authors
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

#ifndef FEDLDL_RANDOM_H_
#define FEDLDL_RANDOM_H_

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace fedldl {

using Rng = std::mt19937_64;

// Independent substreams drawn from one master seed. Each stage of a run
// (embedding, labels, partition, ...) gets its own tag so adding draws to one
// stage never shifts the numbers another stage sees.
enum class StreamTag : std::uint32_t {
  kEmbedding = 1,
  kGroundTruth = 2,
  kEvalSplit = 3,
  kPartition = 4,
  kQuality = 5,
  kAnnotation = 6,
  kSelection = 7,
  kLocalTraining = 8,
  kModelInit = 9,
  kTheorySweep = 10,
  kData = 11,
};

// Deterministic stream keyed on (seed, tag, a, b).
Rng MakeStream(std::uint64_t seed, StreamTag tag, std::uint64_t a = 0,
               std::uint64_t b = 0);

// One draw from Dirichlet(concentration). Entries sum to 1.
std::vector<double> SampleDirichlet(std::span<const double> concentration,
                                    Rng& rng);

// Symmetric Dirichlet(alpha * 1_k).
std::vector<double> SampleSymmetricDirichlet(std::size_t k, double alpha,
                                             Rng& rng);

}  // namespace fedldl

#endif  // FEDLDL_RANDOM_H_
