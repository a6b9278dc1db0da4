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

#include "fedldl/random.h"

#include <algorithm>
#include <numeric>

#include "fedldl/errors.h"

namespace fedldl {

Rng MakeStream(std::uint64_t seed, StreamTag tag, std::uint64_t a,
               std::uint64_t b) {
  auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v); };
  auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  std::seed_seq seq{lo(seed), hi(seed), static_cast<std::uint32_t>(tag),
                    lo(a),    hi(a),    lo(b),
                    hi(b)};
  return Rng(seq);
}

std::vector<double> SampleDirichlet(std::span<const double> concentration,
                                    Rng& rng) {
  if (concentration.empty()) {
    throw DimensionError("Dirichlet needs at least one component");
  }
  std::vector<double> draw(concentration.size());
  for (std::size_t i = 0; i < concentration.size(); ++i) {
    if (!(concentration[i] > 0.0)) {
      throw InputError("Dirichlet concentration must be positive");
    }
    std::gamma_distribution<double> gamma(concentration[i], 1.0);
    draw[i] = gamma(rng);
  }
  double total = std::accumulate(draw.begin(), draw.end(), 0.0);
  if (total <= 0.0) {
    // Every gamma variate underflowed (tiny concentrations). The limit of the
    // distribution is a random vertex.
    std::uniform_int_distribution<std::size_t> pick(0, draw.size() - 1);
    std::fill(draw.begin(), draw.end(), 0.0);
    draw[pick(rng)] = 1.0;
    return draw;
  }
  for (double& v : draw) v /= total;
  return draw;
}

std::vector<double> SampleSymmetricDirichlet(std::size_t k, double alpha,
                                             Rng& rng) {
  std::vector<double> concentration(k, alpha);
  return SampleDirichlet(concentration, rng);
}

}  // namespace fedldl
