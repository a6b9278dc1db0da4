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

#ifndef FEDLDL_CLIENT_SHARD_H_
#define FEDLDL_CLIENT_SHARD_H_

#include <cstddef>
#include <vector>

#include "fedldl/label_distribution.h"
#include "fedldl/model.h"

namespace fedldl {

// One client's private data. `examples[j].target` is the observed (noisy)
// supervision; `latent[j]` is the ground truth it was annotated from, kept
// only for inspection and never used in training.
struct ClientShard {
  int client_id = 0;
  double quality = 0.0;  // q_m, the simulated annotator count
  std::vector<Example> examples;
  std::vector<LabelDistribution> latent;

  std::size_t sample_count() const { return examples.size(); }
};

}  // namespace fedldl

#endif  // FEDLDL_CLIENT_SHARD_H_
