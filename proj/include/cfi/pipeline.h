// Copyright 2026 The Counterfactual Importance Authors
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

#ifndef CFI_PIPELINE_H_
#define CFI_PIPELINE_H_

#include <span>
#include <vector>

#include "cfi/predict.h"
#include "cfi/scene.h"
#include "cfi/scoring.h"

namespace cfi {

// Scores every scene with `method` on up to `jobs` worker threads (0 means
// hardware concurrency) and, for the counterfactual method, normalizes over
// the whole batch. Output order follows input order. The first failure is
// rethrown after all workers stop.
std::vector<SceneReport> ScoreBatch(std::span<const Scene> scenes,
                                    ScoringMethod method,
                                    const ScoringConfig& config,
                                    const EgoPredictor& predictor,
                                    unsigned jobs);

}  // namespace cfi

#endif  // CFI_PIPELINE_H_
