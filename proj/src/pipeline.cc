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

#include "cfi/pipeline.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace cfi {

std::vector<SceneReport> ScoreBatch(std::span<const Scene> scenes,
                                    ScoringMethod method,
                                    const ScoringConfig& config,
                                    const EgoPredictor& predictor,
                                    unsigned jobs) {
  if (method == ScoringMethod::kCounterfactual) ValidateScoringConfig(config);
  std::vector<SceneReport> reports(scenes.size());
  auto score_one = [&](size_t i) {
    switch (method) {
      case ScoringMethod::kCounterfactual:
        reports[i] = ScoreScene(scenes[i], config, predictor);
        break;
      case ScoringMethod::kEverythingImportant:
        reports[i] = BaselineEverything(scenes[i]);
        break;
      case ScoringMethod::kInverseDistance:
        reports[i] = BaselineInverseDistance(scenes[i]);
        break;
    }
  };

  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  const size_t workers = std::min<size_t>(jobs, scenes.size());
  if (workers <= 1) {
    for (size_t i = 0; i < scenes.size(); ++i) score_one(i);
  } else {
    std::atomic<size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    size_t error_index = scenes.size();
    std::mutex error_mu;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (size_t i = next++; i < scenes.size() && !failed; i = next++) {
          try {
            score_one(i);
          } catch (...) {
            std::lock_guard<std::mutex> lock(error_mu);
            // Report the lowest failing index so errors are deterministic.
            if (i < error_index) {
              error_index = i;
              error = std::current_exception();
            }
            failed = true;
          }
        }
      });
    }
    for (std::thread& t : pool) t.join();
    if (error) std::rethrow_exception(error);
  }

  if (method == ScoringMethod::kCounterfactual) NormalizeReports(reports);
  return reports;
}

}  // namespace cfi
