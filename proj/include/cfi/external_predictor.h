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

#ifndef CFI_EXTERNAL_PREDICTOR_H_
#define CFI_EXTERNAL_PREDICTOR_H_

#include <sys/types.h>

#include <chrono>
#include <mutex>
#include <string>

#include "cfi/predict.h"

namespace cfi {

// Ego predictor backed by a long-lived child process speaking line-delimited
// JSON on its stdin / stdout. One request per line:
//
//   {"type": "predict", "agent_id": "<ego id>", "scene": <scene document>}
//
// answered by one line
//
//   {"waypoints": [[x, y], ...]}            (exactly `horizon` entries)
//   {"error": "message"}                    (reported as RuntimeError)
//
// Requests are serialized; the predictor is safe to share between threads.
class ExternalEgoPredictor : public EgoPredictor {
 public:
  // Runs `command` through /bin/sh -c. Throws RuntimeError if the process
  // cannot be started.
  ExternalEgoPredictor(std::string command, std::chrono::milliseconds timeout);
  ~ExternalEgoPredictor() override;

  ExternalEgoPredictor(const ExternalEgoPredictor&) = delete;
  ExternalEgoPredictor& operator=(const ExternalEgoPredictor&) = delete;

  // Throws RuntimeError on timeout, a closed pipe, or a malformed response.
  Trajectory Plan(const Scene& scene) const override;
  std::string Name() const override { return "external:" + command_; }

 private:
  std::string ReadLine() const;
  void Shutdown() noexcept;

  std::string command_;
  std::chrono::milliseconds timeout_;
  pid_t pid_ = -1;
  int fd_ = -1;
  mutable std::string pending_;
  mutable std::mutex mu_;
};

}  // namespace cfi

#endif  // CFI_EXTERNAL_PREDICTOR_H_
