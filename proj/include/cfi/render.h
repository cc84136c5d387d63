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

#ifndef CFI_RENDER_H_
#define CFI_RENDER_H_

#include <string>

#include "cfi/scene.h"
#include "cfi/scoring.h"

namespace cfi {

// Top-down SVG of the scene: route, ego, agents as oriented boxes. Objects
// whose report score is >= threshold are outlined as important; the legend
// lists every object's score. Throws ValidationError when the report does not
// describe exactly the scene's agents.
std::string RenderSvg(const Scene& scene, const SceneReport& report,
                      double threshold);

}  // namespace cfi

#endif  // CFI_RENDER_H_
