/* Copyright 2026 The Nept Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef NEPT_GROUND_GROUNDER_HPP_
#define NEPT_GROUND_GROUNDER_HPP_

#include <string>
#include <vector>

#include "nept/ground/scene.hpp"

namespace nept::ground {

/// The perception boundary. score() returns probabilities in [0, 1]:
///   num_objects = 0 -> one scalar for the whole image,
///   num_objects = 1 -> N per-object scores,
///   num_objects = 2 -> N*N ordered-pair scores, row-major in the first id.
/// query() returns a free-text answer about one object.
///
/// Implementations over a fixed scene are immutable after construction and
/// safe to share across threads; the remote client synchronizes internally.
class Grounder {
 public:
  virtual ~Grounder() = default;

  virtual std::size_t num_objects() const = 0;
  virtual std::vector<double> score(const std::string& question,
                                    int num_objects) = 0;
  virtual std::string query(const std::string& question, int object_id) = 0;
};

/// Candidate proposal over a stored scene: ids whose class equals any of the
/// names, case-insensitively. An empty result is not an error.
std::vector<int> propose_objects(const Scene& scene,
                                 const std::vector<std::string>& names);

}  // namespace nept::ground

#endif  // NEPT_GROUND_GROUNDER_HPP_
