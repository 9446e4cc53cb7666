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

#ifndef NEPT_GROUND_ORACLE_HPP_
#define NEPT_GROUND_ORACLE_HPP_

#include <set>
#include <string>
#include <vector>

#include "nept/ground/grounder.hpp"
#include "nept/ground/scene.hpp"

namespace nept::ground {

/// Canonical attribute vocabulary, grouped by category.
const std::set<std::string>& color_tokens();
const std::set<std::string>& shape_tokens();
const std::set<std::string>& size_tokens();
const std::set<std::string>& material_tokens();

struct OracleOptions {
  /// Whether "same color"-style predicates score an object against itself.
  bool analogical_diagonal = false;
};

/// Exact grounder over a stored scene graph. Accepts bare predicate tokens
/// ("red", "behind", "same color"), lowercased with whitespace collapsed.
/// Registered tokens are the canonical vocabulary plus every class,
/// attribute, and relation predicate present in the scene. All scores are
/// exactly 0 or 1.
///
/// num_objects = 1 scores class/attribute membership per object;
/// num_objects = 2 scores stored relations, or attribute-category equality
/// for "same color" / "same shape" / "same size" / "same material";
/// num_objects = 0 scores whether any object (or ordered pair) matches.
class OracleGrounder : public Grounder {
 public:
  explicit OracleGrounder(Scene scene, OracleOptions opts = {});

  std::size_t num_objects() const override { return scene_.size(); }
  std::vector<double> score(const std::string& question,
                            int num_objects) override;
  /// Answers "what color/shape/size/material/class" about one object.
  std::string query(const std::string& question, int object_id) override;

  const Scene& scene() const { return scene_; }

 protected:
  std::vector<double> attribute_scores(const std::string& token) const;
  std::vector<double> relation_scores(const std::string& predicate) const;
  std::vector<double> analogical_scores(const std::string& category) const;
  bool is_relation_token(const std::string& token) const;
  bool is_attribute_token(const std::string& token) const;

  Scene scene_;
  OracleOptions opts_;
  std::set<std::string> attribute_vocab_;
  std::set<std::string> relation_vocab_;
};

/// Spatial relation matrix from geometry alone: left/right compare box
/// center x strictly, front/behind compare depth strictly (larger depth is
/// farther). The diagonal is 0. Returns N*N row-major scores.
std::vector<double> geometric_score(const Scene& scene,
                                    const std::string& predicate);

/// Oracle grounder that answers left/right/front/behind from box geometry
/// and depth instead of stored relations.
class GeometricGrounder : public OracleGrounder {
 public:
  explicit GeometricGrounder(Scene scene, OracleOptions opts = {});

  std::vector<double> score(const std::string& question,
                            int num_objects) override;
};

}  // namespace nept::ground

#endif  // NEPT_GROUND_ORACLE_HPP_
