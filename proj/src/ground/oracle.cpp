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

#include "nept/ground/oracle.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <optional>

#include "nept/error.hpp"

namespace nept::ground {

namespace {

std::string canonicalize(const std::string& s) {
  std::string out;
  bool pending_space = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(
        static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

const std::set<std::string> kSpatial = {"left", "right", "front", "behind"};

std::optional<std::string> category_value(const SceneObject& o,
                                          const std::string& category) {
  const std::set<std::string>* tokens = nullptr;
  if (category == "color") tokens = &color_tokens();
  else if (category == "shape") tokens = &shape_tokens();
  else if (category == "size") tokens = &size_tokens();
  else if (category == "material") tokens = &material_tokens();
  if (tokens == nullptr) return std::nullopt;
  if (tokens->count(o.cls) != 0U) return o.cls;
  for (const std::string& a : o.attributes)
    if (tokens->count(a) != 0U) return a;
  return std::nullopt;
}

}  // namespace

const std::set<std::string>& color_tokens() {
  static const std::set<std::string> kColors = {
      "gray", "red", "blue", "green", "brown", "purple", "cyan", "yellow"};
  return kColors;
}

const std::set<std::string>& shape_tokens() {
  static const std::set<std::string> kShapes = {"cube", "sphere", "cylinder"};
  return kShapes;
}

const std::set<std::string>& size_tokens() {
  static const std::set<std::string> kSizes = {"small", "large"};
  return kSizes;
}

const std::set<std::string>& material_tokens() {
  static const std::set<std::string> kMaterials = {"metal", "rubber"};
  return kMaterials;
}

OracleGrounder::OracleGrounder(Scene scene, OracleOptions opts)
    : scene_(std::move(scene)), opts_(opts) {
  scene_.validate();
  for (const std::set<std::string>* s :
       {&color_tokens(), &shape_tokens(), &size_tokens(), &material_tokens()})
    attribute_vocab_.insert(s->begin(), s->end());
  for (const SceneObject& o : scene_.objects) {
    if (!o.cls.empty()) attribute_vocab_.insert(canonicalize(o.cls));
    for (const std::string& a : o.attributes)
      attribute_vocab_.insert(canonicalize(a));
  }
  relation_vocab_ = kSpatial;
  for (const auto& [subj, pred, obj] : scene_.relations)
    relation_vocab_.insert(canonicalize(pred));
}

bool OracleGrounder::is_relation_token(const std::string& token) const {
  return relation_vocab_.count(token) != 0U;
}

bool OracleGrounder::is_attribute_token(const std::string& token) const {
  return attribute_vocab_.count(token) != 0U;
}

std::vector<double> OracleGrounder::attribute_scores(
    const std::string& token) const {
  std::vector<double> out(scene_.size(), 0.0);
  for (std::size_t i = 0; i < scene_.size(); ++i) {
    const SceneObject& o = scene_.objects[i];
    const bool match =
        canonicalize(o.cls) == token ||
        std::any_of(o.attributes.begin(), o.attributes.end(),
                    [&](const std::string& a) {
                      return canonicalize(a) == token;
                    });
    out[i] = match ? 1.0 : 0.0;
  }
  return out;
}

std::vector<double> OracleGrounder::relation_scores(
    const std::string& predicate) const {
  const std::size_t n = scene_.size();
  std::vector<double> out(n * n, 0.0);
  for (const auto& [subj, pred, obj] : scene_.relations) {
    if (canonicalize(pred) != predicate) continue;
    out[static_cast<std::size_t>(subj) * n + static_cast<std::size_t>(obj)] =
        1.0;
  }
  return out;
}

std::vector<double> OracleGrounder::analogical_scores(
    const std::string& category) const {
  const std::size_t n = scene_.size();
  std::vector<double> out(n * n, 0.0);
  for (std::size_t x = 0; x < n; ++x) {
    const auto vx = category_value(scene_.objects[x], category);
    if (!vx) continue;
    for (std::size_t y = 0; y < n; ++y) {
      if (x == y && !opts_.analogical_diagonal) continue;
      const auto vy = category_value(scene_.objects[y], category);
      if (vy && *vx == *vy) out[x * n + y] = 1.0;
    }
  }
  return out;
}

std::vector<double> OracleGrounder::score(const std::string& question,
                                          int num_objects) {
  if (num_objects < 0 || num_objects > 2)
    throw GroundError("num_objects must be 0, 1, or 2");
  const std::string q = canonicalize(question);

  std::vector<double> pair_scores;
  bool is_pairwise = false;
  if (q.rfind("same ", 0) == 0) {
    const std::string category = q.substr(5);
    if (category != "color" && category != "shape" && category != "size" &&
        category != "material")
      throw GroundError("unknown predicate '" + q + "'");
    pair_scores = analogical_scores(category);
    is_pairwise = true;
  } else if (is_relation_token(q)) {
    pair_scores = relation_scores(q);
    is_pairwise = true;
  }

  if (is_pairwise) {
    if (num_objects == 2) return pair_scores;
    if (num_objects == 0) {
      const bool any = std::any_of(pair_scores.begin(), pair_scores.end(),
                                   [](double v) { return v > 0.0; });
      return {any ? 1.0 : 0.0};
    }
    throw GroundError("predicate '" + q + "' relates object pairs; call it " +
                      "with num_objects=2");
  }

  if (!is_attribute_token(q)) throw GroundError("unknown predicate '" + q +
                                                "'");
  std::vector<double> scores = attribute_scores(q);
  if (num_objects == 1) return scores;
  if (num_objects == 0) {
    const bool any = std::any_of(scores.begin(), scores.end(),
                                 [](double v) { return v > 0.0; });
    return {any ? 1.0 : 0.0};
  }
  throw GroundError("predicate '" + q + "' describes single objects; call " +
                    "it with num_objects=1");
}

std::string OracleGrounder::query(const std::string& question, int object_id) {
  if (object_id < 0 || object_id >= static_cast<int>(scene_.size()))
    throw GroundError("query: object id " + std::to_string(object_id) +
                      " out of range");
  const SceneObject& o = scene_.objects[static_cast<std::size_t>(object_id)];
  const std::string q = canonicalize(question);
  for (const char* category : {"color", "shape", "size", "material"}) {
    if (q.find(category) == std::string::npos) continue;
    const auto value = category_value(o, category);
    if (!value)
      throw GroundError("query: object " + std::to_string(object_id) +
                        " has no known " + category);
    return *value;
  }
  if (q.find("class") != std::string::npos || q.find("what is") == 0)
    return o.cls;
  throw GroundError("query: cannot answer '" + q + "' from the scene graph");
}

std::vector<double> geometric_score(const Scene& scene,
                                    const std::string& predicate) {
  const std::string p = canonicalize(predicate);
  if (kSpatial.count(p) == 0U)
    throw GroundError("geometric predicate must be one of left, right, " +
                      std::string("front, behind"));
  const std::size_t n = scene.size();
  const bool needs_depth = p == "front" || p == "behind";
  if (needs_depth)
    for (const SceneObject& o : scene.objects)
      if (std::isnan(o.depth))
        throw GroundError("predicate '" + p + "' requires depth for object " +
                          std::to_string(o.id));
  std::vector<double> out(n * n, 0.0);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      if (x == y) continue;
      const SceneObject& ox = scene.objects[x];
      const SceneObject& oy = scene.objects[y];
      bool hit = false;
      if (p == "left") hit = box_center_x(ox.box) < box_center_x(oy.box);
      else if (p == "right") hit = box_center_x(ox.box) > box_center_x(oy.box);
      else if (p == "front") hit = ox.depth < oy.depth;
      else hit = ox.depth > oy.depth;
      if (hit) out[x * n + y] = 1.0;
    }
  }
  return out;
}

GeometricGrounder::GeometricGrounder(Scene scene, OracleOptions opts)
    : OracleGrounder(std::move(scene), opts) {}

std::vector<double> GeometricGrounder::score(const std::string& question,
                                             int num_objects) {
  const std::string q = canonicalize(question);
  if (kSpatial.count(q) == 0U) return OracleGrounder::score(question,
                                                            num_objects);
  if (num_objects == 2) return geometric_score(scene_, q);
  if (num_objects == 0) {
    const std::vector<double> m = geometric_score(scene_, q);
    const bool any =
        std::any_of(m.begin(), m.end(), [](double v) { return v > 0.0; });
    return {any ? 1.0 : 0.0};
  }
  throw GroundError("predicate '" + q + "' relates object pairs; call it " +
                    "with num_objects=2");
}

std::vector<int> propose_objects(const Scene& scene,
                                 const std::vector<std::string>& names) {
  std::vector<std::string> wanted;
  wanted.reserve(names.size());
  for (const std::string& n : names) wanted.push_back(canonicalize(n));
  std::vector<int> ids;
  for (const SceneObject& o : scene.objects) {
    const std::string cls = canonicalize(o.cls);
    if (std::find(wanted.begin(), wanted.end(), cls) != wanted.end())
      ids.push_back(o.id);
  }
  return ids;
}

}  // namespace nept::ground
