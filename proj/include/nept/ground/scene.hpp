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

#ifndef NEPT_GROUND_SCENE_HPP_
#define NEPT_GROUND_SCENE_HPP_

#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace nept::ground {

/// Axis-aligned pixel box, (x, y) top-left corner.
struct Box {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;
};

double box_center_x(const Box& b);
double box_center_y(const Box& b);

/// Intersection over union of two boxes; 0 when either is degenerate.
double iou(const Box& a, const Box& b);

struct SceneObject {
  int id = 0;
  Box box;
  /// Larger is farther from the camera. NaN when unknown.
  double depth = 0.0;
  std::string cls;
  std::set<std::string> attributes;
};

/// Ground-truth scene graph: the desk-scale stand-in for an image.
///
/// Invariants (checked by validate()): object ids are 0..N-1 in order,
/// boxes have positive extent, relation endpoints name existing objects.
struct Scene {
  std::vector<SceneObject> objects;
  std::set<std::tuple<int, std::string, int>> relations;
  std::string image_ref;

  std::size_t size() const { return objects.size(); }
  void validate() const;
};

/// Parse/serialize the scene document format:
///   {"objects": [{"id", "box": [x,y,w,h], "depth", "class",
///     "attributes": [...]}, ...],
///    "relations": [[subj, pred, obj], ...], "image_ref": "..."}
/// "depth", "attributes", "relations", and "image_ref" may be omitted.
Scene scene_from_json_text(const std::string& text);
std::string scene_to_json_text(const Scene& scene, int indent = 2);
Scene load_scene_file(const std::string& path);

}  // namespace nept::ground

#endif  // NEPT_GROUND_SCENE_HPP_
