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

#include "nept/ground/scene.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "nept/error.hpp"

namespace nept::ground {

using nlohmann::json;

double box_center_x(const Box& b) { return b.x + b.w / 2.0; }
double box_center_y(const Box& b) { return b.y + b.h / 2.0; }

double iou(const Box& a, const Box& b) {
  const double ix =
      std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x);
  const double iy =
      std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y);
  if (ix <= 0.0 || iy <= 0.0) return 0.0;
  const double inter = ix * iy;
  const double uni = a.w * a.h + b.w * b.h - inter;
  if (uni <= 0.0) return 0.0;
  return inter / uni;
}

void Scene::validate() const {
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const SceneObject& o = objects[i];
    if (o.id != static_cast<int>(i))
      throw GroundError("scene: object ids must be 0..N-1 in order (object " +
                        std::to_string(i) + " has id " + std::to_string(o.id) +
                        ")");
    if (!(o.box.w > 0.0) || !(o.box.h > 0.0))
      throw GroundError("scene: object " + std::to_string(o.id) +
                        " box must have positive width and height");
    if (std::isinf(o.depth))
      throw GroundError("scene: object " + std::to_string(o.id) +
                        " depth must be finite");
  }
  const int n = static_cast<int>(objects.size());
  for (const auto& [subj, pred, obj] : relations) {
    if (subj < 0 || subj >= n || obj < 0 || obj >= n)
      throw GroundError("scene: relation (" + std::to_string(subj) + ", " +
                        pred + ", " + std::to_string(obj) +
                        ") names a missing object");
  }
}

namespace {

double number_field(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number())
    throw GroundError(std::string("scene: expected numeric field '") + key +
                      "'");
  return j[key].get<double>();
}

Box box_from_json(const json& j) {
  if (!j.is_array() || j.size() != 4)
    throw GroundError("scene: 'box' must be [x, y, w, h]");
  for (const json& v : j)
    if (!v.is_number()) throw GroundError("scene: 'box' must be numeric");
  return Box{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(),
             j[3].get<double>()};
}

}  // namespace

Scene scene_from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw GroundError(std::string("scene: invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("objects") ||
      !doc["objects"].is_array())
    throw GroundError("scene: top level must be an object with 'objects'");

  Scene scene;
  for (const json& jo : doc["objects"]) {
    if (!jo.is_object()) throw GroundError("scene: objects must be records");
    SceneObject o;
    o.id = static_cast<int>(number_field(jo, "id"));
    if (!jo.contains("box")) throw GroundError("scene: object missing 'box'");
    o.box = box_from_json(jo["box"]);
    o.depth = jo.contains("depth") ? number_field(jo, "depth")
                                   : std::nan("");
    if (jo.contains("class")) {
      if (!jo["class"].is_string())
        throw GroundError("scene: 'class' must be a string");
      o.cls = jo["class"].get<std::string>();
    }
    if (jo.contains("attributes")) {
      if (!jo["attributes"].is_array())
        throw GroundError("scene: 'attributes' must be an array");
      for (const json& a : jo["attributes"]) {
        if (!a.is_string())
          throw GroundError("scene: attributes must be strings");
        o.attributes.insert(a.get<std::string>());
      }
    }
    scene.objects.push_back(std::move(o));
  }
  if (doc.contains("relations")) {
    if (!doc["relations"].is_array())
      throw GroundError("scene: 'relations' must be an array");
    for (const json& jr : doc["relations"]) {
      if (!jr.is_array() || jr.size() != 3 || !jr[0].is_number_integer() ||
          !jr[1].is_string() || !jr[2].is_number_integer())
        throw GroundError("scene: each relation must be [subj, pred, obj]");
      scene.relations.emplace(jr[0].get<int>(), jr[1].get<std::string>(),
                              jr[2].get<int>());
    }
  }
  if (doc.contains("image_ref")) {
    if (!doc["image_ref"].is_string())
      throw GroundError("scene: 'image_ref' must be a string");
    scene.image_ref = doc["image_ref"].get<std::string>();
  }
  scene.validate();
  return scene;
}

std::string scene_to_json_text(const Scene& scene, int indent) {
  json objects = json::array();
  for (const SceneObject& o : scene.objects) {
    json jo;
    jo["id"] = o.id;
    jo["box"] = {o.box.x, o.box.y, o.box.w, o.box.h};
    if (!std::isnan(o.depth)) jo["depth"] = o.depth;
    jo["class"] = o.cls;
    jo["attributes"] = json::array();
    for (const std::string& a : o.attributes) jo["attributes"].push_back(a);
    objects.push_back(std::move(jo));
  }
  json relations = json::array();
  for (const auto& [subj, pred, obj] : scene.relations)
    relations.push_back({subj, pred, obj});
  json doc;
  doc["objects"] = std::move(objects);
  doc["relations"] = std::move(relations);
  if (!scene.image_ref.empty()) doc["image_ref"] = scene.image_ref;
  return doc.dump(indent);
}

Scene load_scene_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw GroundError("scene: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return scene_from_json_text(buf.str());
}

}  // namespace nept::ground
