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

#include "nept/harness/gen.hpp"

#include <algorithm>
#include <optional>
#include <random>
#include <set>
#include <utility>

#include "nept/error.hpp"
#include "nept/ground/oracle.hpp"
#include "nept/lang/parser.hpp"

namespace nept::harness {

namespace {

constexpr int kCanvasW = 480;
constexpr int kCanvasH = 320;
constexpr const char* kSpatial[] = {"left", "right", "front", "behind"};

// All sampling routes through modulo mapping so corpora are reproducible
// across standard libraries.
struct Rng {
  std::mt19937_64 g;

  explicit Rng(std::uint64_t seed) : g(seed) {}

  std::uint64_t operator()(std::uint64_t k) { return g() % k; }
  bool coin() { return g() % 2 == 0; }

  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[g() % v.size()];
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i)
      std::swap(v[i - 1], v[g() % i]);
  }
};

std::vector<std::string> to_vector(const std::set<std::string>& s) {
  return {s.begin(), s.end()};
}

const std::vector<std::string>& colors() {
  static const std::vector<std::string> v = to_vector(ground::color_tokens());
  return v;
}
const std::vector<std::string>& shapes() {
  static const std::vector<std::string> v = to_vector(ground::shape_tokens());
  return v;
}
const std::vector<std::string>& sizes() {
  static const std::vector<std::string> v = to_vector(ground::size_tokens());
  return v;
}
const std::vector<std::string>& materials() {
  static const std::vector<std::string> v =
      to_vector(ground::material_tokens());
  return v;
}

const std::vector<std::string>& category_tokens(const std::string& category) {
  if (category == "color") return colors();
  if (category == "shape") return shapes();
  if (category == "size") return sizes();
  if (category == "material") return materials();
  throw Error("unknown attribute category '" + category + "'");
}

const std::vector<std::string>& attribute_categories() {
  static const std::vector<std::string> v = {"size", "color", "material",
                                             "shape"};
  return v;
}

std::string token_of(const ground::SceneObject& o,
                     const std::string& category) {
  if (category == "shape") return o.cls;
  for (const std::string& t : category_tokens(category))
    if (o.attributes.count(t)) return t;
  throw Error("object " + std::to_string(o.id) + " has no known " + category);
}

bool matches_token(const ground::SceneObject& o, const std::string& token) {
  return o.cls == token || o.attributes.count(token) > 0;
}

bool known_token(const ground::Scene& scene, const std::string& token) {
  for (const auto& cat : attribute_categories())
    for (const std::string& t : category_tokens(cat))
      if (t == token) return true;
  for (const auto& o : scene.objects)
    if (o.cls == token || o.attributes.count(token)) return true;
  return false;
}

bool related(const ground::Scene& scene, int x, const std::string& rel,
             int y) {
  if (rel.rfind("same ", 0) == 0) {
    const std::string category = rel.substr(5);
    if (x == y) return false;
    return token_of(scene.objects[x], category) ==
           token_of(scene.objects[y], category);
  }
  return scene.relations.count({x, rel, y}) > 0;
}

bool known_relation(const ground::Scene& scene, const std::string& rel) {
  for (const char* s : kSpatial)
    if (rel == s) return true;
  if (rel.rfind("same ", 0) == 0) {
    const std::string category = rel.substr(5);
    return category == "color" || category == "shape" || category == "size" ||
           category == "material";
  }
  for (const auto& [subj, pred, obj] : scene.relations)
    if (pred == rel) return true;
  return false;
}

}  // namespace

ground::Scene gen_scene(std::uint64_t seed, int n_objects) {
  if (n_objects < 2 || n_objects > 10)
    throw ConfigError("gen_scene needs between 2 and 10 objects, got " +
                      std::to_string(n_objects));
  Rng rng(seed);
  ground::Scene scene;
  scene.image_ref =
      "gen://" + std::to_string(seed) + "/" + std::to_string(n_objects);

  std::set<std::tuple<std::string, std::string, std::string, std::string>>
      tuples;
  std::set<long long> center_keys;  // 2x + w, exact in integers
  std::set<long long> depth_keys;

  for (int id = 0; id < n_objects; ++id) {
    ground::SceneObject obj;
    obj.id = id;

    for (int attempt = 0;; ++attempt) {
      if (attempt > 10000) throw Error("gen_scene: could not place objects");
      const long long w = 30 + static_cast<long long>(rng(51));
      const long long h = 30 + static_cast<long long>(rng(51));
      const long long x = static_cast<long long>(rng(kCanvasW - w + 1));
      const long long y = static_cast<long long>(rng(kCanvasH - h + 1));
      if (center_keys.count(2 * x + w)) continue;
      bool clear = true;
      for (const auto& other : scene.objects) {
        const bool apart = x + w <= other.box.x ||
                           other.box.x + other.box.w <= x ||
                           y + h <= other.box.y ||
                           other.box.y + other.box.h <= y;
        if (!apart) {
          clear = false;
          break;
        }
      }
      if (!clear) continue;
      obj.box = {static_cast<double>(x), static_cast<double>(y),
                 static_cast<double>(w), static_cast<double>(h)};
      center_keys.insert(2 * x + w);
      break;
    }

    for (;;) {
      const long long key = 10 + static_cast<long long>(rng(891));
      if (depth_keys.count(key)) continue;
      depth_keys.insert(key);
      obj.depth = static_cast<double>(key) / 10.0;
      break;
    }

    for (;;) {
      const std::string color = rng.pick(colors());
      const std::string shape = rng.pick(shapes());
      const std::string size = rng.pick(sizes());
      const std::string material = rng.pick(materials());
      if (!tuples.insert({color, shape, size, material}).second) continue;
      obj.cls = shape;
      obj.attributes = {color, size, material};
      break;
    }

    scene.objects.push_back(std::move(obj));
  }

  for (int i = 0; i < n_objects; ++i) {
    for (int j = 0; j < n_objects; ++j) {
      if (i == j) continue;
      const auto& a = scene.objects[i];
      const auto& b = scene.objects[j];
      if (ground::box_center_x(a.box) < ground::box_center_x(b.box))
        scene.relations.insert({i, "left", j});
      else if (ground::box_center_x(a.box) > ground::box_center_x(b.box))
        scene.relations.insert({i, "right", j});
      if (a.depth > b.depth)
        scene.relations.insert({i, "behind", j});
      else if (a.depth < b.depth)
        scene.relations.insert({i, "front", j});
    }
  }

  scene.validate();
  return scene;
}

const char* category_name(Category c) {
  switch (c) {
    case Category::Exist:
      return "Exist";
    case Category::Count:
      return "Count";
    case Category::CompareNumber:
      return "CompareNumber";
    case Category::QueryAttribute:
      return "QueryAttribute";
    case Category::CompareAttribute:
      return "CompareAttribute";
    case Category::Ref:
      return "Ref";
  }
  throw Error("unreachable category");
}

Category category_from_name(const std::string& name) {
  for (Category c : all_categories())
    if (name == category_name(c)) return c;
  throw Error("unknown question category '" + name + "'");
}

std::vector<Category> all_categories() {
  return {Category::Exist,          Category::Count,
          Category::CompareNumber,  Category::QueryAttribute,
          Category::CompareAttribute, Category::Ref};
}

SetExprPtr token_expr(std::string token) {
  auto e = std::make_shared<SetExpr>();
  e->kind = SetExpr::Kind::Token;
  e->token = std::move(token);
  return e;
}

SetExprPtr and_expr(SetExprPtr a, SetExprPtr b) {
  auto e = std::make_shared<SetExpr>();
  e->kind = SetExpr::Kind::And;
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}

SetExprPtr or_expr(SetExprPtr a, SetExprPtr b) {
  auto e = std::make_shared<SetExpr>();
  e->kind = SetExpr::Kind::Or;
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}

SetExprPtr not_expr(SetExprPtr a) {
  auto e = std::make_shared<SetExpr>();
  e->kind = SetExpr::Kind::Not;
  e->a = std::move(a);
  return e;
}

SetExprPtr relate_expr(std::string relation, SetExprPtr anchor) {
  auto e = std::make_shared<SetExpr>();
  e->kind = SetExpr::Kind::Relate;
  e->token = std::move(relation);
  e->a = std::move(anchor);
  return e;
}

std::vector<bool> eval_set(const SetExpr& e, const ground::Scene& scene) {
  const int n = scene.size();
  std::vector<bool> out(n, false);
  switch (e.kind) {
    case SetExpr::Kind::Token: {
      if (!known_token(scene, e.token))
        throw Error("unsupported predicate '" + e.token + "'");
      for (int i = 0; i < n; ++i)
        out[i] = matches_token(scene.objects[i], e.token);
      return out;
    }
    case SetExpr::Kind::And: {
      const std::vector<bool> a = eval_set(*e.a, scene);
      const std::vector<bool> b = eval_set(*e.b, scene);
      for (int i = 0; i < n; ++i) out[i] = a[i] && b[i];
      return out;
    }
    case SetExpr::Kind::Or: {
      const std::vector<bool> a = eval_set(*e.a, scene);
      const std::vector<bool> b = eval_set(*e.b, scene);
      for (int i = 0; i < n; ++i) out[i] = a[i] || b[i];
      return out;
    }
    case SetExpr::Kind::Not: {
      const std::vector<bool> a = eval_set(*e.a, scene);
      for (int i = 0; i < n; ++i) out[i] = !a[i];
      return out;
    }
    case SetExpr::Kind::Relate: {
      if (!known_relation(scene, e.token))
        throw Error("unsupported predicate '" + e.token + "'");
      const std::vector<bool> anchor = eval_set(*e.a, scene);
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n && !out[x]; ++y)
          out[x] = anchor[y] && related(scene, x, e.token, y);
      return out;
    }
  }
  throw Error("unreachable set expression");
}

namespace {

int count_set(const std::vector<bool>& s) {
  int c = 0;
  for (bool b : s)
    if (b) ++c;
  return c;
}

int unique_member(const std::vector<bool>& s) {
  int found = -1;
  for (int i = 0; i < static_cast<int>(s.size()); ++i) {
    if (!s[i]) continue;
    if (found >= 0) return -1;
    found = i;
  }
  return found;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

}  // namespace

std::string brute_force(const LogicalForm& form, const ground::Scene& scene) {
  switch (form.kind) {
    case LogicalForm::Kind::Exists: {
      const std::vector<bool> s = eval_set(*form.a, scene);
      return yes_no(count_set(s) > 0);
    }
    case LogicalForm::Kind::ForallImplies: {
      const std::vector<bool> a = eval_set(*form.a, scene);
      const std::vector<bool> b = eval_set(*form.b, scene);
      for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] && !b[i]) return yes_no(false);
      return yes_no(true);
    }
    case LogicalForm::Kind::Count:
      return std::to_string(count_set(eval_set(*form.a, scene)));
    case LogicalForm::Kind::CompareCount: {
      const int ca = count_set(eval_set(*form.a, scene));
      const int cb = count_set(eval_set(*form.b, scene));
      if (form.cmp == '>') return yes_no(ca > cb);
      if (form.cmp == '<') return yes_no(ca < cb);
      if (form.cmp == '=') return yes_no(ca == cb);
      throw Error("unknown count comparison");
    }
    case LogicalForm::Kind::QueryAttr: {
      const int i = unique_member(eval_set(*form.a, scene));
      if (i < 0) throw Error("description does not pin down one object");
      return token_of(scene.objects[i], form.category);
    }
    case LogicalForm::Kind::SameAttr: {
      const int i = unique_member(eval_set(*form.a, scene));
      const int j = unique_member(eval_set(*form.b, scene));
      if (i < 0 || j < 0)
        throw Error("description does not pin down one object");
      return yes_no(token_of(scene.objects[i], form.category) ==
                    token_of(scene.objects[j], form.category));
    }
    case LogicalForm::Kind::Ref: {
      const int i = unique_member(eval_set(*form.a, scene));
      if (i < 0) throw Error("description does not pin down one object");
      return std::to_string(i);
    }
  }
  throw Error("unreachable logical form");
}

namespace {

// A conjunction of at most one token per attribute category.
struct Desc {
  std::string size, color, material, shape;

  std::vector<std::string> tokens() const {
    std::vector<std::string> t;
    for (const std::string* s : {&size, &color, &material, &shape})
      if (!s->empty()) t.push_back(*s);
    return t;
  }

  bool uses(const std::string& category) const {
    if (category == "size") return !size.empty();
    if (category == "color") return !color.empty();
    if (category == "material") return !material.empty();
    return !shape.empty();
  }

  std::string noun(bool plural) const {
    std::string out;
    for (const std::string* s : {&size, &color, &material})
      if (!s->empty()) out += *s + " ";
    out += shape.empty() ? "object" : shape;
    if (plural) out += "s";
    return out;
  }
};

void set_category(Desc& d, const std::string& category, std::string token) {
  if (category == "size")
    d.size = std::move(token);
  else if (category == "color")
    d.color = std::move(token);
  else if (category == "material")
    d.material = std::move(token);
  else
    d.shape = std::move(token);
}

// mask bit i covers attribute_categories()[i]; mask must be nonzero.
Desc desc_from_object(const ground::SceneObject& o, unsigned mask) {
  Desc d;
  const auto& cats = attribute_categories();
  for (std::size_t i = 0; i < cats.size(); ++i)
    if (mask & (1u << i)) set_category(d, cats[i], token_of(o, cats[i]));
  return d;
}

Desc desc_from_vocab(Rng& rng, unsigned mask) {
  Desc d;
  const auto& cats = attribute_categories();
  for (std::size_t i = 0; i < cats.size(); ++i)
    if (mask & (1u << i)) set_category(d, cats[i], rng.pick(category_tokens(cats[i])));
  return d;
}

unsigned random_mask(Rng& rng) { return 1u + static_cast<unsigned>(rng(15)); }

// Either tokens of a random object (guaranteed present) or random vocabulary
// tokens (often absent): the corpus needs negative answers too.
Desc sample_desc(const ground::Scene& scene, Rng& rng) {
  const unsigned mask = random_mask(rng);
  if (rng.coin())
    return desc_from_object(scene.objects[rng(scene.objects.size())], mask);
  return desc_from_vocab(rng, mask);
}

SetExprPtr desc_set(const Desc& d) {
  SetExprPtr e;
  for (const std::string& t : d.tokens())
    e = e ? and_expr(std::move(e), token_expr(t)) : token_expr(t);
  return e;
}

std::vector<bool> desc_members(const Desc& d, const ground::Scene& scene) {
  return eval_set(*desc_set(d), scene);
}

std::string score1(const std::string& token) {
  return "score(\"" + token + "\", 1)";
}

std::string score2(const std::string& token) {
  return "score(\"" + token + "\", 2)";
}

std::string desc_frag(const Desc& d) {
  std::string out;
  for (const std::string& t : d.tokens()) {
    if (!out.empty()) out += " & ";
    out += score1(t);
  }
  return out;
}

std::string paren(const std::string& s) { return "(" + s + ")"; }

// "<anchor> & score(rel, 2)": objects related to some anchor member.
std::string relate_frag(const Desc& anchor, const std::string& rel) {
  return paren(desc_frag(anchor) + " & " + score2(rel));
}

std::string relation_phrase(const std::string& rel) {
  if (rel == "left") return "to the left of";
  if (rel == "right") return "to the right of";
  if (rel == "front") return "in front of";
  return "behind";
}

// Smallest randomly-ordered attribute subset that matches only `target`.
// Distinct attribute tuples make the full mask a guaranteed fallback.
Desc unique_desc(const ground::Scene& scene, int target, Rng& rng) {
  std::vector<unsigned> masks;
  for (unsigned m = 1; m < 16; ++m) masks.push_back(m);
  rng.shuffle(masks);
  std::stable_sort(masks.begin(), masks.end(), [](unsigned a, unsigned b) {
    return __builtin_popcount(a) < __builtin_popcount(b);
  });
  for (unsigned mask : masks) {
    Desc d = desc_from_object(scene.objects[target], mask);
    if (unique_member(desc_members(d, scene)) == target) return d;
  }
  throw Error("no unique description for object " + std::to_string(target));
}

std::string true_relation(const ground::Scene& scene, int x, int y,
                          Rng& rng) {
  std::vector<std::string> rels;
  for (const char* rel : kSpatial)
    if (scene.relations.count({x, rel, y})) rels.push_back(rel);
  if (rels.empty()) throw Error("objects share a center and a depth");
  return rng.pick(rels);
}

std::optional<QuestionSpec> try_exist(const ground::Scene& scene, Rng& rng) {
  QuestionSpec q;
  q.category = Category::Exist;
  const std::uint64_t variant = rng(4);
  if (variant == 0) {
    const Desc d = sample_desc(scene, rng);
    q.logical_form = {LogicalForm::Kind::Exists, desc_set(d), nullptr, "",
                      '>'};
    q.question_text = "Is there a " + d.noun(false) + "?";
    q.program_text = "return " + paren(desc_frag(d)) + ".exists()";
  } else if (variant == 1) {
    const Desc target = sample_desc(scene, rng);
    const Desc anchor = desc_from_object(
        scene.objects[rng(scene.objects.size())], random_mask(rng));
    const std::string rel =
        kSpatial[rng(4)];
    q.logical_form = {
        LogicalForm::Kind::Exists,
        and_expr(desc_set(target), relate_expr(rel, desc_set(anchor))),
        nullptr, "", '>'};
    q.question_text = "Is there a " + target.noun(false) + " that is " +
                      relation_phrase(rel) + " a " + anchor.noun(false) + "?";
    q.program_text = "return " +
                     paren(desc_frag(target) + " & " +
                           relate_frag(anchor, rel)) +
                     ".exists()";
  } else if (variant == 2) {
    const auto& base = scene.objects[rng(scene.objects.size())];
    const std::string shape = rng.coin() ? base.cls : rng.pick(shapes());
    const std::vector<std::string> cats = {"size", "color", "material"};
    const std::string cat = rng.pick(cats);
    const std::string attr = rng.pick(category_tokens(cat));
    q.logical_form = {
        LogicalForm::Kind::Exists,
        and_expr(token_expr(shape), not_expr(token_expr(attr))), nullptr, "",
        '>'};
    q.question_text = "Is there a " + shape + " that is not " + attr + "?";
    q.program_text = "return " +
                     paren(score1(shape) + " & (not " + score1(attr) + ")") +
                     ".exists()";
  } else {
    const auto& base = scene.objects[rng(scene.objects.size())];
    unsigned mask = random_mask(rng);
    const Desc lhs = desc_from_object(base, mask);
    std::vector<std::string> open;
    for (const std::string& cat : attribute_categories())
      if (!lhs.uses(cat) && cat != "shape") open.push_back(cat);
    if (open.empty()) return std::nullopt;
    const std::string cat = rng.pick(open);
    const std::string rhs = rng.coin() ? token_of(base, cat)
                                       : rng.pick(category_tokens(cat));
    q.logical_form = {LogicalForm::Kind::ForallImplies, desc_set(lhs),
                      token_expr(rhs), "", '>'};
    q.question_text = "Are all " + lhs.noun(true) + " " + rhs + "?";
    q.program_text = "return " + paren(desc_frag(lhs)) + ".implies(" +
                     score1(rhs) + ").forall()";
  }
  q.ground_truth = brute_force(q.logical_form, scene);
  return q;
}

std::optional<QuestionSpec> try_count(const ground::Scene& scene, Rng& rng) {
  QuestionSpec q;
  q.category = Category::Count;
  if (rng.coin()) {
    const Desc d = sample_desc(scene, rng);
    q.logical_form = {LogicalForm::Kind::Count, desc_set(d), nullptr, "",
                      '>'};
    q.question_text = "How many " + d.noun(true) + " are there?";
    q.program_text = "return " + paren(desc_frag(d)) + ".count()";
  } else {
    const int anchor_id = static_cast<int>(rng(scene.objects.size()));
    const Desc anchor = unique_desc(scene, anchor_id, rng);
    const std::string rel = kSpatial[rng(4)];
    q.logical_form = {LogicalForm::Kind::Count,
                      relate_expr(rel, desc_set(anchor)), nullptr, "", '>'};
    q.question_text = "How many objects are " + relation_phrase(rel) +
                      " the " + anchor.noun(false) + "?";
    q.program_text = "return " + relate_frag(anchor, rel) + ".count()";
  }
  q.ground_truth = brute_force(q.logical_form, scene);
  return q;
}

std::optional<QuestionSpec> try_compare_number(const ground::Scene& scene,
                                               Rng& rng) {
  QuestionSpec q;
  q.category = Category::CompareNumber;
  const Desc a = sample_desc(scene, rng);
  const Desc b = sample_desc(scene, rng);
  const char cmps[] = {'>', '<', '='};
  const char cmp = cmps[rng(3)];
  q.logical_form = {LogicalForm::Kind::CompareCount, desc_set(a), desc_set(b),
                    "", cmp};
  const std::string fa = paren(desc_frag(a)) + ".count()";
  const std::string fb = paren(desc_frag(b)) + ".count()";
  if (cmp == '>') {
    q.question_text = "Are there more " + a.noun(true) + " than " +
                      b.noun(true) + "?";
    q.program_text = "return " + fa + " > " + fb;
  } else if (cmp == '<') {
    q.question_text = "Are there fewer " + a.noun(true) + " than " +
                      b.noun(true) + "?";
    q.program_text = "return " + fa + " < " + fb;
  } else {
    q.question_text = "Are there the same number of " + a.noun(true) +
                      " as " + b.noun(true) + "?";
    q.program_text = "return " + fa + " == " + fb;
  }
  q.ground_truth = brute_force(q.logical_form, scene);
  return q;
}

std::optional<QuestionSpec> try_query_attribute(const ground::Scene& scene,
                                                Rng& rng) {
  QuestionSpec q;
  q.category = Category::QueryAttribute;
  const int target = static_cast<int>(rng(scene.objects.size()));
  const Desc d = unique_desc(scene, target, rng);
  std::vector<std::string> open;
  for (const std::string& cat : attribute_categories())
    if (!d.uses(cat)) open.push_back(cat);
  if (open.empty()) return std::nullopt;
  const std::string cat = rng.pick(open);
  q.logical_form = {LogicalForm::Kind::QueryAttr, desc_set(d), nullptr, cat,
                    '>'};
  q.question_text = "What is the " + cat + " of the " + d.noun(false) + "?";
  q.program_text = "m = " + desc_frag(d) +
                   "\n"
                   "for p in m:\n"
                   "  if p[1]:\n"
                   "    return query(\"what is the " +
                   cat +
                   "\", p[0])\n"
                   "return \"none\"";
  q.ground_truth = brute_force(q.logical_form, scene);
  return q;
}

std::optional<QuestionSpec> try_compare_attribute(const ground::Scene& scene,
                                                  Rng& rng) {
  if (scene.size() < 2) return std::nullopt;
  QuestionSpec q;
  q.category = Category::CompareAttribute;
  const int first = static_cast<int>(rng(scene.objects.size()));
  int second = static_cast<int>(rng(scene.objects.size()));
  if (first == second) second = (second + 1) % scene.size();
  const Desc da = unique_desc(scene, first, rng);
  const Desc db = unique_desc(scene, second, rng);
  std::vector<std::string> open;
  for (const std::string& cat : attribute_categories())
    if (!da.uses(cat) && !db.uses(cat)) open.push_back(cat);
  if (open.empty()) return std::nullopt;
  const std::string cat = rng.pick(open);
  q.logical_form = {LogicalForm::Kind::SameAttr, desc_set(da), desc_set(db),
                    cat, '>'};
  q.question_text = "Does the " + da.noun(false) + " have the same " + cat +
                    " as the " + db.noun(false) + "?";
  if (rng.coin()) {
    q.program_text = "a = " + desc_frag(da) + "\nb = " + desc_frag(db) +
                     "\n"
                     "fa = \"a?\"\n"
                     "fb = \"b?\"\n"
                     "for p in a:\n"
                     "  if p[1]:\n"
                     "    fa = query(\"what is the " +
                     cat +
                     "\", p[0])\n"
                     "for p in b:\n"
                     "  if p[1]:\n"
                     "    fb = query(\"what is the " +
                     cat +
                     "\", p[0])\n"
                     "return fa == fb";
  } else {
    q.program_text = "return " +
                     paren(desc_frag(da) + " & " +
                           paren(desc_frag(db) + " & " +
                                 score2("same " + cat))) +
                     ".exists()";
  }
  q.ground_truth = brute_force(q.logical_form, scene);
  return q;
}

std::optional<QuestionSpec> try_ref(const ground::Scene& scene, Rng& rng) {
  QuestionSpec q;
  q.category = Category::Ref;
  const int n = scene.size();
  const std::uint64_t variant = n >= 3 ? rng(3) : rng(2);
  if (variant < 2) {
    const int target = static_cast<int>(rng(n));
    int anchor = static_cast<int>(rng(n));
    if (anchor == target) anchor = (anchor + 1) % n;
    const std::string rel = true_relation(scene, target, anchor, rng);
    const Desc anchor_desc = unique_desc(scene, anchor, rng);
    const Desc target_desc =
        desc_from_object(scene.objects[target], random_mask(rng));
    q.logical_form = {LogicalForm::Kind::Ref,
                      and_expr(desc_set(target_desc),
                               relate_expr(rel, desc_set(anchor_desc))),
                      nullptr, "", '>'};
    if (unique_member(eval_set(*q.logical_form.a, scene)) != target)
      return std::nullopt;
    q.question_text = "Find the " + target_desc.noun(false) + " that is " +
                      relation_phrase(rel) + " the " +
                      anchor_desc.noun(false) + ".";
    const std::string body =
        desc_frag(target_desc) + " & " + relate_frag(anchor_desc, rel);
    q.program_text = variant == 0 ? "return " + body
                                  : "return " + paren(body) + ".iota()";
  } else {
    const int target = static_cast<int>(rng(n));
    int mid = static_cast<int>(rng(n));
    if (mid == target) mid = (mid + 1) % n;
    int anchor = static_cast<int>(rng(n));
    while (anchor == target || anchor == mid) anchor = (anchor + 1) % n;
    const std::string rel1 = true_relation(scene, target, mid, rng);
    const std::string rel2 = true_relation(scene, mid, anchor, rng);
    const Desc anchor_desc = unique_desc(scene, anchor, rng);
    const Desc mid_desc =
        desc_from_object(scene.objects[mid], random_mask(rng));
    const Desc target_desc =
        desc_from_object(scene.objects[target], random_mask(rng));
    const SetExprPtr mid_set = and_expr(
        desc_set(mid_desc), relate_expr(rel2, desc_set(anchor_desc)));
    if (unique_member(eval_set(*mid_set, scene)) != mid) return std::nullopt;
    q.logical_form = {
        LogicalForm::Kind::Ref,
        and_expr(desc_set(target_desc), relate_expr(rel1, mid_set)), nullptr,
        "", '>'};
    if (unique_member(eval_set(*q.logical_form.a, scene)) != target)
      return std::nullopt;
    q.question_text = "There is a " + mid_desc.noun(false) + " that is " +
                      relation_phrase(rel2) + " the " +
                      anchor_desc.noun(false) + "; find the " +
                      target_desc.noun(false) + " that is " +
                      relation_phrase(rel1) + " it.";
    q.program_text =
        "return " + desc_frag(target_desc) + " & (" +
        paren(desc_frag(mid_desc) + " & " + relate_frag(anchor_desc, rel2)) +
        " & " + score2(rel1) + ")";
  }
  q.ground_truth = brute_force(q.logical_form, scene);
  return q;
}

}  // namespace

QuestionSpec gen_question(Category category, const ground::Scene& scene,
                          std::uint64_t seed) {
  if (scene.size() < 2)
    throw Error("question generation needs at least two objects");
  Rng rng(seed);
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::optional<QuestionSpec> q;
    try {
      switch (category) {
        case Category::Exist:
          q = try_exist(scene, rng);
          break;
        case Category::Count:
          q = try_count(scene, rng);
          break;
        case Category::CompareNumber:
          q = try_compare_number(scene, rng);
          break;
        case Category::QueryAttribute:
          q = try_query_attribute(scene, rng);
          break;
        case Category::CompareAttribute:
          q = try_compare_attribute(scene, rng);
          break;
        case Category::Ref:
          q = try_ref(scene, rng);
          break;
      }
    } catch (const Error&) {
      continue;  // a degenerate draw counts as a rejected sample
    }
    if (!q) continue;
    lang::parse(q->program_text);
    return std::move(*q);
  }
  throw Error(std::string("could not satisfy a ") + category_name(category) +
              " template after 100 samples");
}

namespace {

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t x = a * 6364136223846793005ULL + b + 1442695040888963407ULL;
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  return x;
}

}  // namespace

std::vector<CorpusItem> gen_corpus(std::uint64_t seed, int num_scenes,
                                   int per_category) {
  if (num_scenes < 1) throw ConfigError("corpus needs at least one scene");
  if (per_category < 1)
    throw ConfigError("corpus needs at least one question per category");
  std::vector<CorpusItem> items;
  for (int i = 0; i < num_scenes; ++i) {
    const std::uint64_t scene_seed = mix(seed, static_cast<std::uint64_t>(i));
    const int n = 2 + static_cast<int>(scene_seed % 9);
    const ground::Scene scene = gen_scene(scene_seed, n);
    std::uint64_t cat_index = 0;
    for (Category category : all_categories()) {
      for (int k = 0; k < per_category; ++k) {
        std::uint64_t q_seed = mix(scene_seed, ++cat_index);
        for (int retry = 0;; ++retry, ++q_seed) {
          try {
            items.push_back({scene, gen_question(category, scene, q_seed)});
            break;
          } catch (const Error&) {
            if (retry >= 20) throw;
          }
        }
      }
    }
  }
  return items;
}

}  // namespace nept::harness
