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

// Desk-scale benchmark generator: random scenes plus (question, program,
// ground truth) triples with an exhaustive crisp oracle.

#ifndef NEPT_HARNESS_GEN_HPP_
#define NEPT_HARNESS_GEN_HPP_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "nept/ground/scene.hpp"

namespace nept::harness {

/// Deterministic random scene: `n_objects` in [2,10] with disjoint boxes on a
/// 480x320 canvas, distinct attribute tuples, distinct centers and depths,
/// and every true left/right/front/behind pair stored as a relation.
ground::Scene gen_scene(std::uint64_t seed, int n_objects);

enum class Category {
  Exist,
  Count,
  CompareNumber,
  QueryAttribute,
  CompareAttribute,
  Ref,
};

const char* category_name(Category c);
Category category_from_name(const std::string& name);
std::vector<Category> all_categories();

/// Crisp object-set expression: which objects satisfy a description.
struct SetExpr;
using SetExprPtr = std::shared_ptr<const SetExpr>;

struct SetExpr {
  enum class Kind { Token, And, Or, Not, Relate };

  Kind kind = Kind::Token;
  std::string token;  ///< Token: attribute/class; Relate: relation predicate.
  SetExprPtr a;       ///< And/Or lhs; Not operand; Relate anchor set.
  SetExprPtr b;       ///< And/Or rhs.
};

SetExprPtr token_expr(std::string token);
SetExprPtr and_expr(SetExprPtr a, SetExprPtr b);
SetExprPtr or_expr(SetExprPtr a, SetExprPtr b);
SetExprPtr not_expr(SetExprPtr a);
/// Objects related to at least one member of `anchor` by `relation`.
SetExprPtr relate_expr(std::string relation, SetExprPtr anchor);

/// Per-object membership of `e` over the scene.
std::vector<bool> eval_set(const SetExpr& e, const ground::Scene& scene);

/// Question-level logical form over one or two object sets.
struct LogicalForm {
  enum class Kind {
    Exists,         ///< some object satisfies `a`
    ForallImplies,  ///< every `a` object also satisfies `b`
    Count,          ///< |a|
    CompareCount,   ///< |a| cmp |b| with cmp in {'>', '<', '='}
    QueryAttr,      ///< `category` value of the unique `a` object
    SameAttr,       ///< unique `a` and unique `b` share `category`
    Ref,            ///< id of the unique `a` object
  };

  Kind kind = Kind::Exists;
  SetExprPtr a;
  SetExprPtr b;
  std::string category;
  char cmp = '>';
};

/// Exhaustive crisp evaluation; answers use the same canonical strings the
/// evaluator compares against ("yes"/"no", a decimal count, an attribute
/// token, or an object id). A universally quantified form over an empty
/// restriction is vacuously true. Throws on unknown predicates and on
/// QueryAttr/SameAttr/Ref sets that do not pin down exactly one object.
std::string brute_force(const LogicalForm& form, const ground::Scene& scene);

struct QuestionSpec {
  Category category = Category::Exist;
  LogicalForm logical_form;
  std::string question_text;
  std::string program_text;
  std::string ground_truth;
};

/// Samples a question of `category` about `scene`. Deterministic from seed.
/// Throws after 100 rejected samples if the template cannot be satisfied.
QuestionSpec gen_question(Category category, const ground::Scene& scene,
                          std::uint64_t seed);

struct CorpusItem {
  ground::Scene scene;
  QuestionSpec spec;
};

/// `per_category` questions per category for each of `num_scenes` random
/// scenes. Deterministic from seed.
std::vector<CorpusItem> gen_corpus(std::uint64_t seed, int num_scenes,
                                   int per_category = 1);

}  // namespace nept::harness

#endif  // NEPT_HARNESS_GEN_HPP_
