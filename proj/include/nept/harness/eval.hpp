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

// Corpus evaluation: run every item's program, score exact-match / IoU
// accuracy, and optionally gate answers against a backbone prediction.

#ifndef NEPT_HARNESS_EVAL_HPP_
#define NEPT_HARNESS_EVAL_HPP_

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nept/exec/executor.hpp"
#include "nept/harness/gen.hpp"
#include "nept/verify/verify.hpp"

namespace nept::harness {

/// One record per line: {"scene": {...}} or {"scene_path": "..."} plus
/// category, question_text, program, ground_truth. Output is byte-stable for
/// a given corpus.
std::string corpus_to_jsonl(const std::vector<CorpusItem>& items);
/// `base_dir` resolves relative scene_path entries.
std::vector<CorpusItem> corpus_from_jsonl(const std::string& text,
                                          const std::string& base_dir = ".");
void save_corpus(const std::vector<CorpusItem>& items,
                 const std::string& path);
std::vector<CorpusItem> load_corpus(const std::string& path);

struct EvalOptions {
  enum class GrounderKind { Oracle, Geometric, Remote };

  GrounderKind grounder = GrounderKind::Oracle;
  std::string endpoint;  ///< Remote only.
  exec::ExecOptions exec;  ///< task is overridden per item category.
  int jobs = 1;
  /// Present: gate yes/no and object-reference answers, falling back to
  /// `backbone` when the executor's confidence misses the threshold.
  std::optional<verify::GateParams> gate;
  /// Stand-in backbone prediction; defaults to `default_backbone`.
  std::function<std::string(const CorpusItem&)> backbone;
  /// Optional second opinion, consulted only after the gate routes an item
  /// to the backbone. Receives the item plus both candidate answers and
  /// returns 0 to restore the symbolic answer, 1 to keep the backbone's;
  /// any other value keeps the backbone's.
  std::function<int(const CorpusItem&, const std::string& symbolic,
                    const std::string& backbone)>
      arbiter;
};

/// Fixed naive guesser: "no" / "0" / "" / object 0 by category.
std::string default_backbone(const CorpusItem& item);

/// Canonical comparison string for an executor answer ("yes", "2", "red",
/// an object id, or "no objects").
std::string canonical_answer(const exec::Answer& a);

struct ItemResult {
  bool executed = false;
  bool correct = false;           ///< final answer (post-gate when gated)
  bool correct_symbolic = false;  ///< executor answer alone
  std::string answer;
  std::string symbolic_answer;
  std::string error;
  int grounder_calls = 0;
  bool gated = false;
  bool kept_symbolic = true;
  double max_prob = 0.0;
  int arbiter_choice = -2;  ///< -2 not consulted, else the arbiter's verdict
};

struct CategoryStats {
  int total = 0;
  int executed = 0;
  int correct = 0;
};

struct Metrics {
  int total = 0;
  int executed = 0;
  int correct = 0;
  int correct_symbolic = 0;
  int gated = 0;
  int kept_symbolic = 0;
  int arbitrated = 0;
  int arbiter_restored = 0;  ///< arbiter verdicts that re-chose the executor
  bool verified = false;
  double mean_grounder_calls = 0.0;
  double wall_seconds = 0.0;
  std::map<std::string, CategoryStats> per_category;
  std::vector<ItemResult> items;

  // All percentages in [0, 100].
  double accuracy() const;
  double pre_accuracy() const;
  double execution_rate() const;
  /// Share of items whose final answer came from the executor.
  double symbolic_share() const;
};

/// Runs every item (fanning out over `jobs` workers) and aggregates. Item
/// failures are recorded, never thrown. Ref items run as reg and score by
/// IoU >= 0.5 against the ground-truth box; everything else is exact match.
Metrics evaluate(const std::vector<CorpusItem>& corpus,
                 const EvalOptions& opts);

std::string metrics_json(const Metrics& m);
std::string metrics_table(const Metrics& m);

}  // namespace nept::harness

#endif  // NEPT_HARNESS_EVAL_HPP_
