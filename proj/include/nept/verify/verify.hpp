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

// Post-execution answer verification: confidence gating between the symbolic
// answer and a backbone prediction, and the pairwise-arbiter prompt.

#ifndef NEPT_VERIFY_VERIFY_HPP_
#define NEPT_VERIFY_VERIFY_HPP_

#include <string>
#include <vector>

namespace nept::verify {

/// Gating knobs. `tau_gate` is the confidence threshold in (0,1); `temp` is
/// the softmax temperature (> 0). Unrelated to the tensor-core smoothing tau.
struct GateParams {
  double tau_gate = 0.5;
  double temp = 1.0;

  /// Throws ConfigError unless tau_gate is in (0,1) and temp is positive.
  void validate() const;
};

/// Named per-backbone settings: "qwen2vl", "ovis", "internvl".
GateParams gate_preset(const std::string& name);
std::vector<std::string> gate_preset_names();

struct GateRecord {
  bool symbolic = true;  ///< true: keep the executor's answer.
  double max_prob = 0.0;
};

/// Softmaxes `scores / temp` and keeps the symbolic answer iff the peak
/// probability reaches tau_gate. Throws on an empty score vector.
GateRecord decide_gate(const std::vector<double>& scores, const GateParams& p);

struct GatedAnswer {
  std::string answer;
  GateRecord record;
};

/// decide_gate plus the answer selection.
GatedAnswer confidence_gate(const std::vector<double>& scores,
                            const std::string& symbolic_answer,
                            const std::string& backbone_answer,
                            const GateParams& p);

/// Two-entry score vector for gating a yes/no answer with confidence `score`.
std::vector<double> yes_no_scores(double score);

/// Renders the pairwise-arbiter prompt for `query`. Candidate "0" sits in the
/// red bounding box, candidate "1" in the green one. Throws on empty query.
std::string arbiter_prompt(const std::string& query);

struct ArbiterDecision {
  bool parsed = false;  ///< false: no verdict; keep the symbolic answer.
  int choice = -1;      ///< 0 or 1 when parsed.
};

/// Extracts the arbiter's verdict from free-form text: a leading "0" or "1",
/// tolerant of surrounding whitespace and punctuation.
ArbiterDecision arbiter_decide(const std::string& text);

}  // namespace nept::verify

#endif  // NEPT_VERIFY_VERIFY_HPP_
