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

#include "nept/verify/verify.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "nept/error.hpp"
#include "nept/soft/ops.hpp"

namespace nept::verify {

namespace {

constexpr const char* kArbiterTemplate =
    "You're an image analyst designed to check if the highlighted objects in "
    "the image meets the query description, and which one is more likely to "
    "meet the query description.\n"
    "\n"
    "The query is: \"{query}\"\n"
    "\n"
    "Please check the highlighted object \"0\" [in the red bounding box] and "
    "\"1\" [in the green bounding box] in the image and answer the question: "
    "Which object is more likely to meet the query description? Your answer "
    "should be \"0\", \"1\". Answer with one word or phrase.";

}  // namespace

void GateParams::validate() const {
  if (!(tau_gate > 0.0) || !(tau_gate < 1.0))
    throw ConfigError("gate threshold must lie strictly between 0 and 1");
  if (!(temp > 0.0) || !std::isfinite(temp))
    throw ConfigError("gate temperature must be positive");
}

GateParams gate_preset(const std::string& name) {
  if (name == "qwen2vl") return {0.70, 0.40};
  if (name == "ovis") return {0.30, 0.10};
  if (name == "internvl") return {0.60, 0.50};
  std::string known;
  for (const std::string& n : gate_preset_names()) {
    if (!known.empty()) known += ", ";
    known += n;
  }
  throw ConfigError("unknown gate preset '" + name + "' (known: " + known +
                    ")");
}

std::vector<std::string> gate_preset_names() {
  return {"qwen2vl", "ovis", "internvl"};
}

GateRecord decide_gate(const std::vector<double>& scores,
                       const GateParams& p) {
  p.validate();
  if (scores.empty())
    throw ConfigError("confidence gate needs at least one score");
  const std::vector<double> probs = soft::softmax(scores, p.temp);
  const double max_prob = *std::max_element(probs.begin(), probs.end());
  return {max_prob >= p.tau_gate, max_prob};
}

GatedAnswer confidence_gate(const std::vector<double>& scores,
                            const std::string& symbolic_answer,
                            const std::string& backbone_answer,
                            const GateParams& p) {
  const GateRecord record = decide_gate(scores, p);
  return {record.symbolic ? symbolic_answer : backbone_answer, record};
}

std::vector<double> yes_no_scores(double score) {
  return {score, 1.0 - score};
}

std::string arbiter_prompt(const std::string& query) {
  if (query.empty()) throw ConfigError("arbiter prompt needs a query");
  std::string prompt = kArbiterTemplate;
  const std::string placeholder = "{query}";
  prompt.replace(prompt.find(placeholder), placeholder.size(), query);
  return prompt;
}

ArbiterDecision arbiter_decide(const std::string& text) {
  std::size_t i = 0;
  while (i < text.size() && !std::isalnum(static_cast<unsigned char>(text[i])))
    ++i;
  if (i == text.size()) return {};
  const char c = text[i];
  if (c != '0' && c != '1') return {};
  if (i + 1 < text.size() &&
      std::isalnum(static_cast<unsigned char>(text[i + 1])))
    return {};
  return {true, c - '0'};
}

}  // namespace nept::verify
