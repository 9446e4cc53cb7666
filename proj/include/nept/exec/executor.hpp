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

#ifndef NEPT_EXEC_EXECUTOR_HPP_
#define NEPT_EXEC_EXECUTOR_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nept/error.hpp"
#include "nept/ground/grounder.hpp"
#include "nept/lang/ast.hpp"
#include "nept/soft/value.hpp"

namespace nept::exec {

/// Runtime failure inside a program: unbound name, flavor/shape mismatch,
/// exhausted budget, missing return. span() locates the offending
/// expression or statement in the program source (empty when the failure is
/// not tied to a site).
class ExecError : public Error {
 public:
  explicit ExecError(const std::string& message, lang::Span span = {})
      : Error(message), span_(span) {}

  const lang::Span& span() const { return span_; }

 private:
  lang::Span span_;
};

struct ExecOptions {
  enum class Task { Vqa, Reg };

  Task task = Task::Vqa;
  /// Record adjoints of the answer score with respect to every score() call.
  bool gradients = false;
  /// Row-independent reading of vector-by-matrix conjunction.
  bool relate_literal = false;
  soft::SmoothingParams smoothing;
  long long step_budget = 100000;
  long long call_budget = 1000;
};

/// One grounder invocation, in call order.
struct TraceEntry {
  std::string kind;      // "score" or "query"
  std::string question;
  int num_objects = -1;  // score arity; -1 for query
  int object_id = -1;    // query target; -1 for score
  std::string shape;     // "scalar", "vector(N)", "matrix(N)", or "text"
};

struct Answer {
  enum class Kind { YesNo, Count, Text, ObjectRef, NoObjects };

  Kind kind = Kind::NoObjects;
  bool yes = false;
  long long count = 0;
  std::string text;
  int object_id = -1;
  /// ObjectRef only: the returned score vector and its softmax.
  std::vector<double> scores;
  std::vector<double> distribution;
  /// YesNo: the raw score in [0, 1]; Count: the raw soft count.
  double raw = 0.0;
};

/// "yes (score=0.750)", "2 (count=1.800)", "object 1", a text answer, or
/// "no objects".
std::string answer_to_string(const Answer& a);

struct Outcome {
  Answer answer;
  std::vector<TraceEntry> trace;
  /// Adjoints of the final answer score per score() call, keyed by trace
  /// index. Present only when ExecOptions::gradients is set and the answer
  /// path is differentiable (ends in a soft value).
  std::optional<std::map<std::size_t, std::vector<double>>> gradients;
};

/// Interprets a parsed program over a grounder. Statements run in order
/// until a return; the returned value is finalized per task. Each run owns
/// a fresh tape and environment, so concurrent runs are safe whenever the
/// grounder is shareable.
Outcome run(const lang::Program& program, ground::Grounder& grounder,
            const ExecOptions& opts = {});

}  // namespace nept::exec

#endif  // NEPT_EXEC_EXECUTOR_HPP_
