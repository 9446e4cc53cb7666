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

#ifndef NEPT_GROUND_WIRE_HPP_
#define NEPT_GROUND_WIRE_HPP_

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nept/ground/grounder.hpp"
#include "nept/ground/scene.hpp"

namespace nept::ground {

/// Box-highlight roles used when prompting about object pairs: the primary
/// object is outlined red, the secondary green.
inline constexpr const char* kPrimaryBoxColor = "red";
inline constexpr const char* kSecondaryBoxColor = "green";

/// One request over the wire. JSON body:
///   {"kind": "score"|"query"|"detect", "image_ref": "...",
///    "question"?: "...", "num_objects"?: 0|1|2,
///    "targets"?: [id, ...] | [[primary, secondary], ...],
///    "names"?: ["...", ...]}
/// score sends the candidate ids (num_objects=1) or every ordered pair off
/// the diagonal (num_objects=2); query sends the one target id.
struct WireRequest {
  std::string kind;
  std::string image_ref;
  std::string question;
  int num_objects = 0;
  std::vector<int> target_ids;
  std::vector<std::pair<int, int>> target_pairs;
  std::vector<std::string> names;
};

std::string wire_request_to_json(const WireRequest& req);
WireRequest wire_request_from_json(const std::string& body);

/// One response. JSON body is exactly one of:
///   {"scores": number | [s, ...] | [[s, ...], ...]}
///   {"logits": [[logit_yes, logit_no], ...]}
///   {"text": "..."}
///   {"boxes": [[x, y, w, h], ...]}
///   {"error": "..."}
/// Nested score arrays must be rectangular; score_rows/score_cols record
/// their shape (0 when the payload was flat).
struct WireResponse {
  std::optional<std::vector<double>> scores;
  int score_rows = 0;
  int score_cols = 0;
  std::optional<std::vector<std::pair<double, double>>> logits;
  std::optional<std::string> text;
  std::optional<std::vector<Box>> boxes;
  std::optional<std::string> error;
};

std::string wire_response_to_json(const WireResponse& res);
WireResponse wire_response_from_json(const std::string& body);

/// Serves a grounder and its scene over the wire protocol. handle() is the
/// transport-free core: JSON request in, JSON response out (errors become
/// {"error": ...} rather than throwing).
class WireService {
 public:
  WireService(Grounder& grounder, Scene scene);

  std::string handle(const std::string& body) const;

  const Scene& scene() const { return scene_; }

 private:
  Grounder& grounder_;
  Scene scene_;
};

/// HTTP wrapper around WireService: POST /ground on a background thread.
class WireServer {
 public:
  WireServer(Grounder& grounder, Scene scene);
  ~WireServer();

  /// Binds and starts serving; port 0 picks a free port. Returns the bound
  /// port.
  int start(const std::string& host = "127.0.0.1", int port = 0);
  /// Blocks until stop() is called from another thread.
  void wait();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace nept::ground

#endif  // NEPT_GROUND_WIRE_HPP_
