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

#ifndef NEPT_GROUND_REMOTE_HPP_
#define NEPT_GROUND_REMOTE_HPP_

#include <atomic>
#include <cstddef>
#include <future>
#include <mutex>
#include <semaphore>
#include <string>
#include <unordered_map>
#include <vector>

#include "nept/ground/grounder.hpp"
#include "nept/ground/scene.hpp"
#include "nept/ground/wire.hpp"

namespace nept::ground {

/// Two-way softmax of (logit_yes, logit_no): exp(ly) / (exp(ly) + exp(ln)),
/// computed stably (max subtracted first). Errors on non-finite logits.
double normalize_logits(double logit_yes, double logit_no);

struct RemoteOptions {
  double timeout_seconds = 30.0;
  /// Additional attempts after the first on transport failure or 5xx.
  int retries = 2;
  /// Maximum concurrent in-flight requests.
  int max_inflight = 4;
};

/// Wire-protocol client. Yes/no logits from the server are normalized here,
/// so the executor only ever sees probabilities. Responses are cached by
/// (image_ref, question, num_objects, targets); identical concurrent
/// requests share a single network call.
class RemoteGrounder : public Grounder {
 public:
  /// endpoint: "host:port" or "http://host:port".
  explicit RemoteGrounder(std::string endpoint, RemoteOptions opts = {});

  /// Associates subsequent score/query calls with an image and object count.
  void bind_scene(const std::string& image_ref, std::size_t n);
  /// Remote object proposal: returns a scene of detected boxes (unknown
  /// class/attributes) and binds to it.
  Scene detect(const std::vector<std::string>& names);

  std::size_t num_objects() const override { return n_; }
  std::vector<double> score(const std::string& question,
                            int num_objects) override;
  std::string query(const std::string& question, int object_id) override;

  /// HTTP attempts issued so far (cache hits issue none).
  std::size_t network_calls() const { return network_calls_.load(); }

 private:
  struct CachedResponse {
    std::vector<double> scores;
    std::string text;
    std::vector<Box> boxes;
  };

  CachedResponse fetch(const WireRequest& req);
  CachedResponse perform(const WireRequest& req);
  CachedResponse parse_response(const WireRequest& req,
                                const std::string& body) const;

  std::string host_;
  int port_ = 0;
  RemoteOptions opts_;
  std::string image_ref_;
  std::size_t n_ = 0;

  std::mutex mu_;
  std::unordered_map<std::string, std::shared_future<CachedResponse>> cache_;
  std::counting_semaphore<> inflight_;
  std::atomic<std::size_t> network_calls_{0};
};

}  // namespace nept::ground

#endif  // NEPT_GROUND_REMOTE_HPP_
