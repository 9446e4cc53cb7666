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

#include "nept/ground/remote.hpp"

#include <cmath>
#include <sstream>

#include "httplib.h"
#include "nept/error.hpp"

namespace nept::ground {

double normalize_logits(double logit_yes, double logit_no) {
  if (!std::isfinite(logit_yes) || !std::isfinite(logit_no))
    throw GroundError("normalize_logits: logits must be finite");
  const double m = std::max(logit_yes, logit_no);
  const double ey = std::exp(logit_yes - m);
  const double en = std::exp(logit_no - m);
  return ey / (ey + en);
}

namespace {

void parse_endpoint(const std::string& endpoint, std::string& host,
                    int& port) {
  std::string rest = endpoint;
  const std::string scheme = "http://";
  if (rest.rfind(scheme, 0) == 0) rest = rest.substr(scheme.size());
  if (!rest.empty() && rest.back() == '/') rest.pop_back();
  const std::size_t colon = rest.rfind(':');
  if (colon == std::string::npos || colon + 1 >= rest.size())
    throw ConfigError("endpoint must be host:port, got '" + endpoint + "'");
  host = rest.substr(0, colon);
  try {
    port = std::stoi(rest.substr(colon + 1));
  } catch (const std::exception&) {
    port = -1;
  }
  if (host.empty() || port <= 0 || port > 65535)
    throw ConfigError("endpoint must be host:port, got '" + endpoint + "'");
}

std::string cache_key(const WireRequest& req) {
  std::ostringstream key;
  key << req.kind << '\x1f' << req.image_ref << '\x1f' << req.question
      << '\x1f' << req.num_objects << '\x1f';
  for (int id : req.target_ids) key << id << ',';
  for (const auto& [p, s] : req.target_pairs) key << p << ':' << s << ',';
  key << '\x1f';
  for (const std::string& n : req.names) key << n << ',';
  return key.str();
}

}  // namespace

RemoteGrounder::RemoteGrounder(std::string endpoint, RemoteOptions opts)
    : opts_(opts),
      inflight_(std::max<std::ptrdiff_t>(1, opts.max_inflight)) {
  if (opts.max_inflight < 1)
    throw ConfigError("max_inflight must be at least 1");
  if (opts.retries < 0) throw ConfigError("retries must be >= 0");
  if (!(opts.timeout_seconds > 0.0))
    throw ConfigError("timeout_seconds must be > 0");
  parse_endpoint(endpoint, host_, port_);
}

void RemoteGrounder::bind_scene(const std::string& image_ref, std::size_t n) {
  image_ref_ = image_ref;
  n_ = n;
}

Scene RemoteGrounder::detect(const std::vector<std::string>& names) {
  if (names.empty()) throw GroundError("detect: names must be non-empty");
  WireRequest req;
  req.kind = "detect";
  req.image_ref = image_ref_;
  req.names = names;
  const CachedResponse res = fetch(req);
  Scene scene;
  scene.image_ref = image_ref_;
  int id = 0;
  for (const Box& b : res.boxes) {
    SceneObject o;
    o.id = id++;
    o.box = b;
    o.depth = std::nan("");
    scene.objects.push_back(std::move(o));
  }
  scene.validate();
  n_ = scene.size();
  return scene;
}

std::vector<double> RemoteGrounder::score(const std::string& question,
                                          int num_objects) {
  if (num_objects < 0 || num_objects > 2)
    throw GroundError("num_objects must be 0, 1, or 2");
  if (num_objects > 0 && n_ == 0)
    throw GroundError("remote grounder is not bound to any objects");
  WireRequest req;
  req.kind = "score";
  req.image_ref = image_ref_;
  req.question = question;
  req.num_objects = num_objects;
  const int n = static_cast<int>(n_);
  if (num_objects == 1) {
    for (int i = 0; i < n; ++i) req.target_ids.push_back(i);
  } else if (num_objects == 2) {
    for (int p = 0; p < n; ++p)
      for (int s = 0; s < n; ++s)
        if (p != s) req.target_pairs.emplace_back(p, s);
  }
  return fetch(req).scores;
}

std::string RemoteGrounder::query(const std::string& question, int object_id) {
  if (object_id < 0 || object_id >= static_cast<int>(n_))
    throw GroundError("query: object id " + std::to_string(object_id) +
                      " out of range");
  WireRequest req;
  req.kind = "query";
  req.image_ref = image_ref_;
  req.question = question;
  req.target_ids.push_back(object_id);
  return fetch(req).text;
}

RemoteGrounder::CachedResponse RemoteGrounder::fetch(const WireRequest& req) {
  const std::string key = cache_key(req);
  std::shared_future<CachedResponse> fut;
  std::promise<CachedResponse> prom;
  bool owner = false;
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(key);
    if (it != cache_.end()) {
      fut = it->second;
    } else {
      fut = prom.get_future().share();
      cache_.emplace(key, fut);
      owner = true;
    }
  }
  if (!owner) return fut.get();
  try {
    CachedResponse res = perform(req);
    prom.set_value(res);
    return res;
  } catch (...) {
    {
      std::lock_guard<std::mutex> lock(mu_);
      cache_.erase(key);
    }
    prom.set_exception(std::current_exception());
    throw;
  }
}

RemoteGrounder::CachedResponse RemoteGrounder::perform(
    const WireRequest& req) {
  const std::string body = wire_request_to_json(req);
  const auto seconds = static_cast<time_t>(opts_.timeout_seconds);
  const auto micros = static_cast<time_t>(
      (opts_.timeout_seconds - static_cast<double>(seconds)) * 1e6);
  std::string last_error = "transport failure";
  for (int attempt = 0; attempt <= opts_.retries; ++attempt) {
    network_calls_.fetch_add(1);
    inflight_.acquire();
    httplib::Client client(host_, port_);
    client.set_connection_timeout(seconds, micros);
    client.set_read_timeout(seconds, micros);
    client.set_write_timeout(seconds, micros);
    httplib::Result result =
        client.Post("/ground", body, "application/json");
    inflight_.release();
    if (!result) {
      last_error = "transport failure (" + to_string(result.error()) + ")";
      continue;
    }
    if (result->status >= 500) {
      last_error = "server error (status " + std::to_string(result->status) +
                   ")";
      continue;
    }
    return parse_response(req, result->body);
  }
  throw GroundError("grounding request failed after " +
                    std::to_string(opts_.retries + 1) + " attempts: " +
                    last_error);
}

RemoteGrounder::CachedResponse RemoteGrounder::parse_response(
    const WireRequest& req, const std::string& body) const {
  const WireResponse res = wire_response_from_json(body);
  if (res.error)
    throw GroundError("grounding endpoint error: " + *res.error);
  CachedResponse out;
  if (req.kind == "query") {
    if (!res.text)
      throw GroundError("wire: malformed response: expected text");
    out.text = *res.text;
    return out;
  }
  if (req.kind == "detect") {
    if (!res.boxes)
      throw GroundError("wire: malformed response: expected boxes");
    out.boxes = *res.boxes;
    return out;
  }

  std::vector<double> scores;
  int rows = 0;
  int cols = 0;
  if (res.scores) {
    scores = *res.scores;
    rows = res.score_rows;
    cols = res.score_cols;
  } else if (res.logits) {
    for (const auto& [ly, ln] : *res.logits)
      scores.push_back(normalize_logits(ly, ln));
  } else {
    throw GroundError("wire: malformed response: expected scores or logits");
  }
  for (double s : scores)
    if (!(s >= 0.0 && s <= 1.0))
      throw GroundError("wire: score out of range [0, 1]");

  const std::size_t n = n_;
  if (req.num_objects == 0) {
    if (rows != 0 || scores.size() != 1)
      throw GroundError("wire: malformed response: expected one score");
    out.scores = std::move(scores);
    return out;
  }
  if (req.num_objects == 1) {
    if (rows != 0 || scores.size() != n)
      throw GroundError("wire: malformed response: expected " +
                        std::to_string(n) + " scores");
    out.scores = std::move(scores);
    return out;
  }
  // num_objects == 2: accept the targets' off-diagonal list, a flat N*N
  // list, or an N x N nested matrix.
  out.scores.assign(n * n, 0.0);
  if (rows == 0 && scores.size() == req.target_pairs.size()) {
    for (std::size_t k = 0; k < scores.size(); ++k) {
      const auto& [p, s] = req.target_pairs[k];
      out.scores[static_cast<std::size_t>(p) * n + s] = scores[k];
    }
    return out;
  }
  if ((rows == 0 && scores.size() == n * n) ||
      (rows == static_cast<int>(n) && cols == static_cast<int>(n))) {
    out.scores = std::move(scores);
    return out;
  }
  throw GroundError("wire: malformed response: expected " +
                    std::to_string(n) + "x" + std::to_string(n) +
                    " pair scores");
}

}  // namespace nept::ground
