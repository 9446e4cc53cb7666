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

#include "nept/ground/wire.hpp"

#include <thread>
#include <utility>

#include "httplib.h"
#include "json.hpp"
#include "nept/error.hpp"

namespace nept::ground {

using nlohmann::json;

std::string wire_request_to_json(const WireRequest& req) {
  json doc;
  doc["kind"] = req.kind;
  doc["image_ref"] = req.image_ref;
  if (req.kind == "score" || req.kind == "query")
    doc["question"] = req.question;
  if (req.kind == "score") doc["num_objects"] = req.num_objects;
  if (!req.target_pairs.empty()) {
    json t = json::array();
    for (const auto& [p, s] : req.target_pairs) t.push_back({p, s});
    doc["targets"] = std::move(t);
  } else if (!req.target_ids.empty()) {
    doc["targets"] = req.target_ids;
  }
  if (!req.names.empty()) doc["names"] = req.names;
  return doc.dump();
}

WireRequest wire_request_from_json(const std::string& body) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::exception& e) {
    throw GroundError(std::string("wire: invalid request JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("kind") || !doc["kind"].is_string())
    throw GroundError("wire: request must carry a string 'kind'");
  WireRequest req;
  req.kind = doc["kind"].get<std::string>();
  if (req.kind != "score" && req.kind != "query" && req.kind != "detect")
    throw GroundError("wire: unknown request kind '" + req.kind + "'");
  if (doc.contains("image_ref") && doc["image_ref"].is_string())
    req.image_ref = doc["image_ref"].get<std::string>();
  if (doc.contains("question")) {
    if (!doc["question"].is_string())
      throw GroundError("wire: 'question' must be a string");
    req.question = doc["question"].get<std::string>();
  }
  if (doc.contains("num_objects")) {
    if (!doc["num_objects"].is_number_integer())
      throw GroundError("wire: 'num_objects' must be an integer");
    req.num_objects = doc["num_objects"].get<int>();
  }
  if (doc.contains("targets")) {
    const json& t = doc["targets"];
    if (!t.is_array()) throw GroundError("wire: 'targets' must be an array");
    for (const json& e : t) {
      if (e.is_number_integer()) {
        req.target_ids.push_back(e.get<int>());
      } else if (e.is_array() && e.size() == 2 && e[0].is_number_integer() &&
                 e[1].is_number_integer()) {
        req.target_pairs.emplace_back(e[0].get<int>(), e[1].get<int>());
      } else {
        throw GroundError("wire: targets must be ids or [primary, secondary]" +
                          std::string(" pairs"));
      }
    }
  }
  if (doc.contains("names")) {
    if (!doc["names"].is_array())
      throw GroundError("wire: 'names' must be an array");
    for (const json& n : doc["names"]) {
      if (!n.is_string()) throw GroundError("wire: names must be strings");
      req.names.push_back(n.get<std::string>());
    }
  }
  return req;
}

std::string wire_response_to_json(const WireResponse& res) {
  json doc;
  if (res.error) {
    doc["error"] = *res.error;
  } else if (res.scores) {
    if (res.score_rows > 0) {
      json rows = json::array();
      for (int r = 0; r < res.score_rows; ++r) {
        json row = json::array();
        for (int c = 0; c < res.score_cols; ++c)
          row.push_back(
              (*res.scores)[static_cast<std::size_t>(r) * res.score_cols + c]);
        rows.push_back(std::move(row));
      }
      doc["scores"] = std::move(rows);
    } else {
      doc["scores"] = *res.scores;
    }
  } else if (res.logits) {
    json pairs = json::array();
    for (const auto& [ly, ln] : *res.logits) pairs.push_back({ly, ln});
    doc["logits"] = std::move(pairs);
  } else if (res.text) {
    doc["text"] = *res.text;
  } else if (res.boxes) {
    json boxes = json::array();
    for (const Box& b : *res.boxes) boxes.push_back({b.x, b.y, b.w, b.h});
    doc["boxes"] = std::move(boxes);
  } else {
    throw GroundError("wire: empty response");
  }
  return doc.dump();
}

WireResponse wire_response_from_json(const std::string& body) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::exception& e) {
    throw GroundError(std::string("wire: malformed response: ") + e.what());
  }
  if (!doc.is_object())
    throw GroundError("wire: malformed response: not an object");
  WireResponse res;
  if (doc.contains("error")) {
    if (!doc["error"].is_string())
      throw GroundError("wire: malformed response: 'error' must be a string");
    res.error = doc["error"].get<std::string>();
    return res;
  }
  if (doc.contains("scores")) {
    const json& s = doc["scores"];
    std::vector<double> values;
    if (s.is_number()) {
      values.push_back(s.get<double>());
    } else if (s.is_array() && (s.empty() || s[0].is_number())) {
      for (const json& v : s) {
        if (!v.is_number())
          throw GroundError("wire: malformed response: mixed score array");
        values.push_back(v.get<double>());
      }
    } else if (s.is_array()) {
      res.score_rows = static_cast<int>(s.size());
      res.score_cols = -1;
      for (const json& row : s) {
        if (!row.is_array())
          throw GroundError("wire: malformed response: mixed score array");
        if (res.score_cols < 0) res.score_cols = static_cast<int>(row.size());
        if (static_cast<int>(row.size()) != res.score_cols)
          throw GroundError(
              "wire: malformed response: ragged score matrix");
        for (const json& v : row) {
          if (!v.is_number())
            throw GroundError("wire: malformed response: mixed score array");
          values.push_back(v.get<double>());
        }
      }
    } else {
      throw GroundError("wire: malformed response: bad 'scores'");
    }
    res.scores = std::move(values);
    return res;
  }
  if (doc.contains("logits")) {
    const json& l = doc["logits"];
    if (!l.is_array())
      throw GroundError("wire: malformed response: 'logits' must be pairs");
    std::vector<std::pair<double, double>> pairs;
    for (const json& p : l) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() ||
          !p[1].is_number())
        throw GroundError("wire: malformed response: 'logits' must be pairs");
      pairs.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
    res.logits = std::move(pairs);
    return res;
  }
  if (doc.contains("text")) {
    if (!doc["text"].is_string())
      throw GroundError("wire: malformed response: 'text' must be a string");
    res.text = doc["text"].get<std::string>();
    return res;
  }
  if (doc.contains("boxes")) {
    const json& bs = doc["boxes"];
    if (!bs.is_array())
      throw GroundError("wire: malformed response: 'boxes' must be an array");
    std::vector<Box> boxes;
    for (const json& b : bs) {
      if (!b.is_array() || b.size() != 4)
        throw GroundError("wire: malformed response: box must be [x,y,w,h]");
      boxes.push_back(Box{b[0].get<double>(), b[1].get<double>(),
                          b[2].get<double>(), b[3].get<double>()});
    }
    res.boxes = std::move(boxes);
    return res;
  }
  throw GroundError(
      "wire: malformed response: expected scores, logits, text, or boxes");
}

WireService::WireService(Grounder& grounder, Scene scene)
    : grounder_(grounder), scene_(std::move(scene)) {}

std::string WireService::handle(const std::string& body) const {
  WireResponse res;
  try {
    const WireRequest req = wire_request_from_json(body);
    if (req.kind == "score") {
      res.scores = grounder_.score(req.question, req.num_objects);
    } else if (req.kind == "query") {
      if (req.target_ids.size() != 1)
        throw GroundError("wire: query needs exactly one target id");
      res.text = grounder_.query(req.question, req.target_ids[0]);
    } else {
      std::vector<Box> boxes;
      for (int id : propose_objects(scene_, req.names))
        boxes.push_back(scene_.objects[static_cast<std::size_t>(id)].box);
      res.boxes = std::move(boxes);
    }
  } catch (const Error& e) {
    res = WireResponse{};
    res.error = e.what();
  }
  return wire_response_to_json(res);
}

struct WireServer::Impl {
  WireService service;
  httplib::Server server;
  std::thread thread;

  Impl(Grounder& g, Scene scene) : service(g, std::move(scene)) {}
};

WireServer::WireServer(Grounder& grounder, Scene scene)
    : impl_(std::make_unique<Impl>(grounder, std::move(scene))) {}

WireServer::~WireServer() { stop(); }

int WireServer::start(const std::string& host, int port) {
  Impl& im = *impl_;
  im.server.Post("/ground", [&im](const httplib::Request& req,
                                  httplib::Response& res) {
    const std::string body = im.service.handle(req.body);
    res.status = body.rfind("{\"error\"", 0) == 0 ? 400 : 200;
    res.set_content(body, "application/json");
  });
  int bound = port;
  if (port == 0) {
    bound = im.server.bind_to_any_port(host);
    if (bound <= 0) throw GroundError("wire: cannot bind server port");
  } else if (!im.server.bind_to_port(host, port)) {
    throw GroundError("wire: cannot bind server port " + std::to_string(port));
  }
  im.thread = std::thread([&im] { im.server.listen_after_bind(); });
  im.server.wait_until_ready();
  return bound;
}

void WireServer::wait() {
  if (impl_->thread.joinable()) impl_->thread.join();
}

void WireServer::stop() {
  if (impl_->server.is_running()) impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace nept::ground
