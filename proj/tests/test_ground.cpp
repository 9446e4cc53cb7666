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

#include <atomic>
#include <chrono>
#include <cmath>
#include <random>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "nept/error.hpp"
#include "nept/ground/grounder.hpp"
#include "nept/ground/oracle.hpp"
#include "nept/ground/remote.hpp"
#include "nept/ground/scene.hpp"
#include "nept/ground/wire.hpp"
#include "support/ref_math.hpp"

namespace {

using namespace nept;
using namespace nept::ground;

Scene desk_scene() {
  return scene_from_json_text(R"({
    "objects": [
      {"id": 0, "box": [10, 20, 40, 40], "depth": 3.0, "class": "cube",
       "attributes": ["blue", "small", "metal"]},
      {"id": 1, "box": [100, 30, 50, 60], "depth": 7.0, "class": "sphere",
       "attributes": ["blue", "large", "rubber"]},
      {"id": 2, "box": [200, 40, 30, 30], "depth": 5.0, "class": "sphere",
       "attributes": ["red", "small", "metal"]}
    ],
    "relations": [[0, "behind", 1], [2, "behind", 1], [0, "behind", 2]],
    "image_ref": "desk-001"
  })");
}

TEST_SUITE("ground.scene") {
  TEST_CASE("json round trip preserves the scene") {
    const Scene a = desk_scene();
    const Scene b = scene_from_json_text(scene_to_json_text(a));
    CHECK(b.size() == 3);
    CHECK(b.image_ref == "desk-001");
    CHECK(b.objects[1].cls == "sphere");
    CHECK(b.objects[1].attributes.count("large") == 1);
    CHECK(b.objects[2].box.w == 30.0);
    CHECK(b.relations == a.relations);
    CHECK(scene_to_json_text(a) == scene_to_json_text(b));
  }

  TEST_CASE("ids must be contiguous from zero") {
    CHECK_THROWS_WITH_AS(
        scene_from_json_text(
            R"({"objects": [{"id": 1, "box": [0, 0, 1, 1]}]})"),
        doctest::Contains("ids must be 0..N-1"), GroundError);
  }

  TEST_CASE("boxes need positive extent") {
    CHECK_THROWS_WITH_AS(
        scene_from_json_text(
            R"({"objects": [{"id": 0, "box": [0, 0, 0, 5]}]})"),
        doctest::Contains("positive width"), GroundError);
  }

  TEST_CASE("relation endpoints must exist") {
    CHECK_THROWS_WITH_AS(
        scene_from_json_text(R"({"objects": [{"id": 0, "box": [0, 0, 1, 1]}],
                                 "relations": [[0, "behind", 4]]})"),
        doctest::Contains("missing object"), GroundError);
  }

  TEST_CASE("invalid json is rejected") {
    CHECK_THROWS_AS(scene_from_json_text("{nope"), GroundError);
    CHECK_THROWS_AS(scene_from_json_text("[]"), GroundError);
  }

  TEST_CASE("empty scenes are allowed") {
    const Scene s = scene_from_json_text(R"({"objects": []})");
    CHECK(s.size() == 0);
  }
}

TEST_SUITE("ground.iou") {
  TEST_CASE("identity is exactly one") {
    const Box b{0, 0, 10, 10};
    CHECK(iou(b, b) == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("half-offset boxes give one third") {
    const Box a{0, 0, 10, 10};
    const Box b{5, 0, 10, 10};
    CHECK(iou(a, b) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(iou(b, a) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  }

  TEST_CASE("disjoint boxes give zero") {
    CHECK(iou(Box{0, 0, 10, 10}, Box{20, 0, 10, 10}) == 0.0);
    CHECK(iou(Box{0, 0, 10, 10}, Box{0, 30, 10, 10}) == 0.0);
  }

  TEST_CASE("always within [0, 1] and symmetric") {
    std::mt19937_64 rng(77);
    for (int i = 0; i < 200; ++i) {
      auto coord = [&rng] {
        return static_cast<double>(rng() % 100);
      };
      const Box a{coord(), coord(), coord() + 1.0, coord() + 1.0};
      const Box b{coord(), coord(), coord() + 1.0, coord() + 1.0};
      const double v = iou(a, b);
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
      CHECK(v == iou(b, a));
    }
  }
}

TEST_SUITE("ground.oracle") {
  TEST_CASE("attribute scores are exact indicator vectors") {
    OracleGrounder g(desk_scene());
    CHECK(g.score("red", 1) == std::vector<double>{0.0, 0.0, 1.0});
    CHECK(g.score("blue", 1) == std::vector<double>{1.0, 1.0, 0.0});
    CHECK(g.score("sphere", 1) == std::vector<double>{0.0, 1.0, 1.0});
    CHECK(g.score("cube", 1) == std::vector<double>{1.0, 0.0, 0.0});
    CHECK(g.score("metal", 1) == std::vector<double>{1.0, 0.0, 1.0});
  }

  TEST_CASE("questions are canonicalized before lookup") {
    OracleGrounder g(desk_scene());
    CHECK(g.score("  Red ", 1) == std::vector<double>{0.0, 0.0, 1.0});
    CHECK(g.score("Same   Color", 2) == g.score("same color", 2));
  }

  TEST_CASE("arity zero means some object matches") {
    OracleGrounder g(desk_scene());
    CHECK(g.score("red", 0) == std::vector<double>{1.0});
    CHECK(g.score("yellow", 0) == std::vector<double>{0.0});
    CHECK(g.score("behind", 0) == std::vector<double>{1.0});
  }

  TEST_CASE("stored relations become pair matrices") {
    OracleGrounder g(desk_scene());
    const std::vector<double> m = g.score("behind", 2);
    REQUIRE(m.size() == 9);
    CHECK(m[0 * 3 + 1] == 1.0);
    CHECK(m[2 * 3 + 1] == 1.0);
    CHECK(m[0 * 3 + 2] == 1.0);
    CHECK(m[1 * 3 + 0] == 0.0);
    CHECK(m[0 * 3 + 0] == 0.0);
  }

  TEST_CASE("analogical predicates compare attribute categories") {
    OracleGrounder g(desk_scene());
    const std::vector<double> same_color = g.score("same color", 2);
    CHECK(same_color[0 * 3 + 1] == 1.0);
    CHECK(same_color[1 * 3 + 0] == 1.0);
    CHECK(same_color[0 * 3 + 2] == 0.0);
    CHECK(same_color[2 * 3 + 1] == 0.0);
    for (int i = 0; i < 3; ++i) CHECK(same_color[i * 3 + i] == 0.0);

    const std::vector<double> same_shape = g.score("same shape", 2);
    CHECK(same_shape[1 * 3 + 2] == 1.0);
    CHECK(same_shape[2 * 3 + 1] == 1.0);
    CHECK(same_shape[0 * 3 + 1] == 0.0);
  }

  TEST_CASE("analogical diagonal is configurable") {
    OracleOptions opts;
    opts.analogical_diagonal = true;
    OracleGrounder g(desk_scene(), opts);
    const std::vector<double> m = g.score("same color", 2);
    for (int i = 0; i < 3; ++i) CHECK(m[i * 3 + i] == 1.0);
  }

  TEST_CASE("analogical scores agree with brute-force enumeration") {
    std::mt19937_64 rng(2026);
    const std::vector<std::string> colors(color_tokens().begin(),
                                          color_tokens().end());
    const std::vector<std::string> shapes(shape_tokens().begin(),
                                          shape_tokens().end());
    for (int round = 0; round < 20; ++round) {
      Scene s;
      const int n = 2 + static_cast<int>(rng() % 5);
      for (int i = 0; i < n; ++i) {
        SceneObject o;
        o.id = i;
        o.box = Box{static_cast<double>(i) * 50.0, 0.0, 40.0, 40.0};
        o.depth = static_cast<double>(rng() % 10);
        o.cls = shapes[rng() % shapes.size()];
        o.attributes.insert(colors[rng() % colors.size()]);
        s.objects.push_back(std::move(o));
      }
      OracleGrounder g(s);
      const std::vector<double> m = g.score("same color", 2);
      for (int x = 0; x < n; ++x) {
        const std::string cx = *s.objects[x].attributes.begin();
        for (int y = 0; y < n; ++y) {
          const std::string cy = *s.objects[y].attributes.begin();
          const double expect = (x != y && cx == cy) ? 1.0 : 0.0;
          CHECK(m[static_cast<std::size_t>(x) * n + y] == expect);
        }
      }
    }
  }

  TEST_CASE("unknown predicates and arity mismatches error") {
    OracleGrounder g(desk_scene());
    CHECK_THROWS_WITH_AS(g.score("flibber", 1),
                         doctest::Contains("unknown predicate 'flibber'"),
                         GroundError);
    CHECK_THROWS_WITH_AS(g.score("red", 2),
                         doctest::Contains("num_objects=1"), GroundError);
    CHECK_THROWS_WITH_AS(g.score("behind", 1),
                         doctest::Contains("num_objects=2"), GroundError);
    CHECK_THROWS_AS(g.score("red", 3), GroundError);
    CHECK_THROWS_WITH_AS(g.score("same flavor", 2),
                         doctest::Contains("unknown predicate"), GroundError);
  }

  TEST_CASE("query answers attribute categories") {
    OracleGrounder g(desk_scene());
    CHECK(g.query("what color is it", 2) == "red");
    CHECK(g.query("what shape is the object", 1) == "sphere");
    CHECK(g.query("what size", 0) == "small");
    CHECK(g.query("what material", 1) == "rubber");
    CHECK_THROWS_WITH_AS(g.query("what color", 9),
                         doctest::Contains("out of range"), GroundError);
    CHECK_THROWS_AS(g.query("how heavy", 0), GroundError);
  }

  TEST_CASE("proposal matches classes case-insensitively") {
    const Scene s = scene_from_json_text(R"({
      "objects": [
        {"id": 0, "box": [0, 0, 5, 5], "class": "dog"},
        {"id": 1, "box": [9, 0, 5, 5], "class": "cat"},
        {"id": 2, "box": [20, 0, 5, 5], "class": "vase"}
      ]})");
    CHECK(propose_objects(s, {"Dog", "vase"}) == std::vector<int>{0, 2});
    CHECK(propose_objects(s, {"unicorn"}).empty());
  }
}

TEST_SUITE("ground.geometric") {
  TEST_CASE("left and right compare box centers strictly") {
    Scene s;
    for (int i = 0; i < 2; ++i) {
      SceneObject o;
      o.id = i;
      o.box = i == 0 ? Box{0, 0, 20, 20} : Box{40, 0, 20, 20};
      o.depth = 1.0;
      o.cls = "cube";
      s.objects.push_back(o);
    }
    const std::vector<double> left = geometric_score(s, "left");
    CHECK(left[0 * 2 + 1] == 1.0);
    CHECK(left[1 * 2 + 0] == 0.0);

    s.objects[1].box = Box{5, 50, 10, 10};  // same center x as object 0
    const std::vector<double> tied_left = geometric_score(s, "left");
    const std::vector<double> tied_right = geometric_score(s, "right");
    CHECK(tied_left[0 * 2 + 1] == 0.0);
    CHECK(tied_right[0 * 2 + 1] == 0.0);
  }

  TEST_CASE("larger depth is farther") {
    Scene s;
    for (int i = 0; i < 2; ++i) {
      SceneObject o;
      o.id = i;
      o.box = Box{static_cast<double>(40 * i), 0, 20, 20};
      o.depth = i == 0 ? 3.0 : 7.0;
      o.cls = "cube";
      s.objects.push_back(o);
    }
    const std::vector<double> behind = geometric_score(s, "behind");
    const std::vector<double> front = geometric_score(s, "front");
    CHECK(behind[1 * 2 + 0] == 1.0);
    CHECK(behind[0 * 2 + 1] == 0.0);
    CHECK(front[0 * 2 + 1] == 1.0);
  }

  TEST_CASE("left/right and front/behind are transposes on random scenes") {
    std::mt19937_64 rng(11);
    for (int round = 0; round < 20; ++round) {
      Scene s;
      const int n = 2 + static_cast<int>(rng() % 6);
      for (int i = 0; i < n; ++i) {
        SceneObject o;
        o.id = i;
        o.box = Box{static_cast<double>(rng() % 400),
                    static_cast<double>(rng() % 200), 10.0, 10.0};
        o.depth = static_cast<double>(rng() % 9);
        o.cls = "cube";
        s.objects.push_back(o);
      }
      const std::vector<double> left = geometric_score(s, "left");
      const std::vector<double> right = geometric_score(s, "right");
      const std::vector<double> front = geometric_score(s, "front");
      const std::vector<double> behind = geometric_score(s, "behind");
      for (int x = 0; x < n; ++x) {
        for (int y = 0; y < n; ++y) {
          CHECK(left[static_cast<std::size_t>(x) * n + y] ==
                right[static_cast<std::size_t>(y) * n + x]);
          CHECK(behind[static_cast<std::size_t>(x) * n + y] ==
                front[static_cast<std::size_t>(y) * n + x]);
        }
      }
    }
  }

  TEST_CASE("missing depth only blocks front/behind") {
    Scene s = desk_scene();
    s.objects[1].depth = std::nan("");
    CHECK_NOTHROW(geometric_score(s, "left"));
    CHECK_THROWS_WITH_AS(geometric_score(s, "behind"),
                         doctest::Contains("requires depth"), GroundError);
  }

  TEST_CASE("geometric grounder overrides spatial predicates only") {
    Scene s = desk_scene();
    // Stored relations disagree with geometry on purpose: object 0 has the
    // smallest depth but the scene claims it is behind everything.
    GeometricGrounder g(s);
    const std::vector<double> behind = g.score("behind", 2);
    CHECK(behind[0 * 3 + 1] == 0.0);  // stored said 1, geometry says 0
    CHECK(behind[1 * 3 + 0] == 1.0);
    CHECK(g.score("red", 1) == std::vector<double>{0.0, 0.0, 1.0});
  }
}

TEST_SUITE("ground.logits") {
  TEST_CASE("symmetric logits give one half") {
    CHECK(normalize_logits(0.0, 0.0) == doctest::Approx(0.5).epsilon(1e-12));
  }

  TEST_CASE("unit gap matches the logistic value") {
    CHECK(normalize_logits(1.0, 0.0) ==
          doctest::Approx(0.73106).epsilon(1e-4));
  }

  TEST_CASE("huge gaps saturate without overflow") {
    CHECK(normalize_logits(1000.0, 0.0) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(normalize_logits(0.0, 1000.0) ==
          doctest::Approx(0.0).epsilon(1e-12));
  }

  TEST_CASE("agrees with the logistic of the gap across |delta| <= 50") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 500; ++i) {
      const double gap =
          (static_cast<double>(rng() % 100001) / 1000.0) - 50.0;
      const double base =
          (static_cast<double>(rng() % 2001) / 100.0) - 10.0;
      const double got = normalize_logits(base + gap, base);
      const double want =
          static_cast<double>(nept::testsupport::ref_sigmoid(gap));
      CHECK(std::fabs(got - want) < 1e-12);
    }
  }

  TEST_CASE("non-finite logits are rejected") {
    CHECK_THROWS_AS(normalize_logits(std::nan(""), 0.0), GroundError);
    CHECK_THROWS_AS(
        normalize_logits(0.0, std::numeric_limits<double>::infinity()),
        GroundError);
  }
}

TEST_SUITE("ground.wire") {
  TEST_CASE("request json round trips") {
    WireRequest req;
    req.kind = "score";
    req.image_ref = "img-7";
    req.question = "red";
    req.num_objects = 2;
    req.target_pairs = {{0, 1}, {1, 0}};
    const WireRequest back = wire_request_from_json(wire_request_to_json(req));
    CHECK(back.kind == "score");
    CHECK(back.image_ref == "img-7");
    CHECK(back.question == "red");
    CHECK(back.num_objects == 2);
    CHECK(back.target_pairs == req.target_pairs);
  }

  TEST_CASE("response forms parse") {
    const WireResponse scores = wire_response_from_json(R"({"scores":
      [0.25, 1.0]})");
    REQUIRE(scores.scores.has_value());
    CHECK(scores.scores->size() == 2);
    CHECK(scores.score_rows == 0);

    const WireResponse nested =
        wire_response_from_json(R"({"scores": [[0, 1], [1, 0]]})");
    CHECK(nested.score_rows == 2);
    CHECK(nested.score_cols == 2);
    CHECK(nested.scores->size() == 4);

    const WireResponse text = wire_response_from_json(R"({"text": "yellow"})");
    CHECK(*text.text == "yellow");

    const WireResponse boxes =
        wire_response_from_json(R"({"boxes": [[1, 2, 3, 4]]})");
    CHECK(boxes.boxes->size() == 1);
    CHECK(boxes.boxes->front().h == 4.0);
  }

  TEST_CASE("malformed responses are rejected") {
    CHECK_THROWS_AS(wire_response_from_json("not json"), GroundError);
    CHECK_THROWS_WITH_AS(
        wire_response_from_json(R"({"scores": [[0, 1], [1]]})"),
        doctest::Contains("ragged"), GroundError);
    CHECK_THROWS_AS(wire_response_from_json(R"({"logits": [[1]]})"),
                    GroundError);
    CHECK_THROWS_AS(wire_response_from_json(R"({"something": 1})"),
                    GroundError);
  }

  TEST_CASE("service answers score, query, and detect") {
    OracleGrounder oracle(desk_scene());
    WireService service(oracle, desk_scene());

    const std::string score_body = service.handle(
        R"({"kind": "score", "image_ref": "desk-001", "question": "red",
            "num_objects": 1, "targets": [0, 1, 2]})");
    const WireResponse score_res = wire_response_from_json(score_body);
    CHECK(*score_res.scores == std::vector<double>{0.0, 0.0, 1.0});

    const std::string query_body = service.handle(
        R"({"kind": "query", "image_ref": "desk-001",
            "question": "what color", "targets": [2]})");
    CHECK(*wire_response_from_json(query_body).text == "red");

    const std::string detect_body = service.handle(
        R"({"kind": "detect", "image_ref": "desk-001",
            "names": ["sphere"]})");
    CHECK(wire_response_from_json(detect_body).boxes->size() == 2);

    const std::string error_body = service.handle(
        R"({"kind": "score", "question": "flibber", "num_objects": 1})");
    CHECK(wire_response_from_json(error_body).error->find(
              "unknown predicate") != std::string::npos);
  }
}

TEST_SUITE("ground.remote") {
  TEST_CASE("remote grounder round trips through a served oracle") {
    OracleGrounder oracle(desk_scene());
    WireServer server(oracle, desk_scene());
    const int port = server.start();

    RemoteGrounder remote("127.0.0.1:" + std::to_string(port));
    remote.bind_scene("desk-001", 3);
    CHECK(remote.score("red", 1) == std::vector<double>{0.0, 0.0, 1.0});
    CHECK(remote.score("behind", 2) == oracle.score("behind", 2));
    CHECK(remote.score("red", 0) == std::vector<double>{1.0});
    CHECK(remote.query("what color", 2) == "red");

    const Scene detected = remote.detect({"sphere"});
    CHECK(detected.size() == 2);
    CHECK(detected.image_ref == "desk-001");
    CHECK(detected.objects[0].attributes.empty());
    CHECK(remote.num_objects() == 2);

    server.stop();
  }

  TEST_CASE("endpoint parsing accepts an http scheme and rejects garbage") {
    CHECK_NOTHROW(RemoteGrounder("http://localhost:8080"));
    CHECK_THROWS_AS(RemoteGrounder("nonsense"), ConfigError);
    CHECK_THROWS_AS(RemoteGrounder("host:-2"), ConfigError);
  }

  TEST_CASE("identical requests hit the network once") {
    OracleGrounder oracle(desk_scene());
    WireServer server(oracle, desk_scene());
    const int port = server.start();

    RemoteGrounder remote("127.0.0.1:" + std::to_string(port));
    remote.bind_scene("desk-001", 3);
    const std::vector<double> first = remote.score("red", 1);
    const std::vector<double> second = remote.score("red", 1);
    CHECK(first == second);
    CHECK(remote.network_calls() == 1);
    remote.score("blue", 1);
    CHECK(remote.network_calls() == 2);
    remote.query("what color", 2);
    remote.query("what color", 2);
    CHECK(remote.network_calls() == 3);

    server.stop();
  }

  TEST_CASE("concurrent identical requests share one call") {
    OracleGrounder oracle(desk_scene());
    WireServer server(oracle, desk_scene());
    const int port = server.start();

    RemoteGrounder remote("127.0.0.1:" + std::to_string(port));
    remote.bind_scene("desk-001", 3);
    std::vector<std::thread> threads;
    std::atomic<int> ok{0};
    for (int t = 0; t < 8; ++t) {
      threads.emplace_back([&remote, &ok] {
        if (remote.score("metal", 1) == std::vector<double>{1.0, 0.0, 1.0})
          ok.fetch_add(1);
      });
    }
    for (std::thread& t : threads) t.join();
    CHECK(ok.load() == 8);
    CHECK(remote.network_calls() == 1);

    server.stop();
  }

  TEST_CASE("logit responses are normalized client-side") {
    httplib::Server mock;
    mock.Post("/ground", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(R"({"logits": [[2, 0], [0, 2], [0, 0]]})",
                      "application/json");
    });
    const int port = mock.bind_to_any_port("127.0.0.1");
    std::thread thread([&mock] { mock.listen_after_bind(); });
    mock.wait_until_ready();

    RemoteGrounder remote("127.0.0.1:" + std::to_string(port));
    remote.bind_scene("img", 3);
    const std::vector<double> scores = remote.score("shiny", 1);
    REQUIRE(scores.size() == 3);
    CHECK(scores[0] == doctest::Approx(0.88080).epsilon(1e-5));
    CHECK(scores[1] == doctest::Approx(0.11920).epsilon(1e-5));
    CHECK(scores[2] == doctest::Approx(0.5).epsilon(1e-12));

    mock.stop();
    thread.join();
  }

  TEST_CASE("pair scores accept the off-diagonal target list") {
    httplib::Server mock;
    mock.Post("/ground", [](const httplib::Request&, httplib::Response& res) {
      // Six scores for the six ordered pairs of three objects.
      res.set_content(R"({"scores": [0.1, 0.2, 0.3, 0.4, 0.5, 0.6]})",
                      "application/json");
    });
    const int port = mock.bind_to_any_port("127.0.0.1");
    std::thread thread([&mock] { mock.listen_after_bind(); });
    mock.wait_until_ready();

    RemoteGrounder remote("127.0.0.1:" + std::to_string(port));
    remote.bind_scene("img", 3);
    const std::vector<double> m = remote.score("near", 2);
    REQUIRE(m.size() == 9);
    CHECK(m[0 * 3 + 1] == 0.1);
    CHECK(m[0 * 3 + 2] == 0.2);
    CHECK(m[1 * 3 + 0] == 0.3);
    CHECK(m[2 * 3 + 1] == 0.6);
    for (int i = 0; i < 3; ++i) CHECK(m[i * 3 + i] == 0.0);

    mock.stop();
    thread.join();
  }

  TEST_CASE("wrongly shaped matrices are malformed") {
    httplib::Server mock;
    mock.Post("/ground", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(R"({"scores": [[0, 1, 0], [1, 0, 1]]})",
                      "application/json");
    });
    const int port = mock.bind_to_any_port("127.0.0.1");
    std::thread thread([&mock] { mock.listen_after_bind(); });
    mock.wait_until_ready();

    RemoteGrounder remote("127.0.0.1:" + std::to_string(port));
    remote.bind_scene("img", 3);
    CHECK_THROWS_WITH_AS(remote.score("near", 2),
                         doctest::Contains("malformed"), GroundError);

    mock.stop();
    thread.join();
  }

  TEST_CASE("out-of-range scores are rejected") {
    httplib::Server mock;
    mock.Post("/ground", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(R"({"scores": [0.5, 1.5, 0.0]})", "application/json");
    });
    const int port = mock.bind_to_any_port("127.0.0.1");
    std::thread thread([&mock] { mock.listen_after_bind(); });
    mock.wait_until_ready();

    RemoteGrounder remote("127.0.0.1:" + std::to_string(port));
    remote.bind_scene("img", 3);
    CHECK_THROWS_WITH_AS(remote.score("red", 1),
                         doctest::Contains("out of range"), GroundError);

    mock.stop();
    thread.join();
  }

  TEST_CASE("a stalling server exhausts the retry budget") {
    httplib::Server mock;
    std::atomic<int> hits{0};
    mock.Post("/ground", [&hits](const httplib::Request&,
                                 httplib::Response& res) {
      hits.fetch_add(1);
      std::this_thread::sleep_for(std::chrono::milliseconds(400));
      res.set_content(R"({"scores": [1.0]})", "application/json");
    });
    const int port = mock.bind_to_any_port("127.0.0.1");
    std::thread thread([&mock] { mock.listen_after_bind(); });
    mock.wait_until_ready();

    RemoteOptions opts;
    opts.timeout_seconds = 0.1;
    opts.retries = 2;
    RemoteGrounder remote("127.0.0.1:" + std::to_string(port), opts);
    remote.bind_scene("img", 1);
    CHECK_THROWS_WITH_AS(remote.score("red", 0),
                         doctest::Contains("failed after 3 attempts"),
                         GroundError);
    CHECK(remote.network_calls() == 3);
    // A later identical request is not poisoned by the failure.
    CHECK_THROWS_AS(remote.score("red", 0), GroundError);
    CHECK(remote.network_calls() == 6);

    mock.stop();
    thread.join();
  }

  TEST_CASE("a dead endpoint fails after retries") {
    RemoteOptions opts;
    opts.timeout_seconds = 0.1;
    opts.retries = 1;
    RemoteGrounder remote("127.0.0.1:1", opts);
    remote.bind_scene("img", 1);
    CHECK_THROWS_WITH_AS(remote.score("red", 0),
                         doctest::Contains("failed after 2 attempts"),
                         GroundError);
  }

  TEST_CASE("server error bodies surface without retry") {
    OracleGrounder oracle(desk_scene());
    WireServer server(oracle, desk_scene());
    const int port = server.start();

    RemoteGrounder remote("127.0.0.1:" + std::to_string(port));
    remote.bind_scene("desk-001", 3);
    CHECK_THROWS_WITH_AS(remote.score("flibber", 1),
                         doctest::Contains("unknown predicate"), GroundError);
    CHECK(remote.network_calls() == 1);

    server.stop();
  }
}

}  // namespace
