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

#include "nept/harness/eval.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "nept/error.hpp"
#include "nept/ground/oracle.hpp"
#include "nept/ground/remote.hpp"
#include "nept/lang/parser.hpp"

namespace nept::harness {

namespace {

using nlohmann::json;

std::string dir_of(const std::string& path) {
  const std::size_t slash = path.find_last_of('/');
  return slash == std::string::npos ? "." : path.substr(0, slash);
}

int parse_object_id(const std::string& s, int n) {
  if (s.empty()) return -1;
  std::size_t pos = 0;
  int id = -1;
  try {
    id = std::stoi(s, &pos);
  } catch (const std::exception&) {
    return -1;
  }
  if (pos != s.size() || id < 0 || id >= n) return -1;
  return id;
}

}  // namespace

std::string corpus_to_jsonl(const std::vector<CorpusItem>& items) {
  std::string out;
  for (const CorpusItem& item : items) {
    json j;
    j["scene"] = json::parse(ground::scene_to_json_text(item.scene));
    j["category"] = category_name(item.spec.category);
    j["question_text"] = item.spec.question_text;
    j["program"] = item.spec.program_text;
    j["ground_truth"] = item.spec.ground_truth;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<CorpusItem> corpus_from_jsonl(const std::string& text,
                                          const std::string& base_dir) {
  std::vector<CorpusItem> items;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      CorpusItem item;
      if (j.contains("scene")) {
        item.scene = ground::scene_from_json_text(j.at("scene").dump());
      } else if (j.contains("scene_path")) {
        const std::string rel = j.at("scene_path").get<std::string>();
        const std::string path =
            rel.rfind('/', 0) == 0 ? rel : base_dir + "/" + rel;
        item.scene = ground::load_scene_file(path);
      } else {
        throw Error("record has neither scene nor scene_path");
      }
      item.spec.category =
          category_from_name(j.at("category").get<std::string>());
      item.spec.question_text = j.at("question_text").get<std::string>();
      item.spec.program_text = j.at("program").get<std::string>();
      item.spec.ground_truth = j.at("ground_truth").get<std::string>();
      items.push_back(std::move(item));
    } catch (const std::exception& e) {
      throw Error("corpus line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return items;
}

void save_corpus(const std::vector<CorpusItem>& items,
                 const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write corpus file '" + path + "'");
  out << corpus_to_jsonl(items);
  if (!out) throw Error("failed writing corpus file '" + path + "'");
}

std::vector<CorpusItem> load_corpus(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read corpus file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return corpus_from_jsonl(buf.str(), dir_of(path));
}

std::string default_backbone(const CorpusItem& item) {
  switch (item.spec.category) {
    case Category::Exist:
    case Category::CompareNumber:
    case Category::CompareAttribute:
      return "no";
    case Category::Count:
      return "0";
    case Category::QueryAttribute:
      return "";
    case Category::Ref:
      return "0";
  }
  return "";
}

std::string canonical_answer(const exec::Answer& a) {
  switch (a.kind) {
    case exec::Answer::Kind::YesNo:
      return a.yes ? "yes" : "no";
    case exec::Answer::Kind::Count:
      return std::to_string(a.count);
    case exec::Answer::Kind::Text:
      return a.text;
    case exec::Answer::Kind::ObjectRef:
      return std::to_string(a.object_id);
    case exec::Answer::Kind::NoObjects:
      return "no objects";
  }
  return "";
}

namespace {

std::unique_ptr<ground::Grounder> make_grounder(const CorpusItem& item,
                                                const EvalOptions& opts) {
  switch (opts.grounder) {
    case EvalOptions::GrounderKind::Oracle:
      return std::make_unique<ground::OracleGrounder>(item.scene);
    case EvalOptions::GrounderKind::Geometric:
      return std::make_unique<ground::GeometricGrounder>(item.scene);
    case EvalOptions::GrounderKind::Remote: {
      auto g = std::make_unique<ground::RemoteGrounder>(opts.endpoint);
      g->bind_scene(item.scene.image_ref,
                    static_cast<std::size_t>(item.scene.size()));
      return g;
    }
  }
  throw ConfigError("unknown grounder kind");
}

bool answer_correct(const CorpusItem& item, const std::string& answer) {
  if (item.spec.category != Category::Ref)
    return answer == item.spec.ground_truth;
  const int n = item.scene.size();
  const int got = parse_object_id(answer, n);
  const int want = parse_object_id(item.spec.ground_truth, n);
  if (got < 0 || want < 0) return false;
  return ground::iou(item.scene.objects[got].box,
                     item.scene.objects[want].box) >= 0.5;
}

ItemResult run_item(const CorpusItem& item, const EvalOptions& opts) {
  ItemResult r;
  try {
    const lang::Program program = lang::parse(item.spec.program_text);
    const std::unique_ptr<ground::Grounder> grounder =
        make_grounder(item, opts);
    exec::ExecOptions xopts = opts.exec;
    xopts.task = item.spec.category == Category::Ref
                     ? exec::ExecOptions::Task::Reg
                     : exec::ExecOptions::Task::Vqa;
    const exec::Outcome out = exec::run(program, *grounder, xopts);
    r.executed = true;
    r.grounder_calls = static_cast<int>(out.trace.size());
    r.symbolic_answer = canonical_answer(out.answer);
    r.answer = r.symbolic_answer;
    if (opts.gate) {
      std::vector<double> scores;
      if (out.answer.kind == exec::Answer::Kind::ObjectRef)
        scores = out.answer.scores;
      else if (out.answer.kind == exec::Answer::Kind::YesNo)
        scores = verify::yes_no_scores(out.answer.raw);
      if (!scores.empty()) {
        const verify::GateRecord rec = verify::decide_gate(scores, *opts.gate);
        r.gated = true;
        r.kept_symbolic = rec.symbolic;
        r.max_prob = rec.max_prob;
        if (!rec.symbolic) {
          r.answer = opts.backbone ? opts.backbone(item)
                                   : default_backbone(item);
          if (opts.arbiter) {
            r.arbiter_choice = opts.arbiter(item, r.symbolic_answer, r.answer);
            if (r.arbiter_choice == 0) r.answer = r.symbolic_answer;
          }
        }
      }
    }
    r.correct_symbolic = answer_correct(item, r.symbolic_answer);
    r.correct = answer_correct(item, r.answer);
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  return r;
}

double percent(int part, int whole) {
  return whole == 0 ? 0.0 : 100.0 * part / whole;
}

}  // namespace

double Metrics::accuracy() const { return percent(correct, total); }
double Metrics::pre_accuracy() const {
  return percent(correct_symbolic, total);
}
double Metrics::execution_rate() const { return percent(executed, total); }
double Metrics::symbolic_share() const {
  return percent(total - (gated - kept_symbolic - arbiter_restored), total);
}

Metrics evaluate(const std::vector<CorpusItem>& corpus,
                 const EvalOptions& opts) {
  if (corpus.empty()) throw Error("evaluate needs a non-empty corpus");
  const auto started = std::chrono::steady_clock::now();

  std::vector<ItemResult> results(corpus.size());
  std::atomic<std::size_t> cursor{0};
  auto worker = [&] {
    for (std::size_t i = cursor.fetch_add(1); i < corpus.size();
         i = cursor.fetch_add(1))
      results[i] = run_item(corpus[i], opts);
  };
  const int jobs = std::max(1, opts.jobs);
  std::vector<std::thread> pool;
  pool.reserve(jobs - 1);
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  Metrics m;
  m.total = static_cast<int>(corpus.size());
  m.verified = opts.gate.has_value();
  long long calls = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const ItemResult& r = results[i];
    CategoryStats& cat =
        m.per_category[category_name(corpus[i].spec.category)];
    ++cat.total;
    if (r.executed) {
      ++m.executed;
      ++cat.executed;
      calls += r.grounder_calls;
    }
    if (r.correct) {
      ++m.correct;
      ++cat.correct;
    }
    if (r.correct_symbolic) ++m.correct_symbolic;
    if (r.gated) {
      ++m.gated;
      if (r.kept_symbolic) ++m.kept_symbolic;
      if (r.arbiter_choice != -2) {
        ++m.arbitrated;
        if (r.arbiter_choice == 0) ++m.arbiter_restored;
      }
    }
  }
  m.mean_grounder_calls =
      m.executed == 0 ? 0.0 : static_cast<double>(calls) / m.executed;
  m.items = std::move(results);
  m.wall_seconds = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - started)
                       .count();
  return m;
}

std::string metrics_json(const Metrics& m) {
  json j;
  j["total"] = m.total;
  j["executed"] = m.executed;
  j["correct"] = m.correct;
  j["accuracy_percent"] = m.accuracy();
  j["execution_success_percent"] = m.execution_rate();
  j["mean_grounder_calls"] = m.mean_grounder_calls;
  j["wall_seconds"] = m.wall_seconds;
  json cats;
  for (const auto& [name, s] : m.per_category) {
    cats[name] = {{"total", s.total},
                  {"executed", s.executed},
                  {"correct", s.correct},
                  {"accuracy_percent", percent(s.correct, s.total)}};
  }
  j["per_category"] = cats;
  if (m.verified) {
    j["pre_verification_accuracy_percent"] = m.pre_accuracy();
    j["post_verification_accuracy_percent"] = m.accuracy();
    j["symbolic_share_percent"] = m.symbolic_share();
    j["gated"] = m.gated;
    j["kept_symbolic"] = m.kept_symbolic;
    if (m.arbitrated > 0) {
      j["arbitrated"] = m.arbitrated;
      j["arbiter_restored"] = m.arbiter_restored;
    }
  }
  return j.dump(2);
}

std::string metrics_table(const Metrics& m) {
  char line[160];
  std::string out;
  std::snprintf(line, sizeof(line), "%-18s %7s %9s %8s %9s\n", "category",
                "total", "executed", "correct", "accuracy");
  out += line;
  auto row = [&](const std::string& name, const CategoryStats& s) {
    std::snprintf(line, sizeof(line), "%-18s %7d %9d %8d %8.1f%%\n",
                  name.c_str(), s.total, s.executed, s.correct,
                  percent(s.correct, s.total));
    out += line;
  };
  for (const auto& [name, s] : m.per_category) row(name, s);
  row("overall", {m.total, m.executed, m.correct});
  std::snprintf(line, sizeof(line), "\nexecution success   %6.1f%%\n",
                m.execution_rate());
  out += line;
  std::snprintf(line, sizeof(line), "mean grounder calls %6.2f\n",
                m.mean_grounder_calls);
  out += line;
  std::snprintf(line, sizeof(line), "wall time           %6.2fs\n",
                m.wall_seconds);
  out += line;
  if (m.verified) {
    std::snprintf(line, sizeof(line),
                  "pre-verification accuracy   %6.1f%%\n", m.pre_accuracy());
    out += line;
    std::snprintf(line, sizeof(line),
                  "post-verification accuracy  %6.1f%%\n", m.accuracy());
    out += line;
    std::snprintf(line, sizeof(line),
                  "symbolic share              %6.1f%%\n",
                  m.symbolic_share());
    out += line;
    if (m.arbitrated > 0) {
      std::snprintf(line, sizeof(line),
                    "arbiter consulted           %6d (restored %d)\n",
                    m.arbitrated, m.arbiter_restored);
      out += line;
    }
  }
  return out;
}

}  // namespace nept::harness
