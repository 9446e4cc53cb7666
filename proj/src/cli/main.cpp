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

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "nept/error.hpp"
#include "nept/exec/executor.hpp"
#include "nept/ground/oracle.hpp"
#include "nept/ground/remote.hpp"
#include "nept/harness/eval.hpp"
#include "nept/harness/gen.hpp"
#include "nept/lang/parser.hpp"
#include "nept/verify/verify.hpp"

namespace {

using namespace nept;

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitExecution = 3;
constexpr int kExitGrounding = 4;
constexpr int kExitConfig = 5;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << text;
}

/// 1-based line:col of a byte offset, for diagnostics on runtime errors.
std::string locate(const std::string& source, std::size_t offset) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < source.size(); ++i) {
    if (source[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

struct GrounderChoice {
  std::string kind = "oracle";
  std::string endpoint;

  void resolve_endpoint() {
    if (kind != "remote") return;
    if (endpoint.empty())
      if (const char* env = std::getenv("NEPT_ENDPOINT")) endpoint = env;
    if (endpoint.empty())
      throw ConfigError("remote grounder needs --endpoint or NEPT_ENDPOINT");
  }

  std::unique_ptr<ground::Grounder> make(const ground::Scene& scene) const {
    if (kind == "oracle")
      return std::make_unique<ground::OracleGrounder>(scene);
    if (kind == "geometric")
      return std::make_unique<ground::GeometricGrounder>(scene);
    auto g = std::make_unique<ground::RemoteGrounder>(endpoint);
    g->bind_scene(scene.image_ref, scene.size());
    return g;
  }

  harness::EvalOptions::GrounderKind eval_kind() const {
    if (kind == "oracle") return harness::EvalOptions::GrounderKind::Oracle;
    if (kind == "geometric")
      return harness::EvalOptions::GrounderKind::Geometric;
    return harness::EvalOptions::GrounderKind::Remote;
  }
};

void add_grounder_flags(CLI::App* cmd, GrounderChoice* g) {
  cmd->add_option("--grounder", g->kind, "oracle, geometric, or remote")
      ->check(CLI::IsMember({"oracle", "geometric", "remote"}))
      ->default_val("oracle");
  cmd->add_option("--endpoint", g->endpoint,
                  "remote grounder URL (or NEPT_ENDPOINT)");
}

std::optional<verify::GateParams> resolve_gate(bool verify_flag,
                                               const std::string& preset,
                                               double gate_tau,
                                               double gate_temp) {
  const bool any =
      verify_flag || !preset.empty() || gate_tau >= 0.0 || gate_temp >= 0.0;
  if (!any) return std::nullopt;
  verify::GateParams p;
  if (!preset.empty()) p = verify::gate_preset(preset);
  if (gate_tau >= 0.0) p.tau_gate = gate_tau;
  if (gate_temp >= 0.0) p.temp = gate_temp;
  p.validate();
  return p;
}

int cmd_run(const std::string& program_path, const std::string& scene_path,
            const GrounderChoice& grounder_choice,
            const exec::ExecOptions& xopts, const std::string& out_path) {
  const std::string source = read_file(program_path);
  const ground::Scene scene = ground::load_scene_file(scene_path);
  const lang::Program program = lang::parse(source);
  const std::unique_ptr<ground::Grounder> grounder =
      grounder_choice.make(scene);

  exec::Outcome out;
  try {
    out = exec::run(program, *grounder, xopts);
  } catch (const exec::ExecError& e) {
    std::cerr << "execution error at " << locate(source, e.span().begin)
              << ": " << e.what() << "\n";
    return kExitExecution;
  }

  std::ostringstream report;
  report << exec::answer_to_string(out.answer) << "\n";
  if (out.answer.kind == exec::Answer::Kind::ObjectRef) {
    report << "scores:";
    for (double s : out.answer.scores) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), " %.6f", s);
      report << buf;
    }
    report << "\ndistribution:";
    for (double p : out.answer.distribution) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), " %.6f", p);
      report << buf;
    }
    report << "\n";
  }
  report << "grounder calls: " << out.trace.size() << "\n";
  for (std::size_t i = 0; i < out.trace.size(); ++i) {
    const exec::TraceEntry& t = out.trace[i];
    report << "  [" << i << "] " << t.kind << " \"" << t.question << "\" ";
    if (t.kind == "score")
      report << "arity " << t.num_objects;
    else
      report << "object " << t.object_id;
    report << " -> " << t.shape << "\n";
  }
  if (out.gradients) {
    report << "gradients:\n";
    for (const auto& [index, adjoints] : *out.gradients) {
      report << "  [" << index << "]";
      for (double g : adjoints) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), " %.6f", g);
        report << buf;
      }
      report << "\n";
    }
  }

  std::cout << report.str();
  if (!out_path.empty()) write_file(out_path, report.str());
  return kExitOk;
}

int cmd_gen(std::uint64_t seed, int scenes, int per_category,
            const std::string& out_path) {
  const std::vector<harness::CorpusItem> corpus =
      harness::gen_corpus(seed, scenes, per_category);
  const std::string jsonl = harness::corpus_to_jsonl(corpus);
  if (out_path.empty())
    std::cout << jsonl;
  else
    write_file(out_path, jsonl);
  std::cerr << "generated " << corpus.size() << " items over " << scenes
            << " scenes\n";
  return kExitOk;
}

int cmd_eval(const std::string& corpus_path,
             const GrounderChoice& grounder_choice,
             const exec::ExecOptions& xopts, int jobs,
             const std::optional<verify::GateParams>& gate,
             const std::string& out_path) {
  const std::vector<harness::CorpusItem> corpus =
      harness::load_corpus(corpus_path);

  harness::EvalOptions opts;
  opts.grounder = grounder_choice.eval_kind();
  opts.endpoint = grounder_choice.endpoint;
  opts.exec = xopts;
  opts.jobs = jobs;
  opts.gate = gate;
  if (gate && opts.grounder == harness::EvalOptions::GrounderKind::Remote) {
    const std::string endpoint = grounder_choice.endpoint;
    opts.backbone = [endpoint](const harness::CorpusItem& item) {
      ground::RemoteGrounder g(endpoint);
      g.bind_scene(item.scene.image_ref, item.scene.size());
      return g.query(item.spec.question_text, 0);
    };
    opts.arbiter = [endpoint](const harness::CorpusItem& item,
                              const std::string&, const std::string&) {
      ground::RemoteGrounder g(endpoint);
      g.bind_scene(item.scene.image_ref, item.scene.size());
      const std::string text =
          g.query(verify::arbiter_prompt(item.spec.question_text), 0);
      const verify::ArbiterDecision d = verify::arbiter_decide(text);
      return d.parsed ? d.choice : 1;
    };
  }

  const harness::Metrics metrics = harness::evaluate(corpus, opts);
  std::cout << harness::metrics_table(metrics);
  if (!out_path.empty()) write_file(out_path, harness::metrics_json(metrics));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Soft-logic scene reasoning: run programs, generate "
               "benchmark corpora, and score them."};
  app.require_subcommand(1);

  // run
  std::string run_program, run_scene, run_out;
  GrounderChoice run_grounder;
  exec::ExecOptions run_xopts;
  std::string run_task = "vqa";
  CLI::App* run = app.add_subcommand("run", "execute one program on a scene");
  run->add_option("program", run_program, "program source file")->required();
  run->add_option("scene", run_scene, "scene JSON file")->required();
  add_grounder_flags(run, &run_grounder);
  run->add_option("--task", run_task, "vqa or reg")
      ->check(CLI::IsMember({"vqa", "reg"}))
      ->default_val("vqa");
  run->add_option("--tau", run_xopts.smoothing.tau, "comparison sharpness");
  run->add_option("--gamma", run_xopts.smoothing.gamma, "comparison margin");
  run->add_flag("--gradients", run_xopts.gradients,
                "dump answer adjoints per score call");
  run->add_flag("--relate-literal", run_xopts.relate_literal,
                "row-independent vector-by-matrix conjunction");
  run->add_option("--out", run_out, "also write the report to a file");

  // gen
  std::uint64_t gen_seed = 0;
  int gen_scenes = 10, gen_per_category = 1;
  std::string gen_out;
  CLI::App* gen = app.add_subcommand("gen", "generate a question corpus");
  gen->add_option("--seed", gen_seed, "corpus seed")->default_val("0");
  gen->add_option("--scenes", gen_scenes, "number of scenes")
      ->check(CLI::Range(1, 1000000))
      ->default_val("10");
  gen->add_option("--per-category", gen_per_category,
                  "questions per category per scene")
      ->check(CLI::Range(1, 1000000))
      ->default_val("1");
  gen->add_option("--out", gen_out, "corpus file (default stdout)");

  // eval
  std::string eval_corpus, eval_out, eval_preset;
  GrounderChoice eval_grounder;
  exec::ExecOptions eval_xopts;
  int eval_jobs = static_cast<int>(std::thread::hardware_concurrency());
  bool eval_verify = false;
  double eval_gate_tau = -1.0, eval_gate_temp = -1.0;
  CLI::App* eval = app.add_subcommand("eval", "score a corpus");
  eval->add_option("corpus", eval_corpus, "corpus JSONL file")->required();
  add_grounder_flags(eval, &eval_grounder);
  eval->add_option("--tau", eval_xopts.smoothing.tau, "comparison sharpness");
  eval->add_option("--gamma", eval_xopts.smoothing.gamma,
                   "comparison margin");
  eval->add_option("--jobs", eval_jobs, "parallel workers")
      ->check(CLI::Range(1, 1000000));
  eval->add_flag("--verify", eval_verify,
                 "gate low-confidence answers to the backbone");
  eval->add_option("--gate-preset", eval_preset,
                   "named gate parameters (implies --verify)");
  eval->add_option("--gate-tau", eval_gate_tau,
                   "gate confidence threshold (implies --verify)");
  eval->add_option("--gate-temp", eval_gate_temp,
                   "gate softmax temperature (implies --verify)");
  eval->add_flag("--relate-literal", eval_xopts.relate_literal,
                 "row-independent vector-by-matrix conjunction");
  eval->add_option("--out", eval_out, "write the JSON report to a file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run->parsed()) {
      run_grounder.resolve_endpoint();
      run_xopts.task = run_task == "reg" ? exec::ExecOptions::Task::Reg
                                         : exec::ExecOptions::Task::Vqa;
      run_xopts.smoothing.validate();
      return cmd_run(run_program, run_scene, run_grounder, run_xopts,
                     run_out);
    }
    if (gen->parsed()) return cmd_gen(gen_seed, gen_scenes, gen_per_category,
                                      gen_out);
    eval_grounder.resolve_endpoint();
    eval_xopts.smoothing.validate();
    const std::optional<verify::GateParams> gate = resolve_gate(
        eval_verify, eval_preset, eval_gate_tau, eval_gate_temp);
    return cmd_eval(eval_corpus, eval_grounder, eval_xopts, eval_jobs, gate,
                    eval_out);
  } catch (const lang::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const exec::ExecError& e) {
    std::cerr << "execution error: " << e.what() << "\n";
    return kExitExecution;
  } catch (const GroundError& e) {
    std::cerr << "grounding error: " << e.what() << "\n";
    return kExitGrounding;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const SoftError& e) {
    std::cerr << "execution error: " << e.what() << "\n";
    return kExitExecution;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}
