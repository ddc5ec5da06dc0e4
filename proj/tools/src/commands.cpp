#include "acotot_cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>
#include <unistd.h>

#include "acotot/errors.hpp"
#include "acotot/hashing.hpp"
#include "acotot/http_providers.hpp"
#include "acotot/mock_providers.hpp"
#include "acotot/serialize.hpp"
#include "acotot/synth.hpp"

namespace acotot::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string dump(const json& j, int indent = -1) {
  return j.dump(indent, ' ', false, json::error_handler_t::replace);
}

fs::path resolve_output(const fs::path& configured, const fs::path& base,
                        const std::optional<fs::path>& out_dir) {
  if (configured.is_absolute()) return configured;
  return (out_dir ? *out_dir : base) / configured;
}

// ---- provider construction ------------------------------------------------

GeneratorPtr make_generator(const ProviderBlock& b) {
  if (b.kind == "http") return std::make_shared<HttpGenerator>(b.http);
  return std::make_shared<MockGenerator>(
      MockGenerator::Options{.seed = b.seed, .inject_shared_duplicate = b.inject_shared_duplicate});
}

ExpertPtr make_expert(const ProviderBlock& b, std::size_t index, bool replicated) {
  const ExpertRole role = b.role ? parse_role(*b.role) : default_role(index);
  // A single block standing for every ant gets a distinct seed per ant.
  const std::uint64_t seed = replicated ? hash_combine(b.seed, index) : b.seed;
  if (b.kind == "http") return std::make_shared<HttpExpert>(b.http, role, b.system_prompt);
  if (b.kind == "planted") {
    PlantedExpert::Config c;
    c.planted = {b.planted.begin(), b.planted.end()};
    c.hit_score = b.hit_score;
    c.miss_score = b.miss_score;
    c.noise = b.noise;
    c.seed = seed;
    c.role = role;
    return std::make_shared<PlantedExpert>(std::move(c));
  }
  return std::make_shared<MockExpert>(seed, role);
}

std::vector<ExpertPtr> make_experts(const RunConfig& cfg) {
  std::vector<ExpertPtr> out;
  const bool replicated = cfg.experts.size() == 1;
  for (std::size_t k = 0; k < cfg.engine.colony.ants; ++k) {
    out.push_back(make_expert(cfg.experts[replicated ? 0 : k], k, replicated));
  }
  return out;
}

EmbedderPtr make_embedder(const ProviderBlock& b) {
  if (b.kind == "http") return std::make_shared<HttpEmbedder>(b.http, b.dimension);
  return std::make_shared<HashEmbedder>(b.dimension);
}

// ---- run ------------------------------------------------------------------

void append_metrics(std::string& jsonl, const IterationMetrics& m,
                    const std::optional<std::string>& problem_id) {
  json line = metrics_to_json(m);
  if (problem_id) line["problem_id"] = *problem_id;
  jsonl += dump(line);
  jsonl += '\n';
}

struct ProblemRun {
  json result;
  std::optional<std::string> failure;
};

// Builds the tree, runs the colony and appends to `metrics`; provider
// failures are reported through ProblemRun::failure with partial metrics.
ProblemRun run_problem(const RunConfig& cfg, const std::string& problem,
                       const std::optional<std::string>& problem_id, bool answer,
                       std::string& metrics) {
  auto ledger = std::make_shared<CallLedger>();
  auto generator = std::make_shared<CountingGenerator>(make_generator(*cfg.generator), ledger);
  ProblemRun out;
  std::size_t completed = 0;
  try {
    const ReasoningGraph graph = generate_tot(problem, *generator, cfg.tot);
    Engine engine(graph, make_experts(cfg), make_embedder(cfg.embedder), cfg.engine, ledger);
    engine.set_metrics_sink([&](const IterationMetrics& m) {
      append_metrics(metrics, m, problem_id);
      ++completed;
    });
    const RunResult result = engine.run();
    out.result = result_to_json(result, graph, cfg.engine);
    if (answer) out.result["final_answer"] = generator->final_answer(problem, result.best_chain);
  } catch (const ProviderFailure& e) {
    out.failure = e.what();
    json flag = {{"aborted", true}, {"error", e.what()}, {"iterations_completed", completed}};
    if (problem_id) flag["problem_id"] = *problem_id;
    metrics += dump(flag) + '\n';
    out.result = {{"aborted", true}, {"error", e.what()}, {"iterations_completed", completed}};
    if (const auto* aborted = dynamic_cast<const RunAborted*>(&e)) {
      json history = json::array();
      for (const auto& m : aborted->history()) history.push_back(metrics_to_json(m));
      out.result["history"] = std::move(history);
    }
  }
  return out;
}

std::vector<json> read_dataset(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open dataset " + path.string());
  std::vector<json> items;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (normalize_whitespace(line).empty()) continue;
    json item;
    try {
      item = json::parse(line);
    } catch (const json::exception&) {
      throw ConfigError("dataset line " + std::to_string(lineno) + " is not JSON");
    }
    if (!item.is_object() || !item.contains("problem") || !item["problem"].is_string()) {
      throw ConfigError("dataset line " + std::to_string(lineno) + " lacks a 'problem' string");
    }
    if (!item.contains("id")) item["id"] = std::to_string(lineno);
    items.push_back(std::move(item));
  }
  if (items.empty()) throw ConfigError("dataset " + path.string() + " is empty");
  return items;
}

std::string id_string(const json& id) { return id.is_string() ? id.get<std::string>() : dump(id); }

}  // namespace

void write_file_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("failed writing " + tmp.string());
  }
  fs::rename(tmp, path);
}

int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  std::vector<json> dataset;
  try {
    cfg = load_run_config(options.config);
    if (options.seed) {
      cfg.engine.colony.seed = *options.seed;
      cfg.task.synth.seed = *options.seed;
    }
    if (cfg.task.kind == TaskBlock::Kind::dataset) dataset = read_dataset(cfg.task.dataset);
    // Construct providers once up front so bad settings fail before any output.
    if (cfg.generator) make_generator(*cfg.generator);
    if (!cfg.experts.empty()) make_experts(cfg);
    make_embedder(cfg.embedder);
  } catch (const ProviderFailure& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const Error& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }

  const fs::path base = options.config.parent_path();
  const fs::path metrics_path = resolve_output(cfg.metrics_path, base, options.out_dir);
  const fs::path result_path = resolve_output(cfg.result_path, base, options.out_dir);

  std::string metrics;
  json result;
  std::optional<std::string> failure;

  try {
    switch (cfg.task.kind) {
      case TaskBlock::Kind::synth: {
        auto ledger = std::make_shared<CallLedger>();
        const SynthInstance inst = generate_synth(cfg.task.synth, ledger);
        Engine engine(inst.graph, inst.expert_ptrs(), make_embedder(cfg.embedder), cfg.engine,
                      ledger);
        std::size_t completed = 0;
        engine.set_metrics_sink([&](const IterationMetrics& m) {
          append_metrics(metrics, m, std::nullopt);
          ++completed;
        });
        try {
          const RunResult run = engine.run();
          result = result_to_json(run, inst.graph, cfg.engine);
          auto oracle_embedder = make_embedder(cfg.embedder);
          const auto oracle = oracle_best(inst.graph, cfg.engine.weights, *oracle_embedder,
                                          inst.noiseless_experts());
          result["synth"] = {{"seed", inst.spec.seed},
                             {"depth", inst.spec.depth},
                             {"branching", inst.spec.branching},
                             {"separation", inst.spec.separation},
                             {"noise", inst.spec.noise},
                             {"planted_path", path_to_json(inst.planted)},
                             {"oracle_path", path_to_json(oracle.path)},
                             {"oracle_q", oracle.q},
                             {"recovered", oracle.path == run.best_path}};
          if (options.answer) {
            SynthGenerator gen(inst.spec);
            result["final_answer"] = gen.final_answer(inst.graph.problem(), run.best_chain);
          }
        } catch (const RunAborted& e) {
          failure = e.what();
          metrics += dump({{"aborted", true}, {"error", e.what()},
                           {"iterations_completed", completed}}) + '\n';
          result = {{"aborted", true}, {"error", e.what()}, {"iterations_completed", completed}};
        }
        break;
      }
      case TaskBlock::Kind::problem: {
        auto r = run_problem(cfg, cfg.task.problem, std::nullopt, options.answer, metrics);
        result = std::move(r.result);
        failure = std::move(r.failure);
        break;
      }
      case TaskBlock::Kind::dataset: {
        json problems = json::array();
        std::size_t answered = 0, matched = 0;
        for (const auto& item : dataset) {
          const std::string id = id_string(item["id"]);
          auto r = run_problem(cfg, item["problem"].get<std::string>(), id, options.answer,
                               metrics);
          json entry = {{"id", item["id"]}, {"result", std::move(r.result)}};
          if (options.answer && !r.failure && item.contains("answer")) {
            const std::string expected = normalize_whitespace(
                item["answer"].is_string() ? item["answer"].get<std::string>() : dump(item["answer"]));
            const std::string got =
                normalize_whitespace(entry["result"]["final_answer"].get<std::string>());
            entry["expected_answer"] = expected;
            entry["exact_match"] = got == expected;
            ++answered;
            matched += got == expected ? 1 : 0;
          }
          problems.push_back(std::move(entry));
          if (r.failure) {
            failure = std::move(r.failure);
            break;
          }
        }
        result = {{"problems", std::move(problems)}};
        if (answered) {
          result["exact_match_rate"] = static_cast<double>(matched) / static_cast<double>(answered);
        }
        if (failure) result["aborted"] = true;
        break;
      }
    }
  } catch (const ProviderFailure& e) {
    failure = e.what();
    metrics += dump({{"aborted", true}, {"error", e.what()}}) + '\n';
    result = {{"aborted", true}, {"error", e.what()}};
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  }

  try {
    write_file_atomic(metrics_path, metrics);
    write_file_atomic(result_path, dump(result, 2) + '\n');
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  }

  if (failure) {
    err << "provider failure: " << *failure << '\n';
    return kExitProviderFailure;
  }
  if (result.contains("best_path")) {
    out << "best_path=" << dump(result["best_path"]) << " iterations=" << result["iterations_run"]
        << " converged=" << (result["converged"].get<bool>() ? "true" : "false") << '\n';
  }
  out << "metrics: " << metrics_path.string() << "\nresult: " << result_path.string() << '\n';
  return kExitOk;
}

// ---- bench ----------------------------------------------------------------

BenchRun run_bench_instance(const BenchEntry& entry, std::uint64_t seed) {
  SynthSpec spec = entry.spec;
  spec.seed = seed;
  spec.experts = entry.engine.colony.ants;
  EngineConfig engine_cfg = entry.engine;
  engine_cfg.colony.seed = seed;

  auto ledger = std::make_shared<CallLedger>();
  const SynthInstance inst = generate_synth(spec, ledger);
  const RunResult run = acotot::run(inst.graph, inst.expert_ptrs(),
                                    std::make_shared<HashEmbedder>(), engine_cfg, ledger);
  HashEmbedder oracle_embedder;
  const auto oracle =
      oracle_best(inst.graph, engine_cfg.weights, oracle_embedder, inst.noiseless_experts());

  BenchRun r;
  r.label = entry.label;
  r.seed = seed;
  r.recovered = run.best_path == oracle.path;
  r.planted_optimal = oracle.path == inst.planted;
  r.converged = run.converged;
  r.iterations = run.iterations_run;
  r.concentration_ratio = run.history.back().concentration_ratio;
  r.agreement_rate = run.history.back().agreement_rate;
  r.calls = run.calls;

  std::size_t evaluations = 0, walks = 0;
  for (const auto& m : run.history) {
    for (const auto& p : m.ant_paths) {
      evaluations += evaluation_count(inst.graph, p);
      ++walks;
    }
  }
  const double mean_n = walks ? static_cast<double>(evaluations) / static_cast<double>(walks) : 0.0;
  r.predicted_calls = predicted_call_count(engine_cfg.colony.ants, mean_n, run.iterations_run,
                                           tree_generation_overhead(spec.depth, spec.branching));
  r.ledger_matches = r.predicted_calls == run.calls.heuristic + run.calls.tree_thoughts;
  return r;
}

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

template <class F>
double mean_of(const std::vector<BenchRun>& runs, F f) {
  double s = 0.0;
  for (const auto& r : runs) s += static_cast<double>(f(r));
  return runs.empty() ? 0.0 : s / static_cast<double>(runs.size());
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

}  // namespace

std::vector<BenchRow> run_bench(const std::vector<BenchEntry>& entries, std::size_t repeats,
                                std::size_t jobs) {
  struct Job {
    std::size_t row;
    std::uint64_t seed;
  };
  std::vector<Job> queue;
  std::vector<BenchRow> rows(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    rows[i].entry = entries[i];
    rows[i].runs.resize(repeats);
    for (std::size_t r = 0; r < repeats; ++r) queue.push_back({i, entries[i].spec.seed + r});
  }

  std::vector<std::exception_ptr> errors(queue.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t q; (q = next.fetch_add(1)) < queue.size();) {
      const auto& job = queue[q];
      try {
        rows[job.row].runs[job.seed - entries[job.row].spec.seed] =
            run_bench_instance(entries[job.row], job.seed);
      } catch (...) {
        errors[q] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::max<std::size_t>(1, std::min(jobs, queue.size()));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  for (auto& row : rows) {
    const auto& runs = row.runs;
    row.recovery_rate = mean_of(runs, [](const BenchRun& r) { return r.recovered; });
    row.planted_optimal_rate = mean_of(runs, [](const BenchRun& r) { return r.planted_optimal; });
    row.converged_rate = mean_of(runs, [](const BenchRun& r) { return r.converged; });
    std::vector<double> iters;
    for (const auto& r : runs) iters.push_back(static_cast<double>(r.iterations));
    row.median_iterations = median(iters);
    row.mean_concentration_ratio =
        mean_of(runs, [](const BenchRun& r) { return r.concentration_ratio; });
    row.mean_agreement_rate = mean_of(runs, [](const BenchRun& r) { return r.agreement_rate; });
    row.mean_tree_thoughts = mean_of(runs, [](const BenchRun& r) { return r.calls.tree_thoughts; });
    row.mean_heuristic_calls = mean_of(runs, [](const BenchRun& r) { return r.calls.heuristic; });
    row.mean_path_score_calls = mean_of(runs, [](const BenchRun& r) { return r.calls.path_score; });
    row.mean_embed_calls = mean_of(runs, [](const BenchRun& r) { return r.calls.embed; });
    row.mean_llm_calls = mean_of(runs, [](const BenchRun& r) { return r.calls.llm_total(); });
    row.ledger_match_rate = mean_of(runs, [](const BenchRun& r) { return r.ledger_matches; });
  }
  return rows;
}

int cmd_bench(const BenchOptions& options, std::ostream& out, std::ostream& err) {
  std::vector<BenchEntry> entries;
  try {
    if (options.repeats < 1) throw ConfigError("--repeats must be >= 1");
    entries = parse_bench_manifest(read_json_file(options.manifest));
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }

  std::vector<BenchRow> rows;
  try {
    rows = run_bench(entries, options.repeats, std::max<std::size_t>(options.jobs, 1));
  } catch (const ProviderFailure& e) {
    err << "provider failure: " << e.what() << '\n';
    return kExitProviderFailure;
  } catch (const Error& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }

  static constexpr const char* kColumns[] = {
      "label", "depth", "branching", "separation", "noise", "ants", "alpha", "beta", "rho",
      "max_iterations", "convergence_window", "repeats", "recovery_rate",
      "planted_optimal_rate", "converged_rate", "median_iterations",
      "mean_concentration_ratio", "mean_agreement_rate", "mean_tree_thoughts",
      "mean_heuristic_calls", "mean_path_score_calls", "mean_embed_calls", "mean_llm_calls",
      "ledger_match_rate"};

  std::ostringstream csv;
  for (std::size_t c = 0; c < std::size(kColumns); ++c) csv << (c ? "," : "") << kColumns[c];
  csv << '\n';
  json summary = json::array();
  for (const auto& row : rows) {
    const auto& e = row.entry;
    json j = {{"label", e.label},
              {"depth", e.spec.depth},
              {"branching", e.spec.branching},
              {"separation", e.spec.separation},
              {"noise", e.spec.noise},
              {"ants", e.engine.colony.ants},
              {"alpha", e.engine.colony.alpha},
              {"beta", e.engine.colony.beta},
              {"rho", e.engine.colony.rho},
              {"max_iterations", e.engine.max_iterations},
              {"convergence_window", e.engine.convergence_window},
              {"repeats", row.runs.size()},
              {"recovery_rate", row.recovery_rate},
              {"planted_optimal_rate", row.planted_optimal_rate},
              {"converged_rate", row.converged_rate},
              {"median_iterations", row.median_iterations},
              {"mean_concentration_ratio", row.mean_concentration_ratio},
              {"mean_agreement_rate", row.mean_agreement_rate},
              {"mean_tree_thoughts", row.mean_tree_thoughts},
              {"mean_heuristic_calls", row.mean_heuristic_calls},
              {"mean_path_score_calls", row.mean_path_score_calls},
              {"mean_embed_calls", row.mean_embed_calls},
              {"mean_llm_calls", row.mean_llm_calls},
              {"ledger_match_rate", row.ledger_match_rate}};
    for (std::size_t c = 0; c < std::size(kColumns); ++c) {
      const auto& v = j[kColumns[c]];
      csv << (c ? "," : "");
      if (v.is_string()) {
        std::string s = v.get<std::string>();
        if (s.find_first_of(",\"\n") != std::string::npos) {
          std::string q = "\"";
          for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
          s = q + "\"";
        }
        csv << s;
      } else if (v.is_number_float()) {
        csv << fmt(v.get<double>());
      } else {
        csv << dump(v);
      }
    }
    csv << '\n';
    json runs = json::array();
    for (const auto& r : row.runs) {
      runs.push_back({{"seed", r.seed},
                      {"recovered", r.recovered},
                      {"planted_optimal", r.planted_optimal},
                      {"converged", r.converged},
                      {"iterations", r.iterations},
                      {"concentration_ratio", r.concentration_ratio},
                      {"agreement_rate", r.agreement_rate},
                      {"calls", calls_to_json(r.calls)},
                      {"predicted_calls", r.predicted_calls},
                      {"ledger_matches", r.ledger_matches}});
    }
    j["runs"] = std::move(runs);
    summary.push_back(std::move(j));
  }

  const fs::path dir = options.out_dir ? *options.out_dir : options.manifest.parent_path();
  try {
    write_file_atomic(dir / "summary.csv", csv.str());
    write_file_atomic(dir / "summary.json", dump(summary, 2) + '\n');
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  }

  out << std::left << std::setw(16) << "label" << std::right << std::setw(7) << "alpha"
      << std::setw(6) << "beta" << std::setw(6) << "ants" << std::setw(10) << "recovery"
      << std::setw(10) << "med_iter" << std::setw(10) << "conc" << std::setw(10) << "agree"
      << std::setw(12) << "llm_calls" << '\n';
  for (const auto& row : rows) {
    out << std::left << std::setw(16) << row.entry.label << std::right << std::fixed
        << std::setprecision(2) << std::setw(7) << row.entry.engine.colony.alpha << std::setw(6)
        << row.entry.engine.colony.beta << std::setw(6) << row.entry.engine.colony.ants
        << std::setw(10) << row.recovery_rate << std::setw(10) << row.median_iterations
        << std::setw(10) << row.mean_concentration_ratio << std::setw(10)
        << row.mean_agreement_rate << std::setw(12) << std::setprecision(1)
        << row.mean_llm_calls << '\n';
  }
  out.unsetf(std::ios::floatfield);
  out << "summary: " << (dir / "summary.csv").string() << ", " << (dir / "summary.json").string()
      << '\n';
  return kExitOk;
}

// ---- inspect --------------------------------------------------------------

namespace {

std::string dot_escape(std::string_view text, std::size_t limit) {
  std::string s(text.substr(0, limit));
  if (text.size() > limit) s += "...";
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c == '\n' ? ' ' : c;
  }
  return out;
}

void print_report(const json& result, std::ostream& out) {
  if (!result.value("aborted", false)) {
    for (const char* key :
         {"best_path", "best_chain", "converged", "iterations_run", "convergence_window"}) {
      if (!result.contains(key)) throw ConfigError(std::string("result lacks '") + key + "'");
    }
  }
  if (result.contains("best_path")) path_from_json(result["best_path"]);
  if (result.value("aborted", false)) {
    out << "aborted: " << result.value("error", std::string("unknown error")) << '\n';
  }
  if (result.contains("best_chain")) {
    out << "best chain:\n";
    std::size_t i = 0;
    for (const auto& step : result["best_chain"]) {
      out << "  " << ++i << ". " << step.get<std::string>() << '\n';
    }
    if (i == 0) out << "  (root only)\n";
    out << "best_path=" << dump(result["best_path"]) << '\n';
  }
  if (result.contains("converged")) {
    out << "converged=" << (result["converged"].get<bool>() ? "true" : "false")
        << " W=" << result.at("convergence_window") << " iterations=" << result.at("iterations_run")
        << '\n';
  }
  if (result.contains("final_answer")) out << "final_answer=" << result["final_answer"] << '\n';
  if (result.contains("synth")) {
    const auto& s = result["synth"];
    out << "oracle_path=" << dump(s["oracle_path"]) << " recovered="
        << (s["recovered"].get<bool>() ? "true" : "false") << '\n';
  }
  if (result.contains("history") && !result["history"].empty()) {
    out << std::right << std::setw(5) << "iter" << std::setw(12) << "best_q" << std::setw(11)
        << "agreement" << std::setw(15) << "concentration" << std::setw(11) << "diversity"
        << std::setw(10) << "mean_len" << '\n';
    out << std::fixed;
    for (const auto& m : result["history"]) {
      out << std::setw(5) << m.at("iteration").get<std::size_t>() << std::setprecision(4)
          << std::setw(12) << m.at("best_q").get<double>() << std::setw(11)
          << m.at("agreement_rate").get<double>() << std::setw(15)
          << m.at("concentration_ratio").get<double>() << std::setw(11)
          << m.at("diversity").get<double>() << std::setw(10)
          << m.at("mean_path_length").get<double>() << '\n';
    }
    out.unsetf(std::ios::floatfield);
  }
  if (result.contains("pheromones")) {
    out << "pheromones:\n";
    std::vector<std::pair<std::pair<long, long>, double>> edges;
    std::size_t width = 0;
    for (const auto& [key, value] : result["pheromones"].items()) {
      const auto arrow = key.find("->");
      edges.push_back({{std::stol(key.substr(0, arrow)), std::stol(key.substr(arrow + 2))},
                       value.get<double>()});
      width = std::max(width, key.size());
    }
    std::sort(edges.begin(), edges.end());
    out << std::fixed << std::setprecision(6);
    for (const auto& [e, tau] : edges) {
      const std::string key = std::to_string(e.first) + "->" + std::to_string(e.second);
      out << "  " << std::left << std::setw(static_cast<int>(width)) << key << std::right << "  "
          << tau << '\n';
    }
    out.unsetf(std::ios::floatfield);
  }
}

}  // namespace

std::string render_dot(const json& result) {
  const auto& g = result.at("graph");
  const auto& ph = result.at("pheromones");
  double max_tau = 0.0;
  for (const auto& [key, v] : ph.items()) max_tau = std::max(max_tau, v.get<double>());
  if (!(max_tau > 0.0)) max_tau = 1.0;

  std::ostringstream os;
  os << "digraph reasoning {\n  rankdir=TB;\n  node [shape=box, fontsize=10];\n";
  const auto s0 = g.at("s0").get<NodeId>();
  const auto sf = g.at("sf").get<NodeId>();
  for (const auto& n : g.at("nodes")) {
    const auto id = n.at("id").get<NodeId>();
    const std::string label = id == s0   ? std::string("s0")
                              : id == sf ? std::string("sf")
                                         : dot_escape(n.at("text").get<std::string>(), 48);
    os << "  n" << id << " [label=\"" << label << "\"];\n";
  }
  for (const auto& e : g.at("edges")) {
    const auto from = e[0].get<NodeId>(), to = e[1].get<NodeId>();
    const double tau = ph.at(std::to_string(from) + "->" + std::to_string(to)).get<double>();
    char buf[96];
    std::snprintf(buf, sizeof buf, " [penwidth=%.6f, label=\"%.4f\"];\n", 8.0 * tau / max_tau,
                  tau);
    os << "  n" << from << " -> n" << to << buf;
  }
  os << "}\n";
  return os.str();
}

int cmd_inspect(const InspectOptions& options, std::ostream& out, std::ostream& err) {
  json doc;
  try {
    doc = read_json_file(options.result);
    if (!doc.is_object()) throw ConfigError("result document must be an object");
    if (options.dot && !doc.contains("graph")) {
      throw ConfigError("result holds no graph to render");
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  }

  try {
    if (options.dot && *options.dot == "-") {
      out << render_dot(doc);
      return kExitOk;
    }
    if (doc.contains("problems")) {
      for (const auto& p : doc["problems"]) {
        out << "== problem " << (p["id"].is_string() ? p["id"].get<std::string>() : dump(p["id"]))
            << " ==\n";
        print_report(p.at("result"), out);
      }
      if (doc.contains("exact_match_rate")) {
        out << "exact_match_rate=" << doc["exact_match_rate"].get<double>() << '\n';
      }
    } else {
      print_report(doc, out);
    }
    if (options.dot) {
      write_file_atomic(*options.dot, render_dot(doc));
      out << "dot: " << *options.dot << '\n';
    }
  } catch (const std::exception& e) {
    err << "error: corrupt result file: " << e.what() << '\n';
    return kExitConfigError;
  }
  return kExitOk;
}

}  // namespace acotot::cli
