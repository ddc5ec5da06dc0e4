#include "acotot_cli/config.hpp"

#include <array>
#include <fstream>
#include <limits>
#include <initializer_list>
#include <set>

#include "acotot/errors.hpp"

namespace acotot::cli {

using nlohmann::json;

namespace {

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
}

void check_keys(const json& j, const std::string& where,
                std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

double get_number(const json& j, const std::string& key) {
  if (!j.is_number()) throw ConfigError("'" + key + "' must be a number");
  return j.get<double>();
}

std::uint64_t get_count(const json& j, const std::string& key) {
  if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() &&
                                 j.get<std::int64_t>() < 0)) {
    throw ConfigError("'" + key + "' must be a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

int get_int(const json& j, const std::string& key) {
  if (!j.is_number_integer()) throw ConfigError("'" + key + "' must be an integer");
  const auto v = j.get<std::int64_t>();
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw ConfigError("'" + key + "' is out of range");
  }
  return static_cast<int>(v);
}

bool get_bool(const json& j, const std::string& key) {
  if (!j.is_boolean()) throw ConfigError("'" + key + "' must be true or false");
  return j.get<bool>();
}

std::string get_string(const json& j, const std::string& key) {
  if (!j.is_string()) throw ConfigError("'" + key + "' must be a string");
  return j.get<std::string>();
}

constexpr std::array<std::string_view, 14> kEngineKeys = {
    "ants",    "alpha",         "beta",           "rho",
    "tau0",    "tau_min",       "h_floor",        "seed",
    "elitism", "deposit_clamp", "max_iterations", "convergence_window",
    "weights", "parallelism"};

bool is_engine_key(const std::string& key) {
  for (auto k : kEngineKeys) {
    if (k == key) return true;
  }
  return false;
}

void apply_engine_key(const std::string& key, const json& v, EngineConfig& cfg) {
  auto& c = cfg.colony;
  if (key == "ants") c.ants = get_count(v, key);
  else if (key == "alpha") c.alpha = get_number(v, key);
  else if (key == "beta") c.beta = get_number(v, key);
  else if (key == "rho") c.rho = get_number(v, key);
  else if (key == "tau0") c.tau0 = get_number(v, key);
  else if (key == "tau_min") c.tau_min = get_number(v, key);
  else if (key == "h_floor") c.h_floor = get_number(v, key);
  else if (key == "seed") c.seed = get_count(v, key);
  else if (key == "elitism") c.elitism = get_bool(v, key);
  else if (key == "deposit_clamp") c.deposit_clamp = get_bool(v, key);
  else if (key == "max_iterations") cfg.max_iterations = get_count(v, key);
  else if (key == "convergence_window") cfg.convergence_window = get_count(v, key);
  else if (key == "parallelism") cfg.parallelism = get_count(v, key);
  else if (key == "weights") {
    if (v.is_array()) {
      if (v.size() != 3) throw ConfigError("'weights' must hold three numbers");
      cfg.weights = {get_number(v[0], "weights"), get_number(v[1], "weights"),
                     get_number(v[2], "weights")};
    } else {
      require_object(v, "weights");
      check_keys(v, "weights", {"coherence", "length", "moe"});
      if (v.contains("coherence")) cfg.weights.coherence = get_number(v["coherence"], "coherence");
      if (v.contains("length")) cfg.weights.length = get_number(v["length"], "length");
      if (v.contains("moe")) cfg.weights.moe = get_number(v["moe"], "moe");
    }
  } else {
    throw ConfigError("unknown key '" + key + "' in engine");
  }
}

void apply_synth_key(const std::string& key, const json& v, SynthSpec& spec) {
  if (key == "seed") spec.seed = get_count(v, key);
  else if (key == "depth") spec.depth = get_int(v, key);
  else if (key == "branching") spec.branching = get_int(v, key);
  else if (key == "separation") spec.separation = get_number(v, key);
  else if (key == "noise") spec.noise = get_number(v, key);
  else throw ConfigError("unknown key '" + key + "' in synth spec");
}

ProviderBlock parse_provider(const json& j, const std::string& where,
                             std::initializer_list<std::string_view> kinds) {
  require_object(j, where);
  check_keys(j, where,
             {"kind", "endpoint", "model", "role", "auth_env_var", "auth_header", "timeout_ms",
              "max_retries", "initial_backoff_ms", "temperature", "max_in_flight",
              "system_prompt", "seed", "inject_shared_duplicate", "dimension", "planted",
              "hit_score", "miss_score", "noise"});
  ProviderBlock b;
  if (!j.contains("kind")) throw ConfigError(where + " needs a 'kind'");
  b.kind = get_string(j["kind"], "kind");
  bool known = false;
  for (auto k : kinds) known = known || b.kind == k;
  if (!known) throw ConfigError("unsupported kind '" + b.kind + "' in " + where);

  if (j.contains("endpoint")) b.http.url = get_string(j["endpoint"], "endpoint");
  if (j.contains("model")) b.http.model = get_string(j["model"], "model");
  if (j.contains("auth_env_var")) b.http.auth_env_var = get_string(j["auth_env_var"], "auth_env_var");
  if (j.contains("auth_header")) b.http.auth_header = get_string(j["auth_header"], "auth_header");
  if (j.contains("timeout_ms")) b.http.timeout_ms = get_int(j["timeout_ms"], "timeout_ms");
  if (j.contains("max_retries")) b.http.max_retries = get_int(j["max_retries"], "max_retries");
  if (j.contains("initial_backoff_ms")) {
    b.http.initial_backoff_ms = get_int(j["initial_backoff_ms"], "initial_backoff_ms");
  }
  if (j.contains("temperature")) b.http.temperature = get_number(j["temperature"], "temperature");
  if (j.contains("max_in_flight")) b.http.max_in_flight = get_count(j["max_in_flight"], "max_in_flight");
  if (j.contains("role")) {
    b.role = get_string(j["role"], "role");
    parse_role(*b.role);
  }
  if (j.contains("system_prompt")) b.system_prompt = get_string(j["system_prompt"], "system_prompt");
  if (j.contains("seed")) b.seed = get_count(j["seed"], "seed");
  if (j.contains("inject_shared_duplicate")) {
    b.inject_shared_duplicate = get_bool(j["inject_shared_duplicate"], "inject_shared_duplicate");
  }
  if (j.contains("dimension")) b.dimension = get_count(j["dimension"], "dimension");
  if (j.contains("planted")) {
    if (!j["planted"].is_array()) throw ConfigError("'planted' must be a list of texts");
    for (const auto& t : j["planted"]) b.planted.push_back(normalize_whitespace(get_string(t, "planted")));
  }
  if (j.contains("hit_score")) b.hit_score = get_number(j["hit_score"], "hit_score");
  if (j.contains("miss_score")) b.miss_score = get_number(j["miss_score"], "miss_score");
  if (j.contains("noise")) b.noise = get_number(j["noise"], "noise");

  if (b.kind == "http") {
    if (b.http.url.empty()) throw ConfigError(where + " of kind http needs an 'endpoint'");
    b.http.validate();
  }
  if ((b.kind == "hash" || b.kind == "mock" || b.kind == "http") && b.dimension == 0) {
    throw ConfigError("'dimension' must be >= 1");
  }
  return b;
}

}  // namespace

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + " is not valid JSON: " + e.what());
  }
}

void apply_engine_settings(const json& doc, EngineConfig& cfg) {
  require_object(doc, "engine");
  for (const auto& [key, value] : doc.items()) apply_engine_key(key, value, cfg);
}

RunConfig parse_run_config(const json& doc, const std::filesystem::path& base_dir) {
  require_object(doc, "config");
  check_keys(doc, "config", {"engine", "tot", "providers", "task", "output"});
  RunConfig cfg;
  cfg.embedder.kind = "hash";

  if (doc.contains("engine")) apply_engine_settings(doc["engine"], cfg.engine);
  cfg.engine.validate();

  if (doc.contains("tot")) {
    const auto& t = doc["tot"];
    require_object(t, "tot");
    check_keys(t, "tot", {"max_depth", "branches", "node_cap"});
    if (t.contains("max_depth")) cfg.tot.max_depth = get_int(t["max_depth"], "max_depth");
    if (t.contains("branches")) cfg.tot.branches = get_int(t["branches"], "branches");
    if (t.contains("node_cap")) cfg.tot.node_cap = get_count(t["node_cap"], "node_cap");
  }
  cfg.tot.validate();

  if (!doc.contains("task")) throw ConfigError("config needs a 'task'");
  const auto& task = doc["task"];
  require_object(task, "task");
  check_keys(task, "task", {"problem", "synth", "dataset"});
  if (task.size() != 1) {
    throw ConfigError("task must name exactly one of 'problem', 'synth' or 'dataset'");
  }
  if (task.contains("problem")) {
    cfg.task.kind = TaskBlock::Kind::problem;
    cfg.task.problem = get_string(task["problem"], "problem");
    if (normalize_whitespace(cfg.task.problem).empty()) throw ConfigError("problem text is empty");
  } else if (task.contains("synth")) {
    cfg.task.kind = TaskBlock::Kind::synth;
    const auto& s = task["synth"];
    require_object(s, "synth");
    cfg.task.synth.seed = cfg.engine.colony.seed;
    for (const auto& [key, value] : s.items()) apply_synth_key(key, value, cfg.task.synth);
    cfg.task.synth.experts = cfg.engine.colony.ants;
    cfg.task.synth.validate();
  } else {
    cfg.task.kind = TaskBlock::Kind::dataset;
    cfg.task.dataset = base_dir / get_string(task["dataset"], "dataset");
  }

  if (doc.contains("providers")) {
    const auto& p = doc["providers"];
    require_object(p, "providers");
    check_keys(p, "providers", {"generator", "experts", "embedder"});
    if (p.contains("generator")) {
      cfg.generator = parse_provider(p["generator"], "providers.generator", {"mock", "http"});
    }
    if (p.contains("experts")) {
      if (!p["experts"].is_array()) throw ConfigError("providers.experts must be a list");
      for (const auto& e : p["experts"]) {
        cfg.experts.push_back(parse_provider(e, "providers.experts", {"mock", "planted", "http"}));
      }
    }
    if (p.contains("embedder")) {
      cfg.embedder = parse_provider(p["embedder"], "providers.embedder", {"hash", "mock", "http"});
    }
  }
  if (cfg.task.kind != TaskBlock::Kind::synth) {
    if (!cfg.generator) throw ConfigError("providers.generator is required for this task");
    const auto n = cfg.experts.size();
    if (n != 1 && n != cfg.engine.colony.ants) {
      throw ConfigError("providers.experts must hold one block or one per ant (" +
                        std::to_string(cfg.engine.colony.ants) + ")");
    }
  }

  if (doc.contains("output")) {
    const auto& o = doc["output"];
    require_object(o, "output");
    check_keys(o, "output", {"metrics", "result"});
    if (o.contains("metrics")) cfg.metrics_path = get_string(o["metrics"], "metrics");
    if (o.contains("result")) cfg.result_path = get_string(o["result"], "result");
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  return parse_run_config(read_json_file(path), path.parent_path());
}

std::vector<BenchEntry> parse_bench_manifest(const json& doc) {
  if (!doc.is_array() || doc.empty()) throw ConfigError("manifest must be a non-empty list");
  std::vector<BenchEntry> out;
  for (const auto& item : doc) {
    require_object(item, "manifest entry");
    BenchEntry entry;
    for (const auto& [key, value] : item.items()) {
      if (key == "label") entry.label = get_string(value, key);
      else if (key == "seed") entry.spec.seed = entry.engine.colony.seed = get_count(value, key);
      else if (is_engine_key(key)) apply_engine_key(key, value, entry.engine);
      else apply_synth_key(key, value, entry.spec);
    }
    entry.engine.validate();
    entry.spec.experts = entry.engine.colony.ants;
    entry.spec.validate();
    if (entry.label.empty()) entry.label = "spec" + std::to_string(out.size() + 1);
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace acotot::cli
