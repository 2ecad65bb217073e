#pragma once

// Experiment configuration: one JSON document with a schema version. Unknown
// keys are rejected so typos surface at load time. See samples/ for examples.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rsa/anneal/kernel.hpp"
#include "rsa/anneal/schedule.hpp"
#include "rsa/energy/perceptron.hpp"

namespace rsa::io {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DatasetSpec {
  std::string kind = "mnist";  // mnist | synthetic
  std::string data_dir;        // empty: RSA_DATA_DIR
  std::size_t train_size = 10000;  // uniform subsample of the training file (0: all)
  std::size_t test_size = 0;       // 0: whole test file
  std::uint64_t subsample_seed = 0;
  std::size_t synthetic_count = 30;
  std::size_t synthetic_dim = 100;
  std::uint64_t synthetic_seed = 1;
};

struct ModelSpec {
  std::string kind = "cross-entropy";  // cross-entropy | perceptron
  std::string loss = "mean";           // mean | sum (cross-entropy scaling)
  TieRule tie_rule = TieRule::strict;
};

struct ScheduleSpec {
  std::string mode = "exponential";  // exponential | piecewise
  double beta_i = 100.0;
  double beta_f = 100000.0;
  double gamma = 0.0;
  std::optional<double> gamma_f;  // set: gamma interpolated from gamma to gamma_f
  std::uint64_t iterations = 50000;
  std::vector<Stage> stages;

  [[nodiscard]] AnnealSchedule build() const {
    if (mode == "piecewise") return AnnealSchedule::piecewise(stages);
    if (gamma_f) return AnnealSchedule::exponential(beta_i, beta_f, iterations, gamma, *gamma_f);
    return AnnealSchedule::exponential(beta_i, beta_f, iterations, gamma);
  }
};

struct SweepSpec {
  std::vector<double> gammas;
  std::vector<double> beta_i;
  std::vector<double> beta_f;
  std::size_t repetitions = 1;
  double confidence = 0.95;
};

struct RobustnessSpec {
  std::vector<double> p = {0.0, 0.001, 0.01, 0.1, 0.5};
  std::size_t repetitions = 1000;
  std::string target = "best-replica";  // best-replica | per-replica
  std::vector<double> gammas = {0.0};
};

struct ExperimentConfig {
  int schema_version = kSchemaVersion;
  DatasetSpec dataset;
  ModelSpec model;
  ScheduleSpec schedule;
  std::size_t replicas = 1;
  std::uint64_t seed = 1;
  std::string output;
  std::string format = "csv";
  KernelKind kernel = KernelKind::combined;
  std::uint64_t record_every = 0;
  SweepSpec sweep;
  RobustnessSpec robustness;

  void validate() const;
};

inline KernelKind parse_kernel(const std::string& s) {
  if (s == "two-stage") return KernelKind::two_stage;
  if (s == "combined") return KernelKind::combined;
  throw ConfigError("unknown kernel '" + s + "' (expected two-stage or combined)");
}

inline TieRule parse_tie_rule(const std::string& s) {
  if (s == "strict") return TieRule::strict;
  if (s == "lenient") return TieRule::lenient;
  throw ConfigError("unknown tie rule '" + s + "' (expected strict or lenient)");
}

inline std::string to_string(TieRule r) { return r == TieRule::strict ? "strict" : "lenient"; }

inline Json to_json(const ExperimentConfig& c) {
  Json stages = Json::array();
  for (const auto& s : c.schedule.stages) stages.push_back({{"beta", s.beta}, {"gamma", s.gamma}, {"length", s.length}});
  Json sched = {{"mode", c.schedule.mode},   {"beta_i", c.schedule.beta_i},         {"beta_f", c.schedule.beta_f},
                {"gamma", c.schedule.gamma}, {"iterations", c.schedule.iterations}, {"stages", stages}};
  if (c.schedule.gamma_f) sched["gamma_f"] = *c.schedule.gamma_f;
  return {
      {"schema_version", c.schema_version},
      {"dataset",
       {{"kind", c.dataset.kind},
        {"data_dir", c.dataset.data_dir},
        {"train_size", c.dataset.train_size},
        {"test_size", c.dataset.test_size},
        {"subsample_seed", c.dataset.subsample_seed},
        {"synthetic_count", c.dataset.synthetic_count},
        {"synthetic_dim", c.dataset.synthetic_dim},
        {"synthetic_seed", c.dataset.synthetic_seed}}},
      {"model", {{"kind", c.model.kind}, {"loss", c.model.loss}, {"tie_rule", to_string(c.model.tie_rule)}}},
      {"schedule", sched},
      {"replicas", c.replicas},
      {"seed", c.seed},
      {"output", c.output},
      {"format", c.format},
      {"kernel", to_string(c.kernel)},
      {"record_every", c.record_every},
      {"sweep",
       {{"gammas", c.sweep.gammas},
        {"beta_i", c.sweep.beta_i},
        {"beta_f", c.sweep.beta_f},
        {"repetitions", c.sweep.repetitions},
        {"confidence", c.sweep.confidence}}},
      {"robustness",
       {{"p", c.robustness.p},
        {"repetitions", c.robustness.repetitions},
        {"target", c.robustness.target},
        {"gammas", c.robustness.gammas}}},
  };
}

namespace detail {

inline void reject_unknown(const Json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) throw ConfigError(where + ": unknown key '" + it.key() + "'");
  }
}

template <class T>
void take(const Json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

}  // namespace detail

inline ExperimentConfig config_from_json(const Json& j) {
  using detail::take;
  ExperimentConfig c;
  detail::reject_unknown(j,
                         {"schema_version", "dataset", "model", "schedule", "replicas", "seed", "output", "format",
                          "kernel", "record_every", "sweep", "robustness"},
                         "config");
  if (!j.contains("schema_version")) throw ConfigError("config: missing schema_version");
  take(j, "schema_version", c.schema_version, "config");
  if (c.schema_version != kSchemaVersion)
    throw ConfigError("config: unsupported schema_version " + std::to_string(c.schema_version));
  if (j.contains("dataset")) {
    const auto& d = j["dataset"];
    detail::reject_unknown(d,
                           {"kind", "data_dir", "train_size", "test_size", "subsample_seed", "synthetic_count",
                            "synthetic_dim", "synthetic_seed"},
                           "dataset");
    take(d, "kind", c.dataset.kind, "dataset");
    take(d, "data_dir", c.dataset.data_dir, "dataset");
    take(d, "train_size", c.dataset.train_size, "dataset");
    take(d, "test_size", c.dataset.test_size, "dataset");
    take(d, "subsample_seed", c.dataset.subsample_seed, "dataset");
    take(d, "synthetic_count", c.dataset.synthetic_count, "dataset");
    take(d, "synthetic_dim", c.dataset.synthetic_dim, "dataset");
    take(d, "synthetic_seed", c.dataset.synthetic_seed, "dataset");
  }
  if (j.contains("model")) {
    const auto& m = j["model"];
    detail::reject_unknown(m, {"kind", "loss", "tie_rule"}, "model");
    take(m, "kind", c.model.kind, "model");
    take(m, "loss", c.model.loss, "model");
    std::string tie = to_string(c.model.tie_rule);
    take(m, "tie_rule", tie, "model");
    c.model.tie_rule = parse_tie_rule(tie);
  }
  if (j.contains("schedule")) {
    const auto& s = j["schedule"];
    detail::reject_unknown(s, {"mode", "beta_i", "beta_f", "gamma", "gamma_f", "iterations", "stages"}, "schedule");
    take(s, "mode", c.schedule.mode, "schedule");
    take(s, "beta_i", c.schedule.beta_i, "schedule");
    take(s, "beta_f", c.schedule.beta_f, "schedule");
    take(s, "gamma", c.schedule.gamma, "schedule");
    if (s.contains("gamma_f") && !s["gamma_f"].is_null()) {
      double g = 0.0;
      take(s, "gamma_f", g, "schedule");
      c.schedule.gamma_f = g;
    }
    take(s, "iterations", c.schedule.iterations, "schedule");
    if (s.contains("stages")) {
      for (const auto& st : s["stages"]) {
        detail::reject_unknown(st, {"beta", "gamma", "length"}, "schedule.stages[]");
        Stage x;
        take(st, "beta", x.beta, "schedule.stages[]");
        take(st, "gamma", x.gamma, "schedule.stages[]");
        take(st, "length", x.length, "schedule.stages[]");
        c.schedule.stages.push_back(x);
      }
    }
  }
  take(j, "replicas", c.replicas, "config");
  take(j, "seed", c.seed, "config");
  take(j, "output", c.output, "config");
  take(j, "format", c.format, "config");
  std::string kernel = to_string(c.kernel);
  take(j, "kernel", kernel, "config");
  c.kernel = parse_kernel(kernel);
  take(j, "record_every", c.record_every, "config");
  if (j.contains("sweep")) {
    const auto& s = j["sweep"];
    detail::reject_unknown(s, {"gammas", "beta_i", "beta_f", "repetitions", "confidence"}, "sweep");
    take(s, "gammas", c.sweep.gammas, "sweep");
    take(s, "beta_i", c.sweep.beta_i, "sweep");
    take(s, "beta_f", c.sweep.beta_f, "sweep");
    take(s, "repetitions", c.sweep.repetitions, "sweep");
    take(s, "confidence", c.sweep.confidence, "sweep");
  }
  if (j.contains("robustness")) {
    const auto& r = j["robustness"];
    detail::reject_unknown(r, {"p", "repetitions", "target", "gammas"}, "robustness");
    take(r, "p", c.robustness.p, "robustness");
    take(r, "repetitions", c.robustness.repetitions, "robustness");
    take(r, "target", c.robustness.target, "robustness");
    take(r, "gammas", c.robustness.gammas, "robustness");
  }
  c.validate();
  return c;
}

inline void ExperimentConfig::validate() const {
  if (dataset.kind != "mnist" && dataset.kind != "synthetic")
    throw ConfigError("dataset.kind must be mnist or synthetic");
  if (model.kind != "cross-entropy" && model.kind != "perceptron")
    throw ConfigError("model.kind must be cross-entropy or perceptron");
  if (model.loss != "mean" && model.loss != "sum") throw ConfigError("model.loss must be mean or sum");
  if (dataset.kind == "synthetic" && model.kind != "perceptron")
    throw ConfigError("synthetic datasets need model.kind = perceptron");
  if (dataset.kind == "mnist" && model.kind != "cross-entropy")
    throw ConfigError("mnist datasets need model.kind = cross-entropy");
  if (schedule.mode != "exponential" && schedule.mode != "piecewise")
    throw ConfigError("schedule.mode must be exponential or piecewise");
  if (replicas == 0) throw ConfigError("replicas must be >= 1");
  if (format != "csv" && format != "jsonl") throw ConfigError("format must be csv or jsonl");
  if (sweep.repetitions == 0) throw ConfigError("sweep.repetitions must be >= 1");
  if (!(sweep.confidence > 0.0 && sweep.confidence < 1.0)) throw ConfigError("sweep.confidence must be in (0,1)");
  if (robustness.repetitions == 0) throw ConfigError("robustness.repetitions must be >= 1");
  for (double p : robustness.p)
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("robustness.p values must lie in [0,1]");
  if (robustness.target != "best-replica" && robustness.target != "per-replica")
    throw ConfigError("robustness.target must be best-replica or per-replica");
  try {
    (void)schedule.build();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("schedule: ") + e.what());
  }
  if (!dataset.data_dir.empty() && !std::filesystem::is_directory(dataset.data_dir))
    throw ConfigError("dataset.data_dir '" + dataset.data_dir + "' does not exist");
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

/// FNV-1a 64 over the canonical dump. nlohmann objects keep keys sorted, so
/// the hash does not depend on field order in the source file.
inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << v;
  return os.str();
}

/// Hash of the configuration excluding the output location.
inline std::string config_hash(const ExperimentConfig& c) {
  Json j = to_json(c);
  j.erase("output");
  j.erase("format");
  return hex64(fnv1a64(j.dump()));
}

}  // namespace rsa::io
