#pragma once

// Result persistence: CSV (fixed columns, 6 significant digits, per-replica
// values joined with ';', no trajectory) and JSON lines (full record).
//
// CSV columns of ResultRecord, in order:
//   run_id, config_hash, seed, command, point, repetition, gamma, beta_i, beta_f,
//   replicas, iterations, active_transitions, best_replica,
//   train_loss, train_accuracy, test_loss, test_accuracy   (';'-joined per replica)
//   best_train_accuracy, best_test_accuracy, mean_train_accuracy, mean_test_accuracy,
//   wall_seconds, timestamp
// Files are opened for appending; the header is written only to empty files.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rsa/anneal/chain.hpp"

namespace rsa::io {

struct ResultRecord {
  std::string run_id;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string command;
  std::size_t point = 0;       // grid index within a sweep
  std::size_t repetition = 0;  // repetition index at that point
  double gamma = 0.0;
  double beta_i = 0.0;
  double beta_f = 0.0;
  std::size_t replicas = 1;
  std::uint64_t iterations = 0;
  std::uint64_t active_transitions = 0;
  std::size_t best_replica = 0;
  std::vector<double> train_loss;
  std::vector<double> train_accuracy;
  std::vector<double> test_loss;
  std::vector<double> test_accuracy;
  double wall_seconds = 0.0;
  std::string timestamp;
  std::vector<TrajectorySample> trajectory;

  [[nodiscard]] double best_train_accuracy() const { return pick(train_accuracy); }
  [[nodiscard]] double best_test_accuracy() const { return pick(test_accuracy); }
  [[nodiscard]] double mean_train_accuracy() const { return mean(train_accuracy); }
  [[nodiscard]] double mean_test_accuracy() const { return mean(test_accuracy); }

  /// Equality on everything except wall time and timestamp.
  [[nodiscard]] bool same_result(const ResultRecord& o) const {
    return run_id == o.run_id && config_hash == o.config_hash && seed == o.seed && command == o.command &&
           point == o.point && repetition == o.repetition && gamma == o.gamma && beta_i == o.beta_i &&
           beta_f == o.beta_f && replicas == o.replicas && iterations == o.iterations &&
           active_transitions == o.active_transitions && best_replica == o.best_replica &&
           train_loss == o.train_loss && train_accuracy == o.train_accuracy && test_loss == o.test_loss &&
           test_accuracy == o.test_accuracy && trajectory == o.trajectory;
  }

 private:
  [[nodiscard]] double pick(const std::vector<double>& v) const {
    return best_replica < v.size() ? v[best_replica] : NAN;
  }
  [[nodiscard]] static double mean(const std::vector<double>& v) {
    if (v.empty()) return NAN;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  }
};

/// One point of a robustness curve.
struct CurveRecord {
  std::string run_id;
  std::string config_hash;
  std::uint64_t seed = 0;
  double gamma = 0.0;
  double p = 0.0;
  std::size_t flips = 0;
  std::size_t repetitions = 0;
  double mean_accuracy = 0.0;
  double ci_half_width = 0.0;
  std::string timestamp;

  [[nodiscard]] bool same_result(const CurveRecord& o) const {
    return run_id == o.run_id && config_hash == o.config_hash && seed == o.seed && gamma == o.gamma && p == o.p &&
           flips == o.flips && repetitions == o.repetitions && mean_accuracy == o.mean_accuracy &&
           ci_half_width == o.ci_half_width;
  }
};

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

/// Value as printed in CSV (6 significant digits).
inline std::string format6(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

inline double round6(double v) { return std::stod(format6(v)); }

inline std::vector<double> round6(const std::vector<double>& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (double x : v) out.push_back(round6(x));
  return out;
}

/// The record as it reads back from CSV.
inline ResultRecord csv_view(ResultRecord r) {
  r.gamma = round6(r.gamma);
  r.beta_i = round6(r.beta_i);
  r.beta_f = round6(r.beta_f);
  r.train_loss = round6(r.train_loss);
  r.train_accuracy = round6(r.train_accuracy);
  r.test_loss = round6(r.test_loss);
  r.test_accuracy = round6(r.test_accuracy);
  r.wall_seconds = round6(r.wall_seconds);
  r.trajectory.clear();
  return r;
}

inline CurveRecord csv_view(CurveRecord r) {
  r.gamma = round6(r.gamma);
  r.p = round6(r.p);
  r.mean_accuracy = round6(r.mean_accuracy);
  r.ci_half_width = round6(r.ci_half_width);
  return r;
}

namespace detail {

inline std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) s += ';';
    s += format6(v[k]);
  }
  return s;
}

inline std::vector<double> split_doubles(const std::string& s) {
  std::vector<double> out;
  if (s.empty()) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ';')) out.push_back(std::stod(item));
  return out;
}

inline std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline bool needs_header(const std::filesystem::path& path) {
  std::error_code ec;
  return !std::filesystem::exists(path, ec) || std::filesystem::file_size(path, ec) == 0;
}

inline std::ofstream open_append(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace detail

inline const char* kResultCsvHeader =
    "run_id,config_hash,seed,command,point,repetition,gamma,beta_i,beta_f,replicas,iterations,"
    "active_transitions,best_replica,train_loss,train_accuracy,test_loss,test_accuracy,"
    "best_train_accuracy,best_test_accuracy,mean_train_accuracy,mean_test_accuracy,wall_seconds,timestamp";

inline const char* kCurveCsvHeader =
    "run_id,config_hash,seed,gamma,p,flips,repetitions,mean_accuracy,ci_half_width,timestamp";

inline std::string to_csv_row(const ResultRecord& r) {
  std::ostringstream os;
  os << r.run_id << ',' << r.config_hash << ',' << r.seed << ',' << r.command << ',' << r.point << ','
     << r.repetition << ',' << format6(r.gamma) << ',' << format6(r.beta_i) << ',' << format6(r.beta_f) << ','
     << r.replicas << ',' << r.iterations << ',' << r.active_transitions << ',' << r.best_replica << ','
     << detail::join(r.train_loss) << ',' << detail::join(r.train_accuracy) << ',' << detail::join(r.test_loss)
     << ',' << detail::join(r.test_accuracy) << ',' << format6(r.best_train_accuracy()) << ','
     << format6(r.best_test_accuracy()) << ',' << format6(r.mean_train_accuracy()) << ','
     << format6(r.mean_test_accuracy()) << ',' << format6(r.wall_seconds) << ',' << r.timestamp;
  return os.str();
}

inline std::string to_csv_row(const CurveRecord& r) {
  std::ostringstream os;
  os << r.run_id << ',' << r.config_hash << ',' << r.seed << ',' << format6(r.gamma) << ',' << format6(r.p) << ','
     << r.flips << ',' << r.repetitions << ',' << format6(r.mean_accuracy) << ',' << format6(r.ci_half_width) << ','
     << r.timestamp;
  return os.str();
}

inline nlohmann::json to_json(const ResultRecord& r) {
  nlohmann::json traj = nlohmann::json::array();
  for (const auto& t : r.trajectory)
    traj.push_back({{"iteration", t.iteration}, {"total_energy", t.total_energy}, {"accuracies", t.accuracies}});
  return {{"run_id", r.run_id},
          {"config_hash", r.config_hash},
          {"seed", r.seed},
          {"command", r.command},
          {"point", r.point},
          {"repetition", r.repetition},
          {"gamma", r.gamma},
          {"beta_i", r.beta_i},
          {"beta_f", r.beta_f},
          {"replicas", r.replicas},
          {"iterations", r.iterations},
          {"active_transitions", r.active_transitions},
          {"best_replica", r.best_replica},
          {"train_loss", r.train_loss},
          {"train_accuracy", r.train_accuracy},
          {"test_loss", r.test_loss},
          {"test_accuracy", r.test_accuracy},
          {"wall_seconds", r.wall_seconds},
          {"timestamp", r.timestamp},
          {"trajectory", traj}};
}

inline nlohmann::json to_json(const CurveRecord& r) {
  return {{"run_id", r.run_id},       {"config_hash", r.config_hash},     {"seed", r.seed},
          {"gamma", r.gamma},         {"p", r.p},                         {"flips", r.flips},
          {"repetitions", r.repetitions}, {"mean_accuracy", r.mean_accuracy}, {"ci_half_width", r.ci_half_width},
          {"timestamp", r.timestamp}};
}

inline ResultRecord result_from_json(const nlohmann::json& j) {
  ResultRecord r;
  r.run_id = j.at("run_id").get<std::string>();
  r.config_hash = j.at("config_hash").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.command = j.at("command").get<std::string>();
  r.point = j.at("point").get<std::size_t>();
  r.repetition = j.at("repetition").get<std::size_t>();
  r.gamma = j.at("gamma").get<double>();
  r.beta_i = j.at("beta_i").get<double>();
  r.beta_f = j.at("beta_f").get<double>();
  r.replicas = j.at("replicas").get<std::size_t>();
  r.iterations = j.at("iterations").get<std::uint64_t>();
  r.active_transitions = j.at("active_transitions").get<std::uint64_t>();
  r.best_replica = j.at("best_replica").get<std::size_t>();
  r.train_loss = j.at("train_loss").get<std::vector<double>>();
  r.train_accuracy = j.at("train_accuracy").get<std::vector<double>>();
  r.test_loss = j.at("test_loss").get<std::vector<double>>();
  r.test_accuracy = j.at("test_accuracy").get<std::vector<double>>();
  r.wall_seconds = j.at("wall_seconds").get<double>();
  r.timestamp = j.at("timestamp").get<std::string>();
  for (const auto& t : j.at("trajectory"))
    r.trajectory.push_back(TrajectorySample{t.at("iteration").get<std::uint64_t>(), t.at("total_energy").get<double>(),
                                            t.at("accuracies").get<std::vector<double>>()});
  return r;
}

inline CurveRecord curve_from_json(const nlohmann::json& j) {
  CurveRecord r;
  r.run_id = j.at("run_id").get<std::string>();
  r.config_hash = j.at("config_hash").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.gamma = j.at("gamma").get<double>();
  r.p = j.at("p").get<double>();
  r.flips = j.at("flips").get<std::size_t>();
  r.repetitions = j.at("repetitions").get<std::size_t>();
  r.mean_accuracy = j.at("mean_accuracy").get<double>();
  r.ci_half_width = j.at("ci_half_width").get<double>();
  r.timestamp = j.at("timestamp").get<std::string>();
  return r;
}

inline ResultRecord result_from_csv_row(const std::string& line) {
  const auto f = detail::split_fields(line);
  if (f.size() != 23) throw std::runtime_error("result CSV row has " + std::to_string(f.size()) + " fields, expected 23");
  ResultRecord r;
  r.run_id = f[0];
  r.config_hash = f[1];
  r.seed = std::stoull(f[2]);
  r.command = f[3];
  r.point = std::stoull(f[4]);
  r.repetition = std::stoull(f[5]);
  r.gamma = std::stod(f[6]);
  r.beta_i = std::stod(f[7]);
  r.beta_f = std::stod(f[8]);
  r.replicas = std::stoull(f[9]);
  r.iterations = std::stoull(f[10]);
  r.active_transitions = std::stoull(f[11]);
  r.best_replica = std::stoull(f[12]);
  r.train_loss = detail::split_doubles(f[13]);
  r.train_accuracy = detail::split_doubles(f[14]);
  r.test_loss = detail::split_doubles(f[15]);
  r.test_accuracy = detail::split_doubles(f[16]);
  r.wall_seconds = std::stod(f[21]);
  r.timestamp = f[22];
  return r;
}

inline CurveRecord curve_from_csv_row(const std::string& line) {
  const auto f = detail::split_fields(line);
  if (f.size() != 10) throw std::runtime_error("curve CSV row has " + std::to_string(f.size()) + " fields, expected 10");
  CurveRecord r;
  r.run_id = f[0];
  r.config_hash = f[1];
  r.seed = std::stoull(f[2]);
  r.gamma = std::stod(f[3]);
  r.p = std::stod(f[4]);
  r.flips = std::stoull(f[5]);
  r.repetitions = std::stoull(f[6]);
  r.mean_accuracy = std::stod(f[7]);
  r.ci_half_width = std::stod(f[8]);
  r.timestamp = f[9];
  return r;
}

template <class Record>
const char* csv_header();
template <>
inline const char* csv_header<ResultRecord>() { return kResultCsvHeader; }
template <>
inline const char* csv_header<CurveRecord>() { return kCurveCsvHeader; }

/// Appends records to `path` in "csv" or "jsonl" format.
template <class Record>
void write_results(const std::vector<Record>& records, const std::filesystem::path& path, const std::string& format) {
  if (format != "csv" && format != "jsonl") throw std::invalid_argument("write_results: unknown format " + format);
  const bool header = format == "csv" && detail::needs_header(path);
  auto out = detail::open_append(path);
  if (header) out << csv_header<Record>() << '\n';
  for (const auto& r : records) {
    if (format == "csv") out << to_csv_row(r) << '\n';
    else out << to_json(r).dump() << '\n';
  }
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

template <class Record>
std::vector<Record> read_results(const std::filesystem::path& path, const std::string& format) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<Record> out;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (format == "csv") {
      if (first && line == csv_header<Record>()) {
        first = false;
        continue;
      }
      if constexpr (std::is_same_v<Record, ResultRecord>) out.push_back(result_from_csv_row(line));
      else out.push_back(curve_from_csv_row(line));
    } else {
      const auto j = nlohmann::json::parse(line);
      if constexpr (std::is_same_v<Record, ResultRecord>) out.push_back(result_from_json(j));
      else out.push_back(curve_from_json(j));
    }
    first = false;
  }
  return out;
}

}  // namespace rsa::io
