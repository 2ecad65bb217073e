// rsa: command-line harness for replicated simulated annealing experiments
// and the exact verification suites.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rsa/exact/schedule_check.hpp"
#include "rsa/experiments/runner.hpp"
#include "rsa/experiments/verify.hpp"
#include "rsa/io/config.hpp"
#include "rsa/io/results.hpp"

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format;
  std::string kernel;
  bool full_scale = false;
  std::size_t jobs = 1;
};

void add_common(CLI::App* cmd, Common& c, bool needs_config) {
  auto* opt = cmd->add_option("--config", c.config, "experiment config (JSON)");
  if (needs_config) opt->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", c.seed, "base seed (overrides the config)");
  cmd->add_option("--out", c.out, "output file (appended; default: stdout)");
  cmd->add_option("--format", c.format, "csv or jsonl (overrides the config)")
      ->check(CLI::IsMember({"csv", "jsonl"}));
  cmd->add_option("--kernel", c.kernel, "two-stage or combined (overrides the config)")
      ->check(CLI::IsMember({"two-stage", "combined"}));
  cmd->add_flag("--full-scale", c.full_scale, "allow runs above the desk-scale iteration limit");
  cmd->add_option("--jobs", c.jobs, "worker threads")->check(CLI::PositiveNumber);
}

rsa::io::ExperimentConfig resolve(const Common& c) {
  auto cfg = rsa::io::load_config(c.config);
  if (c.seed) cfg.seed = *c.seed;
  if (!c.out.empty()) cfg.output = c.out;
  if (!c.format.empty()) cfg.format = c.format;
  if (!c.kernel.empty()) cfg.kernel = rsa::io::parse_kernel(c.kernel);
  return cfg;
}

template <class Record>
void emit(const std::vector<Record>& records, const rsa::io::ExperimentConfig& cfg) {
  if (!cfg.output.empty()) {
    rsa::io::write_results(records, cfg.output, cfg.format);
    std::cerr << "wrote " << records.size() << " record(s) to " << cfg.output << '\n';
    return;
  }
  if (cfg.format == "csv") {
    std::cout << rsa::io::csv_header<Record>() << '\n';
    for (const auto& r : records) std::cout << rsa::io::to_csv_row(r) << '\n';
  } else {
    for (const auto& r : records) std::cout << rsa::io::to_json(r).dump() << '\n';
  }
}

void print_points(const std::vector<rsa::experiments::SweepPoint>& points) {
  for (const auto& p : points) {
    std::cerr << "gamma=" << p.gamma << " beta_i=" << p.beta_i << " beta_f=" << p.beta_f
              << "  train_acc=" << p.train_accuracy.mean << " +- " << p.train_accuracy.half_width;
    if (p.test_accuracy.count > 0)
      std::cerr << "  test_acc=" << p.test_accuracy.mean << " +- " << p.test_accuracy.half_width;
    std::cerr << "  active=" << p.active_transitions.mean << " +- " << p.active_transitions.half_width << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Replicated simulated annealing: experiments and exact verification"};
  app.require_subcommand(1);

  Common train_o, gamma_o, beta_o, robust_o;
  auto* train = app.add_subcommand("train", "one annealing run");
  add_common(train, train_o, true);
  auto* sweep_gamma = app.add_subcommand("sweep-gamma", "runs per (gamma, repetition)");
  add_common(sweep_gamma, gamma_o, true);
  auto* sweep_beta = app.add_subcommand("sweep-beta", "runs over the beta_i x beta_f grid");
  add_common(sweep_beta, beta_o, true);
  auto* robustness = app.add_subcommand("robustness", "weight-flip robustness curves");
  add_common(robustness, robust_o, true);

  Common verify_o;
  bool inject_sign_error = false;
  auto* verify = app.add_subcommand("exact-verify", "exact invariant suites on small landscapes");
  verify->add_option("--seed", verify_o.seed, "seed for the random landscapes");
  verify->add_option("--out", verify_o.out, "write the JSON report here");
  verify->add_flag("--inject-sign-error", inject_sign_error, "fault injection: flip the energy sign in acceptance")
      ->group("");

  double m = 1.0, kappa1 = std::exp(1.0), threshold = 10.0;
  std::string stages_file;
  std::string fixture;
  std::size_t horizon = 10000;
  auto* vsched = app.add_subcommand("validate-schedule", "finite-horizon check of a cooling schedule");
  vsched->add_option("--m", m, "elevation constant");
  vsched->add_option("--kappa1", kappa1, "bound constant (>= 1)");
  vsched->add_option("--threshold", threshold, "PASS needs the final value below -threshold");
  auto* src = vsched->add_option("--stages", stages_file, "JSON file: [{\"beta\":..,\"length\":..}, ...]")
                  ->check(CLI::ExistingFile);
  vsched->add_option("--fixture", fixture, "azencott or log-cooling")
      ->check(CLI::IsMember({"azencott", "log-cooling"}))
      ->excludes(src);
  vsched->add_option("--horizon", horizon, "stages in a fixture")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and friends exit 0; every usage error exits 2
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    using namespace rsa;
    if (train->parsed()) {
      const auto cfg = resolve(train_o);
      experiments::check_scale(cfg, train_o.full_scale);
      const auto work = experiments::load_workload(cfg);
      const auto rec = experiments::train_command(cfg, work);
      std::cerr << "best replica " << rec.best_replica << ": train_acc=" << rec.best_train_accuracy();
      if (!rec.test_accuracy.empty()) std::cerr << " test_acc=" << rec.best_test_accuracy();
      std::cerr << " active=" << rec.active_transitions << '\n';
      emit(std::vector<io::ResultRecord>{rec}, cfg);
      return 0;
    }
    if (sweep_gamma->parsed() || sweep_beta->parsed()) {
      const Common& o = sweep_gamma->parsed() ? gamma_o : beta_o;
      const auto cfg = resolve(o);
      experiments::check_scale(cfg, o.full_scale);
      const auto work = experiments::load_workload(cfg);
      const auto res = sweep_gamma->parsed() ? experiments::sweep_gamma(cfg, work, o.jobs)
                                             : experiments::sweep_beta(cfg, work, o.jobs);
      print_points(res.points);
      emit(res.records, cfg);
      return 0;
    }
    if (robustness->parsed()) {
      const auto cfg = resolve(robust_o);
      experiments::check_scale(cfg, robust_o.full_scale);
      const auto work = experiments::load_workload(cfg);
      const auto res = experiments::robustness_command(cfg, work, robust_o.jobs);
      for (const auto& c : res.curve)
        std::cerr << "gamma=" << c.gamma << " p=" << c.p << " flips=" << c.flips << " acc=" << c.mean_accuracy
                  << " +- " << c.ci_half_width << '\n';
      emit(res.curve, cfg);
      return 0;
    }
    if (verify->parsed()) {
      experiments::VerifyOptions opts;
      if (verify_o.seed) opts.seed = *verify_o.seed;
      if (inject_sign_error) opts.acceptance_override = experiments::sign_error_acceptance;
      const auto report = experiments::exact_verify(opts);
      for (const auto& c : report.checks)
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.suite << ": " << c.name << "  value=" << c.value
                  << " tol=" << c.tolerance << (c.detail.empty() ? "" : "  [" + c.detail + "]") << '\n';
      for (const auto& n : report.notes) std::cout << "note: " << n << '\n';
      std::cout << (report.pass() ? "exact-verify: PASS" : "exact-verify: FAIL") << " (" << report.failures()
                << " failure(s), " << report.seconds << " s)\n";
      if (!verify_o.out.empty()) {
        std::ofstream f(verify_o.out);
        f << report.to_json().dump(2) << '\n';
      }
      return report.pass() ? 0 : 1;
    }
    if (vsched->parsed()) {
      std::vector<Stage> stages;
      if (fixture == "azencott") stages = experiments::azencott_fixture(horizon);
      else if (fixture == "log-cooling") stages = experiments::log_cooling_fixture(horizon);
      else if (!stages_file.empty()) {
        std::ifstream in(stages_file);
        const auto j = nlohmann::json::parse(in);
        for (const auto& s : j)
          stages.push_back(Stage{s.at("beta").get<double>(), s.value("gamma", 0.0), s.at("length").get<std::uint64_t>()});
      } else {
        std::cerr << "validate-schedule: give --stages or --fixture\n";
        return 2;
      }
      const auto v = exact::validate_schedule(stages, m, kappa1, threshold);
      nlohmann::json out = {{"verdict", v.pass ? "PASS" : "FAIL"},
                            {"stages", stages.size()},
                            {"final_value", v.final_value},
                            {"tail_slope", v.tail_slope},
                            {"threshold", v.threshold},
                            {"exposure_sum", v.exposure_sum},
                            {"exposure_diverges", v.exposure_diverges},
                            {"note", v.note}};
      std::cout << out.dump(2) << '\n';
      return v.pass ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
