#include "app.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "config.hpp"
#include "cylev/cylproc.hpp"
#include "cylev/errors.hpp"
#include "cylev/integrability.hpp"
#include "cylev/mcvalid.hpp"
#include "cylev/stochint.hpp"

namespace cylev::app {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// Logging (stderr only; never affects results)
// ---------------------------------------------------------------------------

int log_level() {
  const char* env = std::getenv("CYLEV_LOG");
  if (!env) return 1;
  const std::string v(env);
  if (v == "quiet" || v == "error" || v == "0") return 0;
  if (v == "debug" || v == "2") return 2;
  return 1;
}

void log(int level, const std::string& message) {
  if (level <= log_level()) std::cerr << "cylev: " << message << '\n';
}

// ---------------------------------------------------------------------------
// Output files: written under a temporary name and renamed once complete.
// ---------------------------------------------------------------------------

class StagedOutput {
 public:
  explicit StagedOutput(fs::path dir) : dir_(std::move(dir)) {}
  StagedOutput(const StagedOutput&) = delete;
  StagedOutput& operator=(const StagedOutput&) = delete;

  ~StagedOutput() {
    if (committed_) return;
    std::error_code ec;
    for (auto& f : files_) {
      f.stream.reset();
      fs::remove(f.partial, ec);
    }
  }

  std::ostream& open(const std::string& name) {
    fs::create_directories(dir_);
    File f{dir_ / name, dir_ / (name + ".partial"), nullptr};
    f.stream = std::make_unique<std::ofstream>(f.partial, std::ios::binary | std::ios::trunc);
    if (!*f.stream) throw std::runtime_error("cannot write '" + f.partial.string() + "'");
    files_.push_back(std::move(f));
    return *files_.back().stream;
  }

  void commit() {
    for (auto& f : files_) {
      f.stream->flush();
      if (!*f.stream) throw std::runtime_error("write to '" + f.partial.string() + "' failed");
      f.stream.reset();
    }
    for (auto& f : files_) {
      fs::rename(f.partial, f.final);
      log(2, "wrote " + f.final.string());
    }
    committed_ = true;
  }

 private:
  struct File {
    fs::path final;
    fs::path partial;
    std::unique_ptr<std::ofstream> stream;
  };
  fs::path dir_;
  std::vector<File> files_;
  bool committed_ = false;
};

std::string num(double x) {
  if (x == 0.0) x = 0.0;  // no negative zero in output
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_json(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

json verdict_json(const VerdictReport& r) {
  json j;
  j["verdict"] = to_string(r.verdict);
  j["condition"] = r.condition;
  j["witness"] = r.witness;
  if (r.value) j["value"] = *r.value;
  if (r.verdict == Verdict::Undecided) j["partial_sums"] = r.partial_sums;
  return j;
}

json cf_json(const CFComparison& cmp, const std::vector<CFEstimate>& est,
             const std::function<std::complex<double>(double)>& exact) {
  json j;
  j["pass"] = cmp.pass;
  j["max_deviation"] = cmp.max_deviation;
  if (cmp.worst) j["worst_multiplier"] = est[*cmp.worst].theta;
  if (!cmp.warning.empty()) j["warning"] = cmp.warning;
  json points = json::array();
  for (std::size_t i = 0; i < cmp.points.size(); ++i) {
    const auto e = exact(est[i].theta);
    points.push_back({{"multiplier", est[i].theta},
                      {"estimate", {est[i].estimate.real(), est[i].estimate.imag()}},
                      {"exact", {e.real(), e.imag()}},
                      {"tolerance", cmp.points[i].tolerance},
                      {"pass", cmp.points[i].pass}});
  }
  j["points"] = points;
  return j;
}

json ks_json(const KSResult& r, double level) {
  return {{"statistic", r.statistic}, {"critical", r.critical}, {"level", level}, {"pass", r.pass}};
}

void write_ensemble_csv(std::ostream& out, const PathEnsemble& e) {
  out << "path,node,time";
  for (std::size_t k = 1; k <= e.modes; ++k) out << ",mode_" << k;
  out << '\n';
  for (std::size_t p = 0; p < e.paths; ++p)
    for (std::size_t r = 0; r < e.recorded(); ++r) {
      out << p << ',' << e.nodes[r] << ',' << num(e.times[r]);
      for (std::size_t k = 0; k < e.modes; ++k) out << ',' << num(e.at(p, r, k));
      out << '\n';
    }
}

json ensemble_summary(const PathEnsemble& e, const ExperimentConfig& c) {
  return {{"seed", e.seed},          {"scheme", e.scheme},   {"paths", e.paths},
          {"recorded_nodes", e.recorded()}, {"modes", e.modes}, {"horizon", c.horizon},
          {"steps", c.steps}};
}

struct Context {
  ExperimentConfig config;
  SimulationOptions options;
  fs::path out_dir;
};

const SeriesCylLevySpec* series_of(const ExperimentConfig& c) {
  return std::get_if<SeriesCylLevySpec>(&c.process);
}
const SubordinatedWienerSpec* subordinated_of(const ExperimentConfig& c) {
  return std::get_if<SubordinatedWienerSpec>(&c.process);
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

int cmd_symbol(const Context& ctx) {
  const auto& c = ctx.config;
  StagedOutput out(ctx.out_dir);
  std::ostream& csv = out.open("symbol.csv");
  csv << "multiplier,real,imag\n";
  for (double m : c.theta.multipliers) {
    const Functional theta = c.theta.functional.scaled(m);
    std::complex<double> psi;
    if (const auto* s = series_of(c)) {
      psi = cylindrical_symbol(*s, theta);
    } else {
      psi = std::log(subordinated_cf(*subordinated_of(c), theta, 1.0));
    }
    csv << num(m) << ',' << num(psi.real()) << ',' << num(psi.imag()) << '\n';
  }
  out.commit();
  return kOk;
}

std::optional<ModeSequence> semigroup_eigenvalues(const ExperimentConfig& c) {
  if (!c.integrand) return std::nullopt;
  const auto kind = c.integrand->kind();
  if (kind == DiagonalIntegrand::Kind::SemigroupForward ||
      kind == DiagonalIntegrand::Kind::SemigroupConvolution)
    return c.integrand->sequence();
  return std::nullopt;
}

template <class F>
json guarded_verdict(F&& f) {
  try {
    return f();
  } catch (const UnsupportedCriterion& e) {
    return {{"verdict", "unsupported"}, {"witness", e.what()}};
  } catch (const std::invalid_argument& e) {
    return {{"verdict", "not_applicable"}, {"witness", e.what()}};
  }
}

int cmd_check(const Context& ctx) {
  const auto& c = ctx.config;
  json report;
  report["truncation"] = c.truncation;
  if (const auto* s = series_of(c)) {
    report["process"] = "series";
    report["driver"] = family_name(s->driver);
    report["weak"] = verdict_json(check_weak_convergence(*s));
    report["strong"] = guarded_verdict([&] { return verdict_json(check_strong_convergence(*s)); });
    if (c.integrand) {
      const auto& f = *c.integrand;
      report["levy_integrability"] =
          guarded_verdict([&] { return verdict_json(hilbert_levy_condition(f, *s)); });
      if (c.check.covariance) {
        report["trace_integrability"] = guarded_verdict(
            [&] { return verdict_json(hilbert_trace_condition(f, *c.check.covariance)); });
        report["sequence_space"] = guarded_verdict([&] {
          const auto r = sequence_space_conditions(f, *c.check.covariance, *s, c.check.p);
          return json{{"p", c.check.p},
                      {"covariance", verdict_json(r.covariance)},
                      {"small_jumps", verdict_json(r.small_jumps)},
                      {"moment", verdict_json(r.moment)}};
        });
      }
      const auto gamma = semigroup_eigenvalues(c);
      const auto* stable = std::get_if<SymmetricStableDriver>(&s->driver);
      if (gamma && stable)
        report["stable_ou"] = guarded_verdict(
            [&] { return verdict_json(ou_stable_criterion(s->scaling, *gamma, stable->alpha)); });
    }
  } else {
    const auto& sub = *subordinated_of(c);
    report["process"] = "subordinated";
    report["subordinator"] = family_name(sub.subordinator);
    if (c.integrand) {
      report["trace_integrability"] = guarded_verdict(
          [&] { return verdict_json(hilbert_trace_condition(*c.integrand, sub.covariance)); });
      if (const auto gamma = semigroup_eigenvalues(c))
        report["subordinated_semigroup"] = guarded_verdict([&] {
          return verdict_json(
              subordinated_semigroup_criterion(sub.covariance, *gamma, sub.subordinator, c.horizon));
        });
    }
  }
  StagedOutput out(ctx.out_dir);
  write_json(out.open("check.json"), report);
  out.commit();
  return kOk;
}

int cmd_simulate(const Context& ctx) {
  const auto& c = ctx.config;
  const TimeGrid grid(c.horizon, c.steps);
  const PathEnsemble e =
      series_of(c) ? simulate_series_paths(*series_of(c), grid, c.samples, ctx.options, c.record_every)
                   : simulate_subordinated_paths(*subordinated_of(c), grid, c.samples, ctx.options,
                                                 c.record_every);
  StagedOutput out(ctx.out_dir);
  write_ensemble_csv(out.open("paths.csv"), e);
  write_json(out.open("summary.json"), ensemble_summary(e, c));
  out.commit();
  return kOk;
}

struct TerminalLaw {
  std::vector<double> samples;
  std::function<std::complex<double>(double)> cf;  // multiplier -> exact CF
  std::optional<std::pair<double, double>> gaussian;  // mean, variance
};

TerminalLaw ou_terminal_law(const ExperimentConfig& c, const SeriesCylLevySpec& s,
                            const PathEnsemble& e) {
  const Functional& theta = c.theta.functional;
  TerminalLaw law;
  law.samples = e.actions(e.recorded() - 1, theta);
  const ModeSequence& gamma = c.ou->eigenvalues;
  double mean = 0.0;
  for (std::size_t k = 1; k <= c.initial.size(); ++k)
    mean += theta[k] * std::exp(gamma[k] * c.horizon) * c.initial[k - 1];
  const auto kernel = DiagonalIntegrand::semigroup_convolution(gamma, c.horizon);
  const TimeSet whole{{0.0, c.horizon}};
  law.cf = [=](double m) {
    return std::exp(std::complex<double>(0.0, m * mean)) *
           integral_cf(kernel, s, whole, theta.scaled(m));
  };
  if (std::holds_alternative<BrownianDriver>(s.driver))
    law.gaussian = {mean, integral_characteristics(kernel, s, whole, theta).variance};
  return law;
}

OUSpec make_ou_spec(const ExperimentConfig& c, const SeriesCylLevySpec& s) {
  return OUSpec{c.ou->eigenvalues, c.initial, s, TimeGrid(c.horizon, c.steps)};
}

json validate_law(const ExperimentConfig& c, const TerminalLaw& law, bool& pass) {
  json j;
  const auto est = empirical_cf(law.samples, c.theta.multipliers);
  const auto cmp = cf_compare(est, law.cf, c.allowance);
  j["cf"] = cf_json(cmp, est, law.cf);
  pass = cmp.pass;
  if (law.gaussian && law.gaussian->second > 0.0) {
    const auto [mean, var] = *law.gaussian;
    const auto ks = ks_test(law.samples, [&](double x) { return normal_cdf(x, mean, var); },
                            c.ks_level);
    j["ks"] = ks_json(ks, c.ks_level);
    pass = pass && ks.pass;
  }
  j["samples"] = law.samples.size();
  j["pass"] = pass;
  return j;
}

TerminalLaw validation_law(const Context& ctx) {
  const auto& c = ctx.config;
  const Functional& theta = c.theta.functional;
  const double t = c.horizon;
  TerminalLaw law;
  if (const auto* s = series_of(c)) {
    if (c.ou) {
      const PathEnsemble e = simulate_ou(make_ou_spec(c, *s), c.samples, ctx.options, c.steps);
      return ou_terminal_law(c, *s, e);
    }
    if (c.integrand) {
      const TimeGrid grid(c.horizon, c.steps);
      law.samples = simulate_integral(*c.integrand, *s, grid, theta, c.samples, ctx.options);
      const DiagonalIntegrand f = *c.integrand;
      const TimeSet whole{{0.0, t}};
      const SeriesCylLevySpec spec = *s;
      law.cf = [=](double m) { return integral_cf(f, spec, whole, theta.scaled(m)); };
      if (std::holds_alternative<BrownianDriver>(s->driver))
        law.gaussian = {0.0, integral_characteristics(f, spec, whole, theta).variance};
      return law;
    }
    law.samples = sample_action(*s, theta, t, c.samples, ctx.options);
    const SeriesCylLevySpec spec = *s;
    law.cf = [=](double m) { return std::exp(t * cylindrical_symbol(spec, theta.scaled(m))); };
    if (std::holds_alternative<BrownianDriver>(s->driver))
      law.gaussian = {0.0, -2.0 * t * cylindrical_symbol(spec, theta).real()};
    return law;
  }
  const SubordinatedWienerSpec spec = *subordinated_of(c);
  law.samples = sample_subordinated(spec, theta, t, c.samples, ctx.options);
  law.cf = [=](double m) { return std::complex<double>(subordinated_cf(spec, theta.scaled(m), t)); };
  if (const auto* d = std::get_if<DriftedSubordinatorDriver>(&spec.subordinator);
      d && std::holds_alternative<NoJumps>(d->jumps)) {
    double form = 0.0;
    for (std::size_t k = 1; k <= theta.size(); ++k) form += spec.covariance[k] * theta[k] * theta[k];
    law.gaussian = {0.0, d->drift * t * form};
  }
  return law;
}

int cmd_validate(const Context& ctx) {
  const TerminalLaw law = validation_law(ctx);
  bool pass = true;
  json report = validate_law(ctx.config, law, pass);
  report["seed"] = ctx.options.seed;
  StagedOutput out(ctx.out_dir);
  write_json(out.open("validate.json"), report);
  out.commit();
  log(1, pass ? "validation passed" : "validation failed");
  return pass ? kOk : kValidationFailed;
}

int cmd_ou(const Context& ctx) {
  const auto& c = ctx.config;
  const auto* s = series_of(c);
  if (!s) throw ConfigError("'ou' needs a series process");
  if (!c.ou) throw ConfigError("'ou' needs an 'ou' section with eigenvalues");
  const PathEnsemble e = simulate_ou(make_ou_spec(c, *s), c.samples, ctx.options, c.ou->record_every);
  bool pass = true;
  json report = validate_law(c, ou_terminal_law(c, *s, e), pass);
  report["seed"] = ctx.options.seed;
  report["ensemble"] = ensemble_summary(e, c);
  StagedOutput out(ctx.out_dir);
  write_ensemble_csv(out.open("ou_paths.csv"), e);
  write_json(out.open("ou_report.json"), report);
  out.commit();
  return pass ? kOk : kValidationFailed;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App cli{"Cylindrical Levy process simulation and integrability checks", "cylev"};
  std::string command;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  unsigned workers = 1;
  std::optional<std::string> out_dir;
  cli.add_option("command", command, "symbol | check | simulate | validate | ou")
      ->required()
      ->check(CLI::IsMember({"symbol", "check", "simulate", "validate", "ou"}));
  cli.add_option("--config", config_path, "experiment config (JSON)")->required();
  cli.add_option("--seed", seed, "master seed, overrides the config");
  cli.add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
  cli.add_option("--out", out_dir, "output directory, overrides the config");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    cli.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return cli.exit(e);
  } catch (const CLI::ParseError& e) {
    cli.exit(e);
    return kConfigError;
  }

  try {
    Context ctx{load_config(config_path), {}, {}};
    if (seed) ctx.config.seed = seed;
    if (!ctx.config.seed) throw ConfigError("a seed is required (config 'seed' or --seed)");
    ctx.options.seed = *ctx.config.seed;
    ctx.options.workers = workers;
    ctx.out_dir = out_dir ? fs::path(*out_dir) : fs::path(ctx.config.output_directory);
    log(2, "running " + command + " with seed " + std::to_string(ctx.options.seed));
    if (command == "symbol") return cmd_symbol(ctx);
    if (command == "check") return cmd_check(ctx);
    if (command == "simulate") return cmd_simulate(ctx);
    if (command == "validate") return cmd_validate(ctx);
    return cmd_ou(ctx);
  } catch (const ConfigError& e) {
    log(0, std::string("config error: ") + e.what());
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    log(0, std::string("config error: ") + e.what());
    return kConfigError;
  } catch (const NumericError& e) {
    log(0, std::string("numeric failure: ") + e.what());
    return kNumericFailure;
  } catch (const std::exception& e) {
    log(0, std::string("failure: ") + e.what());
    return kNumericFailure;
  }
}

}  // namespace cylev::app
