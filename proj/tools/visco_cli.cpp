#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <string>

#include "visco/errors.hpp"
#include "visco/experiment.hpp"
#include "visco/io.hpp"
#include "visco/log.hpp"
#include "visco/modes.hpp"
#include "visco/verify.hpp"

namespace fs = std::filesystem;
using namespace visco;

namespace {

struct Common {
  std::string config;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  int threads = 1;
  std::string log = "warn";
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "key=value or JSON config file");
  sub->add_option("--out", c.out, "output directory")->capture_default_str();
  sub->add_option("--seed", c.seed, "random seed (overrides the config)");
  sub->add_option("--threads", c.threads, "FFT threads")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--log", c.log, "log level: debug, info, warn, error, silent")->capture_default_str();
}

void apply_log(const std::string& level) {
  if (level == "debug") set_log_level(LogLevel::debug);
  else if (level == "info") set_log_level(LogLevel::info);
  else if (level == "warn") set_log_level(LogLevel::warn);
  else if (level == "error") set_log_level(LogLevel::error);
  else if (level == "silent") set_log_level(LogLevel::silent);
  else throw std::invalid_argument("unknown log level '" + level + "'");
}

ExperimentConfig load_config(const Common& c) {
  ExperimentConfig cfg = c.config.empty() ? ExperimentConfig{} : ExperimentConfig::load(c.config);
  if (c.seed) cfg.data.seed = *c.seed;
  cfg.threads = c.threads;
  return cfg;
}

using RateFn = double (*)(double);

// Heat flow on L¹ data: ‖e^{tΔ}u₀‖_{L^p} ~ t^{−3/2(1−1/p)}.
double heat_rate(double p) { return 1.5 * (1.0 - 1.0 / p); }

nlohmann::json fit_json(const FitResult& f, double p, RateFn theory) {
  nlohmann::json j{{"slope", f.slope}, {"stderr", f.std_error}, {"t0", f.window.t0}, {"t1", f.window.t1},
                   {"points", f.points}};
  if (theory && p > 1.0) j["theory"] = theory(p);
  return j;
}

nlohmann::json fits_json(const DecaySeries& s, RateFn theory = nullptr) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [p, f] : s.fits) j[format_double(p)] = fit_json(f, p, theory);
  return j;
}

int run_decay(const Common& c, bool nonlinear) {
  ExperimentConfig cfg = load_config(c);
  if (nonlinear) {
    cfg.mode = ExperimentMode::nonlinear;
  } else if (cfg.mode == ExperimentMode::nonlinear) {
    throw std::invalid_argument("linear-decay needs mode=linear_grid or mode=linear_radial");
  }
  const fs::path out(c.out);
  fs::create_directories(out);
  const ExperimentResult r = run_experiment(cfg, out / "snapshots");

  write_norm_csv(out / "norms.csv", r.series);
  if (!r.low.times.empty()) {
    write_norm_csv(out / "norms_low.csv", r.low);
    write_norm_csv(out / "norms_high.csv", r.high);
  }
  if (r.heat_reference) write_norm_csv(out / "norms_heat.csv", *r.heat_reference);
  if (r.solenoidal) write_norm_csv(out / "solenoidal.csv", *r.solenoidal);
  if (r.solenoidal_beta_zero) write_norm_csv(out / "solenoidal_beta0.csv", *r.solenoidal_beta_zero);
  if (!r.energy.empty()) {
    std::vector<std::vector<double>> rows;
    for (const auto& e : r.energy) rows.push_back({e.report.time, e.report.E, e.report.D, e.report.c1, e.balance});
    write_csv(out / "energy.csv", {"time", "E", "D", "c1", "dEdt_plus_D"}, rows);
  }

  nlohmann::json j;
  j["config_hash"] = hex64(cfg.hash());
  j["seed"] = cfg.data.seed;
  j["mode"] = to_string(cfg.mode);
  j["params"] = cfg.params.describe();
  j["window"] = {r.window.t0, r.window.t1};
  j["horizon"] = std::isfinite(r.horizon) ? nlohmann::json(r.horizon) : nlohmann::json(nullptr);
  j["truncated"] = r.truncated;
  j["exponents"] = fits_json(r.series, theoretical_rate);
  if (!r.low.fits.empty()) j["exponents_low"] = fits_json(r.low, theoretical_rate);
  if (r.high_exponential) j["high_l2_exponential_rate"] = r.high_exponential->slope;
  if (r.heat_reference) j["exponents_heat"] = fits_json(*r.heat_reference, heat_rate);
  if (r.solenoidal) j["solenoidal_exponent"] = fits_json(*r.solenoidal);
  if (r.solenoidal_beta_zero) j["solenoidal_exponent_beta0"] = fits_json(*r.solenoidal_beta_zero);
  if (cfg.mode != ExperimentMode::linear_radial) {
    j["residuals"] = {{"div_rhoF", r.residuals.div_rhoF},
                      {"det", r.residuals.det},
                      {"curl", r.residuals.curl},
                      {"phi_trace", r.residuals.phi_trace},
                      {"n1_trace_n3", r.residuals.n1_trace_n3}};
    j["gamma_ratio"] = r.gamma_ratio;
    j["steps"] = r.steps;
  }
  j["warnings"] = r.warnings;
  write_json(out / "summary.json", j);
  std::cout << j.dump(2) << '\n';
  return 0;
}

int run_verify(const Common& c, const std::vector<std::string>& suites, bool mutate) {
  VerifyOptions o;
  if (!c.config.empty()) o.params = ExperimentConfig::load(c.config).params;
  if (c.seed) o.seed = *c.seed;
  o.suites = {suites.begin(), suites.end()};
  o.mutate_kernel = mutate;
  const VerifyReport r = verify(o);
  nlohmann::json j = r.to_json();
  j["seed"] = o.seed;
  j["params"] = o.params.describe();
  fs::create_directories(c.out);
  write_json(fs::path(c.out) / "verify.json", j);
  for (const auto& s : r.suites) {
    std::cout << (s.passed ? "PASS " : "FAIL ") << s.name << "  measured " << format_double(s.measured)
              << "  tol " << format_double(s.tolerance) << '\n';
  }
  return r.all_passed() ? 0 : 1;
}

int run_kernel_dump(const Common& c, double kmin, double kmax, int nk, double tmax, int nt) {
  ModelParams p;
  if (!c.config.empty()) p = ExperimentConfig::load(c.config).params;
  p.validate();
  if (!(kmin > 0.0) || !(kmax > kmin) || nk < 2 || !(tmax > 0.0) || nt < 2) {
    throw std::invalid_argument("kernel-dump needs 0 < kmin < kmax, tmax > 0 and at least 2 points per axis");
  }
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < nk; ++i) {
    const double k = kmin * std::pow(kmax / kmin, static_cast<double>(i) / (nk - 1));
    for (int j = 0; j < nt; ++j) {
      const double t = tmax * j / (nt - 1);
      const auto f = kernel_factors(p, k, t);
      rows.push_back({k, t, f.s_minus.real(), f.s_minus.imag(), f.s_plus.real(), f.s_plus.imag(), f.s_zero.real(),
                      f.s_zero.imag(), f.c_minus.real(), f.c_minus.imag(), f.c_plus.real(), f.c_plus.imag(),
                      f.c_zero.real(), f.c_zero.imag()});
    }
  }
  const fs::path path = fs::path(c.out) / "kernel.csv";
  write_csv(path,
            {"k", "t", "s_minus_re", "s_minus_im", "s_plus_re", "s_plus_im", "s_zero_re", "s_zero_im", "c_minus_re",
             "c_minus_im", "c_plus_re", "c_plus_im", "c_zero_re", "c_zero_im"},
            rows);
  std::cout << "wrote " << rows.size() << " rows to " << path.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decay experiments and checks for the linearized and nonlinear viscoelastic system"};
  app.require_subcommand(1);

  Common verify_c, lin_c, nl_c, dump_c;
  std::vector<std::string> suites;
  bool mutate = false;
  auto* v = app.add_subcommand("verify", "run identity and property suites, write verify.json");
  add_common(v, verify_c);
  v->add_option("--suite", suites, "restrict to these suites")->check(CLI::IsMember(verify_suite_names()));
  v->add_flag("--mutate-kernel", mutate, "flip the sign of s- (the report must fail)");

  auto* lin = app.add_subcommand("linear-decay", "linear decay run (grid or radial), norms and fitted exponents");
  add_common(lin, lin_c);
  auto* nl = app.add_subcommand("nonlinear-decay", "nonlinear grid run with residual monitoring");
  add_common(nl, nl_c);

  double kmin = 1e-2, kmax = 1e2, tmax = 10.0;
  int nk = 41, nt = 21;
  auto* dump = app.add_subcommand("kernel-dump", "write the six kernel factors on a (k, t) grid as CSV");
  add_common(dump, dump_c);
  dump->add_option("--kmin", kmin)->capture_default_str();
  dump->add_option("--kmax", kmax)->capture_default_str();
  dump->add_option("--nk", nk)->capture_default_str();
  dump->add_option("--tmax", tmax)->capture_default_str();
  dump->add_option("--nt", nt)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (v->parsed()) {
      apply_log(verify_c.log);
      return run_verify(verify_c, suites, mutate);
    }
    if (lin->parsed()) {
      apply_log(lin_c.log);
      return run_decay(lin_c, false);
    }
    if (nl->parsed()) {
      apply_log(nl_c.log);
      return run_decay(nl_c, true);
    }
    if (dump->parsed()) {
      apply_log(dump_c.log);
      return run_kernel_dump(dump_c, kmin, kmax, nk, tmax, nt);
    }
  } catch (const IntegrityError& e) {
    std::cerr << "integrity error: " << e.what() << '\n';
    return 3;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
