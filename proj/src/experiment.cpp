#include "visco/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "visco/io.hpp"
#include "visco/log.hpp"
#include "visco/simulation.hpp"
#include "visco/spectral.hpp"

namespace visco {

ExperimentMode parse_experiment_mode(const std::string& s) {
  if (s == "linear_grid") return ExperimentMode::linear_grid;
  if (s == "linear_radial") return ExperimentMode::linear_radial;
  if (s == "nonlinear") return ExperimentMode::nonlinear;
  throw std::invalid_argument("unknown experiment mode '" + s + "'");
}

std::string to_string(ExperimentMode m) {
  switch (m) {
    case ExperimentMode::linear_grid: return "linear_grid";
    case ExperimentMode::linear_radial: return "linear_radial";
    case ExperimentMode::nonlinear: return "nonlinear";
  }
  return "?";
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  if (t == "inf" || t == "infinity") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != t.size()) throw std::invalid_argument("bad number for '" + key + "': " + v);
  return x;
}

long long to_int(const std::string& key, const std::string& v) {
  const double x = to_double(key, v);
  if (x != std::floor(x) || std::abs(x) > 9e15) throw std::invalid_argument("'" + key + "' must be an integer");
  return static_cast<long long>(x);
}

bool to_bool(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw std::invalid_argument("bad boolean for '" + key + "': " + v);
}

std::string join_norms(const std::vector<double>& ps) {
  std::string out;
  for (std::size_t i = 0; i < ps.size(); ++i) out += (i ? "," : "") + format_double(ps[i]);
  return out;
}

std::optional<FitResult> try_fit(const std::vector<double>& t, const std::vector<double>& v, const FitWindow& w,
                                 bool exponential, std::vector<std::string>& warnings, const std::string& what) {
  try {
    return exponential ? fit_exponential_rate(t, v, w) : fit_decay_exponent(t, v, w);
  } catch (const std::invalid_argument& e) {
    warnings.push_back("fit of " + what + " refused: " + e.what());
    return std::nullopt;
  }
}

void fit_series(DecaySeries& s, const FitWindow& w, std::vector<std::string>& warnings, const std::string& what) {
  for (const auto& [p, v] : s.norms) {
    if (auto f = try_fit(s.times, v, w, false, warnings, what + " p=" + format_double(p))) s.fits[p] = *f;
  }
}

double solenoidal_sup(const StateU& u) {
  Spectrum pw = leray_project(u.w);
  for (int c = 0; c < 3; ++c) pw(c, 0) = 0.0;
  return lp_norm(inverse(pw), std::numeric_limits<double>::infinity());
}

}  // namespace

void ExperimentConfig::set(const std::string& key_in, const std::string& value) {
  const std::string key = trim(key_in);
  const std::string v = trim(value);
  if (key == "mode") mode = parse_experiment_mode(v);
  else if (key == "nu") params.nu = to_double(key, v);
  else if (key == "nu_prime") params.nu_prime = to_double(key, v);
  else if (key == "beta") params.beta = to_double(key, v);
  else if (key == "gamma") params.gamma = to_double(key, v);
  else if (key == "kappa") params.kappa = to_double(key, v);
  else if (key == "n") n = static_cast<int>(to_int(key, v));
  else if (key == "length") length = to_double(key, v);
  else if (key == "dealias") dealias = to_bool(key, v);
  else if (key == "data") data.mode = parse_data_mode(v);
  else if (key == "amplitude") data.amplitude = to_double(key, v);
  else if (key == "radius") data.radius = to_double(key, v);
  else if (key == "velocity") data.velocity = to_double(key, v);
  else if (key == "seed") {
    if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos) {
      throw std::invalid_argument("seed must be a nonnegative integer");
    }
    data.seed = std::stoull(v);
  }
  else if (key == "radial_mass") radial.mass = to_double(key, v);
  else if (key == "radial_sigma") radial.sigma = to_double(key, v);
  else if (key == "radial_velocity") radial.velocity = to_double(key, v);
  else if (key == "t_start") t_start = to_double(key, v);
  else if (key == "t_end") t_end = to_double(key, v);
  else if (key == "samples") samples = static_cast<int>(to_int(key, v));
  else if (key == "schedule") {
    if (v != "log" && v != "linear") throw std::invalid_argument("schedule must be log or linear");
    log_schedule = v == "log";
  }
  else if (key == "norms") {
    norms.clear();
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const double p = to_double(key, item);
      if (!(p > 1.0)) throw std::invalid_argument("norm exponents must exceed 1");
      norms.push_back(p);
    }
    if (norms.empty()) throw std::invalid_argument("norms must not be empty");
  }
  else if (key == "fit_t0") fit_t0 = to_double(key, v);
  else if (key == "fit_t1") fit_t1 = to_double(key, v);
  else if (key == "dt") dt = to_double(key, v);
  else if (key == "split") split = to_bool(key, v);
  else if (key == "energy") energy = to_bool(key, v);
  else if (key == "compare_beta_zero") compare_beta_zero = to_bool(key, v);
  else if (key == "snapshots") snapshots = to_bool(key, v);
  else if (key == "threads") threads = static_cast<int>(to_int(key, v));
  else throw std::invalid_argument("unknown config key '" + key + "'");
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  ExperimentConfig cfg;
  const std::string body = trim(text);
  if (!body.empty() && body.front() == '{') {
    const auto j = nlohmann::json::parse(body);
    for (const auto& [k, v] : j.items()) {
      if (v.is_string()) cfg.set(k, v.get<std::string>());
      else if (v.is_boolean()) cfg.set(k, v.get<bool>() ? "true" : "false");
      else if (v.is_number_integer()) cfg.set(k, std::to_string(v.get<long long>()));
      else if (v.is_number()) cfg.set(k, format_double(v.get<double>()));
      else if (v.is_array()) {
        std::string joined;
        for (const auto& x : v) {
          joined += (joined.empty() ? "" : ",") + (x.is_string() ? x.get<std::string>() : format_double(x.get<double>()));
        }
        cfg.set(k, joined);
      } else {
        throw std::invalid_argument("unsupported value for '" + k + "'");
      }
    }
    return cfg;
  }
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("line " + std::to_string(lineno) + ": expected key=value");
    }
    cfg.set(line.substr(0, eq), line.substr(eq + 1));
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read config " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse(ss.str());
}

std::vector<double> ExperimentConfig::schedule() const {
  std::vector<double> ts{0.0};
  for (int i = 0; i < samples; ++i) {
    const double f = samples == 1 ? 1.0 : static_cast<double>(i) / (samples - 1);
    ts.push_back(log_schedule ? t_start * std::pow(t_end / t_start, f) : t_start + f * (t_end - t_start));
  }
  return ts;
}

std::string ExperimentConfig::canonical() const {
  std::ostringstream os;
  auto kv = [&](const char* k, const std::string& v) { os << k << '=' << v << '\n'; };
  kv("mode", to_string(mode));
  kv("nu", format_double(params.nu));
  kv("nu_prime", format_double(params.nu_prime));
  kv("beta", format_double(params.beta));
  kv("gamma", format_double(params.gamma));
  kv("kappa", format_double(params.kappa));
  kv("n", std::to_string(n));
  kv("length", format_double(length));
  kv("dealias", dealias ? "true" : "false");
  kv("data", to_string(data.mode));
  kv("amplitude", format_double(data.amplitude));
  kv("radius", format_double(data.radius));
  kv("velocity", format_double(data.velocity));
  kv("seed", std::to_string(data.seed));
  kv("radial_mass", format_double(radial.mass));
  kv("radial_sigma", format_double(radial.sigma));
  kv("radial_velocity", format_double(radial.velocity));
  kv("t_start", format_double(t_start));
  kv("t_end", format_double(t_end));
  kv("samples", std::to_string(samples));
  kv("schedule", log_schedule ? "log" : "linear");
  kv("norms", join_norms(norms));
  if (fit_t0) kv("fit_t0", format_double(*fit_t0));
  if (fit_t1) kv("fit_t1", format_double(*fit_t1));
  kv("dt", format_double(dt));
  kv("split", split ? "true" : "false");
  kv("energy", energy ? "true" : "false");
  kv("compare_beta_zero", compare_beta_zero ? "true" : "false");
  kv("snapshots", snapshots ? "true" : "false");
  return os.str();
}

std::uint64_t ExperimentConfig::hash() const { return fnv1a64(canonical()); }

std::vector<std::string> ExperimentConfig::validate() const {
  std::vector<std::string> warnings;
  params.validate();
  if (!(t_start > 0.0) || !(t_end > t_start)) throw std::invalid_argument("need 0 < t_start < t_end");
  if (samples < 2) throw std::invalid_argument("need at least 2 samples");
  if (threads < 1) throw std::invalid_argument("threads must be positive");
  if (mode == ExperimentMode::linear_radial) {
    if (!(radial.sigma > 0.0)) throw std::invalid_argument("radial_sigma must be positive");
    return warnings;
  }
  const SpectralGrid g = make_grid(n, length, dealias);
  if (!(data.amplitude >= 0.0)) throw std::invalid_argument("amplitude must be nonnegative");
  if (!(data.radius > 0.0) || data.radius > support_radius_limit(g)) {
    throw std::invalid_argument("radius must lie in (0, L/2]");
  }
  const double m1 = params.m1();
  if (split && !(m1 > 4.0 * std::numbers::pi / length)) {
    throw std::invalid_argument("box too small to separate frequencies at m1 = " + format_double(m1));
  }
  if (g.dk() * (n / 3) < m1 / std::sqrt(2.0)) {
    warnings.push_back("grid does not resolve the high-frequency band above m1/sqrt(2)");
  }
  if (data.radius / 5.0 < 2.0 * g.spacing()) {
    warnings.push_back("data width radius/5 is below two grid spacings");
  }
  const double horizon = wraparound_horizon(params, g, data.radius);
  if (t_end > horizon) {
    warnings.push_back("t_end " + format_double(t_end) + " exceeds the wrap-around horizon " +
                       format_double(horizon) + "; the window will be truncated");
  }
  return warnings;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& snapshot_dir) {
  ExperimentResult res;
  res.warnings = cfg.validate();
  for (const auto& w : res.warnings) log_warn(w);
  set_fft_threads(cfg.threads);
  const std::vector<double> times = cfg.schedule();

  if (cfg.mode == ExperimentMode::linear_radial) {
    RadialOptions o;
    o.params = cfg.params;
    o.data = cfg.radial;
    o.times = times;
    o.norms = cfg.norms;
    res.series = run_linear_radial(o);
    res.window = {cfg.fit_t0.value_or(0.5 * cfg.t_end), cfg.fit_t1.value_or(cfg.t_end)};
    fit_series(res.series, res.window, res.warnings, "radial");
    if (cfg.compare_beta_zero) {
      o.heat_reference = true;
      res.heat_reference = run_linear_radial(o);
      fit_series(*res.heat_reference, res.window, res.warnings, "heat reference");
    }
    return res;
  }

  const SpectralGrid g = make_grid(cfg.n, cfg.length, cfg.dealias);
  const PrimitiveState initial = make_primitive(g, cfg.data);

  SimulationOptions so;
  so.params = cfg.params;
  so.t_end = cfg.t_end;
  so.output_times = times;
  so.dt = cfg.dt;
  so.nonlinear = cfg.mode == ExperimentMode::nonlinear;
  so.norms = cfg.norms;
  so.split_norms = cfg.split;
  so.energy = cfg.energy;
  so.support_radius = cfg.data.radius;

  DecaySeries sol;
  int snap = 0;
  const std::string hash = hex64(cfg.hash());
  so.on_snapshot = [&](double t, const StateU& u) {
    if (cfg.compare_beta_zero) {
      sol.times.push_back(t);
      sol.norms[std::numeric_limits<double>::infinity()].push_back(solenoidal_sup(u));
    }
    if (cfg.snapshots && !snapshot_dir.empty()) {
      char name[32];
      std::snprintf(name, sizeof name, "snap_%04d.bin", snap++);
      write_snapshot(snapshot_dir / name, u, t, {{"config_hash", hash}, {"seed", cfg.data.seed}});
    }
  };

  const Trajectory traj = run_simulation(initial, so);
  res.horizon = traj.horizon;
  res.truncated = traj.truncated;
  res.steps = traj.steps;
  res.gamma_ratio = traj.max_gamma_ratio;
  res.energy = traj.energy;
  if (traj.truncated) res.warnings.push_back("measurement window truncated at the wrap-around horizon");

  const double t_last = traj.times.back();
  res.window = {cfg.fit_t0.value_or(0.5 * t_last), std::min(cfg.fit_t1.value_or(t_last), t_last)};

  auto collect = [&](NormPart part) {
    DecaySeries s;
    s.times = traj.times;
    for (double p : cfg.norms) s.norms[p] = traj.series(p, part);
    return s;
  };
  res.series = collect(NormPart::total);
  fit_series(res.series, res.window, res.warnings, "total");
  if (cfg.split) {
    res.low = collect(NormPart::low);
    res.high = collect(NormPart::high);
    fit_series(res.low, res.window, res.warnings, "low part");
    const auto hi2 = res.high.norms.find(2.0);
    if (hi2 != res.high.norms.end()) {
      res.high_exponential =
          try_fit(res.high.times, hi2->second, {cfg.t_start, t_last}, true, res.warnings, "high part L2");
    }
  }

  for (const auto& r : traj.residuals) {
    auto& s = res.residuals;
    s.div_rhoF = std::max(s.div_rhoF, r.report.div_rhoF.linf);
    s.det = std::max(s.det, r.report.det.linf);
    s.curl = std::max(s.curl, r.report.curl.linf);
    s.phi_trace = std::max(s.phi_trace, r.phi_trace);
    s.n1_trace_n3 = std::max(s.n1_trace_n3, r.n1_trace_n3);
  }

  if (cfg.compare_beta_zero) {
    fit_series(sol, res.window, res.warnings, "solenoidal velocity");
    res.solenoidal = sol;

    SimulationOptions z = so;
    z.params.beta = 0.0;
    z.nonlinear = false;
    z.split_norms = false;
    z.energy = false;
    z.residuals = false;
    z.norms = {};
    DecaySeries sol0;
    z.on_snapshot = [&](double t, const StateU& u) {
      sol0.times.push_back(t);
      sol0.norms[std::numeric_limits<double>::infinity()].push_back(solenoidal_sup(u));
    };
    StateU u0 = state_from_primitive(initial);
    run_simulation(u0, z);
    fit_series(sol0, res.window, res.warnings, "solenoidal velocity at beta=0");
    res.solenoidal_beta_zero = sol0;
  }
  return res;
}

}  // namespace visco
