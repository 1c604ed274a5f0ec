#include "visco/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "visco/log.hpp"

namespace visco {

std::vector<double> Trajectory::series(double p, NormPart part) const {
  std::vector<double> out;
  for (const auto& s : norms) {
    if (s.p == p && s.part == part) out.push_back(s.value);
  }
  return out;
}

double wraparound_horizon(const ModelParams& p, const SpectralGrid& g, double support_radius) {
  if (support_radius < 0.0) throw std::invalid_argument("support radius must be nonnegative");
  return std::max(0.0, 0.5 * g.length() - support_radius) / p.wave_speed();
}

namespace {

StateU split_part(const StateU& u, const CutoffSpec& cut, bool low) {
  auto pick = [&](const Spectrum& f) {
    auto parts = frequency_split(f, cut);
    return low ? parts.first : parts.second;
  };
  return StateU(pick(u.phi), pick(u.w), pick(u.Psi));
}

std::vector<double> schedule(const SimulationOptions& opt, double t_end) {
  std::vector<double> ts = opt.output_times;
  if (ts.empty()) ts = {0.0, t_end};
  if (!std::is_sorted(ts.begin(), ts.end()) || ts.front() < 0.0) {
    throw std::invalid_argument("output times must be sorted and nonnegative");
  }
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  ts.erase(std::remove_if(ts.begin(), ts.end(), [&](double t) { return t > t_end; }), ts.end());
  return ts;
}

}  // namespace

Trajectory run_simulation(const PrimitiveState& initial, const SimulationOptions& opt) {
  ConversionReport rep;
  StateU u0 = state_from_primitive(initial, &rep);
  return run_simulation(u0, opt);
}

Trajectory run_simulation(const StateU& initial, const SimulationOptions& opt) {
  const auto& g = initial.grid();
  const ModelParams& p = opt.params;
  p.validate(/*allow_zero_beta=*/true);
  if (!(opt.t_end >= 0.0)) throw std::invalid_argument("t_end must be nonnegative");

  Trajectory traj(g);
  traj.horizon = wraparound_horizon(p, g, opt.support_radius);
  double t_end = opt.t_end;
  if (t_end > traj.horizon) {
    std::ostringstream os;
    os << "t_end " << t_end << " exceeds the wrap-around horizon " << traj.horizon << "; truncating";
    log_warn(os.str());
    t_end = traj.horizon;
    traj.truncated = true;
  }
  const std::vector<double> ts = schedule(opt, t_end);

  const CutoffSpec cut{p.m1()};
  if (opt.split_norms && !(cut.m1 > 4.0 * std::numbers::pi / g.length())) {
    throw std::invalid_argument("box too small for the frequency split at m1 = " + std::to_string(cut.m1));
  }

  double dt = opt.dt > 0.0 ? opt.dt : 0.9 * dt_max(p, g);
  StepOptions sopt;
  sopt.nonlinear = opt.nonlinear;
  sopt.gamma = opt.gamma;
  EtdStepper stepper(p, sopt);

  auto record = [&](double t, const StateU& u) {
    traj.times.push_back(t);
    for (double q : opt.norms) {
      traj.norms.push_back({t, q, NormPart::total, state_lp_norm(u, q)});
    }
    if (opt.split_norms) {
      const StateU lo = split_part(u, cut, true);
      const StateU hi = split_part(u, cut, false);
      for (double q : opt.norms) {
        traj.norms.push_back({t, q, NormPart::low, state_lp_norm(lo, q)});
        traj.norms.push_back({t, q, NormPart::high, state_lp_norm(hi, q)});
      }
    }
    std::optional<Kinematics> kin;
    if (opt.nonlinear && (opt.residuals || opt.energy)) kin = solve_kinematics(u, opt.gamma);
    if (opt.residuals) {
      ResidualSample r{t, constraint_residuals(u, opt.gamma)};
      r.phi_trace = constraint_defect(u);
      if (kin) r.n1_trace_n3 = n1_trace_n3_defect(nonlinear_terms(p, u, *kin));
      traj.residuals.push_back(r);
    }
    if (opt.energy) {
      EnergySample e;
      e.report = kin ? hf_energy(p, u, kin->A, opt.c1, t) : hf_energy(p, u, opt.c1, t);
      traj.energy.push_back(e);
    }
    if (opt.on_snapshot) opt.on_snapshot(t, u);
  };

  StateU u = initial;
  double t = 0.0;
  for (double target : ts) {
    if (!opt.nonlinear) {
      u = semigroup_apply(p, initial, target);
      t = target;
    } else if (target > t) {
      const int nsteps = std::max(1, static_cast<int>(std::ceil((target - t) / dt - 1e-9)));
      const double h = (target - t) / nsteps;
      for (int i = 0; i < nsteps; ++i) {
        u = stepper.step(u, h);
        ++traj.steps;
        if (stepper.last_kinematics()) {
          traj.max_gamma_ratio = std::max(traj.max_gamma_ratio, stepper.last_kinematics()->gamma_ratio);
        }
      }
      t = target;
    }
    record(target, u);
  }

  for (std::size_t i = 1; i + 1 < traj.energy.size(); ++i) {
    const auto& a = traj.energy[i - 1].report;
    const auto& b = traj.energy[i + 1].report;
    traj.energy[i].balance = (b.E - a.E) / (b.time - a.time) + traj.energy[i].report.D;
  }
  traj.final_state = u;
  return traj;
}

}  // namespace visco
