#include "visco/kinematics.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <string>

#include "visco/errors.hpp"
#include "visco/spectral.hpp"

namespace visco {

namespace {

constexpr Complex I{0.0, 1.0};

Eigen::Matrix3d load(const Field& t, std::size_t i) {
  Eigen::Matrix3d m;
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) m(j, k) = t(tidx(j, k), i);
  return m;
}

void store(Field& t, std::size_t i, const Eigen::Matrix3d& m) {
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) t(tidx(j, k), i) = m(j, k);
}

// Closed-form adjugate inverse with a conditioning guard.
Eigen::Matrix3d inverse3(const Eigen::Matrix3d& m) {
  Eigen::Matrix3d adj;
  adj(0, 0) = m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
  adj(0, 1) = m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2);
  adj(0, 2) = m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1);
  adj(1, 0) = m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2);
  adj(1, 1) = m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0);
  adj(1, 2) = m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2);
  adj(2, 0) = m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0);
  adj(2, 1) = m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1);
  adj(2, 2) = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  const double det = m(0, 0) * adj(0, 0) + m(0, 1) * adj(1, 0) + m(0, 2) * adj(2, 0);
  const double scale = m.norm();
  if (!std::isfinite(det) || std::abs(det) < 1e-8 * scale * scale * scale) {
    throw NumericalError("near-singular 3x3 matrix in pointwise inverse (det " + std::to_string(det) + ")");
  }
  return adj / det;
}

double l2_of_sq(const std::vector<double>& sq, double cell) {
  double s = 0.0;
  for (double v : sq) s += v;
  return std::sqrt(s * cell);
}

ResidualNorms norms_of(const std::vector<double>& sq, double cell) {
  ResidualNorms r;
  r.l2 = l2_of_sq(sq, cell);
  double m = 0.0;
  for (double v : sq) m = std::max(m, v);
  r.linf = std::sqrt(m);
  return r;
}

}  // namespace

Field grad_psitilde_from_G(const Field& G) {
  if (G.rank() != Rank::tensor) throw std::invalid_argument("G must be a tensor field");
  Field A(G.grid(), Rank::tensor);
  const Eigen::Matrix3d id = Eigen::Matrix3d::Identity();
  for (std::size_t i = 0; i < G.size(); ++i) store(A, i, id - inverse3(id + load(G, i)));
  return A;
}

Field G_from_grad_psitilde(const Field& A) {
  if (A.rank() != Rank::tensor) throw std::invalid_argument("A must be a tensor field");
  Field G(A.grid(), Rank::tensor);
  const Eigen::Matrix3d id = Eigen::Matrix3d::Identity();
  for (std::size_t i = 0; i < A.size(); ++i) store(G, i, inverse3(id - load(A, i)) - id);
  return G;
}

Field h_map(const Field& A) {
  if (A.rank() != Rank::tensor) throw std::invalid_argument("A must be a tensor field");
  Field h(A.grid(), Rank::tensor);
  const Eigen::Matrix3d id = Eigen::Matrix3d::Identity();
  for (std::size_t i = 0; i < A.size(); ++i) {
    const Eigen::Matrix3d a = load(A, i);
    // (I−A)^{-1} − I − A = (I−A)^{-1} A², which avoids cancellation at small A
    store(h, i, inverse3(id - a) * a * a);
  }
  return h;
}

Spectrum potential_from_gradient(const Spectrum& A) {
  if (A.rank() != Rank::tensor) throw std::invalid_argument("expected a tensor spectrum");
  const auto& g = A.grid();
  Spectrum psi(g, Rank::vector);
  for (std::size_t s = 1; s < A.size(); ++s) {
    if (g.on_nyquist(s)) continue;
    const Vec3 xi = g.wavevector(s);
    const double k2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    for (int j = 0; j < 3; ++j) {
      psi(j, s) = -I * (A(tidx(j, 0), s) * xi[0] + A(tidx(j, 1), s) * xi[1] + A(tidx(j, 2), s) * xi[2]) / k2;
    }
  }
  return psi;
}

Spectrum gamma_source(const Field& phi, const Field& A) {
  Field X(A.grid(), Rank::tensor);
  const Eigen::Matrix3d id = Eigen::Matrix3d::Identity();
  for (std::size_t i = 0; i < A.size(); ++i) {
    const Eigen::Matrix3d a = load(A, i);
    const Eigen::Matrix3d h = inverse3(id - a) * a * a;
    const double f = phi(0, i);
    store(X, i, f * a + (1.0 + f) * h);
  }
  Spectrum xs = forward(X);
  zero_nyquist(xs);
  return xs;
}

Spectrum psi_from_psitilde(const Spectrum& phi, const Spectrum& psi_tilde) {
  const Field A = inverse(gradient(psi_tilde));
  Spectrum psi = psi_tilde;
  psi -= invlap_div_transpose(gamma_source(inverse(phi), A));
  return psi;
}

GammaResult gamma_solve_gradient(const Spectrum& phi, const Spectrum& Psi, const GammaOptions& opt,
                                 const Spectrum* warm_start) {
  if (phi.rank() != Rank::scalar || Psi.rank() != Rank::tensor) {
    throw std::invalid_argument("gamma solve expects a scalar phi and a tensor Psi");
  }
  const Field phi_f = inverse(phi);
  for (double v : phi_f.raw()) {
    if (!(std::abs(v) < 0.5)) throw IntegrityError("density perturbation left |phi| < 1/2");
  }

  GammaResult r{warm_start ? *warm_start : Psi, Psi, Spectrum(phi.grid(), Rank::tensor)};
  Spectrum& A = r.A;
  double prev = -1.0;
  const double eps = std::numeric_limits<double>::epsilon();
  for (int it = 1; it <= opt.max_iter; ++it) {
    r.X = gamma_source(phi_f, inverse(A));
    Spectrum next = Psi;
    next += grad_invlap_div(r.X);
    Spectrum diff = next;
    diff -= A;
    A = std::move(next);
    r.iterations = it;
    r.residual = sobolev_norm(potential_from_gradient(diff), 1);
    const double size = sobolev_norm(potential_from_gradient(A), 1);
    if (!std::isfinite(r.residual)) throw NumericalError("non-finite update in the gamma iteration");
    if (prev > 1e3 * eps * size) {
      const double ratio = r.residual / prev;
      r.ratio = std::max(r.ratio, ratio);
      if (ratio >= 1.0 && r.residual > 1e3 * eps * size) {
        throw DivergedError("gamma iteration is not contracting (ratio " + std::to_string(ratio) + ")", ratio);
      }
    }
    if (r.residual <= opt.tol * size || r.residual == 0.0) {
      r.psi_tilde = potential_from_gradient(A);
      return r;
    }
    prev = r.residual;
  }
  throw DivergedError("gamma iteration hit the iteration cap (residual " + std::to_string(r.residual) + ")",
                      r.ratio);
}

GammaResult gamma_solve_psitilde(const Spectrum& phi, const Spectrum& psi, const GammaOptions& opt) {
  GammaResult r = gamma_solve_gradient(phi, gradient(psi), opt);
  // ψ̃ = Γ(ψ̃) keeps the mean of ψ, which the gradient form cannot see
  r.psi_tilde = psi;
  r.psi_tilde += invlap_div_transpose(r.X);
  return r;
}

PrimitiveState primitive_from_displacement(const Spectrum& psi_tilde0, const Field& v0) {
  const auto& g = psi_tilde0.grid();
  const Field A = inverse(gradient(psi_tilde0));
  PrimitiveState s{Field(g, Rank::scalar), v0, Field(g, Rank::tensor)};
  const Eigen::Matrix3d id = Eigen::Matrix3d::Identity();
  for (std::size_t i = 0; i < A.size(); ++i) {
    const Eigen::Matrix3d m = id - load(A, i);
    store(s.F, i, inverse3(m));
    s.rho(0, i) = m.determinant();
  }
  return s;
}

ConstraintReport constraint_residuals(const PrimitiveState& st) {
  const auto& g = st.rho.grid();
  const std::size_t n = g.physical_size();
  const double cell = g.cell_volume();
  ConstraintReport rep;

  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = st.rho(0, i) * load(st.F, i).determinant() - 1.0;
    sq[i] = d * d;
  }
  rep.det = norms_of(sq, cell);

  // div(ρ ᵀF): row divergence of ρFᵀ
  Field rhoFt(g, Rank::tensor);
  for (std::size_t i = 0; i < n; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) rhoFt(tidx(j, k), i) = st.rho(0, i) * st.F(tidx(k, j), i);
  const Field dv = inverse(row_divergence(forward(rhoFt)));
  for (std::size_t i = 0; i < n; ++i) sq[i] = dv(0, i) * dv(0, i) + dv(1, i) * dv(1, i) + dv(2, i) * dv(2, i);
  rep.div_rhoF = norms_of(sq, cell);

  // ∂_m F^{jk} for every component
  std::vector<Field> dF;
  dF.reserve(9);
  for (int c = 0; c < 9; ++c) dF.push_back(inverse(gradient(forward(component(st.F, c)))));
  std::fill(sq.begin(), sq.end(), 0.0);
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k)
      for (int l = k + 1; l < 3; ++l) {
        for (std::size_t i = 0; i < n; ++i) {
          double c = 0.0;
          for (int m = 0; m < 3; ++m) {
            c += st.F(tidx(m, l), i) * dF[tidx(j, k)](m, i) - st.F(tidx(m, k), i) * dF[tidx(j, l)](m, i);
          }
          sq[i] += 2.0 * c * c;  // (k,l) and (l,k) entries are negatives of each other
        }
      }
  rep.curl = norms_of(sq, cell);
  return rep;
}

PrimitiveState primitive_from_state(const StateU& u, const GammaOptions& opt, ConversionReport* report) {
  const auto& g = u.grid();
  GammaResult r = gamma_solve_gradient(u.phi, u.Psi, opt);
  const Field A = inverse(r.A);
  const Field phi = inverse(u.phi);
  PrimitiveState s{Field(g, Rank::scalar), inverse(u.w), Field(g, Rank::tensor)};
  const Eigen::Matrix3d id = Eigen::Matrix3d::Identity();
  for (std::size_t i = 0; i < A.size(); ++i) {
    store(s.F, i, inverse3(id - load(A, i)));
    s.rho(0, i) = 1.0 + phi(0, i);
  }
  if (report) {
    Field G = s.F;
    for (int c : {0, 4, 8})
      for (std::size_t i = 0; i < G.size(); ++i) G(c, i) -= 1.0;
    const double nA = lp_norm(A, 2.0);
    const double nPsi = lp_norm(inverse(u.Psi), 2.0);
    report->G_over_gradpsitilde = nA > 0.0 ? lp_norm(G, 2.0) / nA : 1.0;
    report->gradpsitilde_over_gradpsi = nPsi > 0.0 ? nA / nPsi : 1.0;
    report->gamma_iterations = r.iterations;
    report->gamma_ratio = r.ratio;
  }
  return s;
}

ConstraintReport constraint_residuals(const StateU& u, const GammaOptions& opt) {
  ConstraintReport rep = constraint_residuals(primitive_from_state(u, opt));
  Spectrum d = trace(u.Psi);
  d += u.phi;
  const Field df = inverse(d);
  std::vector<double> sq(df.size());
  for (std::size_t i = 0; i < df.size(); ++i) sq[i] = df(0, i) * df(0, i);
  rep.phi_trace = norms_of(sq, u.grid().cell_volume());
  return rep;
}

StateU state_from_primitive(const PrimitiveState& s, ConversionReport* report) {
  Field G = s.F;
  for (int c : {0, 4, 8})
    for (std::size_t i = 0; i < G.size(); ++i) G(c, i) -= 1.0;
  const Field A = grad_psitilde_from_G(G);
  const Spectrum psi_tilde = potential_from_gradient(forward(A));

  Field phi = s.rho;
  double mean = 0.0;
  for (double v : phi.raw()) mean += v;
  mean /= static_cast<double>(phi.size());
  for (auto& v : phi.raw()) v -= mean;

  Spectrum phis = forward(phi);
  const Spectrum psi = psi_from_psitilde(phis, psi_tilde);
  StateU u(std::move(phis), forward(s.v), gradient(psi));
  if (report) {
    const double nA = lp_norm(A, 2.0);
    const double nPsi = lp_norm(inverse(u.Psi), 2.0);
    report->G_over_gradpsitilde = nA > 0.0 ? lp_norm(G, 2.0) / nA : 1.0;
    report->gradpsitilde_over_gradpsi = nPsi > 0.0 ? nA / nPsi : 1.0;
  }
  return u;
}

}  // namespace visco
