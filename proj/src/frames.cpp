#include "whframes/frames.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>

namespace whframes::frames {

namespace {

using gaussians::GaussianState;
using numerics::Grid1D;
using numerics::SampledFunction1D;
using symplectic::Lattice;

double two_pi_hbar(HBarConfig hbar) { return 2.0 * std::numbers::pi * hbar.hbar; }

bool is_diagonal(const ComplexMatrix& M, double tol) {
  ComplexMatrix off = M;
  off.diagonal().setZero();
  return off.cwiseAbs().maxCoeff() <= tol;
}

// Truncated sum of e^{-r k^T Q k} over Z^d \ {0}; shells in the sup norm
// until the remaining tail is provably below tail_tol.
double gaussian_lattice_sum(double r, const Matrix& Q, double tail_tol, long* radius_out) {
  const auto d = Q.rows();
  Eigen::SelfAdjointEigenSolver<Matrix> es(Q);
  const double lmin = es.eigenvalues().minCoeff();
  if (!(lmin > 0.0)) throw std::invalid_argument("gaussian_lattice_sum: indefinite quadratic form");

  double sum = 0.0;
  long m = 0;
  while (true) {
    ++m;
    if (m > 100000) throw ConvergenceError("gaussian_lattice_sum: truncation radius overflow");
    // all k with sup-norm exactly m
    double shell = 0.0;
    Eigen::VectorXd k = Eigen::VectorXd::Constant(d, -static_cast<double>(m));
    while (true) {
      if (k.cwiseAbs().maxCoeff() == static_cast<double>(m)) {
        shell += std::exp(-r * k.dot(Q * k));
      }
      Eigen::Index i = d - 1;
      while (i >= 0) {
        k(i) += 1.0;
        if (k(i) <= static_cast<double>(m)) break;
        k(i) = -static_cast<double>(m);
        --i;
      }
      if (i < 0) break;
    }
    sum += shell;
    // shell count grows polynomially, the terms decay like e^{-r lmin m^2}
    const double next_bound = 2.0 * d * std::pow(2.0 * m + 3.0, d - 1) *
                              std::exp(-r * lmin * double(m + 1) * double(m + 1));
    const double ratio = std::exp(-r * lmin * (2.0 * m + 3.0));
    if (next_bound / std::max(1e-300, 1.0 - ratio) < tail_tol) break;
  }
  if (radius_out) *radius_out = m;
  return sum;
}

}  // namespace

FrameSpec::FrameSpec(GaussianState window_in, Lattice lattice_in)
    : window(std::move(window_in)), lattice(std::move(lattice_in)), hbar(window.hbar()) {
  if (lattice.n() != window.n()) {
    throw std::invalid_argument("FrameSpec: window and lattice dimension mismatch");
  }
}

bool gaussian_frame_set_contains(const FrameSpec& spec) {
  const double threshold = two_pi_hbar(spec.hbar);
  if (const auto& sep = spec.lattice.separable_tag()) {
    if (is_diagonal(spec.window.M(), 1e-12)) {
      for (Eigen::Index j = 0; j < sep->alphas.size(); ++j) {
        if (!(sep->alphas(j) * sep->betas(j) < threshold)) return false;
      }
      return true;
    }
  }
  if (spec.window.n() == 1) {
    return spec.lattice.density() > 1.0 / threshold;
  }
  if (spec.lattice.symplectic_tag() && spec.window.is_standard()) {
    const double delta = spec.lattice.symplectic_tag()->delta;
    return 1.0 / (delta * delta) < threshold;
  }
  throw UndecidableError(
      "gaussian_frame_set_contains: undecidable by this library (n > 1 lattice without "
      "a separable or symplectic reduction for this window)");
}

FrameDiagnostics janssen_error_sum(const FrameSpec& spec, double tail_tol) {
  if (!spec.window.is_standard()) {
    throw std::invalid_argument("janssen_error_sum: closed Gaussian sum requires the standard window");
  }
  const auto& tag = spec.lattice.symplectic_tag();
  if (!tag) throw std::invalid_argument("janssen_error_sum: lattice carries no symplectic tag");

  const Matrix G = tag->S.transpose() * tag->S;
  const double c = tag->delta * tag->delta / (4.0 * spec.hbar.hbar);

  FrameDiagnostics diag;
  long radius = 0;
  diag.janssen_error = gaussian_lattice_sum(c, G, tail_tol, &radius);
  diag.truncation_radius = static_cast<double>(radius);
  const auto factored = symplectic::pre_iwasawa(symplectic::SymplecticMatrix(tag->S));
  diag.predicted_rate = predicted_rate(factored.B, tag->delta, spec.hbar);
  return diag;
}

double predicted_rate(const symplectic::LowerBlockSymplectic& B, double delta, HBarConfig hbar) {
  if (!(delta > 0.0)) throw std::invalid_argument("predicted_rate: delta must be positive");
  Eigen::JacobiSVD<Matrix> svd(B.L);
  const double norm = svd.singularValues().maxCoeff();
  const double quad = norm * norm + 1.0 / (norm * norm);
  return std::exp(-delta * delta / (4.0 * hbar.hbar) * quad);
}

double minimal_gram_value(const Matrix& G) {
  const auto d = G.rows();
  Eigen::SelfAdjointEigenSolver<Matrix> es(G);
  const double lmin = es.eigenvalues().minCoeff();
  if (!(lmin > 0.0)) throw std::invalid_argument("minimal_gram_value: G must be positive definite");
  double best = G.diagonal().minCoeff();
  const long K = static_cast<long>(std::ceil(std::sqrt(best / lmin))) + 1;
  Eigen::VectorXd k = Eigen::VectorXd::Constant(d, -static_cast<double>(K));
  while (true) {
    if (k.cwiseAbs().maxCoeff() > 0.0) best = std::min(best, k.dot(G * k));
    Eigen::Index i = d - 1;
    while (i >= 0) {
      k(i) += 1.0;
      if (k(i) <= static_cast<double>(K)) break;
      k(i) = -static_cast<double>(K);
      --i;
    }
    if (i < 0) break;
  }
  return best;
}

double theta_sum(double r, double alpha, double beta, double gamma) {
  if (!(r > 0.0)) throw std::invalid_argument("theta_sum: r must be positive");
  if (std::abs(alpha * beta - 1.0) > 1e-12) {
    throw std::invalid_argument("theta_sum: alpha * beta must equal 1");
  }
  Matrix Q(2, 2);
  Q << alpha * alpha, alpha * beta * gamma, alpha * beta * gamma,
      beta * beta * (1.0 + gamma) * (1.0 + gamma);
  return 1.0 + gaussian_lattice_sum(r, Q, 1e-14, nullptr);
}

double theta_sum_rhs(double r, double alpha, double beta) {
  if (!(r > 0.0)) throw std::invalid_argument("theta_sum_rhs: r must be positive");
  if (std::abs(alpha * beta - 1.0) > 1e-12) {
    throw std::invalid_argument("theta_sum_rhs: alpha * beta must equal 1");
  }
  Matrix Q(2, 2);
  Q << 1.0 / (alpha * alpha), 0.0, 0.0, 1.0 / (beta * beta);
  return 1.0 + gaussian_lattice_sum(r, Q, 1e-14, nullptr);
}

bool theta_inequality_check(double r, double alpha, double beta, double gamma) {
  return theta_sum(r, alpha, beta, gamma) <= theta_sum_rhs(r, alpha, beta) + 1e-12;
}

ScaledWindow approximate_dual_window(const FrameSpec& spec) {
  FrameDiagnostics diag = janssen_error_sum(spec, 1e-14);
  if (diag.vacuous()) {
    throw std::domain_error("approximate_dual_window: Janssen bound >= 1, density too low to certify");
  }
  const double err = diag.janssen_error / (1.0 - diag.janssen_error);
  return ScaledWindow{spec.window, spec.lattice.volume(), err, diag};
}

namespace {

ComplexVector atom_values(const GaussianState& window, const PhaseSpacePoint& z, const Grid1D& grid,
                          double hbar) {
  const double x0 = z.coords(0);
  const double p0 = z.coords(1);
  ComplexVector out(grid.count);
  Vector arg(1);
  for (int k = 0; k < grid.count; ++k) {
    const double x = grid.point(k);
    arg(0) = x - x0;
    out(k) = std::polar(1.0, (p0 * x - 0.5 * p0 * x0) / hbar) * window.evaluate(arg);
  }
  return out;
}

double auto_radius(const GaussianState& target, const GaussianState& window) {
  const auto pair = gaussians::cross_wigner_closed(target, window);
  Eigen::SelfAdjointEigenSolver<Matrix> es(pair.F().real());
  const double lmin = es.eigenvalues().minCoeff();
  const double hbar = target.hbar().hbar;
  return std::sqrt(4.0 * hbar * std::log(1e12) / lmin) + 2.0;
}

ExpansionResult run_expansion(const FrameSpec& spec, double radius,
                              const std::vector<ExpansionCoefficient>& coeffs,
                              const numerics::SampledFunction1D& target_samples) {
  const double hbar = spec.hbar.hbar;
  const double vol = spec.lattice.volume();
  const auto& grid = target_samples.grid;

  ComplexVector rec = ComplexVector::Zero(grid.count);
  for (const auto& c : coeffs) {
    rec += c.value * atom_values(spec.window, c.point, grid, hbar);
  }
  rec *= vol;

  ExpansionReport report;
  report.truncation_radius = radius;
  report.lattice_points = static_cast<long>(coeffs.size());
  double sup = 0.0;
  double l2 = 0.0;
  for (int k = 0; k < grid.count; ++k) {
    const double diff = std::abs(rec(k) - target_samples.values(k));
    sup = std::max(sup, diff);
    l2 += diff * diff;
  }
  report.sup_error = sup;
  report.l2_error = std::sqrt(l2 * grid.spacing);

  return ExpansionResult{coeffs, SampledFunction1D(grid, std::move(rec)), report};
}

}  // namespace

ExpansionResult approx_expansion(const GaussianState& target, const FrameSpec& spec, double radius,
                                 const Grid1D& grid, bool allow_non_frame) {
  if (target.n() != 1 || spec.window.n() != 1) {
    throw std::invalid_argument("approx_expansion: grid reconstruction requires n = 1");
  }
  bool certified = false;
  if (!allow_non_frame) {
    if (!gaussian_frame_set_contains(spec)) {
      throw std::domain_error("approx_expansion: spec is not a frame");
    }
    certified = true;
  }
  if (radius <= 0.0) radius = auto_radius(target, spec.window);

  const double scale = std::pow(two_pi_hbar(spec.hbar), target.n());
  std::vector<ExpansionCoefficient> coeffs;
  for (const auto& z : spec.lattice.enumerate_points(radius)) {
    coeffs.push_back({z, scale * gaussians::cross_ambiguity_closed(target, spec.window, z)});
  }
  auto result = run_expansion(spec, radius, coeffs, numerics::sample(target, grid));
  result.report.frame_certified = certified;
  return result;
}

ExpansionResult approx_expansion(const SampledFunction1D& target, const FrameSpec& spec,
                                 double radius, bool allow_non_frame) {
  if (spec.window.n() != 1) {
    throw std::invalid_argument("approx_expansion: grid reconstruction requires n = 1");
  }
  bool certified = false;
  if (!allow_non_frame) {
    if (!gaussian_frame_set_contains(spec)) {
      throw std::domain_error("approx_expansion: spec is not a frame");
    }
    certified = true;
  }
  if (!(radius > 0.0)) {
    throw std::invalid_argument("approx_expansion: sampled targets need an explicit radius");
  }

  std::vector<ExpansionCoefficient> coeffs;
  for (const auto& z : spec.lattice.enumerate_points(radius)) {
    const auto atom = atom_values(spec.window, z, target.grid, spec.hbar.hbar);
    Complex acc = 0.0;
    for (int k = 0; k < target.grid.count; ++k) acc += target.values(k) * std::conj(atom(k));
    coeffs.push_back({z, acc * target.grid.spacing});
  }
  auto result = run_expansion(spec, radius, coeffs, target);
  result.report.frame_certified = certified;
  return result;
}

SampledFunction1D frame_apply(const FrameSpec& spec, const SampledFunction1D& f, double radius) {
  if (spec.window.n() != 1) throw std::invalid_argument("frame_apply: n = 1 required");
  if (!(radius > 0.0)) throw std::invalid_argument("frame_apply: radius must be positive");
  ComplexVector out = ComplexVector::Zero(f.grid.count);
  for (const auto& z : spec.lattice.enumerate_points(radius)) {
    const auto atom = atom_values(spec.window, z, f.grid, spec.hbar.hbar);
    Complex coeff = 0.0;
    for (int k = 0; k < f.grid.count; ++k) coeff += f.values(k) * std::conj(atom(k));
    coeff *= f.grid.spacing;
    out += coeff * atom;
  }
  return SampledFunction1D(f.grid, std::move(out));
}

double FrameBounds::spectral_error(double volume) const {
  return std::max(std::abs(1.0 - volume * a_est), std::abs(1.0 - volume * b_est));
}

namespace {

// Hard band-limiting projection |p| <= p_probe via the unitary DFT on the grid.
class BandProjector {
 public:
  BandProjector(const Grid1D& grid, double hbar, double p_probe) : N_(grid.count) {
    dft_.resize(N_, N_);
    for (int m = 0; m < N_; ++m) {
      for (int k = 0; k < N_; ++k) {
        dft_(m, k) = std::polar(1.0 / std::sqrt(double(N_)),
                                -2.0 * std::numbers::pi * double(m) * double(k) / N_);
      }
    }
    mask_ = Eigen::VectorXd::Zero(N_);
    const double dp = 2.0 * std::numbers::pi * hbar / (N_ * grid.spacing);
    for (int m = 0; m < N_; ++m) {
      const double signed_m = (m <= N_ / 2) ? double(m) : double(m) - double(N_);
      mask_(m) = (std::abs(signed_m * dp) <= p_probe) ? 1.0 : 0.0;
    }
  }

  void apply(ComplexVector& v) const {
    ComplexVector spec = dft_ * v;
    spec.array() *= mask_.array();
    v = dft_.adjoint() * spec;
  }

 private:
  int N_;
  Eigen::MatrixXcd dft_;
  Eigen::VectorXd mask_;
};

}  // namespace

FrameBounds frame_bounds_numeric(const FrameSpec& spec, const FrameBoundsOptions& options) {
  if (spec.window.n() != 1) throw std::invalid_argument("frame_bounds_numeric: n = 1 required");
  const auto& grid = options.grid;
  const double hbar = spec.hbar.hbar;
  const double h = grid.spacing;
  const double nyquist = std::numbers::pi * hbar / h;
  const double p_probe = 0.5 * nyquist;
  const double margin = std::sqrt(2.0 * hbar * std::log(1e11));
  const double halfwidth = std::max(std::abs(grid.min()), std::abs(grid.max()));
  const double x_extent = halfwidth + margin;
  const double p_extent = p_probe + margin;
  if (p_extent + p_probe + margin > 2.0 * nyquist) {
    throw std::invalid_argument(
        "frame_bounds_numeric: grid resolution too coarse for an alias-free measurement");
  }

  // atoms within the covering phase-space box
  std::vector<ComplexVector> atoms;
  const double ball = std::sqrt(x_extent * x_extent + p_extent * p_extent) + 1e-9;
  for (const auto& z : spec.lattice.enumerate_points(ball)) {
    if (std::abs(z.coords(0)) > x_extent || std::abs(z.coords(1)) > p_extent) continue;
    if (options.sampled_window != nullptr) {
      atoms.push_back(
          numerics::heisenberg_apply(z, *options.sampled_window, spec.hbar, true).values);
    } else {
      atoms.push_back(atom_values(spec.window, z, grid, hbar));
    }
  }
  if (atoms.empty()) throw std::invalid_argument("frame_bounds_numeric: no lattice points in range");

  const BandProjector projector(grid, hbar, p_probe);
  const auto apply_op = [&](const ComplexVector& v) {
    ComplexVector u = v;
    projector.apply(u);
    ComplexVector acc = ComplexVector::Zero(grid.count);
    for (const auto& atom : atoms) {
      const Complex coeff = h * atom.dot(u);  // conj(atom) . u
      acc += coeff * atom;
    }
    projector.apply(acc);
    return acc;
  };

  // Lanczos with full reorthogonalization; the band subspace is small, so
  // the Krylov space exhausts it well inside max_iterations.
  std::mt19937 rng(0x5eed1234u);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  ComplexVector v(grid.count);
  for (int k = 0; k < grid.count; ++k) v(k) = Complex(unif(rng), unif(rng));
  projector.apply(v);
  v /= v.norm();

  std::vector<ComplexVector> basis{v};
  std::vector<double> alpha;
  std::vector<double> beta;
  double a_prev = 0.0, b_prev = 0.0;
  FrameBounds result;

  for (int j = 0; j < options.max_iterations; ++j) {
    ComplexVector w = apply_op(basis.back());
    const double a_j = w.dot(basis.back()).real();
    alpha.push_back(a_j);
    w -= a_j * basis.back();
    if (j > 0) w -= beta.back() * basis[basis.size() - 2];
    for (const auto& b : basis) w -= b.dot(w) * b;
    for (const auto& b : basis) w -= b.dot(w) * b;
    const double b_j = w.norm();

    // Ritz extremes of the tridiagonal
    const auto m = static_cast<Eigen::Index>(alpha.size());
    Matrix T = Matrix::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      T(i, i) = alpha[i];
      if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(T);
    const double a_est = es.eigenvalues().minCoeff();
    const double b_est = es.eigenvalues().maxCoeff();

    const bool exhausted = b_j < 1e-12 * std::max(1.0, b_est);
    const bool settled = j >= 20 && std::abs(a_est - a_prev) <= options.tol * std::max(1.0, std::abs(a_est)) &&
                         std::abs(b_est - b_prev) <= options.tol * std::max(1.0, std::abs(b_est));
    if (exhausted || settled) {
      result.a_est = a_est;
      result.b_est = b_est;
      result.iterations = j + 1;
      return result;
    }
    a_prev = a_est;
    b_prev = b_est;
    beta.push_back(b_j);
    basis.push_back(w / b_j);
  }
  throw ConvergenceError("frame_bounds_numeric: eigen-iteration failed to converge");
}

}  // namespace whframes::frames
