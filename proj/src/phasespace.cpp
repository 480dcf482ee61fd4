#include "whframes/phasespace.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace whframes::phasespace {

namespace {

using gaussians::GaussianState;
using gaussians::PhaseSpaceGaussian;
using numerics::Grid1D;
using numerics::Grid2D;
using numerics::SampledFunction1D;
using numerics::SampledFunction2D;

Eigen::MatrixXcd sample_translated(const PhaseSpaceGaussian& atom, const PhaseSpacePoint& z0,
                                   const Grid2D& grid) {
  Eigen::MatrixXcd out(grid.x.count, grid.p.count);
  for (int i = 0; i < grid.x.count; ++i) {
    for (int j = 0; j < grid.p.count; ++j) {
      out(i, j) = atom.translated_evaluate(z0, PhaseSpacePoint::xy(grid.x.point(i), grid.p.point(j)));
    }
  }
  return out;
}

}  // namespace

PhaseSpaceFrameSpec::PhaseSpaceFrameSpec(frames::FrameSpec base_in) : base(std::move(base_in)) {
  if (!base.window.is_standard()) {
    throw std::invalid_argument("PhaseSpaceFrameSpec: window must be the standard Gaussian");
  }
  if (!frames::gaussian_frame_set_contains(base)) {
    throw std::domain_error("PhaseSpaceFrameSpec: base system is not a frame");
  }
}

Grid2D conjugate_phase_space_grid(const Grid1D& space, HBarConfig hbar) {
  const double dp = 2.0 * std::numbers::pi * hbar.hbar / (2.0 * space.spacing * space.count);
  return Grid2D{space, Grid1D(0.0, dp, space.count)};
}

SampledFunction2D u_phi_numeric(const SampledFunction1D& psi, const GaussianState& phi,
                                const Grid1D& pgrid) {
  if (phi.n() != 1) throw std::invalid_argument("u_phi_numeric: n = 1 required");
  auto w = numerics::wigner_numeric(psi, numerics::sample(phi, psi.grid), phi.hbar(), pgrid);
  w.values *= std::sqrt(2.0 * std::numbers::pi * phi.hbar().hbar);
  return w;
}

SampledFunction2D u_phi_numeric(const SampledFunction1D& psi, const GaussianState& phi) {
  return u_phi_numeric(psi, phi, conjugate_phase_space_grid(psi.grid, phi.hbar()).p);
}

SampledFunction1D u_phi_adjoint_numeric(const SampledFunction2D& Psi, const GaussianState& phi) {
  if (phi.n() != 1) throw std::invalid_argument("u_phi_adjoint_numeric: n = 1 required");
  const auto& gx = Psi.grid.x;
  const auto& gp = Psi.grid.p;
  const double hbar = phi.hbar().hbar;
  const auto phis = numerics::sample(phi, gx);
  const int N = gx.count;
  const double h = gx.spacing;

  // adjoint of the discrete cross-Wigner lift: for output index m,
  // sum over (a, b) with the kernel conj(e^{-i p_b 2h (m-a)/hbar} phi[2a-m])
  const double pref = 2.0 * h * std::sqrt(2.0 * std::numbers::pi * hbar) /
                      (2.0 * std::numbers::pi * hbar) * gp.spacing;
  ComplexVector out = ComplexVector::Zero(N);
  for (int m = 0; m < N; ++m) {
    Complex acc = 0.0;
    for (int a = 0; a < N; ++a) {
      const long src = 2L * a - m;
      if (src < 0 || src >= N) continue;
      Complex inner = 0.0;
      for (int b = 0; b < gp.count; ++b) {
        inner += Psi.values(a, b) * std::polar(1.0, gp.point(b) * 2.0 * h * (m - a) / hbar);
      }
      acc += inner * phis.values(src);
    }
    out(m) = pref * acc;
  }
  return SampledFunction1D(gx, std::move(out));
}

SampledFunction2D phase_space_frame_apply(const SampledFunction2D& Psi,
                                          const PhaseSpaceFrameSpec& spec, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("phase_space_frame_apply: radius must be positive");
  const double hbar = spec.base.hbar.hbar;
  const auto Phi = gaussians::u_phi_closed(
      GaussianState::standard(1, spec.base.hbar));
  const double weight = Psi.grid.x.spacing * Psi.grid.p.spacing;

  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(Psi.grid.x.count, Psi.grid.p.count);
  for (const auto& z : spec.base.lattice.enumerate_points(radius)) {
    const Eigen::MatrixXcd atom = sample_translated(Phi, z, Psi.grid);
    Complex coeff = 0.0;
    for (Eigen::Index i = 0; i < atom.rows(); ++i) {
      for (Eigen::Index j = 0; j < atom.cols(); ++j) {
        coeff += Psi.values(i, j) * std::conj(atom(i, j));
      }
    }
    acc += (coeff * weight) * atom;
  }
  return SampledFunction2D(Psi.grid, std::move(acc));
}

PhaseSpaceExpansion phase_space_expand(const PhaseSpaceGaussian& target,
                                       const PhaseSpaceFrameSpec& spec, double radius,
                                       const Grid2D& grid) {
  if (target.n() != 1) throw std::invalid_argument("phase_space_expand: n = 1 grids only");
  const double hbar = spec.base.hbar.hbar;
  const double vol = spec.base.lattice.volume();

  if (radius <= 0.0) {
    // |c(z)| decays like e^{-z^T (I + Re H) z / 4 hbar}
    const ComplexMatrix Ji = symplectic::standard_J(1).cast<Complex>() +
                             Complex(0.0, 1.0) * ComplexMatrix::Identity(2, 2);
    const ComplexMatrix FpI = target.F() + ComplexMatrix::Identity(2, 2);
    const Matrix Qreal =
        Matrix::Identity(2, 2) + (Ji.transpose() * FpI.partialPivLu().solve(Ji)).real();
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (Qreal + Qreal.transpose()));
    const double lmin = std::max(0.05, es.eigenvalues().minCoeff());
    radius = std::sqrt(4.0 * hbar * std::log(1e12) / lmin) + 2.0;
  }

  const auto Phi = gaussians::u_phi_closed(GaussianState::standard(1, spec.base.hbar));

  PhaseSpaceExpansion result{
      {}, SampledFunction2D(grid, Eigen::MatrixXcd::Zero(grid.x.count, grid.p.count))};
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(grid.x.count, grid.p.count);
  for (const auto& z : spec.base.lattice.enumerate_points(radius)) {
    const Complex c = gaussians::expansion_coefficient(target, z);
    result.coefficients.push_back({z, c});
    acc += c * sample_translated(Phi, z, grid);
  }
  acc *= vol;

  double sup = 0.0, l2 = 0.0, ref = 0.0;
  for (int i = 0; i < grid.x.count; ++i) {
    for (int j = 0; j < grid.p.count; ++j) {
      const Complex tv = target.evaluate(PhaseSpacePoint::xy(grid.x.point(i), grid.p.point(j)));
      const double diff = std::abs(acc(i, j) - tv);
      sup = std::max(sup, diff);
      l2 += diff * diff;
      ref += std::norm(tv);
    }
  }
  const double weight = grid.x.spacing * grid.p.spacing;
  result.reconstruction = SampledFunction2D(grid, std::move(acc));
  result.sup_error = sup;
  result.l2_error = std::sqrt(l2 * weight);
  result.relative_l2_error = result.l2_error / std::sqrt(ref * weight);
  result.truncation_radius = radius;
  result.lattice_points = static_cast<long>(result.coefficients.size());

  if (const auto& tag = spec.base.lattice.symplectic_tag()) {
    const Matrix G = tag->S.transpose() * tag->S;
    result.rate_exponent = -frames::minimal_gram_value(G) / (4.0 * hbar);
    const auto factored = symplectic::pre_iwasawa(symplectic::SymplecticMatrix(tag->S));
    result.predicted_rate = frames::predicted_rate(factored.B, tag->delta, spec.base.hbar);
  }
  return result;
}

double projection_check(const SampledFunction2D& Psi, const GaussianState& phi) {
  const auto back = u_phi_adjoint_numeric(Psi, phi);
  const auto lifted = u_phi_numeric(back, phi, Psi.grid.p);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < Psi.values.rows(); ++i) {
    for (Eigen::Index j = 0; j < Psi.values.cols(); ++j) {
      acc += std::norm(lifted.values(i, j) - Psi.values(i, j));
    }
  }
  return std::sqrt(acc * Psi.grid.x.spacing * Psi.grid.p.spacing);
}

}  // namespace whframes::phasespace
