#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "whframes/phasespace.hpp"

using namespace whframes;
using namespace whframes::phasespace;
using gaussians::GaussianState;
using gaussians::PhaseSpaceGaussian;
using numerics::Grid1D;
using numerics::Grid2D;
using symplectic::Lattice;

namespace {

const HBarConfig kHbar = HBarConfig::classical();
const Grid1D kSpace = Grid1D::centered(4.0, 256);  // h = 1/32

GaussianState scalar_state(Complex m) {
  ComplexMatrix M(1, 1);
  M(0, 0) = m;
  return GaussianState(M, kHbar);
}

PhaseSpaceFrameSpec square_spec(double delta) {
  return PhaseSpaceFrameSpec(
      frames::FrameSpec(GaussianState::standard(1, kHbar), Lattice::param1d(1, 1, 0, delta)));
}

numerics::SampledFunction2D sample_atom(const PhaseSpaceGaussian& Phi, const PhaseSpacePoint& z0,
                                        const Grid2D& grid) {
  Eigen::MatrixXcd values(grid.x.count, grid.p.count);
  for (int i = 0; i < grid.x.count; ++i) {
    for (int j = 0; j < grid.p.count; ++j) {
      values(i, j) =
          Phi.translated_evaluate(z0, PhaseSpacePoint::xy(grid.x.point(i), grid.p.point(j)));
    }
  }
  return numerics::SampledFunction2D(grid, std::move(values));
}

}  // namespace

TEST_CASE("u_phi_numeric reproduces the closed-form lift") {
  auto phi = GaussianState::standard(1, kHbar);
  auto psi = numerics::sample(phi, kSpace);
  auto lifted = u_phi_numeric(psi, phi);
  auto closed = gaussians::u_phi_closed(phi);

  const auto grid = lifted.grid;
  double worst = 0.0;
  const double peak = lifted.values.cwiseAbs().maxCoeff();
  for (int i = 0; i < grid.x.count; i += 3) {
    for (int j = 0; j < grid.p.count; j += 3) {
      const Complex expected =
          closed.evaluate(PhaseSpacePoint::xy(grid.x.point(i), grid.p.point(j)));
      worst = std::max(worst, std::abs(lifted.values(i, j) - expected) / peak);
    }
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("u_phi_numeric is an isometry on a Gaussian battery") {
  auto phi = GaussianState::standard(1, kHbar);
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> xdist(0.5, 2.0);
  std::uniform_real_distribution<double> ydist(-0.8, 0.8);
  for (int trial = 0; trial < 10; ++trial) {
    auto psi = numerics::sample(scalar_state(Complex(xdist(rng), ydist(rng))), kSpace);
    auto lifted = u_phi_numeric(psi, phi);
    CHECK(std::abs(numerics::norm_l2(lifted) - numerics::norm_l2(psi)) < 1e-6);
  }
}

TEST_CASE("u_phi_numeric intertwines Heisenberg and phase-space shifts") {
  auto phi = GaussianState::standard(1, kHbar);
  auto psi = numerics::sample(phi, kSpace);
  const auto z0 = PhaseSpacePoint::xy(0.5, 0.5);

  auto lhs = u_phi_numeric(numerics::heisenberg_apply(z0, psi, kHbar), phi);
  auto rhs = numerics::phase_space_translate(z0, u_phi_numeric(psi, phi), kHbar);
  const double peak = lhs.values.cwiseAbs().maxCoeff();
  CHECK((lhs.values - rhs.values).cwiseAbs().maxCoeff() / peak < 1e-8);
}

TEST_CASE("phase_space_frame_apply approximates density * Id") {
  auto spec = square_spec(2.0);
  const auto grid = conjugate_phase_space_grid(kSpace, kHbar);
  auto Phi = gaussians::u_phi_closed(GaussianState::standard(1, kHbar));
  auto Psi = numerics::sample(Phi, grid);

  auto applied = phase_space_frame_apply(Psi, spec, 8.0);
  applied.values *= 0.25;  // delta^{-2}
  double diff2 = 0.0;
  for (Eigen::Index i = 0; i < Psi.values.rows(); ++i) {
    for (Eigen::Index j = 0; j < Psi.values.cols(); ++j) {
      diff2 += std::norm(applied.values(i, j) - Psi.values(i, j));
    }
  }
  const double rel_l2 =
      std::sqrt(diff2 * grid.x.spacing * grid.p.spacing) / numerics::norm_l2(Psi);
  CHECK(rel_l2 <= 7.54e-3 + 1e-4);
}

TEST_CASE("intertwining of the frame operators") {
  auto spec = square_spec(2.0);
  auto phi = GaussianState::standard(1, kHbar);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> xdist(0.7, 1.6);
  std::uniform_real_distribution<double> ydist(-0.5, 0.5);
  for (int trial = 0; trial < 3; ++trial) {
    auto psi = numerics::sample(scalar_state(Complex(xdist(rng), ydist(rng))), kSpace);
    auto lhs = phase_space_frame_apply(u_phi_numeric(psi, phi), spec, 7.0);
    auto rhs = u_phi_numeric(frames::frame_apply(spec.base, psi, 7.0), phi);
    const double scale = numerics::norm_l2(lhs);
    double diff2 = 0.0;
    for (Eigen::Index i = 0; i < lhs.values.rows(); ++i) {
      for (Eigen::Index j = 0; j < lhs.values.cols(); ++j) {
        diff2 += std::norm(lhs.values(i, j) - rhs.values(i, j));
      }
    }
    CHECK(std::sqrt(diff2 * lhs.grid.x.spacing * lhs.grid.p.spacing) / scale < 1e-6);
  }
}

TEST_CASE("frame inequality transfers to the lifted system") {
  auto spec = square_spec(2.0);
  auto bounds = frames::frame_bounds_numeric(spec.base);
  auto phi = GaussianState::standard(1, kHbar);
  auto Phi = gaussians::u_phi_closed(phi);
  const auto grid = conjugate_phase_space_grid(kSpace, kHbar);

  auto psi = numerics::sample(scalar_state(Complex(1.4, 0.3)), kSpace);
  auto Psi = u_phi_numeric(psi, phi);
  const double norm2 = std::pow(numerics::norm_l2(Psi), 2);

  double coeff_energy = 0.0;
  for (const auto& z : spec.base.lattice.enumerate_points(8.0)) {
    const auto atom = sample_atom(Phi, z, Psi.grid);
    coeff_energy += std::norm(numerics::inner_product_l2(Psi, atom));
  }
  CHECK(coeff_energy >= bounds.a_est * norm2 * (1.0 - 1e-3));
  CHECK(coeff_energy <= bounds.b_est * norm2 * (1.0 + 1e-3));
  (void)grid;
}

TEST_CASE("phase_space_expand of the standard lift") {
  auto spec = square_spec(2.0);
  auto Phi = gaussians::u_phi_closed(GaussianState::standard(1, kHbar));
  const auto grid = conjugate_phase_space_grid(kSpace, kHbar);

  auto result = phase_space_expand(Phi, spec, 0.0, grid);
  CHECK(result.relative_l2_error <= 7.54e-3 + 1e-4);

  // coefficients match the scaled ambiguity column of the window
  auto std1 = GaussianState::standard(1, kHbar);
  const double scale = std::sqrt(2.0 * std::numbers::pi * kHbar.hbar);
  for (const auto& c : result.coefficients) {
    const Complex expected =
        scale * gaussians::cross_ambiguity_closed(std1, std1, c.point);
    CHECK(std::abs(c.value - expected) <= 1e-12);
  }
}

TEST_CASE("phase_space_expand error decays at the lattice rate") {
  auto target = gaussians::u_phi_closed(scalar_state(2.0));
  const auto grid = conjugate_phase_space_grid(kSpace, kHbar);

  std::vector<double> deltas{1.5, 2.0, 3.0};
  std::vector<double> errors;
  double exponent = 0.0;
  for (double delta : deltas) {
    auto result = phase_space_expand(target, square_spec(delta), 0.0, grid);
    errors.push_back(result.l2_error);
    exponent = result.rate_exponent;
  }
  CHECK(errors[1] < errors[0]);
  CHECK(errors[2] < errors[1]);

  const double slope =
      (std::log(errors[2]) - std::log(errors[1])) / (deltas[2] * deltas[2] - deltas[1] * deltas[1]);
  CHECK(std::abs(slope - exponent) <= 0.2 * std::abs(exponent));
}

TEST_CASE("expansion coefficients agree with 2-D quadrature") {
  const auto grid = conjugate_phase_space_grid(kSpace, kHbar);
  auto Phi = gaussians::u_phi_closed(GaussianState::standard(1, kHbar));
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> mx(0.6, 2.2);
  std::uniform_real_distribution<double> my(-0.8, 0.8);
  std::uniform_real_distribution<double> zdist(-1.5, 1.5);
  for (int trial = 0; trial < 10; ++trial) {
    auto target = gaussians::u_phi_closed(scalar_state(Complex(mx(rng), my(rng))));
    const auto z = PhaseSpacePoint::xy(zdist(rng), zdist(rng));
    const Complex closed = gaussians::expansion_coefficient(target, z);
    const Complex quad =
        numerics::inner_product_l2(numerics::sample(target, grid), sample_atom(Phi, z, grid));
    CHECK(std::abs(closed - quad) <= 1e-8 * std::max(1.0, std::abs(closed)));
  }
}

TEST_CASE("projection_check identifies the lifted subspace") {
  auto phi = GaussianState::standard(1, kHbar);
  const auto grid = conjugate_phase_space_grid(kSpace, kHbar);

  // elements of H_phi
  auto PsiF = numerics::sample(gaussians::u_phi_closed(scalar_state(2.0)), grid);
  CHECK(projection_check(PsiF, phi) < 1e-4);

  auto Phi = gaussians::u_phi_closed(phi);
  auto translated = sample_atom(Phi, PhaseSpacePoint::xy(0.5, 0.5), grid);
  CHECK(projection_check(translated, phi) < 1e-4);

  // (x + ip) Phi is orthogonal to every element of H_phi
  Eigen::MatrixXcd values(grid.x.count, grid.p.count);
  for (int i = 0; i < grid.x.count; ++i) {
    for (int j = 0; j < grid.p.count; ++j) {
      const double x = grid.x.point(i);
      const double p = grid.p.point(j);
      values(i, j) = Complex(x, p) * Phi.evaluate(PhaseSpacePoint::xy(x, p));
    }
  }
  numerics::SampledFunction2D ortho(grid, std::move(values));
  const double dist = projection_check(ortho, phi);
  const double norm = numerics::norm_l2(ortho);
  CHECK(std::abs(dist - norm) < 1e-3 * norm);
}
