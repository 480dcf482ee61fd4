#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "whframes/frames.hpp"

using namespace whframes;
using namespace whframes::frames;
using gaussians::GaussianState;
using gaussians::GeneralizedGaussian1D;
using symplectic::Lattice;

namespace {

const HBarConfig kHbar = HBarConfig::classical();

FrameSpec square_spec(double delta) {
  return FrameSpec(GaussianState::standard(1, kHbar),
                   Lattice::param1d(1.0, 1.0, 0.0, delta));
}

// independent oracle: plain double sum over a large fixed box
double brute_janssen(double delta, const Matrix& G, int box = 30) {
  const double c = delta * delta / (4.0 * kHbar.hbar);
  double sum = 0.0;
  for (int k = -box; k <= box; ++k) {
    for (int l = -box; l <= box; ++l) {
      if (k == 0 && l == 0) continue;
      Eigen::Vector2d v(k, l);
      sum += std::exp(-c * v.dot(G * v));
    }
  }
  return sum;
}

}  // namespace

TEST_CASE("gaussian_frame_set_contains separable cases") {
  auto window1 = GaussianState::standard(1, kHbar);
  CHECK(gaussian_frame_set_contains(
      FrameSpec(window1, Lattice::separable(Vector::Constant(1, 1.0), Vector::Constant(1, 0.9)))));
  CHECK_FALSE(gaussian_frame_set_contains(
      FrameSpec(window1, Lattice::separable(Vector::Constant(1, 1.0), Vector::Constant(1, 1.0)))));

  auto window2 = GaussianState::standard(2, kHbar);
  Vector alphas(2), betas(2);
  alphas << 1.0, 1.0;
  betas << 0.9, 1.1;
  CHECK_FALSE(gaussian_frame_set_contains(FrameSpec(window2, Lattice::separable(alphas, betas))));
  betas << 0.9, 0.95;
  CHECK(gaussian_frame_set_contains(FrameSpec(window2, Lattice::separable(alphas, betas))));
}

TEST_CASE("gaussian_frame_set_contains density and symplectic reductions") {
  // n = 1: any lattice decides through the density
  auto gg = GeneralizedGaussian1D(0.7, 1.4, kHbar).to_state();
  CHECK(gaussian_frame_set_contains(FrameSpec(gg, Lattice::param1d(1.0, 1.0, 0.6, 1.2))));
  CHECK_FALSE(gaussian_frame_set_contains(FrameSpec(gg, Lattice::param1d(1.0, 1.0, 0.6, 0.9))));

  // n = 2 symplectic-tagged lattice with the standard window
  auto window2 = GaussianState::standard(2, kHbar);
  Matrix P(2, 2);
  P << 0.4, 0.1, 0.1, -0.2;
  const Matrix S = symplectic::generator_V(P).entries();
  CHECK(gaussian_frame_set_contains(
      FrameSpec(window2, Lattice::symplectic(1.5, Matrix::Identity(4, 4), S))));
  CHECK_FALSE(gaussian_frame_set_contains(
      FrameSpec(window2, Lattice::symplectic(0.9, Matrix::Identity(4, 4), S))));

  // n = 2, untagged non-separable lattice: refuse to guess
  Matrix gen = Matrix::Identity(4, 4);
  gen(1, 0) = 0.3;
  CHECK_THROWS_AS(gaussian_frame_set_contains(FrameSpec(window2, Lattice::from_generator(gen))),
                  UndecidableError);
}

TEST_CASE("janssen_error_sum against the brute-force oracle") {
  auto diag2 = janssen_error_sum(square_spec(2.0), 1e-14);
  CHECK(diag2.janssen_error == doctest::Approx(brute_janssen(2.0, Matrix::Identity(2, 2))).epsilon(1e-12));
  CHECK(std::abs(diag2.janssen_error - 7.4837e-3) < 1e-6);
  CHECK_FALSE(diag2.vacuous());

  auto diag1 = janssen_error_sum(square_spec(1.0), 1e-14);
  CHECK(diag1.janssen_error == doctest::Approx(brute_janssen(1.0, Matrix::Identity(2, 2))).epsilon(1e-12));
  CHECK(diag1.vacuous());

  // monotone decreasing in delta
  double prev = 1e300;
  for (double delta : {1.0, 1.5, 2.0, 3.0, 6.0}) {
    const double value = janssen_error_sum(square_spec(delta), 1e-14).janssen_error;
    CHECK(value < prev);
    prev = value;
  }

  // preconditions
  auto gg = GeneralizedGaussian1D(0.0, 2.0, kHbar).to_state();
  CHECK_THROWS_AS(janssen_error_sum(FrameSpec(gg, Lattice::param1d(1, 1, 0, 2.0)), 1e-14),
                  std::invalid_argument);
  Matrix gen(2, 2);
  gen << 0.5, 0.0, 0.1, 0.5;
  CHECK_THROWS_AS(janssen_error_sum(FrameSpec(GaussianState::standard(1, kHbar),
                                              Lattice::from_generator(gen)),
                                    1e-14),
                  std::invalid_argument);
}

TEST_CASE("predicted_rate closed values") {
  symplectic::LowerBlockSymplectic B1(Matrix::Identity(1, 1), Matrix::Zero(1, 1));
  CHECK(predicted_rate(B1, 2.0, kHbar) ==
        doctest::Approx(std::exp(-4.0 * std::numbers::pi)).epsilon(1e-12));

  symplectic::LowerBlockSymplectic B2(2.0 * Matrix::Identity(1, 1), Matrix::Zero(1, 1));
  CHECK(predicted_rate(B2, 1.0, kHbar) ==
        doctest::Approx(std::exp(-17.0 * std::numbers::pi / 8.0)).epsilon(1e-12));

  // doubling delta raises the rate to the fourth power
  const double r1 = predicted_rate(B2, 1.3, kHbar);
  const double r2 = predicted_rate(B2, 2.6, kHbar);
  CHECK(r2 == doctest::Approx(std::pow(r1, 4)).epsilon(1e-10));
}

TEST_CASE("theta sums and the shear inequality") {
  // gamma = 0: both sides coincide after swapping the axes
  CHECK(theta_sum(1.3, 1.0, 1.0, 0.0) == doctest::Approx(theta_sum_rhs(1.3, 1.0, 1.0)).epsilon(1e-13));

  CHECK(theta_sum(std::numbers::pi, 1.0, 1.0, 0.5) < theta_sum_rhs(std::numbers::pi, 1.0, 1.0));
  CHECK(theta_inequality_check(2.0 * std::numbers::pi, 2.0, 0.5, 0.3));

  // 100-point random sweep over r, alpha, gamma with alpha beta = 1
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> rdist(0.4, 6.0);
  std::uniform_real_distribution<double> adist(0.5, 2.0);
  std::uniform_real_distribution<double> gdist(0.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double r = rdist(rng);
    const double alpha = adist(rng);
    const double gamma = gdist(rng);
    CAPTURE(r);
    CAPTURE(alpha);
    CAPTURE(gamma);
    CHECK(theta_inequality_check(r, alpha, 1.0 / alpha, gamma));
  }

  CHECK_THROWS_AS(theta_sum(1.0, 1.0, 1.0, -0.8), std::invalid_argument);
  CHECK_THROWS_AS(theta_sum(1.0, 2.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("janssen shear bound never exceeds the axis-aligned bound") {
  // per-k chain at n = 1: the shifted theta sum is maximal at zero shift
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> Ldist(0.6, 1.8);
  std::uniform_real_distribution<double> Pdist(-1.5, 1.5);
  for (int trial = 0; trial < 20; ++trial) {
    const double L = Ldist(rng);
    const double P = Pdist(rng);
    const double delta = 1.4;
    const double c = delta * delta / (4.0 * kHbar.hbar);
    for (int k = -3; k <= 3; ++k) {
      double shifted = 0.0, centered = 0.0;
      for (int l = -40; l <= 40; ++l) {
        shifted += std::exp(-c * (P * k + l) * (P * k + l) / (L * L));
        centered += std::exp(-c * l * l / (L * L));
      }
      CHECK(shifted <= centered + 1e-12);
    }

    Matrix Sp(2, 2);
    Sp << L, 0.0, P / L, 1.0 / L;
    auto spec_shear = FrameSpec(GaussianState::standard(1, kHbar),
                                Lattice::symplectic(delta, Matrix::Identity(2, 2), Sp));
    Matrix S0(2, 2);
    S0 << L, 0.0, 0.0, 1.0 / L;
    auto spec_axis = FrameSpec(GaussianState::standard(1, kHbar),
                               Lattice::symplectic(delta, Matrix::Identity(2, 2), S0));
    CHECK(janssen_error_sum(spec_shear, 1e-14).janssen_error <=
          janssen_error_sum(spec_axis, 1e-14).janssen_error + 1e-12);
  }
}

TEST_CASE("approximate_dual_window certificates") {
  auto dual = approximate_dual_window(square_spec(2.0));
  CHECK(dual.scale == doctest::Approx(0.25));
  CHECK(dual.certified_relative_error == doctest::Approx(7.540e-3).epsilon(1e-3));

  CHECK_THROWS_AS(approximate_dual_window(square_spec(1.0)), std::domain_error);

  auto dual4 = approximate_dual_window(square_spec(4.0));
  CHECK(dual4.certified_relative_error < 5e-11);
  CHECK(dual4.certified_relative_error > 1e-11);
}

TEST_CASE("approx_expansion reconstructs the window at delta = 4") {
  auto spec = square_spec(4.0);
  auto grid = numerics::Grid1D::centered(6.0, 1024);
  auto result = approx_expansion(spec.window, spec, 0.0, grid);
  CHECK(result.report.sup_error < 1e-6);
  CHECK(result.report.l2_error < 1e-6);
  CHECK(result.report.frame_certified);
}

TEST_CASE("approx_expansion at and above the critical density") {
  auto target = GeneralizedGaussian1D(0.0, 2.0, kHbar).to_state();
  auto grid = numerics::Grid1D::centered(6.0, 1024);

  auto critical = FrameSpec(GaussianState::standard(1, kHbar), Lattice::param1d(1, 1, 0, 1.0));
  CHECK_THROWS_AS(approx_expansion(target, critical, 0.0, grid), std::domain_error);
  auto forced = approx_expansion(target, critical, 0.0, grid, true);
  CHECK_FALSE(forced.report.frame_certified);

  auto dense = approx_expansion(target, square_spec(2.0), 0.0, grid);
  CHECK(dense.report.sup_error * 100.0 <= forced.report.sup_error);
}

TEST_CASE("approx_expansion converges for an odd sampled target") {
  auto grid = numerics::Grid1D::centered(6.0, 512);
  ComplexVector values(grid.count);
  for (int k = 0; k < grid.count; ++k) {
    const double x = grid.point(k);
    values(k) = x * std::exp(-std::numbers::pi * x * x);
  }
  numerics::SampledFunction1D target(grid, values);
  const double norm = numerics::norm_l2(target);

  auto result = approx_expansion(target, square_spec(3.0), 6.0);
  CHECK(result.report.l2_error < 1e-4 * norm);
}

TEST_CASE("frame_bounds_numeric certified by the Janssen bound") {
  auto spec = square_spec(2.0);
  auto bounds = frame_bounds_numeric(spec);
  const double eps = janssen_error_sum(spec, 1e-14).janssen_error;

  CHECK(bounds.a_est <= bounds.b_est);
  CHECK(bounds.b_est / bounds.a_est - 1.0 <= 2.0 * eps / (1.0 - eps) + 1e-4);
  CHECK(bounds.spectral_error(spec.lattice.volume()) <= eps + 1e-4);
  // the frame operator sits near density * Id
  CHECK(bounds.a_est == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("frame_bounds_numeric detects the critical lattice") {
  auto critical = FrameSpec(GaussianState::standard(1, kHbar), Lattice::param1d(1, 1, 0, 1.0));
  FrameBoundsOptions coarse;
  coarse.grid = numerics::Grid1D::centered(8.0, 256);
  auto b1 = frame_bounds_numeric(critical, coarse);

  FrameBoundsOptions fine;
  fine.grid = numerics::Grid1D::centered(8.0, 384);
  auto b2 = frame_bounds_numeric(critical, fine);

  CHECK(b1.a_est < 0.2 * b1.b_est);
  CHECK(b2.a_est <= b1.a_est + 1e-6);
}
