#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "whframes/gaussians.hpp"
#include "whframes/numerics.hpp"
#include "whframes/symplectic.hpp"

using namespace whframes;
using namespace whframes::numerics;
using gaussians::GaussianState;
using gaussians::GeneralizedGaussian1D;

namespace {

const HBarConfig kHbar = HBarConfig::classical();

GaussianState scalar_state(Complex m) {
  ComplexMatrix M(1, 1);
  M(0, 0) = m;
  return GaussianState(M, kHbar);
}

const Grid1D kGrid = Grid1D::centered(6.0, 512);
const Grid1D kShiftGrid = Grid1D::centered(8.0, 512);  // h = 1/32

double max_rel_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  const double peak = a.cwiseAbs().maxCoeff();
  return (a - b).cwiseAbs().maxCoeff() / peak;
}

}  // namespace

TEST_CASE("inner_product_l2 basics") {
  auto g = GaussianState::standard(1, kHbar);
  auto f = sample(g, kGrid);
  CHECK(std::abs(inner_product_l2(f, f) - 1.0) < 1e-10);

  SampledFunction1D zero(kGrid, ComplexVector::Zero(kGrid.count));
  CHECK(std::abs(inner_product_l2(zero, f)) == 0.0);

  SampledFunction1D other(Grid1D::centered(5.0, 512), ComplexVector::Zero(512));
  CHECK_THROWS_AS(inner_product_l2(f, other), std::invalid_argument);

  // Plancherel
  auto transformed = hbar_fourier_numeric(f, kHbar);
  CHECK(norm_l2(transformed) == doctest::Approx(norm_l2(f)).epsilon(1e-8));
}

TEST_CASE("heisenberg_apply laws") {
  auto f = sample(scalar_state(Complex(1.3, 0.4)), kShiftGrid);
  const auto z0 = PhaseSpacePoint::xy(0.5, 0.25);
  const auto z1 = PhaseSpacePoint::xy(-0.25, 0.75);

  auto ident = heisenberg_apply(PhaseSpacePoint::xy(0, 0), f, kHbar);
  CHECK((ident.values - f.values).cwiseAbs().maxCoeff() == 0.0);

  auto t0 = heisenberg_apply(z0, f, kHbar);
  CHECK(norm_l2(t0) == doctest::Approx(norm_l2(f)).epsilon(1e-10));

  // commutation: T(z0) T(z1) = e^{i sigma(z0,z1)/hbar} T(z1) T(z0)
  auto lhs = heisenberg_apply(z0, heisenberg_apply(z1, f, kHbar), kHbar);
  auto rhs = heisenberg_apply(z1, heisenberg_apply(z0, f, kHbar), kHbar);
  const double sigma = symplectic::symplectic_form(z0, z1);
  rhs.values *= std::exp(Complex(0, sigma / kHbar.hbar));
  CHECK((lhs.values - rhs.values).cwiseAbs().maxCoeff() < 1e-10);

  // addition: T(z0 + z1) = e^{-i sigma(z0,z1)/2hbar} T(z0) T(z1)
  auto sum = heisenberg_apply(PhaseSpacePoint(z0.coords + z1.coords), f, kHbar);
  auto composed = heisenberg_apply(z0, heisenberg_apply(z1, f, kHbar), kHbar);
  composed.values *= std::exp(Complex(0, -sigma / (2.0 * kHbar.hbar)));
  CHECK((sum.values - composed.values).cwiseAbs().maxCoeff() < 1e-10);

  CHECK_THROWS_AS(heisenberg_apply(PhaseSpacePoint::xy(0.013, 0), f, kHbar),
                  std::invalid_argument);
  // the band-limited path handles the same shift
  auto interp = heisenberg_apply(PhaseSpacePoint::xy(0.013, 0), f, kHbar, true);
  CHECK(norm_l2(interp) == doctest::Approx(norm_l2(f)).epsilon(1e-8));
}

TEST_CASE("phase_space_translate") {
  auto Phi = gaussians::u_phi_closed(GaussianState::standard(1, kHbar));
  const Grid2D grid{Grid1D::centered(4.0, 128), Grid1D::centered(4.0, 128)};
  auto sampled = sample(Phi, grid);

  auto ident = phase_space_translate(PhaseSpacePoint::xy(0, 0), sampled, kHbar);
  CHECK((ident.values - sampled.values).cwiseAbs().maxCoeff() == 0.0);

  const auto z0 = PhaseSpacePoint::xy(0.5, -0.25);  // half-shift lands on the grid (h = 1/16)
  auto shifted = phase_space_translate(z0, sampled, kHbar);

  // matches the analytic translate pointwise
  Eigen::MatrixXcd expected(grid.x.count, grid.p.count);
  for (int i = 0; i < grid.x.count; ++i) {
    for (int j = 0; j < grid.p.count; ++j) {
      expected(i, j) =
          Phi.translated_evaluate(z0, PhaseSpacePoint::xy(grid.x.point(i), grid.p.point(j)));
    }
  }
  CHECK(max_rel_diff(expected, shifted.values) < 1e-8);

  // adjoint: ((T~(z0) F | G)) = ((F | T~(-z0) G))
  auto G = sample(gaussians::u_phi_closed(scalar_state(Complex(1.5, 0.5))), grid);
  const Complex lhs = inner_product_l2(shifted, G);
  const Complex rhs =
      inner_product_l2(sampled, phase_space_translate(PhaseSpacePoint(-z0.coords), G, kHbar));
  CHECK(std::abs(lhs - rhs) < 1e-10);

  CHECK_THROWS_AS(phase_space_translate(PhaseSpacePoint::xy(0.034, 0), sampled, kHbar),
                  std::invalid_argument);
}

TEST_CASE("wigner_numeric matches the standard closed form") {
  auto g = GaussianState::standard(1, kHbar);
  auto f = sample(g, kGrid);
  const Grid1D pgrid = Grid1D::centered(3.0, 96);
  auto W = wigner_numeric(f, f, kHbar, pgrid);

  double worst = 0.0;
  const double peak = 1.0 / (std::numbers::pi * kHbar.hbar);
  for (int i = 0; i < kGrid.count; i += 7) {
    for (int j = 0; j < pgrid.count; ++j) {
      const double x = kGrid.point(i);
      const double p = pgrid.point(j);
      const double expected = peak * std::exp(-(x * x + p * p) / kHbar.hbar);
      worst = std::max(worst, std::abs(W.values(i, j) - expected) / peak);
    }
  }
  CHECK(worst < 1e-8);
  // real for f = g
  CHECK(W.values.imag().cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("wigner_numeric conjugate symmetry") {
  auto f = sample(scalar_state(Complex(1.6, -0.7)), kGrid);
  auto g = sample(scalar_state(Complex(0.8, 0.3)), kGrid);
  const Grid1D pgrid = Grid1D::centered(3.0, 64);
  auto Wfg = wigner_numeric(f, g, kHbar, pgrid);
  auto Wgf = wigner_numeric(g, f, kHbar, pgrid);
  CHECK((Wfg.values - Wgf.values.conjugate()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("wigner_numeric translated pair phase law") {
  auto psi = scalar_state(Complex(1.2, 0.3));
  auto phi = scalar_state(Complex(0.9, -0.2));
  auto fs = sample(psi, kShiftGrid);
  auto gs = sample(phi, kShiftGrid);
  const auto z0 = PhaseSpacePoint::xy(0.5, 0.5);
  const auto z1 = PhaseSpacePoint::xy(-0.25, 0.25);

  const Grid1D pgrid = Grid1D::centered(3.0, 48);
  auto W = wigner_numeric(heisenberg_apply(z0, fs, kHbar), heisenberg_apply(z1, gs, kHbar), kHbar,
                          pgrid);

  const auto base = gaussians::cross_wigner_closed(psi, phi);
  const Vector mid = 0.5 * (z0.coords + z1.coords);
  const Vector diff = z0.coords - z1.coords;
  const double s01 = symplectic::symplectic_form(z0, z1);
  double worst = 0.0;
  const double peak = W.values.cwiseAbs().maxCoeff();
  for (int i = 0; i < kShiftGrid.count; i += 9) {
    for (int j = 0; j < pgrid.count; ++j) {
      const Vector z = (Vector(2) << kShiftGrid.point(i), pgrid.point(j)).finished();
      const double s = symplectic::symplectic_form(PhaseSpacePoint(z), PhaseSpacePoint(diff));
      const Complex phase = std::exp(Complex(0, -(s + 0.5 * s01) / kHbar.hbar));
      const Complex expected = phase * base.evaluate(PhaseSpacePoint(z - mid));
      worst = std::max(worst, std::abs(W.values(i, j) - expected) / peak);
    }
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("ambiguity_numeric values and identities") {
  auto g = GaussianState::standard(1, kHbar);
  auto f = sample(g, kGrid);
  const Grid1D pgrid = Grid1D::centered(3.0, 96);
  auto A = ambiguity_numeric(f, f, kHbar, pgrid);

  const double pref = 1.0 / (2.0 * std::numbers::pi * kHbar.hbar);
  double worst = 0.0;
  for (int m = 0; m < A.grid.x.count; m += 5) {
    for (int j = 0; j < pgrid.count; ++j) {
      const double x = A.grid.x.point(m);
      const double p = pgrid.point(j);
      const double expected = pref * std::exp(-(x * x + p * p) / (4.0 * kHbar.hbar));
      worst = std::max(worst, std::abs(A.values(m, j) - expected) * 2.0 * std::numbers::pi *
                                  kHbar.hbar);
    }
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("ambiguity equals Heisenberg matrix element") {
  auto f = sample(scalar_state(Complex(1.4, 0.5)), kShiftGrid);
  auto g = sample(scalar_state(Complex(0.7, -0.3)), kShiftGrid);
  const Grid1D pgrid = Grid1D::centered(2.0, 32);
  auto A = ambiguity_numeric(f, g, kHbar, pgrid);

  const double scale = std::pow(2.0 * std::numbers::pi * kHbar.hbar, 1.0);
  double worst = 0.0;
  for (int m = 96; m < 160; m += 8) {
    for (int j = 0; j < pgrid.count; j += 4) {
      const auto z = PhaseSpacePoint::xy(A.grid.x.point(m), pgrid.point(j));
      const Complex via_op = inner_product_l2(f, heisenberg_apply(z, g, kHbar)) / scale;
      worst = std::max(worst, std::abs(A.values(m, j) - via_op));
    }
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("ambiguity equals scaled Wigner of the even reflection") {
  auto psi = scalar_state(Complex(1.1, 0.6));
  auto phi = scalar_state(Complex(0.8, -0.4));
  auto f = sample(psi, kGrid);
  auto g = sample(phi, kGrid);
  const Grid1D pgrid = kGrid;  // p values also lie on the x grid
  auto A = ambiguity_numeric(f, g, kHbar, pgrid);
  auto W = wigner_numeric(f, g, kHbar, pgrid);

  // A(f,g)(z) = 2^{-1} W(f,g)(z/2) for even windows; compare where z/2 is a node
  double worst = 0.0;
  const int N = kGrid.count;
  for (int m = N / 4; m < N / 2 + N / 4; m += 16) {
    const int xi = (2 * m - N / 2) / 2 + N / 2;  // index of x_m / 2 on kGrid
    for (int j = 0; j < N; j += 64) {
      if ((j - N / 2) % 2 != 0) continue;
      const int pj = (j - N / 2) / 2 + N / 2;
      const Complex lhs = A.values(m, j);
      const Complex rhs = 0.5 * W.values(xi, pj);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("hbar_fourier_numeric on Gaussians") {
  auto std1 = GaussianState::standard(1, kHbar);
  auto f = sample(std1, kGrid);
  auto Ff = hbar_fourier_numeric(f, kHbar);
  CHECK((Ff.values - f.values).cwiseAbs().maxCoeff() < 1e-8);

  // M = 4: transform has amplitude 1/2 relative to the Gaussian with exponent 1/4
  auto g4 = scalar_state(4.0);
  auto F4 = hbar_fourier_numeric(sample(g4, kGrid), kHbar);
  const auto closed = gaussians::fourier_gaussian(ComplexMatrix::Identity(1, 1) * 4.0, kHbar);
  double worst = 0.0;
  for (int k = 0; k < kGrid.count; k += 5) {
    const double p = kGrid.point(k);
    const Complex expected = g4.amplitude() * closed.amplitude *
                             std::exp(-closed.exponent(0, 0) * p * p / (2.0 * kHbar.hbar));
    worst = std::max(worst, std::abs(F4.values(k) - expected));
  }
  CHECK(worst < 1e-8);

  SampledFunction1D coarse(Grid1D(0.0, 0.5, 64), ComplexVector::Zero(64));
  CHECK_THROWS_AS(hbar_fourier_numeric(coarse, kHbar), std::invalid_argument);
}

TEST_CASE("symplectic Fourier relates Wigner and ambiguity") {
  auto g = scalar_state(Complex(1.0, 0.4));
  auto f = sample(g, Grid1D::centered(6.0, 256));
  const Grid1D pgrid = Grid1D::centered(6.0, 256);
  auto W = wigner_numeric(f, f, kHbar, pgrid);
  auto A_direct = ambiguity_numeric(f, f, kHbar, pgrid);
  auto A_via_fourier = symplectic_fourier_numeric(W, kHbar);

  // compare on the coarser ambiguity x grid
  double worst = 0.0;
  const double peak = A_direct.values.cwiseAbs().maxCoeff();
  for (int m = 0; m < A_direct.grid.x.count; m += 4) {
    const auto [ok, off] = W.grid.x.aligned_offset(A_direct.grid.x.point(m));
    REQUIRE(ok);
    const int idx = static_cast<int>(off) + 256 / 2;
    for (int j = 0; j < pgrid.count; j += 8) {
      worst = std::max(worst,
                       std::abs(A_via_fourier.values(idx, j) - A_direct.values(m, j)) / peak);
    }
  }
  CHECK(worst < 1e-6);

  // involution on an even input
  auto back = symplectic_fourier_numeric(A_via_fourier, kHbar);
  CHECK(max_rel_diff(W.values, back.values) < 1e-8);
}

TEST_CASE("metaplectic generators") {
  auto f = sample(scalar_state(Complex(1.0, 0.2)), kShiftGrid);

  auto v0 = metaplectic_V_apply(0.0, f, kHbar);
  CHECK((v0.values - f.values).cwiseAbs().maxCoeff() == 0.0);

  // M_{2,0} applied to the standard window gives the dilated window
  auto std1 = GaussianState::standard(1, kHbar);
  auto dil = metaplectic_M_apply(2.0, sample(std1, kShiftGrid));
  auto target = sample(GeneralizedGaussian1D(0.0, 2.0, kHbar).to_state(), kShiftGrid);
  CHECK((dil.values - target.values).cwiseAbs().maxCoeff() < 1e-10);

  // unitarity
  CHECK(norm_l2(metaplectic_J_apply(f, kHbar)) == doctest::Approx(norm_l2(f)).epsilon(1e-8));
  CHECK(norm_l2(metaplectic_V_apply(0.7, f, kHbar)) == doctest::Approx(norm_l2(f)).epsilon(1e-10));
  CHECK(norm_l2(dil) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("symplectic covariance of the metaplectic generators") {
  auto f = sample(scalar_state(Complex(1.1, 0.25)), kShiftGrid);
  const auto z0 = PhaseSpacePoint::xy(0.5, 0.25);

  // S = J: J T(z0) f vs T(Jz0) J f
  {
    auto lhs = metaplectic_J_apply(heisenberg_apply(z0, f, kHbar), kHbar);
    const Vector Jz = symplectic::standard_J(1) * z0.coords;
    auto rhs = heisenberg_apply(PhaseSpacePoint(Jz), metaplectic_J_apply(f, kHbar), kHbar);
    CHECK((lhs.values - rhs.values).cwiseAbs().maxCoeff() < 1e-8);
  }
  // S = V_{-P}: V T(z0) f vs T(V_{-P} z0) V f
  {
    const double P = 0.5;
    auto lhs = metaplectic_V_apply(P, heisenberg_apply(z0, f, kHbar), kHbar);
    Matrix VP(2, 2);
    VP << 1, 0, P, 1;
    const Vector Vz = VP * z0.coords;  // (0.5, 0.5), grid-aligned
    auto rhs = heisenberg_apply(PhaseSpacePoint(Vz), metaplectic_V_apply(P, f, kHbar), kHbar);
    CHECK((lhs.values - rhs.values).cwiseAbs().maxCoeff() < 1e-8);
  }
  // S = M_{L,0}: M T(z0) f vs T(M_L z0) M f, L = 2
  {
    auto lhs = metaplectic_M_apply(2.0, heisenberg_apply(z0, f, kHbar));
    Matrix ML(2, 2);
    ML << 0.5, 0, 0, 2.0;
    const Vector Mz = ML * z0.coords;  // (0.25, 0.5)
    auto rhs = heisenberg_apply(PhaseSpacePoint(Mz), metaplectic_M_apply(2.0, f), kHbar);
    CHECK((lhs.values - rhs.values).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("poisson_check") {
  const ComplexMatrix I1 = ComplexMatrix::Identity(1, 1);
  auto [lhs, rhs] = poisson_check(I1, kHbar, Vector::Zero(1));
  CHECK(std::abs(lhs - rhs) < 1e-12);
  CHECK(std::abs(lhs - 1.0864348112) < 1e-9);

  Vector half = Vector::Constant(1, 0.5);
  auto [l2, r2] = poisson_check(I1, kHbar, half);
  CHECK(std::abs(l2 - r2) < 1e-12);

  auto [l3, r3] = poisson_check(4.0 * I1, kHbar, half);
  CHECK(std::abs(l3 - r3) < 1e-12);
  // scaling M -> 4M narrows the periodization
  CHECK(l3.real() < lhs.real());
}

TEST_CASE("numeric_covariance measures Sigma / (2 pi)") {
  gaussians::CovarianceState c1(Matrix::Identity(2, 2), kHbar);
  auto m1 = numeric_covariance(c1);
  const double inv2pi = 1.0 / (2.0 * std::numbers::pi);
  CHECK((m1.measured - inv2pi * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(m1.ratio == doctest::Approx(inv2pi).epsilon(1e-6));

  Matrix diag(2, 2);
  diag << 2.0, 0.0, 0.0, 0.5;
  auto m2 = numeric_covariance(gaussians::CovarianceState(diag, kHbar));
  CHECK((m2.measured - inv2pi * diag).cwiseAbs().maxCoeff() < 1e-8);

  Matrix off(2, 2);
  off << 1.0, 0.3, 0.3, 1.0;
  auto m3 = numeric_covariance(gaussians::CovarianceState(off, kHbar));
  CHECK((m3.measured - inv2pi * off).cwiseAbs().maxCoeff() < 1e-8);

  // the L1 normalization itself
  gaussians::CovarianceState c4(4.0 * Matrix::Identity(2, 2), kHbar);
  const Grid1D g = Grid1D::centered(12.0, 700);
  double mass = 0.0;
  for (int i = 0; i < g.count; ++i) {
    for (int j = 0; j < g.count; ++j) {
      mass += gaussians::density_rho_eval(c4, PhaseSpacePoint::xy(g.point(i), g.point(j)));
    }
  }
  mass *= g.spacing * g.spacing;
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("frame condition reformulations agree on a truncated lattice") {
  // fixed test function and window
  auto psi = scalar_state(Complex(1.3, 0.45));
  auto phi = GaussianState::standard(1, kHbar);
  auto fs = sample(psi, kShiftGrid);
  auto gs = sample(phi, kShiftGrid);

  // lattice (0.5 Z)^2 truncated to radius 4
  const double step = 0.5;
  const double radius = 4.0;
  const Grid1D pgrid = kShiftGrid;  // same spacing, so lattice p-values are nodes
  auto A = ambiguity_numeric(fs, gs, kHbar, pgrid);
  auto W = wigner_numeric(gs, fs, kHbar, pgrid);

  const double scale = 2.0 * std::numbers::pi * kHbar.hbar;
  double sum_atz = 0.0, sum_amb = 0.0, sum_wig = 0.0;
  const int N = kShiftGrid.count;
  for (int kx = -8; kx <= 8; ++kx) {
    for (int kp = -8; kp <= 8; ++kp) {
      const double zx = kx * step, zp = kp * step;
      if (zx * zx + zp * zp > radius * radius) continue;
      const auto z = PhaseSpacePoint::xy(zx, zp);
      // (atz) matrix elements
      const Complex ip = inner_product_l2(fs, heisenberg_apply(z, gs, kHbar)) / scale;
      sum_atz += std::norm(ip);
      // ambiguity oracle samples: x index on the doubled grid
      const auto [okx, offx] = A.grid.x.aligned_offset(zx);
      const auto [okp, offp] = A.grid.p.aligned_offset(zp);
      REQUIRE((okx && okp));
      sum_amb += std::norm(A.values(static_cast<int>(offx) + A.grid.x.count / 2,
                                    static_cast<int>(offp) + A.grid.p.count / 2));
      // Wigner values at half the lattice points
      const auto [hx, hox] = W.grid.x.aligned_offset(zx / 2.0);
      const auto [hp, hop] = W.grid.p.aligned_offset(zp / 2.0);
      REQUIRE((hx && hp));
      sum_wig += std::norm(W.values(static_cast<int>(hox) + N / 2, static_cast<int>(hop) + N / 2));
    }
  }
  CHECK(std::abs(sum_atz - sum_amb) < 1e-6 * sum_atz);
  // (4 pi hbar)^{2n} / (2 pi hbar)^{2n} = 2^{2n}
  CHECK(std::abs(sum_wig - 4.0 * sum_amb) < 1e-6 * sum_wig);
}

TEST_CASE("grid refinement stability of the Wigner oracle") {
  auto g = scalar_state(Complex(1.2, -0.5));
  const Grid1D pgrid = Grid1D::centered(2.5, 32);
  auto coarse = wigner_numeric(sample(g, Grid1D::centered(6.0, 512)),
                               sample(g, Grid1D::centered(6.0, 512)), kHbar, pgrid);
  auto fine = wigner_numeric(sample(g, Grid1D::centered(6.0, 1024)),
                             sample(g, Grid1D::centered(6.0, 1024)), kHbar, pgrid);
  double worst = 0.0;
  const double peak = coarse.values.cwiseAbs().maxCoeff();
  for (int i = 0; i < 512; i += 3) {
    for (int j = 0; j < pgrid.count; ++j) {
      worst = std::max(worst, std::abs(coarse.values(i, j) - fine.values(2 * i, j)) / peak);
    }
  }
  CHECK(worst < 1e-7);  // well below 10x the oracle tolerance
}
