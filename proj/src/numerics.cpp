#include "whframes/numerics.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace whframes::numerics {

namespace {

constexpr Complex kI(0.0, 1.0);

double tail_magnitude(const ComplexVector& v) {
  return std::max(std::abs(v(0)), std::abs(v(v.size() - 1)));
}

void require_supported(const SampledFunction1D& f, const char* who) {
  const double peak = f.values.cwiseAbs().maxCoeff();
  if (peak > 0.0 && tail_magnitude(f.values) > 1e-10 * peak) {
    throw std::invalid_argument(std::string(who) + ": insufficient support (tails above 1e-10 of peak)");
  }
}

// Circular band-limited shift by a fractional number of grid steps.
ComplexVector fractional_shift(const ComplexVector& v, double steps) {
  const auto N = v.size();
  ComplexVector spectrum = ComplexVector::Zero(N);
  for (Eigen::Index m = 0; m < N; ++m) {
    Complex acc = 0.0;
    for (Eigen::Index k = 0; k < N; ++k) {
      acc += v(k) * std::polar(1.0, -2.0 * std::numbers::pi * double(k) * double(m) / double(N));
    }
    spectrum(m) = acc;
  }
  ComplexVector out = ComplexVector::Zero(N);
  for (Eigen::Index k = 0; k < N; ++k) {
    Complex acc = 0.0;
    for (Eigen::Index m = 0; m < N; ++m) {
      const double signed_m = (m <= N / 2) ? double(m) : double(m) - double(N);
      const double phase = 2.0 * std::numbers::pi * (double(k) * double(m) / double(N) - signed_m * steps / double(N));
      acc += spectrum(m) * std::polar(1.0, phase);
    }
    out(k) = acc / double(N);
  }
  return out;
}

}  // namespace

Grid1D::Grid1D(double center_in, double spacing_in, int count_in)
    : center(center_in), spacing(spacing_in), count(count_in) {
  if (!(spacing > 0.0)) throw std::invalid_argument("Grid1D: spacing must be positive");
  if (count < 16) throw std::invalid_argument("Grid1D: count must be >= 16");
}

Grid1D Grid1D::centered(double halfwidth, int count) {
  return Grid1D(0.0, 2.0 * halfwidth / count, count);
}

bool Grid1D::same_as(const Grid1D& other) const {
  return count == other.count && std::abs(center - other.center) <= 1e-12 &&
         std::abs(spacing - other.spacing) <= 1e-12 * spacing;
}

std::pair<bool, long> Grid1D::aligned_offset(double x, double tol) const {
  const double steps = x / spacing;
  const double rounded = std::round(steps);
  if (std::abs(steps - rounded) <= tol) return {true, static_cast<long>(rounded)};
  return {false, 0};
}

SampledFunction1D::SampledFunction1D(Grid1D grid_in, ComplexVector values_in)
    : grid(grid_in), values(std::move(values_in)) {
  if (values.size() != grid.count) {
    throw std::invalid_argument("SampledFunction1D: value count mismatch");
  }
  if (!values.allFinite()) throw std::invalid_argument("SampledFunction1D: non-finite entries");
}

SampledFunction2D::SampledFunction2D(Grid2D grid_in, Eigen::MatrixXcd values_in)
    : grid(grid_in), values(std::move(values_in)) {
  if (values.rows() != grid.x.count || values.cols() != grid.p.count) {
    throw std::invalid_argument("SampledFunction2D: value shape mismatch");
  }
  if (!values.allFinite()) throw std::invalid_argument("SampledFunction2D: non-finite entries");
}

Grid1D default_grid(const gaussians::GaussianState& g, int count) {
  Eigen::JacobiSVD<ComplexMatrix> svd(g.M());
  const double norm_inv = 1.0 / svd.singularValues().minCoeff();
  const double halfwidth = 8.0 * std::sqrt(g.hbar().hbar * std::max(1.0, norm_inv));
  return Grid1D::centered(halfwidth, count);
}

SampledFunction1D sample(const gaussians::GaussianState& g, const Grid1D& grid) {
  if (g.n() != 1) throw std::invalid_argument("sample: 1-D grids take n = 1 states");
  ComplexVector values(grid.count);
  Vector x(1);
  for (int k = 0; k < grid.count; ++k) {
    x(0) = grid.point(k);
    values(k) = g.evaluate(x);
  }
  return SampledFunction1D(grid, std::move(values));
}

SampledFunction2D sample(const gaussians::PhaseSpaceGaussian& g, const Grid2D& grid) {
  if (g.n() != 1) throw std::invalid_argument("sample: 2-D phase-space grids take n = 1 lifts");
  Eigen::MatrixXcd values(grid.x.count, grid.p.count);
  for (int i = 0; i < grid.x.count; ++i) {
    for (int j = 0; j < grid.p.count; ++j) {
      values(i, j) = g.evaluate(PhaseSpacePoint::xy(grid.x.point(i), grid.p.point(j)));
    }
  }
  return SampledFunction2D(Grid2D{grid.x, grid.p}, std::move(values));
}

SampledFunction2D sample_position2d(const gaussians::GaussianState& g, const Grid2D& grid) {
  if (g.n() != 2) throw std::invalid_argument("sample_position2d: requires an n = 2 state");
  Eigen::MatrixXcd values(grid.x.count, grid.p.count);
  Vector x(2);
  for (int i = 0; i < grid.x.count; ++i) {
    for (int j = 0; j < grid.p.count; ++j) {
      x(0) = grid.x.point(i);
      x(1) = grid.p.point(j);
      values(i, j) = g.evaluate(x);
    }
  }
  return SampledFunction2D(Grid2D{grid.x, grid.p}, std::move(values));
}

Complex inner_product_l2(const SampledFunction1D& f, const SampledFunction1D& g) {
  if (!f.grid.same_as(g.grid)) throw std::invalid_argument("inner_product_l2: grid mismatch");
  Complex acc = 0.0;
  for (Eigen::Index k = 0; k < f.values.size(); ++k) {
    acc += f.values(k) * std::conj(g.values(k));
  }
  return acc * f.grid.spacing;
}

Complex inner_product_l2(const SampledFunction2D& f, const SampledFunction2D& g) {
  if (!f.grid.x.same_as(g.grid.x) || !f.grid.p.same_as(g.grid.p)) {
    throw std::invalid_argument("inner_product_l2: grid mismatch");
  }
  Complex acc = 0.0;
  for (Eigen::Index i = 0; i < f.values.rows(); ++i) {
    for (Eigen::Index j = 0; j < f.values.cols(); ++j) {
      acc += f.values(i, j) * std::conj(g.values(i, j));
    }
  }
  return acc * f.grid.x.spacing * f.grid.p.spacing;
}

double norm_l2(const SampledFunction1D& f) {
  return std::sqrt(std::abs(inner_product_l2(f, f)));
}

double norm_l2(const SampledFunction2D& f) {
  return std::sqrt(std::abs(inner_product_l2(f, f)));
}

SampledFunction1D heisenberg_apply(const PhaseSpacePoint& z0, const SampledFunction1D& f,
                                   HBarConfig hbar, bool interpolate) {
  if (z0.dim() != 2) throw std::invalid_argument("heisenberg_apply: requires n = 1");
  const double x0 = z0.coords(0);
  const double p0 = z0.coords(1);
  const auto N = f.grid.count;

  ComplexVector shifted;
  const auto [aligned, offset] = f.grid.aligned_offset(x0);
  if (aligned) {
    shifted = ComplexVector::Zero(N);
    for (int k = 0; k < N; ++k) {
      const long src = k - offset;
      if (src >= 0 && src < N) shifted(k) = f.values(src);
    }
  } else if (interpolate) {
    shifted = fractional_shift(f.values, x0 / f.grid.spacing);
  } else {
    throw std::invalid_argument("heisenberg_apply: off-grid shift without interpolation enabled");
  }

  ComplexVector out(N);
  for (int k = 0; k < N; ++k) {
    const double x = f.grid.point(k);
    out(k) = std::polar(1.0, (p0 * x - 0.5 * p0 * x0) / hbar.hbar) * shifted(k);
  }
  return SampledFunction1D(f.grid, std::move(out));
}

SampledFunction2D phase_space_translate(const PhaseSpacePoint& z0, const SampledFunction2D& F2,
                                        HBarConfig hbar) {
  if (z0.dim() != 2) throw std::invalid_argument("phase_space_translate: requires n = 1");
  const auto [ax, sx] = F2.grid.x.aligned_offset(0.5 * z0.coords(0));
  const auto [ap, sp] = F2.grid.p.aligned_offset(0.5 * z0.coords(1));
  if (!ax || !ap) {
    throw std::invalid_argument("phase_space_translate: z0/2 is not grid-aligned");
  }
  const auto Nx = F2.grid.x.count;
  const auto Np = F2.grid.p.count;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(Nx, Np);
  for (int i = 0; i < Nx; ++i) {
    const long si = i - sx;
    if (si < 0 || si >= Nx) continue;
    const double x = F2.grid.x.point(i);
    for (int j = 0; j < Np; ++j) {
      const long sj = j - sp;
      if (sj < 0 || sj >= Np) continue;
      const double p = F2.grid.p.point(j);
      const double sigma = p * z0.coords(0) - z0.coords(1) * x;
      out(i, j) = std::polar(1.0, -sigma / hbar.hbar) * F2.values(si, sj);
    }
  }
  return SampledFunction2D(F2.grid, std::move(out));
}

SampledFunction2D wigner_numeric(const SampledFunction1D& f, const SampledFunction1D& g,
                                 HBarConfig hbar, const Grid1D& pgrid) {
  if (!f.grid.same_as(g.grid)) throw std::invalid_argument("wigner_numeric: common grid required");
  require_supported(f, "wigner_numeric");
  require_supported(g, "wigner_numeric");
  const int N = f.grid.count;
  const double h = f.grid.spacing;
  const double pref = 2.0 * h / (2.0 * std::numbers::pi * hbar.hbar);

  Eigen::MatrixXcd out(N, pgrid.count);
  // phases(d) = e^{-i p (2 h d) / hbar} for d >= 0; negative d by conjugation
  ComplexVector phases(N);
  for (int b = 0; b < pgrid.count; ++b) {
    const double p = pgrid.point(b);
    for (int d = 0; d < N; ++d) phases(d) = std::polar(1.0, -p * 2.0 * h * d / hbar.hbar);
    for (int a = 0; a < N; ++a) {
      const int dmax = std::min(a, N - 1 - a);
      Complex acc = f.values(a) * std::conj(g.values(a));
      for (int d = 1; d <= dmax; ++d) {
        acc += f.values(a + d) * std::conj(g.values(a - d)) * phases(d);
        acc += f.values(a - d) * std::conj(g.values(a + d)) * std::conj(phases(d));
      }
      out(a, b) = pref * acc;
    }
  }
  return SampledFunction2D(Grid2D{f.grid, pgrid}, std::move(out));
}

SampledFunction2D wigner_numeric(const SampledFunction1D& f, const SampledFunction1D& g,
                                 HBarConfig hbar) {
  return wigner_numeric(f, g, hbar, f.grid);
}

SampledFunction2D ambiguity_numeric(const SampledFunction1D& f, const SampledFunction1D& g,
                                    HBarConfig hbar, const Grid1D& pgrid) {
  if (!f.grid.same_as(g.grid)) throw std::invalid_argument("ambiguity_numeric: common grid required");
  if (std::abs(f.grid.center) > 1e-12) {
    throw std::invalid_argument("ambiguity_numeric: grid must be centered at 0");
  }
  if (f.grid.count % 4 != 0) {
    throw std::invalid_argument("ambiguity_numeric: grid count must be divisible by 4");
  }
  require_supported(f, "ambiguity_numeric");
  require_supported(g, "ambiguity_numeric");
  const int N = f.grid.count;
  const double h = f.grid.spacing;
  const double pref = h / (2.0 * std::numbers::pi * hbar.hbar);
  const Grid1D xgrid(0.0, 2.0 * h, N / 2);

  Eigen::MatrixXcd out(N / 2, pgrid.count);
  for (int b = 0; b < pgrid.count; ++b) {
    const double p = pgrid.point(b);
    for (int m = 0; m < N / 2; ++m) {
      const int mu = m - N / 4;  // x_m / (2h)
      Complex acc = 0.0;
      const int jlo = std::max(0, std::max(-mu, mu));
      const int jhi = std::min(N - 1, std::min(N - 1 - mu, N - 1 + mu));
      for (int j = jlo; j <= jhi; ++j) {
        const double y = f.grid.point(j);
        acc += f.values(j + mu) * std::conj(g.values(j - mu)) *
               std::polar(1.0, -p * y / hbar.hbar);
      }
      out(m, b) = pref * acc;
    }
  }
  return SampledFunction2D(Grid2D{xgrid, pgrid}, std::move(out));
}

SampledFunction2D ambiguity_numeric(const SampledFunction1D& f, const SampledFunction1D& g,
                                    HBarConfig hbar) {
  return ambiguity_numeric(f, g, hbar, f.grid);
}

Complex wigner_numeric_point(const SampledFunction2D& f, const SampledFunction2D& g,
                             HBarConfig hbar, const Vector& x, const Vector& p) {
  if (x.size() != 2 || p.size() != 2) {
    throw std::invalid_argument("wigner_numeric_point: n = 2 points required");
  }
  if (!f.grid.x.same_as(g.grid.x) || !f.grid.p.same_as(g.grid.p)) {
    throw std::invalid_argument("wigner_numeric_point: common grid required");
  }
  const auto [a1ok, a1rel] = f.grid.x.aligned_offset(x(0) - f.grid.x.center);
  const auto [a2ok, a2rel] = f.grid.p.aligned_offset(x(1) - f.grid.p.center);
  if (!a1ok || !a2ok) throw std::invalid_argument("wigner_numeric_point: x must be grid-aligned");
  const long a1 = a1rel + f.grid.x.count / 2;
  const long a2 = a2rel + f.grid.p.count / 2;
  const long N1 = f.grid.x.count;
  const long N2 = f.grid.p.count;
  const double h1 = f.grid.x.spacing;
  const double h2 = f.grid.p.spacing;

  Complex acc = 0.0;
  for (long d1 = -std::min(a1, N1 - 1 - a1); d1 <= std::min(a1, N1 - 1 - a1); ++d1) {
    for (long d2 = -std::min(a2, N2 - 1 - a2); d2 <= std::min(a2, N2 - 1 - a2); ++d2) {
      const double y1 = 2.0 * h1 * d1;
      const double y2 = 2.0 * h2 * d2;
      acc += f.values(a1 + d1, a2 + d2) * std::conj(g.values(a1 - d1, a2 - d2)) *
             std::polar(1.0, -(p(0) * y1 + p(1) * y2) / hbar.hbar);
    }
  }
  const double pref = std::pow(1.0 / (2.0 * std::numbers::pi * hbar.hbar), 2) * 4.0 * h1 * h2;
  return pref * acc;
}

SampledFunction1D hbar_fourier_numeric(const SampledFunction1D& f, HBarConfig hbar,
                                       const Grid1D& outgrid) {
  const double pmax = std::max(std::abs(outgrid.min()), std::abs(outgrid.max()));
  if (f.grid.spacing > std::numbers::pi * hbar.hbar / pmax * (1.0 + 1e-9)) {
    throw std::invalid_argument("hbar_fourier_numeric: resolution violation (spacing > pi*hbar/|p|max)");
  }
  const double pref = f.grid.spacing / std::sqrt(2.0 * std::numbers::pi * hbar.hbar);
  ComplexVector out(outgrid.count);
  for (int b = 0; b < outgrid.count; ++b) {
    const double p = outgrid.point(b);
    Complex acc = 0.0;
    for (int k = 0; k < f.grid.count; ++k) {
      acc += f.values(k) * std::polar(1.0, -p * f.grid.point(k) / hbar.hbar);
    }
    out(b) = pref * acc;
  }
  return SampledFunction1D(outgrid, std::move(out));
}

SampledFunction1D hbar_fourier_numeric(const SampledFunction1D& f, HBarConfig hbar) {
  return hbar_fourier_numeric(f, hbar, f.grid);
}

SampledFunction2D symplectic_fourier_numeric(const SampledFunction2D& F2, HBarConfig hbar) {
  const auto& gx = F2.grid.x;
  const auto& gp = F2.grid.p;
  const double extent = std::max({std::abs(gx.min()), std::abs(gx.max()), std::abs(gp.min()),
                                  std::abs(gp.max())});
  if (std::max(gx.spacing, gp.spacing) > std::numbers::pi * hbar.hbar / extent * (1.0 + 1e-9)) {
    throw std::invalid_argument("symplectic_fourier_numeric: resolution violation");
  }
  const int Nx = gx.count;
  const int Np = gp.count;
  // Out(x_a, p_b) = (2 pi hbar)^{-1} sum_{k,j} V(u_k, v_j) e^{-i (p_b u_k - x_a v_j)/hbar} du dv
  Eigen::MatrixXcd pass1(Np, Np);  // pass1(b, j) = sum_k V(k, j) e^{-i p_b u_k / hbar} * h_x
  for (int b = 0; b < Np; ++b) {
    const double p = gp.point(b);
    for (int j = 0; j < Np; ++j) {
      Complex acc = 0.0;
      for (int k = 0; k < Nx; ++k) {
        acc += F2.values(k, j) * std::polar(1.0, -p * gx.point(k) / hbar.hbar);
      }
      pass1(b, j) = acc * gx.spacing;
    }
  }
  Eigen::MatrixXcd out(Nx, Np);
  const double pref = 1.0 / (2.0 * std::numbers::pi * hbar.hbar);
  for (int a = 0; a < Nx; ++a) {
    const double x = gx.point(a);
    for (int b = 0; b < Np; ++b) {
      Complex acc = 0.0;
      for (int j = 0; j < Np; ++j) {
        acc += pass1(b, j) * std::polar(1.0, x * gp.point(j) / hbar.hbar);
      }
      out(a, b) = pref * acc * gp.spacing;
    }
  }
  return SampledFunction2D(F2.grid, std::move(out));
}

SampledFunction1D metaplectic_J_apply(const SampledFunction1D& f, HBarConfig hbar) {
  auto transformed = hbar_fourier_numeric(f, hbar);
  transformed.values *= std::polar(1.0, -std::numbers::pi / 4.0);
  return transformed;
}

SampledFunction1D metaplectic_V_apply(double P, const SampledFunction1D& f, HBarConfig hbar) {
  ComplexVector out(f.grid.count);
  for (int k = 0; k < f.grid.count; ++k) {
    const double x = f.grid.point(k);
    out(k) = std::polar(1.0, P * x * x / (2.0 * hbar.hbar)) * f.values(k);
  }
  return SampledFunction1D(f.grid, std::move(out));
}

SampledFunction1D metaplectic_M_apply(double L, const SampledFunction1D& f, bool interpolate) {
  if (L == 0.0) throw std::invalid_argument("metaplectic_M_apply: L must be nonzero");
  const int N = f.grid.count;
  const double peak = f.values.cwiseAbs().maxCoeff();

  ComplexVector spectrum;
  const auto band_limited_eval = [&](double t) {
    if (spectrum.size() == 0) {
      spectrum = ComplexVector::Zero(N);
      for (int m = 0; m < N; ++m) {
        Complex acc = 0.0;
        for (int k = 0; k < N; ++k) {
          acc += f.values(k) * std::polar(1.0, -2.0 * std::numbers::pi * double(k) * double(m) / N);
        }
        spectrum(m) = acc;
      }
    }
    Complex acc = 0.0;
    for (int m = 0; m < N; ++m) {
      const double signed_m = (m <= N / 2) ? double(m) : double(m) - double(N);
      acc += spectrum(m) * std::polar(1.0, 2.0 * std::numbers::pi * signed_m * t / N);
    }
    return acc / double(N);
  };

  ComplexVector out(N);
  for (int k = 0; k < N; ++k) {
    const double target = L * f.grid.point(k);
    const double steps = (target - f.grid.center) / f.grid.spacing + N / 2;
    const double rounded = std::round(steps);
    if (rounded < 0 || rounded >= N) {
      if (tail_magnitude(f.values) > 1e-10 * peak) {
        throw std::invalid_argument("metaplectic_M_apply: resampling out of grid range");
      }
      out(k) = 0.0;
      continue;
    }
    if (std::abs(steps - rounded) <= 1e-9) {
      out(k) = f.values(static_cast<int>(rounded));
    } else if (interpolate) {
      out(k) = band_limited_eval(steps);
    } else {
      throw std::invalid_argument("metaplectic_M_apply: off-grid resample without interpolation");
    }
  }
  out *= std::sqrt(std::abs(L));
  return SampledFunction1D(f.grid, std::move(out));
}

std::pair<Complex, Complex> poisson_check(const ComplexMatrix& M, HBarConfig hbar,
                                          const Vector& x) {
  if (M.rows() != M.cols() || M.rows() != x.size()) {
    throw std::invalid_argument("poisson_check: dimension mismatch");
  }
  const auto n = M.rows();
  Eigen::SelfAdjointEigenSolver<Matrix> es(M.real());
  if (es.eigenvalues().minCoeff() <= 0.0) {
    throw std::invalid_argument("poisson_check: Re M must be positive definite");
  }
  const double lmin = es.eigenvalues().minCoeff();
  const double h = hbar.hbar;

  // radius with Gaussian tail below 1e-14
  const auto radius_for = [&](double lam) {
    return static_cast<long>(std::ceil(std::sqrt(2.0 * h * 40.0 / lam) + x.cwiseAbs().maxCoeff() + 2.0));
  };

  const long K = radius_for(lmin);
  Complex lhs = 0.0;
  Eigen::VectorXd k = Eigen::VectorXd::Constant(n, -static_cast<double>(K));
  while (true) {
    const ComplexVector arg = (k + x).cast<Complex>();
    lhs += std::exp(-(arg.transpose() * M * arg)(0) / (2.0 * h));
    Eigen::Index i = n - 1;
    while (i >= 0) {
      k(i) += 1.0;
      if (k(i) <= static_cast<double>(K)) break;
      k(i) = -static_cast<double>(K);
      --i;
    }
    if (i < 0) break;
  }

  const auto ft = gaussians::fourier_gaussian(M, hbar);
  Eigen::SelfAdjointEigenSolver<Matrix> es2(ft.exponent.real());
  const long K2 = radius_for(es2.eigenvalues().minCoeff());
  Complex rhs = 0.0;
  Eigen::VectorXd l = Eigen::VectorXd::Constant(n, -static_cast<double>(K2));
  while (true) {
    const ComplexVector lc = l.cast<Complex>();
    const Complex ft_val = ft.amplitude * std::exp(-(lc.transpose() * ft.exponent * lc)(0) / (2.0 * h));
    rhs += ft_val * std::exp(kI * l.dot(x) / h);
    Eigen::Index i = n - 1;
    while (i >= 0) {
      l(i) += 1.0;
      if (l(i) <= static_cast<double>(K2)) break;
      l(i) = -static_cast<double>(K2);
      --i;
    }
    if (i < 0) break;
  }
  return {lhs, rhs};
}

CovarianceMeasurement numeric_covariance(const gaussians::CovarianceState& c,
                                         int points_per_axis) {
  const auto d = c.Sigma.rows();
  if (d != 2 && d != 4) {
    throw std::invalid_argument("numeric_covariance: quadrature supports 2n in {2, 4}");
  }
  if (points_per_axis <= 0) points_per_axis = (d == 2) ? 512 : 48;

  Eigen::SelfAdjointEigenSolver<Matrix> es(c.Sigma);
  const double halfwidth = 10.0 * std::sqrt(es.eigenvalues().maxCoeff() / (2.0 * std::numbers::pi));
  const double step = 2.0 * halfwidth / points_per_axis;
  const Matrix inv = c.Sigma.inverse();
  const double norm = std::sqrt(inv.determinant());

  Matrix acc = Matrix::Zero(d, d);
  Eigen::VectorXi idx = Eigen::VectorXi::Zero(d);
  Vector z(d);
  while (true) {
    for (Eigen::Index i = 0; i < d; ++i) z(i) = -halfwidth + (idx(i) + 0.5) * step;
    const double rho = norm * std::exp(-std::numbers::pi * z.dot(inv * z));
    acc += rho * z * z.transpose();
    Eigen::Index i = d - 1;
    while (i >= 0) {
      idx(i) += 1;
      if (idx(i) < points_per_axis) break;
      idx(i) = 0;
      --i;
    }
    if (i < 0) break;
  }
  acc *= std::pow(step, static_cast<double>(d));

  CovarianceMeasurement out;
  out.measured = acc;
  out.sigma = c.Sigma;
  out.ratio = acc.trace() / c.Sigma.trace();
  return out;
}

}  // namespace whframes::numerics
