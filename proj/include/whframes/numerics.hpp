#ifndef WHFRAMES_NUMERICS_HPP
#define WHFRAMES_NUMERICS_HPP

#include <utility>

#include "whframes/gaussians.hpp"
#include "whframes/types.hpp"

namespace whframes::numerics {

// Uniform grid with nodes center + (k - count/2) * spacing, k = 0..count-1.
struct Grid1D {
  double center;
  double spacing;
  int count;

  Grid1D(double center_in, double spacing_in, int count_in);
  static Grid1D centered(double halfwidth, int count);

  double point(int k) const { return center + (k - count / 2) * spacing; }
  double min() const { return point(0); }
  double max() const { return point(count - 1); }
  bool same_as(const Grid1D& other) const;
  // Offset of x in units of spacing if grid-aligned, otherwise empty.
  std::pair<bool, long> aligned_offset(double x, double tol = 1e-9) const;
};

struct SampledFunction1D {
  Grid1D grid;
  ComplexVector values;

  SampledFunction1D(Grid1D grid_in, ComplexVector values_in);
};

struct Grid2D {
  Grid1D x;
  Grid1D p;
};

struct SampledFunction2D {
  Grid2D grid;
  Eigen::MatrixXcd values;  // values(i, j) = f(x_i, p_j)

  SampledFunction2D(Grid2D grid_in, Eigen::MatrixXcd values_in);
};

// Grid covering the default oracle window for a Gaussian state:
// halfwidth 8 sqrt(hbar * max(1, ||M^{-1}||)).
Grid1D default_grid(const gaussians::GaussianState& g, int count = 1024);

SampledFunction1D sample(const gaussians::GaussianState& g, const Grid1D& grid);
SampledFunction2D sample(const gaussians::PhaseSpaceGaussian& g, const Grid2D& grid);
// n = 2 position-space Gaussian on a tensor grid.
SampledFunction2D sample_position2d(const gaussians::GaussianState& g, const Grid2D& grid);

Complex inner_product_l2(const SampledFunction1D& f, const SampledFunction1D& g);
Complex inner_product_l2(const SampledFunction2D& f, const SampledFunction2D& g);
double norm_l2(const SampledFunction1D& f);
double norm_l2(const SampledFunction2D& f);

// T^(z0) f: shift by x0 (grid-aligned, or band-limited when interpolate)
// and modulate, per e^{(i/hbar)(p0 x - p0 x0 / 2)} f(x - x0).
SampledFunction1D heisenberg_apply(const PhaseSpacePoint& z0, const SampledFunction1D& f,
                                   HBarConfig hbar, bool interpolate = false);

// T~(z0) F: e^{-(i/hbar) sigma(z, z0)} F(z - z0/2); z0/2 must be grid-aligned.
SampledFunction2D phase_space_translate(const PhaseSpacePoint& z0, const SampledFunction2D& F2,
                                        HBarConfig hbar);

// Midpoint quadrature of the cross-Wigner integral on f.grid x pgrid.
SampledFunction2D wigner_numeric(const SampledFunction1D& f, const SampledFunction1D& g,
                                 HBarConfig hbar, const Grid1D& pgrid);
SampledFunction2D wigner_numeric(const SampledFunction1D& f, const SampledFunction1D& g,
                                 HBarConfig hbar);

// Cross-ambiguity quadrature; the output x-grid has twice the input spacing.
SampledFunction2D ambiguity_numeric(const SampledFunction1D& f, const SampledFunction1D& g,
                                    HBarConfig hbar, const Grid1D& pgrid);
SampledFunction2D ambiguity_numeric(const SampledFunction1D& f, const SampledFunction1D& g,
                                    HBarConfig hbar);

// Pointwise n = 2 cross-Wigner quadrature; x must lie on the sample grids.
Complex wigner_numeric_point(const SampledFunction2D& f, const SampledFunction2D& g,
                             HBarConfig hbar, const Vector& x, const Vector& p);

SampledFunction1D hbar_fourier_numeric(const SampledFunction1D& f, HBarConfig hbar);
SampledFunction1D hbar_fourier_numeric(const SampledFunction1D& f, HBarConfig hbar,
                                       const Grid1D& outgrid);

// F_sigma Psi(z) = F Psi(Jz), evaluated back on the input grid.
SampledFunction2D symplectic_fourier_numeric(const SampledFunction2D& F2, HBarConfig hbar);

SampledFunction1D metaplectic_J_apply(const SampledFunction1D& f, HBarConfig hbar);
SampledFunction1D metaplectic_V_apply(double P, const SampledFunction1D& f, HBarConfig hbar);
SampledFunction1D metaplectic_M_apply(double L, const SampledFunction1D& f,
                                      bool interpolate = false);

// Both sides of the Gaussian Poisson summation identity
// sum_k e^{-M(k+x)^2/2hbar} = sum_l F[e^{-M .^2/2hbar}](l) e^{i l x / hbar},
// each truncated to additive tail below 1e-14. The identity is exact at
// hbar = 1/(2 pi), where the integer lattice is self-dual for this Fourier
// normalization.
std::pair<Complex, Complex> poisson_check(const ComplexMatrix& M, HBarConfig hbar,
                                          const Vector& x);

struct CovarianceMeasurement {
  Matrix measured;       // quadrature of the second moment integral
  Matrix sigma;          // the state's Sigma, for side-by-side reporting
  double ratio;          // trace(measured) / trace(sigma)
};

CovarianceMeasurement numeric_covariance(const gaussians::CovarianceState& c,
                                         int points_per_axis = 0);

}  // namespace whframes::numerics

#endif  // WHFRAMES_NUMERICS_HPP
