#ifndef WHFRAMES_FRAMES_HPP
#define WHFRAMES_FRAMES_HPP

#include <optional>
#include <vector>

#include "whframes/gaussians.hpp"
#include "whframes/numerics.hpp"
#include "whframes/symplectic.hpp"

namespace whframes::frames {

struct FrameSpec {
  gaussians::GaussianState window;
  symplectic::Lattice lattice;
  HBarConfig hbar;

  FrameSpec(gaussians::GaussianState window_in, symplectic::Lattice lattice_in);
};

struct FrameDiagnostics {
  double janssen_error = 0.0;
  double predicted_rate = 0.0;
  double truncation_radius = 0.0;
  std::optional<double> numeric_lower_bound;
  std::optional<double> numeric_upper_bound;

  // A bound >= 1 certifies nothing; callers must surface this.
  bool vacuous() const { return !(janssen_error < 1.0); }
};

// Frame membership for Gaussian windows. Decidable cases: separable
// lattices (strict alpha_j beta_j < 2 pi hbar per axis), every n = 1
// lattice (density above 1/(2 pi hbar)), and symplectic-tagged lattices
// with the standard window. Anything else throws UndecidableError.
bool gaussian_frame_set_contains(const FrameSpec& spec);

// Sum over nonzero integer vectors of e^{-(delta^2/4 hbar) G k^2} with
// G = S^T S from the lattice tag; upper-bounds ||Id - vol * A_G||.
FrameDiagnostics janssen_error_sum(const FrameSpec& spec, double tail_tol);

double predicted_rate(const symplectic::LowerBlockSymplectic& B, double delta, HBarConfig hbar);

// min over nonzero integer vectors of k^T G k; the decay exponent of the
// Janssen sum is -(1/4 hbar) times this value.
double minimal_gram_value(const Matrix& G);

double theta_sum(double r, double alpha, double beta, double gamma);
double theta_sum_rhs(double r, double alpha, double beta);
bool theta_inequality_check(double r, double alpha, double beta, double gamma);

struct ScaledWindow {
  gaussians::GaussianState state;
  double scale;                    // vol(Lambda)
  double certified_relative_error; // janssen / (1 - janssen)
  FrameDiagnostics diagnostics;
};

ScaledWindow approximate_dual_window(const FrameSpec& spec);

struct ExpansionCoefficient {
  PhaseSpacePoint point;
  Complex value;
};

struct ExpansionReport {
  double sup_error = 0.0;
  double l2_error = 0.0;
  double truncation_radius = 0.0;
  long lattice_points = 0;
  bool frame_certified = true;
};

struct ExpansionResult {
  std::vector<ExpansionCoefficient> coefficients;
  numerics::SampledFunction1D reconstruction;
  ExpansionReport report;
};

// Approximate expansion vol(Lambda) sum_z (psi | T^(z) phi) T^(z) phi,
// with closed-form coefficients for Gaussian targets. radius <= 0 selects
// a radius covering coefficients down to 1e-12 of the peak.
ExpansionResult approx_expansion(const gaussians::GaussianState& target, const FrameSpec& spec,
                                 double radius, const numerics::Grid1D& grid,
                                 bool allow_non_frame = false);
ExpansionResult approx_expansion(const numerics::SampledFunction1D& target, const FrameSpec& spec,
                                 double radius, bool allow_non_frame = false);

// One application of the frame operator to grid samples, with the window
// atoms evaluated analytically.
numerics::SampledFunction1D frame_apply(const FrameSpec& spec, const numerics::SampledFunction1D& f,
                                        double radius);

struct FrameBounds {
  double a_est = 0.0;
  double b_est = 0.0;
  int iterations = 0;
  // max(|1 - vol a|, |1 - vol b|): the measured spectral distance of
  // vol(Lambda) A_G from the identity.
  double spectral_error(double volume) const;
};

struct FrameBoundsOptions {
  numerics::Grid1D grid = numerics::Grid1D::centered(8.0, 256);
  double tol = 1e-6;
  int max_iterations = 400;
  // optional sampled window override (non-Gaussian experiments)
  const numerics::SampledFunction1D* sampled_window = nullptr;
};

// Extremal eigenvalue estimates of the truncated frame operator on grid
// functions, band-limited so every probed state is covered by the lattice
// truncation. Lanczos iteration; throws ConvergenceError past max_iterations.
FrameBounds frame_bounds_numeric(const FrameSpec& spec, const FrameBoundsOptions& options = {});

}  // namespace whframes::frames

#endif  // WHFRAMES_FRAMES_HPP
