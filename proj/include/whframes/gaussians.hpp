#ifndef WHFRAMES_GAUSSIANS_HPP
#define WHFRAMES_GAUSSIANS_HPP

#include <utility>

#include "whframes/symplectic.hpp"
#include "whframes/types.hpp"

namespace whframes::gaussians {

// L^2-normalized centered Gaussian (1/pi hbar)^{n/4} (det X)^{1/4} e^{-M x^2 / 2 hbar}
// with M = X + iY complex symmetric and X positive definite.
class GaussianState {
 public:
  GaussianState(ComplexMatrix M, HBarConfig hbar);

  static GaussianState standard(int n, HBarConfig hbar);

  Eigen::Index n() const { return M_.rows(); }
  const ComplexMatrix& M() const { return M_; }
  const Matrix& X() const { return X_; }
  const Matrix& Y() const { return Y_; }
  HBarConfig hbar() const { return hbar_; }
  double amplitude() const { return amplitude_; }
  bool is_standard(double tol = 1e-10) const;

  Complex evaluate(const Vector& x) const;

 private:
  ComplexMatrix M_;
  Matrix X_;
  Matrix Y_;
  HBarConfig hbar_;
  double amplitude_;
};

Complex evaluate_gaussian(const GaussianState& g, const Vector& x);

// Chirped dilate of the standard window: M = L^2 + i L P at n = 1.
struct GeneralizedGaussian1D {
  double P;
  double L;
  HBarConfig hbar;

  GeneralizedGaussian1D(double P_in, double L_in, HBarConfig hbar_in);
  GaussianState to_state() const;
};

// C e^{-F z^2 / hbar} on R^{2n}, F complex symmetric with Re F > 0.
class PhaseSpaceGaussian {
 public:
  PhaseSpaceGaussian(Complex amplitude, ComplexMatrix F, HBarConfig hbar);

  int n() const { return static_cast<int>(F_.rows() / 2); }
  Complex amplitude() const { return amplitude_; }
  const ComplexMatrix& F() const { return F_; }
  HBarConfig hbar() const { return hbar_; }

  Complex evaluate(const PhaseSpacePoint& z) const;
  // Value of T~(z0) applied to this function, evaluated at z:
  // e^{-i sigma(z, z0)/hbar} * value(z - z0/2).
  Complex translated_evaluate(const PhaseSpacePoint& z0, const PhaseSpacePoint& z) const;

 private:
  Complex amplitude_;
  ComplexMatrix F_;
  HBarConfig hbar_;
};

// sqrt(det Sigma^{-1}) e^{-pi Sigma^{-1} z^2}, an L^1-normalized
// phase-space density with covariance-type matrix Sigma.
struct CovarianceState {
  Matrix Sigma;
  HBarConfig hbar;

  CovarianceState(Matrix Sigma_in, HBarConfig hbar_in);
  Eigen::Index n() const { return Sigma.rows() / 2; }
};

PhaseSpaceGaussian cross_wigner_closed(const GaussianState& g1, const GaussianState& g2);

// Symplectic factor S with S^T S = G, where G is the (real) exponent matrix
// of the auto-Wigner transform of g.
symplectic::SymplecticMatrix wigner_gram_split(const GaussianState& g);

Complex cross_ambiguity_closed(const GaussianState& g1, const GaussianState& g2,
                               const PhaseSpacePoint& z);

struct GaussianFourier {
  Complex amplitude;
  ComplexMatrix exponent;
};

// F[e^{-M x^2/2 hbar}](p) = det(M)^{-1/2} e^{-M^{-1} p^2 / 2 hbar},
// principal determinant branch.
GaussianFourier fourier_gaussian(const ComplexMatrix& M, HBarConfig hbar);

// Lift of g to phase space: (2 pi hbar)^{n/2} W(g, standard).
PhaseSpaceGaussian u_phi_closed(const GaussianState& g);

// ((Phi_target | T~(z_lambda) Phi)) in closed form, Phi the standard
// phase-space Gaussian with the same hbar.
Complex expansion_coefficient(const PhaseSpaceGaussian& target, const PhaseSpacePoint& z_lambda);

// Same value through the quadratic form H = (J+iI)^T (F+I)^{-1} (J+iI).
Complex expansion_coefficient_hform(const PhaseSpaceGaussian& target,
                                    const PhaseSpacePoint& z_lambda);

// Returns (coefficient of the standard lift, (2 pi hbar)^n A phi(z_lambda));
// the two sides agree identically.
std::pair<Complex, Complex> corollary_f_equals_identity_check(const PhaseSpacePoint& z_lambda,
                                                              HBarConfig hbar);

double density_rho_eval(const CovarianceState& c, const PhaseSpacePoint& z);

// Smallest eigenvalue of the self-adjoint matrix Sigma + (i hbar / 2) J.
double admissibility_min_eigenvalue(const CovarianceState& c);

// Quantum admissibility: Sigma + (i hbar / 2) J >= 0 up to tol.
bool admissible_density(const CovarianceState& c, double tol);

}  // namespace whframes::gaussians

#endif  // WHFRAMES_GAUSSIANS_HPP
