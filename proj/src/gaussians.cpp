#include "whframes/gaussians.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace whframes::gaussians {

namespace {

using symplectic::standard_J;

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

ComplexMatrix symmetrized(const ComplexMatrix& M, const char* who) {
  if (M.rows() != M.cols()) throw std::invalid_argument(std::string(who) + ": non-square matrix");
  const double scale = std::max(1.0, max_abs(M));
  if (max_abs(M - M.transpose()) > 1e-12 * scale) {
    throw std::invalid_argument(std::string(who) + ": matrix not symmetric within 1e-12");
  }
  return 0.5 * (M + M.transpose());
}

// det(A)^p for complex symmetric A with eigenvalues off the branch cut,
// taken eigenvalue-wise with the principal logarithm. For Re A > 0 this is
// the branch produced by Gaussian integrals.
Complex det_pow_principal(const ComplexMatrix& A, double p) {
  Eigen::ComplexEigenSolver<ComplexMatrix> es(A);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("det_pow_principal: eigendecomposition failed");
  }
  Complex log_sum = 0.0;
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    const Complex lambda = es.eigenvalues()(i);
    if (std::abs(lambda) < 1e-300) {
      throw std::invalid_argument("det_pow_principal: numerically singular matrix");
    }
    log_sum += std::log(lambda);
  }
  return std::exp(p * log_sum);
}

void require_re_pd(const ComplexMatrix& M, const char* who, double floor = 0.0) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(M.real());
  const double min_eig = es.eigenvalues().minCoeff();
  if (!(min_eig > floor)) {
    throw std::invalid_argument(std::string(who) + ": real part not positive definite (min eigenvalue " +
                                std::to_string(min_eig) + ")");
  }
}

Matrix spd_sqrt(const Matrix& A) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(A);
  return es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() *
         es.eigenvectors().transpose();
}

}  // namespace

GaussianState::GaussianState(ComplexMatrix M, HBarConfig hbar)
    : M_(symmetrized(M, "GaussianState")), hbar_(hbar) {
  X_ = M_.real();
  Y_ = M_.imag();
  require_re_pd(M_, "GaussianState", 1e-10);
  const auto nn = static_cast<double>(n());
  amplitude_ = std::pow(1.0 / (std::numbers::pi * hbar_.hbar), nn / 4.0) *
               std::pow(X_.determinant(), 0.25);
}

GaussianState GaussianState::standard(int n, HBarConfig hbar) {
  return GaussianState(ComplexMatrix::Identity(n, n), hbar);
}

bool GaussianState::is_standard(double tol) const {
  return max_abs(M_ - ComplexMatrix::Identity(n(), n())) <= tol;
}

Complex GaussianState::evaluate(const Vector& x) const {
  if (x.size() != n()) throw std::invalid_argument("GaussianState::evaluate: dimension mismatch");
  const Complex quad = x.cast<Complex>().dot(M_ * x.cast<Complex>());
  return amplitude_ * std::exp(-quad / (2.0 * hbar_.hbar));
}

Complex evaluate_gaussian(const GaussianState& g, const Vector& x) { return g.evaluate(x); }

GeneralizedGaussian1D::GeneralizedGaussian1D(double P_in, double L_in, HBarConfig hbar_in)
    : P(P_in), L(L_in), hbar(hbar_in) {
  if (!(L > 0.0)) throw std::invalid_argument("GeneralizedGaussian1D: L must be positive");
}

GaussianState GeneralizedGaussian1D::to_state() const {
  ComplexMatrix M(1, 1);
  M(0, 0) = Complex(L * L, L * P);
  return GaussianState(M, hbar);
}

PhaseSpaceGaussian::PhaseSpaceGaussian(Complex amplitude, ComplexMatrix F, HBarConfig hbar)
    : amplitude_(amplitude), F_(symmetrized(F, "PhaseSpaceGaussian")), hbar_(hbar) {
  if (F_.rows() % 2 != 0 || F_.rows() < 2) {
    throw std::invalid_argument("PhaseSpaceGaussian: F must be 2n x 2n");
  }
  require_re_pd(F_, "PhaseSpaceGaussian");
}

Complex PhaseSpaceGaussian::evaluate(const PhaseSpacePoint& z) const {
  if (z.dim() != F_.rows()) {
    throw std::invalid_argument("PhaseSpaceGaussian::evaluate: dimension mismatch");
  }
  const ComplexVector zc = z.coords.cast<Complex>();
  return amplitude_ * std::exp(-zc.dot(F_ * zc) / hbar_.hbar);
}

Complex PhaseSpaceGaussian::translated_evaluate(const PhaseSpacePoint& z0,
                                                const PhaseSpacePoint& z) const {
  const double sigma = symplectic::symplectic_form(z, z0);
  const PhaseSpacePoint shifted(z.coords - 0.5 * z0.coords);
  return std::exp(Complex(0.0, -sigma / hbar_.hbar)) * evaluate(shifted);
}

CovarianceState::CovarianceState(Matrix Sigma_in, HBarConfig hbar_in)
    : Sigma(std::move(Sigma_in)), hbar(hbar_in) {
  if (Sigma.rows() != Sigma.cols() || Sigma.rows() % 2 != 0) {
    throw std::invalid_argument("CovarianceState: Sigma must be 2n x 2n");
  }
  if ((Sigma - Sigma.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, Sigma.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("CovarianceState: Sigma must be symmetric");
  }
  Sigma = 0.5 * (Sigma + Sigma.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> es(Sigma);
  if (es.eigenvalues().minCoeff() <= 0.0) {
    throw std::invalid_argument("CovarianceState: Sigma must be positive definite");
  }
}

PhaseSpaceGaussian cross_wigner_closed(const GaussianState& g1, const GaussianState& g2) {
  if (g1.n() != g2.n()) throw std::invalid_argument("cross_wigner_closed: dimension mismatch");
  if (!(g1.hbar() == g2.hbar())) throw std::invalid_argument("cross_wigner_closed: hbar mismatch");
  const auto n = g1.n();
  const double hbar = g1.hbar().hbar;

  const ComplexMatrix M = g1.M();
  const ComplexMatrix Mc = g2.M().conjugate();
  const ComplexMatrix sum = M + Mc;
  Eigen::PartialPivLU<ComplexMatrix> lu(sum);
  if (std::abs(lu.determinant()) < 1e-14) {
    throw std::invalid_argument("cross_wigner_closed: M + conj(M') numerically singular");
  }
  const ComplexMatrix sum_inv = lu.inverse();
  const ComplexMatrix diff = M - Mc;
  const Complex i(0.0, 1.0);

  ComplexMatrix F(2 * n, 2 * n);
  F.topLeftCorner(n, n) = 2.0 * Mc * sum_inv * M;
  F.topRightCorner(n, n) = -i * diff * sum_inv;
  F.bottomLeftCorner(n, n) = -i * sum_inv * diff;
  F.bottomRightCorner(n, n) = 2.0 * sum_inv;
  F = (0.5 * (F + F.transpose())).eval();

  const Complex C = std::pow(g1.X().determinant() * g2.X().determinant(), 0.25) *
                    det_pow_principal(0.5 * sum, -0.5);
  const double pref = std::pow(1.0 / (std::numbers::pi * hbar), static_cast<double>(n));
  return PhaseSpaceGaussian(pref * C, F, g1.hbar());
}

symplectic::SymplecticMatrix wigner_gram_split(const GaussianState& g) {
  const auto n = g.n();
  const Matrix Xs = spd_sqrt(g.X());
  const Matrix Xs_inv = Xs.inverse();
  Matrix S = Matrix::Zero(2 * n, 2 * n);
  S.topLeftCorner(n, n) = Xs;
  S.bottomLeftCorner(n, n) = Xs_inv * g.Y();
  S.bottomRightCorner(n, n) = Xs_inv;
  return symplectic::SymplecticMatrix(S);
}

Complex cross_ambiguity_closed(const GaussianState& g1, const GaussianState& g2,
                               const PhaseSpacePoint& z) {
  const auto psg = cross_wigner_closed(g1, g2);
  const PhaseSpacePoint half(0.5 * z.coords);
  return std::pow(2.0, -static_cast<double>(g1.n())) * psg.evaluate(half);
}

GaussianFourier fourier_gaussian(const ComplexMatrix& M, HBarConfig hbar) {
  const ComplexMatrix Ms = symmetrized(M, "fourier_gaussian");
  require_re_pd(Ms, "fourier_gaussian");
  (void)hbar;  // the hbar-Fourier fixed point is scale-free in these units
  GaussianFourier out;
  out.amplitude = det_pow_principal(Ms, -0.5);
  ComplexMatrix inv = Ms.inverse();
  out.exponent = 0.5 * (inv + inv.transpose());
  return out;
}

PhaseSpaceGaussian u_phi_closed(const GaussianState& g) {
  const auto w = cross_wigner_closed(g, GaussianState::standard(static_cast<int>(g.n()), g.hbar()));
  const double lift = std::pow(2.0 * std::numbers::pi * g.hbar().hbar, g.n() / 2.0);
  return PhaseSpaceGaussian(lift * w.amplitude(), w.F(), w.hbar());
}

namespace {

struct CoefficientParts {
  Complex prefactor;   // amplitude_ratio * 2^n * det(F+I)^{-1/2}
  ComplexMatrix FpI;   // F + I
  double hbar;
  int n;
};

CoefficientParts coefficient_parts(const PhaseSpaceGaussian& target) {
  const int n = target.n();
  const double hbar = target.hbar().hbar;
  CoefficientParts parts;
  parts.FpI = target.F() + ComplexMatrix::Identity(2 * n, 2 * n);
  require_re_pd(parts.FpI, "expansion_coefficient (F + I)");
  const Complex unit_amplitude = std::pow(2.0 / (std::numbers::pi * hbar), n / 2.0);
  const Complex ratio = target.amplitude() / unit_amplitude;
  parts.prefactor = ratio * std::pow(2.0, n) * det_pow_principal(parts.FpI, -0.5);
  parts.hbar = hbar;
  parts.n = n;
  return parts;
}

ComplexMatrix j_plus_i(int n) {
  return standard_J(n).cast<Complex>() + Complex(0.0, 1.0) * ComplexMatrix::Identity(2 * n, 2 * n);
}

}  // namespace

Complex expansion_coefficient(const PhaseSpaceGaussian& target, const PhaseSpacePoint& z_lambda) {
  if (z_lambda.dim() != 2 * target.n()) {
    throw std::invalid_argument("expansion_coefficient: dimension mismatch");
  }
  const auto parts = coefficient_parts(target);
  const ComplexVector w = j_plus_i(parts.n) * z_lambda.coords.cast<Complex>();
  const Complex quad = (w.transpose() * parts.FpI.partialPivLu().solve(w))(0);
  const double z2 = z_lambda.squared_norm();
  return parts.prefactor * std::exp(-(z2 + quad) / (4.0 * parts.hbar));
}

Complex expansion_coefficient_hform(const PhaseSpaceGaussian& target,
                                    const PhaseSpacePoint& z_lambda) {
  if (z_lambda.dim() != 2 * target.n()) {
    throw std::invalid_argument("expansion_coefficient_hform: dimension mismatch");
  }
  const auto parts = coefficient_parts(target);
  const ComplexMatrix Ji = j_plus_i(parts.n);
  const ComplexMatrix H = Ji.transpose() * parts.FpI.partialPivLu().solve(Ji);
  const ComplexMatrix IpH = ComplexMatrix::Identity(2 * parts.n, 2 * parts.n) + H;
  const ComplexVector zc = z_lambda.coords.cast<Complex>();
  const Complex quad = (zc.transpose() * IpH * zc)(0);
  return parts.prefactor * std::exp(-quad / (4.0 * parts.hbar));
}

std::pair<Complex, Complex> corollary_f_equals_identity_check(const PhaseSpacePoint& z_lambda,
                                                              HBarConfig hbar) {
  const int n = static_cast<int>(z_lambda.n());
  const auto standard = GaussianState::standard(n, hbar);
  const Complex lhs = expansion_coefficient(u_phi_closed(standard), z_lambda);
  const Complex rhs = std::pow(2.0 * std::numbers::pi * hbar.hbar, n) *
                      cross_ambiguity_closed(standard, standard, z_lambda);
  return {lhs, rhs};
}

double density_rho_eval(const CovarianceState& c, const PhaseSpacePoint& z) {
  if (z.dim() != c.Sigma.rows()) {
    throw std::invalid_argument("density_rho_eval: dimension mismatch");
  }
  const Matrix inv = c.Sigma.inverse();
  const double quad = z.coords.dot(inv * z.coords);
  return std::sqrt(inv.determinant()) * std::exp(-std::numbers::pi * quad);
}

double admissibility_min_eigenvalue(const CovarianceState& c) {
  const auto n = c.n();
  const Complex i(0.0, 1.0);
  const ComplexMatrix A =
      c.Sigma.cast<Complex>() + (i * c.hbar.hbar / 2.0) * standard_J(static_cast<int>(n)).cast<Complex>();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(A);
  return es.eigenvalues().minCoeff();
}

bool admissible_density(const CovarianceState& c, double tol) {
  return admissibility_min_eigenvalue(c) >= -tol;
}

}  // namespace whframes::gaussians
