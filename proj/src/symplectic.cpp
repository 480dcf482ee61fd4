#include "whframes/symplectic.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

namespace whframes::symplectic {

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

Matrix spd_inverse_sqrt(const Matrix& A) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(A);
  if (es.eigenvalues().minCoeff() <= 0.0) {
    throw std::invalid_argument("matrix is not positive definite");
  }
  return es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
         es.eigenvectors().transpose();
}

void check_condition(const Matrix& L) {
  Eigen::JacobiSVD<Matrix> svd(L);
  const double smin = svd.singularValues().minCoeff();
  const double smax = svd.singularValues().maxCoeff();
  if (smin <= 0.0 || smax / smin > kConditionMax) {
    throw std::invalid_argument("L is singular or too ill-conditioned");
  }
}

}  // namespace

Matrix standard_J(int n) {
  if (n < 1) throw std::invalid_argument("standard_J: n must be >= 1");
  Matrix J = Matrix::Zero(2 * n, 2 * n);
  J.topRightCorner(n, n) = Matrix::Identity(n, n);
  J.bottomLeftCorner(n, n) = -Matrix::Identity(n, n);
  return J;
}

double symplectic_form(const PhaseSpacePoint& z, const PhaseSpacePoint& z2) {
  if (z.dim() != z2.dim()) {
    throw std::invalid_argument("symplectic_form: dimension mismatch");
  }
  // sigma(z, z') = p x' - p' x = (z')^T J z
  return z.p().dot(z2.x()) - z2.p().dot(z.x());
}

bool is_symplectic(const Matrix& S, double tol) {
  if (S.rows() != S.cols()) throw std::invalid_argument("is_symplectic: non-square input");
  if (S.rows() % 2 != 0 || S.rows() < 2) return false;
  const Matrix J = standard_J(static_cast<int>(S.rows() / 2));
  return max_abs(S.transpose() * J * S - J) <= tol;
}

SymplecticMatrix::SymplecticMatrix(Matrix entries, double tol) : entries_(std::move(entries)) {
  if (!is_symplectic(entries_, tol)) {
    throw std::invalid_argument("SymplecticMatrix: S^T J S - J exceeds tolerance");
  }
}

SymplecticMatrix generator_V(const Matrix& P) {
  if (P.rows() != P.cols()) throw std::invalid_argument("generator_V: P must be square");
  if (max_abs(P - P.transpose()) > 1e-12 * std::max(1.0, max_abs(P))) {
    throw std::invalid_argument("generator_V: P must be symmetric");
  }
  const auto n = P.rows();
  Matrix V = Matrix::Identity(2 * n, 2 * n);
  V.bottomLeftCorner(n, n) = 0.5 * (P + P.transpose());
  return SymplecticMatrix(V);
}

SymplecticMatrix generator_M(const Matrix& L) {
  if (L.rows() != L.cols()) throw std::invalid_argument("generator_M: L must be square");
  check_condition(L);
  const auto n = L.rows();
  Matrix M = Matrix::Zero(2 * n, 2 * n);
  M.topLeftCorner(n, n) = L.inverse();
  M.bottomRightCorner(n, n) = L.transpose();
  return SymplecticMatrix(M);
}

LowerBlockSymplectic::LowerBlockSymplectic(Matrix L_in, Matrix P_in)
    : L(std::move(L_in)), P(std::move(P_in)) {
  if (L.rows() != L.cols() || P.rows() != P.cols() || L.rows() != P.rows()) {
    throw std::invalid_argument("LowerBlockSymplectic: block size mismatch");
  }
  check_condition(L);
  P = 0.5 * (P + P.transpose()).eval();
}

Matrix LowerBlockSymplectic::to_matrix() const {
  const auto nn = n();
  const Matrix Linv_t = L.inverse().transpose();
  Matrix B = Matrix::Zero(2 * nn, 2 * nn);
  B.topLeftCorner(nn, nn) = L;
  B.bottomLeftCorner(nn, nn) = Linv_t * P;
  B.bottomRightCorner(nn, nn) = Linv_t;
  return B;
}

PreIwasawa pre_iwasawa(const SymplecticMatrix& S) {
  const auto n = S.n();
  const Matrix& M = S.entries();
  const Matrix G = M.transpose() * M;
  const Matrix G21 = G.block(n, 0, n, n);
  const Matrix G22 = G.block(n, n, n, n);

  Matrix L;
  if (n == 1) {
    L = Matrix::Constant(1, 1, 1.0 / std::sqrt(G22(0, 0)));
  } else {
    L = spd_inverse_sqrt(G22);
  }
  const Matrix P = G22.llt().solve(G21);
  LowerBlockSymplectic B(L, 0.5 * (P + P.transpose()));

  const Matrix Bm = B.to_matrix();
  Matrix Q = M * Bm.inverse();
  // Polish away the accumulated non-orthogonality.
  Eigen::JacobiSVD<Matrix> svd(Q, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Q = svd.matrixU() * svd.matrixV().transpose();

  const double scale = std::max(1.0, max_abs(M));
  if (max_abs(Q * Bm - M) > 1e-9 * scale) {
    throw std::runtime_error("pre_iwasawa: reconstruction residual too large");
  }
  return PreIwasawa{SymplecticMatrix(Q), std::move(B)};
}

Lattice::Lattice(Matrix generator) : generator_(std::move(generator)) {
  if (generator_.rows() != generator_.cols() || generator_.rows() % 2 != 0 ||
      generator_.rows() < 2) {
    throw std::invalid_argument("Lattice: generator must be square of even size >= 2");
  }
  if (std::abs(generator_.determinant()) <= 0.0) {
    throw std::invalid_argument("Lattice: generator must be invertible");
  }
}

Lattice Lattice::from_generator(Matrix generator) { return Lattice(std::move(generator)); }

Lattice Lattice::symplectic(double delta, const Matrix& Q, const Matrix& S) {
  if (!(delta > 0.0)) throw std::invalid_argument("Lattice: delta must be positive");
  if (!is_symplectic(S)) throw std::invalid_argument("Lattice: S is not symplectic");
  if (!is_symplectic(Q) || max_abs(Q.transpose() * Q - Matrix::Identity(Q.rows(), Q.cols())) >
                               kSymplecticTol) {
    throw std::invalid_argument("Lattice: Q must be orthogonal and symplectic");
  }
  Lattice lattice((Q * S) / delta);
  lattice.symplectic_tag_ = SymplecticTag{delta, Q, S};
  return lattice;
}

Lattice Lattice::separable(const Vector& alphas, const Vector& betas) {
  if (alphas.size() != betas.size() || alphas.size() < 1) {
    throw std::invalid_argument("Lattice: alpha/beta size mismatch");
  }
  if (alphas.minCoeff() <= 0.0 || betas.minCoeff() <= 0.0) {
    throw std::invalid_argument("Lattice: alpha_j, beta_j must be positive");
  }
  const auto n = alphas.size();
  Matrix gen = Matrix::Zero(2 * n, 2 * n);
  gen.topLeftCorner(n, n) = alphas.asDiagonal();
  gen.bottomRightCorner(n, n) = betas.asDiagonal();
  Lattice lattice(gen);
  lattice.separable_tag_ = SeparableTag{alphas, betas};
  // A separable lattice is symplectic exactly when all alpha_j beta_j agree.
  const Vector prods = alphas.cwiseProduct(betas);
  if ((prods.array() - prods(0)).abs().maxCoeff() <= 1e-12 * prods(0)) {
    const double c = std::sqrt(prods(0));
    lattice.symplectic_tag_ = SymplecticTag{1.0 / c, Matrix::Identity(2 * n, 2 * n), gen / c};
  }
  return lattice;
}

Lattice Lattice::param1d(double alpha, double beta, double gamma, double delta) {
  if (!(alpha > 0.0) || !(beta > 0.0) || !(delta > 0.0)) {
    throw std::invalid_argument("Lattice: alpha, beta, delta must be positive");
  }
  Matrix gen(2, 2);
  gen << alpha, 0.0, beta * gamma, beta;
  const double c = std::sqrt(alpha * beta);
  Lattice lattice(gen / delta);
  lattice.symplectic_tag_ = SymplecticTag{delta / c, Matrix::Identity(2, 2), gen / c};
  if (gamma == 0.0) {
    lattice.separable_tag_ =
        SeparableTag{Vector::Constant(1, alpha / delta), Vector::Constant(1, beta / delta)};
  }
  return lattice;
}

double Lattice::volume() const { return std::abs(generator_.determinant()); }

double Lattice::density() const { return 1.0 / volume(); }

Lattice Lattice::adjoint() const {
  const Matrix J = standard_J(static_cast<int>(n()));
  Lattice adj(J * generator_.inverse().transpose());
  if (symplectic_tag_) {
    adj.symplectic_tag_ =
        SymplecticTag{1.0 / symplectic_tag_->delta, symplectic_tag_->Q, symplectic_tag_->S};
  }
  return adj;
}

std::vector<PhaseSpacePoint> Lattice::enumerate_points(double radius) const {
  if (!(radius > 0.0)) throw std::invalid_argument("enumerate_points: radius must be positive");
  const auto d = generator_.rows();
  Eigen::JacobiSVD<Matrix> svd(generator_);
  const double smin = svd.singularValues().minCoeff();
  const auto bound = static_cast<long>(std::floor(radius / smin + 1e-9));

  std::vector<PhaseSpacePoint> points;
  Eigen::VectorXd k = Eigen::VectorXd::Constant(d, -static_cast<double>(bound));
  const double r2 = radius * radius * (1.0 + 1e-12) + 1e-12;
  while (true) {
    const Vector z = generator_ * k;
    if (z.squaredNorm() <= r2) points.emplace_back(z);
    // lexicographic odometer over [-bound, bound]^d
    Eigen::Index i = d - 1;
    while (i >= 0) {
      k(i) += 1.0;
      if (k(i) <= static_cast<double>(bound)) break;
      k(i) = -static_cast<double>(bound);
      --i;
    }
    if (i < 0) break;
  }
  return points;
}

double lattice_volume(const Lattice& lattice) { return lattice.volume(); }
double lattice_density(const Lattice& lattice) { return lattice.density(); }
Lattice adjoint_lattice(const Lattice& lattice) { return lattice.adjoint(); }
std::vector<PhaseSpacePoint> enumerate_points(const Lattice& lattice, double radius) {
  return lattice.enumerate_points(radius);
}

}  // namespace whframes::symplectic
