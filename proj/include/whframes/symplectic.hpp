#ifndef WHFRAMES_SYMPLECTIC_HPP
#define WHFRAMES_SYMPLECTIC_HPP

#include <optional>
#include <vector>

#include "whframes/types.hpp"

namespace whframes::symplectic {

inline constexpr double kSymplecticTol = 1e-10;
inline constexpr double kConditionMax = 1e12;

// Standard symplectic form matrix [[0, I], [-I, 0]]; every module uses
// this single convention, so that sigma(z, z') = p x' - p' x.
Matrix standard_J(int n);

double symplectic_form(const PhaseSpacePoint& z, const PhaseSpacePoint& z2);

bool is_symplectic(const Matrix& S, double tol = kSymplecticTol);

// Real 2n x 2n matrix with S^T J S = J enforced at construction.
class SymplecticMatrix {
 public:
  explicit SymplecticMatrix(Matrix entries, double tol = kSymplecticTol);

  const Matrix& entries() const { return entries_; }
  Eigen::Index n() const { return entries_.rows() / 2; }

 private:
  Matrix entries_;
};

SymplecticMatrix generator_V(const Matrix& P);
SymplecticMatrix generator_M(const Matrix& L);

// Block-lower factor [[L, 0], [L^{-T} P, L^{-T}]] with L invertible and
// P symmetric; the shape every Gram splitting lands on.
struct LowerBlockSymplectic {
  Matrix L;
  Matrix P;

  LowerBlockSymplectic(Matrix L_in, Matrix P_in);
  Matrix to_matrix() const;
  Eigen::Index n() const { return L.rows(); }
};

struct PreIwasawa {
  SymplecticMatrix Q;  // orthogonal, det +1, symplectic
  LowerBlockSymplectic B;
};

// Factor S = Q * B with Q in SO(2n) ∩ Sp(n) and B block-lower as above.
// Uses B^T B = S^T S, so the orthogonal part never enters the Gram matrix.
PreIwasawa pre_iwasawa(const SymplecticMatrix& S);

struct SymplecticTag {
  double delta;  // lattice is delta^{-1} Q S Z^{2n}
  Matrix Q;
  Matrix S;
};

struct SeparableTag {
  Vector alphas;
  Vector betas;
};

class Lattice {
 public:
  static Lattice from_generator(Matrix generator);
  // delta^{-1} Q S Z^{2n} with Q orthogonal-symplectic and S symplectic.
  static Lattice symplectic(double delta, const Matrix& Q, const Matrix& S);
  // alpha Z^n x beta Z^n.
  static Lattice separable(const Vector& alphas, const Vector& betas);
  // 1-D shear parametrization delta^{-1} [[alpha, 0], [beta*gamma, beta]].
  static Lattice param1d(double alpha, double beta, double gamma, double delta = 1.0);

  const Matrix& generator() const { return generator_; }
  Eigen::Index n() const { return generator_.rows() / 2; }
  double volume() const;
  double density() const;
  Lattice adjoint() const;
  std::vector<PhaseSpacePoint> enumerate_points(double radius) const;

  const std::optional<SymplecticTag>& symplectic_tag() const { return symplectic_tag_; }
  const std::optional<SeparableTag>& separable_tag() const { return separable_tag_; }

 private:
  explicit Lattice(Matrix generator);

  Matrix generator_;
  std::optional<SymplecticTag> symplectic_tag_;
  std::optional<SeparableTag> separable_tag_;
};

double lattice_volume(const Lattice& lattice);
double lattice_density(const Lattice& lattice);
Lattice adjoint_lattice(const Lattice& lattice);
std::vector<PhaseSpacePoint> enumerate_points(const Lattice& lattice, double radius);

}  // namespace whframes::symplectic

#endif  // WHFRAMES_SYMPLECTIC_HPP
