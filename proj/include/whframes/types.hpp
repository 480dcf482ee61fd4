#ifndef WHFRAMES_TYPES_HPP
#define WHFRAMES_TYPES_HPP

#include <Eigen/Dense>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace whframes {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Complex = std::complex<double>;

// Thrown when an iterative routine fails to meet its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown when a frame-set query has no supported decision procedure.
class UndecidableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Planck-type scale; hbar = 1/(2*pi) recovers the signal-processing
// normalization where the standard Gaussian is 2^{1/4} exp(-pi x^2).
struct HBarConfig {
  double hbar;

  explicit HBarConfig(double value) : hbar(value) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw std::invalid_argument("HBarConfig: hbar must be positive and finite");
    }
  }

  static HBarConfig classical() { return HBarConfig(1.0 / (2.0 * std::numbers::pi)); }

  bool operator==(const HBarConfig& other) const { return hbar == other.hbar; }
};

// Point z = (x, p) in R^{2n}.
struct PhaseSpacePoint {
  Vector coords;

  explicit PhaseSpacePoint(Vector c) : coords(std::move(c)) {
    if (coords.size() < 2 || coords.size() % 2 != 0) {
      throw std::invalid_argument("PhaseSpacePoint: length must be even and >= 2");
    }
  }

  static PhaseSpacePoint from_xp(const Vector& x, const Vector& p) {
    if (x.size() != p.size()) {
      throw std::invalid_argument("PhaseSpacePoint: x/p size mismatch");
    }
    Vector c(2 * x.size());
    c << x, p;
    return PhaseSpacePoint(c);
  }

  static PhaseSpacePoint xy(double x, double p) {
    Vector c(2);
    c << x, p;
    return PhaseSpacePoint(c);
  }

  Eigen::Index dim() const { return coords.size(); }
  Eigen::Index n() const { return coords.size() / 2; }
  auto x() const { return coords.head(n()); }
  auto p() const { return coords.tail(n()); }
  double squared_norm() const { return coords.squaredNorm(); }
};

}  // namespace whframes

#endif  // WHFRAMES_TYPES_HPP
