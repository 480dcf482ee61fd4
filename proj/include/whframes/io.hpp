#ifndef WHFRAMES_IO_HPP
#define WHFRAMES_IO_HPP

#include <string>
#include <vector>

#include "whframes/frames.hpp"
#include "whframes/gaussians.hpp"
#include "whframes/numerics.hpp"
#include "whframes/symplectic.hpp"

namespace whframes::io {

// Writes via a temporary file in the same directory, then renames.
void atomic_write(const std::string& path, const std::string& content);

// Plain-text lattice: "n=<int>" then 2n rows of 2n space-separated entries.
std::string lattice_to_text(const symplectic::Lattice& lattice);
symplectic::Lattice lattice_from_text(const std::string& text);

// Plain-text Gaussian: "n=<int> hbar=<decimal>" then Re M and Im M blocks.
std::string gaussian_to_text(const gaussians::GaussianState& g);
gaussians::GaussianState gaussian_from_text(const std::string& text);

// CSV with header "x,re,im".
std::string sampled1d_to_csv(const numerics::SampledFunction1D& f);
numerics::SampledFunction1D sampled1d_from_csv(const std::string& text);

// CSV with header "x,p,re,im".
std::string sampled2d_to_csv(const numerics::SampledFunction2D& f);
numerics::SampledFunction2D sampled2d_from_csv(const std::string& text);

// CSV with header "kx,kp,zx,zp,re_c,im_c"; k is the integer coordinate of
// each point in the lattice basis.
std::string coefficients_to_csv(const std::vector<frames::ExpansionCoefficient>& coefficients,
                                const symplectic::Lattice& lattice);

struct SweepRow {
  double delta;
  double janssen_error;
  double predicted_rate;
  double a_est;
  double b_est;
  double sup_err;
  double l2_err;
};

// CSV with header "delta,janssen_error,predicted_rate,a_est,b_est,sup_err,l2_err".
std::string sweep_to_csv(const std::vector<SweepRow>& rows);

std::string read_file(const std::string& path);

}  // namespace whframes::io

#endif  // WHFRAMES_IO_HPP
