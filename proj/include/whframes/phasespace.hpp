#ifndef WHFRAMES_PHASESPACE_HPP
#define WHFRAMES_PHASESPACE_HPP

#include <vector>

#include "whframes/frames.hpp"
#include "whframes/gaussians.hpp"
#include "whframes/numerics.hpp"

namespace whframes::phasespace {

// Frame data for the lifted system on H_phi; the window must be the
// standard Gaussian.
struct PhaseSpaceFrameSpec {
  frames::FrameSpec base;

  explicit PhaseSpaceFrameSpec(frames::FrameSpec base_in);
};

// A 2-D grid whose momentum axis is the DFT-conjugate of `space`; on such
// grids the discrete lift has an exact adjoint.
numerics::Grid2D conjugate_phase_space_grid(const numerics::Grid1D& space, HBarConfig hbar);

// U_phi psi = (2 pi hbar)^{n/2} W(psi, phi), by quadrature.
numerics::SampledFunction2D u_phi_numeric(const numerics::SampledFunction1D& psi,
                                          const gaussians::GaussianState& phi);
numerics::SampledFunction2D u_phi_numeric(const numerics::SampledFunction1D& psi,
                                          const gaussians::GaussianState& phi,
                                          const numerics::Grid1D& pgrid);

// Adjoint of the discrete lift realized by u_phi_numeric on Psi's grid.
numerics::SampledFunction1D u_phi_adjoint_numeric(const numerics::SampledFunction2D& Psi,
                                                  const gaussians::GaussianState& phi);

// Truncated phase-space frame operator sum_z ((Psi | T~(z) Phi)) T~(z) Phi
// with analytically evaluated atoms.
numerics::SampledFunction2D phase_space_frame_apply(const numerics::SampledFunction2D& Psi,
                                                    const PhaseSpaceFrameSpec& spec, double radius);

struct PhaseSpaceExpansion {
  std::vector<frames::ExpansionCoefficient> coefficients;
  numerics::SampledFunction2D reconstruction;
  double sup_error = 0.0;
  double l2_error = 0.0;
  double relative_l2_error = 0.0;
  double predicted_rate = 0.0;
  double rate_exponent = 0.0;  // -(1/4 hbar) min_{k != 0} G k^2
  double truncation_radius = 0.0;
  long lattice_points = 0;
};

// Expansion of a phase-space Gaussian over translated standard lifts with
// closed-form coefficients; reconstruction and errors on the given grid.
PhaseSpaceExpansion phase_space_expand(const gaussians::PhaseSpaceGaussian& target,
                                       const PhaseSpaceFrameSpec& spec, double radius,
                                       const numerics::Grid2D& grid);

// ||Pi_phi Psi - Psi|| with Pi_phi = U_phi U_phi^* realized on the grid.
double projection_check(const numerics::SampledFunction2D& Psi,
                        const gaussians::GaussianState& phi);

}  // namespace whframes::phasespace

#endif  // WHFRAMES_PHASESPACE_HPP
