#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "whframes/frames.hpp"
#include "whframes/gaussians.hpp"
#include "whframes/numerics.hpp"
#include "whframes/phasespace.hpp"
#include "whframes/symplectic.hpp"

namespace py = pybind11;
using namespace whframes;

namespace {

PhaseSpacePoint as_point(const Vector& z) { return PhaseSpacePoint(z); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Gaussian Weyl-Heisenberg frames: closed-form phase-space transforms, "
            "lattice frame diagnostics and expansion coefficients";

  py::register_exception<ConvergenceError>(m, "ConvergenceError");
  py::register_exception<UndecidableError>(m, "UndecidableError");

  m.def("classical_hbar", [] { return HBarConfig::classical().hbar; });

  m.def("standard_j", &symplectic::standard_J, py::arg("n"));
  m.def(
      "symplectic_form",
      [](const Vector& z, const Vector& z2) {
        return symplectic::symplectic_form(as_point(z), as_point(z2));
      },
      py::arg("z"), py::arg("z2"));
  m.def("is_symplectic", &symplectic::is_symplectic, py::arg("S"),
        py::arg("tol") = symplectic::kSymplecticTol);
  m.def(
      "pre_iwasawa",
      [](const Matrix& S) {
        auto fac = symplectic::pre_iwasawa(symplectic::SymplecticMatrix(S));
        return py::make_tuple(fac.Q.entries(), fac.B.L, fac.B.P);
      },
      py::arg("S"), "Returns (Q, L, P) with S = Q [[L, 0], [L^-T P, L^-T]]");

  py::class_<symplectic::Lattice>(m, "Lattice")
      .def_static("from_generator", &symplectic::Lattice::from_generator, py::arg("generator"))
      .def_static("symplectic", &symplectic::Lattice::symplectic, py::arg("delta"), py::arg("Q"),
                  py::arg("S"))
      .def_static("separable", &symplectic::Lattice::separable, py::arg("alphas"),
                  py::arg("betas"))
      .def_static("param1d", &symplectic::Lattice::param1d, py::arg("alpha"), py::arg("beta"),
                  py::arg("gamma"), py::arg("delta") = 1.0)
      .def_property_readonly("generator", &symplectic::Lattice::generator)
      .def("volume", &symplectic::Lattice::volume)
      .def("density", &symplectic::Lattice::density)
      .def("adjoint", &symplectic::Lattice::adjoint)
      .def(
          "enumerate_points",
          [](const symplectic::Lattice& lattice, double radius) {
            std::vector<Vector> out;
            for (const auto& z : lattice.enumerate_points(radius)) out.push_back(z.coords);
            return out;
          },
          py::arg("radius"));

  py::class_<gaussians::GaussianState>(m, "GaussianState")
      .def(py::init([](const ComplexMatrix& M, double hbar) {
             return gaussians::GaussianState(M, HBarConfig(hbar));
           }),
           py::arg("M"), py::arg("hbar"))
      .def_static(
          "standard",
          [](int n, double hbar) { return gaussians::GaussianState::standard(n, HBarConfig(hbar)); },
          py::arg("n"), py::arg("hbar"))
      .def_property_readonly("M", &gaussians::GaussianState::M)
      .def_property_readonly("n", &gaussians::GaussianState::n)
      .def_property_readonly("hbar", [](const gaussians::GaussianState& g) { return g.hbar().hbar; })
      .def("evaluate", &gaussians::GaussianState::evaluate, py::arg("x"));

  py::class_<gaussians::PhaseSpaceGaussian>(m, "PhaseSpaceGaussian")
      .def(py::init([](Complex amplitude, const ComplexMatrix& F, double hbar) {
             return gaussians::PhaseSpaceGaussian(amplitude, F, HBarConfig(hbar));
           }),
           py::arg("amplitude"), py::arg("F"), py::arg("hbar"))
      .def_property_readonly("amplitude", &gaussians::PhaseSpaceGaussian::amplitude)
      .def_property_readonly("F", &gaussians::PhaseSpaceGaussian::F)
      .def_property_readonly("hbar",
                             [](const gaussians::PhaseSpaceGaussian& g) { return g.hbar().hbar; })
      .def(
          "evaluate",
          [](const gaussians::PhaseSpaceGaussian& g, const Vector& z) {
            return g.evaluate(as_point(z));
          },
          py::arg("z"))
      .def(
          "translated_evaluate",
          [](const gaussians::PhaseSpaceGaussian& g, const Vector& z0, const Vector& z) {
            return g.translated_evaluate(as_point(z0), as_point(z));
          },
          py::arg("z0"), py::arg("z"));

  m.def("cross_wigner_closed", &gaussians::cross_wigner_closed, py::arg("g1"), py::arg("g2"));
  m.def(
      "cross_ambiguity_closed",
      [](const gaussians::GaussianState& g1, const gaussians::GaussianState& g2, const Vector& z) {
        return gaussians::cross_ambiguity_closed(g1, g2, as_point(z));
      },
      py::arg("g1"), py::arg("g2"), py::arg("z"));
  m.def("wigner_gram_split",
        [](const gaussians::GaussianState& g) { return gaussians::wigner_gram_split(g).entries(); },
        py::arg("g"));
  m.def(
      "fourier_gaussian",
      [](const ComplexMatrix& M, double hbar) {
        auto out = gaussians::fourier_gaussian(M, HBarConfig(hbar));
        return py::make_tuple(out.amplitude, out.exponent);
      },
      py::arg("M"), py::arg("hbar"));
  m.def("u_phi_closed", &gaussians::u_phi_closed, py::arg("g"));
  m.def(
      "expansion_coefficient",
      [](const gaussians::PhaseSpaceGaussian& target, const Vector& z) {
        return gaussians::expansion_coefficient(target, as_point(z));
      },
      py::arg("target"), py::arg("z"));
  m.def(
      "corollary_f_equals_identity_check",
      [](const Vector& z, double hbar) {
        auto [lhs, rhs] = gaussians::corollary_f_equals_identity_check(as_point(z), HBarConfig(hbar));
        return py::make_tuple(lhs, rhs);
      },
      py::arg("z"), py::arg("hbar"));
  m.def(
      "density_rho_eval",
      [](const Matrix& Sigma, double hbar, const Vector& z) {
        return gaussians::density_rho_eval(gaussians::CovarianceState(Sigma, HBarConfig(hbar)),
                                           as_point(z));
      },
      py::arg("Sigma"), py::arg("hbar"), py::arg("z"));
  m.def(
      "admissible_density",
      [](const Matrix& Sigma, double hbar, double tol) {
        return gaussians::admissible_density(gaussians::CovarianceState(Sigma, HBarConfig(hbar)),
                                             tol);
      },
      py::arg("Sigma"), py::arg("hbar"), py::arg("tol") = 1e-12);
  m.def(
      "admissibility_min_eigenvalue",
      [](const Matrix& Sigma, double hbar) {
        return gaussians::admissibility_min_eigenvalue(
            gaussians::CovarianceState(Sigma, HBarConfig(hbar)));
      },
      py::arg("Sigma"), py::arg("hbar"));

  m.def(
      "poisson_check",
      [](const ComplexMatrix& M, double hbar, const Vector& x) {
        auto [lhs, rhs] = numerics::poisson_check(M, HBarConfig(hbar), x);
        return py::make_tuple(lhs, rhs);
      },
      py::arg("M"), py::arg("hbar"), py::arg("x"));

  py::class_<frames::FrameDiagnostics>(m, "FrameDiagnostics")
      .def_readonly("janssen_error", &frames::FrameDiagnostics::janssen_error)
      .def_readonly("predicted_rate", &frames::FrameDiagnostics::predicted_rate)
      .def_readonly("truncation_radius", &frames::FrameDiagnostics::truncation_radius)
      .def("vacuous", &frames::FrameDiagnostics::vacuous);

  m.def(
      "gaussian_frame_set_contains",
      [](const gaussians::GaussianState& window, const symplectic::Lattice& lattice) {
        return frames::gaussian_frame_set_contains(frames::FrameSpec(window, lattice));
      },
      py::arg("window"), py::arg("lattice"));
  m.def(
      "janssen_error_sum",
      [](const gaussians::GaussianState& window, const symplectic::Lattice& lattice,
         double tail_tol) {
        return frames::janssen_error_sum(frames::FrameSpec(window, lattice), tail_tol);
      },
      py::arg("window"), py::arg("lattice"), py::arg("tail_tol") = 1e-14);
  m.def(
      "predicted_rate",
      [](const Matrix& L, const Matrix& P, double delta, double hbar) {
        return frames::predicted_rate(symplectic::LowerBlockSymplectic(L, P), delta,
                                      HBarConfig(hbar));
      },
      py::arg("L"), py::arg("P"), py::arg("delta"), py::arg("hbar"));
  m.def("theta_sum", &frames::theta_sum, py::arg("r"), py::arg("alpha"), py::arg("beta"),
        py::arg("gamma"));
  m.def("theta_sum_rhs", &frames::theta_sum_rhs, py::arg("r"), py::arg("alpha"), py::arg("beta"));
  m.def("theta_inequality_check", &frames::theta_inequality_check, py::arg("r"), py::arg("alpha"),
        py::arg("beta"), py::arg("gamma"));
  m.def("minimal_gram_value", &frames::minimal_gram_value, py::arg("G"));

  m.def(
      "frame_bounds_numeric",
      [](const gaussians::GaussianState& window, const symplectic::Lattice& lattice,
         double halfwidth, int count, double tol) {
        frames::FrameBoundsOptions opts;
        opts.grid = numerics::Grid1D::centered(halfwidth, count);
        opts.tol = tol;
        auto out = frames::frame_bounds_numeric(frames::FrameSpec(window, lattice), opts);
        return py::make_tuple(out.a_est, out.b_est);
      },
      py::arg("window"), py::arg("lattice"), py::arg("halfwidth") = 8.0, py::arg("count") = 256,
      py::arg("tol") = 1e-6);

  m.def(
      "reconstruction_errors",
      [](const gaussians::GaussianState& target, const gaussians::GaussianState& window,
         const symplectic::Lattice& lattice, double radius, double halfwidth, int count,
         bool allow_non_frame) {
        auto result = frames::approx_expansion(target, frames::FrameSpec(window, lattice), radius,
                                               numerics::Grid1D::centered(halfwidth, count),
                                               allow_non_frame);
        return py::make_tuple(result.report.sup_error, result.report.l2_error);
      },
      py::arg("target"), py::arg("window"), py::arg("lattice"), py::arg("radius") = 0.0,
      py::arg("halfwidth") = 6.0, py::arg("count") = 1024, py::arg("allow_non_frame") = false,
      "Sup and L2 error of the approximate lattice expansion of a Gaussian target");
}
