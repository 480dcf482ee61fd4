// Command-line driver: closed-form transforms, frame diagnostics, lattice
// sweeps and reconstruction experiments, with CSV artifacts.
#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "whframes/frames.hpp"
#include "whframes/gaussians.hpp"
#include "whframes/io.hpp"
#include "whframes/numerics.hpp"
#include "whframes/phasespace.hpp"
#include "whframes/symplectic.hpp"

using namespace whframes;
using gaussians::GaussianState;
using numerics::Grid1D;
using numerics::Grid2D;
using symplectic::Lattice;

namespace {

std::map<std::string, std::string> load_config(int argc, char** argv) {
  std::string path;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) path = argv[i + 1];
    if (arg.rfind("--config=", 0) == 0) path = arg.substr(9);
  }
  std::map<std::string, std::string> out;
  if (path.empty()) return out;
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config file not found: " + path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("config line without '=': " + line);
    out[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return out;
}

struct ConfigView {
  std::map<std::string, std::string> values;

  std::string str(const std::string& key, const std::string& fallback) const {
    auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
  }
  double num(const std::string& key, double fallback) const {
    auto it = values.find(key);
    return it == values.end() ? fallback : std::stod(it->second);
  }
  int integer(const std::string& key, int fallback) const {
    auto it = values.find(key);
    return it == values.end() ? fallback : std::stoi(it->second);
  }
};

HBarConfig parse_hbar(const std::string& text) {
  if (text == "classical") return HBarConfig::classical();
  return HBarConfig(std::stod(text));
}

std::string format_complex(Complex v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%+.12g%+.12gi", v.real(), v.imag());
  return buf;
}

GaussianState scalar_state(Complex m, HBarConfig hbar = HBarConfig::classical()) {
  ComplexMatrix M(1, 1);
  M(0, 0) = m;
  return GaussianState(M, hbar);
}

Complex parse_complex(std::string text) {
  if (text.empty()) throw std::invalid_argument("empty complex literal");
  auto strip = [](std::string& s) {
    while (!s.empty() && s.front() == ' ') s.erase(s.begin());
    while (!s.empty() && s.back() == ' ') s.pop_back();
  };
  strip(text);
  const bool has_i = text.back() == 'i' || text.back() == 'j';
  if (!has_i) return Complex(std::stod(text), 0.0);
  text.pop_back();
  // split at the last +/- that is not an exponent sign or leading sign
  for (size_t pos = text.size(); pos-- > 1;) {
    if ((text[pos] == '+' || text[pos] == '-') && text[pos - 1] != 'e' && text[pos - 1] != 'E') {
      const double re = std::stod(text.substr(0, pos));
      std::string imag = text.substr(pos);
      if (imag == "+" || imag == "-") imag += "1";
      return Complex(re, std::stod(imag));
    }
  }
  if (text.empty() || text == "+") return Complex(0.0, 1.0);
  if (text == "-") return Complex(0.0, -1.0);
  return Complex(0.0, std::stod(text));
}

GaussianState make_state(const std::string& m_text, const std::string& m_file, HBarConfig hbar) {
  if (!m_file.empty()) return io::gaussian_from_text(io::read_file(m_file));
  if (m_text == "I") return GaussianState::standard(1, hbar);
  ComplexMatrix M(1, 1);
  M(0, 0) = parse_complex(m_text);
  return GaussianState(M, hbar);
}

struct LatticeArgs {
  std::string file;
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 0.0;
  double delta = 2.0;
};

Lattice make_lattice(const LatticeArgs& args) {
  if (!args.file.empty()) return io::lattice_from_text(io::read_file(args.file));
  return Lattice::param1d(args.alpha, args.beta, args.gamma, args.delta);
}

std::string out_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

std::string complex_matrix_text(const ComplexMatrix& M) {
  std::ostringstream out;
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      if (j) out << "  ";
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%+.12g%+.12gi", M(i, j).real(), M(i, j).imag());
      out << buf;
    }
    out << "\n";
  }
  return out.str();
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  if (out.empty()) throw std::invalid_argument("empty list: " + text);
  return out;
}

Matrix read_sigma(const std::string& file) {
  const auto text = io::read_file(file);
  std::istringstream in(text);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::vector<double> row;
    double v;
    while (ls >> v) row.push_back(v);
    if (!row.empty()) rows.push_back(row);
  }
  if (rows.empty() || rows.size() != rows[0].size()) {
    throw std::invalid_argument("sigma file must hold a square matrix");
  }
  Matrix sigma(rows.size(), rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) throw std::invalid_argument("ragged sigma matrix");
    for (size_t j = 0; j < rows.size(); ++j) sigma(i, j) = rows[i][j];
  }
  return sigma;
}

struct GlobalArgs {
  std::string hbar_text = "classical";
  std::string out_dir = ".";
  int grid_n = 512;
  double grid_halfwidth = 0.0;  // 0 = auto
  double radius = 0.0;          // 0 = auto
  double tol = 1e-6;
  std::string config_path;
};

Grid1D pick_grid(const GlobalArgs& g, const GaussianState& reference) {
  if (g.grid_halfwidth > 0.0) return Grid1D::centered(g.grid_halfwidth, g.grid_n);
  return numerics::default_grid(reference, g.grid_n);
}

int cmd_wigner(const GlobalArgs& g, const std::string& m_text, const std::string& mprime_text,
               const std::string& m_file, const std::string& mprime_file, bool ambiguity_mode) {
  const HBarConfig hbar = parse_hbar(g.hbar_text);
  const auto g1 = make_state(m_text, m_file, hbar);
  const auto g2 = make_state(mprime_text, mprime_file, hbar);
  const auto closed = gaussians::cross_wigner_closed(g1, g2);
  const char* tag = ambiguity_mode ? "ambiguity" : "wigner";

  gaussians::PhaseSpaceGaussian surface =
      ambiguity_mode ? gaussians::PhaseSpaceGaussian(
                           closed.amplitude() * std::pow(2.0, -double(g1.n())), closed.F() / 4.0,
                           hbar)
                     : closed;

  std::ostringstream params;
  params << "n=" << g1.n() << " hbar=" << hbar.hbar << "\n";
  params << "amplitude=" << format_complex(surface.amplitude()) << "\n";
  params << "C=" << format_complex(closed.amplitude() /
                                   std::pow(1.0 / (std::numbers::pi * hbar.hbar), double(g1.n())))
         << "\n";
  params << "F=\n" << complex_matrix_text(surface.F());
  io::atomic_write(out_path(g.out_dir, std::string(tag) + "_params.txt"), params.str());

  std::ostringstream reportText;
  if (g1.n() == 1) {
    const Grid1D grid = pick_grid(g, g1);
    const Grid1D pgrid = Grid1D::centered(
        g.grid_halfwidth > 0 ? g.grid_halfwidth : 4.0, std::min(128, g.grid_n));
    const Grid2D grid2{grid, pgrid};

    Eigen::MatrixXcd closed_vals(grid.count, pgrid.count);
    for (int i = 0; i < grid.count; ++i) {
      for (int j = 0; j < pgrid.count; ++j) {
        closed_vals(i, j) = surface.evaluate(PhaseSpacePoint::xy(grid.point(i), pgrid.point(j)));
      }
    }
    io::atomic_write(out_path(g.out_dir, std::string(tag) + "_closed.csv"),
                     io::sampled2d_to_csv(numerics::SampledFunction2D(grid2, closed_vals)));

    const auto f1 = numerics::sample(g1, grid);
    const auto f2 = numerics::sample(g2, grid);
    const auto numeric = ambiguity_mode ? numerics::ambiguity_numeric(f1, f2, hbar, pgrid)
                                        : numerics::wigner_numeric(f1, f2, hbar, pgrid);
    double worst = 0.0;
    const double peak = std::abs(surface.amplitude());
    for (int i = 0; i < numeric.grid.x.count; ++i) {
      for (int j = 0; j < numeric.grid.p.count; ++j) {
        const Complex expected = surface.evaluate(
            PhaseSpacePoint::xy(numeric.grid.x.point(i), numeric.grid.p.point(j)));
        worst = std::max(worst, std::abs(numeric.values(i, j) - expected) / peak);
      }
    }
    reportText << "closed_vs_oracle_max_rel_error=" << worst << "\n";
    reportText << "grid_n=" << grid.count << " grid_spacing=" << grid.spacing << "\n";
  } else {
    reportText << "closed_vs_oracle_max_rel_error=skipped (grid oracle is 1-D only)\n";
  }
  io::atomic_write(out_path(g.out_dir, std::string(tag) + "_report.txt"), reportText.str());
  std::cout << tag << ": wrote parameters, samples and report to " << g.out_dir << "\n";
  return 0;
}

int cmd_rate_sweep(const GlobalArgs& g, const LatticeArgs& largs, const std::string& deltas_text) {
  const HBarConfig hbar = parse_hbar(g.hbar_text);
  const auto deltas = parse_list(deltas_text);
  const auto window = GaussianState::standard(1, hbar);

  std::vector<io::SweepRow> rows;
  std::ostringstream report;
  report << "# rate sweep: alpha=" << largs.alpha << " beta=" << largs.beta
         << " gamma=" << largs.gamma << " hbar=" << hbar.hbar << "\n";
  const Grid1D rec_grid = Grid1D::centered(6.0, 1024);
  for (double delta : deltas) {
    Lattice lattice = Lattice::param1d(largs.alpha, largs.beta, largs.gamma, delta);
    frames::FrameSpec spec(window, lattice);
    const auto diag = frames::janssen_error_sum(spec, 1e-14);

    frames::FrameBoundsOptions opts;
    opts.tol = g.tol;
    const auto bounds = frames::frame_bounds_numeric(spec, opts);
    const double spectral = bounds.spectral_error(lattice.volume());

    double sup_err = std::nan("");
    double l2_err = std::nan("");
    const bool is_frame = frames::gaussian_frame_set_contains(spec);
    auto rec = frames::approx_expansion(window, spec, g.radius, rec_grid, !is_frame);
    sup_err = rec.report.sup_error;
    l2_err = rec.report.l2_error;

    rows.push_back({delta, diag.janssen_error, diag.predicted_rate, bounds.a_est, bounds.b_est,
                    sup_err, l2_err});
    report << "delta=" << delta << " spectral_error=" << spectral
           << " truncation_radius=" << diag.truncation_radius;
    if (diag.vacuous()) report << " [bound vacuous]";
    if (!is_frame) report << " [not a frame]";
    report << "\n";
  }

  // slope of log(janssen_error) against delta^2
  if (rows.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& r : rows) {
      const double x = r.delta * r.delta;
      const double y = std::log(r.janssen_error);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double n = double(rows.size());
    report << "log_janssen_slope_vs_delta_sq=" << (n * sxy - sx * sy) / (n * sxx - sx * sx)
           << "\n";
  }

  io::atomic_write(out_path(g.out_dir, "rate_sweep.csv"), io::sweep_to_csv(rows));
  io::atomic_write(out_path(g.out_dir, "rate_sweep_report.txt"), report.str());
  std::cout << "rate-sweep: wrote " << rows.size() << " rows to " << g.out_dir << "\n";
  return 0;
}

int cmd_reconstruct(const GlobalArgs& g, const LatticeArgs& largs, double target_p,
                    double target_l, const std::string& target_file, bool force) {
  const HBarConfig hbar = parse_hbar(g.hbar_text);
  const auto window = GaussianState::standard(1, hbar);
  frames::FrameSpec spec(window, make_lattice(largs));

  const bool is_frame = frames::gaussian_frame_set_contains(spec);
  if (!is_frame && !force) {
    throw std::domain_error("reconstruct: lattice density at or below critical; pass --force");
  }

  frames::ExpansionResult result = [&] {
    if (!target_file.empty()) {
      auto target = io::sampled1d_from_csv(io::read_file(target_file));
      return frames::approx_expansion(target, spec, g.radius > 0 ? g.radius : 8.0, !is_frame);
    }
    auto target = gaussians::GeneralizedGaussian1D(target_p, target_l, hbar).to_state();
    const Grid1D grid = g.grid_halfwidth > 0 ? Grid1D::centered(g.grid_halfwidth, g.grid_n)
                                             : Grid1D::centered(6.0, g.grid_n);
    return frames::approx_expansion(target, spec, g.radius, grid, !is_frame);
  }();

  // target = reconstruction + difference, per sample
  const auto& grid = result.reconstruction.grid;
  ComplexVector target_vals(grid.count);
  if (!target_file.empty()) {
    target_vals = io::sampled1d_from_csv(io::read_file(target_file)).values;
  } else {
    auto target = gaussians::GeneralizedGaussian1D(target_p, target_l, hbar).to_state();
    target_vals = numerics::sample(target, grid).values;
  }
  ComplexVector diff(grid.count);
  for (int k = 0; k < grid.count; ++k) {
    diff(k) = std::abs(result.reconstruction.values(k) - target_vals(k));
  }

  io::atomic_write(out_path(g.out_dir, "target.csv"),
                   io::sampled1d_to_csv(numerics::SampledFunction1D(grid, target_vals)));
  io::atomic_write(out_path(g.out_dir, "reconstruction.csv"),
                   io::sampled1d_to_csv(result.reconstruction));
  io::atomic_write(out_path(g.out_dir, "difference.csv"),
                   io::sampled1d_to_csv(numerics::SampledFunction1D(grid, diff)));

  std::ostringstream report;
  report << "sup_error=" << result.report.sup_error << "\n";
  report << "l2_error=" << result.report.l2_error << "\n";
  report << "lattice_points=" << result.report.lattice_points << "\n";
  report << "truncation_radius=" << result.report.truncation_radius << "\n";
  report << "grid_n=" << grid.count << " grid_spacing=" << grid.spacing << "\n";
  if (!is_frame) report << "status=forced (system is not a frame at this density)\n";
  io::atomic_write(out_path(g.out_dir, "reconstruct_report.txt"), report.str());
  std::cout << "reconstruct: sup error " << result.report.sup_error << ", files in " << g.out_dir
            << "\n";
  return 0;
}

int cmd_phase_expand(const GlobalArgs& g, const LatticeArgs& largs, const std::string& m_text,
                     const std::string& m_file, const std::string& deltas_text) {
  const HBarConfig hbar = parse_hbar(g.hbar_text);
  const auto state = make_state(m_text, m_file, hbar);
  if (state.n() != 1) throw std::invalid_argument("phase-expand: n = 1 targets only");
  const auto target = gaussians::u_phi_closed(state);

  const Grid1D space = Grid1D::centered(g.grid_halfwidth > 0 ? g.grid_halfwidth : 4.0,
                                        std::min(g.grid_n, 256));
  const Grid2D grid = phasespace::conjugate_phase_space_grid(space, hbar);

  const auto run_once = [&](double delta) {
    phasespace::PhaseSpaceFrameSpec spec(frames::FrameSpec(
        GaussianState::standard(1, hbar),
        Lattice::param1d(largs.alpha, largs.beta, largs.gamma, delta)));
    return phasespace::phase_space_expand(target, spec, g.radius, grid);
  };

  if (!deltas_text.empty()) {
    const auto deltas = parse_list(deltas_text);
    std::ostringstream report;
    report << "# delta sweep of the phase-space expansion error\n";
    std::vector<double> errs;
    double exponent = 0.0;
    for (double delta : deltas) {
      auto result = run_once(delta);
      errs.push_back(result.l2_error);
      exponent = result.rate_exponent;
      report << "delta=" << delta << " l2_error=" << result.l2_error
             << " sup_error=" << result.sup_error << " predicted_rate=" << result.predicted_rate
             << "\n";
    }
    if (deltas.size() >= 2) {
      const size_t last = deltas.size() - 1;
      const double slope = (std::log(errs[last]) - std::log(errs[last - 1])) /
                           (deltas[last] * deltas[last] - deltas[last - 1] * deltas[last - 1]);
      report << "log_error_slope_vs_delta_sq=" << slope << " rate_exponent=" << exponent << "\n";
    }
    io::atomic_write(out_path(g.out_dir, "phase_expand_sweep.txt"), report.str());
    std::cout << "phase-expand: sweep written to " << g.out_dir << "\n";
    return 0;
  }

  auto result = run_once(largs.delta);
  io::atomic_write(out_path(g.out_dir, "coefficients.csv"),
                   io::coefficients_to_csv(result.coefficients,
                                           Lattice::param1d(largs.alpha, largs.beta, largs.gamma,
                                                            largs.delta)));
  io::atomic_write(out_path(g.out_dir, "reconstruction2d.csv"),
                   io::sampled2d_to_csv(result.reconstruction));
  std::ostringstream report;
  report << "sup_error=" << result.sup_error << "\n";
  report << "l2_error=" << result.l2_error << "\n";
  report << "relative_l2_error=" << result.relative_l2_error << "\n";
  report << "predicted_rate=" << result.predicted_rate << "\n";
  report << "rate_exponent=" << result.rate_exponent << "\n";
  report << "lattice_points=" << result.lattice_points << "\n";
  report << "truncation_radius=" << result.truncation_radius << "\n";
  io::atomic_write(out_path(g.out_dir, "phase_expand_report.txt"), report.str());
  std::cout << "phase-expand: relative l2 error " << result.relative_l2_error << ", files in "
            << g.out_dir << "\n";
  return 0;
}

int cmd_check_state(const GlobalArgs& g, const std::string& sigma_file,
                    const std::string& sigma_diag, double sigma_scale) {
  const HBarConfig hbar = parse_hbar(g.hbar_text);
  Matrix sigma;
  if (!sigma_file.empty()) {
    sigma = read_sigma(sigma_file);
  } else if (!sigma_diag.empty()) {
    const auto vals = parse_list(sigma_diag);
    sigma = Matrix::Zero(vals.size(), vals.size());
    for (size_t i = 0; i < vals.size(); ++i) sigma(i, i) = vals[i];
  } else if (sigma_scale > 0.0) {
    sigma = sigma_scale * Matrix::Identity(2, 2);
  } else {
    throw std::invalid_argument("check-state: provide --sigma-file, --sigma-diag or --sigma-scale");
  }

  gaussians::CovarianceState state(sigma, hbar);
  const double min_eig = gaussians::admissibility_min_eigenvalue(state);
  const bool admissible = gaussians::admissible_density(state, 1e-12);

  const Complex i(0, 1);
  ComplexMatrix A = sigma.cast<Complex>() +
                    (i * hbar.hbar / 2.0) *
                        symplectic::standard_J(int(state.n())).cast<Complex>();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(A);

  std::ostringstream report;
  report << "eigenvalues_of_sigma_plus_ihbar_half_J=";
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    if (k) report << ",";
    report << es.eigenvalues()(k);
  }
  report << "\n";
  if (admissible && std::abs(min_eig) <= 1e-12) {
    report << "verdict=admissible (boundary)\n";
  } else if (admissible) {
    report << "verdict=admissible\n";
  } else {
    report << "verdict=not admissible, min eigenvalue " << min_eig << "\n";
  }

  if (state.n() == 1) {
    // normalization by quadrature
    Eigen::SelfAdjointEigenSolver<Matrix> ses(sigma);
    const double hw = 10.0 * std::sqrt(ses.eigenvalues().maxCoeff() / (2.0 * std::numbers::pi));
    const Grid1D qg(0.0, 2.0 * hw / 600, 600);
    double mass = 0.0;
    for (int a = 0; a < qg.count; ++a) {
      for (int b = 0; b < qg.count; ++b) {
        mass += gaussians::density_rho_eval(state, PhaseSpacePoint::xy(qg.point(a), qg.point(b)));
      }
    }
    mass *= qg.spacing * qg.spacing;
    report << "normalization_integral=" << mass << "\n";
    const auto moment = numerics::numeric_covariance(state);
    report << "second_moment_trace_ratio=" << moment.ratio << "\n";
    report << "measured_second_moment=\n";
    for (Eigen::Index r = 0; r < moment.measured.rows(); ++r) {
      for (Eigen::Index c = 0; c < moment.measured.cols(); ++c) {
        report << moment.measured(r, c) << (c + 1 < moment.measured.cols() ? " " : "\n");
      }
    }
  }
  const std::string text = report.str();
  io::atomic_write(out_path(g.out_dir, "check_state_report.txt"), text);
  std::cout << text;
  return 0;
}

int cmd_rotation_sweep(const GlobalArgs& g, double delta, int angle_count,
                       const std::string& window_kind) {
  const HBarConfig hbar = parse_hbar(g.hbar_text);
  if (angle_count < 1) throw std::invalid_argument("rotation-sweep: need at least one angle");
  const auto window = GaussianState::standard(1, hbar);

  numerics::SampledFunction1D bump(Grid1D::centered(8.0, 256), ComplexVector::Zero(256));
  frames::FrameBoundsOptions opts;
  opts.tol = g.tol;
  if (window_kind == "bump") {
    // smooth compactly supported bump, L2-normalized on the grid
    const double w = 1.2;
    for (int k = 0; k < bump.grid.count; ++k) {
      const double x = bump.grid.point(k) / w;
      bump.values(k) = (std::abs(x) < 1.0) ? std::exp(-1.0 / (1.0 - x * x)) : 0.0;
    }
    bump.values /= numerics::norm_l2(bump);
    opts.sampled_window = &bump;
  } else if (window_kind != "gaussian") {
    throw std::invalid_argument("rotation-sweep: window must be 'gaussian' or 'bump'");
  }

  std::ostringstream csv;
  csv << "angle,a_est,b_est\n";
  double amin = 1e300, amax = -1e300, bmin = 1e300, bmax = -1e300;
  for (int k = 0; k < angle_count; ++k) {
    const double angle = k * std::numbers::pi / (2.0 * angle_count);  // quarter turn suffices
    Matrix R(2, 2);
    R << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    frames::FrameSpec spec(window, Lattice::symplectic(delta, R, Matrix::Identity(2, 2)));
    const auto bounds = frames::frame_bounds_numeric(spec, opts);
    csv << angle << ',' << bounds.a_est << ',' << bounds.b_est << "\n";
    amin = std::min(amin, bounds.a_est);
    amax = std::max(amax, bounds.a_est);
    bmin = std::min(bmin, bounds.b_est);
    bmax = std::max(bmax, bounds.b_est);
  }
  io::atomic_write(out_path(g.out_dir, "rotation_sweep.csv"), csv.str());
  std::ostringstream report;
  report << "window=" << window_kind << "\n";
  report << "a_spread=" << amax - amin << "\n";
  report << "b_spread=" << bmax - bmin << "\n";
  io::atomic_write(out_path(g.out_dir, "rotation_sweep_report.txt"), report.str());
  std::cout << "rotation-sweep: a spread " << amax - amin << ", b spread " << bmax - bmin
            << ", files in " << g.out_dir << "\n";
  return 0;
}

int cmd_selftest(const GlobalArgs& g) {
  const HBarConfig hbar = HBarConfig::classical();
  int failures = 0;
  auto check = [&](const char* name, bool ok) {
    std::printf("%s %s\n", ok ? "PASS" : "FAIL", name);
    if (!ok) ++failures;
  };

  const auto std1 = GaussianState::standard(1, hbar);
  check("standard Gaussian peak 2^(1/4)",
        std::abs(std1.evaluate(Vector::Zero(1)) - std::pow(2.0, 0.25)) < 1e-12);

  const auto w = gaussians::cross_wigner_closed(scalar_state(2.0), scalar_state(1.0));
  check("cross-Wigner F matrix for M=2, M'=1",
        std::abs(w.F()(0, 0) - Complex(4.0 / 3.0, 0)) < 1e-12 &&
            std::abs(w.F()(0, 1) - Complex(0, -1.0 / 3.0)) < 1e-12);

  const Grid1D grid = Grid1D::centered(6.0, 384);
  const auto f = numerics::sample(std1, grid);
  auto W = numerics::wigner_numeric(f, f, hbar, Grid1D::centered(2.0, 32));
  double worst = 0.0;
  for (int i = 0; i < grid.count; i += 11) {
    for (int j = 0; j < 32; ++j) {
      const double expected = (1.0 / (std::numbers::pi * hbar.hbar)) *
                              std::exp(-(grid.point(i) * grid.point(i) +
                                         W.grid.p.point(j) * W.grid.p.point(j)) /
                                       hbar.hbar);
      worst = std::max(worst, std::abs(W.values(i, j) - expected));
    }
  }
  check("Wigner oracle matches closed form", worst < 1e-8 / (std::numbers::pi * hbar.hbar));

  frames::FrameSpec spec(std1, Lattice::param1d(1, 1, 0, 2.0));
  const auto diag = frames::janssen_error_sum(spec, 1e-14);
  check("Janssen sum at delta=2", std::abs(diag.janssen_error - 7.4837e-3) < 1e-6);

  auto [lhs, rhs] = numerics::poisson_check(ComplexMatrix::Identity(1, 1), hbar, Vector::Zero(1));
  check("Poisson summation theta constant",
        std::abs(lhs - rhs) < 1e-12 && std::abs(lhs - 1.0864348112) < 1e-9);

  gaussians::CovarianceState boundary(0.5 * hbar.hbar * Matrix::Identity(2, 2), hbar);
  check("admissibility boundary case", gaussians::admissible_density(boundary, 1e-12));

  (void)g;
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    ConfigView config{load_config(argc, argv)};

    CLI::App app{"Gaussian Weyl-Heisenberg frames and their phase-space lifts"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalArgs g;
    g.hbar_text = config.str("hbar", g.hbar_text);
    g.out_dir = config.str("out", g.out_dir);
    g.grid_n = config.integer("grid-n", g.grid_n);
    g.grid_halfwidth = config.num("grid-halfwidth", g.grid_halfwidth);
    g.radius = config.num("radius", g.radius);
    g.tol = config.num("tol", g.tol);

    app.add_option("--hbar", g.hbar_text, "hbar value, or 'classical' for 1/(2 pi)");
    app.add_option("--out", g.out_dir, "output directory");
    app.add_option("--grid-n", g.grid_n, "grid point count");
    app.add_option("--grid-halfwidth", g.grid_halfwidth, "grid halfwidth (0 = auto)");
    app.add_option("--radius", g.radius, "lattice truncation radius (0 = auto)");
    app.add_option("--tol", g.tol, "iterative tolerance");
    app.add_option("--config", g.config_path, "key=value config file; flags override");

    LatticeArgs largs;
    largs.file = config.str("lattice-file", "");
    largs.alpha = config.num("alpha", largs.alpha);
    largs.beta = config.num("beta", largs.beta);
    largs.gamma = config.num("gamma", largs.gamma);
    largs.delta = config.num("delta", largs.delta);

    std::string m_text = config.str("m", "I");
    std::string mprime_text = config.str("mprime", "I");
    std::string m_file = config.str("m-file", "");
    std::string mprime_file = config.str("mprime-file", "");

    auto* wigner = app.add_subcommand("wigner", "closed-form cross-Wigner surface and oracle check");
    wigner->add_option("--m", m_text, "exponent M ('I', real or a+bi)");
    wigner->add_option("--mprime", mprime_text, "exponent M'");
    wigner->add_option("--m-file", m_file, "Gaussian state file for M");
    wigner->add_option("--mprime-file", mprime_file, "Gaussian state file for M'");

    auto* ambiguity = app.add_subcommand("ambiguity", "closed-form cross-ambiguity surface");
    ambiguity->add_option("--m", m_text, "exponent M");
    ambiguity->add_option("--mprime", mprime_text, "exponent M'");
    ambiguity->add_option("--m-file", m_file, "Gaussian state file for M");
    ambiguity->add_option("--mprime-file", mprime_file, "Gaussian state file for M'");

    std::string deltas_text = config.str("deltas", "1.5,2,3,4");
    auto* rate = app.add_subcommand("rate-sweep", "Janssen error and frame bounds per delta");
    rate->add_option("--alpha", largs.alpha, "lattice alpha");
    rate->add_option("--beta", largs.beta, "lattice beta");
    rate->add_option("--gamma", largs.gamma, "lattice shear gamma");
    rate->add_option("--deltas", deltas_text, "comma-separated delta values");

    double target_p = config.num("target-p", 0.0);
    double target_l = config.num("target-l", 2.0);
    std::string target_file = config.str("target-file", "");
    bool force = false;
    auto* rec = app.add_subcommand("reconstruct", "approximate expansion of a target state");
    rec->add_option("--alpha", largs.alpha, "lattice alpha");
    rec->add_option("--beta", largs.beta, "lattice beta");
    rec->add_option("--gamma", largs.gamma, "lattice shear gamma");
    rec->add_option("--delta", largs.delta, "lattice scale delta");
    rec->add_option("--lattice-file", largs.file, "lattice generator file");
    rec->add_option("--target-p", target_p, "target chirp P");
    rec->add_option("--target-l", target_l, "target dilation L");
    rec->add_option("--target-file", target_file, "sampled target CSV");
    rec->add_flag("--force", force, "run even when the system is not a frame");

    std::string pe_deltas = config.str("pe-deltas", "");
    auto* pe = app.add_subcommand("phase-expand", "phase-space expansion with closed coefficients");
    pe->add_option("--m", m_text, "target exponent M");
    pe->add_option("--m-file", m_file, "target Gaussian state file");
    pe->add_option("--alpha", largs.alpha, "lattice alpha");
    pe->add_option("--beta", largs.beta, "lattice beta");
    pe->add_option("--gamma", largs.gamma, "lattice shear gamma");
    pe->add_option("--delta", largs.delta, "lattice scale delta");
    pe->add_option("--deltas", pe_deltas, "comma-separated deltas: sweep mode");

    std::string sigma_file = config.str("sigma-file", "");
    std::string sigma_diag = config.str("sigma-diag", "");
    double sigma_scale = config.num("sigma-scale", 0.0);
    auto* cs = app.add_subcommand("check-state", "admissibility and moments of a covariance state");
    cs->add_option("--sigma-file", sigma_file, "whitespace matrix file");
    cs->add_option("--sigma-diag", sigma_diag, "comma-separated diagonal");
    cs->add_option("--sigma-scale", sigma_scale, "sigma = scale * I");

    double rot_delta = config.num("delta", 2.0);
    int angle_count = config.integer("angles", 8);
    std::string window_kind = config.str("window", "gaussian");
    auto* rot = app.add_subcommand("rotation-sweep", "frame bounds under lattice rotation");
    rot->add_option("--delta", rot_delta, "lattice scale delta");
    rot->add_option("--angles", angle_count, "number of angles in a quarter turn");
    rot->add_option("--window", window_kind, "'gaussian' or 'bump'");

    app.add_subcommand("selftest", "compact built-in verification battery");

    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e);
      return code == 0 ? 0 : 2;
    }

    if (wigner->parsed()) return cmd_wigner(g, m_text, mprime_text, m_file, mprime_file, false);
    if (ambiguity->parsed()) return cmd_wigner(g, m_text, mprime_text, m_file, mprime_file, true);
    if (rate->parsed()) return cmd_rate_sweep(g, largs, deltas_text);
    if (rec->parsed()) return cmd_reconstruct(g, largs, target_p, target_l, target_file, force);
    if (pe->parsed()) return cmd_phase_expand(g, largs, m_text, m_file, pe_deltas);
    if (cs->parsed()) return cmd_check_state(g, sigma_file, sigma_diag, sigma_scale);
    if (rot->parsed()) return cmd_rotation_sweep(g, rot_delta, angle_count, window_kind);
    return cmd_selftest(g);
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
