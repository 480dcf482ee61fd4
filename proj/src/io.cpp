#include "whframes/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace whframes::io {

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<double> parse_row(const std::string& line) {
  std::istringstream in(line);
  std::vector<double> row;
  double v;
  while (in >> v) row.push_back(v);
  return row;
}

}  // namespace

void atomic_write(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("atomic_write: cannot open " + tmp.string());
    out << content;
    if (!out) throw std::runtime_error("atomic_write: write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_file: cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::string lattice_to_text(const symplectic::Lattice& lattice) {
  std::ostringstream out;
  const auto n = lattice.n();
  out << "n=" << n << "\n";
  const auto& gen = lattice.generator();
  for (Eigen::Index i = 0; i < 2 * n; ++i) {
    for (Eigen::Index j = 0; j < 2 * n; ++j) {
      if (j) out << ' ';
      out << format_double(gen(i, j));
    }
    out << "\n";
  }
  return out.str();
}

symplectic::Lattice lattice_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string header;
  if (!std::getline(in, header) || header.rfind("n=", 0) != 0) {
    throw std::invalid_argument("lattice_from_text: missing n= header");
  }
  const int n = std::stoi(header.substr(2));
  if (n < 1) throw std::invalid_argument("lattice_from_text: n must be >= 1");
  Matrix gen(2 * n, 2 * n);
  std::string line;
  for (int i = 0; i < 2 * n; ++i) {
    if (!std::getline(in, line)) throw std::invalid_argument("lattice_from_text: truncated matrix");
    const auto row = parse_row(line);
    if (static_cast<int>(row.size()) != 2 * n) {
      throw std::invalid_argument("lattice_from_text: row length mismatch");
    }
    for (int j = 0; j < 2 * n; ++j) gen(i, j) = row[j];
  }
  return symplectic::Lattice::from_generator(gen);
}

std::string gaussian_to_text(const gaussians::GaussianState& g) {
  std::ostringstream out;
  const auto n = g.n();
  out << "n=" << n << " hbar=" << format_double(g.hbar().hbar) << "\n";
  for (int block = 0; block < 2; ++block) {
    const Matrix part = (block == 0) ? g.X() : g.Y();
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j) out << ' ';
        out << format_double(part(i, j));
      }
      out << "\n";
    }
  }
  return out.str();
}

gaussians::GaussianState gaussian_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string header;
  if (!std::getline(in, header)) throw std::invalid_argument("gaussian_from_text: empty input");
  int n = 0;
  double hbar = 0.0;
  if (std::sscanf(header.c_str(), "n=%d hbar=%lf", &n, &hbar) != 2 || n < 1) {
    throw std::invalid_argument("gaussian_from_text: malformed header");
  }
  Matrix re(n, n), im(n, n);
  std::string line;
  for (int block = 0; block < 2; ++block) {
    Matrix& part = (block == 0) ? re : im;
    for (int i = 0; i < n; ++i) {
      if (!std::getline(in, line)) throw std::invalid_argument("gaussian_from_text: truncated block");
      const auto row = parse_row(line);
      if (static_cast<int>(row.size()) != n) {
        throw std::invalid_argument("gaussian_from_text: row length mismatch");
      }
      for (int j = 0; j < n; ++j) part(i, j) = row[j];
    }
  }
  ComplexMatrix M = re.cast<Complex>() + Complex(0.0, 1.0) * im.cast<Complex>();
  return gaussians::GaussianState(M, HBarConfig(hbar));
}

std::string sampled1d_to_csv(const numerics::SampledFunction1D& f) {
  std::ostringstream out;
  out << "x,re,im\n";
  for (int k = 0; k < f.grid.count; ++k) {
    out << format_double(f.grid.point(k)) << ',' << format_double(f.values(k).real()) << ','
        << format_double(f.values(k).imag()) << "\n";
  }
  return out.str();
}

numerics::SampledFunction1D sampled1d_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("x,re,im", 0) != 0) {
    throw std::invalid_argument("sampled1d_from_csv: missing header");
  }
  std::vector<double> xs;
  std::vector<Complex> vs;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double x, re, im;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &x, &re, &im) != 3) {
      throw std::invalid_argument("sampled1d_from_csv: malformed row");
    }
    xs.push_back(x);
    vs.push_back(Complex(re, im));
  }
  if (xs.size() < 16) throw std::invalid_argument("sampled1d_from_csv: too few samples");
  const double spacing = xs[1] - xs[0];
  for (size_t k = 1; k < xs.size(); ++k) {
    if (std::abs(xs[k] - xs[k - 1] - spacing) > 1e-9 * std::max(1.0, std::abs(spacing))) {
      throw std::invalid_argument("sampled1d_from_csv: non-uniform grid");
    }
  }
  const int count = static_cast<int>(xs.size());
  const double center = xs[count / 2];
  numerics::Grid1D grid(center, spacing, count);
  ComplexVector values(count);
  for (int k = 0; k < count; ++k) values(k) = vs[k];
  return numerics::SampledFunction1D(grid, std::move(values));
}

std::string sampled2d_to_csv(const numerics::SampledFunction2D& f) {
  std::ostringstream out;
  out << "x,p,re,im\n";
  for (int i = 0; i < f.grid.x.count; ++i) {
    for (int j = 0; j < f.grid.p.count; ++j) {
      out << format_double(f.grid.x.point(i)) << ',' << format_double(f.grid.p.point(j)) << ','
          << format_double(f.values(i, j).real()) << ',' << format_double(f.values(i, j).imag())
          << "\n";
    }
  }
  return out.str();
}

numerics::SampledFunction2D sampled2d_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("x,p,re,im", 0) != 0) {
    throw std::invalid_argument("sampled2d_from_csv: missing header");
  }
  std::vector<double> xs, ps;
  std::vector<Complex> vs;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double x, p, re, im;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &x, &p, &re, &im) != 4) {
      throw std::invalid_argument("sampled2d_from_csv: malformed row");
    }
    xs.push_back(x);
    ps.push_back(p);
    vs.push_back(Complex(re, im));
  }
  // infer the tensor grid from the row-major layout
  size_t np = 1;
  while (np < ps.size() && std::abs(xs[np] - xs[0]) < 1e-12) ++np;
  if (np < 16 || vs.size() % np != 0) {
    throw std::invalid_argument("sampled2d_from_csv: cannot infer tensor grid");
  }
  const size_t nx = vs.size() / np;
  if (nx < 16) throw std::invalid_argument("sampled2d_from_csv: too few x samples");
  numerics::Grid1D gx(xs[(nx / 2) * np], xs[np] - xs[0], static_cast<int>(nx));
  numerics::Grid1D gp(ps[np / 2], ps[1] - ps[0], static_cast<int>(np));
  Eigen::MatrixXcd values(nx, np);
  for (size_t i = 0; i < nx; ++i) {
    for (size_t j = 0; j < np; ++j) values(i, j) = vs[i * np + j];
  }
  return numerics::SampledFunction2D(numerics::Grid2D{gx, gp}, std::move(values));
}

std::string coefficients_to_csv(const std::vector<frames::ExpansionCoefficient>& coefficients,
                                const symplectic::Lattice& lattice) {
  std::ostringstream out;
  out << "kx,kp,zx,zp,re_c,im_c\n";
  const Matrix inv = lattice.generator().inverse();
  for (const auto& c : coefficients) {
    const Vector k = inv * c.point.coords;
    out << static_cast<long>(std::llround(k(0))) << ',' << static_cast<long>(std::llround(k(1)))
        << ',' << format_double(c.point.coords(0)) << ',' << format_double(c.point.coords(1))
        << ',' << format_double(c.value.real()) << ',' << format_double(c.value.imag()) << "\n";
  }
  return out.str();
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "delta,janssen_error,predicted_rate,a_est,b_est,sup_err,l2_err\n";
  for (const auto& r : rows) {
    out << format_double(r.delta) << ',' << format_double(r.janssen_error) << ','
        << format_double(r.predicted_rate) << ',' << format_double(r.a_est) << ','
        << format_double(r.b_est) << ',' << format_double(r.sup_err) << ','
        << format_double(r.l2_err) << "\n";
  }
  return out.str();
}

}  // namespace whframes::io
