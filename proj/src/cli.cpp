#include "btkit/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "btkit/chiral_recursion.hpp"
#include "btkit/classic_bts.hpp"
#include "btkit/io.hpp"
#include "btkit/maxwell_conductor.hpp"
#include "btkit/maxwell_vacuum.hpp"

namespace btkit::cli {

namespace {

using io::Json;
using chiral::Matrix;

constexpr double kClassicTol = 1e-6;
constexpr double kVacuumTol = 1e-6;
constexpr double kConductorTol = 1e-5;
constexpr double kChiralTol = 1e-6;
constexpr double kSymmetryTol = 1e-5;
constexpr double kAmplitudeTol = 1e-12;
constexpr double kDispersionTol = 1e-10;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double parse_number(const std::string& text, const std::string& what) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  while (first < last && *first == ' ') ++first;
  while (last > first && last[-1] == ' ') --last;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) {
    throw UsageError(what + ": cannot parse '" + text + "' as a number");
  }
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

Real3 parse_vec3(const std::string& text, const std::string& what) {
  const auto parts = split(text, ',');
  if (parts.size() != 3) throw UsageError(what + ": expected three comma-separated numbers");
  return Real3(parse_number(parts[0], what), parse_number(parts[1], what),
               parse_number(parts[2], what));
}

// Rows separated by ';', entries by ','.
Eigen::MatrixXd parse_real_matrix(const std::string& text, const std::string& what) {
  const auto rows = split(text, ';');
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto entries = split(rows[r], ',');
    if (static_cast<Eigen::Index>(entries.size()) != n) {
      throw UsageError(what + ": expected a square matrix, rows separated by ';'");
    }
    for (Eigen::Index c = 0; c < n; ++c) m(r, c) = parse_number(entries[c], what);
  }
  return m;
}

Matrix parse_matrix(const std::string& re, const std::string& im, const std::string& name,
                    Eigen::Index n_hint = 0) {
  Eigen::MatrixXd r = re.empty() ? Eigen::MatrixXd::Zero(n_hint, n_hint)
                                 : parse_real_matrix(re, "--" + name + "-re");
  Eigen::MatrixXd i = im.empty() ? Eigen::MatrixXd::Zero(r.rows(), r.cols())
                                 : parse_real_matrix(im, "--" + name + "-im");
  if (r.rows() != i.rows()) {
    throw UsageError("--" + name + "-re and --" + name + "-im have different sizes");
  }
  Matrix m(r.rows(), r.cols());
  m.real() = r;
  m.imag() = i;
  return m;
}

// Flag > BTKIT_H > library default.
double default_step() {
  const char* env = std::getenv("BTKIT_H");
  if (!env || !*env) return kDefaultStep;
  const double h = parse_number(env, "BTKIT_H");
  if (!(h > 0.0) || !std::isfinite(h)) throw UsageError("BTKIT_H must be a positive number");
  return h;
}

// ---------------------------------------------------------------------------
// Verification bookkeeping: every check records its report and tolerance.

class Checks {
 public:
  void add(const std::string& name, const ResidualReport& r, double tol) {
    Json j = io::to_json(r);
    j["tolerance"] = tol;
    j["passed"] = r.max_abs <= tol;
    passed_ = passed_ && r.max_abs <= tol;
    checks_[name] = j;
  }
  void add(const std::string& name, double value, double tol) {
    Json j;
    j["value"] = value;
    j["tolerance"] = tol;
    j["passed"] = value <= tol;
    passed_ = passed_ && value <= tol;
    checks_[name] = j;
  }
  bool passed() const { return passed_; }
  Json json() const {
    Json j;
    j["passed"] = passed_;
    j["checks"] = checks_;
    return j;
  }

 private:
  Json checks_ = Json::object();
  bool passed_ = true;
};

struct Result {
  Json report;
  std::function<void(std::ostream&)> csv;
  bool verified = false;
  bool passed = true;

  void attach(const Checks& checks) {
    report["verification"] = checks.json();
    verified = true;
    passed = checks.passed();
  }
};

// ---------------------------------------------------------------------------
// Shared flag groups.

struct OutputFlags {
  std::string format = "json";
  std::string json_path;
  std::string csv_path;
  bool verify = false;

  void add(CLI::App* app) {
    app->add_option("--format", format, "json, csv or both")
        ->check(CLI::IsMember({"json", "csv", "both"}));
    app->add_option("--json", json_path, "write the JSON report here instead of stdout");
    app->add_option("--csv", csv_path, "write CSV samples here instead of stdout");
    app->add_flag("--verify", verify, "run residual scans; exit 2 when one exceeds tolerance");
  }
};

struct GridFlags {
  double x_min = -1.0, x_max = 1.0, t_min = -1.0, t_max = 1.0;
  int nx = 41, nt = 41;
  std::optional<double> h;

  void add(CLI::App* app) {
    app->add_option("--x-min", x_min);
    app->add_option("--x-max", x_max);
    app->add_option("--t-min", t_min);
    app->add_option("--t-max", t_max);
    app->add_option("--nx", nx);
    app->add_option("--nt", nt);
    app->add_option("--h", h, "finite-difference step (overrides BTKIT_H)");
  }

  Grid2D grid() const {
    Grid2D g{x_min, x_max, t_min, t_max, nx, nt, h ? *h : default_step()};
    g.validate();
    return g;
  }
};

struct WaveFlags {
  std::string e0_re = "1,0,0", e0_im = "0,0,0", tau = "0,0,1";
  std::optional<double> omega, freq;
  double alpha = 0.0;
  int samples = 9;
  std::optional<double> step;
  std::optional<double> epsilon, mu, epsilon_rel, mu_rel;

  void add(CLI::App* app, bool with_medium) {
    app->add_option("--E0-re", e0_re, "real part of E0, 'x,y,z'");
    app->add_option("--E0-im", e0_im, "imaginary part of E0, 'x,y,z'");
    app->add_option("--tau", tau, "unit propagation direction, 'x,y,z'");
    auto* w = app->add_option("--omega", omega, "angular frequency, rad/s");
    auto* f = app->add_option("--freq", freq, "frequency, Hz");
    w->excludes(f);
    app->add_option("--alpha", alpha, "phase: E0 is multiplied by exp(i alpha)");
    app->add_option("--samples", samples, "grid samples per axis");
    app->add_option("--step", step, "FD step in units of 1/k and 1/omega (overrides BTKIT_H)");
    if (with_medium) {
      auto* e = app->add_option("--epsilon", epsilon, "absolute permittivity, F/m");
      auto* er = app->add_option("--epsilon-rel", epsilon_rel, "relative permittivity");
      auto* m = app->add_option("--mu", mu, "absolute permeability, H/m");
      auto* mr = app->add_option("--mu-rel", mu_rel, "relative permeability");
      e->excludes(er);
      m->excludes(mr);
    }
  }

  double angular_frequency() const {
    if (omega) return *omega;
    if (freq) return 2.0 * std::numbers::pi * *freq;
    throw UsageError("one of --omega or --freq is required");
  }
  Complex3 amplitude() const {
    Complex3 e;
    e.real() = parse_vec3(e0_re, "--E0-re");
    e.imag() = parse_vec3(e0_im, "--E0-im");
    return e;
  }
  Real3 direction() const { return parse_vec3(tau, "--tau"); }
  double fd_step() const { return step ? *step : default_step(); }

  em::MediumParams medium(double sigma) const {
    const auto& k = em::constants();
    em::MediumParams m;
    m.epsilon = epsilon ? *epsilon : (epsilon_rel ? *epsilon_rel : 1.0) * k.epsilon0;
    m.mu = mu ? *mu : (mu_rel ? *mu_rel : 1.0) * k.mu0;
    m.sigma = sigma;
    return m;
  }
};

struct MatrixFlags {
  std::string a_re, a_im, b_re, b_im, m_re, m_im, base_re, base_im;
  int nodes = 21;
  int levels = 0;

  void add_seed(CLI::App* app) {
    app->add_option("--A-re", a_re, "real part of A, rows separated by ';'")->required();
    app->add_option("--A-im", a_im);
    app->add_option("--B-re", b_re);
    app->add_option("--B-im", b_im);
    app->add_option("--nodes", nodes, "Chebyshev nodes per axis for integrated fields");
  }

  chiral::MatrixField seed() const {
    const Matrix A = parse_matrix(a_re, a_im, "A");
    const Matrix B = parse_matrix(b_re, b_im, "B", A.rows());
    if (B.rows() != A.rows()) throw UsageError("A and B must have the same size");
    return chiral::MatrixField::exp_seed(A, B);
  }
};

// ---------------------------------------------------------------------------
// Sampling helpers for CSV output.

double sample_scalar(const classic::ScalarField2D& f, const Point2& p) {
  try {
    return f(p);
  } catch (const SingularPointError&) {
    return std::nan("");
  }
}

void classic_csv(std::ostream& os, const Grid2D& g, const classic::ScalarField2D& u,
                 const classic::ScalarField2D& v) {
  io::CsvWriter w(os, {"x", "t", "u", "v"});
  for (int i = 0; i < g.nx; ++i) {
    for (int j = 0; j < g.nt; ++j) {
      const Point2 p{g.x(i), g.t(j)};
      w.row({p[0], p[1], sample_scalar(u, p), sample_scalar(v, p)});
    }
  }
}

void em_csv(std::ostream& os, const Grid4D& g, const VectorField& E, const VectorField& B) {
  std::vector<std::string> header{"x", "y", "z", "t"};
  for (const char* f : {"E", "B"}) {
    for (const char* c : {"x", "y", "z"}) {
      header.push_back(std::string(f) + c + "_re");
      header.push_back(std::string(f) + c + "_im");
    }
  }
  io::CsvWriter w(os, header);
  for (int a = 0; a < g.n[0]; ++a) {
    for (int b = 0; b < g.n[1]; ++b) {
      for (int c = 0; c < g.n[2]; ++c) {
        for (int d = 0; d < g.n[3]; ++d) {
          const Point4 p{g.coord(0, a), g.coord(1, b), g.coord(2, c), g.coord(3, d)};
          std::vector<double> row(p.begin(), p.end());
          for (const Complex3& v : {E(p), B(p)}) {
            for (int k = 0; k < 3; ++k) {
              row.push_back(v(k).real());
              row.push_back(v(k).imag());
            }
          }
          w.row(row);
        }
      }
    }
  }
}

std::vector<std::string> matrix_header(int n) {
  std::vector<std::string> h;
  for (int r = 1; r <= n; ++r) {
    for (int c = 1; c <= n; ++c) {
      const std::string idx = std::to_string(r) + "_" + std::to_string(c);
      h.push_back("re_" + idx);
      h.push_back("im_" + idx);
    }
  }
  return h;
}

void matrix_rows(io::CsvWriter& w, const Grid2D& g, const chiral::MatrixField& f,
                 std::optional<int> level) {
  for (int i = 0; i < g.nx; ++i) {
    for (int j = 0; j < g.nt; ++j) {
      const Point2 p{g.x(i), g.t(j)};
      std::vector<double> row;
      if (level) row.push_back(*level);
      row.push_back(p[0]);
      row.push_back(p[1]);
      const Matrix m = f(p);
      for (int r = 0; r < f.n(); ++r) {
        for (int c = 0; c < f.n(); ++c) {
          row.push_back(m(r, c).real());
          row.push_back(m(r, c).imag());
        }
      }
      w.row(row);
    }
  }
}

void matrix_csv(std::ostream& os, const Grid2D& g, const chiral::MatrixField& f) {
  std::vector<std::string> header{"x", "t"};
  for (auto& h : matrix_header(f.n())) header.push_back(h);
  io::CsvWriter w(os, header);
  matrix_rows(w, g, f, std::nullopt);
}

// ---------------------------------------------------------------------------
// Commands.

Result classic_laplace(const std::string& family, double alpha, double beta, double gamma,
                       const Grid2D& grid, bool verify) {
  Result res;
  Json& j = res.report;
  j["command"] = "classic laplace";
  j["grid"] = io::to_json(grid);
  classic::ScalarField2D u, v;
  std::vector<classic::LinearConstraint> constraints;
  if (family == "quadratic") {
    const auto pair = classic::harmonic_conjugate_match(alpha, beta, gamma);
    u = pair.u;
    v = pair.v;
    constraints = pair.constraints;
    j["family"] = family;
    j["kappa"] = pair.kappa;
    j["lambda"] = pair.lambda;
    j["mu"] = pair.mu;
  } else {
    const auto m = classic::xy_family_match(alpha, beta);
    u = m.u;
    v = m.v;
    constraints = m.constraints;
    j["family"] = family;
    j["conjugate"] = m.conjugate;
    j["trivial_only"] = m.trivial_only;
  }
  j["u"] = io::to_json(u);
  j["v"] = io::to_json(v);
  Json cs = Json::array();
  for (const auto& c : constraints) cs.push_back(io::to_json(c));
  j["constraints"] = cs;
  if (verify) {
    Checks checks;
    checks.add("laplace_u", classic::laplace_residual(u, grid), kClassicTol);
    checks.add("laplace_v", classic::laplace_residual(v, grid), kClassicTol);
    checks.add("cauchy_riemann", classic::bt_residual_cr(u, v, grid), kClassicTol);
    res.attach(checks);
  }
  res.csv = [=](std::ostream& os) { classic_csv(os, grid, u, v); };
  return res;
}

Result classic_liouville(double C, const Grid2D& grid, bool verify) {
  Result res;
  const auto u = classic::liouville_from_trivial(C);
  const classic::ScalarField2D v;
  Json& j = res.report;
  j["command"] = "classic liouville";
  j["grid"] = io::to_json(grid);
  j["u"] = io::to_json(u);
  j["v"] = io::to_json(v);
  if (verify) {
    Checks checks;
    checks.add("liouville", classic::liouville_residual(u, grid), kClassicTol);
    checks.add("free_wave", classic::free_wave_residual(v, grid), kClassicTol);
    checks.add("backlund", classic::bt_residual_liouville(u, v, grid), kClassicTol);
    res.attach(checks);
  }
  res.csv = [=](std::ostream& os) { classic_csv(os, grid, u, v); };
  return res;
}

Result classic_sine_gordon(double a, double C, const Grid2D& grid, bool verify) {
  Result res;
  const auto u = classic::sine_gordon_from_vacuum(a, C);
  const classic::ScalarField2D v;
  Json& j = res.report;
  j["command"] = "classic sine-gordon";
  j["grid"] = io::to_json(grid);
  j["u"] = io::to_json(u);
  j["v"] = io::to_json(v);
  if (verify) {
    Checks checks;
    checks.add("sine_gordon", classic::sine_gordon_residual(u, grid), kClassicTol);
    checks.add("backlund", classic::bt_residual_sine_gordon(u, v, a, grid), kClassicTol);
    res.attach(checks);
  }
  res.csv = [=](std::ostream& os) { classic_csv(os, grid, u, v); };
  return res;
}

Result em_lossless(const std::string& name, const WaveFlags& f, bool with_medium, bool verify) {
  const em::MediumParams medium = with_medium ? f.medium(0.0) : em::MediumParams::vacuum();
  const double omega = f.angular_frequency();
  const Complex3 E0 = f.amplitude();
  const Real3 tau = f.direction();
  const auto pair =
      em::conjugate_vacuum(E0 * std::polar(1.0, f.alpha), tau, omega, medium);
  const Grid4D grid = em::default_grid(pair.k, omega, f.samples, f.fd_step(), 0.0, tau);
  grid.validate();

  Result res;
  Json& j = res.report;
  j["command"] = "em " + name;
  j["medium"] = io::to_json(medium);
  j["spec"] = io::wave_spec_json(E0, tau, omega, f.alpha);
  j["k"] = pair.k;
  j["wave_speed"] = medium.wave_speed();
  j["B0"] = io::complex_vector_json(pair.B0);
  j["grid"] = io::to_json(grid);
  if (verify) {
    Checks checks;
    const double kk = pair.k * pair.k;
    checks.add("maxwell", em::maxwell_residual(pair.fields(), grid, medium), kVacuumTol);
    checks.add("wave_E", em::wave_residual(pair.E, medium.wave_speed(), grid, pair.spec.E0.norm() * kk),
               kVacuumTol);
    checks.add("wave_B", em::wave_residual(pair.B, medium.wave_speed(), grid, pair.B0.norm() * kk),
               kVacuumTol);
    checks.add("amplitude_redundancy", em::amplitude_redundancy(pair), kAmplitudeTol);
    res.attach(checks);
  }
  res.csv = [=](std::ostream& os) { em_csv(os, grid, pair.E, pair.B); };
  return res;
}

Result em_conductor(const WaveFlags& f, std::optional<double> sigma,
                    std::optional<double> sigma_ratio, bool verify) {
  const double omega = f.angular_frequency();
  em::MediumParams medium = f.medium(0.0);
  if (sigma) {
    medium.sigma = *sigma;
  } else if (sigma_ratio) {
    medium.sigma = *sigma_ratio * medium.epsilon * omega;
  } else {
    throw UsageError("one of --sigma or --sigma-over-eps-omega is required");
  }
  const Complex3 E0 = f.amplitude();
  const Real3 tau = f.direction();
  const auto pair = em::conjugate_conducting(E0, tau, medium, omega, f.alpha);
  const auto& d = pair.dispersion;
  const Grid4D grid = em::default_grid(d, tau, f.samples, f.fd_step());
  grid.validate();

  Result res;
  Json& j = res.report;
  j["command"] = "em conductor";
  j["medium"] = io::to_json(medium);
  j["spec"] = io::wave_spec_json(E0, tau, omega, f.alpha);
  j["dispersion"] = io::to_json(d);
  j["phase_speed"] = d.speed();
  j["B0"] = io::complex_vector_json(pair.B0);
  j["grid"] = io::to_json(grid);
  if (verify) {
    Checks checks;
    const double kappa2 = d.k * d.k + d.s * d.s;
    const auto disp = em::dispersion_residuals(medium, d);
    checks.add("dispersion_wavenumber", disp.wavenumber_eq, kDispersionTol);
    checks.add("dispersion_attenuation", disp.attenuation_eq, kDispersionTol);
    checks.add("maxwell", em::maxwell_residual(pair.fields(), grid, medium), kConductorTol);
    checks.add("modified_wave_E",
               em::modified_wave_residual(pair.E, medium, grid, pair.E0.norm() * kappa2),
               kConductorTol);
    checks.add("modified_wave_B",
               em::modified_wave_residual(pair.B, medium, grid, pair.B0.norm() * kappa2),
               kConductorTol);
    checks.add("amplitude_redundancy", em::ampere_amplitude_residual(pair), kDispersionTol);
    res.attach(checks);
  }
  res.csv = [=](std::ostream& os) { em_csv(os, grid, pair.E, pair.B); };
  return res;
}

Result chiral_residual_cmd(const MatrixFlags& m, const Grid2D& grid, bool verify) {
  const auto g = m.seed();
  Result res;
  Json& j = res.report;
  j["command"] = "chiral residual";
  j["grid"] = io::to_json(grid);
  j["g"] = io::to_json(g);
  const auto report = chiral::chiral_residual(g, grid);
  j["chiral_residual"] = io::to_json(report);
  if (verify) {
    Checks checks;
    checks.add("chiral", report, kChiralTol);
    res.attach(checks);
  }
  res.csv = [=](std::ostream& os) { matrix_csv(os, grid, g); };
  return res;
}

Result chiral_potential_cmd(const MatrixFlags& m, const Grid2D& grid, bool verify) {
  const auto g = m.seed();
  const Matrix base = parse_matrix(m.base_re, m.base_im, "base", g.n());
  if (base.rows() != g.n()) throw UsageError("--base must match the size of A");
  chiral::ChiralOptions options;
  options.nodes = m.nodes;
  const auto pot = chiral::potential(g, grid, base, options);

  Result res;
  Json& j = res.report;
  j["command"] = "chiral potential";
  j["grid"] = io::to_json(grid);
  j["g"] = io::to_json(g);
  j["integration"] = io::to_json(pot.integration);
  j["X"] = io::to_json(pot.X);
  if (verify) {
    Checks checks;
    checks.add("potential", chiral::potential_residual(pot.X, g, grid), kChiralTol);
    res.attach(checks);
  }
  res.csv = [=](std::ostream& os) { matrix_csv(os, grid, pot.X); };
  return res;
}

Result chiral_hierarchy_cmd(const MatrixFlags& m, const Grid2D& grid, bool verify) {
  const auto g = m.seed();
  const Matrix M = parse_matrix(m.m_re, m.m_im, "M", g.n());
  if (M.rows() != g.n()) throw UsageError("--M must match the size of A");
  chiral::ChiralOptions options;
  options.nodes = m.nodes;
  const auto levels = chiral::hierarchy(g, M, m.levels, grid, options);

  Result res;
  Json& j = res.report;
  j["command"] = "chiral hierarchy";
  j["grid"] = io::to_json(grid);
  j["g"] = io::to_json(g);
  j["M"] = io::to_json(M);
  Json arr = Json::array();
  Checks checks;
  for (const auto& c : levels) {
    Json e;
    e["level"] = c.level;
    e["symmetry_residual"] = io::to_json(c.symmetry);
    e["integration"] = io::to_json(c.integration);
    e["degree"] = chiral::polynomial_degree(c.phi, grid);
    arr.push_back(e);
    checks.add("symmetry_level_" + std::to_string(c.level), c.symmetry, kSymmetryTol);
  }
  j["levels"] = arr;
  if (verify) res.attach(checks);
  res.csv = [=](std::ostream& os) {
    std::vector<std::string> header{"level", "x", "t"};
    for (auto& h : matrix_header(g.n())) header.push_back(h);
    io::CsvWriter w(os, header);
    for (const auto& c : levels) matrix_rows(w, grid, c.phi, c.level);
  };
  return res;
}

// ---------------------------------------------------------------------------

void write_to(const std::string& path, std::ostream& fallback,
              const std::function<void(std::ostream&)>& body) {
  if (path.empty() || path == "-") {
    body(fallback);
    return;
  }
  std::ofstream file(path);
  if (!file) throw UsageError("cannot write output file '" + path + "'");
  body(file);
  if (!file) throw UsageError("error while writing '" + path + "'");
}

int emit(const Result& res, const OutputFlags& o, std::ostream& out) {
  if (o.format == "json" || o.format == "both") {
    write_to(o.json_path, out, [&](std::ostream& os) { os << io::dump(res.report); });
  }
  if (o.format == "csv" || o.format == "both") write_to(o.csv_path, out, res.csv);
  return res.verified && !res.passed ? kExitVerification : kExitOk;
}

int run_verify_file(const std::string& path, std::ostream& out, std::ostream& err,
                    const OutputFlags& o) {
  std::ifstream file(path);
  if (!file) throw UsageError("cannot read spec file '" + path + "'");
  Json spec;
  try {
    spec = Json::parse(file);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError("spec file '" + path + "' is not valid JSON: " + e.what());
  }
  if (!spec.is_object() || !spec.contains("checks") || !spec["checks"].is_array()) {
    throw UsageError("spec file must be an object with a \"checks\" array");
  }

  Json results = Json::array();
  int worst = kExitOk;
  auto severity = [](int code) {
    return code == kExitUsage ? 3 : code == kExitPrecondition ? 2 : code == kExitVerification ? 1 : 0;
  };
  for (const auto& check : spec["checks"]) {
    if (!check.is_object() || !check.contains("args") || !check["args"].is_array()) {
      throw UsageError("each check needs an \"args\" array of strings");
    }
    std::vector<std::string> args;
    for (const auto& a : check["args"]) {
      if (!a.is_string()) throw UsageError("check arguments must be strings");
      args.push_back(a.get<std::string>());
    }
    if (!args.empty() && args.front() == "verify") {
      throw UsageError("spec files cannot nest the verify command");
    }
    args.push_back("--verify");
    std::ostringstream sub_out, sub_err;
    const int code = run(args, sub_out, sub_err);

    Json r;
    r["name"] = check.contains("name") ? check["name"] : Json(nullptr);
    r["args"] = check["args"];
    r["exit_code"] = code;
    if (code == kExitOk || code == kExitVerification) {
      try {
        r["report"] = Json::parse(sub_out.str());
      } catch (const nlohmann::json::parse_error&) {
        r["output"] = sub_out.str();
      }
    } else {
      r["error"] = sub_err.str();
    }
    results.push_back(r);
    if (severity(code) > severity(worst)) worst = code;
  }
  Json j;
  j["command"] = "verify";
  j["spec_file"] = path;
  j["passed"] = worst == kExitOk;
  j["checks"] = results;
  write_to(o.json_path, out, [&](std::ostream& os) { os << io::dump(j); });
  if (worst != kExitOk) err << "verify: " << path << ": one or more checks failed\n";
  return worst;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Backlund transformation toolkit", "btkit"};
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);

  OutputFlags output;
  GridFlags grid_flags;
  WaveFlags wave;
  MatrixFlags mat;
  std::string laplace_family = "quadratic";
  double alpha = 0.0, beta = 0.0, gamma = 0.0, C = 0.0, a = 0.0;
  std::optional<double> sigma, sigma_ratio;
  std::string spec_file;

  auto* classic = app.add_subcommand("classic", "classical Backlund transformations");
  classic->require_subcommand(1);
  auto* laplace = classic->add_subcommand("laplace", "Cauchy-Riemann conjugate matching");
  laplace->add_option("--family", laplace_family, "quadratic or xy")
      ->check(CLI::IsMember({"quadratic", "xy"}));
  laplace->add_option("--alpha", alpha)->required();
  laplace->add_option("--beta", beta)->required();
  laplace->add_option("--gamma", gamma, "quadratic family only");
  auto* liouville = classic->add_subcommand("liouville", "Liouville soliton from v = 0");
  liouville->add_option("--C", C)->required();
  auto* sine_gordon = classic->add_subcommand("sine-gordon", "sine-Gordon kink from the vacuum");
  sine_gordon->add_option("--a", a)->required();
  sine_gordon->add_option("--C", C)->required();
  for (auto* sub : {laplace, liouville, sine_gordon}) {
    grid_flags.add(sub);
    output.add(sub);
  }

  auto* em = app.add_subcommand("em", "Maxwell plane waves as conjugate solutions");
  em->require_subcommand(1);
  auto* vacuum = em->add_subcommand("vacuum", "plane wave in vacuum");
  auto* medium = em->add_subcommand("medium", "plane wave in a non-conducting medium");
  auto* conductor = em->add_subcommand("conductor", "attenuated wave in a conducting medium");
  wave.add(vacuum, false);
  wave.add(medium, true);
  wave.add(conductor, true);
  auto* s = conductor->add_option("--sigma", sigma, "conductivity, S/m");
  auto* sr = conductor->add_option("--sigma-over-eps-omega", sigma_ratio, "sigma / (epsilon omega)");
  s->excludes(sr);
  for (auto* sub : {vacuum, medium, conductor}) output.add(sub);

  auto* chiral = app.add_subcommand("chiral", "chiral field equation and recursion operator");
  chiral->require_subcommand(1);
  auto* residual = chiral->add_subcommand("residual", "chiral equation residual of exp(Ax + Bt)");
  auto* potential = chiral->add_subcommand("potential", "potential X of exp(Ax + Bt)");
  auto* hierarchy = chiral->add_subcommand("hierarchy", "symmetry hierarchy from Phi = M");
  for (auto* sub : {residual, potential, hierarchy}) {
    mat.add_seed(sub);
    grid_flags.add(sub);
    output.add(sub);
  }
  potential->add_option("--base-re", mat.base_re, "X at the anchor, real part");
  potential->add_option("--base-im", mat.base_im);
  hierarchy->add_option("--M-re", mat.m_re, "seed characteristic M, real part")->required();
  hierarchy->add_option("--M-im", mat.m_im);
  hierarchy->add_option("--levels", mat.levels, "number of recursion steps")->required();

  auto* verify = app.add_subcommand("verify", "run the checks listed in a JSON spec file");
  verify->add_option("spec-file", spec_file)->required();
  verify->add_option("--json", output.json_path, "write the JSON report here instead of stdout");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    std::optional<Result> res;
    if (laplace->parsed()) {
      res = classic_laplace(laplace_family, alpha, beta, gamma, grid_flags.grid(), output.verify);
    } else if (liouville->parsed()) {
      res = classic_liouville(C, grid_flags.grid(), output.verify);
    } else if (sine_gordon->parsed()) {
      res = classic_sine_gordon(a, C, grid_flags.grid(), output.verify);
    } else if (vacuum->parsed()) {
      res = em_lossless("vacuum", wave, false, output.verify);
    } else if (medium->parsed()) {
      res = em_lossless("medium", wave, true, output.verify);
    } else if (conductor->parsed()) {
      res = em_conductor(wave, sigma, sigma_ratio, output.verify);
    } else if (residual->parsed()) {
      res = chiral_residual_cmd(mat, grid_flags.grid(), output.verify);
    } else if (potential->parsed()) {
      res = chiral_potential_cmd(mat, grid_flags.grid(), output.verify);
    } else if (hierarchy->parsed()) {
      res = chiral_hierarchy_cmd(mat, grid_flags.grid(), output.verify);
    } else if (verify->parsed()) {
      return run_verify_file(spec_file, out, err, output);
    }
    const int code = emit(*res, output, out);
    if (code == kExitVerification) err << "verification failed: a residual exceeds its tolerance\n";
    return code;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitPrecondition;
  }
}

}  // namespace btkit::cli
