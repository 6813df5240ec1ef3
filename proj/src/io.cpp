#include "btkit/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <variant>

namespace btkit::io {

namespace {

void write(std::ostringstream& out, const Json& j, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(indent * depth), ' ');
  switch (j.type()) {
    case Json::value_t::number_float:
      out << format_double(j.get<double>());
      return;
    case Json::value_t::array: {
      if (j.empty()) {
        out << "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
      out << '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out << (flat ? ", " : ",");
        if (!flat) out << '\n' << pad;
        write(out, e, indent, depth + 1);
        first = false;
      }
      if (!flat) out << '\n' << close;
      out << ']';
      return;
    }
    case Json::value_t::object: {
      if (j.empty()) {
        out << "{}";
        return;
      }
      out << '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out << ',';
        out << '\n' << pad << Json(it.key()).dump() << ": ";
        write(out, it.value(), indent, depth + 1);
        first = false;
      }
      out << '\n' << close << '}';
      return;
    }
    default:
      out << j.dump();
  }
}

Json vec3(const Real3& v) { return Json::array({v(0), v(1), v(2)}); }

}  // namespace

std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string dump(const Json& j, int indent) {
  std::ostringstream out;
  write(out, j, indent, 0);
  out << '\n';
  return out.str();
}

Json to_json(const ResidualReport& r) {
  Json j;
  j["max_abs"] = r.max_abs;
  j["rms"] = r.rms;
  j["n_points"] = r.n_points;
  j["worst_point"] = r.worst_point;
  j["n_singular"] = r.n_singular;
  return j;
}

Json to_json(const Grid2D& g) {
  Json j;
  j["x_min"] = g.x_min;
  j["x_max"] = g.x_max;
  j["t_min"] = g.t_min;
  j["t_max"] = g.t_max;
  j["nx"] = g.nx;
  j["nt"] = g.nt;
  j["h"] = g.h;
  return j;
}

Json to_json(const Grid4D& g) {
  Json j;
  j["lo"] = g.lo;
  j["hi"] = g.hi;
  j["n"] = g.n;
  j["h"] = g.h;
  return j;
}

Json to_json(const classic::ScalarField2D& f) {
  Json params = Json::object();
  for (const auto& [name, value] : f.params()) params[name] = value;
  Json j;
  j["family"] = f.family_name();
  j["params"] = params;
  return j;
}

Json to_json(const classic::LinearConstraint& c) {
  Json j;
  j["equation"] = c.equation;
  j["monomial"] = c.monomial;
  Json coeffs = Json::object();
  for (const auto& [name, value] : c.coeffs) coeffs[name] = value;
  j["coeffs"] = coeffs;
  j["constant"] = c.constant;
  j["text"] = c.to_string();
  return j;
}

Json to_json(const em::MediumParams& m) {
  Json j;
  j["epsilon"] = m.epsilon;
  j["mu"] = m.mu;
  j["sigma"] = m.sigma;
  return j;
}

Json to_json(const em::DispersionSolution& d) {
  Json j;
  j["k"] = d.k;
  j["s"] = d.s;
  j["phi"] = d.phi;
  j["omega"] = d.omega;
  const auto depth = d.skin_depth();
  j["skin_depth"] = depth ? Json(*depth) : Json(nullptr);
  return j;
}

Json wave_spec_json(const Complex3& E0, const Real3& tau, double omega, double alpha) {
  Json j;
  j["E0_re"] = vec3(E0.real());
  j["E0_im"] = vec3(E0.imag());
  j["tau"] = vec3(tau);
  j["omega"] = omega;
  j["alpha"] = alpha;
  return j;
}

Json complex_vector_json(const Complex3& v) {
  Json j;
  j["re"] = vec3(v.real());
  j["im"] = vec3(v.imag());
  return j;
}

Json to_json(const chiral::Matrix& m) {
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json rr = Json::array(), ri = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ri.push_back(m(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ri);
  }
  Json j;
  j["re"] = re;
  j["im"] = im;
  return j;
}

Json to_json(const chiral::MatrixField& f) {
  Json j;
  j["n"] = f.n();
  j["family"] = f.family_name();
  struct Visitor {
    Json& j;
    void operator()(const chiral::ExpSeed& e) const {
      j["params"] = Json{{"A", to_json(e.A)}, {"B", to_json(e.B)}};
    }
    void operator()(const chiral::Constant& c) const { j["params"] = Json{{"M", to_json(c.M)}}; }
    void operator()(const chiral::Tabulated& t) const {
      const auto& table = *t.table;
      Json samples;
      samples["x_nodes"] = table.x_nodes();
      samples["t_nodes"] = table.t_nodes();
      Json values = Json::array();  // values[i][j] = sample at (x_i, t_j)
      for (int i = 0; i < table.nx(); ++i) {
        Json col = Json::array();
        for (int k = 0; k < table.nt(); ++k) col.push_back(to_json(table.sample(i, k)));
        values.push_back(col);
      }
      samples["values"] = values;
      j["samples"] = samples;
    }
  };
  std::visit(Visitor{j}, f.family());
  return j;
}

Json to_json(const chiral::IntegrationReport& r) {
  Json j;
  j["disagreement"] = r.disagreement;
  j["integrand_scale"] = r.integrand_scale;
  j["diameter"] = r.diameter;
  j["relative"] = r.relative();
  return j;
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header)
    : out_(out), columns_(header.size()) {
  for (std::size_t c = 0; c < header.size(); ++c) out_ << (c ? "," : "") << header[c];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != columns_) throw InvalidParameterError("CSV row has the wrong column count");
  for (std::size_t c = 0; c < values.size(); ++c) {
    out_ << (c ? "," : "") << (std::isfinite(values[c]) ? format_double(values[c]) : "nan");
  }
  out_ << '\n';
}

}  // namespace btkit::io
