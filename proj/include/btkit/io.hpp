#pragma once

// JSON and CSV serialization. Floats are printed with 17 significant digits
// and a '.' decimal point independent of the locale, so identical inputs
// give byte-identical output.

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "btkit/chiral_recursion.hpp"
#include "btkit/classic_bts.hpp"
#include "btkit/maxwell_conductor.hpp"
#include "btkit/maxwell_vacuum.hpp"
#include "btkit/verify.hpp"

namespace btkit::io {

using Json = nlohmann::ordered_json;

/// 17 significant digits; "null" for non-finite values.
std::string format_double(double v);

/// Pretty-printed JSON with format_double for every float.
std::string dump(const Json& j, int indent = 2);

Json to_json(const ResidualReport& r);
Json to_json(const Grid2D& g);
Json to_json(const Grid4D& g);
Json to_json(const classic::ScalarField2D& f);
Json to_json(const classic::LinearConstraint& c);
Json to_json(const em::MediumParams& m);
Json to_json(const em::DispersionSolution& d);
/// {"E0_re": [..], "E0_im": [..], "tau": [..], "omega": .., "alpha": ..}
Json wave_spec_json(const Complex3& E0, const Real3& tau, double omega, double alpha);
Json complex_vector_json(const Complex3& v);  // {"re": [..], "im": [..]}
Json to_json(const chiral::Matrix& m);          // {"re": [[..]], "im": [[..]]}
/// {"n", "family", "params"} for ExpSeed and Constant, {"n", "family", "samples"} for Tabulated.
Json to_json(const chiral::MatrixField& f);
Json to_json(const chiral::IntegrationReport& r);

class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& header);
  void row(const std::vector<double>& values);

 private:
  std::ostream& out_;
  std::size_t columns_;
};

}  // namespace btkit::io
