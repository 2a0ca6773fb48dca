#include "qsv/io.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "qsv/errors.hpp"
#include "qsv/pauli_string.hpp"

namespace qsv {

namespace {

using nlohmann::json;

json parse_document(const std::string& text, const char* what) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw validation_error(std::string(what) + ": malformed JSON document");
  }
  return doc;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Complex parse_complex(const json& entry, const char* what) {
  if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
      !entry[1].is_number()) {
    throw validation_error(std::string(what) + ": complex entries must be [re, im] pairs");
  }
  return {entry[0].get<double>(), entry[1].get<double>()};
}

int qubits_for_length(std::size_t length, const char* what) {
  int n = 0;
  while ((std::size_t{1} << n) < length) ++n;
  if (n == 0 || (std::size_t{1} << n) != length) {
    throw validation_error(std::string(what) + ": length must be 2^n with n >= 1");
  }
  return n;
}

Vector parse_amplitudes(const json& doc, const char* what) {
  if (!doc.contains("amplitudes") || !doc["amplitudes"].is_array()) {
    throw validation_error(std::string(what) + ": missing amplitudes array");
  }
  const auto& amps = doc["amplitudes"];
  const int n = qubits_for_length(amps.size(), what);
  Vector v(Eigen::Index{1} << n);
  for (std::size_t i = 0; i < amps.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = parse_complex(amps[i], what);
  }
  // Tolerate (and rescale) small normalization drift from serialization.
  const double norm = v.norm();
  if (std::abs(norm - 1.0) > 1e-6) {
    throw validation_error(std::string(what) + ": amplitudes are not normalized");
  }
  return v / norm;
}

int require_n(const json& doc, const char* what) {
  if (!doc.contains("n") || !doc["n"].is_number_integer()) {
    throw validation_error(std::string(what) + ": missing qubit count n");
  }
  return doc["n"].get<int>();
}

std::uint64_t seed_or_zero(const json& doc) {
  if (!doc.contains("seed")) return 0;
  if (!doc["seed"].is_number_unsigned() && !doc["seed"].is_number_integer()) {
    throw validation_error("target: seed must be an integer");
  }
  return doc["seed"].get<std::uint64_t>();
}

}  // namespace

Target parse_target_json(const std::string& text) {
  const json doc = parse_document(text, "target");
  if (!doc.contains("kind") || !doc["kind"].is_string()) {
    throw validation_error("target: missing kind");
  }
  const std::string kind = doc["kind"].get<std::string>();
  if (kind == "ghz") {
    return Target(ghz(require_n(doc, "target")).stabilizer);
  }
  if (kind == "haar") {
    return Target(haar_random(require_n(doc, "target"), seed_or_zero(doc)));
  }
  if (kind == "random-stabilizer") {
    return Target(random_stabilizer(require_n(doc, "target"), seed_or_zero(doc)));
  }
  if (kind == "dense") {
    return Target(DenseTarget{PureState(parse_amplitudes(doc, "target"))});
  }
  if (kind == "stabilizer") {
    if (!doc.contains("generators") || !doc["generators"].is_array() ||
        doc["generators"].empty()) {
      throw validation_error("target: stabilizer kind needs a generators array");
    }
    std::vector<PauliString> generators;
    for (const auto& entry : doc["generators"]) {
      if (!entry.is_string()) {
        throw validation_error("target: generators must be strings like \"+XZ\"");
      }
      generators.push_back(PauliString::from_string(entry.get<std::string>()));
    }
    return Target(StabilizerTarget(std::move(generators)));
  }
  throw validation_error("target: unknown kind \"" + kind + "\"");
}

Target load_target_json(const std::string& path) {
  return parse_target_json(read_file(path));
}

DensityOperator parse_density_json(const std::string& text) {
  const json doc = parse_document(text, "density");
  if (!doc.contains("kind") || !doc["kind"].is_string()) {
    throw validation_error("density: missing kind");
  }
  const std::string kind = doc["kind"].get<std::string>();
  if (kind == "pure") {
    return DensityOperator::from_pure(PureState(parse_amplitudes(doc, "density")));
  }
  if (kind == "density") {
    if (!doc.contains("matrix") || !doc["matrix"].is_array()) {
      throw validation_error("density: missing matrix");
    }
    const auto& rows = doc["matrix"];
    const int n = qubits_for_length(rows.size(), "density");
    const Eigen::Index dim = Eigen::Index{1} << n;
    Matrix m(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      const auto& row = rows[static_cast<std::size_t>(i)];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != dim) {
        throw validation_error("density: matrix rows must all have length 2^n");
      }
      for (Eigen::Index j = 0; j < dim; ++j) {
        m(i, j) = parse_complex(row[static_cast<std::size_t>(j)], "density");
      }
    }
    // Tolerate (and rescale) small trace drift from serialization.
    const double trace = m.trace().real();
    if (std::abs(trace - 1.0) > 1e-6) {
      throw validation_error("density: matrix trace must be 1");
    }
    return DensityOperator(Matrix(m / trace));
  }
  throw validation_error("density: unknown kind \"" + kind + "\"");
}

DensityOperator load_density_json(const std::string& path) {
  return parse_density_json(read_file(path));
}

void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows,
               const std::vector<std::string>& metadata) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    out << header[i] << (i + 1 == header.size() ? "" : ",");
  }
  out << '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size()) {
      throw validation_error("write_csv: row width differs from the header");
    }
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << row[i] << (i + 1 == row.size() ? "" : ",");
    }
    out << '\n';
  }
  for (const auto& line : metadata) out << "# " << line << '\n';
  out << "# version=" << kVersion << '\n';
}

}  // namespace qsv
