#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "qsv/errors.hpp"
#include "qsv/io.hpp"
#include "qsv/linalg.hpp"
#include "qsv/target.hpp"

using namespace qsv;

namespace {

double state_distance(const PureState& a, const PureState& b) {
  // Phase-insensitive: 1 - |<a|b>| is zero iff the states match up to phase.
  return 1.0 - std::abs(a.amplitudes.dot(b.amplitudes));
}

// Write `text` to a throwaway file and return its path.
std::string scratch_file(const std::string& name, const std::string& text) {
  const std::string path = "io_scratch_" + name;
  std::ofstream out(path);
  out << text;
  return path;
}

}  // namespace

TEST_CASE("target JSON: generated families match their library constructors") {
  const Target g = parse_target_json(R"({"kind": "ghz", "n": 3})");
  CHECK(target_qubits(g) == 3);
  CHECK(std::holds_alternative<StabilizerTarget>(g));
  CHECK(state_distance(target_to_dense(g), ghz(3).dense.state) < 1e-12);

  const Target h = parse_target_json(R"({"kind": "haar", "n": 3, "seed": 7})");
  CHECK(std::holds_alternative<DenseTarget>(h));
  CHECK(state_distance(target_to_dense(h), haar_random(3, 7).state) < 1e-12);

  const Target r = parse_target_json(R"({"kind": "random-stabilizer", "n": 4, "seed": 9})");
  CHECK(std::holds_alternative<StabilizerTarget>(r));
  CHECK(state_distance(target_to_dense(r),
                       target_to_dense(Target(random_stabilizer(4, 9)))) < 1e-12);

  // Seed defaults to zero when absent.
  const Target h0 = parse_target_json(R"({"kind": "haar", "n": 2})");
  CHECK(state_distance(target_to_dense(h0), haar_random(2, 0).state) < 1e-12);
}

TEST_CASE("target JSON: dense amplitudes round-trip") {
  const double s = 1.0 / std::sqrt(2.0);
  std::ostringstream doc;
  doc << R"({"kind": "dense", "amplitudes": [[)" << s << R"(, 0], [0, 0], [0, 0], [)"
      << s << R"(, 0]]})";
  const Target t = parse_target_json(doc.str());
  CHECK(target_qubits(t) == 2);
  CHECK(state_distance(target_to_dense(t), ghz(2).dense.state) < 1e-12);
}

TEST_CASE("target JSON: small normalization drift is rescaled, large drift rejected") {
  const double s = (1.0 + 4e-7) / std::sqrt(2.0);
  std::ostringstream drifted;
  drifted << R"({"kind": "dense", "amplitudes": [[)" << s << R"(, 0], [0, 0], [0, 0], [)"
          << s << R"(, 0]]})";
  const PureState psi = target_to_dense(parse_target_json(drifted.str()));
  CHECK(psi.amplitudes.norm() == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(
      parse_target_json(R"({"kind": "dense", "amplitudes": [[0.9, 0], [0, 0]]})"),
      validation_error);
}

TEST_CASE("target JSON: stabilizer generators with signs") {
  const Target bell =
      parse_target_json(R"({"kind": "stabilizer", "generators": ["+XX", "+ZZ"]})");
  CHECK(state_distance(target_to_dense(bell), ghz(2).dense.state) < 1e-12);

  // {XX, -YY} generates the same group, hence the same state.
  const Target bell2 =
      parse_target_json(R"({"kind": "stabilizer", "generators": ["XX", "-YY"]})");
  CHECK(state_distance(target_to_dense(bell2), ghz(2).dense.state) < 1e-12);

  // |1> is stabilized by -Z.
  const Target one = parse_target_json(R"({"kind": "stabilizer", "generators": ["-Z"]})");
  CHECK(state_distance(target_to_dense(one), PureState::basis_state(1, 1)) < 1e-12);
}

TEST_CASE("target JSON: malformed documents are rejected") {
  CHECK_THROWS_AS(parse_target_json("{"), validation_error);
  CHECK_THROWS_AS(parse_target_json("[1, 2]"), validation_error);
  CHECK_THROWS_AS(parse_target_json(R"({"n": 3})"), validation_error);
  CHECK_THROWS_AS(parse_target_json(R"({"kind": "w-state", "n": 3})"), validation_error);
  CHECK_THROWS_AS(parse_target_json(R"({"kind": "ghz"})"), validation_error);
  CHECK_THROWS_AS(parse_target_json(R"({"kind": "haar", "n": 2, "seed": "x"})"),
                  validation_error);
  CHECK_THROWS_AS(parse_target_json(R"({"kind": "stabilizer", "generators": []})"),
                  validation_error);
  CHECK_THROWS_AS(parse_target_json(R"({"kind": "stabilizer", "generators": [3]})"),
                  validation_error);
  // Length 3 is not a power of two; length 1 has no qubits.
  CHECK_THROWS_AS(
      parse_target_json(R"({"kind": "dense", "amplitudes": [[1,0],[0,0],[0,0]]})"),
      validation_error);
  CHECK_THROWS_AS(parse_target_json(R"({"kind": "dense", "amplitudes": [[1,0]]})"),
                  validation_error);
  // Complex entries must be [re, im] pairs.
  CHECK_THROWS_AS(parse_target_json(R"({"kind": "dense", "amplitudes": [1, 0]})"),
                  validation_error);
}

TEST_CASE("density JSON: pure and mixed documents") {
  const double s = 1.0 / std::sqrt(2.0);
  std::ostringstream pure;
  pure << R"({"kind": "pure", "amplitudes": [[)" << s << R"(, 0], [0, )" << s << R"(]]})";
  const DensityOperator rho = parse_density_json(pure.str());
  CHECK(rho.n == 1);
  CHECK(std::abs(rho.matrix(0, 0).real() - 0.5) < 1e-12);
  CHECK(std::abs(rho.matrix(0, 1) - Complex(0.0, -0.5)) < 1e-12);

  const DensityOperator mixed = parse_density_json(
      R"({"kind": "density", "matrix": [[[0.5, 0], [0, 0]], [[0, 0], [0.5, 0]]]})");
  CHECK(mixed.n == 1);
  CHECK(std::abs(mixed.matrix(0, 0).real() - 0.5) < 1e-12);
  CHECK(std::abs(mixed.matrix(1, 0)) < 1e-12);
}

TEST_CASE("density JSON: trace drift tolerance and validation") {
  const DensityOperator drifted = parse_density_json(
      R"({"kind": "density", "matrix": [[[0.5000002, 0], [0, 0]], [[0, 0], [0.5, 0]]]})");
  CHECK(std::abs(drifted.matrix.trace().real() - 1.0) < 1e-12);

  CHECK_THROWS_AS(parse_density_json(
                      R"({"kind": "density", "matrix": [[[0.9, 0], [0, 0]], [[0, 0], [0.9, 0]]]})"),
                  validation_error);
  CHECK_THROWS_AS(parse_density_json(R"({"kind": "density"})"), validation_error);
  CHECK_THROWS_AS(parse_density_json(
                      R"({"kind": "density", "matrix": [[[1, 0]], [[0, 0], [0, 0]]]})"),
                  validation_error);
  CHECK_THROWS_AS(parse_density_json(R"({"kind": "channel"})"), validation_error);
  CHECK_THROWS_AS(parse_density_json("not json"), validation_error);
  // Non-Hermitian and non-PSD matrices fail the DensityOperator invariants.
  CHECK_THROWS_AS(parse_density_json(
                      R"({"kind": "density", "matrix": [[[0.5, 0], [1, 0]], [[0, 0], [0.5, 0]]]})"),
                  std::exception);
}

TEST_CASE("file loaders round-trip through disk") {
  const std::string target_path =
      scratch_file("target.json", R"({"kind": "ghz", "n": 3})");
  const Target t = load_target_json(target_path);
  CHECK(state_distance(target_to_dense(t), ghz(3).dense.state) < 1e-12);
  std::remove(target_path.c_str());

  const std::string density_path = scratch_file(
      "density.json",
      R"({"kind": "density", "matrix": [[[0.5, 0], [0, 0]], [[0, 0], [0.5, 0]]]})");
  const DensityOperator rho = load_density_json(density_path);
  CHECK(rho.n == 1);
  std::remove(density_path.c_str());

  CHECK_THROWS_AS(load_target_json("definitely_missing_file.json"), validation_error);
  CHECK_THROWS_AS(load_density_json("definitely_missing_file.json"), validation_error);
}

TEST_CASE("write_csv emits header, rows, and a trailing metadata block") {
  std::ostringstream out;
  write_csv(out, {"a", "b"}, {{"1", "2"}, {"3", "4"}}, {"seed=5"});
  const std::string expected =
      "a,b\n"
      "1,2\n"
      "3,4\n"
      "# seed=5\n"
      "# version=" + std::string(kVersion) + "\n";
  CHECK(out.str() == expected);

  std::ostringstream bad;
  CHECK_THROWS_AS(write_csv(bad, {"a", "b"}, {{"1"}}, {}), validation_error);
}
