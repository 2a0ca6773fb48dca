#include "qsv/plm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qsv {

namespace {

constexpr double kProjectorTol = 1e-10;
constexpr double kProbabilitySumTol = 1e-10;
constexpr double kEigenvalueSlack = 1e-9;
constexpr double kFixationTol = 1e-8;

}  // namespace

BinaryTest::BinaryTest(Matrix projector, double probability_)
    : pass_projector(std::move(projector)), probability(probability_) {
  if (pass_projector.rows() != pass_projector.cols()) {
    throw validation_error("BinaryTest: projector must be square");
  }
  if (probability < 0.0) throw validation_error("BinaryTest: negative probability");
  if ((pass_projector - pass_projector.adjoint()).cwiseAbs().maxCoeff() > kProjectorTol) {
    throw validation_error("BinaryTest: pass condition is not Hermitian");
  }
  if ((pass_projector * pass_projector - pass_projector).cwiseAbs().maxCoeff() > kProjectorTol) {
    throw validation_error("BinaryTest: pass condition is not idempotent");
  }
}

StrategyOperator StrategyOperator::build(Matrix omega, const PureState& target,
                                         StrategyKind kind) {
  if (omega.rows() != omega.cols() || omega.rows() != target.dimension()) {
    throw construction_error("StrategyOperator: dimension mismatch with target");
  }
  const Vector fixed = omega * target.amplitudes;
  if ((fixed - target.amplitudes).cwiseAbs().maxCoeff() > kFixationTol) {
    throw construction_error("StrategyOperator: operator does not fix the target state");
  }
  StrategyOperator out;
  out.kind = kind;
  out.spectrum = hermitian_eig(omega);
  if (out.spectrum.eigenvalues.minCoeff() < -kEigenvalueSlack ||
      out.spectrum.eigenvalues.maxCoeff() > 1.0 + kEigenvalueSlack) {
    throw construction_error("StrategyOperator: spectrum leaves [0, 1] beyond slack");
  }
  out.matrix = std::move(omega);
  out.gap = spectral_gap(out.spectrum);
  return out;
}

StrategyOperator build_strategy(const std::vector<BinaryTest>& tests, const PureState& target) {
  if (tests.empty()) throw validation_error("build_strategy: no tests");
  double total = 0.0;
  for (const BinaryTest& t : tests) total += t.probability;
  if (std::abs(total - 1.0) > kProbabilitySumTol) {
    throw validation_error("build_strategy: probabilities sum to " + std::to_string(total));
  }
  Matrix omega = Matrix::Zero(tests.front().pass_projector.rows(),
                              tests.front().pass_projector.cols());
  for (const BinaryTest& t : tests) {
    if (t.pass_projector.rows() != omega.rows()) {
      throw validation_error("build_strategy: mixed test dimensions");
    }
    const Vector fixed = t.pass_projector * target.amplitudes;
    if ((fixed - target.amplitudes).cwiseAbs().maxCoeff() > kFixationTol) {
      throw construction_error("build_strategy: a test does not pass the target with certainty");
    }
    omega += t.probability * t.pass_projector;
  }
  return StrategyOperator::build(std::move(omega), target, StrategyKind::plm);
}

PlmVerdict plm_run(const DensityOperator& rho, long long n_states,
                   const std::vector<BinaryTest>& tests, RngStream& rng) {
  if (n_states < 1) throw validation_error("plm_run: need at least one state");
  if (tests.empty()) throw validation_error("plm_run: no tests");
  std::vector<double> cumulative;
  cumulative.reserve(tests.size());
  double acc = 0.0;
  for (const BinaryTest& t : tests) {
    acc += t.probability;
    cumulative.push_back(acc);
  }
  PlmVerdict verdict;
  for (long long i = 0; i < n_states; ++i) {
    const int j =
        rng.categorical_from_cumulative(cumulative.data(), static_cast<int>(cumulative.size()));
    const double pass =
        std::clamp((tests[j].pass_projector * rho.matrix).trace().real(), 0.0, 1.0);
    if (rng.uniform() >= pass) {
      verdict.accepted = false;
      verdict.tests_run = i + 1;
      return verdict;
    }
  }
  verdict.accepted = true;
  verdict.tests_run = n_states;
  return verdict;
}

long long plm_sample_complexity(double epsilon, double delta, double nu) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw validation_error("plm: epsilon outside (0,1)");
  if (!(delta > 0.0 && delta < 1.0)) throw validation_error("plm: delta outside (0,1)");
  if (!(nu >= 0.0 && nu <= 1.0)) throw validation_error("plm: nu outside [0,1]");
  if (nu == 0.0) throw zero_gap_error("plm_sample_complexity: nu = 0");
  const double n = std::log(delta) / std::log(1.0 - nu * epsilon);
  const long long count = static_cast<long long>(std::ceil(n));
  return count > 0 ? count : 1;
}

}  // namespace qsv
