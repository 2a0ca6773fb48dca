#include "qsv/devicesim.hpp"

#include <cmath>

namespace qsv {

DeviceSource DeviceSource::exact(const PureState& target) {
  return DeviceSource(Kind::exact, DensityOperator::from_pure(target), "exact");
}

DeviceSource DeviceSource::worst_case(const PureState& target, double epsilon,
                                      const StrategyOperator& omega) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw validation_error("worst_case: epsilon outside (0,1)");
  }
  if (omega.matrix.rows() != target.dimension()) {
    throw validation_error("worst_case: strategy/target dimension mismatch");
  }
  if (omega.spectrum.eigenvalues.size() < 2) {
    throw validation_error("worst_case: one-dimensional space has no orthogonal error state");
  }
  if (omega.gap < 1e-12) {
    throw zero_gap_error("worst_case: strategy operator has no spectral gap");
  }
  // Second eigenvector of the deterministic eigensolve; re-orthogonalized
  // against the target to shed numerical dust.
  Vector v2 = omega.spectrum.eigenvectors.col(1);
  v2 -= target.amplitudes * (target.amplitudes.adjoint() * v2)(0);
  const double norm = v2.norm();
  if (norm < 1e-8) {
    throw construction_error("worst_case: second eigenvector collapsed onto the target");
  }
  v2 /= norm;
  Matrix rho = (1.0 - epsilon) * (target.amplitudes * target.amplitudes.adjoint()) +
               epsilon * (v2 * v2.adjoint());
  return DeviceSource(Kind::worst_case, DensityOperator(std::move(rho)), "worst_case");
}

DeviceSource DeviceSource::depolarized(const PureState& target, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw validation_error("depolarized: p outside [0,1]");
  const Eigen::Index dim = target.dimension();
  Matrix rho = (1.0 - p) * (target.amplitudes * target.amplitudes.adjoint()) +
               (p / static_cast<double>(dim)) * Matrix::Identity(dim, dim);
  return DeviceSource(Kind::depolarized, DensityOperator(std::move(rho)), "depolarized");
}

DeviceSource DeviceSource::fixed(DensityOperator rho, std::string description) {
  return DeviceSource(Kind::fixed, std::move(rho), std::move(description));
}

}  // namespace qsv
