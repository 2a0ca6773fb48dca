#pragma once

#include <string>

#include "qsv/linalg.hpp"
#include "qsv/plm.hpp"

namespace qsv {

// ============================================================================
// Device models: i.i.d. sources of the state a protocol run actually measures.
// ============================================================================

class DeviceSource {
 public:
  enum class Kind { exact, worst_case, depolarized, fixed };

  // Emits the target itself.
  static DeviceSource exact(const PureState& target);

  // (1-eps)|psi><psi| + eps|v2><v2| with v2 the second eigenvector of the
  // strategy operator: the fidelity-(1-eps) state minimizing detection,
  // reaching pass probability exactly 1 - nu*eps.
  static DeviceSource worst_case(const PureState& target, double epsilon,
                                 const StrategyOperator& omega);

  // (1-p)|psi><psi| + p I/2^n.
  static DeviceSource depolarized(const PureState& target, double p);

  // Any caller-supplied density operator (e.g. loaded from a file).
  static DeviceSource fixed(DensityOperator rho, std::string description = "fixed");

  const DensityOperator& emit() const { return state_; }
  Kind kind() const { return kind_; }
  const std::string& description() const { return description_; }

 private:
  DeviceSource(Kind kind, DensityOperator state, std::string description)
      : kind_(kind), state_(std::move(state)), description_(std::move(description)) {}

  Kind kind_;
  DensityOperator state_;
  std::string description_;
};

}  // namespace qsv
