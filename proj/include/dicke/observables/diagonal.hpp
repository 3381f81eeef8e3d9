#pragma once

#include <Eigen/Dense>

#include "dicke/quantum/operators.hpp"

namespace dicke::observables {

/// Operator that is diagonal in the product basis (number, Jz, parity),
/// stored as its diagonal only.
struct DiagonalOperator {
  quantum::OperatorRole role = quantum::OperatorRole::identity;
  Eigen::VectorXd diag;

  [[nodiscard]] double expectation(const Eigen::Ref<const Eigen::VectorXd>& v) const {
    return v.cwiseAbs2().dot(diag);
  }
  [[nodiscard]] Eigen::MatrixXd apply(const Eigen::MatrixXd& v) const { return diag.asDiagonal() * v; }
};

[[nodiscard]] inline DiagonalOperator diagonal_operator(quantum::OperatorRole role, const quantum::QuantumBasis& basis) {
  using quantum::OperatorRole;
  const auto d = static_cast<Eigen::Index>(basis.dim());
  DiagonalOperator op{role, Eigen::VectorXd(d)};
  for (Eigen::Index i = 0; i < d; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    switch (role) {
      case OperatorRole::number: op.diag(i) = basis.n_of(idx); break;
      case OperatorRole::jz: op.diag(i) = basis.m_of(idx); break;
      case OperatorRole::parity: op.diag(i) = (basis.n_of(idx) + basis.k_of(idx)) % 2 == 0 ? 1.0 : -1.0; break;
      case OperatorRole::identity: op.diag(i) = 1.0; break;
      default: throw ConfigError("operator '" + quantum::to_string(role) + "' is not diagonal in the product basis");
    }
  }
  return op;
}

}  // namespace dicke::observables
