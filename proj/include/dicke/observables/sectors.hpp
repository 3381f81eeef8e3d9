#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "dicke/error.hpp"
#include "dicke/quantum/operators.hpp"

namespace dicke::observables {

using quantum::OperatorMatrix;
using quantum::OperatorRole;
using quantum::QuantumBasis;

/// Eigen-decomposition of a + a^dagger on the truncated Fock space. Column k
/// of `u` is the boson eigenvector with eigenvalue x(k); q_k = x(k) / sqrt(2j).
struct QSectors {
  Eigen::MatrixXd u;
  Eigen::VectorXd x;
  double j = 0.5;

  [[nodiscard]] Eigen::VectorXd q() const { return x / std::sqrt(2.0 * j); }
};

[[nodiscard]] inline QSectors q_sectors_from_block(const Eigen::MatrixXd& boson_x, double j) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(boson_x);
  if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition of a + a^dagger failed");
  return {es.eigenvectors(), es.eigenvalues(), j};
}

[[nodiscard]] inline QSectors q_sectors(const QuantumBasis& basis) {
  return q_sectors_from_block(quantum::boson_position_block(basis), basis.j());
}

/// Sectors read off a full q operator, which acts as (boson block) (x) identity.
[[nodiscard]] inline QSectors q_sectors(const QuantumBasis& basis, const OperatorMatrix& q_op) {
  if (q_op.role != OperatorRole::q_op || static_cast<std::size_t>(q_op.dim()) != basis.dim()) {
    throw ConfigError("expected the q operator of the same basis");
  }
  const int nb = basis.boson_dim(), ns = basis.spin_dim();
  Eigen::MatrixXd block(nb, nb);
  for (int a = 0; a < nb; ++a)
    for (int b = 0; b < nb; ++b) block(a, b) = q_op.matrix(static_cast<Eigen::Index>(a) * ns, static_cast<Eigen::Index>(b) * ns);
  return q_sectors_from_block(block * std::sqrt(2.0 * basis.j()), basis.j());
}

/// Operator that is block diagonal in the q eigenbasis:
///   O = sum_t (U diag(w_t) U^T) (x) S_t.
/// Expectations cost O(nb^2 ns) per vector, so operators on large bases never
/// need to be formed densely.
struct SectorOperator {
  struct Term {
    Eigen::VectorXd w;  // one weight per q sector
    Eigen::MatrixXd s;  // spin matrix
  };
  OperatorRole role = OperatorRole::identity;
  QSectors sectors;
  std::vector<Term> terms;

  [[nodiscard]] Eigen::Index boson_dim() const { return sectors.u.rows(); }
  [[nodiscard]] Eigen::Index spin_dim() const { return terms.empty() ? 0 : terms.front().s.rows(); }

  /// Rotates v into the q eigenbasis: W(:, k) is the spin amplitude in sector k.
  [[nodiscard]] Eigen::MatrixXd to_sectors(const Eigen::Ref<const Eigen::VectorXd>& v) const {
    const Eigen::Map<const Eigen::MatrixXd> xm(v.data(), spin_dim(), boson_dim());
    return xm * sectors.u;
  }

  [[nodiscard]] double expectation(const Eigen::Ref<const Eigen::VectorXd>& v) const {
    const Eigen::MatrixXd w = to_sectors(v);
    double acc = 0.0;
    for (const auto& t : terms) acc += ((t.s * w).cwiseProduct(w).colwise().sum().transpose()).dot(t.w);
    return acc;
  }

  /// O applied to each column of v.
  [[nodiscard]] Eigen::MatrixXd apply(const Eigen::MatrixXd& v) const {
    Eigen::MatrixXd out(v.rows(), v.cols());
    for (Eigen::Index c = 0; c < v.cols(); ++c) {
      const Eigen::MatrixXd w = to_sectors(v.col(c));
      Eigen::MatrixXd y = Eigen::MatrixXd::Zero(w.rows(), w.cols());
      for (const auto& t : terms) y += (t.s * w) * t.w.asDiagonal();
      const Eigen::MatrixXd back = y * sectors.u.transpose();
      out.col(c) = Eigen::Map<const Eigen::VectorXd>(back.data(), back.size());
    }
    return out;
  }

  [[nodiscard]] OperatorMatrix dense() const {
    const Eigen::Index nb = boson_dim(), ns = spin_dim();
    OperatorMatrix out{role, Eigen::MatrixXd::Zero(nb * ns, nb * ns)};
    for (const auto& t : terms) {
      // Uniform weights give an exact multiple of the identity.
      const bool uniform = (t.w.array() == t.w(0)).all();
      const Eigen::MatrixXd a = uniform ? Eigen::MatrixXd(t.w(0) * Eigen::MatrixXd::Identity(nb, nb))
                                        : Eigen::MatrixXd(sectors.u * t.w.asDiagonal() * sectors.u.transpose());
      for (Eigen::Index r = 0; r < nb; ++r)
        for (Eigen::Index c = 0; c < nb; ++c) out.matrix.block(r * ns, c * ns, ns, ns) += a(r, c) * t.s;
    }
    out.matrix = 0.5 * (out.matrix + out.matrix.transpose()).eval();
    return out;
  }
};

/// Product of two sector operators sharing the same q eigenbasis, term by term.
[[nodiscard]] inline SectorOperator multiply(const SectorOperator& a, const SectorOperator& b, OperatorRole role) {
  SectorOperator out{role, a.sectors, {}};
  for (const auto& ta : a.terms)
    for (const auto& tb : b.terms) out.terms.push_back({ta.w.cwiseProduct(tb.w), ta.s * tb.s});
  return out;
}

}  // namespace dicke::observables
