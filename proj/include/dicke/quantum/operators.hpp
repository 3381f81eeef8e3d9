#pragma once

#include <cmath>
#include <cstddef>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "dicke/model.hpp"
#include "dicke/quantum/basis.hpp"

namespace dicke::quantum {

/// jy is listed for completeness: it is imaginary in this basis and no
/// real-symmetric builder exists for it.
enum class OperatorRole { hamiltonian, number, jz, jx, jy, q_op, parity, C, jzprime, jzprime_squared, identity };

inline std::string to_string(OperatorRole r) {
  switch (r) {
    case OperatorRole::hamiltonian: return "hamiltonian";
    case OperatorRole::number: return "number";
    case OperatorRole::jz: return "jz";
    case OperatorRole::jx: return "jx";
    case OperatorRole::jy: return "jy";
    case OperatorRole::q_op: return "q";
    case OperatorRole::parity: return "parity";
    case OperatorRole::C: return "C";
    case OperatorRole::jzprime: return "jzprime";
    case OperatorRole::jzprime_squared: return "jzprime_squared";
    case OperatorRole::identity: return "identity";
  }
  return "unknown";
}

/// Dense real symmetric operator on a QuantumBasis.
struct OperatorMatrix {
  OperatorRole role = OperatorRole::identity;
  Eigen::MatrixXd matrix;

  [[nodiscard]] Eigen::Index dim() const { return matrix.rows(); }

  /// <v|O|v> for a real vector.
  [[nodiscard]] double expectation(const Eigen::Ref<const Eigen::VectorXd>& v) const {
    return v.dot(matrix * v);
  }
};

/// How the parity-breaking field term scales with system size.
///
/// `semiclassical` uses alpha sqrt(omega0 j) (a + a^dagger); its coherent-state
/// expectation divided by omega0 j reproduces the sqrt(2/omega0) alpha q term of
/// the classical energy surface at every j. `literal` uses the prefactor
/// sqrt(N/(omega0 j)) = sqrt(2/omega0) as printed, whose reduced contribution
/// vanishes like 1/sqrt(j).
enum class AlphaConvention { semiclassical, literal };

struct HamiltonianOptions {
  AlphaConvention alpha_convention = AlphaConvention::semiclassical;
  std::size_t memory_budget_bytes = std::size_t{3} << 30;
};

[[nodiscard]] inline double field_prefactor(const ModelParams& p, AlphaConvention conv) {
  if (conv == AlphaConvention::literal) return std::sqrt(p.atom_number() / (p.omega0 * p.j)) * p.alpha;
  return std::sqrt(p.omega0 * p.j) * p.alpha;
}

/// Visits the upper triangle (row <= col) of the Hamiltonian
/// H = omega a^dag a + omega0 Jz + (2 lambda / sqrt N) Jx (a^dag + a) + f (a^dag + a).
template <class Visit>
void for_each_hamiltonian_element(const ModelParams& p, const QuantumBasis& basis, Visit&& visit,
                                  AlphaConvention conv = AlphaConvention::semiclassical) {
  const int nb = basis.boson_dim();
  const int ns = basis.spin_dim();
  const double g = 2.0 * p.lambda / std::sqrt(p.atom_number());
  const double f = field_prefactor(p, conv);
  for (int n = 0; n < nb; ++n) {
    const double sq = std::sqrt(static_cast<double>(n + 1));
    for (int k = 0; k < ns; ++k) {
      const std::size_t row = basis.index(n, k);
      visit(row, row, p.omega * n + p.omega0 * basis.m(k));
      if (n + 1 >= nb) continue;
      // (n, m) -> (n+1, m-1) from a^dag J-, and (n, m) -> (n+1, m+1) from a^dag J+.
      if (k > 0) visit(row, basis.index(n + 1, k - 1), 0.5 * g * sq * basis.jplus(k - 1));
      if (f != 0.0) visit(row, basis.index(n + 1, k), f * sq);
      if (k + 1 < ns) visit(row, basis.index(n + 1, k + 1), 0.5 * g * sq * basis.jplus(k));
    }
  }
}

inline void check_dense_budget(const QuantumBasis& basis, std::size_t budget, const char* what) {
  const double bytes = static_cast<double>(basis.dim()) * static_cast<double>(basis.dim()) * sizeof(double);
  if (bytes > static_cast<double>(budget)) {
    std::ostringstream os;
    os << what << ": dense " << basis.dim() << "x" << basis.dim() << " matrix needs " << bytes / (1 << 20)
       << " MiB, above the memory budget of " << budget / (1 << 20) << " MiB";
    throw NumericalError(os.str());
  }
}

[[nodiscard]] inline OperatorMatrix build_hamiltonian(const ModelParams& params, const QuantumBasis& basis,
                                                      const HamiltonianOptions& opt = {}) {
  params.validate();
  check_dense_budget(basis, opt.memory_budget_bytes, "build_hamiltonian");
  const auto d = static_cast<Eigen::Index>(basis.dim());
  OperatorMatrix h{OperatorRole::hamiltonian, Eigen::MatrixXd::Zero(d, d)};
  for_each_hamiltonian_element(
      params, basis,
      [&](std::size_t r, std::size_t c, double v) {
        h.matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
        h.matrix(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(r)) = v;
      },
      opt.alpha_convention);
  return h;
}

/// y = H x without forming H.
inline void apply_hamiltonian(const ModelParams& params, const QuantumBasis& basis,
                              const Eigen::Ref<const Eigen::VectorXd>& x, Eigen::Ref<Eigen::VectorXd> y,
                              AlphaConvention conv = AlphaConvention::semiclassical) {
  y.setZero();
  for_each_hamiltonian_element(
      params, basis,
      [&](std::size_t r, std::size_t c, double v) {
        const auto ri = static_cast<Eigen::Index>(r), ci = static_cast<Eigen::Index>(c);
        y(ri) += v * x(ci);
        if (r != c) y(ci) += v * x(ri);
      },
      conv);
}

namespace detail {

/// A (x) B with the boson factor A acting on n and the spin factor B on m.
inline Eigen::MatrixXd kron(const Eigen::MatrixXd& boson, const Eigen::MatrixXd& spin) {
  const Eigen::Index nb = boson.rows(), ns = spin.rows();
  Eigen::MatrixXd out(nb * ns, nb * ns);
  for (Eigen::Index a = 0; a < nb; ++a)
    for (Eigen::Index b = 0; b < nb; ++b) out.block(a * ns, b * ns, ns, ns) = boson(a, b) * spin;
  return out;
}

}  // namespace detail

/// a + a^dagger restricted to the Fock cutoff.
[[nodiscard]] inline Eigen::MatrixXd boson_position_block(const QuantumBasis& basis) {
  const int nb = basis.boson_dim();
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(nb, nb);
  for (int n = 0; n + 1 < nb; ++n) x(n, n + 1) = x(n + 1, n) = std::sqrt(static_cast<double>(n + 1));
  return x;
}

[[nodiscard]] inline Eigen::MatrixXd spin_jz_block(const QuantumBasis& basis) {
  Eigen::MatrixXd jz = Eigen::MatrixXd::Zero(basis.spin_dim(), basis.spin_dim());
  for (int k = 0; k < basis.spin_dim(); ++k) jz(k, k) = basis.m(k);
  return jz;
}

[[nodiscard]] inline Eigen::MatrixXd spin_jx_block(const QuantumBasis& basis) {
  const int ns = basis.spin_dim();
  Eigen::MatrixXd jx = Eigen::MatrixXd::Zero(ns, ns);
  for (int k = 0; k + 1 < ns; ++k) jx(k, k + 1) = jx(k + 1, k) = 0.5 * basis.jplus(k);
  return jx;
}

/// Scaled boson position q = (a + a^dagger) / sqrt(2j), identity on the spin.
[[nodiscard]] inline OperatorMatrix build_q_operator(const QuantumBasis& basis) {
  const Eigen::MatrixXd xb = boson_position_block(basis) / std::sqrt(2.0 * basis.j());
  return {OperatorRole::q_op, detail::kron(xb, Eigen::MatrixXd::Identity(basis.spin_dim(), basis.spin_dim()))};
}

[[nodiscard]] inline OperatorMatrix build_number(const QuantumBasis& basis) {
  const auto d = static_cast<Eigen::Index>(basis.dim());
  OperatorMatrix op{OperatorRole::number, Eigen::MatrixXd::Zero(d, d)};
  for (Eigen::Index i = 0; i < d; ++i) op.matrix(i, i) = basis.n_of(static_cast<std::size_t>(i));
  return op;
}

[[nodiscard]] inline OperatorMatrix build_jz(const QuantumBasis& basis) {
  const auto d = static_cast<Eigen::Index>(basis.dim());
  OperatorMatrix op{OperatorRole::jz, Eigen::MatrixXd::Zero(d, d)};
  for (Eigen::Index i = 0; i < d; ++i) op.matrix(i, i) = basis.m_of(static_cast<std::size_t>(i));
  return op;
}

[[nodiscard]] inline OperatorMatrix build_jx(const QuantumBasis& basis) {
  return {OperatorRole::jx,
          detail::kron(Eigen::MatrixXd::Identity(basis.boson_dim(), basis.boson_dim()), spin_jx_block(basis))};
}

[[nodiscard]] inline OperatorMatrix build_identity(const QuantumBasis& basis) {
  const auto d = static_cast<Eigen::Index>(basis.dim());
  return {OperatorRole::identity, Eigen::MatrixXd::Identity(d, d)};
}

/// Parity exp[i pi (j + Jz + a^dag a)], diagonal with entries (-1)^(j+m+n).
[[nodiscard]] inline OperatorMatrix build_parity(const QuantumBasis& basis) {
  const auto d = static_cast<Eigen::Index>(basis.dim());
  OperatorMatrix op{OperatorRole::parity, Eigen::MatrixXd::Zero(d, d)};
  for (Eigen::Index i = 0; i < d; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    op.matrix(i, i) = ((basis.n_of(idx) + basis.k_of(idx)) % 2 == 0) ? 1.0 : -1.0;
  }
  return op;
}

}  // namespace dicke::quantum
