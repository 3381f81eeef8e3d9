#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <vector>

#include <Eigen/Dense>
#include <lapacke.h>

#include "dicke/error.hpp"
#include "dicke/model.hpp"
#include "dicke/quantum/basis.hpp"
#include "dicke/quantum/operators.hpp"
#include "dicke/util/rng.hpp"

namespace dicke::quantum {

/// Eigenpairs of the Hamiltonian, ascending. Either the full spectrum (dense
/// route) or every level up to an energy ceiling (banded route).
struct SpectrumResult {
  Eigen::VectorXd energies;
  Eigen::VectorXd eps;      // energies / (omega0 j)
  Eigen::MatrixXd vectors;  // column n is |E_n>
  ModelParams params;
  QuantumBasis basis{0.5, 1};
  double h_norm = 0.0;  // infinity-norm bound of H
  bool complete = true;

  [[nodiscard]] Eigen::Index size() const { return energies.size(); }
};

/// Infinity norm (max absolute row sum), an upper bound on the spectral radius.
[[nodiscard]] inline double hamiltonian_norm(const ModelParams& params, const QuantumBasis& basis,
                                             AlphaConvention conv = AlphaConvention::semiclassical) {
  std::vector<double> row(basis.dim(), 0.0);
  for_each_hamiltonian_element(
      params, basis,
      [&](std::size_t r, std::size_t c, double v) {
        row[r] += std::abs(v);
        if (r != c) row[c] += std::abs(v);
      },
      conv);
  return *std::max_element(row.begin(), row.end());
}

/// Full dense symmetric eigendecomposition (LAPACK divide and conquer).
[[nodiscard]] inline SpectrumResult diagonalize(const OperatorMatrix& h, const ModelParams& params,
                                                const QuantumBasis& basis) {
  const auto n = static_cast<lapack_int>(h.dim());
  if (static_cast<std::size_t>(n) != basis.dim()) throw ConfigError("diagonalize: matrix and basis dimensions differ");
  SpectrumResult out;
  out.params = params;
  out.basis = basis;
  out.vectors = h.matrix;
  out.energies.resize(n);
  out.h_norm = h.matrix.cwiseAbs().rowwise().sum().maxCoeff();
  const lapack_int info =
      LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, out.vectors.data(), n, out.energies.data());
  if (info != 0) {
    std::ostringstream os;
    os << "dsyevd failed with info=" << info << " (dim=" << n << ", |H|_inf=" << out.h_norm
       << ", finite=" << h.matrix.allFinite() << ")";
    throw NumericalError(os.str());
  }
  out.eps = out.energies / (params.omega0 * params.j);
  return out;
}

/// Symmetric band matrix in LAPACK upper storage: ab(kd + r - c, c) = A(r, c).
struct BandMatrix {
  lapack_int n = 0;
  lapack_int kd = 0;
  Eigen::MatrixXd ab;

  [[nodiscard]] double& at(Eigen::Index r, Eigen::Index c) { return ab(kd + r - c, c); }
};

/// Bandwidth of H in the n-major ordering: (n, m) couples to (n+1, m+1).
[[nodiscard]] inline lapack_int hamiltonian_bandwidth(const QuantumBasis& basis) { return basis.spin_dim() + 1; }

[[nodiscard]] inline BandMatrix build_hamiltonian_band(const ModelParams& params, const QuantumBasis& basis,
                                                       AlphaConvention conv = AlphaConvention::semiclassical) {
  params.validate();
  BandMatrix b;
  b.n = static_cast<lapack_int>(basis.dim());
  b.kd = hamiltonian_bandwidth(basis);
  b.ab = Eigen::MatrixXd::Zero(b.kd + 1, b.n);
  for_each_hamiltonian_element(
      params, basis,
      [&](std::size_t r, std::size_t c, double v) { b.at(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v; },
      conv);
  return b;
}

/// Eigenvalues of a band matrix: every value <= upper, or the `count` lowest.
[[nodiscard]] inline Eigen::VectorXd band_eigenvalues(const BandMatrix& band, std::optional<double> upper,
                                                      std::optional<int> count = std::nullopt) {
  Eigen::MatrixXd ab = band.ab;  // overwritten by LAPACK
  const double bound = ab.cwiseAbs().colwise().sum().maxCoeff() * 2.0 + 1.0;
  Eigen::VectorXd w(band.n);
  std::vector<lapack_int> ifail(static_cast<std::size_t>(band.n));
  lapack_int m = 0;
  double q_dummy = 0.0, z_dummy = 0.0;
  const double abstol = 2.0 * LAPACKE_dlamch('S');
  lapack_int info = 0;
  if (count) {
    const lapack_int iu = std::min<lapack_int>(*count, band.n);
    if (iu < 1) return {};
    info = LAPACKE_dsbevx(LAPACK_COL_MAJOR, 'N', 'I', 'U', band.n, band.kd, ab.data(), band.kd + 1, &q_dummy, 1,
                          0.0, 0.0, 1, iu, abstol, &m, w.data(), &z_dummy, 1, ifail.data());
  } else {
    const double vu = upper.value_or(bound);
    if (vu <= -bound) return {};
    info = LAPACKE_dsbevx(LAPACK_COL_MAJOR, 'N', 'V', 'U', band.n, band.kd, ab.data(), band.kd + 1, &q_dummy, 1,
                          -bound, vu, 0, 0, abstol, &m, w.data(), &z_dummy, 1, ifail.data());
  }
  if (info != 0) {
    std::ostringstream os;
    os << "dsbevx failed with info=" << info << " (n=" << band.n << ", kd=" << band.kd << ")";
    throw NumericalError(os.str());
  }
  Eigen::VectorXd out = w.head(m);
  std::sort(out.data(), out.data() + out.size());
  return out;
}

struct WindowOptions {
  AlphaConvention alpha_convention = AlphaConvention::semiclassical;
  int inverse_iterations = 3;
  double cluster_tol = 1e-7;  // relative to |H|: vectors closer than this are orthogonalized
  std::size_t memory_budget_bytes = std::size_t{3} << 30;
};

/// Eigenpairs with reduced energy <= eps_max from the banded Hamiltonian:
/// eigenvalues by band reduction and bisection, eigenvectors by inverse
/// iteration on the band LU of (H - E I). Memory is O(dim * (bandwidth +
/// number of levels)), so converged Fock cutoffs stay affordable.
[[nodiscard]] inline SpectrumResult diagonalize_window(const ModelParams& params, const QuantumBasis& basis,
                                                       double eps_max, const WindowOptions& opt = {}) {
  const BandMatrix band = build_hamiltonian_band(params, basis, opt.alpha_convention);
  const Eigen::VectorXd w = band_eigenvalues(band, eps_max * params.omega0 * params.j);
  const lapack_int n = band.n, kd = band.kd;
  const auto levels = static_cast<Eigen::Index>(w.size());

  const double bytes = static_cast<double>(n) * static_cast<double>(levels + 3 * kd + 2) * sizeof(double);
  if (bytes > static_cast<double>(opt.memory_budget_bytes)) {
    std::ostringstream os;
    os << "diagonalize_window: " << levels << " eigenvectors of dimension " << n << " need " << bytes / (1 << 20)
       << " MiB, above the memory budget";
    throw NumericalError(os.str());
  }

  SpectrumResult out;
  out.params = params;
  out.basis = basis;
  out.complete = static_cast<lapack_int>(levels) == n;
  out.energies = w;
  out.eps = w / (params.omega0 * params.j);
  out.h_norm = hamiltonian_norm(params, basis, opt.alpha_convention);
  out.vectors.resize(n, levels);

  const lapack_int ldab = 2 * kd + kd + 1;  // general band storage with kl = ku = kd
  Eigen::MatrixXd lu(ldab, n);
  std::vector<lapack_int> ipiv(static_cast<std::size_t>(n));
  const double ctol = opt.cluster_tol * out.h_norm;

  auto factor = [&](double shift) {
    lu.setZero();
    for (lapack_int c = 0; c < n; ++c) {
      for (lapack_int r = std::max<lapack_int>(0, c - kd); r <= c; ++r) {
        const double v = band.ab(kd + r - c, c) - (r == c ? shift : 0.0);
        lu(2 * kd + r - c, c) = v;  // upper part, row offset kl + ku
        lu(2 * kd + c - r, r) = v;  // mirrored lower part
      }
    }
    return LAPACKE_dgbtrf(LAPACK_COL_MAJOR, n, n, kd, kd, lu.data(), ldab, ipiv.data());
  };

  for (Eigen::Index i = 0; i < levels; ++i) {
    double shift = w(i);
    lapack_int info = factor(shift);
    for (int retry = 0; info > 0 && retry < 8; ++retry) {
      shift += (retry + 1) * 4.0 * std::numeric_limits<double>::epsilon() * out.h_norm;
      info = factor(shift);
    }
    if (info != 0) {
      std::ostringstream os;
      os << "band LU failed for level " << i << " (E=" << w(i) << ", info=" << info << ")";
      throw NumericalError(os.str());
    }
    Eigen::Index first = i;
    while (first > 0 && w(i) - w(first - 1) < ctol) --first;

    auto rng = stream_rng(0x5eed, static_cast<std::uint64_t>(i));
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Eigen::VectorXd x(n);
    for (lapack_int r = 0; r < n; ++r) x(r) = uni(rng);
    x.normalize();
    for (int it = 0; it < opt.inverse_iterations; ++it) {
      const lapack_int sinfo =
          LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', n, kd, kd, 1, lu.data(), ldab, ipiv.data(), x.data(), n);
      if (sinfo != 0) throw NumericalError("band triangular solve failed for level " + std::to_string(i));
      for (int pass = 0; pass < 2; ++pass) {
        for (Eigen::Index k = first; k < i; ++k) x -= out.vectors.col(k).dot(x) * out.vectors.col(k);
      }
      const double nx = x.norm();
      if (!(nx > 0.0) || !std::isfinite(nx)) {
        throw NumericalError("inverse iteration broke down for level " + std::to_string(i));
      }
      x /= nx;
    }
    // Deterministic sign: largest-magnitude component positive.
    Eigen::Index arg = 0;
    x.cwiseAbs().maxCoeff(&arg);
    if (x(arg) < 0.0) x = -x;
    out.vectors.col(i) = x;
  }
  return out;
}

struct SpectrumDiagnostics {
  double max_residual = 0.0;      // max_n |H v_n - E_n v_n|
  double max_orthonormality = 0.0;  // max |V^T V - I|
};

/// Residual and orthonormality of a computed spectrum, with H applied matrix-free.
[[nodiscard]] inline SpectrumDiagnostics verify_spectrum(const SpectrumResult& s,
                                                         AlphaConvention conv = AlphaConvention::semiclassical) {
  SpectrumDiagnostics d;
  Eigen::VectorXd hv(s.vectors.rows());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    apply_hamiltonian(s.params, s.basis, s.vectors.col(i), hv, conv);
    d.max_residual = std::max(d.max_residual, (hv - s.energies(i) * s.vectors.col(i)).norm());
  }
  const Eigen::MatrixXd gram = s.vectors.transpose() * s.vectors;
  d.max_orthonormality =
      (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
  return d;
}

/// Applies a symmetric operator to a block of column vectors.
using BlockApply = std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)>;

/// Within every cluster of eigenvalues whose consecutive gaps are below
/// gap_tol * |H|, rotates the eigenvectors so that `op` is diagonal on the
/// cluster. Returns the number of clusters rotated.
inline int rotate_degenerate_clusters(SpectrumResult& s, const BlockApply& op, double gap_tol = 1e-10) {
  const double tol = gap_tol * s.h_norm;
  int rotated = 0;
  Eigen::Index start = 0;
  while (start < s.size()) {
    Eigen::Index end = start + 1;
    while (end < s.size() && s.energies(end) - s.energies(end - 1) < tol) ++end;
    if (end - start > 1) {
      const Eigen::MatrixXd block = s.vectors.middleCols(start, end - start);
      Eigen::MatrixXd m = block.transpose() * op(block);
      m = 0.5 * (m + m.transpose()).eval();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
      s.vectors.middleCols(start, end - start) = block * es.eigenvectors();
      ++rotated;
    }
    start = end;
  }
  return rotated;
}

[[nodiscard]] inline BlockApply dense_block_apply(const OperatorMatrix& op) {
  return [&op](const Eigen::MatrixXd& v) -> Eigen::MatrixXd { return op.matrix * v; };
}

}  // namespace dicke::quantum
