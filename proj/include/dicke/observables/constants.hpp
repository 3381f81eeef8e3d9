#pragma once

#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "dicke/model.hpp"
#include "dicke/observables/sectors.hpp"

namespace dicke::observables {

using WarningSink = std::function<void(const std::string&)>;

inline void warn_stderr(const std::string& msg) { std::cerr << "warning: " << msg << '\n'; }

inline constexpr double kSignTieTolerance = 1e-12;

/// Well constant sign(q - q_c) in sector form; sign(0) is taken as +1.
[[nodiscard]] inline SectorOperator well_sign_sectors(const QuantumBasis& basis, const QSectors& sec, double q_c,
                                                      const WarningSink& warn = warn_stderr) {
  const Eigen::VectorXd q = sec.q();
  Eigen::VectorXd sign(q.size());
  for (Eigen::Index k = 0; k < q.size(); ++k) {
    const double d = q(k) - q_c;
    if (std::abs(d) < kSignTieTolerance && warn) {
      std::ostringstream os;
      os << "q eigenvalue " << q(k) << " coincides with q_c=" << q_c << "; using sign +1";
      warn(os.str());
    }
    sign(k) = d >= 0.0 ? 1.0 : -1.0;
  }
  const int ns = basis.spin_dim();
  return {OperatorRole::C, sec, {{sign, Eigen::MatrixXd::Identity(ns, ns)}}};
}

[[nodiscard]] inline OperatorMatrix build_C(const QuantumBasis& basis, const OperatorMatrix& q_op, double q_c,
                                            const WarningSink& warn = warn_stderr) {
  return well_sign_sectors(basis, q_sectors(basis, q_op), q_c, warn).dense();
}

/// Ratio c of the adiabatic rotation, with the undeformed critical coupling.
[[nodiscard]] inline double adiabatic_ratio(const ModelParams& params) {
  const double lc = undeformed_critical_coupling(params);
  return std::sqrt((params.lambda * params.lambda) / (lc * lc) * (params.omega / params.omega0) / (2.0 * params.j));
}

/// Adiabatic invariant: in the sector with a + a^dagger = x,
///   Jz' = (Jz + c x Jx) / sqrt(1 + c^2 x^2).
[[nodiscard]] inline SectorOperator jzprime_sectors(const QuantumBasis& basis, const ModelParams& params,
                                                    const QSectors& sec) {
  const double c = adiabatic_ratio(params);
  const Eigen::ArrayXd cx = c * sec.x.array();
  const Eigen::VectorXd f = (1.0 + cx.square()).rsqrt().matrix();
  const Eigen::VectorXd g = (cx * f.array()).matrix();
  return {OperatorRole::jzprime, sec, {{f, quantum::spin_jz_block(basis)}, {g, quantum::spin_jx_block(basis)}}};
}

[[nodiscard]] inline OperatorMatrix build_Jzprime(const QuantumBasis& basis, const ModelParams& params,
                                                  const OperatorMatrix& q_op) {
  return jzprime_sectors(basis, params, q_sectors(basis, q_op)).dense();
}

}  // namespace dicke::observables
