#pragma once

#include <cmath>
#include <complex>
#include <sstream>

#include <Eigen/Dense>

#include "dicke/classical/phase_space.hpp"
#include "dicke/error.hpp"
#include "dicke/quantum/operators.hpp"

namespace dicke::quantum {

inline constexpr double kCoherentTailTolerance = 1e-10;

namespace detail {

/// Poisson mass beyond n_max for mean |z|^2, summed in log space.
inline double poisson_tail(double mean, int n_max) {
  if (mean == 0.0) return 0.0;
  double tail = 0.0;
  const double lm = std::log(mean);
  const int stop = std::max(n_max + 1, static_cast<int>(mean + 40.0 * std::sqrt(mean) + 100.0));
  for (int n = n_max + 1; n <= stop; ++n) tail += std::exp(n * lm - mean - std::lgamma(n + 1.0));
  return tail;
}

inline int suggested_cutoff(double mean) {
  int n = std::max(1, static_cast<int>(mean));
  while (poisson_tail(mean, n) >= kCoherentTailTolerance) n += std::max(1, n / 16);
  return n;
}

}  // namespace detail

/// Product of a Glauber state with <a> = sqrt(j/2) (q + i p) and a Bloch
/// state with tau = (Q + i P) / sqrt(4 - Q^2 - P^2). The Fock part is
/// renormalized after truncation; a tail mass above 1e-10 is an error.
[[nodiscard]] inline Eigen::VectorXcd build_coherent_state(const classical::PhaseState& x, const QuantumBasis& basis) {
  const double r = x.bloch_radius2();
  if (!(r < 4.0)) {
    throw DomainError("coherent state needs Q^2 + P^2 < 4, got " + classical::to_string(x));
  }
  using C = std::complex<double>;
  const double j = basis.j();
  const C z = std::sqrt(0.5 * j) * C(x.q, x.p);
  const double mean = std::norm(z);
  const double tail = detail::poisson_tail(mean, basis.n_max());
  if (tail >= kCoherentTailTolerance) {
    std::ostringstream os;
    os << "coherent state at " << classical::to_string(x) << " has Fock tail mass " << tail << " beyond n_max="
       << basis.n_max() << "; use n_max >= " << detail::suggested_cutoff(mean);
    throw DomainError(os.str());
  }

  const int nb = basis.boson_dim(), ns = basis.spin_dim();
  Eigen::VectorXcd boson(nb);
  const double labs = std::abs(z) > 0.0 ? std::log(std::abs(z)) : 0.0;
  const double phase = std::arg(z);
  for (int n = 0; n < nb; ++n) {
    if (n > 0 && std::abs(z) == 0.0) {
      boson(n) = 0.0;
      continue;
    }
    const double lmag = n * labs - 0.5 * mean - 0.5 * std::lgamma(n + 1.0);
    boson(n) = std::polar(std::exp(lmag), n * phase);
  }
  boson.normalize();

  Eigen::VectorXcd spin(ns);
  const C tau = C(x.Q, x.P) / std::sqrt(4.0 - r);
  const double ltau = std::abs(tau) > 0.0 ? std::log(std::abs(tau)) : 0.0;
  const double lpre = j * std::log1p(-0.25 * r);
  const int two_j = basis.two_j();
  for (int k = 0; k < ns; ++k) {
    if (k > 0 && std::abs(tau) == 0.0) {
      spin(k) = 0.0;
      continue;
    }
    const double lbinom = std::lgamma(two_j + 1.0) - std::lgamma(k + 1.0) - std::lgamma(two_j - k + 1.0);
    spin(k) = std::polar(std::exp(lpre + k * ltau + 0.5 * lbinom), k * std::arg(tau));
  }

  Eigen::VectorXcd psi(static_cast<Eigen::Index>(basis.dim()));
  for (int n = 0; n < nb; ++n) psi.segment(static_cast<Eigen::Index>(n) * ns, ns) = boson(n) * spin;
  return psi;
}

/// <psi|H|psi> / (omega0 j) for a complex state, H applied matrix-free.
[[nodiscard]] inline double reduced_energy_expectation(const Eigen::VectorXcd& psi, const ModelParams& params,
                                                       const QuantumBasis& basis,
                                                       AlphaConvention conv = AlphaConvention::semiclassical) {
  const Eigen::VectorXd re = psi.real(), im = psi.imag();
  Eigen::VectorXd h(re.size());
  apply_hamiltonian(params, basis, re, h, conv);
  double e = re.dot(h);
  apply_hamiltonian(params, basis, im, h, conv);
  e += im.dot(h);
  return e / (params.omega0 * params.j);
}

}  // namespace dicke::quantum
