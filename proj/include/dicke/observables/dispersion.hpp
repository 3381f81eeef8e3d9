#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "dicke/observables/peres.hpp"

namespace dicke::observables {

inline constexpr double kDispersionNoise = 1e-9;

namespace detail {

inline Eigen::VectorXd variances(const Eigen::VectorXd& mean, const Eigen::VectorXd& second) {
  Eigen::VectorXd var = second - mean.cwiseProduct(mean);
  for (auto& v : var) {
    if (v < 0.0 && v >= -kDispersionNoise) v = 0.0;
    if (v < -kDispersionNoise) throw NumericalError("negative dispersion beyond roundoff: " + std::to_string(v));
  }
  return var;
}

}  // namespace detail

struct Dispersion {
  Eigen::VectorXd mean;      // <Jz'>_n
  Eigen::VectorXd variance;  // <Jz'^2>_n - <Jz'>_n^2, noise clamped to 0
};

/// Dispersion of the adiabatic invariant with Jz'^2 formed as an explicit
/// matrix product.
[[nodiscard]] inline Dispersion dispersion_Jzprime(const SpectrumResult& s, const OperatorMatrix& jzprime) {
  const OperatorMatrix sq{OperatorRole::jzprime_squared, jzprime.matrix * jzprime.matrix};
  const Eigen::VectorXd mean = diagonal_expectations(s, jzprime);
  return {mean, detail::variances(mean, diagonal_expectations(s, sq))};
}

/// Same quantity for the sector form; the square is the sector-wise product.
[[nodiscard]] inline Dispersion dispersion_Jzprime(const SpectrumResult& s, const SectorOperator& jzprime) {
  const SectorOperator sq = multiply(jzprime, jzprime, OperatorRole::jzprime_squared);
  const Eigen::VectorXd mean = diagonal_expectations(s, jzprime);
  return {mean, detail::variances(mean, diagonal_expectations(s, sq))};
}

inline constexpr double kBandTolerance = 0.1;

struct BandNumber {
  double mean = 0.0;      // <Jz'>_n
  double m_prime = 0.0;   // nearest allowed value in {-j, ..., j}
  double variance = 0.0;
  bool classifiable = false;
};

[[nodiscard]] inline std::vector<BandNumber> band_quantum_numbers(const Dispersion& d, double j) {
  std::vector<BandNumber> out;
  out.reserve(static_cast<std::size_t>(d.mean.size()));
  for (Eigen::Index n = 0; n < d.mean.size(); ++n) {
    const double mean = d.mean(n);
    // Round on the integer lattice m + j so half-integer j works too.
    const double m = std::clamp(std::round(mean + j), 0.0, 2.0 * j) - j;
    const double var = d.variance(n);
    out.push_back({mean, m, var, std::abs(mean - m) < kBandTolerance && var < kBandTolerance});
  }
  return out;
}

template <class Op>
[[nodiscard]] std::vector<BandNumber> band_quantum_numbers(const SpectrumResult& s, const Op& jzprime) {
  return band_quantum_numbers(dispersion_Jzprime(s, jzprime), s.basis.j());
}

}  // namespace dicke::observables
