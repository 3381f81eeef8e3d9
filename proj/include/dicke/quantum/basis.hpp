#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <sstream>

#include "dicke/error.hpp"
#include "dicke/model.hpp"

namespace dicke::quantum {

/// Product basis |n> (x) |j, m>, n in [0, n_max], m in [-j, j].
///
/// Flat ordering is n-major with m ascending, so index(n, -j) = n (2j + 1).
/// The spin label is stored as k = m + j in [0, 2j] to stay integral for
/// half-integer j.
class QuantumBasis {
 public:
  QuantumBasis(double j, int n_max) : two_j_(static_cast<int>(std::lround(2.0 * j))), n_max_(n_max) {
    if (n_max < 1) {
      throw ConfigError("invalid parameter 'n_max' = " + std::to_string(n_max) + ": must be >= 1");
    }
    if (two_j_ < 1 || std::abs(2.0 * j - two_j_) > 1e-12) {
      std::ostringstream os;
      os << "invalid parameter 'j' = " << j << ": must be a positive multiple of 1/2";
      throw ConfigError(os.str());
    }
  }

  [[nodiscard]] double j() const { return 0.5 * two_j_; }
  [[nodiscard]] int two_j() const { return two_j_; }
  [[nodiscard]] int n_max() const { return n_max_; }
  [[nodiscard]] int boson_dim() const { return n_max_ + 1; }
  [[nodiscard]] int spin_dim() const { return two_j_ + 1; }
  [[nodiscard]] std::size_t dim() const {
    return static_cast<std::size_t>(boson_dim()) * static_cast<std::size_t>(spin_dim());
  }

  [[nodiscard]] std::size_t index(int n, int k) const {
    return static_cast<std::size_t>(n) * static_cast<std::size_t>(spin_dim()) + static_cast<std::size_t>(k);
  }
  /// Index from the physical m (must satisfy m + j integral).
  [[nodiscard]] std::size_t index_m(int n, double m) const { return index(n, static_cast<int>(std::lround(m + j()))); }

  [[nodiscard]] int n_of(std::size_t i) const { return static_cast<int>(i / static_cast<std::size_t>(spin_dim())); }
  [[nodiscard]] int k_of(std::size_t i) const { return static_cast<int>(i % static_cast<std::size_t>(spin_dim())); }
  [[nodiscard]] double m_of(std::size_t i) const { return k_of(i) - j(); }

  /// m value of spin label k.
  [[nodiscard]] double m(int k) const { return k - j(); }

  /// <j, m+1| J+ |j, m> for m = k - j.
  [[nodiscard]] double jplus(int k) const {
    const double mm = m(k);
    return std::sqrt(j() * (j() + 1.0) - mm * (mm + 1.0));
  }

  friend bool operator==(const QuantumBasis&, const QuantumBasis&) = default;

 private:
  int two_j_;
  int n_max_;
};

[[nodiscard]] inline QuantumBasis build_basis(double j, int n_max) { return QuantumBasis(j, n_max); }

}  // namespace dicke::quantum
