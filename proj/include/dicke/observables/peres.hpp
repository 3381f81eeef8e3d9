#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dicke/observables/sectors.hpp"
#include "dicke/observables/wells.hpp"
#include "dicke/quantum/spectrum.hpp"
#include "dicke/util/parallel.hpp"

namespace dicke::observables {

using quantum::SpectrumResult;

struct PeresRecord {
  Eigen::Index n = 0;
  ReducedEnergy eps_n;
  std::string obs;
  double value = 0.0;
  QuantumWell well = QuantumWell::mixed;
};

/// <E_n|O|E_n> for every stored eigenstate.
template <class Op>
[[nodiscard]] Eigen::VectorXd diagonal_expectations(const SpectrumResult& s, const Op& op) {
  Eigen::VectorXd out(s.size());
  parallel_for(static_cast<std::size_t>(s.size()), [&](std::size_t i) {
    const auto n = static_cast<Eigen::Index>(i);
    out(n) = op.expectation(s.vectors.col(n));
  });
  return out;
}

[[nodiscard]] inline Eigen::VectorXd diagonal_expectations(const SpectrumResult& s, const OperatorMatrix& op) {
  return (op.matrix * s.vectors).cwiseProduct(s.vectors).colwise().sum().transpose();
}

/// One record per eigenstate; `c_nn` carries the well-constant expectations
/// used for the labels (pass the values themselves when obs is C).
[[nodiscard]] inline std::vector<PeresRecord> peres_lattice(const SpectrumResult& s, const std::string& obs,
                                                            const Eigen::VectorXd& values, const Eigen::VectorXd& c_nn,
                                                            const WellConstants& wc) {
  if (values.size() != s.size() || c_nn.size() != s.size()) {
    throw ConfigError("peres_lattice: expectation lists do not match the spectrum size");
  }
  std::vector<PeresRecord> out;
  out.reserve(static_cast<std::size_t>(s.size()));
  for (Eigen::Index n = 0; n < s.size(); ++n) {
    out.push_back({n, {s.eps(n)}, obs, values(n), classify_wells(c_nn(n), s.eps(n), wc)});
  }
  return out;
}

template <class Op, class COp>
[[nodiscard]] std::vector<PeresRecord> peres_lattice(const SpectrumResult& s, const Op& obs, const COp& c_op,
                                                     const WellConstants& wc) {
  const Eigen::VectorXd c_nn = diagonal_expectations(s, c_op);
  return peres_lattice(s, quantum::to_string(obs.role), diagonal_expectations(s, obs), c_nn, wc);
}

}  // namespace dicke::observables
