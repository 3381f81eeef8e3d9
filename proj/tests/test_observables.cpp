#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include "dicke/observables/band.hpp"
#include "dicke/observables/constants.hpp"
#include "dicke/observables/diagonal.hpp"
#include "dicke/observables/dispersion.hpp"
#include "dicke/observables/peres.hpp"
#include "dicke/observables/sectors.hpp"
#include "dicke/observables/wells.hpp"
#include "dicke/quantum/spectrum.hpp"
#include "support.hpp"

using namespace dicke;
using namespace dicke::observables;
using namespace dicke::quantum;
using Eigen::MatrixXd;

namespace {

constexpr double kQc = 0.0446385;

ModelParams at_j(double j) {
  ModelParams p = test::deformed();
  p.j = j;
  return p;
}

double max_abs(const MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

SpectrumResult solve(const ModelParams& p, int n_max) {
  const QuantumBasis b(p.j, n_max);
  return diagonalize(build_hamiltonian(p, b), p, b);
}

}  // namespace

TEST(WellConstant, SquaresToIdentityAndCommutesWithQ) {
  const QuantumBasis b(2, 40);
  const auto q = build_q_operator(b);
  const auto c = build_C(b, q, kQc);
  const auto d = c.matrix.rows();
  EXPECT_LT(max_abs(c.matrix * c.matrix - MatrixXd::Identity(d, d)), 1e-12);
  EXPECT_LT(max_abs(c.matrix * q.matrix - q.matrix * c.matrix), 1e-12);
  EXPECT_LT(max_abs(c.matrix - c.matrix.transpose()), 1e-15);
}

TEST(WellConstant, TieWithQEigenvalueWarns) {
  const QuantumBasis b(1, 20);
  const auto sec = q_sectors(b);
  std::vector<std::string> msgs;
  const auto op = well_sign_sectors(b, sec, sec.q()(5), [&](const std::string& m) { msgs.push_back(m); });
  ASSERT_EQ(msgs.size(), 1u);
  EXPECT_EQ(op.terms.front().w(5), 1.0);
  EXPECT_EQ(op.terms.front().w(4), -1.0);
}

TEST(QSectors, ExtractedFromOperatorMatchBasis) {
  const QuantumBasis b(2, 25);
  const auto a = q_sectors(b), c = q_sectors(b, build_q_operator(b));
  EXPECT_LT((a.x - c.x).cwiseAbs().maxCoeff(), 1e-12);
  // Zeros of the Hermite polynomial H_{n_max+1} scaled by sqrt(2): symmetric about 0.
  EXPECT_LT((a.x + a.x.reverse()).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_THROW(q_sectors(b, build_number(b)), ConfigError);
}

TEST(AdiabaticInvariant, SpectrumIsSpinLadder) {
  const double j = 2;
  const int n_max = 30;
  const QuantumBasis b(j, n_max);
  const auto jp = build_Jzprime(b, at_j(j), build_q_operator(b));
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<MatrixXd>(jp.matrix).eigenvalues();
  const Eigen::Index nb = n_max + 1;
  for (int k = 0; k <= 2 * j; ++k)
    for (Eigen::Index i = 0; i < nb; ++i) EXPECT_NEAR(ev(k * nb + i), k - j, 1e-8);
}

TEST(AdiabaticInvariant, CommutesWithWellConstant) {
  const QuantumBasis b(2.5, 30);
  const auto q = build_q_operator(b);
  const auto jp = build_Jzprime(b, at_j(2.5), q);
  const auto c = build_C(b, q, kQc);
  EXPECT_LT(max_abs(jp.matrix * c.matrix - c.matrix * jp.matrix), 1e-10);
}

TEST(AdiabaticInvariant, ReducesToJzWithoutCoupling) {
  ModelParams p = at_j(2);
  p.lambda = 0.0;
  EXPECT_EQ(adiabatic_ratio(p), 0.0);
  const QuantumBasis b(2, 10);
  EXPECT_LT(max_abs(build_Jzprime(b, p, build_q_operator(b)).matrix - build_jz(b).matrix), 1e-14);
}

TEST(AdiabaticInvariant, RatioValue) {
  // lambda / lambda_c = 3 at lambda = 3/2, omega = omega0 = 1.
  EXPECT_DOUBLE_EQ(adiabatic_ratio(at_j(15)), std::sqrt(9.0 / 30.0));
}

TEST(SectorOperator, ApplyAndExpectationMatchDense) {
  const QuantumBasis b(1.5, 20);
  const ModelParams p = at_j(1.5);
  const auto sec = q_sectors(b);
  const auto op = jzprime_sectors(b, p, sec);
  const auto dense = op.dense();
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  MatrixXd v(b.dim(), 3);
  for (auto& x : v.reshaped()) x = g(rng);
  EXPECT_LT(max_abs(op.apply(v) - dense.matrix * v), 1e-12);
  for (int c = 0; c < 3; ++c) EXPECT_NEAR(op.expectation(v.col(c)), dense.expectation(v.col(c)), 1e-11);
  const auto sq = multiply(op, op, OperatorRole::jzprime_squared).dense();
  EXPECT_LT(max_abs(sq.matrix - dense.matrix * dense.matrix), 1e-11);
}

TEST(Diagonal, MatchesDenseOperators) {
  const QuantumBasis b(2, 12);
  EXPECT_EQ(diagonal_operator(OperatorRole::number, b).diag, build_number(b).matrix.diagonal());
  EXPECT_EQ(diagonal_operator(OperatorRole::jz, b).diag, build_jz(b).matrix.diagonal());
  EXPECT_EQ(diagonal_operator(OperatorRole::parity, b).diag, build_parity(b).matrix.diagonal());
}

TEST(Dispersion, EigenstatesOfInvariantHaveZeroVariance) {
  const QuantumBasis b(1.5, 15);
  const ModelParams p = at_j(1.5);
  const auto jp = jzprime_sectors(b, p, q_sectors(b));
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(jp.dense().matrix);
  SpectrumResult s;
  s.basis = b;
  s.params = p;
  s.vectors = es.eigenvectors();
  s.energies = es.eigenvalues();
  s.eps = s.energies;
  const auto d = dispersion_Jzprime(s, jp);
  EXPECT_LT((d.mean - es.eigenvalues()).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT(d.variance.maxCoeff(), 1e-9);
  EXPECT_GE(d.variance.minCoeff(), 0.0);
  for (const auto& bn : band_quantum_numbers(d, 1.5)) EXPECT_TRUE(bn.classifiable);
}

TEST(Dispersion, SectorAndDenseAgree) {
  const ModelParams p = at_j(2);
  const auto s = solve(p, 40);
  const auto sec = q_sectors(s.basis);
  const auto a = dispersion_Jzprime(s, jzprime_sectors(s.basis, p, sec));
  const auto b = dispersion_Jzprime(s, build_Jzprime(s.basis, p, build_q_operator(s.basis)));
  EXPECT_LT((a.mean - b.mean).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT((a.variance - b.variance).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Dispersion, BandRounding) {
  Dispersion d{Eigen::Vector4d(0.97, 0.5, -2.4, 3.0), Eigen::Vector4d(0.01, 0.01, 0.5, 0.0)};
  const auto bn = band_quantum_numbers(d, 2.0);
  EXPECT_EQ(bn[0].m_prime, 1.0);
  EXPECT_TRUE(bn[0].classifiable);
  EXPECT_FALSE(bn[1].classifiable);
  EXPECT_EQ(bn[2].m_prime, -2.0);
  EXPECT_FALSE(bn[2].classifiable);
  EXPECT_EQ(bn[3].m_prime, 2.0);
  Dispersion h{Eigen::Vector2d(-1.45, 0.52), Eigen::Vector2d(0.0, 0.0)};
  const auto hb = band_quantum_numbers(h, 1.5);
  EXPECT_EQ(hb[0].m_prime, -1.5);
  EXPECT_EQ(hb[1].m_prime, 0.5);
}

TEST(Wells, ConstantsFromStationaryPoints) {
  const auto wc = well_constants(test::deformed());
  EXPECT_NEAR(wc.q_c, kQc, 1e-6);
  EXPECT_NEAR(wc.eps_c1, -3.564851, 1e-6);
  EXPECT_NEAR(wc.eps_c2, -0.992148, 1e-6);
  ModelParams weak = test::undeformed();
  weak.lambda = 0.3;
  EXPECT_THROW((void)well_constants(weak), DomainError);
  EXPECT_THROW((void)well_constants(test::deformed(), 1.0), ConfigError);
}

TEST(Wells, Classification) {
  const WellConstants wc{0.0, -3.5, -1.0, 0.98};
  EXPECT_EQ(classify_wells(-0.99, -4.0, wc), QuantumWell::left);
  EXPECT_EQ(classify_wells(0.98, -2.0, wc), QuantumWell::right);
  EXPECT_EQ(classify_wells(0.5, -2.0, wc), QuantumWell::mixed);
  EXPECT_EQ(classify_wells(-1.0, -0.5, wc), QuantumWell::above_c2);
}

TEST(Peres, GroundStateSitsInDeepWell) {
  const ModelParams p = at_j(3);
  const auto s = solve(p, 60);
  const auto wc = well_constants(p);
  const auto sec = q_sectors(s.basis);
  const auto c = well_sign_sectors(s.basis, sec, wc.q_c);
  const auto rec = peres_lattice(s, diagonal_operator(OperatorRole::number, s.basis), c, wc);
  ASSERT_EQ(rec.size(), std::size_t(s.size()));
  EXPECT_EQ(rec[0].well, QuantumWell::left);
  EXPECT_EQ(rec[0].obs, "number");
  const Eigen::VectorXd dense = diagonal_expectations(s, build_C(s.basis, build_q_operator(s.basis), wc.q_c));
  const Eigen::VectorXd sector = diagonal_expectations(s, c);
  EXPECT_LT((dense - sector).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_THROW(peres_lattice(s, "x", Eigen::VectorXd(3), sector, wc), ConfigError);
}

TEST(Band, EnergyAndValidation) {
  const ModelParams p = at_j(4);
  EXPECT_DOUBLE_EQ(band_energy(-2, 0.0, 0.0, p), -2.0);
  EXPECT_DOUBLE_EQ(band_energy(1, 0.0, 2.0, p), 3.0);
  EXPECT_THROW((void)band_energy(4.5, 0.0, 0.0, p), ConfigError);
  EXPECT_THROW((void)band_energy(0.5, 0.0, 0.0, p), ConfigError);
}

TEST(Band, LowestBandMinimumIsClassicalGroundEnergy) {
  for (double j : {5.0, 15.0, 30.0}) {
    const ModelParams p = at_j(j);
    double q = 0.0;
    const double e = band_minimum(-j, p, BandAlphaTerm::scaled, &q);
    EXPECT_NEAR(e / (p.omega0 * j), -5.672846, 1e-6);
    EXPECT_NEAR(q / std::sqrt(j), -3.33871, 1e-4);
  }
}
