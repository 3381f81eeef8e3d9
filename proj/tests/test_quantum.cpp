#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

#include "dicke/io/eigenvectors.hpp"
#include "dicke/quantum/basis.hpp"
#include "dicke/quantum/coherent_state.hpp"
#include "dicke/quantum/operators.hpp"
#include "dicke/quantum/spectrum.hpp"
#include "dicke/quantum/truncation.hpp"
#include "support.hpp"

using namespace dicke;
using namespace dicke::quantum;
using Eigen::MatrixXd;

namespace {

ModelParams small(double j, double lambda = 1.5, double alpha = 0.25) {
  ModelParams p = test::deformed();
  p.j = j;
  p.lambda = lambda;
  p.alpha = alpha;
  return p;
}

// Ladder and spin matrices written out from their textbook definitions.
MatrixXd annihilation(int nb) {
  MatrixXd a = MatrixXd::Zero(nb, nb);
  for (int n = 1; n < nb; ++n) a(n - 1, n) = std::sqrt(double(n));
  return a;
}

MatrixXd raising(double j) {
  const int d = int(std::lround(2 * j)) + 1;
  MatrixXd jp = MatrixXd::Zero(d, d);
  for (int k = 0; k + 1 < d; ++k) {
    const double m = k - j;
    jp(k + 1, k) = std::sqrt((j - m) * (j + m + 1));
  }
  return jp;
}

MatrixXd reference_hamiltonian(const ModelParams& p, int n_max) {
  const int nb = n_max + 1, ns = int(std::lround(2 * p.j)) + 1;
  const MatrixXd a = annihilation(nb), ad = a.transpose();
  const MatrixXd jp = raising(p.j), jm = jp.transpose();
  MatrixXd jz = MatrixXd::Zero(ns, ns);
  for (int k = 0; k < ns; ++k) jz(k, k) = k - p.j;
  const MatrixXd jx = 0.5 * (jp + jm);
  const MatrixXd Ib = MatrixXd::Identity(nb, nb), Is = MatrixXd::Identity(ns, ns);
  const MatrixXd x = a + ad;
  return p.omega * Eigen::kroneckerProduct(ad * a, Is).eval() + p.omega0 * Eigen::kroneckerProduct(Ib, jz).eval() +
         (2 * p.lambda / std::sqrt(2 * p.j)) * Eigen::kroneckerProduct(x, jx).eval() +
         p.alpha * std::sqrt(p.omega0 * p.j) * Eigen::kroneckerProduct(x, Is).eval();
}

}  // namespace

TEST(Basis, DimensionsAndIndexing) {
  const QuantumBasis b(15, 120);
  EXPECT_EQ(b.dim(), 121u * 31u);
  EXPECT_EQ(b.index_m(0, -15.0), 0u);
  EXPECT_EQ(b.index_m(2, -15.0), 62u);
  for (std::size_t i = 0; i < b.dim(); i += 97) {
    EXPECT_EQ(b.index(b.n_of(i), b.k_of(i)), i);
    EXPECT_EQ(b.index_m(b.n_of(i), b.m_of(i)), i);
  }
  const QuantumBasis h(2.5, 10);
  EXPECT_EQ(h.spin_dim(), 6);
  EXPECT_DOUBLE_EQ(h.m(0), -2.5);
  EXPECT_THROW(QuantumBasis(0.3, 10), ConfigError);
  EXPECT_THROW(QuantumBasis(1, 0), ConfigError);
}

TEST(Hamiltonian, HandBuiltFourByFour) {
  const ModelParams p = small(0.5, 0.7, 0.3);
  const auto h = build_hamiltonian(p, QuantumBasis(0.5, 1));
  const double f = 0.3 * std::sqrt(0.5);
  MatrixXd ref(4, 4);
  // order: (n=0,m=-1/2) (0,+1/2) (1,-1/2) (1,+1/2)
  ref << -0.5, 0.0, f, 0.7,
          0.0, 0.5, 0.7, f,
          f, 0.7, 0.5, 0.0,
          0.7, f, 0.0, 1.5;
  EXPECT_LT((h.matrix - ref).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Hamiltonian, MatchesKroneckerConstruction) {
  for (double j : {0.5, 1.0, 2.5, 4.0}) {
    const ModelParams p = small(j);
    const auto h = build_hamiltonian(p, QuantumBasis(j, 12));
    EXPECT_LT((h.matrix - reference_hamiltonian(p, 12)).cwiseAbs().maxCoeff(), 1e-12) << "j=" << j;
  }
}

TEST(Hamiltonian, MatrixFreeProductAgrees) {
  const ModelParams p = small(3);
  const QuantumBasis b(3, 20);
  const auto h = build_hamiltonian(p, b);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  Eigen::VectorXd x(b.dim()), y(b.dim());
  for (auto& v : x) v = g(rng);
  apply_hamiltonian(p, b, x, y);
  EXPECT_LT((y - h.matrix * x).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Hamiltonian, FieldConventions) {
  const ModelParams p = small(15);
  EXPECT_DOUBLE_EQ(field_prefactor(p, AlphaConvention::semiclassical), 0.25 * std::sqrt(15.0));
  EXPECT_DOUBLE_EQ(field_prefactor(p, AlphaConvention::literal), 0.25 * std::sqrt(2.0));
}

TEST(Hamiltonian, DenseBudgetEnforced) {
  HamiltonianOptions o;
  o.memory_budget_bytes = 1024;
  EXPECT_THROW(build_hamiltonian(small(2), QuantumBasis(2, 20), o), NumericalError);
}

TEST(Spectrum, AgreesWithIndependentSolver) {
  const ModelParams p = small(2);
  const QuantumBasis b(2, 25);
  const auto h = build_hamiltonian(p, b);
  const auto s = diagonalize(h, p, b);
  const Eigen::VectorXd ref = Eigen::SelfAdjointEigenSolver<MatrixXd>(reference_hamiltonian(p, 25)).eigenvalues();
  EXPECT_LT((s.energies - ref).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT((s.eps - s.energies / 2.0).cwiseAbs().maxCoeff(), 1e-15);
  const auto d = verify_spectrum(s);
  EXPECT_LT(d.max_residual, 1e-10 * s.h_norm);
  EXPECT_LT(d.max_orthonormality, 1e-12);
}

TEST(Spectrum, EigenvaluesAreCharacteristicRoots) {
  // det(H - E) changes sign across every simple eigenvalue.
  const ModelParams p = small(1, 0.9, 0.1);
  const QuantumBasis b(1, 3);
  const auto h = build_hamiltonian(p, b);
  const auto s = diagonalize(h, p, b);
  const auto n = h.matrix.rows();
  auto det = [&](double e) { return (h.matrix - e * MatrixXd::Identity(n, n)).determinant(); };
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const double e = s.energies(i), d = 1e-7;
    EXPECT_LT(det(e - d) * det(e + d), 0.0) << "level " << i;
  }
}

TEST(Spectrum, UncoupledLevelsAreExact) {
  ModelParams p = small(15, 0.0, 0.0);
  p.omega = 1.3;
  const QuantumBasis b(15, 20);
  const auto s = diagonalize(build_hamiltonian(p, b), p, b);
  std::vector<double> ref;
  for (int n = 0; n <= 20; ++n)
    for (int k = 0; k <= 30; ++k) ref.push_back(p.omega * n + p.omega0 * (k - 15.0));
  std::sort(ref.begin(), ref.end());
  for (Eigen::Index i = 0; i < s.size(); ++i) EXPECT_NEAR(s.energies(i), ref[std::size_t(i)], 1e-12);
}

TEST(Spectrum, ParityCommutesOnlyWithoutField) {
  const QuantumBasis b(3, 15);
  const auto pi = build_parity(b);
  const auto h0 = build_hamiltonian(small(3, 1.5, 0.0), b);
  const auto h1 = build_hamiltonian(small(3, 1.5, 0.25), b);
  EXPECT_LT((h0.matrix * pi.matrix - pi.matrix * h0.matrix).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_GT((h1.matrix * pi.matrix - pi.matrix * h1.matrix).cwiseAbs().maxCoeff(), 0.1);
}

TEST(Spectrum, DoubletRotationGivesParityEigenstates) {
  const ModelParams p = small(4, 1.5, 0.0);
  const QuantumBasis b(4, 48);
  auto s = diagonalize(build_hamiltonian(p, b), p, b);
  const auto pi = build_parity(b);
  EXPECT_GT(rotate_degenerate_clusters(s, dense_block_apply(pi)), 0);
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const double v = pi.expectation(s.vectors.col(i));
    EXPECT_NEAR(std::abs(v), 1.0, 1e-8) << "level " << i;
  }
}

TEST(Spectrum, BandedWindowMatchesDense) {
  const ModelParams p = small(3);
  const QuantumBasis b(3, 40);
  const auto dense = diagonalize(build_hamiltonian(p, b), p, b);
  const auto win = diagonalize_window(p, b, -1.0);
  ASSERT_GT(win.size(), 5);
  EXPECT_FALSE(win.complete);
  EXPECT_LE(win.eps.maxCoeff(), -1.0);
  EXPECT_GT(dense.eps(win.size()), -1.0);
  for (Eigen::Index i = 0; i < win.size(); ++i) {
    EXPECT_NEAR(win.energies(i), dense.energies(i), 1e-10);
    EXPECT_NEAR(std::abs(win.vectors.col(i).dot(dense.vectors.col(i))), 1.0, 1e-8);
  }
  const auto d = verify_spectrum(win);
  EXPECT_LT(d.max_residual, 1e-8 * win.h_norm);
  EXPECT_LT(d.max_orthonormality, 1e-10);
}

TEST(Spectrum, BandEigenvaluesByCount) {
  const ModelParams p = small(2);
  const QuantumBasis b(2, 30);
  const auto band = build_hamiltonian_band(p, b);
  const auto dense = diagonalize(build_hamiltonian(p, b), p, b);
  const Eigen::VectorXd w = band_eigenvalues(band, std::nullopt, 7);
  ASSERT_EQ(w.size(), 7);
  EXPECT_LT((w - dense.energies.head(7)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Truncation, ConvergedAndUnconvergedCutoffs) {
  const ModelParams p = small(3);
  const auto good = check_truncation(p, 160, 1.0);
  EXPECT_EQ(good.n_max_reference, 200);
  EXPECT_GT(good.levels, 0);
  EXPECT_TRUE(good.converged) << good.max_delta;
  const auto bad = check_truncation(p, 10, 1.0);
  EXPECT_FALSE(bad.converged);
  EXPECT_GT(bad.max_delta, 1e-6);
  EXPECT_THROW((void)check_truncation(p, 9, 1.0), ConfigError);
}

TEST(CoherentState, SpinAndBosonMoments) {
  std::mt19937_64 rng(4);
  const QuantumBasis b(5, 80);
  const auto jz = build_jz(b), jx = build_jx(b), nn = build_number(b);
  for (int i = 0; i < 20; ++i) {
    const auto x = test::random_state(rng, 2.0, 1.9);
    const Eigen::VectorXcd psi = build_coherent_state(x, b);
    EXPECT_NEAR(psi.norm(), 1.0, 1e-12);
    auto ev = [&](const OperatorMatrix& o) { return (psi.adjoint() * (o.matrix * psi))(0).real(); };
    const double r = x.bloch_radius2();
    EXPECT_NEAR(ev(jz) / 5.0, -1.0 + 0.5 * r, 1e-10);
    EXPECT_NEAR(ev(jx) / 5.0, x.Q * std::sqrt(1.0 - 0.25 * r), 1e-10);
    EXPECT_NEAR(ev(nn), 2.5 * (x.q * x.q + x.p * x.p), 1e-8);
  }
}

TEST(CoherentState, EnergyMatchesClassicalSurface) {
  std::mt19937_64 rng(5);
  const ModelParams p = small(5);
  const QuantumBasis b(5, 90);
  for (int i = 0; i < 20; ++i) {
    const auto x = test::random_state(rng, 2.0, 1.9);
    const double e = reduced_energy_expectation(build_coherent_state(x, b), p, b);
    EXPECT_NEAR(e, classical::hamiltonian(x, p).eps, 1e-8);
  }
}

TEST(CoherentState, DomainChecks) {
  const QuantumBasis b(5, 20);
  EXPECT_THROW(build_coherent_state({0, 0, 2.0, 0.0}, b), DomainError);
  try {
    (void)build_coherent_state({4.0, 0, 0, 0}, b);
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("n_max >="), std::string::npos);
  }
  EXPECT_LT(detail::poisson_tail(40.0, detail::suggested_cutoff(40.0)), kCoherentTailTolerance);
}

TEST(EigenvectorFile, RoundTrip) {
  const ModelParams p = small(2);
  const QuantumBasis b(2, 10);
  const auto s = diagonalize(build_hamiltonian(p, b), p, b);
  const auto path = std::filesystem::temp_directory_path() / "dicke_vectors_roundtrip.bin";
  io::write_eigenvectors(path, s);
  const auto r = io::read_eigenvectors(path);
  EXPECT_EQ(r.basis, b);
  EXPECT_EQ(r.params.lambda, p.lambda);
  EXPECT_EQ(r.energies, s.energies);
  EXPECT_EQ(r.vectors, s.vectors);
  EXPECT_TRUE(r.complete);
  { std::ofstream(path, std::ios::binary) << "NOTAVECS"; }
  EXPECT_THROW(io::read_eigenvectors(path), Error);
  std::filesystem::remove(path);
}
