#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "ptlat/spectra.hpp"
#include "support.hpp"

using namespace ptlat;

namespace {

LatticeHamiltonian<double> model(std::size_t n, std::vector<double> p) { return build_hamiltonian(n, CouplingVector<double>(std::move(p))); }

// Library-independent eigenvalues from Eigen's dense nonsymmetric solver, sorted (Re, Im).
std::vector<Complex> oracle_eigenvalues(const LatticeHamiltonian<double>& h) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(to_dense(h), false);
  std::vector<Complex> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(ev.begin(), ev.end(), [](Complex a, Complex b) {
    if (std::abs(a.real() - b.real()) > 1e-9) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return ev;
}

double max_distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  EXPECT_EQ(a.size(), b.size());
  return testing_support::matched_distance(a, b);
}

std::vector<double> laplacian_levels(std::size_t n) {
  std::vector<double> out;
  for (std::size_t k = 1; k <= n; ++k) out.push_back(2.0 - 2.0 * std::cos(static_cast<double>(k) * std::numbers::pi / static_cast<double>(n + 1)));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(Charpoly, LaplacianDeterminantIsNPlusOne) {
  EXPECT_NEAR(charpoly_eval(model(3, {0.0}), 0.0).real(), 4.0, 1e-13);
  EXPECT_NEAR(charpoly_eval(model(9, {0.0}), 0.0).real(), 10.0, 1e-12);
}

TEST(Charpoly, ThreeSiteHandFactorization) {
  for (double l : {-0.8, -0.1, 0.0, 0.5, 1.3}) {
    const auto h = model(3, {l});
    EXPECT_NEAR(std::abs(charpoly_eval(h, 2.0)), 0.0, 1e-14);
    for (double e : {0.3, 1.1, 3.7}) {
      const double x = 2.0 - e;
      EXPECT_NEAR(charpoly_eval(h, e).real(), x * (x * x - 2.0 * (1.0 - l * l)), 1e-12);
    }
  }
}

TEST(Charpoly, MatchesDenseDeterminant) {
  const auto h = model(5, {0.3});
  const Eigen::MatrixXd a = to_dense(h) - 1.7 * Eigen::MatrixXd::Identity(5, 5);
  EXPECT_NEAR(charpoly_eval(h, 1.7).real(), a.partialPivLu().determinant(), 1e-12);

  const auto h2 = model(11, {0.4, 1.6});
  const Complex e(1.2, 0.3);
  const Eigen::MatrixXcd b = to_dense(h2).cast<Complex>() - e * Eigen::MatrixXcd::Identity(11, 11);
  EXPECT_LT(std::abs(charpoly_eval(h2, e) - b.partialPivLu().determinant()), 1e-10);
}

TEST(Charpoly, DerivativeMatchesFiniteDifference) {
  const auto h = model(7, {0.45});
  const double e = 1.3, step = 1e-6;
  const auto [value, deriv] = charpoly_with_derivative(h, e);
  EXPECT_NEAR(value, charpoly_eval(h, e).real(), 1e-12);
  const double fd = (charpoly_eval(h, e + step).real() - charpoly_eval(h, e - step).real()) / (2 * step);
  EXPECT_NEAR(deriv, fd, 1e-6 * std::max(1.0, std::abs(fd)));
}

TEST(Symmetrize, OffdiagonalFromProducts) {
  const auto s = symmetrize(model(11, {0.5, 0.5}));
  ASSERT_EQ(s.offdiag.size(), 10u);
  const double c = std::sqrt(0.75);
  const std::vector<double> expected = {c, c, 1, 1, 1, 1, 1, 1, c, c};
  for (std::size_t i = 0; i < 10; ++i) EXPECT_NEAR(s.offdiag[i], expected[i], 1e-15);
  for (double d : s.diag) EXPECT_EQ(d, 2.0);

  for (double x : symmetrize(model(7, {0.0})).offdiag) EXPECT_EQ(x, 1.0);
}

TEST(Symmetrize, ReportsFirstFailingDepth) {
  try {
    symmetrize(model(7, {1.0}));
    FAIL() << "expected NotSymmetrizable";
  } catch (const NotSymmetrizable& e) {
    EXPECT_EQ(e.depth(), 1u);
  }
  try {
    symmetrize(model(11, {0.2, 1.5}));
    FAIL() << "expected NotSymmetrizable";
  } catch (const NotSymmetrizable& e) {
    EXPECT_EQ(e.depth(), 2u);
  }
  EXPECT_FALSE(is_symmetrizable(model(7, {-1.0})));
  EXPECT_TRUE(is_symmetrizable(model(7, {0.99})));
}

TEST(Sturm, CountIsMonotone) {
  const auto s = symmetrize(model(11, {0.6, 0.3}));
  const auto [lo, hi] = gershgorin_bounds(s);
  EXPECT_EQ(sturm_count(s, lo), 0u);
  EXPECT_EQ(sturm_count(s, hi), 11u);
  std::size_t prev = 0;
  for (double x = lo; x <= hi; x += 0.01) {
    const std::size_t c = sturm_count(s, x);
    EXPECT_GE(c, prev);
    prev = c;
  }
}

TEST(Eigenvalues, ThreeSiteHandSpectrum) {
  const Spectrum sp = eigenvalues(model(3, {0.5}));
  ASSERT_TRUE(sp.all_real());
  const double r = std::sqrt(1.5);
  EXPECT_NEAR(sp.eigenvalues[0].real(), 2 - r, 1e-12);
  EXPECT_NEAR(sp.eigenvalues[1].real(), 2.0, 1e-12);
  EXPECT_NEAR(sp.eigenvalues[2].real(), 2 + r, 1e-12);
}

TEST(Eigenvalues, LaplacianClosedForm) {
  for (std::size_t n : {3u, 5u, 11u, 51u}) {
    const Spectrum sp = eigenvalues(model(n, {0.0}));
    const auto levels = laplacian_levels(n);
    ASSERT_EQ(sp.size(), n);
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_NEAR(sp.eigenvalues[i].real(), levels[i], 1e-12) << "n=" << n;
      EXPECT_EQ(sp.eigenvalues[i].imag(), 0.0);
    }
  }
}

TEST(Eigenvalues, BothPathsAgreeOnSymmetrizableInstances) {
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> p(-0.95, 0.95);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t depth = 1 + trial % 3;
    const std::size_t n = 2 * depth + 1 + 2 * (trial % 6);
    std::vector<double> params(depth);
    for (auto& x : params) x = p(gen);
    const auto h = model(n, params);
    const Spectrum a = eigenvalues_sturm(h), b = eigenvalues_qr(h);
    EXPECT_LT(max_distance(a.eigenvalues, b.eigenvalues), 1e-9);
    EXPECT_TRUE(a.all_real());
  }
}

TEST(Eigenvalues, QrMatchesDenseOracleBeyondSymmetrizability) {
  std::mt19937_64 gen(29);
  std::uniform_real_distribution<double> p(-2.0, 2.0);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t depth = 1 + trial % 3;
    const std::size_t n = 2 * depth + 1 + trial % 9;
    std::vector<double> params(depth);
    for (auto& x : params) x = p(gen);
    const auto h = model(n, params);
    const Spectrum sp = eigenvalues(h);
    EXPECT_LT(max_distance(sp.eigenvalues, oracle_eigenvalues(h)), 1e-8) << "trial " << trial;
  }
}

TEST(Eigenvalues, TiedCouplingComplexifiesBeyondOne) {
  const Spectrum sp = eigenvalues(model(11, {1.05, 1.05}));
  EXPECT_LT(sp.real_count(), 11u);
  EXPECT_EQ((11 - sp.real_count()) % 2, 0u);
}

TEST(Eigenvalues, ConjugatePairsAndTrace) {
  std::mt19937_64 gen(31);
  std::uniform_real_distribution<double> p(-1.8, 1.8);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 7 + trial % 8;
    const auto h = model(n, {p(gen), p(gen)});
    const Spectrum sp = eigenvalues(h);
    Complex sum = 0.0, prod = 1.0;
    for (const auto& e : sp.eigenvalues) {
      sum += e;
      prod *= e;
      if (e.imag() != 0.0) {
        const bool has_conjugate = std::any_of(sp.eigenvalues.begin(), sp.eigenvalues.end(), [&](Complex f) { return f == std::conj(e); });
        EXPECT_TRUE(has_conjugate);
      }
    }
    EXPECT_NEAR(sum.real(), 2.0 * static_cast<double>(n), 1e-9);
    EXPECT_NEAR(sum.imag(), 0.0, 1e-9);
    const double det = charpoly_eval(h, 0.0).real();
    EXPECT_NEAR(prod.real(), det, 1e-9 * std::max(1.0, std::abs(det)));
  }
}

TEST(Eigenvalues, GershgorinDisk) {
  std::mt19937_64 gen(37);
  std::uniform_real_distribution<double> p(-2.5, 2.5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto h = model(11, {p(gen), p(gen)});
    double bound = 1.0;
    for (std::size_t i = 0; i < 10; ++i) bound = std::max({bound, std::abs(h.sup[i]), std::abs(h.sub[i])});
    for (const auto& e : eigenvalues(h).eigenvalues) EXPECT_LE(std::abs(e - 2.0), 2.0 * bound + 1e-12);
  }
}

TEST(Eigenvalues, SignFlipInvariance) {
  const double l = 0.7, m = 1.3;
  const Spectrum base = eigenvalues(model(11, {l, m}));
  for (auto [a, b] : {std::pair{-l, m}, std::pair{l, -m}, std::pair{-l, -m}}) {
    EXPECT_LT(max_distance(base.eigenvalues, eigenvalues(model(11, {a, b})).eigenvalues), 1e-10);
  }
}

TEST(RealCount, Examples) {
  EXPECT_EQ(real_count(model(11, {0.5, 0.75})), 11u);
  EXPECT_EQ(real_count(model(11, {0.0})), 11u);
  EXPECT_THROW(real_count(model(11, {0.0}), 0.0), std::invalid_argument);
  EXPECT_THROW(real_count(model(11, {0.0}), -1.0), std::invalid_argument);
}

TEST(RealCount, ShiftedLinkAtNinetyFiveHundredths) {
  // Independent high-precision evaluation (50-digit characteristic-polynomial roots)
  // gives five real levels at lambda = 0.95, mu = 1.2.
  EXPECT_EQ(real_count(model(11, {0.95, 1.2})), 5u);
}

TEST(EigenPairs, LaplacianSineVector) {
  const EigenPair ep = eigenpair(model(5, {0.0}), 2.0);
  const std::vector<double> expected = {1, 0, -1, 0, 1};
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_NEAR(ep.right_vector[i], expected[i], 1e-12);
    EXPECT_NEAR(ep.left_vector[i], expected[i], 1e-12);
  }
}

TEST(EigenPairs, ThreeSiteMiddleLevel) {
  // (H - 2) x = 0: the first row forces x2 = 0, the second x3 = -x1.
  const double l = 0.5;
  const EigenPair ep = eigenpair(model(3, {l}), 2.0);
  EXPECT_NEAR(ep.right_vector[0], 1.0, 1e-12);
  EXPECT_NEAR(ep.right_vector[1], 0.0, 1e-12);
  EXPECT_NEAR(ep.right_vector[2], -1.0, 1e-12);
}

TEST(EigenPairs, ResidualsAndNormalization) {
  const auto h = model(11, {0.4, 0.2});
  const Eigen::MatrixXd a = to_dense(h);
  for (const auto& e : eigenvalues(h).eigenvalues) {
    const EigenPair ep = eigenpair(h, e.real());
    const Eigen::Map<const Eigen::VectorXd> x(ep.right_vector.data(), 11), y(ep.left_vector.data(), 11);
    EXPECT_LT((a * x - ep.eigenvalue * x).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT((a.transpose() * y - ep.eigenvalue * y).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_NEAR(x.cwiseAbs().maxCoeff(), 1.0, 1e-15);
    EXPECT_NEAR(y.cwiseAbs().maxCoeff(), 1.0, 1e-15);
    bool found = false;
    for (Eigen::Index i = 0; i < 11 && !found; ++i) found = x(i) == 1.0;
    EXPECT_TRUE(found);
  }
}

TEST(EigenPairs, Errors) {
  EXPECT_THROW(eigenpair(model(5, {0.3}), 100.0), NotAnEigenvalue);
  EXPECT_THROW(eigenpair(model(5, {0.3}), 1.234), NotAnEigenvalue);
}

TEST(QrPath, RotationBlock) {
  Eigen::MatrixXd m(2, 2);
  m << 0, -1, 1, 0;
  const auto ev = hessenberg_qr_eigenvalues(m);
  ASSERT_EQ(ev.size(), 2u);
  EXPECT_NEAR(std::abs(ev[0].imag()), 1.0, 1e-14);
  EXPECT_NEAR(ev[0].real(), 0.0, 1e-14);
}
