#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "subrot/linalg.hpp"
#include "test_helpers.hpp"

using namespace subrot;
using subrot::testing::random_symmetric;
using subrot::testing::random_unit;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST(DenseSymmetric, RejectsAsymmetricInput) {
  EXPECT_THROW(DenseSymmetric({{1.0, 2.0}, {2.1, 1.0}}), Error);
  EXPECT_THROW(DenseSymmetric(Matrix(2, 3)), Error);
}

TEST(DenseSymmetric, StoresSymmetrizedAverage) {
  const DenseSymmetric m({{1.0, 2.0 + 1e-13}, {2.0, 1.0}});
  EXPECT_EQ(m(0, 1), m(1, 0));
  EXPECT_NEAR(m(0, 1), 2.0, 1e-12);
}

TEST(DenseSymmetric, RejectsNonFinite) {
  EXPECT_THROW(DenseSymmetric({{std::nan(""), 0.0}, {0.0, 1.0}}), Error);
  EXPECT_THROW(DenseRect({{1.0, kInf}}), Error);
}

TEST(Eigendecomposition, IdentityKeepsIdentityBasis) {
  const auto d = symmetric_eigendecomposition(DenseSymmetric::identity(3));
  EXPECT_EQ(d.eigenvalues, (std::vector<double>{1.0, 1.0, 1.0}));
  EXPECT_EQ(d.basis, Matrix::identity(3));
}

TEST(Eigendecomposition, DiagonalInputIsSortedOnly) {
  const auto d = symmetric_eigendecomposition(DenseSymmetric({{2.0, 0.0}, {0.0, -1.0}}));
  EXPECT_EQ(d.eigenvalues, (std::vector<double>{-1.0, 2.0}));
  EXPECT_EQ(d.basis, (Matrix{{0.0, 1.0}, {1.0, 0.0}}));
}

TEST(Eigendecomposition, TwoByTwoClosedForm) {
  // lambda^2 - 2 = 0
  const auto d = symmetric_eigendecomposition(DenseSymmetric({{1.0, 1.0}, {1.0, -1.0}}));
  EXPECT_NEAR(d.eigenvalues[0], -std::numbers::sqrt2, 1e-15);
  EXPECT_NEAR(d.eigenvalues[1], std::numbers::sqrt2, 1e-15);
}

TEST(Eigendecomposition, SignConventionLargestComponentPositive) {
  CounterRng rng(3, 0);
  const auto d = symmetric_eigendecomposition(random_symmetric(7, rng));
  for (std::size_t k = 0; k < 7; ++k) {
    std::size_t arg = 0;
    for (std::size_t i = 1; i < 7; ++i)
      if (std::abs(d.basis(i, k)) > std::abs(d.basis(arg, k))) arg = i;
    EXPECT_GT(d.basis(arg, k), 0.0);
  }
}

TEST(Eigendecomposition, Deterministic) {
  CounterRng rng(11, 0);
  const auto m = random_symmetric(12, rng);
  const auto a = symmetric_eigendecomposition(m);
  const auto b = symmetric_eigendecomposition(m);
  EXPECT_EQ(a.eigenvalues, b.eigenvalues);
  EXPECT_EQ(a.basis, b.basis);
}

TEST(Eigendecomposition, SweepCapRaisesConvergenceError) {
  CounterRng rng(5, 0);
  try {
    symmetric_eigendecomposition(random_symmetric(6, rng), JacobiOptions{1e-14, 0});
    FAIL() << "expected a convergence failure";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Convergence);
    EXPECT_GT(e.value(), 0.0);
  }
}

TEST(Eigendecomposition, OneByOneAndZeroMatrix) {
  const auto one = symmetric_eigendecomposition(DenseSymmetric({{-4.5}}));
  EXPECT_EQ(one.eigenvalues, std::vector<double>{-4.5});
  EXPECT_EQ(one.basis(0, 0), 1.0);
  const auto zero = symmetric_eigendecomposition(DenseSymmetric::zero(4));
  for (double l : zero.eigenvalues) EXPECT_EQ(l, 0.0);
}

// Reconstruction and orthonormality across sizes up to 100.
TEST(EigendecompositionProperty, ReconstructionAndOrthonormality) {
  for (std::uint64_t trial = 0; trial < 30; ++trial) {
    CounterRng rng(2024, trial);
    const std::size_t n = 1 + rng.uniform_int(0, 99);
    const double scale = std::pow(10.0, rng.uniform(-3.0, 3.0));
    const auto m = random_symmetric(n, rng, scale);
    const auto d = symmetric_eigendecomposition(m);

    EXPECT_TRUE(std::is_sorted(d.eigenvalues.begin(), d.eigenvalues.end()));
    const double ortho = max_abs_diff(d.basis.transposed() * d.basis, Matrix::identity(n));
    EXPECT_LE(ortho, 1e-12) << "n=" << n;
    const auto rec = apply_spectral_function(d, spectral::identity());
    const double norm = d.spectral_radius();
    EXPECT_LE(max_abs_diff(rec.matrix(), m.matrix()), 1e-11 * std::max(1.0, norm)) << "n=" << n;
  }
}

TEST(SpectralFunction, IdentityReconstructs) {
  const DenseSymmetric m({{2.0, -1.0, 0.5}, {-1.0, 3.0, 0.25}, {0.5, 0.25, -1.0}});
  const auto rec = apply_spectral_function(symmetric_eigendecomposition(m), spectral::identity());
  EXPECT_LE(max_abs_diff(rec.matrix(), m.matrix()), 1e-11 * 4.0);
}

TEST(SpectralFunction, SignOfReflection) {
  // B^2 = 2I, so sign(B) = B / sqrt(2).
  const DenseSymmetric b({{1.0, 1.0}, {1.0, -1.0}});
  const auto s = apply_spectral_function(symmetric_eigendecomposition(b), spectral::sign());
  const Matrix expected = (1.0 / std::numbers::sqrt2) * b.matrix();
  EXPECT_LE(max_abs_diff(s.matrix(), expected), 1e-15);
}

TEST(SpectralFunction, InverseSqrtOfDiagonal) {
  const auto s = apply_spectral_function(symmetric_eigendecomposition(DenseSymmetric({{4.0, 0.0}, {0.0, 9.0}})),
                                         spectral::inverse_sqrt());
  EXPECT_NEAR(s(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(s(1, 1), 1.0 / 3.0, 1e-15);
  EXPECT_EQ(s(0, 1), 0.0);
}

TEST(SpectralFunction, ForbiddenBandNamesEigenvalue) {
  const auto d = symmetric_eigendecomposition(DenseSymmetric({{1.0, 0.0}, {0.0, 1e-12}}));
  try {
    apply_spectral_function(d, spectral::sign());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NearSingular);
    EXPECT_EQ(e.value(), 1e-12);
  }
  EXPECT_THROW(apply_spectral_function(symmetric_eigendecomposition(DenseSymmetric({{-1.0}})),
                                       spectral::inverse_sqrt()),
               Error);
}

TEST(SpectralFunctionProperty, SquareOfSqrtOnPositiveMatrices) {
  for (std::uint64_t trial = 0; trial < 10; ++trial) {
    CounterRng rng(77, trial);
    const std::size_t n = 2 + rng.uniform_int(0, 10);
    const auto g = random_symmetric(n, rng);
    Matrix spd = g.matrix() * g.matrix();
    for (std::size_t i = 0; i < n; ++i) spd(i, i) += 0.5;
    const DenseSymmetric m(DenseSymmetric::symmetrize(spd));
    const auto d = symmetric_eigendecomposition(m);
    // (square o sqrt) in one pass vs sqrt, re-decompose, square.
    const auto direct = apply_spectral_function(d, spectral::custom([](double x) { return std::pow(std::sqrt(x), 2); }));
    const auto root = apply_spectral_function(d, spectral::sqrt());
    const auto composed = apply_spectral_function(symmetric_eigendecomposition(root), spectral::square());
    EXPECT_LE(max_abs_diff(direct.matrix(), composed.matrix()), 1e-9);
  }
}

TEST(SpectralProjection, DiagonalUpperHalf) {
  const auto p = spectral_projection(symmetric_eigendecomposition(DenseSymmetric({{1.0, 0.0}, {0.0, -1.0}})), 0.0, kInf);
  EXPECT_EQ(p.rank, 1u);
  EXPECT_EQ(p.matrix.matrix(), (Matrix{{1.0, 0.0}, {0.0, 0.0}}));
}

TEST(SpectralProjection, FullLineIsIdentity) {
  CounterRng rng(9, 0);
  const auto p = spectral_projection(symmetric_eigendecomposition(random_symmetric(5, rng)), -kInf, kInf);
  EXPECT_EQ(p.rank, 5u);
  EXPECT_LE(max_abs_diff(p.matrix.matrix(), Matrix::identity(5)), 1e-14);
}

TEST(SpectralProjection, LowerEigenvectorOfReflection) {
  const auto d = symmetric_eigendecomposition(DenseSymmetric({{1.0, 1.0}, {1.0, -1.0}}));
  const auto p = spectral_projection(d, -kInf, 0.0);
  EXPECT_EQ(p.rank, 1u);
  // Eigenvector of -sqrt(2) by hand: (1 - sqrt(2), 1), normalized.
  std::vector<double> v{1.0 - std::numbers::sqrt2, 1.0};
  const double nv = std::sqrt(dot(v, v));
  for (double& x : v) x /= nv;
  const auto pv = p.matrix.matrix() * std::span<const double>(v);
  EXPECT_NEAR(pv[0], v[0], 1e-14);
  EXPECT_NEAR(pv[1], v[1], 1e-14);
}

TEST(SpectralProjection, AmbiguousCut) {
  const auto d = symmetric_eigendecomposition(DenseSymmetric({{1.0, 0.0}, {0.0, -1.0}}));
  try {
    spectral_projection(d, 1.0, kInf);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::AmbiguousCut);
  }
}

TEST(SpectralProjectionProperty, IdempotentAndComplete) {
  for (std::uint64_t trial = 0; trial < 10; ++trial) {
    CounterRng rng(31, trial);
    const std::size_t n = 1 + rng.uniform_int(0, 20);
    const auto d = symmetric_eigendecomposition(random_symmetric(n, rng));
    const double c = 0.0137;
    const auto lo = spectral_projection(d, -kInf, c);
    const auto hi = spectral_projection(d, c, kInf);
    EXPECT_LE(max_abs_diff((lo.matrix + hi.matrix).matrix(), Matrix::identity(n)), 1e-12);
    EXPECT_LE(max_abs_diff(lo.matrix.matrix() * lo.matrix.matrix(), lo.matrix.matrix()), 1e-10);
    double trace = 0.0;
    for (std::size_t i = 0; i < n; ++i) trace += lo.matrix(i, i);
    EXPECT_NEAR(trace, static_cast<double>(lo.rank), 1e-8);
  }
}

TEST(OperatorNorm, Examples) {
  EXPECT_EQ(operator_norm(DenseSymmetric::zero(3)), 0.0);
  EXPECT_NEAR(operator_norm(DenseSymmetric({{0.0, 3.0}, {3.0, 0.0}})), 3.0, 1e-15);
  EXPECT_NEAR(operator_norm(DenseRect({{3.0}, {4.0}})), 5.0, 1e-15);
  EXPECT_NEAR(operator_norm(DenseRect({{3.0, 4.0}})), 5.0, 1e-15);
}

// The operator norm dominates every sampled Rayleigh quotient and is nearly attained.
TEST(OperatorNormProperty, SampledRayleighLowerBound) {
  for (std::uint64_t trial = 0; trial < 5; ++trial) {
    CounterRng rng(101, trial);
    const std::size_t n = 2 + rng.uniform_int(0, 8);
    const auto m = random_symmetric(n, rng);
    const double norm = operator_norm(m);
    double best = 0.0;
    for (int s = 0; s < 10000; ++s) {
      const auto x = random_unit(n, rng);
      best = std::max(best, std::abs(subrot::testing::quadratic_form(m.matrix(), x)));
    }
    EXPECT_LE(best, norm + 1e-12);
    // Attainment: the top eigenvector reaches it exactly.
    const auto d = symmetric_eigendecomposition(m);
    const std::size_t top = std::abs(d.eigenvalues.front()) > std::abs(d.eigenvalues.back()) ? 0 : n - 1;
    EXPECT_NEAR(std::abs(subrot::testing::quadratic_form(m.matrix(), d.eigenvector(top))), norm, 1e-6);
  }
}

TEST(Tolerance, ScalesWithNormAndIsConfigurable) {
  EXPECT_DOUBLE_EQ(spectral_tolerance(0.5), 1e-9);
  EXPECT_DOUBLE_EQ(spectral_tolerance(10.0), 1e-8);
  set_spectral_tol_factor(1e-6);
  EXPECT_DOUBLE_EQ(spectral_tolerance(2.0), 2e-6);
  set_spectral_tol_factor(kDefaultSpectralTolFactor);
  EXPECT_THROW(set_spectral_tol_factor(-1.0), Error);
}
