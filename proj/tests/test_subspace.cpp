#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "subrot/instance_lab.hpp"
#include "subrot/subspace.hpp"
#include "test_helpers.hpp"

using namespace subrot;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kSinPi8 = std::sin(std::numbers::pi / 8.0);

OrthogonalProjection onto_diag(std::initializer_list<double> indicator) {
  return spectral_projection(symmetric_eigendecomposition(DenseSymmetric::diagonal(indicator)), 0.5, kInf);
}

}  // namespace

TEST(Angles, IdenticalProjections) {
  const auto p = onto_diag({1.0, 0.0, 1.0});
  const auto r = projection_distance_and_angles(p, p);
  EXPECT_EQ(r.norm_diff, 0.0);
  ASSERT_EQ(r.principal_angles.size(), 2u);
  for (double a : r.principal_angles) EXPECT_LE(a, 1e-15);
}

TEST(Angles, OrthogonalLines) {
  const auto r = projection_distance_and_angles(onto_diag({1.0, 0.0}), onto_diag({0.0, 1.0}));
  EXPECT_NEAR(r.norm_diff, 1.0, 1e-15);
  ASSERT_EQ(r.principal_angles.size(), 1u);
  EXPECT_NEAR(r.max_angle, std::numbers::pi / 2.0, 1e-15);
}

TEST(Angles, ExampleTwoByTwoRotation) {
  const auto pair = pair_2x2(-1.0, 1.0, 1.0);
  const auto P = spectral_projection(pair.decompA, -kInf, 0.0);  // onto e2
  const auto Q = spectral_projection(symmetric_eigendecomposition(pair.B), -kInf, 0.0);
  const auto r = projection_distance_and_angles(P, Q);
  EXPECT_NEAR(r.norm_diff, kSinPi8, 1e-14);
  EXPECT_NEAR(r.max_angle, std::numbers::pi / 8.0, 1e-14);
  // Explicit eigenvector arithmetic: the (-sqrt 2)-eigenvector is (1 - sqrt2, 1) normalized;
  // its cosine with e2 is 1 / sqrt((1 - sqrt2)^2 + 1).
  const double c = 1.0 / std::sqrt(std::pow(1.0 - std::numbers::sqrt2, 2) + 1.0);
  EXPECT_NEAR(std::cos(r.max_angle), c, 1e-14);
}

TEST(Angles, TinyAnglesAreResolved) {
  // Lines at angle 1e-9 apart: arccos alone would lose this entirely.
  const double t = 1e-9;
  Matrix m{{std::cos(t) * std::cos(t), std::cos(t) * std::sin(t)}, {std::cos(t) * std::sin(t), std::sin(t) * std::sin(t)}};
  const auto Q = spectral_projection(symmetric_eigendecomposition(DenseSymmetric::symmetrize(m)), 0.5, kInf);
  const auto r = projection_distance_and_angles(onto_diag({1.0, 0.0}), Q);
  EXPECT_NEAR(r.max_angle, t, 1e-15);
}

// norm_diff equals sin of the largest principal angle for equal ranks.
TEST(AnglesProperty, NormDiffIsSineOfMaxAngle) {
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    CounterRng rng(600, trial);
    const std::size_t n = 2 + rng.uniform_int(0, 12);
    const auto d1 = symmetric_eigendecomposition(subrot::testing::random_symmetric(n, rng));
    const auto d2 = symmetric_eigendecomposition(subrot::testing::random_symmetric(n, rng));
    const std::size_t k = 1 + rng.uniform_int(0, n - 2);
    const auto P = spectral_projection(d1, -kInf, 0.5 * (d1.eigenvalues[k - 1] + d1.eigenvalues[k]));
    const auto Q = spectral_projection(d2, -kInf, 0.5 * (d2.eigenvalues[k - 1] + d2.eigenvalues[k]));
    const auto r = projection_distance_and_angles(P, Q);
    ASSERT_EQ(r.rank_p, r.rank_q);
    EXPECT_GE(r.norm_diff, 0.0);
    EXPECT_LE(r.norm_diff, 1.0);
    EXPECT_NEAR(r.norm_diff, std::sin(r.max_angle), 1e-9);
    EXPECT_TRUE(std::is_sorted(r.principal_angles.begin(), r.principal_angles.end()));
  }
}

TEST(SignIdentity, Examples) {
  const auto J = DenseSymmetric::diagonal({1.0, -1.0});
  EXPECT_EQ(sign_difference_identity(J, DenseSymmetric::diagonal({1.0, -1.0})), 0.0);
  // J - B/sqrt2 has eigenvalues +-sqrt(2 - sqrt2).
  EXPECT_NEAR(sign_difference_identity(J, DenseSymmetric({{1.0, 1.0}, {1.0, -1.0}})),
              0.5 * std::sqrt(2.0 - std::numbers::sqrt2), 1e-15);
  EXPECT_NEAR(sign_difference_identity(J, DenseSymmetric::diagonal({-1.0, 1.0})), 1.0, 1e-15);
}

TEST(Sectoriality, Examples) {
  EXPECT_NEAR(sectoriality_check(pair_2x2(-1.0, 1.0, 0.0), 0.0, 0.0), 0.0, 1e-15);
  EXPECT_NEAR(sectoriality_check(pair_2x2(-1.0, 1.0, 1.0), 0.0, std::atan(1.0)), 0.0, 1e-9);
  EXPECT_GE(sectoriality_check(pair_2x2(-1.0, 1.0, 0.5), 0.0, std::atan(0.5)), -1e-12);
}

TEST(SignConstancy, Examples) {
  const auto zero = pair_2x2(-1.0, 1.0, 0.0);
  const auto g0 = detect_gap(zero.decompA, zero.J);
  EXPECT_EQ(sign_constancy_scan(zero, g0, 9).max_deviation, 0.0);
  const auto ex = pair_2x2(-1.0, 1.0, 1.0);
  const auto s = sign_constancy_scan(ex, detect_gap(ex.decompA, ex.J), 9);
  EXPECT_LE(s.max_deviation, 1e-12);
  EXPECT_EQ(s.samples, 9u);
  EXPECT_FALSE(s.gap_failure);
}

TEST(SignConstancy, RandomCentralInstance) {
  GeneratorConfig c = GeneratorConfig::defaults(Geometry::Central);
  c.n_plus = 6;
  c.n_minus = 5;
  c.target_v = {2.0, 2.0};
  const auto pair = assemble(generate_instance(c, 0), Layout::Central);
  const auto g = detect_gap(pair.decompA, pair.J);
  ASSERT_TRUE(gap_persistence_check(pair, g));
  EXPECT_LE(sign_constancy_scan(pair, g, 9).max_deviation, 1e-10);
}

TEST(GapPersistence, Examples) {
  const auto zero = pair_2x2(-1.0, 1.0, 0.0);
  EXPECT_TRUE(gap_persistence_check(zero, detect_gap(zero.decompA, zero.J)));
  for (double w : {0.1, 1.0, 7.0}) {
    const auto p = pair_2x2(-1.0, 1.0, w);
    EXPECT_TRUE(gap_persistence_check(p, detect_gap(p.decompA, p.J))) << w;
  }
}

TEST(GapPersistence, DiagonalPerturbationNegativeControl) {
  const auto p = pair_2x2(-1.0, 1.0, 0.0);
  const auto g = detect_gap(p.decompA, p.J);
  const DenseSymmetric B = p.A + DenseSymmetric::diagonal({-1.5, 0.0});  // eigenvalue -0.5 in the gap
  EXPECT_FALSE(gap_persistence_check(B, g));
}

TEST(GapProjections, ConventionsPerCase) {
  const auto central = pair_2x2(-2.0, 1.0, 0.5);
  const auto gc = gap_projections(central, detect_gap(central.decompA, central.J));
  EXPECT_EQ(gc.cut, 0.0);
  EXPECT_EQ(gc.P.rank, 1u);
  const auto case2 = pair_2x2(1.0, 3.0, 0.5);
  const auto g2 = gap_projections(case2, detect_gap(case2.decompA, case2.J));
  EXPECT_EQ(g2.cut, 2.0);
  EXPECT_EQ(g2.P.rank, 1u);
  EXPECT_EQ(g2.Q.rank, 1u);
}

TEST(Shifted, SubtractsFromDiagonal) {
  EXPECT_EQ(shifted(DenseSymmetric({{1.0, 2.0}, {2.0, 3.0}}), 1.0).matrix(), (Matrix{{0.0, 2.0}, {2.0, 2.0}}));
}
