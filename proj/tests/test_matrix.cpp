#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "parasum/linalg.hpp"
#include "parasum/parasum.hpp"
#include "parasum/random.hpp"
#include "test_support.hpp"

using namespace parasum;

namespace {

const complex I1(0.0, 1.0);

TEST(ComplexMatrix, ConstructionAndShape) {
  ComplexMatrix m{{1, 2, 3}, {4, 5, 6}};
  EXPECT_EQ(m.rows(), 2u);
  EXPECT_EQ(m.cols(), 3u);
  EXPECT_EQ(m(1, 2), complex(6));
  EXPECT_EQ(m.transpose()(2, 1), complex(6));
  EXPECT_EQ(m.shape_string(), "2x3");
  EXPECT_THROW((ComplexMatrix{{1, 2}, {3}}), DimensionError);
  EXPECT_THROW(ComplexMatrix(2, 2, std::vector<complex>(3)), DimensionError);
}

TEST(ComplexMatrix, RejectsNonFiniteEntries) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_THROW(ComplexMatrix(1, 1, {complex(nan, 0)}), std::domain_error);
  EXPECT_THROW(ComplexMatrix(1, 1, {complex(0, inf)}), std::domain_error);
}

TEST(ComplexMatrix, Arithmetic) {
  ComplexMatrix a{{1, I1}, {0, 2}};
  ComplexMatrix b{{0, 1}, {1, 0}};
  EXPECT_EQ(a * b, (ComplexMatrix{{I1, 1}, {2, 0}}));
  EXPECT_EQ(a + b, (ComplexMatrix{{1, 1.0 + I1}, {1, 2}}));
  EXPECT_EQ(a.adjoint(), (ComplexMatrix{{1, 0}, {-I1, 2}}));
  EXPECT_EQ(a.trace(), complex(3));
  EXPECT_THROW(a * ComplexMatrix(3, 1), DimensionError);
  EXPECT_THROW(a + ComplexMatrix(2, 3), DimensionError);
  EXPECT_DOUBLE_EQ(ComplexMatrix({{3, 4}}).frobenius_norm(), 5.0);
}

TEST(ComplexMatrix, BlocksAndStacking) {
  const auto m = block2x2(ComplexMatrix{{1}}, ComplexMatrix{{2}}, ComplexMatrix{{3}},
                          ComplexMatrix{{4}});
  EXPECT_EQ(m, (ComplexMatrix{{1, 2}, {3, 4}}));
  EXPECT_EQ(m.block(1, 0, 1, 2), (ComplexMatrix{{3, 4}}));
  EXPECT_EQ(hstack(ComplexMatrix{{1}, {2}}, ComplexMatrix{{3}, {4}}), m.transpose());
}

TEST(OperatorNorm, Examples) {
  EXPECT_NEAR(operator_norm(ComplexMatrix{{1.0 - I1}}), std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(operator_norm(ComplexMatrix::diagonal({3, -1})), 3.0, 1e-14);
  EXPECT_EQ(operator_norm(ComplexMatrix(3, 2)), 0.0);
}

TEST(OperatorNorm, MatchesPowerIteration) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    auto rng = gen::trial_rng(11, s);
    const auto t = gen::gaussian(rng, 8, 8);
    EXPECT_NEAR(operator_norm(t), oracle::power_norm(t), 1e-8) << "trial " << s;
  }
}

TEST(OperatorNorm, HermitianEqualsSpectralRadius) {
  auto rng = gen::trial_rng(12, 0);
  const auto h = hermitian_part(gen::gaussian(rng, 6, 6));
  const auto e = hermitian_eigen(h);
  EXPECT_NEAR(operator_norm(h), std::max(-e.values.front(), e.values.back()), 1e-12);
}

TEST(HermitianEigen, ReconstructsAndIsOrthonormal) {
  for (std::size_t n : {1u, 2u, 5u, 16u, 32u}) {
    auto rng = gen::trial_rng(13, n);
    const auto h = hermitian_part(gen::gaussian(rng, n, n));
    const auto e = hermitian_eigen(h);
    ComplexMatrix d(n, n);
    for (std::size_t i = 0; i < n; ++i) d(i, i) = e.values[i];
    EXPECT_TRUE(MatrixNear(e.vectors * d * e.vectors.adjoint(), h, 1e-12 * (1 + n)));
    EXPECT_TRUE(MatrixNear(e.vectors.adjoint() * e.vectors, ComplexMatrix::identity(n), 1e-12));
    for (std::size_t i = 1; i < n; ++i) EXPECT_LE(e.values[i - 1], e.values[i]);
  }
}

TEST(HermitianEigen, KnownSpectrum) {
  // rho(i) = [[0, i], [-i, 0]] has eigenvalues -1, 1
  const auto e = hermitian_eigen(ComplexMatrix{{0, I1}, {-I1, 0}});
  EXPECT_NEAR(e.values[0], -1.0, 1e-15);
  EXPECT_NEAR(e.values[1], 1.0, 1e-15);
}

TEST(Svd, ReconstructsRectangularAndRankDeficient) {
  for (auto [m, n, r] : {std::tuple{5u, 3u, 3u}, {3u, 5u, 2u}, {7u, 7u, 0u}, {16u, 9u, 4u}}) {
    auto rng = gen::trial_rng(14, m * 100 + n);
    const auto t = gen::rank_r(rng, m, n, r);
    const auto d = svd(t);
    ComplexMatrix s(d.s.size(), d.s.size());
    for (std::size_t i = 0; i < d.s.size(); ++i) s(i, i) = d.s[i];
    const auto uk = d.u.block(0, 0, m, d.s.size());
    const auto vk = d.v.block(0, 0, n, d.s.size());
    EXPECT_TRUE(MatrixNear(uk * s * vk.adjoint(), t, 1e-12));
    EXPECT_EQ(rank(t), r);
    for (std::size_t i = 1; i < d.s.size(); ++i) EXPECT_GE(d.s[i - 1], d.s[i]);
  }
}

TEST(IsPositive, Examples) {
  EXPECT_TRUE(is_positive(ComplexMatrix::identity(3)));
  EXPECT_FALSE(is_positive(ComplexMatrix{{0, I1}, {-I1, 0}}));
  auto rng = gen::trial_rng(15, 0);
  const auto g = gen::gaussian(rng, 5, 3);
  EXPECT_TRUE(is_positive(g * g.adjoint()));
  EXPECT_FALSE(is_positive(ComplexMatrix{{1, 1}, {0, 1}}));  // not Hermitian
  EXPECT_THROW(is_positive(ComplexMatrix(2, 3)), DimensionError);
}

TEST(PsdSqrt, Examples) {
  EXPECT_TRUE(MatrixNear(psd_sqrt(ComplexMatrix::diagonal({4, 0})),
                         ComplexMatrix::diagonal({2, 0}), 1e-14));
  EXPECT_TRUE(MatrixNear(psd_sqrt(ComplexMatrix::identity(4)), ComplexMatrix::identity(4), 1e-14));
  EXPECT_THROW(psd_sqrt(ComplexMatrix::diagonal({1, -1})), NotPositiveError);
}

TEST(PsdSqrt, RoundTripAndCommutation) {
  for (std::uint64_t s = 0; s < 1000; ++s) {
    auto rng = gen::trial_rng(16, s);
    const std::size_t n = gen::uniform_index(rng, 1, 32);
    const auto t = gen::psd(rng, n, gen::uniform_index(rng, 0, n));
    const auto r = psd_sqrt(t);
    const double scale = 1.0 + operator_norm(t);
    ASSERT_LE((r * r - t).frobenius_norm(), 1e-9 * scale) << "trial " << s;
    ASSERT_LE((r * t - t * r).frobenius_norm(), 1e-9 * scale) << "trial " << s;
    ASSERT_TRUE(is_positive(r));
  }
}

TEST(AbsValue, Examples) {
  EXPECT_TRUE(MatrixNear(abs_value(ComplexMatrix{{0, 2}, {0, 0}}), ComplexMatrix::diagonal({0, 2}),
                         1e-14));
  auto rng = gen::trial_rng(17, 0);
  const auto p = gen::psd(rng, 5, 3);
  EXPECT_TRUE(MatrixNear(abs_value(p), p, 1e-12));
}

TEST(AbsValue, PreservesVectorNorms) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    auto rng = gen::trial_rng(18, s);
    const std::size_t m = gen::uniform_index(rng, 1, 10), n = gen::uniform_index(rng, 1, 10);
    const auto t = gen::gaussian(rng, m, n);
    const auto a = abs_value(t);
    const auto x = gen::gaussian(rng, n, 1);
    EXPECT_NEAR((a * x).frobenius_norm(), (t * x).frobenius_norm(), 1e-8);
  }
}

TEST(RangeProjector, Examples) {
  const auto p = range_projector(ComplexMatrix::diagonal({1, 0}));
  EXPECT_EQ(p.dim, 1u);
  EXPECT_TRUE(MatrixNear(p.projector, ComplexMatrix::diagonal({1, 0}), 1e-15));
  const auto z = range_projector(ComplexMatrix(3, 3));
  EXPECT_EQ(z.dim, 0u);
  EXPECT_EQ(z.projector, ComplexMatrix(3, 3));
}

TEST(RangeProjector, GramAndFractionalPowers) {
  const TolerancePolicy tol{1e-10, 1e-8, 1e-10};
  for (std::uint64_t s = 0; s < 300; ++s) {
    auto rng = gen::trial_rng(19, s);
    const std::size_t m = gen::uniform_index(rng, 1, 12), n = gen::uniform_index(rng, 1, 12);
    const auto t = gen::rank_r(rng, m, n, gen::uniform_index(rng, 0, std::min(m, n)));
    EXPECT_TRUE(MatrixNear(range_projector(t, tol).projector,
                           range_projector(t * t.adjoint(), tol).projector, 1e-8));
    const auto p = gen::psd(rng, m, gen::uniform_index(rng, 0, m));
    const auto pp = range_projector(p, tol).projector;
    for (double alpha : {0.25, 0.5, 0.75})
      EXPECT_TRUE(MatrixNear(range_projector(psd_power(p, alpha, tol), tol).projector, pp, 1e-8))
          << "alpha " << alpha << " trial " << s;
  }
}

TEST(RangeContains, Examples) {
  EXPECT_TRUE(range_contains(ComplexMatrix::diagonal({1, 0}), ComplexMatrix::identity(2)));
  EXPECT_FALSE(range_contains(ComplexMatrix::diagonal({1, 0}), ComplexMatrix::diagonal({0, 1})));
  EXPECT_THROW(range_contains(ComplexMatrix(2, 2), ComplexMatrix(3, 3)), DimensionError);
  // A psd, B = A + psd with B invertible
  auto rng = gen::trial_rng(20, 0);
  const auto a = gen::psd(rng, 6, 2);
  const auto b = a + gen::psd(rng, 6, 6);
  EXPECT_TRUE(range_contains(a, b));
}

TEST(Subspaces, MeetAndJoinExamples) {
  const auto m = range_projector(ComplexMatrix::diagonal({1, 1, 0}));
  EXPECT_EQ(subspace_meet(m, m).dim, 2u);
  EXPECT_TRUE(MatrixNear(subspace_join(m, m).projector, m.projector, 1e-14));
  const auto x = range_projector(ComplexMatrix::diagonal({1, 0}));
  const auto y = range_projector(ComplexMatrix::diagonal({0, 1}));
  EXPECT_EQ(subspace_meet(x, y).dim, 0u);
  EXPECT_TRUE(MatrixNear(subspace_join(x, y).projector, ComplexMatrix::identity(2), 1e-14));
}

TEST(Subspaces, ComplementOfMeetIsJoinOfComplements) {
  const TolerancePolicy tol{1e-10, 1e-8, 1e-10};
  for (std::uint64_t s = 0; s < 200; ++s) {
    auto rng = gen::trial_rng(21, s);
    const std::size_t n = gen::uniform_index(rng, 1, 10);
    // planted intersection of known dimension
    const auto w = gen::unitary(rng, n);
    const std::size_t c = gen::uniform_index(rng, 0, n);
    const std::size_t p = gen::uniform_index(rng, 0, n - c), q = gen::uniform_index(rng, 0, n - c - p);
    const auto shared = gen::columns(w, 0, c);
    const auto m = range_projector(hstack(shared, gen::columns(w, c, p)), tol);
    const auto nn = range_projector(
        hstack(shared, gen::columns(w, c, n - c) * gen::gaussian(rng, n - c, q)), tol);
    const auto meet = subspace_meet(m, nn, tol);
    EXPECT_EQ(meet.dim, c);
    const auto lhs = orthogonal_complement(meet);
    const auto rhs = subspace_join(orthogonal_complement(m), orthogonal_complement(nn), tol);
    EXPECT_TRUE(MatrixNear(lhs.projector, rhs.projector, 1e-8)) << "trial " << s;
  }
}

TEST(Subspaces, ProjectorInvariants) {
  auto rng = gen::trial_rng(22, 0);
  const auto p = range_projector(gen::rank_r(rng, 8, 8, 3));
  EXPECT_TRUE(is_projector(p.projector));
  EXPECT_NEAR(p.projector.trace().real(), static_cast<double>(p.dim), 0.1);
  EXPECT_FALSE(is_projector(ComplexMatrix::diagonal({2, 0})));
}

TEST(RhoEmbed, NormMatches) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    auto rng = gen::trial_rng(23, s);
    const auto t = gen::gaussian(rng, gen::uniform_index(rng, 1, 8), gen::uniform_index(rng, 1, 8));
    EXPECT_NEAR(operator_norm(rho_embed(t)), operator_norm(t), 1e-10);
  }
}

TEST(TolerancePolicy, DefaultsAndValidation) {
  TolerancePolicy t;
  EXPECT_DOUBLE_EQ(t.relative_cutoff(3, 5), 5 * std::ldexp(1.0, -52));
  EXPECT_EQ(t.eq_atol, 1e-8);
  EXPECT_EQ(t.psd_atol, 1e-10);
  t.eq_atol = 0.0;
  EXPECT_THROW(t.validate(), std::invalid_argument);
}

}  // namespace
