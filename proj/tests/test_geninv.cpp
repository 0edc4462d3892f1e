#include <gtest/gtest.h>

#include "parasum/geninv.hpp"
#include "parasum/random.hpp"
#include "test_support.hpp"

using namespace parasum;

namespace {

const complex I1(0.0, 1.0);

TEST(MpInverse, Examples) {
  EXPECT_TRUE(MatrixNear(mp_inverse(ComplexMatrix{{I1}}), ComplexMatrix{{-I1}}, 1e-15));
  EXPECT_TRUE(MatrixNear(mp_inverse(ComplexMatrix{{1, 1}, {1, 1}}),
                         ComplexMatrix{{0.25, 0.25}, {0.25, 0.25}}, 1e-14));
  EXPECT_TRUE(MatrixNear(mp_inverse(ComplexMatrix::diagonal({2, 0})),
                         ComplexMatrix::diagonal({0.5, 0}), 1e-15));
  EXPECT_EQ(mp_inverse(ComplexMatrix(2, 3)), ComplexMatrix(3, 2));
}

TEST(MpInverse, RectangularShape) {
  ComplexMatrix row{{3, 4}};
  const auto x = mp_inverse(row);
  EXPECT_EQ(x.rows(), 2u);
  EXPECT_EQ(x.cols(), 1u);
  EXPECT_TRUE(MatrixNear(x, ComplexMatrix{{3.0 / 25}, {4.0 / 25}}, 1e-15));
}

TEST(MpInverse, MatchesNormalEquationOracle) {
  for (std::uint64_t s = 0; s < 200; ++s) {
    auto rng = gen::trial_rng(31, s);
    const std::size_t n = gen::uniform_index(rng, 1, 8);
    const std::size_t m = gen::uniform_index(rng, n, 12);
    const auto t = gen::rank_r(rng, m, n, n);
    EXPECT_TRUE(MatrixNear(mp_inverse(t), oracle::pinv_full_column_rank(t), 1e-9)) << s;
  }
}

TEST(MpInverse, InvertibleMatchesGaussJordan) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    auto rng = gen::trial_rng(32, s);
    const std::size_t n = gen::uniform_index(rng, 1, 16);
    const auto t = gen::rank_r(rng, n, n, n);
    EXPECT_TRUE(MatrixNear(mp_inverse(t), oracle::gauss_jordan_inverse(t), 1e-9)) << s;
  }
}

TEST(MpInverse, PenroseEquationsOnRandomRanks) {
  for (std::uint64_t s = 0; s < 500; ++s) {
    auto rng = gen::trial_rng(33, s);
    const std::size_t m = gen::uniform_index(rng, 1, 16), n = gen::uniform_index(rng, 1, 16);
    const auto t = gen::rank_r(rng, m, n, gen::uniform_index(rng, 0, std::min(m, n)));
    const auto x = mp_inverse(t);
    const auto r = verify_penrose(t, x);
    ASSERT_LE(r.max(), 1e-9 * (1.0 + t.frobenius_norm())) << s;
    ASSERT_TRUE(r.accepts(t, x, 1e-8));
    ASSERT_EQ(rank(x), rank(t));
    ASSERT_TRUE(MatrixNear(mp_inverse(x), t, 1e-8));
    ASSERT_TRUE(MatrixNear(mp_inverse(t.adjoint()), x.adjoint(), 1e-10));
  }
}

TEST(VerifyPenrose, Examples) {
  const auto t = ComplexMatrix::diagonal({2, 0});
  EXPECT_EQ(verify_penrose(t, ComplexMatrix::diagonal({0.5, 0})).max(), 0.0);
  // identity is a {1}-inverse of diag(1,0) but fails the second equation
  const auto r = verify_penrose(ComplexMatrix::diagonal({1, 0}), ComplexMatrix::identity(2));
  EXPECT_EQ(r.r1, 0.0);
  EXPECT_NEAR(r.r2, 1.0, 1e-15);
  EXPECT_THROW(verify_penrose(ComplexMatrix(2, 3), ComplexMatrix(2, 3)), DimensionError);
}

TEST(OneInverse, Examples) {
  const auto t = ComplexMatrix::diagonal({1, 0});
  const auto v = ComplexMatrix{{7, 2}, {3, 5}};
  const auto x = one_inverse_sample(t, v);
  // V changes everything except the (0,0) entry
  EXPECT_TRUE(MatrixNear(x, ComplexMatrix{{1, 2}, {3, 5}}, 1e-14));
  EXPECT_TRUE(MatrixNear(t * x * t, t, 1e-14));
  EXPECT_TRUE(MatrixNear(one_inverse_sample(t, ComplexMatrix(2, 2)), mp_inverse(t), 0.0));
  EXPECT_THROW(one_inverse_sample(t, ComplexMatrix(3, 2)), DimensionError);
}

TEST(OneInverse, AlwaysSatisfiesFirstPenroseEquation) {
  for (std::uint64_t s = 0; s < 300; ++s) {
    auto rng = gen::trial_rng(34, s);
    const std::size_t m = gen::uniform_index(rng, 1, 10), n = gen::uniform_index(rng, 1, 10);
    const auto t = gen::rank_r(rng, m, n, gen::uniform_index(rng, 0, std::min(m, n)));
    const auto tp = mp_inverse(t);
    const auto x = one_inverse_sample(t, tp, gen::gaussian(rng, n, m));
    ASSERT_LE((t * x * t - t).frobenius_norm(), 1e-9 * (1.0 + x.frobenius_norm())) << s;
  }
}

TEST(SolveAxbC, Examples) {
  const auto unsolvable =
      solve_axb_c(ComplexMatrix::diagonal({1, 0}), ComplexMatrix::identity(2),
                  ComplexMatrix::diagonal({0, 1}));
  EXPECT_FALSE(unsolvable.solvable);
  EXPECT_NEAR(unsolvable.residual, 1.0, 1e-14);

  const auto a = ComplexMatrix::diagonal({1, 0});
  const auto c = ComplexMatrix::diagonal({5, 0});
  const auto ok = solve_axb_c(a, a, c);
  EXPECT_TRUE(ok.solvable);
  EXPECT_TRUE(MatrixNear(a * ok.particular * a, c, 1e-14));
  const auto g = ok.general(a, a, ComplexMatrix{{1, 2}, {3, 4}});
  EXPECT_TRUE(MatrixNear(a * g * a, c, 1e-14));
  EXPECT_FALSE(ok.homogeneous_recipe.empty());

  EXPECT_THROW(solve_axb_c(a, a, ComplexMatrix(3, 2)), DimensionError);
  EXPECT_THROW(solve_axb_c(ComplexMatrix(2, 3), ComplexMatrix(4, 2), ComplexMatrix(3, 2)),
               DimensionError);

  const ComplexMatrix c2{{1, 2}, {3, complex(0, 4)}};
  const auto trivial = solve_axb_c(ComplexMatrix::identity(2), ComplexMatrix::identity(2), c2);
  EXPECT_TRUE(trivial.solvable);
  EXPECT_TRUE(MatrixNear(trivial.particular, c2, 1e-15));
}

TEST(SolveAxbC, PlantedSolutionsAreFound) {
  for (std::uint64_t s = 0; s < 200; ++s) {
    auto rng = gen::trial_rng(35, s);
    const std::size_t m = gen::uniform_index(rng, 1, 8), k = gen::uniform_index(rng, 1, 8),
                      l = gen::uniform_index(rng, 1, 8), n = gen::uniform_index(rng, 1, 8);
    const auto a = gen::rank_r(rng, m, k, gen::uniform_index(rng, 0, std::min(m, k)));
    const auto b = gen::rank_r(rng, l, n, gen::uniform_index(rng, 0, std::min(l, n)));
    const auto c = a * gen::gaussian(rng, k, l) * b;
    const auto sol = solve_axb_c(a, b, c);
    ASSERT_TRUE(sol.solvable) << s;
    const auto x = sol.general(a, b, gen::gaussian(rng, k, l));
    ASSERT_LE((a * x * b - c).frobenius_norm(), 1e-8 * (1.0 + c.frobenius_norm())) << s;
  }
}

}  // namespace
