#include <gtest/gtest.h>

#include "parasum/cstar_module.hpp"
#include "parasum/io.hpp"
#include "test_support.hpp"

using namespace parasum;
using namespace parasum::cstar;

namespace {

const FiniteCStarAlgebra kAlg({2, 1});
const TolerancePolicy kTol{1e-10, 1e-8, 1e-10};

TEST(FiniteCStarAlgebra, Shape) {
  EXPECT_EQ(kAlg.block_count(), 2u);
  EXPECT_EQ(kAlg.total_dim(), 3u);
  EXPECT_EQ(kAlg.offset(1), 2u);
  EXPECT_THROW(FiniteCStarAlgebra(std::vector<std::size_t>{}), std::invalid_argument);
  EXPECT_THROW(FiniteCStarAlgebra({2, 0}), std::invalid_argument);
}

TEST(AlgebraElement, StarAlgebraOperations) {
  auto rng = parasum::gen::trial_rng(51, 0);
  const auto a = cstar::gen::element(rng, kAlg), b = cstar::gen::element(rng, kAlg);
  EXPECT_LE((a * b).adjoint().distance(b.adjoint() * a.adjoint()), 1e-12);
  // C* identity ||a* a|| = ||a||^2
  EXPECT_NEAR((a.adjoint() * a).norm(), a.norm() * a.norm(), 1e-10);
  EXPECT_LE((AlgebraElement::identity(kAlg) * a).distance(a), 0.0);
  EXPECT_TRUE((a.adjoint() * a).is_positive(kTol));
  EXPECT_THROW(a + AlgebraElement::zero(FiniteCStarAlgebra({1})), AlgebraMismatch);
}

TEST(HilbertModule, InnerProductAxioms) {
  const complex alpha(0.3, -1.2);
  for (std::uint64_t s = 0; s < 100; ++s) {
    auto rng = parasum::gen::trial_rng(52, s);
    const auto x = cstar::gen::vector(rng, kAlg, 3), y = cstar::gen::vector(rng, kAlg, 3),
               z = cstar::gen::vector(rng, kAlg, 3);
    const auto a = cstar::gen::element(rng, kAlg);
    EXPECT_LE(inner_product(x, y + alpha * z)
                  .distance(inner_product(x, y) + alpha * inner_product(x, z)),
              1e-10);
    EXPECT_LE(inner_product(x, y.times(a)).distance(inner_product(x, y) * a), 1e-10);
    EXPECT_LE(inner_product(y, x).distance(inner_product(x, y).adjoint()), 1e-10);
    EXPECT_TRUE(inner_product(x, x).is_positive(kTol));
    EXPECT_NEAR(module_norm(x) * module_norm(x), inner_product(x, x).norm(), 1e-9);
  }
  EXPECT_EQ(module_norm(HilbertModuleVector(kAlg, 2)), 0.0);
}

TEST(ModuleOperator, AdjointAndApply) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    auto rng = parasum::gen::trial_rng(53, s);
    const auto t = cstar::gen::op(rng, kAlg, 3);
    const auto x = cstar::gen::vector(rng, kAlg, 3), y = cstar::gen::vector(rng, kAlg, 3);
    EXPECT_LE(inner_product(t.apply(x), y).distance(inner_product(x, t.adjoint().apply(y))),
              1e-10);
    EXPECT_TRUE(MatrixNear(flatten(t.apply(x)), flatten(t) * flatten(x), 1e-10));
  }
}

TEST(Representation, FlattenIsStarHomomorphism) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    auto rng = parasum::gen::trial_rng(54, s);
    const auto t = cstar::gen::op(rng, kAlg, 3), u = cstar::gen::op(rng, kAlg, 3);
    EXPECT_TRUE(MatrixNear(flatten(t * u), flatten(t) * flatten(u), 1e-10));
    EXPECT_TRUE(MatrixNear(flatten(t.adjoint()), flatten(t).adjoint(), 0.0));
    EXPECT_TRUE(MatrixNear(flatten(t + u), flatten(t) + flatten(u), 0.0));
    EXPECT_EQ(off_image_residual(flatten(t), kAlg, 3), 0.0);
    EXPECT_LE(unflatten(flatten(t), kAlg, 3).distance(t), 0.0);
  }
  EXPECT_GT(off_image_residual(ComplexMatrix(9, 9, std::vector<complex>(81, 1.0)), kAlg, 3), 0.0);
  EXPECT_THROW(unflatten(ComplexMatrix(8, 8), kAlg, 3), DimensionError);
}

TEST(Representation, ComponentsRoundTrip) {
  auto rng = parasum::gen::trial_rng(55, 0);
  const auto t = cstar::gen::op(rng, kAlg, 3);
  std::vector<ComplexMatrix> comps{component(t, 0), component(t, 1)};
  EXPECT_EQ(comps[0].rows(), 6u);
  EXPECT_EQ(comps[1].rows(), 3u);
  EXPECT_LE(from_components(kAlg, 3, comps).distance(t), 0.0);
  EXPECT_THROW(from_components(kAlg, 3, {comps[0]}), AlgebraMismatch);
  EXPECT_THROW(from_components(kAlg, 3, {comps[1], comps[0]}), DimensionError);
}

TEST(ModuleParallelSum, IdentityHalves) {
  const auto id = ModuleOperator::identity(kAlg, 2);
  const auto r = module_parallel_sum(id, id);
  EXPECT_LE(r.distance(0.5 * id), 1e-14);
}

TEST(ModuleParallelSum, ComponentwiseOracle) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    auto rng = parasum::gen::trial_rng(56, s);
    const auto a = cstar::gen::positive_op(rng, kAlg, 3), b = cstar::gen::positive_op(rng, kAlg, 3);
    const auto r = module_parallel_sum(a, b, kTol);
    for (std::size_t blk = 0; blk < kAlg.block_count(); ++blk) {
      const auto want = parallel_sum_value(component(a, blk), component(b, blk), kTol);
      EXPECT_TRUE(MatrixNear(component(r, blk), want, 1e-9)) << "trial " << s << " block " << blk;
    }
    EXPECT_TRUE(is_positive(r, kTol));
  }
}

TEST(ModuleParallelSum, NormBoundHoldsForPositiveOperands) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    auto rng = parasum::gen::trial_rng(57, s);
    const auto a = cstar::gen::positive_op(rng, kAlg, 3), b = cstar::gen::positive_op(rng, kAlg, 3);
    const auto fa = flatten(a), fb = flatten(b);
    if (operator_norm(fa) == 0.0 || operator_norm(fb) == 0.0) continue;
    EXPECT_TRUE(check_norm_bound(fa, fb, kTol).bound_holds) << s;
  }
}

TEST(ModuleParallelSum, RejectsNonPositive) {
  const auto id = ModuleOperator::identity(kAlg, 2);
  EXPECT_THROW(module_parallel_sum(id, complex(-1.0) * id), NotPositiveError);
}

TEST(ModuleJson, RoundTrip) {
  auto rng = parasum::gen::trial_rng(58, 0);
  const auto t = cstar::gen::op(rng, kAlg, 2);
  const auto back = io::module_operator_from_json(io::parse_json(io::to_json(t).dump(), "test"));
  EXPECT_LE(back.distance(t), 0.0);
  EXPECT_THROW(io::module_operator_from_json(io::json{{"algebra", {2, 1}}}), io::InputError);
}

}  // namespace
