#pragma once

#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "parasum/geninv.hpp"
#include "parasum/linalg.hpp"

namespace parasum {

/// Scalar parallel sum ab / (a + b) for a, b > 0.
inline double scalar_parallel(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0))
    throw std::invalid_argument("scalar_parallel: operands must be positive");
  return a * b / (a + b);
}

/// Residuals of A = A(A+B)+(A+B) and B = (A+B)(A+B)+B, plus the
/// equivalent range-inclusion verdicts R(A*) ⊆ R(A*+B*) and R(B) ⊆ R(A+B).
struct SummabilityReport {
  double residual_left = 0.0;
  double residual_right = 0.0;
  double threshold = 0.0;
  bool range_rowA = false;
  bool range_colB = false;
  bool summable = false;

  bool range_verdict() const { return range_rowA && range_colB; }
};

class NotSummableError : public std::runtime_error {
 public:
  NotSummableError(SummabilityReport report, double spread)
      : std::runtime_error("operands are not parallel summable"),
        report_(report),
        spread_(spread) {}
  const SummabilityReport& report() const { return report_; }
  /// max ||A X B - A (A+B)+ B|| over the sampled {1}-inverses X
  double invariance_spread() const { return spread_; }

 private:
  SummabilityReport report_;
  double spread_;
};

class ZeroOperandError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline void require_square_pair(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
  if (!a.is_square() || !b.is_square() || a.rows() != b.rows())
    throw DimensionError(std::string(op) + ": operands must be square of equal size");
}

inline SummabilityReport summability(const ComplexMatrix& a, const ComplexMatrix& b,
                                     const ComplexMatrix& s, const ComplexMatrix& sp,
                                     const TolerancePolicy& tol) {
  SummabilityReport r;
  r.residual_left = (a - a * sp * s).frobenius_norm();
  r.residual_right = (b - s * sp * b).frobenius_norm();
  r.threshold = tol.eq_atol * (1.0 + a.frobenius_norm() + b.frobenius_norm());
  r.summable = r.residual_left <= r.threshold && r.residual_right <= r.threshold;
  r.range_rowA = range_contains(a.adjoint(), s.adjoint(), tol);
  r.range_colB = range_contains(b, s, tol);
  return r;
}

inline double invariance_spread(const ComplexMatrix& a, const ComplexMatrix& b,
                                const ComplexMatrix& s, const ComplexMatrix& sp,
                                const ComplexMatrix& value,
                                std::span<const ComplexMatrix> samples) {
  double spread = 0.0;
  for (const auto& v : samples) {
    const auto x = one_inverse_sample(s, sp, v);
    spread = std::max(spread, (a * x * b - value).frobenius_norm());
  }
  return spread;
}

}  // namespace detail

inline SummabilityReport is_parallel_summable(const ComplexMatrix& a, const ComplexMatrix& b,
                                              const TolerancePolicy& tol = {}) {
  detail::require_square_pair(a, b, "is_parallel_summable");
  const auto s = a + b;
  return detail::summability(a, b, s, mp_inverse(s, tol), tol);
}

struct ParallelSumResult {
  ComplexMatrix value;       // A (A+B)+ B
  double alt_residual_A = 0.0;  // ||value - (A - A(A+B)+A)||
  double alt_residual_B = 0.0;  // ||value - (B - B(A+B)+B)||
  double invariance_spread = 0.0;
  SummabilityReport summability;
};

/// A:B = A (A+B)+ B.  `samples` are the free parameters V of the {1}-inverses
/// (A+B)+ + V - (A+B)+(A+B)V(A+B)(A+B)+ used to measure invariance.
inline ParallelSumResult parallel_sum(const ComplexMatrix& a, const ComplexMatrix& b,
                                      std::span<const ComplexMatrix> samples,
                                      const TolerancePolicy& tol = {}) {
  detail::require_square_pair(a, b, "parallel_sum");
  const auto s = a + b;
  const auto sp = mp_inverse(s, tol);
  ParallelSumResult r;
  r.summability = detail::summability(a, b, s, sp, tol);
  const auto asp = a * sp;
  r.value = asp * b;
  r.invariance_spread = detail::invariance_spread(a, b, s, sp, r.value, samples);
  if (!r.summability.summable) throw NotSummableError(r.summability, r.invariance_spread);
  r.alt_residual_A = (r.value - (a - asp * a)).frobenius_norm();
  r.alt_residual_B = (r.value - (b - b * sp * b)).frobenius_norm();
  return r;
}

inline ParallelSumResult parallel_sum(const ComplexMatrix& a, const ComplexMatrix& b,
                                      const TolerancePolicy& tol = {}) {
  return parallel_sum(a, b, std::span<const ComplexMatrix>{}, tol);
}

/// A (A+B)+ B without the summability gate.
inline ComplexMatrix parallel_sum_value(const ComplexMatrix& a, const ComplexMatrix& b,
                                        const TolerancePolicy& tol = {}) {
  detail::require_square_pair(a, b, "parallel_sum_value");
  return a * mp_inverse(a + b, tol) * b;
}

// ---------------------------------------------------------------------------
// Projections and subspaces

struct ProjectionParallel {
  ComplexMatrix value;  // P:Q
  Subspace meet;        // R(P) ∩ R(Q)
  double residual = 0.0;  // ||P:Q - P_M / 2||
};

inline ProjectionParallel projection_parallel(const ComplexMatrix& p, const ComplexMatrix& q,
                                              const TolerancePolicy& tol = {}) {
  detail::require_square_pair(p, q, "projection_parallel");
  if (!is_projector(p, tol) || !is_projector(q, tol))
    throw std::invalid_argument("projection_parallel: operands must be orthogonal projectors");
  ProjectionParallel r;
  r.value = parallel_sum_value(p, q, tol);
  r.meet = subspace_meet(subspace_from_projector(p, tol), subspace_from_projector(q, tol), tol);
  r.residual = (r.value - 0.5 * r.meet.projector).frobenius_norm();
  return r;
}

struct SumDecomposition {
  Subspace join;  // (P_M + P_N)(P_M + P_N)+
  Subspace meet;  // 2 (P_M : P_N)
  double perp_residual = 0.0;  // ||(I - meet) - join(M^perp, N^perp)||
  bool perp_identity = false;
};

inline SumDecomposition submodule_sum_decomposition(const ComplexMatrix& pm,
                                                    const ComplexMatrix& pn,
                                                    const TolerancePolicy& tol = {}) {
  detail::require_square_pair(pm, pn, "submodule_sum_decomposition");
  if (!is_projector(pm, tol) || !is_projector(pn, tol))
    throw std::invalid_argument("submodule_sum_decomposition: operands must be projectors");
  const std::size_t n = pm.rows();
  const auto id = ComplexMatrix::identity(n);
  const auto s = pm + pn;
  SumDecomposition r;
  const auto join = hermitian_part(s * mp_inverse(s, tol, 1.0));
  r.join = Subspace{rank(join, tol, 1.0), join};
  const auto meet = hermitian_part(2.0 * parallel_sum_value(pm, pn, tol));
  r.meet = Subspace{rank(meet, tol, 1.0), meet};
  const auto cm = id - pm, cn = id - pn;
  const auto cs = cm + cn;
  const auto perp_join = hermitian_part(cs * mp_inverse(cs, tol, 1.0));
  r.perp_residual = ((id - meet) - perp_join).frobenius_norm();
  r.perp_identity = r.perp_residual <= tol.eq_atol;
  return r;
}

// ---------------------------------------------------------------------------
// Norm bounds

/// rho(T) = [[0, T], [T*, 0]]
inline ComplexMatrix rho_embed(const ComplexMatrix& t) {
  return block2x2(ComplexMatrix(t.rows(), t.rows()), t, t.adjoint(),
                  ComplexMatrix(t.cols(), t.cols()));
}

struct NormBoundReport {
  double normA = 0.0;
  double normB = 0.0;
  double scalar_bound = 0.0;  // ||A|| : ||B||
  double norm_parallel = 0.0;  // ||A:B||
  bool bound_holds = false;
  double triangle_residual = 0.0;  // || |A+B| - (|A| + |B|) ||

  double margin() const { return scalar_bound - norm_parallel; }
};

inline NormBoundReport check_norm_bound(const ComplexMatrix& a, const ComplexMatrix& b,
                                        const TolerancePolicy& tol = {}) {
  detail::require_square_pair(a, b, "check_norm_bound");
  NormBoundReport r;
  r.normA = operator_norm(a);
  r.normB = operator_norm(b);
  if (r.normA == 0.0 || r.normB == 0.0)
    throw ZeroOperandError("check_norm_bound: operands must be nonzero");
  const auto ps = parallel_sum(a, b, tol);
  r.scalar_bound = scalar_parallel(r.normA, r.normB);
  r.norm_parallel = operator_norm(ps.value);
  r.bound_holds = r.norm_parallel <= r.scalar_bound + tol.eq_atol;
  r.triangle_residual =
      (abs_value(a + b, tol) - (abs_value(a, tol) + abs_value(b, tol))).frobenius_norm();
  return r;
}

/// A = U|A|, B = U|B| for a partial isometry U whose initial space contains
/// R(|A|) + R(|B|).  Such pairs satisfy |A+B| = |A| + |B|.
inline std::pair<ComplexMatrix, ComplexMatrix> shared_isometry_pair(
    const ComplexMatrix& abs_a, const ComplexMatrix& abs_b, const ComplexMatrix& u,
    const TolerancePolicy& tol = {}) {
  detail::require_square_pair(abs_a, abs_b, "shared_isometry_pair");
  if (!u.is_square() || u.rows() != abs_a.rows())
    throw DimensionError("shared_isometry_pair: U must match the operand size");
  if (!is_positive(abs_a, tol) || !is_positive(abs_b, tol))
    throw NotPositiveError("shared_isometry_pair: |A| and |B| must be positive");
  const auto initial = u.adjoint() * u;
  if (!is_projector(initial, tol))
    throw std::invalid_argument("shared_isometry_pair: U is not a partial isometry");
  const auto sum = abs_a + abs_b;
  if (!approx_equal(initial * sum, sum, tol.eq_atol))
    throw std::invalid_argument(
        "shared_isometry_pair: initial space of U must contain R(|A|) + R(|B|)");
  return {u * abs_a, u * abs_b};
}

/// Conclusions checked for a shared-isometry pair.
struct IsometryPairReport {
  double triangle_residual = 0.0;    // || |A+B| - (|A|+|B|) ||
  double pinv_via_u_residual = 0.0;  // ||(|A|+|B|)+ - (A+B)+ U||
  double pinv_via_ustar_residual = 0.0;  // ||(A+B)+ - (|A|+|B|)+ U*||
  double norm_identity_residual = 0.0;   // | ||A:B|| - || |A|:|B| || |
  SummabilityReport summability;
};

inline IsometryPairReport verify_shared_isometry(const ComplexMatrix& a, const ComplexMatrix& b,
                                                 const ComplexMatrix& abs_a,
                                                 const ComplexMatrix& abs_b,
                                                 const ComplexMatrix& u,
                                                 const TolerancePolicy& tol = {}) {
  IsometryPairReport r;
  const auto s = a + b;
  const auto abs_sum = abs_a + abs_b;
  const auto sp = mp_inverse(s, tol);
  const auto abs_sp = mp_inverse(abs_sum, tol);
  r.triangle_residual = (abs_value(s, tol) - abs_sum).frobenius_norm();
  r.pinv_via_u_residual = (abs_sp - sp * u).frobenius_norm();
  r.pinv_via_ustar_residual = (sp - abs_sp * u.adjoint()).frobenius_norm();
  r.norm_identity_residual =
      std::abs(operator_norm(a * sp * b) - operator_norm(abs_a * abs_sp * abs_b));
  r.summability = detail::summability(a, b, s, sp, tol);
  return r;
}

// ---------------------------------------------------------------------------
// Square-root factorization

struct DouglasFactors {
  ComplexMatrix c;  // ((A+B)+)^{1/2} A^{1/2}
  ComplexMatrix d;  // ((A+B)+)^{1/2} B^{1/2}
  ComplexMatrix fw_sum;  // A^{1/2} C* D B^{1/2}
  double factor_residual_c = 0.0;  // ||A^{1/2} - (A+B)^{1/2} C||
  double factor_residual_d = 0.0;  // ||B^{1/2} - (A+B)^{1/2} D||
  bool range_c = false;  // R(C) ⊆ N((A+B)^{1/2})^perp
  bool range_d = false;
  double fw_residual = 0.0;  // ||fw_sum - A(A+B)+B||
};

inline DouglasFactors douglas_factor(const ComplexMatrix& a, const ComplexMatrix& b,
                                     const TolerancePolicy& tol = {}) {
  detail::require_square_pair(a, b, "douglas_factor");
  const auto ra = psd_sqrt(a, tol);
  const auto rb = psd_sqrt(b, tol);
  const auto s = a + b;
  const auto rs = psd_sqrt(s, tol);
  const auto sp = mp_inverse(s, tol);
  const auto rsp = psd_sqrt(hermitian_part(sp), tol);
  DouglasFactors f;
  f.c = rsp * ra;
  f.d = rsp * rb;
  f.fw_sum = ra * f.c.adjoint() * f.d * rb;
  f.factor_residual_c = (ra - rs * f.c).frobenius_norm();
  f.factor_residual_d = (rb - rs * f.d).frobenius_norm();
  // N(rs)^perp = R(rs*) = R(rs)
  f.range_c = range_contains(f.c, rs, tol);
  f.range_d = range_contains(f.d, rs, tol);
  f.fw_residual = (f.fw_sum - a * sp * b).frobenius_norm();
  return f;
}

/// R(A^{1/2}) + R(B^{1/2}) == R((A+B)^{1/2}), compared as projectors.
inline double range_sum_residual(const ComplexMatrix& a, const ComplexMatrix& b,
                                 const TolerancePolicy& tol = {}) {
  detail::require_square_pair(a, b, "range_sum_check");
  const auto pa = range_projector(psd_sqrt(a, tol), tol);
  const auto pb = range_projector(psd_sqrt(b, tol), tol);
  const auto ps = range_projector(psd_sqrt(a + b, tol), tol);
  return (subspace_join(pa, pb, tol).projector - ps.projector).frobenius_norm();
}

inline bool range_sum_check(const ComplexMatrix& a, const ComplexMatrix& b,
                            const TolerancePolicy& tol = {}) {
  return range_sum_residual(a, b, tol) <= tol.eq_atol;
}

}  // namespace parasum
