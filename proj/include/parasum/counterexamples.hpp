#pragma once

#include <cmath>

#include "parasum/parasum.hpp"
#include "parasum/symbolic.hpp"

namespace parasum {

/// Projection on C^k used for the norm-bound counterexample: rank ceil(k/2),
/// not diagonal once k >= 2.
inline ComplexMatrix demo_projection(std::size_t k) {
  if (k == 0) throw std::invalid_argument("demo_projection: dimension must be positive");
  ComplexMatrix p(k, k);
  if (k == 1) {
    p(0, 0) = 1.0;
    return p;
  }
  std::size_t i = 0;
  for (; i + 1 < k; i += 2) {
    p(i, i) = p(i, i + 1) = p(i + 1, i) = p(i + 1, i + 1) = 0.5;
  }
  if (i < k) p(i, i) = 1.0;
  return p;
}

/// A = rho(T), B = rho(S) with T = iP and S = I - T on C^k.  Then
/// A:B = rho(TS), ||A:B|| = sqrt 2 while ||A|| : ||B|| = 2 - sqrt 2.
struct NormViolation {
  std::size_t dim_k = 0;
  ComplexMatrix a, b, parallel;
  double norm_a = 0.0;
  double norm_b = 0.0;
  double norm_parallel = 0.0;
  double scalar_bound = 0.0;
  double rho_ts_residual = 0.0;  // ||A:B - rho(TS)||
  bool summable = false;

  double excess() const { return norm_parallel - scalar_bound; }

  /// Values match sqrt 2, 1, sqrt 2, 2 - sqrt 2 and the excess 2 sqrt 2 - 2 within atol.
  bool reproduces(double atol = 1e-10) const {
    const double r2 = std::sqrt(2.0);
    return summable && std::abs(norm_a - 1.0) <= atol && std::abs(norm_b - r2) <= atol &&
           std::abs(norm_parallel - r2) <= atol && std::abs(scalar_bound - (2.0 - r2)) <= atol &&
           std::abs(excess() - (2.0 * r2 - 2.0)) <= atol && rho_ts_residual <= atol;
  }
};

inline NormViolation norm_bound_violation(std::size_t dim_k, const TolerancePolicy& tol = {}) {
  const auto p = demo_projection(dim_k);
  const auto t = complex(0.0, 1.0) * p;
  const auto s = ComplexMatrix::identity(dim_k) - t;
  NormViolation v;
  v.dim_k = dim_k;
  v.a = rho_embed(t);
  v.b = rho_embed(s);
  const auto ps = parallel_sum(v.a, v.b, tol);
  v.parallel = ps.value;
  v.summable = ps.summability.summable;
  v.norm_a = operator_norm(v.a);
  v.norm_b = operator_norm(v.b);
  v.norm_parallel = operator_norm(v.parallel);
  v.scalar_bound = scalar_parallel(v.norm_a, v.norm_b);
  v.rho_ts_residual = (v.parallel - rho_embed(t * s)).frobenius_norm();
  return v;
}

}  // namespace parasum
