#pragma once

#include <string>

#include "parasum/linalg.hpp"

namespace parasum {

/// Moore-Penrose inverse from the SVD, discarding singular values at or below
/// the rank cutoff.  The zero matrix maps to the zero matrix.  A positive
/// `scale` measures the cutoff against max(s_1, scale) instead of s_1.
inline ComplexMatrix mp_inverse(const ComplexMatrix& t, const TolerancePolicy& tol = {},
                                double scale = 0.0) {
  const auto d = svd(t);
  const auto r = numerical_rank(d.s, tol.relative_cutoff(t.rows(), t.cols()), scale);
  ComplexMatrix x(t.cols(), t.rows());
  for (std::size_t k = 0; k < r; ++k) {
    const double inv = 1.0 / d.s[k];
    for (std::size_t i = 0; i < t.cols(); ++i) {
      const complex vi = d.v(i, k) * inv;
      for (std::size_t j = 0; j < t.rows(); ++j) x(i, j) += vi * std::conj(d.u(j, k));
    }
  }
  return x;
}

/// Residuals of the four Penrose equations for a candidate X.
struct PenroseResiduals {
  double r1 = 0.0;  // ||TXT - T||
  double r2 = 0.0;  // ||XTX - X||
  double r3 = 0.0;  // ||(TX)* - TX||
  double r4 = 0.0;  // ||(XT)* - XT||

  double max() const { return std::max({r1, r2, r3, r4}); }

  /// X is accepted as T-dagger iff every residual is within atol (1 + ||T|| + ||X||).
  bool accepts(const ComplexMatrix& t, const ComplexMatrix& x, double atol) const {
    return max() <= atol * (1.0 + t.frobenius_norm() + x.frobenius_norm());
  }
};

inline PenroseResiduals verify_penrose(const ComplexMatrix& t, const ComplexMatrix& x) {
  if (x.rows() != t.cols() || x.cols() != t.rows())
    throw DimensionError("verify_penrose: X must be " + std::to_string(t.cols()) + "x" +
                         std::to_string(t.rows()));
  const auto tx = t * x;
  const auto xt = x * t;
  return PenroseResiduals{
      (tx * t - t).frobenius_norm(),
      (xt * x - x).frobenius_norm(),
      (tx.adjoint() - tx).frobenius_norm(),
      (xt.adjoint() - xt).frobenius_norm(),
  };
}

/// Member of T{1}:  X = T+ + V - T+ T V T T+.
inline ComplexMatrix one_inverse_sample(const ComplexMatrix& t, const ComplexMatrix& v,
                                        const TolerancePolicy& tol = {}) {
  if (v.rows() != t.cols() || v.cols() != t.rows())
    throw DimensionError("one_inverse_sample: V must have the shape of T*");
  const auto tp = mp_inverse(t, tol);
  return tp + v - tp * t * v * t * tp;
}

/// Same as above with a precomputed T+.
inline ComplexMatrix one_inverse_sample(const ComplexMatrix& t, const ComplexMatrix& t_pinv,
                                        const ComplexMatrix& v) {
  if (v.rows() != t.cols() || v.cols() != t.rows())
    throw DimensionError("one_inverse_sample: V must have the shape of T*");
  return t_pinv + v - t_pinv * t * v * t * t_pinv;
}

/// Solvability of A X B = C.
struct AxbSolution {
  bool solvable = false;
  double residual = 0.0;   // ||A A+ C B+ B - C||
  ComplexMatrix particular;  // A+ C B+ when solvable
  std::string homogeneous_recipe =
      "X = A^- C B^- + V - A^- A V B B^-, V arbitrary";

  /// Member of the general solution for a free parameter V.
  ComplexMatrix general(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& v,
                        const TolerancePolicy& tol = {}) const {
    const auto ap = mp_inverse(a, tol);
    const auto bp = mp_inverse(b, tol);
    return particular + v - ap * a * v * b * bp;
  }
};

inline AxbSolution solve_axb_c(const ComplexMatrix& a, const ComplexMatrix& b,
                               const ComplexMatrix& c, const TolerancePolicy& tol = {}) {
  if (c.rows() != a.rows() || c.cols() != b.cols())
    throw DimensionError("solve_axb_c: C must be rows(A) x cols(B)");
  const auto ap = mp_inverse(a, tol);
  const auto bp = mp_inverse(b, tol);
  AxbSolution out;
  out.residual = (a * ap * c * bp * b - c).frobenius_norm();
  out.solvable = out.residual <= tol.eq_atol * (1.0 + c.frobenius_norm());
  if (out.solvable) out.particular = ap * c * bp;
  return out;
}

}  // namespace parasum
