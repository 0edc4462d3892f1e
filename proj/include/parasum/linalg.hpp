#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "parasum/matrix.hpp"

namespace parasum {

/// Thrown when an operation requires a positive (psd) operand.
class NotPositiveError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical tolerances shared by every decision in the library.
///
/// `rank_rtol == 0` selects the default relative cutoff max(rows, cols) * 2^-52.
/// A singular value s is retained iff s > rank_rtol * s_max.
struct TolerancePolicy {
  double rank_rtol = 0.0;
  double eq_atol = 1e-8;
  double psd_atol = 1e-10;

  double relative_cutoff(std::size_t rows, std::size_t cols) const {
    if (rank_rtol > 0.0) return rank_rtol;
    return static_cast<double>(std::max<std::size_t>({rows, cols, 1})) *
           std::numeric_limits<double>::epsilon();
  }

  void validate() const {
    if (!(rank_rtol >= 0.0) || !(eq_atol > 0.0) || !(psd_atol > 0.0))
      throw std::invalid_argument("tolerances must be strictly positive");
  }
};

/// ||X - Y||_F <= atol * (1 + ||X||_F + ||Y||_F)
inline bool approx_equal(const ComplexMatrix& x, const ComplexMatrix& y, double atol) {
  return (x - y).frobenius_norm() <= atol * (1.0 + x.frobenius_norm() + y.frobenius_norm());
}

inline double distance(const ComplexMatrix& x, const ComplexMatrix& y) {
  return (x - y).frobenius_norm();
}

// ---------------------------------------------------------------------------
// Jacobi rotations

namespace detail {

// 2x2 unitary J = [[c, s], [-s e^{-i phi}, c e^{-i phi}]] that diagonalizes
// the Hermitian block [[app, apq], [conj(apq), aqq]] under J* M J.
struct JacobiRotation {
  double c = 1.0;
  double s = 0.0;
  complex phase = 1.0;  // e^{-i phi}

  static JacobiRotation compute(double app, double aqq, complex apq) {
    JacobiRotation r;
    const double mag = std::abs(apq);
    if (mag == 0.0) return r;
    r.phase = std::conj(apq) / mag;
    const double theta = (aqq - app) / (2.0 * mag);
    const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::hypot(theta, 1.0));
    r.c = 1.0 / std::sqrt(t * t + 1.0);
    r.s = t * r.c;
    return r;
  }

  complex jpp() const { return c; }
  complex jpq() const { return s; }
  complex jqp() const { return -s * phase; }
  complex jqq() const { return c * phase; }
};

// Columns p, q of m <- m * J.
inline void rotate_columns(ComplexMatrix& m, std::size_t p, std::size_t q,
                           const JacobiRotation& r) {
  const complex jpp = r.jpp(), jpq = r.jpq(), jqp = r.jqp(), jqq = r.jqq();
  for (std::size_t k = 0; k < m.rows(); ++k) {
    const complex xp = m(k, p), xq = m(k, q);
    m(k, p) = xp * jpp + xq * jqp;
    m(k, q) = xp * jpq + xq * jqq;
  }
}

// Rows p, q of m <- J* * m.
inline void rotate_rows(ComplexMatrix& m, std::size_t p, std::size_t q,
                        const JacobiRotation& r) {
  const complex jpp = std::conj(r.jpp()), jpq = std::conj(r.jpq()),
                jqp = std::conj(r.jqp()), jqq = std::conj(r.jqq());
  for (std::size_t k = 0; k < m.cols(); ++k) {
    const complex xp = m(p, k), xq = m(q, k);
    m(p, k) = jpp * xp + jqp * xq;
    m(q, k) = jpq * xp + jqq * xq;
  }
}

}  // namespace detail

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending.
struct HermitianEigen {
  std::vector<double> values;
  ComplexMatrix vectors;  // columns are eigenvectors
};

/// Cyclic Jacobi eigendecomposition.  Only the Hermitian part of `h` is used.
inline HermitianEigen hermitian_eigen(const ComplexMatrix& h) {
  if (!h.is_square()) throw DimensionError("hermitian_eigen requires a square matrix");
  const std::size_t n = h.rows();
  ComplexMatrix a = hermitian_part(h);
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double eps = std::numeric_limits<double>::epsilon();

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    const double total = a.frobenius_norm();
    if (off == 0.0 || std::sqrt(off) <= 1e-2 * eps * total) break;
    const double negligible = 1e-3 * eps * total / static_cast<double>(n);

    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const complex apq = a(p, q);
        const double app = a(p, p).real(), aqq = a(q, q).real();
        if (std::abs(apq) <= negligible) continue;
        const auto r = detail::JacobiRotation::compute(app, aqq, apq);
        detail::rotate_columns(a, p, q, r);
        detail::rotate_rows(a, p, q, r);
        detail::rotate_columns(v, p, q, r);
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });
  HermitianEigen out;
  out.values.resize(n);
  out.vectors = ComplexMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

/// Thin SVD T = U diag(s) V*, s descending, p = min(rows, cols) triplets.
///
/// When rows >= cols, V is the full cols x cols unitary; when rows < cols, U is
/// the full rows x rows unitary.  Columns of U (resp. V) paired with a zero
/// singular value on the non-unitary side are zero.
struct Svd {
  ComplexMatrix u;
  std::vector<double> s;
  ComplexMatrix v;

  double max_singular() const { return s.empty() ? 0.0 : s.front(); }
};

namespace detail {

// One-sided (Hestenes) Jacobi on the columns of t, rows >= cols.
inline Svd one_sided_jacobi(const ComplexMatrix& t) {
  const std::size_t m = t.rows(), n = t.cols();
  ComplexMatrix w = t;
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double eps = std::numeric_limits<double>::epsilon();

  for (int sweep = 0; sweep < 100; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0, beta = 0.0;
        complex gamma = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
          alpha += std::norm(w(k, p));
          beta += std::norm(w(k, q));
          gamma += std::conj(w(k, p)) * w(k, q);
        }
        if (alpha == 0.0 || beta == 0.0) continue;
        if (std::abs(gamma) <= eps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const auto r = JacobiRotation::compute(alpha, beta, gamma);
        rotate_columns(w, p, q, r);
        rotate_columns(v, p, q, r);
      }
    if (!rotated) break;
  }

  std::vector<double> norms(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t k = 0; k < m; ++k) s += std::norm(w(k, j));
    norms[j] = std::sqrt(s);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return norms[i] > norms[j]; });

  Svd out;
  out.s.resize(n);
  out.u = ComplexMatrix(m, n);
  out.v = ComplexMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = order[k];
    out.s[k] = norms[j];
    for (std::size_t i = 0; i < n; ++i) out.v(i, k) = v(i, j);
    if (norms[j] > 0.0)
      for (std::size_t i = 0; i < m; ++i) out.u(i, k) = w(i, j) / norms[j];
  }
  return out;
}

}  // namespace detail

inline Svd svd(const ComplexMatrix& t) {
  if (t.rows() >= t.cols()) return detail::one_sided_jacobi(t);
  Svd h = detail::one_sided_jacobi(t.adjoint());
  return Svd{std::move(h.v), std::move(h.s), std::move(h.u)};
}

/// Number of singular values above rel_cutoff * max(s_max, scale).
///
/// `scale` lets a caller judge an operator that may be numerically zero (for
/// example A:B with R(A) ∩ R(B) = {0}) against the size of its ingredients.
inline std::size_t numerical_rank(const std::vector<double>& s, double rel_cutoff,
                                  double scale = 0.0) {
  const double top = std::max(s.empty() ? 0.0 : s.front(), scale);
  if (top == 0.0) return 0;
  const double cut = rel_cutoff * top;
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [&](double x) { return x > cut; }));
}

inline std::size_t rank(const ComplexMatrix& t, const TolerancePolicy& tol = {},
                        double scale = 0.0) {
  return numerical_rank(svd(t).s, tol.relative_cutoff(t.rows(), t.cols()), scale);
}

/// True when some singular value lies within a factor `band` of the rank cutoff,
/// i.e. the rank decision for `t` is not robust.
inline bool near_rank_boundary(const ComplexMatrix& t, const TolerancePolicy& tol = {},
                               double scale = 0.0, double band = 10.0) {
  const auto s = svd(t).s;
  const double top = std::max(s.empty() ? 0.0 : s.front(), scale);
  if (top == 0.0) return false;
  const double cut = tol.relative_cutoff(t.rows(), t.cols()) * top;
  return std::any_of(s.begin(), s.end(),
                     [&](double x) { return x > cut / band && x < cut * band; });
}

/// Largest singular value.
inline double operator_norm(const ComplexMatrix& t) {
  if (t.empty()) return 0.0;
  return svd(t).max_singular();
}

inline bool is_hermitian(const ComplexMatrix& t, double atol) {
  return t.is_square() && (t - t.adjoint()).frobenius_norm() <= atol;
}

/// Self-adjoint within eq_atol and smallest eigenvalue >= -psd_atol.
inline bool is_positive(const ComplexMatrix& t, const TolerancePolicy& tol = {}) {
  if (!t.is_square()) throw DimensionError("is_positive requires a square matrix");
  if (!is_hermitian(t, tol.eq_atol)) return false;
  if (t.rows() == 0) return true;
  return hermitian_eigen(t).values.front() >= -tol.psd_atol;
}

/// T^alpha for psd T.  Eigenvalues at or below the rank cutoff are treated as
/// zero so that R(T^alpha) = R(T) holds numerically for every alpha > 0.
inline ComplexMatrix psd_power(const ComplexMatrix& t, double alpha,
                               const TolerancePolicy& tol = {}) {
  if (!is_positive(t, tol)) throw NotPositiveError("psd_power: operand is not positive");
  const std::size_t n = t.rows();
  const auto eig = hermitian_eigen(t);
  const double top = n ? std::max(0.0, eig.values.back()) : 0.0;
  const double cut = tol.relative_cutoff(n, n) * top;
  ComplexMatrix r(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lam = eig.values[k];
    if (!(lam > cut)) continue;
    const double f = std::pow(lam, alpha);
    for (std::size_t i = 0; i < n; ++i) {
      const complex vi = eig.vectors(i, k) * f;
      for (std::size_t j = 0; j < n; ++j) r(i, j) += vi * std::conj(eig.vectors(j, k));
    }
  }
  return hermitian_part(r);
}

inline ComplexMatrix psd_sqrt(const ComplexMatrix& t, const TolerancePolicy& tol = {}) {
  return psd_power(t, 0.5, tol);
}

/// |T| = (T*T)^{1/2}
inline ComplexMatrix abs_value(const ComplexMatrix& t, const TolerancePolicy& tol = {}) {
  return psd_sqrt(hermitian_part(t.adjoint() * t), tol);
}

// ---------------------------------------------------------------------------
// Subspaces

/// Subspace of C^n represented by its orthogonal projector.
struct Subspace {
  std::size_t dim = 0;
  ComplexMatrix projector;

  std::size_t ambient() const { return projector.rows(); }
};

namespace detail {

inline ComplexMatrix gram_projector(const ComplexMatrix& basis) {
  return hermitian_part(basis * basis.adjoint());
}

inline ComplexMatrix leading_columns(const ComplexMatrix& m, std::size_t k) {
  return m.block(0, 0, m.rows(), k);
}

}  // namespace detail

/// Orthonormal basis (column) of the range of `t` under the rank cutoff.
inline ComplexMatrix range_basis(const ComplexMatrix& t, const TolerancePolicy& tol = {},
                                 double scale = 0.0) {
  const auto d = svd(t);
  const auto r = numerical_rank(d.s, tol.relative_cutoff(t.rows(), t.cols()), scale);
  return detail::leading_columns(d.u, r);
}

inline Subspace range_projector(const ComplexMatrix& t, const TolerancePolicy& tol = {},
                                double scale = 0.0) {
  const auto q = range_basis(t, tol, scale);
  return Subspace{q.cols(), detail::gram_projector(q)};
}

/// Projector onto N(T) = R(T*)^perp.
inline Subspace null_projector(const ComplexMatrix& t, const TolerancePolicy& tol = {}) {
  const auto row = range_projector(t.adjoint(), tol);
  return Subspace{t.cols() - row.dim, ComplexMatrix::identity(t.cols()) - row.projector};
}

/// R(A) subset of R(B):  ||(I - P_B) P_A|| <= eq_atol.
inline bool range_contains(const ComplexMatrix& a, const ComplexMatrix& b,
                           const TolerancePolicy& tol = {}) {
  if (a.rows() != b.rows()) throw DimensionError("range_contains: row counts differ");
  const auto pa = range_projector(a, tol).projector;
  const auto pb = range_projector(b, tol).projector;
  const auto gap = (ComplexMatrix::identity(a.rows()) - pb) * pa;
  return gap.frobenius_norm() <= tol.eq_atol;
}

/// Subspace from an explicit projector; the dimension is read off its range.
inline Subspace subspace_from_projector(const ComplexMatrix& p, const TolerancePolicy& tol = {}) {
  if (!p.is_square()) throw DimensionError("projector must be square");
  return range_projector(p, tol, 1.0);
}

inline bool is_projector(const ComplexMatrix& p, const TolerancePolicy& tol = {}) {
  return p.is_square() && is_hermitian(p, tol.eq_atol) &&
         (p * p - p).frobenius_norm() <= tol.eq_atol * (1.0 + p.frobenius_norm());
}

inline Subspace orthogonal_complement(const Subspace& m) {
  const std::size_t n = m.ambient();
  return Subspace{n - m.dim, ComplexMatrix::identity(n) - m.projector};
}

inline Subspace subspace_join(const Subspace& m, const Subspace& n,
                              const TolerancePolicy& tol = {}) {
  if (m.ambient() != n.ambient()) throw DimensionError("subspace_join: ambient mismatch");
  // projector entries are O(1); measure the cutoff against 1 so a rounding-level
  // complement such as I - P_X with X = C^n counts as {0}
  const auto qm = range_basis(m.projector, tol, 1.0);
  const auto qn = range_basis(n.projector, tol, 1.0);
  return range_projector(hstack(qm, qn), tol, 1.0);
}

/// M ∩ N from principal angles.  A direction of M is kept when its distance
/// to N (the sine of its principal angle) is at most eq_atol.
inline Subspace subspace_meet(const Subspace& m, const Subspace& n,
                              const TolerancePolicy& tol = {}) {
  const std::size_t amb = m.ambient();
  if (amb != n.ambient()) throw DimensionError("subspace_meet: ambient mismatch");
  const auto qm = range_basis(m.projector, tol, 1.0);
  if (qm.cols() == 0 || n.dim == 0) return Subspace{0, ComplexMatrix(amb, amb)};
  const auto qn = range_basis(n.projector, tol, 1.0);
  const auto off = qm - qn * (qn.adjoint() * qm);  // (I - P_N) Q_M
  const auto d = svd(off);                          // rows >= cols: V is full
  std::vector<std::size_t> keep;
  for (std::size_t k = 0; k < d.s.size(); ++k)
    if (d.s[k] <= tol.eq_atol) keep.push_back(k);
  if (keep.empty()) return Subspace{0, ComplexMatrix(amb, amb)};
  ComplexMatrix coeff(qm.cols(), keep.size());
  for (std::size_t c = 0; c < keep.size(); ++c)
    for (std::size_t i = 0; i < qm.cols(); ++i) coeff(i, c) = d.v(i, keep[c]);
  const auto basis = qm * coeff;
  return Subspace{keep.size(), detail::gram_projector(basis)};
}

}  // namespace parasum
