#pragma once

#include <cstdint>
#include <random>

#include "parasum/linalg.hpp"

namespace parasum::gen {

/// Bumped whenever any generator below changes what it draws.
inline constexpr const char* kGeneratorVersion = "parasum-gen/1";

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent stream for trial `index` of a run seeded with `seed`.
inline Rng trial_rng(std::uint64_t seed, std::uint64_t index) {
  return Rng(splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL)));
}

inline std::size_t uniform_index(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Entrywise complex standard Gaussian (E|z|^2 = 1).
inline ComplexMatrix gaussian(Rng& rng, std::size_t rows, std::size_t cols) {
  std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
  ComplexMatrix m(rows, cols);
  for (auto& z : m.data()) {
    const double re = nd(rng);
    z = complex(re, nd(rng));
  }
  return m;
}

/// Orthonormalize the columns of m (modified Gram-Schmidt, two passes).
inline ComplexMatrix orthonormalize(ComplexMatrix m) {
  for (std::size_t j = 0; j < m.cols(); ++j) {
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t k = 0; k < j; ++k) {
        complex dot = 0.0;
        for (std::size_t i = 0; i < m.rows(); ++i) dot += std::conj(m(i, k)) * m(i, j);
        for (std::size_t i = 0; i < m.rows(); ++i) m(i, j) -= dot * m(i, k);
      }
    double nrm = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) nrm += std::norm(m(i, j));
    nrm = std::sqrt(nrm);
    for (std::size_t i = 0; i < m.rows(); ++i) m(i, j) /= nrm;
  }
  return m;
}

/// n x r matrix with orthonormal columns, r <= n.
inline ComplexMatrix isometry(Rng& rng, std::size_t n, std::size_t r) {
  return orthonormalize(gaussian(rng, n, r));
}

inline ComplexMatrix unitary(Rng& rng, std::size_t n) { return isometry(rng, n, n); }

/// n x r factor Q diag(s) with orthonormal Q and s uniform in [lo, hi].
inline ComplexMatrix scaled_isometry(Rng& rng, std::size_t n, std::size_t r, double lo = 0.5,
                                     double hi = 2.0) {
  auto q = isometry(rng, n, r);
  for (std::size_t j = 0; j < r; ++j) {
    const double s = uniform(rng, lo, hi);
    for (std::size_t i = 0; i < n; ++i) q(i, j) *= s;
  }
  return q;
}

/// Exact-rank m x n matrix as a product of independent m x r and r x n factors.
inline ComplexMatrix rank_r(Rng& rng, std::size_t m, std::size_t n, std::size_t r) {
  if (r == 0) return ComplexMatrix(m, n);
  return scaled_isometry(rng, m, r) * scaled_isometry(rng, n, r).adjoint();
}

/// Rank-r psd matrix F F*.
inline ComplexMatrix psd(Rng& rng, std::size_t n, std::size_t r) {
  if (r == 0) return ComplexMatrix(n, n);
  const auto f = scaled_isometry(rng, n, r);
  return hermitian_part(f * f.adjoint());
}

/// psd matrix whose range is the span of the columns of `basis` (orthonormal).
inline ComplexMatrix psd_on(Rng& rng, const ComplexMatrix& basis) {
  if (basis.cols() == 0) return ComplexMatrix(basis.rows(), basis.rows());
  const auto inner = scaled_isometry(rng, basis.cols(), basis.cols());
  const auto f = basis * inner;
  return hermitian_part(f * f.adjoint());
}

/// Orthogonal projector of rank r.
inline ComplexMatrix projector(Rng& rng, std::size_t n, std::size_t r) {
  if (r == 0) return ComplexMatrix(n, n);
  const auto q = isometry(rng, n, r);
  return hermitian_part(q * q.adjoint());
}

/// Columns [first, first + count) of m.
inline ComplexMatrix columns(const ComplexMatrix& m, std::size_t first, std::size_t count) {
  return m.block(0, first, m.rows(), count);
}

/// Two psd matrices whose ranges share a planted common subspace (possibly
/// {0}), optionally overlapping generically as well.
struct PsdPair {
  ComplexMatrix a, b;
};

inline PsdPair psd_pair(Rng& rng, std::size_t n) {
  const auto w = unitary(rng, n);
  const std::size_t shared = uniform_index(rng, 0, n / 2);
  const std::size_t ra = uniform_index(rng, 0, n - shared);
  const std::size_t rb = uniform_index(rng, 0, n - shared - ra);
  const auto common = columns(w, 0, shared);
  const auto basis_a = hstack(common, columns(w, shared, ra));
  const auto basis_b = hstack(common, columns(w, shared + ra, rb));
  return {psd_on(rng, basis_a), psd_on(rng, basis_b)};
}

}  // namespace parasum::gen
