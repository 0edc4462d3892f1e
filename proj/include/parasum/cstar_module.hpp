#pragma once

#include <numeric>
#include <stdexcept>
#include <vector>

#include "parasum/linalg.hpp"
#include "parasum/parasum.hpp"
#include "parasum/random.hpp"

// Free Hilbert modules A^k over a finite-dimensional C*-algebra
// A = M_{n_1}(C) ⊕ ... ⊕ M_{n_r}(C).

namespace parasum::cstar {

class AlgebraMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct FiniteCStarAlgebra {
  std::vector<std::size_t> block_dims;

  explicit FiniteCStarAlgebra(std::vector<std::size_t> dims) : block_dims(std::move(dims)) {
    if (block_dims.empty()) throw std::invalid_argument("algebra needs at least one block");
    for (auto d : block_dims)
      if (d == 0) throw std::invalid_argument("algebra block dimensions must be positive");
  }

  std::size_t block_count() const { return block_dims.size(); }
  std::size_t total_dim() const {
    return std::accumulate(block_dims.begin(), block_dims.end(), std::size_t{0});
  }
  std::size_t offset(std::size_t b) const {
    return std::accumulate(block_dims.begin(), block_dims.begin() + b, std::size_t{0});
  }

  friend bool operator==(const FiniteCStarAlgebra&, const FiniteCStarAlgebra&) = default;
};

/// Element of A: one n_i x n_i block per summand.
class AlgebraElement {
 public:
  explicit AlgebraElement(FiniteCStarAlgebra alg) : alg_(std::move(alg)) {
    for (auto d : alg_.block_dims) blocks_.emplace_back(d, d);
  }

  AlgebraElement(FiniteCStarAlgebra alg, std::vector<ComplexMatrix> blocks)
      : alg_(std::move(alg)), blocks_(std::move(blocks)) {
    if (blocks_.size() != alg_.block_count())
      throw AlgebraMismatch("block count does not match the algebra");
    for (std::size_t b = 0; b < blocks_.size(); ++b)
      if (blocks_[b].rows() != alg_.block_dims[b] || blocks_[b].cols() != alg_.block_dims[b])
        throw AlgebraMismatch("block shape does not match the algebra");
  }

  static AlgebraElement zero(const FiniteCStarAlgebra& alg) { return AlgebraElement(alg); }

  static AlgebraElement identity(const FiniteCStarAlgebra& alg) {
    AlgebraElement e(alg);
    for (std::size_t b = 0; b < alg.block_count(); ++b)
      e.blocks_[b] = ComplexMatrix::identity(alg.block_dims[b]);
    return e;
  }

  const FiniteCStarAlgebra& algebra() const { return alg_; }
  const std::vector<ComplexMatrix>& blocks() const { return blocks_; }
  const ComplexMatrix& block(std::size_t b) const { return blocks_[b]; }
  ComplexMatrix& block(std::size_t b) { return blocks_[b]; }

  AlgebraElement adjoint() const {
    AlgebraElement r(alg_);
    for (std::size_t b = 0; b < blocks_.size(); ++b) r.blocks_[b] = blocks_[b].adjoint();
    return r;
  }

  /// C*-norm: max over blocks of the operator norm.
  double norm() const {
    double m = 0.0;
    for (const auto& blk : blocks_) m = std::max(m, operator_norm(blk));
    return m;
  }

  /// Blockwise psd test.
  bool is_positive(const TolerancePolicy& tol = {}) const {
    return std::all_of(blocks_.begin(), blocks_.end(),
                       [&](const ComplexMatrix& blk) { return parasum::is_positive(blk, tol); });
  }

  double distance(const AlgebraElement& o) const {
    require_same(o);
    double s = 0.0;
    for (std::size_t b = 0; b < blocks_.size(); ++b)
      s += std::norm((blocks_[b] - o.blocks_[b]).frobenius_norm());
    return std::sqrt(s);
  }

  AlgebraElement& operator+=(const AlgebraElement& o) {
    require_same(o);
    for (std::size_t b = 0; b < blocks_.size(); ++b) blocks_[b] += o.blocks_[b];
    return *this;
  }
  AlgebraElement& operator-=(const AlgebraElement& o) {
    require_same(o);
    for (std::size_t b = 0; b < blocks_.size(); ++b) blocks_[b] -= o.blocks_[b];
    return *this;
  }
  AlgebraElement& operator*=(complex s) {
    for (auto& blk : blocks_) blk *= s;
    return *this;
  }

  friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
  friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
  friend AlgebraElement operator*(AlgebraElement a, complex s) { return a *= s; }
  friend AlgebraElement operator*(complex s, AlgebraElement a) { return a *= s; }
  friend AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
    a.require_same(b);
    AlgebraElement r(a.alg_);
    for (std::size_t i = 0; i < a.blocks_.size(); ++i) r.blocks_[i] = a.blocks_[i] * b.blocks_[i];
    return r;
  }

  void require_same(const AlgebraElement& o) const {
    if (!(alg_ == o.alg_)) throw AlgebraMismatch("elements belong to different algebras");
  }

 private:
  FiniteCStarAlgebra alg_;
  std::vector<ComplexMatrix> blocks_;
};

/// Vector of the free right module A^k.
class HilbertModuleVector {
 public:
  HilbertModuleVector(const FiniteCStarAlgebra& alg, std::size_t rank)
      : components_(rank, AlgebraElement(alg)) {
    if (rank == 0) throw std::invalid_argument("module rank must be positive");
  }

  explicit HilbertModuleVector(std::vector<AlgebraElement> components)
      : components_(std::move(components)) {
    if (components_.empty()) throw std::invalid_argument("module rank must be positive");
    for (const auto& c : components_) components_.front().require_same(c);
  }

  std::size_t rank() const { return components_.size(); }
  const FiniteCStarAlgebra& algebra() const { return components_.front().algebra(); }
  const AlgebraElement& operator[](std::size_t i) const { return components_[i]; }
  AlgebraElement& operator[](std::size_t i) { return components_[i]; }

  /// Right action x·a.
  HilbertModuleVector times(const AlgebraElement& a) const {
    auto r = *this;
    for (auto& c : r.components_) c = c * a;
    return r;
  }

  void require_same(const HilbertModuleVector& o) const {
    if (rank() != o.rank()) throw AlgebraMismatch("module vectors have different ranks");
    components_.front().require_same(o.components_.front());
  }

  HilbertModuleVector& operator+=(const HilbertModuleVector& o) {
    require_same(o);
    for (std::size_t i = 0; i < rank(); ++i) components_[i] += o.components_[i];
    return *this;
  }
  HilbertModuleVector& operator*=(complex s) {
    for (auto& c : components_) c *= s;
    return *this;
  }
  friend HilbertModuleVector operator+(HilbertModuleVector a, const HilbertModuleVector& b) {
    return a += b;
  }
  friend HilbertModuleVector operator*(complex s, HilbertModuleVector a) { return a *= s; }

  double distance(const HilbertModuleVector& o) const {
    require_same(o);
    double s = 0.0;
    for (std::size_t i = 0; i < rank(); ++i) s += std::norm(components_[i].distance(o[i]));
    return std::sqrt(s);
  }

 private:
  std::vector<AlgebraElement> components_;
};

/// <x, y> = sum_i x_i* y_i
inline AlgebraElement inner_product(const HilbertModuleVector& x, const HilbertModuleVector& y) {
  x.require_same(y);
  auto r = AlgebraElement::zero(x.algebra());
  for (std::size_t i = 0; i < x.rank(); ++i) r += x[i].adjoint() * y[i];
  return r;
}

/// ||x|| = sqrt(||<x, x>||)
inline double module_norm(const HilbertModuleVector& x) {
  return std::sqrt(inner_product(x, x).norm());
}

/// Adjointable operator on A^k: a k x k grid acting by left multiplication.
class ModuleOperator {
 public:
  ModuleOperator(const FiniteCStarAlgebra& alg, std::size_t rank)
      : rank_(rank), grid_(rank * rank, AlgebraElement(alg)) {
    if (rank == 0) throw std::invalid_argument("module rank must be positive");
  }

  static ModuleOperator identity(const FiniteCStarAlgebra& alg, std::size_t rank) {
    ModuleOperator t(alg, rank);
    for (std::size_t i = 0; i < rank; ++i) t(i, i) = AlgebraElement::identity(alg);
    return t;
  }

  std::size_t rank() const { return rank_; }
  const FiniteCStarAlgebra& algebra() const { return grid_.front().algebra(); }

  AlgebraElement& operator()(std::size_t i, std::size_t j) { return grid_[i * rank_ + j]; }
  const AlgebraElement& operator()(std::size_t i, std::size_t j) const {
    return grid_[i * rank_ + j];
  }

  HilbertModuleVector apply(const HilbertModuleVector& x) const {
    if (x.rank() != rank_) throw AlgebraMismatch("operator and vector ranks differ");
    grid_.front().require_same(x[0]);
    HilbertModuleVector r(algebra(), rank_);
    for (std::size_t i = 0; i < rank_; ++i)
      for (std::size_t j = 0; j < rank_; ++j) r[i] += (*this)(i, j) * x[j];
    return r;
  }

  ModuleOperator adjoint() const {
    ModuleOperator r(algebra(), rank_);
    for (std::size_t i = 0; i < rank_; ++i)
      for (std::size_t j = 0; j < rank_; ++j) r(i, j) = (*this)(j, i).adjoint();
    return r;
  }

  void require_same(const ModuleOperator& o) const {
    if (rank_ != o.rank_) throw AlgebraMismatch("operators have different ranks");
    grid_.front().require_same(o.grid_.front());
  }

  ModuleOperator& operator+=(const ModuleOperator& o) {
    require_same(o);
    for (std::size_t k = 0; k < grid_.size(); ++k) grid_[k] += o.grid_[k];
    return *this;
  }
  ModuleOperator& operator*=(complex s) {
    for (auto& e : grid_) e *= s;
    return *this;
  }
  friend ModuleOperator operator+(ModuleOperator a, const ModuleOperator& b) { return a += b; }
  friend ModuleOperator operator*(complex s, ModuleOperator a) { return a *= s; }
  friend ModuleOperator operator*(const ModuleOperator& a, const ModuleOperator& b) {
    a.require_same(b);
    ModuleOperator r(a.algebra(), a.rank_);
    for (std::size_t i = 0; i < a.rank_; ++i)
      for (std::size_t j = 0; j < a.rank_; ++j)
        for (std::size_t l = 0; l < a.rank_; ++l) r(i, j) += a(i, l) * b(l, j);
    return r;
  }

  double distance(const ModuleOperator& o) const {
    require_same(o);
    double s = 0.0;
    for (std::size_t k = 0; k < grid_.size(); ++k) s += std::norm(grid_[k].distance(o.grid_[k]));
    return std::sqrt(s);
  }

 private:
  std::size_t rank_;
  std::vector<AlgebraElement> grid_;
};

// ---------------------------------------------------------------------------
// Faithful representation on C^{kN}: index i*N + offset(b) + r carries row r of
// block b of component i.

inline ComplexMatrix flatten(const ModuleOperator& t) {
  const auto& alg = t.algebra();
  const std::size_t n = alg.total_dim(), k = t.rank();
  ComplexMatrix m(k * n, k * n);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t b = 0; b < alg.block_count(); ++b) {
        const std::size_t off = alg.offset(b);
        m.set_block(i * n + off, j * n + off, t(i, j).block(b));
      }
  return m;
}

/// Column vector x as a kN x N matrix; <x, y> flattens to X* Y.
inline ComplexMatrix flatten(const HilbertModuleVector& x) {
  const auto& alg = x.algebra();
  const std::size_t n = alg.total_dim(), k = x.rank();
  ComplexMatrix m(k * n, n);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t b = 0; b < alg.block_count(); ++b) {
      const std::size_t off = alg.offset(b);
      m.set_block(i * n + off, off, x[i].block(b));
    }
  return m;
}

inline ComplexMatrix flatten(const AlgebraElement& a) {
  ComplexMatrix m(a.algebra().total_dim(), a.algebra().total_dim());
  for (std::size_t b = 0; b < a.algebra().block_count(); ++b)
    m.set_block(a.algebra().offset(b), a.algebra().offset(b), a.block(b));
  return m;
}

/// Frobenius mass of m outside the image of flatten.
inline double off_image_residual(const ComplexMatrix& m, const FiniteCStarAlgebra& alg,
                                 std::size_t rank) {
  const std::size_t n = alg.total_dim();
  if (m.rows() != rank * n || m.cols() != rank * n)
    throw DimensionError("off_image_residual: matrix does not match the module");
  std::vector<std::size_t> owner(n);
  for (std::size_t b = 0; b < alg.block_count(); ++b)
    for (std::size_t r = 0; r < alg.block_dims[b]; ++r) owner[alg.offset(b) + r] = b;
  double s = 0.0;
  for (std::size_t p = 0; p < m.rows(); ++p)
    for (std::size_t q = 0; q < m.cols(); ++q)
      if (owner[p % n] != owner[q % n]) s += std::norm(m(p, q));
  return std::sqrt(s);
}

/// Inverse of flatten on its image; entries outside the image are ignored.
inline ModuleOperator unflatten(const ComplexMatrix& m, const FiniteCStarAlgebra& alg,
                                std::size_t rank) {
  const std::size_t n = alg.total_dim();
  if (m.rows() != rank * n || m.cols() != rank * n)
    throw DimensionError("unflatten: matrix does not match the module");
  ModuleOperator t(alg, rank);
  for (std::size_t i = 0; i < rank; ++i)
    for (std::size_t j = 0; j < rank; ++j)
      for (std::size_t b = 0; b < alg.block_count(); ++b) {
        const std::size_t off = alg.offset(b), d = alg.block_dims[b];
        t(i, j).block(b) = m.block(i * n + off, j * n + off, d, d);
      }
  return t;
}

/// L(A^k) ≅ ⊕_b M_{k n_b}: the b-th summand collects block b of every grid entry.
inline ComplexMatrix component(const ModuleOperator& t, std::size_t b) {
  const std::size_t d = t.algebra().block_dims.at(b), k = t.rank();
  ComplexMatrix m(k * d, k * d);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) m.set_block(i * d, j * d, t(i, j).block(b));
  return m;
}

inline ModuleOperator from_components(const FiniteCStarAlgebra& alg, std::size_t rank,
                                      const std::vector<ComplexMatrix>& comps) {
  if (comps.size() != alg.block_count())
    throw AlgebraMismatch("from_components: one matrix per algebra block required");
  ModuleOperator t(alg, rank);
  for (std::size_t b = 0; b < comps.size(); ++b) {
    const std::size_t d = alg.block_dims[b];
    if (comps[b].rows() != rank * d || comps[b].cols() != rank * d)
      throw DimensionError("from_components: component has the wrong size");
    for (std::size_t i = 0; i < rank; ++i)
      for (std::size_t j = 0; j < rank; ++j) t(i, j).block(b) = comps[b].block(i * d, j * d, d, d);
  }
  return t;
}

inline bool is_positive(const ModuleOperator& t, const TolerancePolicy& tol = {}) {
  return parasum::is_positive(flatten(t), tol);
}

/// A:B for positive module operators, computed in the flattened picture.
inline ModuleOperator module_parallel_sum(const ModuleOperator& a, const ModuleOperator& b,
                                          const TolerancePolicy& tol = {}) {
  a.require_same(b);
  const auto fa = flatten(a), fb = flatten(b);
  if (!parasum::is_positive(fa, tol) || !parasum::is_positive(fb, tol))
    throw NotPositiveError("module_parallel_sum: operands must be positive");
  return unflatten(parallel_sum(fa, fb, tol).value, a.algebra(), a.rank());
}

// ---------------------------------------------------------------------------
// Random instances

namespace gen {

using parasum::gen::Rng;

inline AlgebraElement element(Rng& rng, const FiniteCStarAlgebra& alg) {
  std::vector<ComplexMatrix> blocks;
  for (auto d : alg.block_dims) blocks.push_back(parasum::gen::gaussian(rng, d, d));
  return AlgebraElement(alg, std::move(blocks));
}

inline HilbertModuleVector vector(Rng& rng, const FiniteCStarAlgebra& alg, std::size_t rank) {
  std::vector<AlgebraElement> comps;
  for (std::size_t i = 0; i < rank; ++i) comps.push_back(element(rng, alg));
  return HilbertModuleVector(std::move(comps));
}

inline ModuleOperator op(Rng& rng, const FiniteCStarAlgebra& alg, std::size_t rank) {
  ModuleOperator t(alg, rank);
  for (std::size_t i = 0; i < rank; ++i)
    for (std::size_t j = 0; j < rank; ++j) t(i, j) = element(rng, alg);
  return t;
}

/// Positive operator with independently drawn rank in every summand.
inline ModuleOperator positive_op(Rng& rng, const FiniteCStarAlgebra& alg, std::size_t rank) {
  std::vector<ComplexMatrix> comps;
  for (auto d : alg.block_dims) {
    const std::size_t n = rank * d;
    comps.push_back(parasum::gen::psd(rng, n, parasum::gen::uniform_index(rng, 0, n)));
  }
  return from_components(alg, rank, comps);
}

/// Exact-rank (per summand) general operator.
inline ModuleOperator rank_op(Rng& rng, const FiniteCStarAlgebra& alg, std::size_t rank) {
  std::vector<ComplexMatrix> comps;
  for (auto d : alg.block_dims) {
    const std::size_t n = rank * d;
    comps.push_back(parasum::gen::rank_r(rng, n, n, parasum::gen::uniform_index(rng, 0, n)));
  }
  return from_components(alg, rank, comps);
}

}  // namespace gen

}  // namespace parasum::cstar
