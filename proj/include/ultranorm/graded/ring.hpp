#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <utility>
#include <vector>

#include "ultranorm/error.hpp"
#include "ultranorm/rational.hpp"
#include "ultranorm/valfield.hpp"

namespace ultranorm {

using LatticePoint = std::vector<long>;

/// Monomial basis of one graded piece: the lattice points of m * polytope.
struct DegreeBasis {
  int degree = 0;
  std::vector<LatticePoint> points;  // lexicographic order
  std::map<LatticePoint, std::size_t> index;

  std::size_t size() const { return points.size(); }
};

namespace detail {

// Kernel of a (rows x cols) rational matrix, as a list of basis vectors.
inline std::vector<Vector> kernel(Matrix m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  std::vector<std::size_t> pivot_cols;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && sgn(m(p, c)) == 0) ++p;
    if (p == rows) continue;
    for (std::size_t j = 0; j < cols; ++j) std::swap(m(p, j), m(r, j));
    const Rat inv = 1 / m(r, c);
    for (std::size_t j = 0; j < cols; ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || sgn(m(i, c)) == 0) continue;
      const Rat f = m(i, c);
      for (std::size_t j = 0; j < cols; ++j) m(i, j) -= f * m(r, j);
    }
    pivot_cols.push_back(c);
    ++r;
  }
  std::vector<Vector> out;
  for (std::size_t free = 0; free < cols; ++free) {
    if (std::find(pivot_cols.begin(), pivot_cols.end(), free) != pivot_cols.end()) continue;
    Vector v(cols, Rat(0));
    v[free] = 1;
    for (std::size_t i = 0; i < pivot_cols.size(); ++i) v[pivot_cols[i]] = -m(i, free);
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace detail

/// The section ring of a toric variety, given by a full-dimensional lattice
/// polytope. Degree-m sections are spanned by the lattice points of m * P,
/// and multiplication of monomials is addition of lattice points.
class SectionRing {
 public:
  explicit SectionRing(std::vector<LatticePoint> vertices) : vertices_(std::move(vertices)) {
    if (vertices_.empty()) throw Error(ErrorCode::invalid_argument, "polytope needs at least one vertex");
    dim_ = vertices_.front().size();
    if (dim_ == 0) throw Error(ErrorCode::invalid_argument, "polytope must live in Z^d with d >= 1");
    for (const auto& v : vertices_)
      if (v.size() != dim_) throw Error(ErrorCode::dimension_mismatch, "vertices of different dimension");
    std::sort(vertices_.begin(), vertices_.end());
    vertices_.erase(std::unique(vertices_.begin(), vertices_.end()), vertices_.end());
    compute_facets();
  }

  std::size_t ambient_dim() const { return dim_; }
  const std::vector<LatticePoint>& vertices() const { return vertices_; }

  /// Inequalities normal . x <= bound describing the polytope.
  const std::vector<std::pair<Vector, Rat>>& facets() const { return facets_; }

  bool contains(const std::vector<Rat>& x) const {
    for (const auto& [normal, bound] : facets_) {
      Rat s = 0;
      for (std::size_t i = 0; i < dim_; ++i) s += normal[i] * x[i];
      if (s > bound) return false;
    }
    return true;
  }

  /// Lattice points of m * P, memoized.
  std::shared_ptr<const DegreeBasis> basis(int m) const {
    if (m < 1) throw Error(ErrorCode::invalid_degree, "degree must be >= 1");
    {
      std::lock_guard<std::mutex> lock(*mutex_);
      auto it = cache_->find(m);
      if (it != cache_->end()) return it->second;
    }
    auto computed = std::make_shared<const DegreeBasis>(enumerate(m));
    std::lock_guard<std::mutex> lock(*mutex_);
    return cache_->emplace(m, std::move(computed)).first->second;
  }

  std::size_t rank(int m) const { return basis(m)->size(); }

  friend bool operator==(const SectionRing& a, const SectionRing& b) { return a.vertices_ == b.vertices_; }

 private:
  void compute_facets() {
    // Full dimension: the edge vectors from the first vertex span Q^d.
    Matrix edges(vertices_.size() - 1, dim_);
    for (std::size_t i = 1; i < vertices_.size(); ++i)
      for (std::size_t j = 0; j < dim_; ++j) edges(i - 1, j) = vertices_[i][j] - vertices_[0][j];
    if (vertices_.size() - 1 < dim_ || !detail::kernel(edges).empty())
      throw Error(ErrorCode::invalid_argument, "polytope must have nonempty interior in Z^d");

    // Brute force over d-subsets of vertices spanning a supporting hyperplane.
    std::set<std::pair<Vector, Rat>> seen;
    std::vector<std::size_t> idx(dim_);
    const std::size_t n = vertices_.size();
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t depth) {
      if (depth == dim_) {
        Matrix diffs(dim_ - 1, dim_);
        for (std::size_t i = 1; i < dim_; ++i)
          for (std::size_t j = 0; j < dim_; ++j) diffs(i - 1, j) = vertices_[idx[i]][j] - vertices_[idx[0]][j];
        const auto ker = dim_ == 1 ? std::vector<Vector>{Vector{Rat(1)}} : detail::kernel(diffs);
        if (ker.size() != 1) return;
        for (int sign : {1, -1}) {
          Vector normal = ker[0];
          for (auto& x : normal) x *= sign;
          // Normalize to a primitive integer vector.
          Int l = 1;
          for (const auto& x : normal) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
          Int g = 0;
          for (auto& x : normal) {
            x *= Rat(l);
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_num_mpz_t());
          }
          for (auto& x : normal) x /= Rat(g);
          auto value = [&](const LatticePoint& v) {
            Rat s = 0;
            for (std::size_t j = 0; j < dim_; ++j) s += normal[j] * v[j];
            return s;
          };
          const Rat bound = value(vertices_[idx[0]]);
          bool supporting = true;
          for (const auto& v : vertices_)
            if (value(v) > bound) {
              supporting = false;
              break;
            }
          if (supporting && seen.insert({normal, bound}).second) facets_.emplace_back(normal, bound);
        }
        return;
      }
      for (std::size_t i = start; i < n; ++i) {
        idx[depth] = i;
        rec(i + 1, depth + 1);
      }
    };
    rec(0, 0);
  }

  DegreeBasis enumerate(int m) const {
    LatticePoint lo(dim_), hi(dim_);
    for (std::size_t j = 0; j < dim_; ++j) {
      lo[j] = hi[j] = vertices_[0][j];
      for (const auto& v : vertices_) {
        lo[j] = std::min(lo[j], v[j]);
        hi[j] = std::max(hi[j], v[j]);
      }
      lo[j] *= m;
      hi[j] *= m;
    }
    DegreeBasis out;
    out.degree = m;
    LatticePoint x(lo);
    std::vector<Rat> scaled(dim_);
    while (true) {
      for (std::size_t j = 0; j < dim_; ++j) scaled[j] = make_rat(x[j], m);
      if (contains(scaled)) out.points.push_back(x);
      std::ptrdiff_t j = static_cast<std::ptrdiff_t>(dim_) - 1;
      while (j >= 0 && x[j] == hi[j]) {
        x[j] = lo[j];
        --j;
      }
      if (j < 0) break;
      ++x[j];
    }
    for (std::size_t i = 0; i < out.points.size(); ++i) out.index.emplace(out.points[i], i);
    return out;
  }

  std::vector<LatticePoint> vertices_;
  std::size_t dim_ = 0;
  std::vector<std::pair<Vector, Rat>> facets_;
  std::shared_ptr<std::mutex> mutex_ = std::make_shared<std::mutex>();
  std::shared_ptr<std::map<int, std::shared_ptr<const DegreeBasis>>> cache_ =
      std::make_shared<std::map<int, std::shared_ptr<const DegreeBasis>>>();
};

}  // namespace ultranorm
