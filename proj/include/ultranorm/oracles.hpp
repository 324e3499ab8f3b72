#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ultranorm/diagonal_norm.hpp"
#include "ultranorm/error.hpp"
#include "ultranorm/rational.hpp"
#include "ultranorm/valfield.hpp"

namespace ultranorm {

namespace detail {

inline void for_each_subset(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& f) {
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    f(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

inline Rat minor(const Matrix& m, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) {
  Matrix sub(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) sub(i, j) = m(rows[i], cols[j]);
  return det(sub);
}

}  // namespace detail

/// Sum of the k largest successive minima of (a, b), computed on k-th
/// exterior powers: the maximum over k-subsets I of a's basis of
/// sum_{i in I} alpha_i - weight_{Lambda^k b}(e_I). No joint basis is formed.
inline Rat exterior_minima_oracle(const DiagonalNorm& a, const DiagonalNorm& b, std::size_t k) {
  require_same_mode(a, b);
  const std::size_t n = a.dim();
  if (k < 1 || k > n) throw Error(ErrorCode::k_out_of_range, "k must lie in [1, n]");
  if (n > 8) throw Error(ErrorCode::invalid_argument, "exterior oracle is limited to n <= 8");
  // Columns: a's basis vectors in b's coordinates.
  const Matrix m = inverse(b.basis()) * a.basis();
  std::optional<Rat> best;
  detail::for_each_subset(n, k, [&](const std::vector<std::size_t>& cols) {
    ExtRat wb = ExtRat::infinity();
    detail::for_each_subset(n, k, [&](const std::vector<std::size_t>& rows) {
      const Rat c = detail::minor(m, rows, cols);
      if (sgn(c) == 0) return;
      Rat wsum = 0;
      for (auto j : rows) wsum += b.weights()[j];
      wb = min(wb, b.coefficient_valuation(c) + ExtRat(wsum));
    });
    Rat value = -wb.value();
    for (auto i : cols) value += a.weights()[i];
    if (!best || value > *best) best = value;
  });
  return *best;
}

/// Invariant factors of an integer matrix (diagonal of its Smith normal
/// form, up to sign).
inline std::vector<Int> smith_invariants(std::vector<std::vector<Int>> m) {
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m[0].size() : 0;
  std::vector<Int> out;
  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    while (true) {
      // Smallest nonzero entry of the remaining block goes to (t, t).
      std::optional<std::pair<std::size_t, std::size_t>> piv;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j)
          if (m[i][j] != 0 && (!piv || abs(m[i][j]) < abs(m[piv->first][piv->second]))) piv = {i, j};
      if (!piv) {
        for (std::size_t r = t; r < std::min(rows, cols); ++r) out.push_back(0);
        return out;
      }
      std::swap(m[t], m[piv->first]);
      for (auto& row : m) std::swap(row[t], row[piv->second]);
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        Int q = m[i][t] / m[t][t];
        if (q != 0)
          for (std::size_t j = t; j < cols; ++j) m[i][j] -= q * m[t][j];
        if (m[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        Int q = m[t][j] / m[t][t];
        if (q != 0)
          for (std::size_t i = t; i < rows; ++i) m[i][j] -= q * m[i][t];
        if (m[t][j] != 0) clean = false;
      }
      if (!clean) continue;
      // The pivot must divide the rest of the block.
      std::optional<std::size_t> bad_row;
      for (std::size_t i = t + 1; i < rows && !bad_row; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (m[i][j] % m[t][t] != 0) {
            bad_row = i;
            break;
          }
      if (!bad_row) break;
      for (std::size_t j = t; j < cols; ++j) m[t][j] += m[*bad_row][j];
    }
    out.push_back(abs(m[t][t]));
  }
  return out;
}

/// Successive minima of two p-adic norms with integer weights, read off the
/// invariant factors of the change of basis between their unit balls.
inline std::vector<Rat> snf_minima_oracle(const DiagonalNorm& a, const DiagonalNorm& b) {
  require_same_space(a, b);
  if (a.mode() != Mode::norm || b.mode() != Mode::norm || a.field().is_trivial() || !(a.field() == b.field()))
    throw Error(ErrorCode::mode, "SNF oracle needs two p-adic field-valued norms");
  for (const auto* norm : {&a, &b})
    for (const auto& w : norm->weights())
      if (!is_integer(w)) throw Error(ErrorCode::non_integer_weights, "SNF oracle needs integer weights");
  const std::size_t n = a.dim();
  const long p = a.field().prime();
  auto p_power = [&](const Rat& e) {
    Rat r = pow(Rat(p), static_cast<unsigned>(abs(e).get_num().get_ui()));
    return e < 0 ? Rat(1 / r) : r;
  };
  // Unit balls are spanned by p^-w_i b_i.
  Matrix la = a.basis();
  Matrix lb = b.basis();
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) {
      la(i, j) *= p_power(Rat(-a.weights()[j]));
      lb(i, j) *= p_power(Rat(-b.weights()[j]));
    }
  const Matrix t = inverse(la) * lb;
  Int denom = 1;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) mpz_lcm(denom.get_mpz_t(), denom.get_mpz_t(), t(i, j).get_den_mpz_t());
  std::vector<std::vector<Int>> integral(n, std::vector<Int>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Rat x = t(i, j) * Rat(denom);
      integral[i][j] = x.get_num();
    }
  const FieldSpec field = a.field();
  const Rat shift = field.val(Rat(denom)).value();
  std::vector<Rat> lambda;
  for (const auto& d : smith_invariants(integral)) lambda.push_back(field.val(Rat(d)).value() - shift);
  std::sort(lambda.begin(), lambda.end(), std::greater<>());
  return lambda;
}

enum class ModePair { norm_norm, norm_filtration, filtration_filtration };

inline std::string to_string(ModePair m) {
  switch (m) {
    case ModePair::norm_norm:
      return "norm/norm";
    case ModePair::norm_filtration:
      return "norm/filtration";
    case ModePair::filtration_filtration:
      return "filtration/filtration";
  }
  return "?";
}

/// Seeded generator of random norms, filtrations and vectors.
class InstanceGenerator {
 public:
  explicit InstanceGenerator(std::uint64_t seed) : rng_(seed) {}

  long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }

  /// Invertible integer matrix with entries in [-9, 9].
  Matrix invertible_matrix(std::size_t n) {
    while (true) {
      Matrix m(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = uniform(-9, 9);
      if (det(m) != 0) return m;
    }
  }

  Rat weight(long denominator_bound) {
    const long den = uniform(1, std::max(1L, denominator_bound));
    return make_rat(uniform(-3 * den, 3 * den), den);
  }

  std::vector<Rat> weights(std::size_t n, long denominator_bound) {
    std::vector<Rat> w;
    for (std::size_t i = 0; i < n; ++i) w.push_back(weight(denominator_bound));
    return w;
  }

  DiagonalNorm norm(const FieldSpec& field, Mode mode, std::size_t n, long denominator_bound) {
    return DiagonalNorm(field, mode, invertible_matrix(n), weights(n, denominator_bound));
  }

  /// Nonzero vector with integer entries scaled by a random power of p, so
  /// that valuations vary.
  Vector vector(std::size_t n, long p) {
    while (true) {
      Vector v(n);
      bool nonzero = false;
      for (auto& x : v) {
        x = uniform(-12, 12);
        nonzero = nonzero || x != 0;
      }
      if (!nonzero) continue;
      const long e = uniform(-2, 2);
      const Rat scale = e >= 0 ? pow(Rat(p), static_cast<unsigned>(e)) : Rat(1 / pow(Rat(p), static_cast<unsigned>(-e)));
      for (auto& x : v) x *= scale;
      return v;
    }
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

/// Reproducible random pair of norms on Q^n over the p-adic field.
inline std::pair<DiagonalNorm, DiagonalNorm> random_instance(std::uint64_t seed, std::size_t n, long p,
                                                             long weight_denominator_bound, ModePair modes) {
  if (n < 1) throw Error(ErrorCode::invalid_argument, "n must be >= 1");
  InstanceGenerator gen(seed);
  const FieldSpec field = FieldSpec::padic(p);
  const Mode first = modes == ModePair::filtration_filtration ? Mode::filtration : Mode::norm;
  const Mode second = modes == ModePair::norm_norm ? Mode::norm : Mode::filtration;
  DiagonalNorm a = gen.norm(field, first, n, weight_denominator_bound);
  DiagonalNorm b = gen.norm(field, second, n, weight_denominator_bound);
  return {std::move(a), std::move(b)};
}

}  // namespace ultranorm
