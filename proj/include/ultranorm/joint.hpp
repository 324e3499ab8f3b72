#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "ultranorm/diagonal_norm.hpp"
#include "ultranorm/error.hpp"
#include "ultranorm/rational.hpp"
#include "ultranorm/valfield.hpp"

namespace ultranorm {

/// -log of the determinant norm of delta * (e_1 ^ ... ^ e_n), where e_i is the
/// reference basis of V. For delta = det(basis) this is the sum of weights.
inline Rat det_weight(const DiagonalNorm& norm, const Rat& generator) {
  if (generator == 0) throw Error(ErrorCode::zero_generator, "determinant generator is zero");
  Rat total = norm.coefficient_valuation(Rat(generator / norm.basis_det())).value();
  for (const auto& w : norm.weights()) total += w;
  return total;
}

/// det_weight(norm, wedge of the columns) minus the sum of column weights.
/// Nonnegative; zero exactly when the columns form an orthogonal basis.
inline Rat orthogonality_defect(const Matrix& basis, const DiagonalNorm& norm) {
  if (!basis.is_square() || basis.rows() != norm.dim())
    throw Error(ErrorCode::dimension_mismatch, "defect: basis shape");
  const Rat d = det(basis);
  if (d == 0) throw Error(ErrorCode::singular_matrix, "defect: basis is singular");
  Rat defect = det_weight(norm, d);
  for (std::size_t i = 0; i < basis.cols(); ++i) defect -= norm.eval_weight(basis.column(i)).value();
  return defect;
}

struct WeightPair {
  Rat first;   // weight under the first norm
  Rat second;  // weight under the second norm

  friend bool operator==(const WeightPair&, const WeightPair&) = default;
};

/// A basis orthogonal for two norms at once, with the weights of each basis
/// vector under both.
struct JointPresentation {
  Matrix basis;  // columns in reference coordinates
  std::vector<WeightPair> pairs;

  std::size_t dim() const { return pairs.size(); }
};

/// Checks the certificate of a joint presentation: both defects vanish and
/// the stored weights agree with direct evaluation.
inline bool certify(const JointPresentation& jp, const DiagonalNorm& first, const DiagonalNorm& second) {
  if (jp.basis.cols() != jp.pairs.size() || jp.basis.rows() != first.dim()) return false;
  const Rat d = det(jp.basis);
  if (d == 0) return false;
  Rat sum_first = 0;
  Rat sum_second = 0;
  for (std::size_t i = 0; i < jp.pairs.size(); ++i) {
    const Vector v = jp.basis.column(i);
    if (first.eval_weight(v) != ExtRat(jp.pairs[i].first)) return false;
    if (second.eval_weight(v) != ExtRat(jp.pairs[i].second)) return false;
    sum_first += jp.pairs[i].first;
    sum_second += jp.pairs[i].second;
  }
  return det_weight(first, d) == sum_first && det_weight(second, d) == sum_second;
}

namespace detail {

// A diagonal presentation in local coordinates, used during the recursion.
struct LocalNorm {
  Matrix basis;
  Matrix inverse;
  std::vector<Rat> weights;
  bool trivially_valued;
  FieldSpec field;

  ExtRat cval(const Rat& a) const {
    if (sgn(a) == 0) return ExtRat::infinity();
    return trivially_valued ? ExtRat(0L) : field.val(a);
  }

  ExtRat weight_of_coordinates(const Vector& coords) const {
    ExtRat best = ExtRat::infinity();
    for (std::size_t i = 0; i < coords.size(); ++i)
      if (sgn(coords[i]) != 0) best = min(best, cval(coords[i]) + ExtRat(weights[i]));
    return best;
  }

  ExtRat eval(const Vector& v) const { return weight_of_coordinates(inverse * v); }

  // Index attaining the minimum in the evaluation of v; lowest index on ties.
  std::size_t attaining_index(const Vector& coords) const {
    std::optional<std::size_t> best;
    ExtRat best_value = ExtRat::infinity();
    for (std::size_t i = 0; i < coords.size(); ++i) {
      if (sgn(coords[i]) == 0) continue;
      ExtRat value = cval(coords[i]) + ExtRat(weights[i]);
      if (!best || value < best_value) {
        best = i;
        best_value = value;
      }
    }
    if (!best) throw Error(ErrorCode::internal, "exchange with the zero vector");
    return *best;
  }
};

template <class T>
std::vector<T> drop_index(const std::vector<T>& v, std::size_t k) {
  std::vector<T> out;
  out.reserve(v.size() - 1);
  for (std::size_t i = 0; i < v.size(); ++i)
    if (i != k) out.push_back(v[i]);
  return out;
}

struct LocalJoint {
  std::vector<Vector> basis;
  std::vector<WeightPair> pairs;
};

// Recursive exchange-and-quotient joint diagonalization.
//
// A vector g is chosen so that it minimizes ||.||_b / ||.||_a (same valuation),
// or is of minimal norm for the trivially-valued side (mixed valuations). g is
// exchanged into both orthogonal bases, both norms are pushed to the quotient
// V / Kg, the quotient is solved recursively, and each quotient vector is
// lifted to a representative that is optimal for both norms at once. The
// choice of g guarantees that one of the two natural lifts works.
inline LocalJoint joint_local(const LocalNorm& a, const LocalNorm& b) {
  const std::size_t d = a.weights.size();
  LocalJoint out;
  if (d == 1) {
    Vector v = a.basis.column(0);
    out.pairs.push_back({a.eval(v).value(), b.eval(v).value()});
    out.basis.push_back(std::move(v));
    return out;
  }

  Vector g;
  if (!a.trivially_valued && b.trivially_valued) {
    std::size_t j = 0;
    for (std::size_t i = 1; i < d; ++i)
      if (b.weights[i] > b.weights[j]) j = i;
    g = b.basis.column(j);
  } else if (a.trivially_valued && !b.trivially_valued) {
    std::size_t j = 0;
    for (std::size_t i = 1; i < d; ++i)
      if (a.weights[i] > a.weights[j]) j = i;
    g = a.basis.column(j);
  } else {
    std::optional<std::size_t> best;
    Rat best_score;
    for (std::size_t j = 0; j < d; ++j) {
      Rat score = b.weights[j] - a.eval(b.basis.column(j)).value();
      if (!best || score > best_score) {
        best = j;
        best_score = score;
      }
    }
    g = b.basis.column(*best);
  }

  // Exchange g into both bases.
  const Vector ga = a.inverse * g;
  const std::size_t ka = a.attaining_index(ga);
  const Vector gb = b.inverse * g;
  const std::size_t kb = b.attaining_index(gb);
  const Rat weight_a = a.weight_of_coordinates(ga).value();
  const Rat weight_b = b.weight_of_coordinates(gb).value();

  Matrix a_basis = a.basis;
  a_basis.set_column(ka, g);
  Matrix b_basis = b.basis;
  b_basis.set_column(kb, g);
  const Matrix a_inverse = inverse(a_basis);

  // Quotient coordinates: a-coordinates with the g-slot dropped.
  auto project = [&](const Vector& v) { return drop_index(a_inverse * v, ka); };

  LocalNorm qa{Matrix::identity(d - 1), Matrix::identity(d - 1), drop_index(a.weights, ka),
               a.trivially_valued, a.field};
  std::vector<Vector> qb_columns;
  std::vector<std::size_t> b_kept;
  for (std::size_t j = 0; j < d; ++j) {
    if (j == kb) continue;
    qb_columns.push_back(project(b_basis.column(j)));
    b_kept.push_back(j);
  }
  Matrix qb_basis = Matrix::from_columns(qb_columns);
  Matrix qb_inverse = inverse(qb_basis);
  LocalNorm qb{qb_basis, qb_inverse, drop_index(b.weights, kb), b.trivially_valued, b.field};

  LocalJoint sub = joint_local(qa, qb);

  LocalNorm a_now{a_basis, a_inverse, a.weights, a.trivially_valued, a.field};
  a_now.weights[ka] = weight_a;
  const Matrix b_inverse = inverse(b_basis);
  LocalNorm b_now{b_basis, b_inverse, b.weights, b.trivially_valued, b.field};
  b_now.weights[kb] = weight_b;

  out.basis.push_back(g);
  out.pairs.push_back({weight_a, weight_b});
  for (std::size_t s = 0; s < sub.basis.size(); ++s) {
    const Vector& hbar = sub.basis[s];
    const WeightPair& target = sub.pairs[s];

    // Lift through the a-complement of g.
    Vector lift_a(d, Rat(0));
    {
      std::size_t idx = 0;
      for (std::size_t i = 0; i < d; ++i) {
        if (i == ka) continue;
        const Rat& c = hbar[idx++];
        if (sgn(c) == 0) continue;
        for (std::size_t r = 0; r < d; ++r) lift_a[r] += c * a_basis(r, i);
      }
    }
    if (a_now.eval(lift_a) == ExtRat(target.first) && b_now.eval(lift_a) == ExtRat(target.second)) {
      out.basis.push_back(std::move(lift_a));
      out.pairs.push_back(target);
      continue;
    }
    // Lift through the b-complement of g.
    const Vector z = qb_inverse * hbar;
    Vector lift_b(d, Rat(0));
    for (std::size_t idx = 0; idx < b_kept.size(); ++idx) {
      if (sgn(z[idx]) == 0) continue;
      for (std::size_t r = 0; r < d; ++r) lift_b[r] += z[idx] * b_basis(r, b_kept[idx]);
    }
    if (a_now.eval(lift_b) == ExtRat(target.first) && b_now.eval(lift_b) == ExtRat(target.second)) {
      out.basis.push_back(std::move(lift_b));
      out.pairs.push_back(target);
      continue;
    }
    throw Error(ErrorCode::internal, "joint diagonalization: no common optimal lift");
  }
  return out;
}

inline std::optional<JointPresentation> try_basis(const DiagonalNorm& first, const DiagonalNorm& second,
                                                  bool use_first_basis) {
  const DiagonalNorm& owner = use_first_basis ? first : second;
  const DiagonalNorm& other = use_first_basis ? second : first;
  Rat sum = 0;
  std::vector<Rat> other_weights;
  other_weights.reserve(owner.dim());
  for (std::size_t i = 0; i < owner.dim(); ++i) {
    Rat w = other.eval_weight(owner.basis_vector(i)).value();
    sum += w;
    other_weights.push_back(std::move(w));
  }
  if (det_weight(other, owner.basis_det()) != sum) return std::nullopt;
  JointPresentation jp{owner.basis(), {}};
  for (std::size_t i = 0; i < owner.dim(); ++i) {
    if (use_first_basis)
      jp.pairs.push_back({owner.weights()[i], other_weights[i]});
    else
      jp.pairs.push_back({other_weights[i], owner.weights()[i]});
  }
  return jp;
}

}  // namespace detail

/// A basis orthogonal for both norms. Any combination of norms and
/// filtrations is accepted. The result is always certified before it is
/// returned.
inline JointPresentation joint_diagonalize(const DiagonalNorm& first, const DiagonalNorm& second) {
  require_same_space(first, second);
  std::optional<JointPresentation> jp = detail::try_basis(first, second, true);
  if (!jp) jp = detail::try_basis(first, second, false);
  if (!jp) {
    auto local = [](const DiagonalNorm& n) {
      return detail::LocalNorm{n.basis(), inverse(n.basis()), n.weights(), n.trivially_valued(), n.field()};
    };
    detail::LocalJoint lj = detail::joint_local(local(first), local(second));
    jp = JointPresentation{Matrix::from_columns(lj.basis), std::move(lj.pairs)};
  }
  if (!certify(*jp, first, second))
    throw Error(ErrorCode::internal, "joint diagonalization failed its certificate");
  return std::move(*jp);
}

}  // namespace ultranorm
