#pragma once

#include <cstddef>
#include <memory>
#include <utility>
#include <vector>

#include "ultranorm/error.hpp"
#include "ultranorm/rational.hpp"
#include "ultranorm/valfield.hpp"

namespace ultranorm {

/// field-valued norms are homogeneous for the field's absolute value;
/// filtrations (trivially-valued norms) for the trivial one.
enum class Mode { norm, filtration };

/// A norm given by an orthogonal basis and the weights w_i = -log||b_i||.
///
/// For v with coordinates a in the basis,
///   weight(v) = min_i (cval(a_i) + w_i),
/// where cval is the field valuation in norm mode and the trivial valuation
/// in filtration mode (or over a trivially valued field).
class DiagonalNorm {
 public:
  DiagonalNorm(FieldSpec field, Mode mode, Matrix basis, std::vector<Rat> weights)
      : field_(field), mode_(mode), basis_(std::move(basis)), weights_(std::move(weights)) {
    if (!basis_.is_square()) throw Error(ErrorCode::dimension_mismatch, "basis must be square");
    if (basis_.rows() == 0) throw Error(ErrorCode::invalid_argument, "dimension 0 is not supported");
    if (weights_.size() != basis_.cols())
      throw Error(ErrorCode::dimension_mismatch, "one weight per basis vector expected");
    if (basis_.is_identity()) {
      det_ = 1;
    } else {
      det_ = det(basis_);
      if (det_ == 0) throw Error(ErrorCode::singular_matrix, "basis is not invertible");
      inverse_ = std::make_shared<const Matrix>(inverse(basis_));
    }
  }

  /// Identity basis with the given weights.
  static DiagonalNorm standard(FieldSpec field, Mode mode, std::vector<Rat> weights) {
    const std::size_t n = weights.size();
    return DiagonalNorm(field, mode, Matrix::identity(n), std::move(weights));
  }

  /// The unit norm: identity basis, all weights 0.
  static DiagonalNorm unit(FieldSpec field, std::size_t n) {
    return standard(field, Mode::norm, std::vector<Rat>(n, Rat(0)));
  }

  /// The trivial norm (a filtration with all weights 0).
  static DiagonalNorm trivial(FieldSpec field, std::size_t n) {
    return standard(field, Mode::filtration, std::vector<Rat>(n, Rat(0)));
  }

  std::size_t dim() const { return weights_.size(); }
  const FieldSpec& field() const { return field_; }
  Mode mode() const { return mode_; }
  const Matrix& basis() const { return basis_; }
  const std::vector<Rat>& weights() const { return weights_; }
  const Rat& basis_det() const { return det_; }
  Vector basis_vector(std::size_t i) const { return basis_.column(i); }

  /// True when coefficients are measured with the trivial valuation.
  bool trivially_valued() const { return mode_ == Mode::filtration || field_.is_trivial(); }

  ExtRat coefficient_valuation(const Rat& a) const {
    if (a == 0) return ExtRat::infinity();
    return trivially_valued() ? ExtRat(0L) : field_.val(a);
  }

  Vector coordinates(const Vector& v) const {
    if (v.size() != dim()) throw Error(ErrorCode::dimension_mismatch, "vector has the wrong dimension");
    return inverse_ ? (*inverse_) * v : v;
  }

  /// -log||v||; +inf exactly for v = 0.
  ExtRat eval_weight(const Vector& v) const {
    const Vector a = coordinates(v);
    ExtRat best = ExtRat::infinity();
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (sgn(a[i]) == 0) continue;
      best = min(best, coefficient_valuation(a[i]) + ExtRat(weights_[i]));
    }
    return best;
  }

  /// e^c times this norm: every weight decreases by c.
  DiagonalNorm translate(const Rat& c) const {
    std::vector<Rat> w(weights_);
    for (auto& x : w) x -= c;
    return with_weights(std::move(w));
  }

  /// Same basis and mode, new weights.
  DiagonalNorm with_weights(std::vector<Rat> weights) const {
    if (weights.size() != dim()) throw Error(ErrorCode::dimension_mismatch, "weight count");
    DiagonalNorm out(*this);
    out.weights_ = std::move(weights);
    return out;
  }

 private:
  FieldSpec field_;
  Mode mode_;
  Matrix basis_;
  std::vector<Rat> weights_;
  Rat det_;
  std::shared_ptr<const Matrix> inverse_;
};

inline ExtRat eval_weight(const DiagonalNorm& norm, const Vector& v) { return norm.eval_weight(v); }

inline DiagonalNorm translate(const DiagonalNorm& norm, const Rat& c) { return norm.translate(c); }

/// t.nu0 = nu0^t for a trivially-valued norm.
inline DiagonalNorm scale0(const DiagonalNorm& nu0, const Rat& t) {
  if (!nu0.trivially_valued()) throw Error(ErrorCode::mode, "scale0 needs a trivially-valued norm");
  if (t < 0) throw Error(ErrorCode::invalid_argument, "scale0 needs t >= 0");
  std::vector<Rat> w(nu0.weights());
  for (auto& x : w) x *= t;
  return nu0.with_weights(std::move(w));
}

/// Both norms measure coefficients with the same valuation.
inline bool same_valuation(const DiagonalNorm& a, const DiagonalNorm& b) {
  if (a.trivially_valued() != b.trivially_valued()) return false;
  return a.trivially_valued() || a.field() == b.field();
}

inline void require_same_space(const DiagonalNorm& a, const DiagonalNorm& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::dimension_mismatch, "norms live on spaces of different dimension");
  if (!a.trivially_valued() && !b.trivially_valued() && !(a.field() == b.field()))
    throw Error(ErrorCode::field_mismatch, a.field().describe() + " vs " + b.field().describe());
}

inline void require_same_mode(const DiagonalNorm& a, const DiagonalNorm& b) {
  require_same_space(a, b);
  if (!same_valuation(a, b)) throw Error(ErrorCode::mode, "a norm and a filtration cannot be compared here");
}

/// a <= b pointwise as norms, i.e. weight_a(v) >= weight_b(v) for every v.
/// Exact: testing on an orthogonal basis of b is sufficient.
inline bool norm_leq(const DiagonalNorm& a, const DiagonalNorm& b) {
  require_same_mode(a, b);
  for (std::size_t i = 0; i < b.dim(); ++i)
    if (a.eval_weight(b.basis_vector(i)) < ExtRat(b.weights()[i])) return false;
  return true;
}

/// Equality as functions on V, independent of presentation.
inline bool same_norm(const DiagonalNorm& a, const DiagonalNorm& b) {
  return norm_leq(a, b) && norm_leq(b, a);
}

}  // namespace ultranorm
