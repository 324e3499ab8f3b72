#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "ultranorm/error.hpp"
#include "ultranorm/rational.hpp"

namespace ultranorm {

/// A rational-valued piecewise-linear function on the polytope, used as
/// phi in the monomial weights w_m(u) = m * phi(u / m).
class MonomialProfile {
 public:
  enum class Kind {
    breakpoints,  // one variable, linear interpolation through (x, phi(x))
    affine_min,   // min of affine functions c0 + c . x
    affine_max,   // max of affine functions c0 + c . x
  };

  static MonomialProfile breakpoints(std::vector<std::pair<Rat, Rat>> points) {
    if (points.empty()) throw Error(ErrorCode::invalid_argument, "profile needs at least one breakpoint");
    std::sort(points.begin(), points.end());
    for (std::size_t i = 1; i < points.size(); ++i)
      if (points[i].first == points[i - 1].first)
        throw Error(ErrorCode::invalid_argument, "duplicate breakpoint abscissa");
    MonomialProfile p(Kind::breakpoints);
    p.points_ = std::move(points);
    return p;
  }

  /// Each piece is {c0, c1, ..., cd}.
  static MonomialProfile affine(Kind kind, std::vector<std::vector<Rat>> pieces) {
    if (kind == Kind::breakpoints) throw Error(ErrorCode::invalid_argument, "affine profile kind expected");
    if (pieces.empty()) throw Error(ErrorCode::invalid_argument, "profile needs at least one affine piece");
    for (const auto& piece : pieces)
      if (piece.size() != pieces.front().size() || piece.size() < 2)
        throw Error(ErrorCode::invalid_argument, "affine pieces must have the form [c0, c1, ..., cd]");
    MonomialProfile p(kind);
    p.pieces_ = std::move(pieces);
    return p;
  }

  /// phi = 0.
  static MonomialProfile zero(std::size_t d) {
    return affine(Kind::affine_min, {std::vector<Rat>(d + 1, Rat(0))});
  }

  Kind kind() const { return kind_; }
  const std::vector<std::pair<Rat, Rat>>& points() const { return points_; }
  const std::vector<std::vector<Rat>>& pieces() const { return pieces_; }

  /// Number of variables, or 0 if unconstrained.
  std::size_t arity() const { return kind_ == Kind::breakpoints ? 1 : pieces_.front().size() - 1; }

  Rat operator()(const std::vector<Rat>& x) const {
    if (x.size() != arity()) throw Error(ErrorCode::dimension_mismatch, "profile evaluated at a point of the wrong dimension");
    if (kind_ == Kind::breakpoints) return interpolate(x[0]);
    Rat best;
    for (std::size_t k = 0; k < pieces_.size(); ++k) {
      Rat v = pieces_[k][0];
      for (std::size_t i = 0; i < x.size(); ++i) v += pieces_[k][i + 1] * x[i];
      if (k == 0 || (kind_ == Kind::affine_min ? v < best : v > best)) best = v;
    }
    return best;
  }

  friend bool operator==(const MonomialProfile&, const MonomialProfile&) = default;

 private:
  explicit MonomialProfile(Kind kind) : kind_(kind) {}

  Rat interpolate(const Rat& x) const {
    if (points_.size() == 1) {
      if (x != points_[0].first) throw Error(ErrorCode::domain, "point outside the profile's breakpoint range");
      return points_[0].second;
    }
    if (x < points_.front().first || x > points_.back().first)
      throw Error(ErrorCode::domain, "point " + to_string(x) + " outside the profile's breakpoint range");
    for (std::size_t i = 1; i < points_.size(); ++i) {
      const auto& [x0, y0] = points_[i - 1];
      const auto& [x1, y1] = points_[i];
      if (x <= x1) return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
    }
    return points_.back().second;
  }

  Kind kind_;
  std::vector<std::pair<Rat, Rat>> points_;
  std::vector<std::vector<Rat>> pieces_;
};

/// A convex, non-increasing, piecewise-linear function on [lo, hi], given by
/// breakpoints inside the interval and extended affinely to its ends.
class ConvexProfile {
 public:
  ConvexProfile(Rat lo, Rat hi, std::vector<std::pair<Rat, Rat>> points)
      : lo_(std::move(lo)), hi_(std::move(hi)), points_(std::move(points)) {
    if (lo_ > hi_) throw Error(ErrorCode::invalid_argument, "empty profile interval");
    if (points_.empty()) throw Error(ErrorCode::invalid_argument, "profile needs at least one breakpoint");
    std::sort(points_.begin(), points_.end());
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (points_[i].first < lo_ || points_[i].first > hi_)
        throw Error(ErrorCode::domain, "breakpoint outside the profile interval");
      if (i > 0 && points_[i].first == points_[i - 1].first)
        throw Error(ErrorCode::invalid_argument, "duplicate breakpoint abscissa");
    }
    std::vector<Rat> s = slopes();
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] > 0) throw Error(ErrorCode::invalid_argument, "profile must be non-increasing");
      if (i > 0 && s[i] < s[i - 1]) throw Error(ErrorCode::invalid_argument, "profile must be convex");
    }
  }

  /// f(x) = a + b x on [lo, hi]; requires b <= 0.
  static ConvexProfile affine(const Rat& lo, const Rat& hi, const Rat& a, const Rat& b) {
    if (lo == hi) return ConvexProfile(lo, hi, {{lo, Rat(a + b * lo)}});
    return ConvexProfile(lo, hi, {{lo, Rat(a + b * lo)}, {hi, Rat(a + b * hi)}});
  }

  const Rat& lo() const { return lo_; }
  const Rat& hi() const { return hi_; }
  const std::vector<std::pair<Rat, Rat>>& points() const { return points_; }

  Rat operator()(const Rat& x) const {
    if (x < lo_ || x > hi_)
      throw Error(ErrorCode::domain, "value " + to_string(x) + " outside [" + to_string(lo_) + ", " + to_string(hi_) + "]");
    if (points_.size() == 1) return points_[0].second;
    std::size_t i = 1;
    while (i + 1 < points_.size() && x > points_[i].first) ++i;
    const auto& [x0, y0] = points_[i - 1];
    const auto& [x1, y1] = points_[i];
    return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
  }

  friend bool operator==(const ConvexProfile&, const ConvexProfile&) = default;

 private:
  std::vector<Rat> slopes() const {
    std::vector<Rat> s;
    for (std::size_t i = 1; i < points_.size(); ++i)
      s.push_back((points_[i].second - points_[i - 1].second) / (points_[i].first - points_[i - 1].first));
    return s;
  }

  Rat lo_, hi_;
  std::vector<std::pair<Rat, Rat>> points_;
};

}  // namespace ultranorm
