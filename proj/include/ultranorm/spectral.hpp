#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ultranorm/diagonal_norm.hpp"
#include "ultranorm/error.hpp"
#include "ultranorm/joint.hpp"
#include "ultranorm/rational.hpp"

namespace ultranorm {

/// Uniform atomic probability measure: n atoms, mass 1/n each, stored in
/// decreasing order.
class SpectralMeasure {
 public:
  SpectralMeasure() = default;
  explicit SpectralMeasure(std::vector<Rat> atoms) : atoms_(std::move(atoms)) {
    std::sort(atoms_.begin(), atoms_.end(), std::greater<>());
  }

  const std::vector<Rat>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  Rat mass() const { return Rat(1, static_cast<unsigned long>(atoms_.size())); }

  /// Image under x -> f(x).
  template <class F>
  SpectralMeasure map(F&& f) const {
    std::vector<Rat> out;
    out.reserve(atoms_.size());
    for (const auto& x : atoms_) out.push_back(f(x));
    return SpectralMeasure(std::move(out));
  }

  /// Mean of f over the atoms.
  template <class F>
  Rat integrate(F&& f) const {
    Rat total = 0;
    for (const auto& x : atoms_) total += f(x);
    return total / Rat(static_cast<unsigned long>(atoms_.size()));
  }

  /// mass of (-inf, x]
  Rat cdf(const Rat& x) const {
    std::size_t count = 0;
    for (const auto& a : atoms_)
      if (a <= x) ++count;
    return Rat(static_cast<unsigned long>(count), static_cast<unsigned long>(atoms_.size()));
  }

  /// mass of (-inf, x)
  Rat cdf_left(const Rat& x) const {
    std::size_t count = 0;
    for (const auto& a : atoms_)
      if (a < x) ++count;
    return Rat(static_cast<unsigned long>(count), static_cast<unsigned long>(atoms_.size()));
  }

  friend bool operator==(const SpectralMeasure&, const SpectralMeasure&) = default;

 private:
  std::vector<Rat> atoms_;
};

/// An exponent p in {1, 2, 3, ...} or infinity.
class Exponent {
 public:
  static Exponent infinity() { return Exponent(); }
  static Exponent finite(unsigned long p) {
    if (p < 1) throw Error(ErrorCode::invalid_p, "p must be >= 1");
    Exponent e;
    e.value_ = p;
    return e;
  }

  /// Accepts a positive integer (also written as a rational such as "4/2")
  /// or one of "inf", "infinity".
  static Exponent parse(const std::string& text) {
    if (text == "inf" || text == "infinity" || text == "Inf" || text == "oo") return infinity();
    Rat r;
    try {
      r = parse_rat(text);
    } catch (const Error&) {
      throw Error(ErrorCode::invalid_p, "p must be a positive integer or 'inf', got '" + text + "'");
    }
    if (!is_integer(r) || r < 1 || !r.get_num().fits_ulong_p())
      throw Error(ErrorCode::invalid_p, "p must be a positive integer or 'inf', got '" + text + "'");
    return finite(r.get_num().get_ui());
  }

  bool is_infinite() const { return !value_.has_value(); }
  unsigned long value() const {
    if (!value_) throw Error(ErrorCode::internal, "value() of p = inf");
    return *value_;
  }
  std::string to_string() const { return value_ ? std::to_string(*value_) : std::string("inf"); }

  friend bool operator==(const Exponent&, const Exponent&) = default;

 private:
  Exponent() = default;
  std::optional<unsigned long> value_;
};

/// lambda_i = (first weight) - (second weight) on a joint basis, decreasing.
inline std::vector<Rat> successive_minima(const JointPresentation& jp) {
  std::vector<Rat> lambda;
  lambda.reserve(jp.pairs.size());
  for (const auto& pr : jp.pairs) lambda.push_back(pr.first - pr.second);
  std::sort(lambda.begin(), lambda.end(), std::greater<>());
  return lambda;
}

/// lambda_i = log(||v_i||_b / ||v_i||_a) on a joint basis, sorted decreasing.
inline std::vector<Rat> successive_minima(const DiagonalNorm& a, const DiagonalNorm& b) {
  require_same_mode(a, b);
  return successive_minima(joint_diagonalize(a, b));
}

inline SpectralMeasure spectral_measure(const DiagonalNorm& a, const DiagonalNorm& b) {
  return SpectralMeasure(successive_minima(a, b));
}

enum class Pushforward { negate, shift, clamp };

/// x -> -x, x -> x + c, or x -> max(x, c).
inline SpectralMeasure measure_pushforward(const SpectralMeasure& m, Pushforward kind, const Rat& c = Rat(0)) {
  switch (kind) {
    case Pushforward::negate:
      return m.map([](const Rat& x) { return Rat(-x); });
    case Pushforward::shift:
      return m.map([&](const Rat& x) { return Rat(x + c); });
    case Pushforward::clamp:
      return m.map([&](const Rat& x) { return x < c ? c : x; });
  }
  throw Error(ErrorCode::internal, "unknown pushforward");
}

/// Scales every atom by s.
inline SpectralMeasure rescale(const SpectralMeasure& m, const Rat& s) {
  return m.map([&](const Rat& x) { return Rat(x * s); });
}

/// d_p^p = mean |x|^p for finite p, max |x| for p = inf.
inline Rat moment(const SpectralMeasure& m, const Exponent& p) {
  if (p.is_infinite()) {
    Rat best = 0;
    for (const auto& x : m.atoms()) best = std::max(best, abs(x));
    return best;
  }
  const auto e = static_cast<unsigned>(p.value());
  return m.integrate([&](const Rat& x) { return pow(abs(x), e); });
}

/// The p-th power of d_p for finite p; d_inf itself for p = inf.
inline Rat dp_distance(const DiagonalNorm& a, const DiagonalNorm& b, const Exponent& p) {
  return moment(spectral_measure(a, b), p);
}

inline Rat d_inf(const DiagonalNorm& a, const DiagonalNorm& b) { return dp_distance(a, b, Exponent::infinity()); }
inline Rat d_1(const DiagonalNorm& a, const DiagonalNorm& b) { return dp_distance(a, b, Exponent::finite(1)); }

/// Decimal rendering of d_p from the value returned by dp_distance.
inline std::string dp_decimal(const Rat& value, const Exponent& p) {
  if (p.is_infinite() || p.value() == 1) return to_decimal(value);
  return root_decimal(value, static_cast<unsigned>(p.value()));
}

inline Rat mean(const SpectralMeasure& m) {
  return m.integrate([](const Rat& x) { return x; });
}

/// Relative volume: mean of the successive minima.
inline Rat volume(const DiagonalNorm& a, const DiagonalNorm& b) { return mean(spectral_measure(a, b)); }

/// sup_x |F_a(x) - F_b(x)| for two finitely supported measures.
inline Rat cdf_distance(const SpectralMeasure& a, const SpectralMeasure& b) {
  Rat best = 0;
  auto check = [&](const Rat& x) {
    best = std::max(best, abs(Rat(a.cdf(x) - b.cdf(x))));
    best = std::max(best, abs(Rat(a.cdf_left(x) - b.cdf_left(x))));
  };
  for (const auto& x : a.atoms()) check(x);
  for (const auto& x : b.atoms()) check(x);
  return best;
}

/// sup_x |F(x) - G(x)| where G is the CDF of Lebesgue measure on [lo, hi].
inline Rat cdf_distance_to_uniform(const SpectralMeasure& m, const Rat& lo, const Rat& hi) {
  if (!(lo < hi)) throw Error(ErrorCode::invalid_argument, "empty interval");
  auto g = [&](const Rat& x) -> Rat {
    if (x <= lo) return 0;
    if (x >= hi) return 1;
    return (x - lo) / (hi - lo);
  };
  // F is a step function and G is monotone and continuous, so the supremum
  // is attained at a jump of F (from either side) or at an end of [lo, hi].
  Rat best = 0;
  auto check = [&](const Rat& x) {
    best = std::max(best, abs(Rat(m.cdf(x) - g(x))));
    best = std::max(best, abs(Rat(m.cdf_left(x) - g(x))));
  };
  for (const auto& x : m.atoms()) check(x);
  check(lo);
  check(hi);
  return best;
}

}  // namespace ultranorm
