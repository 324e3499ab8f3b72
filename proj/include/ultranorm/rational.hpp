#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <compare>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "ultranorm/error.hpp"

namespace ultranorm {

using Int = mpz_class;
using Rat = mpq_class;

inline Rat make_rat(long num, long den = 1) {
  if (den == 0) throw Error(ErrorCode::invalid_argument, "zero denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

/// Parses "n", "-n" or "n/d" into a canonical rational.
inline Rat parse_rat(std::string_view text) {
  std::string s(text);
  auto bad = [&] { return Error(ErrorCode::parse, "not a rational: '" + s + "'"); };
  if (s.empty()) throw bad();
  auto slash = s.find('/');
  auto digits_ok = [](std::string_view part, bool allow_sign) {
    if (part.empty()) return false;
    std::size_t i = 0;
    if (allow_sign && (part[0] == '-' || part[0] == '+')) i = 1;
    if (i == part.size()) return false;
    for (; i < part.size(); ++i)
      if (part[i] < '0' || part[i] > '9') return false;
    return true;
  };
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!digits_ok(num, true) || !digits_ok(den, false)) throw bad();
  if (num[0] == '+') num.erase(0, 1);
  Int n(num, 10);
  Int d(den, 10);
  if (d == 0) throw bad();
  Rat r(n, d);
  r.canonicalize();
  return r;
}

inline std::string to_string(const Rat& r) { return r.get_str(10); }

inline Rat abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

inline Rat pow(const Rat& base, unsigned exponent) {
  Rat out;
  mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), exponent);
  mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), exponent);
  out.canonicalize();
  return out;
}

inline bool is_integer(const Rat& r) { return r.get_den() == 1; }

namespace detail {

inline std::string mpfr_format(mpfr_t x, int significant_digits) {
  std::string fmt = "%." + std::to_string(significant_digits) + "Rg";
  char* buf = nullptr;
  mpfr_asprintf(&buf, fmt.c_str(), x);
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

}  // namespace detail

/// Decimal rendering with the given number of significant digits.
inline std::string to_decimal(const Rat& r, int significant_digits = 20) {
  mpfr_t x;
  mpfr_init2(x, 256);
  mpfr_set_q(x, r.get_mpq_t(), MPFR_RNDN);
  std::string out = detail::mpfr_format(x, significant_digits);
  mpfr_clear(x);
  return out;
}

/// Decimal rendering of value^(1/root) for a nonnegative rational value.
inline std::string root_decimal(const Rat& value, unsigned root, int significant_digits = 20) {
  if (value < 0) throw Error(ErrorCode::invalid_argument, "root of a negative value");
  mpfr_t x;
  mpfr_init2(x, 256);
  mpfr_set_q(x, value.get_mpq_t(), MPFR_RNDN);
  mpfr_rootn_ui(x, x, root, MPFR_RNDN);
  std::string out = detail::mpfr_format(x, significant_digits);
  mpfr_clear(x);
  return out;
}

/// A rational or +infinity. Used for valuations (val(0) = +inf) and for
/// weights of the zero vector.
class ExtRat {
 public:
  ExtRat() = default;  // +inf
  ExtRat(Rat value) : value_(std::move(value)) {}  // NOLINT(google-explicit-constructor)
  ExtRat(long value) : value_(Rat(value)) {}       // NOLINT(google-explicit-constructor)

  static ExtRat infinity() { return ExtRat(); }

  bool is_infinite() const { return !value_.has_value(); }
  bool is_finite() const { return value_.has_value(); }

  const Rat& value() const {
    if (!value_) throw Error(ErrorCode::internal, "value() of +inf");
    return *value_;
  }

  friend ExtRat operator+(const ExtRat& a, const ExtRat& b) {
    if (a.is_infinite() || b.is_infinite()) return infinity();
    return ExtRat(Rat(*a.value_ + *b.value_));
  }

  friend bool operator==(const ExtRat& a, const ExtRat& b) {
    if (a.is_infinite() || b.is_infinite()) return a.is_infinite() == b.is_infinite();
    return *a.value_ == *b.value_;
  }

  friend std::strong_ordering operator<=>(const ExtRat& a, const ExtRat& b) {
    if (a.is_infinite() && b.is_infinite()) return std::strong_ordering::equal;
    if (a.is_infinite()) return std::strong_ordering::greater;
    if (b.is_infinite()) return std::strong_ordering::less;
    int c = cmp(*a.value_, *b.value_);
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const ExtRat& x) {
    if (x.is_infinite()) return os << "+inf";
    return os << x.value_->get_str();
  }

 private:
  std::optional<Rat> value_;
};

inline ExtRat min(const ExtRat& a, const ExtRat& b) { return b < a ? b : a; }

}  // namespace ultranorm
