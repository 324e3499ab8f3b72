#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "ultranorm/diagonal_norm.hpp"
#include "ultranorm/error.hpp"
#include "ultranorm/joint.hpp"
#include "ultranorm/rational.hpp"
#include "ultranorm/spectral.hpp"

namespace ultranorm {

namespace detail {

template <class F>
DiagonalNorm combine_on_joint(const JointPresentation& jp, const DiagonalNorm& like, F&& f) {
  std::vector<Rat> w;
  w.reserve(jp.pairs.size());
  for (const auto& pr : jp.pairs) w.push_back(f(pr.first, pr.second));
  return DiagonalNorm(like.field(), like.mode(), jp.basis, std::move(w));
}

}  // namespace detail

/// Pointwise maximum of two norms of the same kind.
inline DiagonalNorm max_norm(const DiagonalNorm& a, const DiagonalNorm& b) {
  require_same_mode(a, b);
  const JointPresentation jp = joint_diagonalize(a, b);
  return detail::combine_on_joint(jp, a, [](const Rat& u, const Rat& w) { return u < w ? u : w; });
}

/// The action nu0.alpha of a filtration on a norm: weights add on a joint
/// basis.
inline DiagonalNorm gerardin_apply(const DiagonalNorm& nu0, const DiagonalNorm& alpha) {
  if (!nu0.trivially_valued()) throw Error(ErrorCode::mode, "the acting argument must be trivially valued");
  if (alpha.mode() != Mode::norm && !alpha.field().is_trivial())
    throw Error(ErrorCode::mode, "the action is on field-valued norms");
  require_same_space(nu0, alpha);
  const JointPresentation jp = joint_diagonalize(nu0, alpha);
  return detail::combine_on_joint(jp, alpha, [](const Rat& u, const Rat& w) { return Rat(u + w); });
}

/// Point at time t of the geodesic from a (t = 0) to b (t = 1).
inline DiagonalNorm geodesic_eval(const DiagonalNorm& a, const DiagonalNorm& b, const Rat& t) {
  if (t < 0 || t > 1) throw Error(ErrorCode::t_out_of_range, "geodesic parameter must lie in [0, 1]");
  require_same_mode(a, b);
  const JointPresentation jp = joint_diagonalize(a, b);
  const Rat s = 1 - t;
  return detail::combine_on_joint(jp, a, [&](const Rat& u, const Rat& w) { return Rat(s * u + t * w); });
}

/// Point at time t of the ray (t.nu0).alpha.
inline DiagonalNorm ray_eval(const DiagonalNorm& nu0, const DiagonalNorm& alpha, const Rat& t) {
  if (t < 0) throw Error(ErrorCode::t_negative, "ray parameter must be >= 0");
  return gerardin_apply(scale0(nu0, t), alpha);
}

/// The filtration with weights (w_t - w_0) / t on a joint basis of the
/// segment's endpoints.
inline DiagonalNorm direction_from_segment(const DiagonalNorm& start, const DiagonalNorm& at_t, const Rat& t) {
  if (t <= 0) throw Error(ErrorCode::t_non_positive, "segment length must be > 0");
  require_same_mode(start, at_t);
  const JointPresentation jp = joint_diagonalize(start, at_t);
  std::vector<Rat> w;
  w.reserve(jp.pairs.size());
  for (const auto& pr : jp.pairs) w.push_back((pr.second - pr.first) / t);
  return DiagonalNorm(start.field(), Mode::filtration, jp.basis, std::move(w));
}

/// weight_{nu0.alpha}(v) - weight_alpha(v).
inline Rat recover_filtration_weight(const DiagonalNorm& nu0, const DiagonalNorm& alpha, const Vector& v) {
  bool zero = true;
  for (const auto& x : v) zero = zero && sgn(x) == 0;
  if (v.size() != alpha.dim()) throw Error(ErrorCode::dimension_mismatch, "vector has the wrong dimension");
  if (zero) throw Error(ErrorCode::zero_vector, "v must be nonzero");
  return gerardin_apply(nu0, alpha).eval_weight(v).value() - alpha.eval_weight(v).value();
}

/// The norm diagonal in a joint basis of (nu0, nu0p) whose weights are
/// alpha's weights on that basis. Rays through it from nu0 and nu0p share
/// a basis.
inline DiagonalNorm apartment_companion(const DiagonalNorm& nu0, const DiagonalNorm& nu0p, const DiagonalNorm& alpha) {
  const JointPresentation jp = joint_diagonalize(nu0, nu0p);
  std::vector<Rat> w;
  w.reserve(jp.dim());
  for (std::size_t i = 0; i < jp.dim(); ++i) w.push_back(alpha.eval_weight(jp.basis.column(i)).value());
  return DiagonalNorm(alpha.field(), alpha.mode(), jp.basis, std::move(w));
}

struct RayLimitRow {
  Rat t;
  Rat value;   // t^-p d_p(ray_t, ray'_t)^p, or t^-1 d_inf
  Rat target;  // d_p(nu0, nu0')^p, or d_inf
  Rat bound;   // bound on |t^-1 d_p(ray_t, ray'_t) - d_p(nu0, nu0')|
  bool within_bound;
};

namespace detail {

// |x^(1/p) - y^(1/p)| <= b, evaluated with 256-bit MPFR arithmetic.
inline bool root_gap_within(const Rat& x, const Rat& y, const Rat& b, unsigned long p) {
  mpfr_t rx, ry, rb;
  mpfr_inits2(256, rx, ry, rb, static_cast<mpfr_ptr>(nullptr));
  mpfr_set_q(rx, x.get_mpq_t(), MPFR_RNDN);
  mpfr_set_q(ry, y.get_mpq_t(), MPFR_RNDN);
  mpfr_set_q(rb, b.get_mpq_t(), MPFR_RNDN);
  mpfr_rootn_ui(rx, rx, p, MPFR_RNDN);
  mpfr_rootn_ui(ry, ry, p, MPFR_RNDN);
  mpfr_sub(rx, rx, ry, MPFR_RNDN);
  mpfr_abs(rx, rx, MPFR_RNDN);
  mpfr_set_d(ry, 1e-60, MPFR_RNDN);
  mpfr_add(rb, rb, ry, MPFR_RNDN);
  const bool ok = mpfr_lessequal_p(rx, rb) != 0;
  mpfr_clears(rx, ry, rb, static_cast<mpfr_ptr>(nullptr));
  return ok;
}

}  // namespace detail

/// Compares t^-1 d_p between the rays (t.nu0).alpha and (t.nu0').alpha' with
/// d_p(nu0, nu0'). The bound is (d_inf(alpha, alpha') + 2 d_inf(alpha, alpha~)) / t
/// where alpha~ = apartment_companion(nu0, nu0', alpha). The check is exact for
/// p = 1 and p = inf and uses 256-bit roots otherwise.
inline std::vector<RayLimitRow> finite_dim_ray_limit_check(const DiagonalNorm& nu0, const DiagonalNorm& nu0p,
                                                           const DiagonalNorm& alpha, const DiagonalNorm& alphap,
                                                           const Exponent& p, const std::vector<Rat>& times) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] <= 0) throw Error(ErrorCode::t_non_positive, "times must be > 0");
    if (i > 0 && times[i] <= times[i - 1]) throw Error(ErrorCode::invalid_argument, "times must increase");
  }
  const Rat target = dp_distance(nu0, nu0p, p);
  const DiagonalNorm companion = apartment_companion(nu0, nu0p, alpha);
  const Rat numerator = d_inf(alpha, alphap) + 2 * d_inf(alpha, companion);
  std::vector<RayLimitRow> rows;
  for (const auto& t : times) {
    const Rat raw = dp_distance(ray_eval(nu0, alpha, t), ray_eval(nu0p, alphap, t), p);
    RayLimitRow row;
    row.t = t;
    row.target = target;
    row.bound = numerator / t;
    if (p.is_infinite() || p.value() == 1) {
      row.value = raw / t;
      row.within_bound = abs(Rat(row.value - target)) <= row.bound;
    } else {
      row.value = raw / pow(t, static_cast<unsigned>(p.value()));
      row.within_bound = detail::root_gap_within(row.value, target, row.bound, p.value());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace ultranorm
