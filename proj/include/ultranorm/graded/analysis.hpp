#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "ultranorm/diagonal_norm.hpp"
#include "ultranorm/error.hpp"
#include "ultranorm/graded/expr.hpp"
#include "ultranorm/graded/profile.hpp"
#include "ultranorm/graded/ring.hpp"
#include "ultranorm/operations.hpp"
#include "ultranorm/parallel.hpp"
#include "ultranorm/rational.hpp"
#include "ultranorm/spectral.hpp"

namespace ultranorm {

/// Rows (index, value, diagnostic) sorted by index.
struct ConvergenceTable {
  struct Row {
    Rat index;
    Rat value;
    Rat diagnostic;
  };
  std::vector<Row> rows;

  /// Richardson-style estimate from the last two rows, assuming
  /// value ~ L + C / index.
  std::optional<Rat> extrapolate() const {
    if (rows.size() < 2) return rows.empty() ? std::nullopt : std::optional<Rat>(rows.back().value);
    const auto& a = rows[rows.size() - 2];
    const auto& b = rows.back();
    return (b.index * b.value - a.index * a.value) / (b.index - a.index);
  }
};

namespace detail {

inline void require_increasing(const std::vector<int>& degrees) {
  if (degrees.empty()) throw Error(ErrorCode::invalid_argument, "degree list is empty");
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    if (degrees[i] < 1) throw Error(ErrorCode::invalid_degree, "degrees must be >= 1");
    if (i > 0 && degrees[i] <= degrees[i - 1]) throw Error(ErrorCode::invalid_argument, "degrees must increase");
  }
}

inline void require_increasing(const std::vector<Rat>& times) {
  if (times.empty()) throw Error(ErrorCode::invalid_argument, "time list is empty");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] <= 0) throw Error(ErrorCode::t_non_positive, "times must be > 0");
    if (i > 0 && times[i] <= times[i - 1]) throw Error(ErrorCode::invalid_argument, "times must increase");
  }
}

inline Rat power(const Rat& x, const Exponent& p) {
  return p.is_infinite() ? x : pow(x, static_cast<unsigned>(p.value()));
}

template <class F>
ConvergenceTable tabulate(const std::vector<int>& degrees, F&& value_at) {
  require_increasing(degrees);
  std::vector<Rat> values(degrees.size());
  parallel_for(degrees.size(), [&](std::size_t i) { values[i] = value_at(degrees[i]); });
  ConvergenceTable table;
  for (std::size_t i = 0; i < degrees.size(); ++i)
    table.rows.push_back({Rat(degrees[i]), values[i], i == 0 ? Rat(0) : Rat(values[i] - values[i - 1])});
  return table;
}

}  // namespace detail

/// The trivial norm (filtrations) or the unit norm (field-valued norms) on
/// the same space, used as a base point.
inline DiagonalNorm reference_norm(const DiagonalNorm& like) {
  return like.trivially_valued() ? DiagonalNorm::trivial(like.field(), like.dim())
                                 : DiagonalNorm::unit(like.field(), like.dim());
}

// ---------------------------------------------------------------------------
// Submultiplicativity and boundedness

struct SubmultiplicativityReport {
  struct Witness {
    int m, n;
    std::size_t i, j;  // basis indices in degrees m and n
  };
  bool passed = true;
  Rat worst_slack;  // min over checked pairs of w(s t) - w(s) - w(t)
  std::optional<Witness> witness;
  std::size_t checks = 0;
};

namespace detail {

// Product of two sections given by coordinates in the monomial bases.
inline Vector multiply(const DegreeBasis& bm, const Vector& s, const DegreeBasis& bn, const Vector& t,
                       const DegreeBasis& bmn) {
  Vector out(bmn.size(), Rat(0));
  LatticePoint sum(bm.points.empty() ? 0 : bm.points[0].size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (sgn(s[i]) == 0) continue;
    for (std::size_t j = 0; j < t.size(); ++j) {
      if (sgn(t[j]) == 0) continue;
      for (std::size_t k = 0; k < sum.size(); ++k) sum[k] = bm.points[i][k] + bn.points[j][k];
      out[bmn.index.at(sum)] += s[i] * t[j];
    }
  }
  return out;
}

}  // namespace detail

/// Checks w_{m+n}(s t) >= w_m(s) + w_n(t) for all pairs of orthogonal basis
/// vectors with m + n <= max_degree. For diagonal norms this is equivalent to
/// submultiplicativity on the whole ring up to that degree.
inline SubmultiplicativityReport check_submultiplicative(const GradedNorm& e, int max_degree) {
  if (max_degree < 2) throw Error(ErrorCode::invalid_degree, "need max_degree >= 2");
  const SectionRing& ring = e.ring();
  struct Job {
    int m, n;
  };
  std::vector<Job> jobs;
  for (int m = 1; m < max_degree; ++m)
    for (int n = m; m + n <= max_degree; ++n) jobs.push_back({m, n});
  std::vector<SubmultiplicativityReport> partial(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t k) {
    const int m = jobs[k].m;
    const int n = jobs[k].n;
    const DiagonalNorm& a = e.eval(m);
    const DiagonalNorm& b = e.eval(n);
    const DiagonalNorm& c = e.eval(m + n);
    const auto bm = ring.basis(m);
    const auto bn = ring.basis(n);
    const auto bmn = ring.basis(m + n);
    const bool monomial = a.basis().is_identity() && b.basis().is_identity() && c.basis().is_identity();
    SubmultiplicativityReport& r = partial[k];
    bool first = true;
    LatticePoint sum(ring.ambient_dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
      for (std::size_t j = 0; j < b.dim(); ++j) {
        Rat product_weight;
        if (monomial) {
          for (std::size_t q = 0; q < sum.size(); ++q) sum[q] = bm->points[i][q] + bn->points[j][q];
          product_weight = c.weights()[bmn->index.at(sum)];
        } else {
          product_weight = c.eval_weight(detail::multiply(*bm, a.basis_vector(i), *bn, b.basis_vector(j), *bmn)).value();
        }
        const Rat slack = product_weight - a.weights()[i] - b.weights()[j];
        ++r.checks;
        if (first || slack < r.worst_slack) {
          r.worst_slack = slack;
          r.witness = SubmultiplicativityReport::Witness{m, n, i, j};
          first = false;
        }
      }
  });
  SubmultiplicativityReport out;
  bool first = true;
  for (const auto& r : partial) {
    out.checks += r.checks;
    if (r.checks && (first || r.worst_slack < out.worst_slack)) {
      out.worst_slack = r.worst_slack;
      out.witness = r.witness;
      first = false;
    }
  }
  out.passed = out.worst_slack >= 0;
  if (out.passed) out.witness.reset();
  return out;
}

/// Rows (m, m^-1 d_inf(e_m, reference), running sup). The sup only covers
/// the evaluated degrees.
inline ConvergenceTable boundedness(const GradedNorm& e, int max_degree) {
  std::vector<int> degrees;
  for (int m = 1; m <= max_degree; ++m) degrees.push_back(m);
  ConvergenceTable t = detail::tabulate(degrees, [&](int m) {
    const DiagonalNorm& x = e.eval(m);
    return Rat(d_inf(x, reference_norm(x)) / m);
  });
  Rat sup = 0;
  for (auto& row : t.rows) {
    sup = std::max(sup, row.value);
    row.diagnostic = sup;
  }
  return t;
}

// ---------------------------------------------------------------------------
// Limits of degreewise quantities

/// Rows (m, m^-p d_p(e_m, e'_m)^p); for p = inf, m^-1 d_inf.
inline ConvergenceTable graded_dp(const GradedNorm& e, const GradedNorm& ep, const Exponent& p,
                                  const std::vector<int>& degrees) {
  return detail::tabulate(degrees, [&](int m) {
    return Rat(dp_distance(e.eval(m), ep.eval(m), p) / detail::power(Rat(m), p));
  });
}

/// Rows (m, m^-1 vol(e_m, e'_m)).
inline ConvergenceTable graded_volume(const GradedNorm& e, const GradedNorm& ep, const std::vector<int>& degrees) {
  return detail::tabulate(degrees, [&](int m) { return Rat(volume(e.eval(m), ep.eval(m)) / m); });
}

struct LimitMeasure {
  std::vector<int> degrees;
  std::vector<SpectralMeasure> measures;  // (1/m)_* sigma(e_m, e'_m)
  ConvergenceTable table;                 // value: mean; diagnostic: CDF distance to the previous measure
};

inline LimitMeasure limit_measure(const GradedNorm& e, const GradedNorm& ep, const std::vector<int>& degrees) {
  detail::require_increasing(degrees);
  LimitMeasure out;
  out.degrees = degrees;
  out.measures.resize(degrees.size());
  parallel_for(degrees.size(), [&](std::size_t i) {
    const int m = degrees[i];
    out.measures[i] = rescale(spectral_measure(e.eval(m), ep.eval(m)), Rat(1, static_cast<unsigned long>(m)));
  });
  for (std::size_t i = 0; i < degrees.size(); ++i)
    out.table.rows.push_back({Rat(degrees[i]), mean(out.measures[i]),
                              i == 0 ? Rat(0) : cdf_distance(out.measures[i], out.measures[i - 1])});
  return out;
}

struct ScalingRow {
  int degree;
  Rat lhs;  // m^-1 vol(t.nu0_m, s.nu0'_m)
  Rat rhs;  // m^-1 (s vol(nu0_m, nu0'_m) - (s - t) vol(nu0_m, trivial))
  bool equal;
};

/// Volume scaling law for two trivially-valued graded norms, per degree.
inline std::vector<ScalingRow> volume_scaling_check(const GradedNorm& nu0, const GradedNorm& nu0p, const Rat& t,
                                                    const Rat& s, const std::vector<int>& degrees) {
  detail::require_increasing(degrees);
  std::vector<ScalingRow> rows(degrees.size());
  parallel_for(degrees.size(), [&](std::size_t i) {
    const int m = degrees[i];
    const DiagonalNorm& a = nu0.eval(m);
    const DiagonalNorm& b = nu0p.eval(m);
    const Rat lhs = volume(scale0(a, t), scale0(b, s)) / m;
    const Rat rhs = (s * volume(a, b) - (s - t) * volume(a, reference_norm(a))) / m;
    rows[i] = {m, lhs, rhs, lhs == rhs};
  });
  return rows;
}

// ---------------------------------------------------------------------------
// Flat embedding

struct FlatIsometryRow {
  int degree;
  Rat lhs;  // m^-p d_p((iota[f]nu0.alpha)_m, (iota[g]nu0.alpha)_m)^p
  Rat rhs;  // mean over i of |f - g|^p(w0_{m,i} / m)
  bool equal;
};

struct FlatIsometryReport {
  std::vector<FlatIsometryRow> rows;
  bool all_equal = true;
  std::optional<Rat> extrapolated;
};

inline FlatIsometryReport flat_isometry_check(const ConvexProfile& f, const ConvexProfile& g, const GradedNorm& nu0,
                                              const GradedNorm& alpha, const Exponent& p,
                                              const std::vector<int>& degrees) {
  detail::require_increasing(degrees);
  const GradedNorm ef = GradedNorm::action(GradedNorm::iota(f, nu0), alpha);
  const GradedNorm eg = GradedNorm::action(GradedNorm::iota(g, nu0), alpha);
  FlatIsometryReport out;
  out.rows.resize(degrees.size());
  parallel_for(degrees.size(), [&](std::size_t i) {
    const int m = degrees[i];
    const Rat lhs = dp_distance(ef.eval(m), eg.eval(m), p) / detail::power(Rat(m), p);
    const DiagonalNorm& base = nu0.eval(m);
    std::vector<Rat> gaps;
    for (const auto& w : base.weights()) {
      const Rat x = w / m;
      gaps.push_back(f(x) - g(x));
    }
    const Rat rhs = moment(SpectralMeasure(std::move(gaps)), p);
    out.rows[i] = {m, lhs, rhs, lhs == rhs};
  });
  ConvergenceTable t;
  for (const auto& row : out.rows) {
    out.all_equal = out.all_equal && row.equal;
    t.rows.push_back({Rat(row.degree), row.lhs, Rat(0)});
  }
  out.extrapolated = t.extrapolate();
  return out;
}

// ---------------------------------------------------------------------------
// Rays

/// The directing filtration of a ray expression.
inline GradedNorm ell_graded(const GradedNorm& ray) {
  if (ray.kind() != NodeKind::ray) throw Error(ErrorCode::shape, "expected a ray, got " + to_string(ray.kind()));
  return ray.left();
}

struct DirectionRow {
  Rat t;
  int degree;
  bool recovered;  // direction_from_segment(alpha_m, ray_m(t), t) == nu0_m
};

/// Degreewise recovery of the direction of (t.nu0).alpha from the segment
/// [alpha, ray(t)].
inline std::vector<DirectionRow> ell_degreewise_check(const GradedNorm& nu0, const GradedNorm& alpha,
                                                      const std::vector<Rat>& times, const std::vector<int>& degrees) {
  detail::require_increasing(times);
  detail::require_increasing(degrees);
  std::vector<DirectionRow> rows(times.size() * degrees.size());
  parallel_for(rows.size(), [&](std::size_t k) {
    const Rat& t = times[k / degrees.size()];
    const int m = degrees[k % degrees.size()];
    const DiagonalNorm& a = alpha.eval(m);
    const DiagonalNorm direction = direction_from_segment(a, ray_eval(nu0.eval(m), a, t), t);
    rows[k] = {t, m, same_norm(direction, nu0.eval(m))};
  });
  return rows;
}

struct TheoremBRow {
  Rat t;
  int degree;
  Rat distance;  // sup-CDF distance between the rescaled ray measure and the reference
  std::vector<std::pair<Rat, Rat>> clamped;  // per c: (int max(x, c) d sigma_t, same for the reference)
};

/// For each (t, M): sigma_t = (1/(tM))_* sigma(ray(nu0, alpha, t)_M, ray(nu0', alpha, t)_M)
/// against (1/M)_* sigma(nu0_M, nu0'_M).
inline std::vector<TheoremBRow> theorem_b_table(const GradedNorm& nu0, const GradedNorm& nu0p, const GradedNorm& alpha,
                                                const std::vector<Rat>& times, const std::vector<int>& degrees,
                                                const std::vector<Rat>& clamp_grid = {}) {
  detail::require_increasing(times);
  detail::require_increasing(degrees);
  std::vector<TheoremBRow> rows(times.size() * degrees.size());
  parallel_for(rows.size(), [&](std::size_t k) {
    const Rat& t = times[k / degrees.size()];
    const int m = degrees[k % degrees.size()];
    const DiagonalNorm& a = alpha.eval(m);
    const SpectralMeasure reference =
        rescale(spectral_measure(nu0.eval(m), nu0p.eval(m)), Rat(1, static_cast<unsigned long>(m)));
    const SpectralMeasure moving = rescale(
        spectral_measure(ray_eval(nu0.eval(m), a, t), ray_eval(nu0p.eval(m), a, t)), Rat(1 / (t * m)));
    TheoremBRow row{t, m, cdf_distance(moving, reference), {}};
    for (const auto& c : clamp_grid) {
      auto clamp = [&](const Rat& x) { return x < c ? c : x; };
      row.clamped.emplace_back(moving.integrate(clamp), reference.integrate(clamp));
    }
    rows[k] = std::move(row);
  });
  return rows;
}

struct StartIndependenceRow {
  Rat t;
  int degree;
  Rat value;  // (tM)^-p d_p(ray_M, ray'_M)^p; (tM)^-1 d_inf for p = inf
  Rat bound;  // same normalization applied to d_inf(alpha_M, alpha'_M)
  bool within;
};

/// Rays from two starting points in the same direction nu0.
inline std::vector<StartIndependenceRow> ray_start_independence(const GradedNorm& nu0, const GradedNorm& alpha,
                                                                const GradedNorm& alphap, const Exponent& p,
                                                                const std::vector<Rat>& times,
                                                                const std::vector<int>& degrees) {
  detail::require_increasing(times);
  detail::require_increasing(degrees);
  std::vector<StartIndependenceRow> rows(times.size() * degrees.size());
  parallel_for(rows.size(), [&](std::size_t k) {
    const Rat& t = times[k / degrees.size()];
    const int m = degrees[k % degrees.size()];
    const DiagonalNorm& n0 = nu0.eval(m);
    const Rat scale = detail::power(Rat(t * m), p);
    const Rat value = dp_distance(ray_eval(n0, alpha.eval(m), t), ray_eval(n0, alphap.eval(m), t), p) / scale;
    const Rat bound = detail::power(d_inf(alpha.eval(m), alphap.eval(m)), p) / scale;
    rows[k] = {t, m, value, bound, value <= bound};
  });
  return rows;
}

}  // namespace ultranorm
