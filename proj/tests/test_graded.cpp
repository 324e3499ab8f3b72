#include <gtest/gtest.h>

#include <memory>

#include "support.hpp"

using namespace ultranorm;
using namespace testing_support;

namespace {

using Ring = GradedNorm::Ring;
using Kind = MonomialProfile::Kind;

Ring line() { return std::make_shared<const SectionRing>(std::vector<LatticePoint>{{0}, {1}}); }
Ring triangle() { return std::make_shared<const SectionRing>(std::vector<LatticePoint>{{0, 0}, {1, 0}, {0, 1}}); }

std::vector<int> degrees_up_to(int n) {
  std::vector<int> out;
  for (int m = 1; m <= n; ++m) out.push_back(m);
  return out;
}

/// Filtration with weight u on s_u: phi(x) = x.
GradedNorm linear_flag(const Ring& r) {
  return GradedNorm::monomial(r, two_adic(), Mode::filtration, MonomialProfile::breakpoints({{0, 0}, {1, 1}}));
}

GradedNorm trivial_flag(const Ring& r) {
  return GradedNorm::monomial(r, two_adic(), Mode::filtration, MonomialProfile::zero(r->ambient_dim()));
}

GradedNorm unit_norm(const Ring& r) {
  return GradedNorm::monomial(r, two_adic(), Mode::norm, MonomialProfile::zero(r->ambient_dim()));
}

}  // namespace

// --- rings and profiles ------------------------------------------------------

TEST(SectionRing, BasisOfSegmentAndTriangle) {
  const Ring l = line();
  EXPECT_EQ(l->basis(1)->points, (std::vector<LatticePoint>{{0}, {1}}));
  EXPECT_EQ(l->rank(5), 6u);
  const Ring t = triangle();
  EXPECT_EQ(t->basis(1)->points, (std::vector<LatticePoint>{{0, 0}, {0, 1}, {1, 0}}));
  for (int m = 1; m <= 8; ++m) EXPECT_EQ(t->rank(m), static_cast<std::size_t>((m + 1) * (m + 2) / 2));
  EXPECT_EQ(t->basis(2)->index.at({1, 1}), 4u);
  EXPECT_THROW(t->basis(0), Error);
}

TEST(SectionRing, SquareAndRejectedPolytopes) {
  const SectionRing square({{0, 0}, {1, 0}, {0, 1}, {1, 1}});
  for (int m = 1; m <= 5; ++m) EXPECT_EQ(square.rank(m), static_cast<std::size_t>((m + 1) * (m + 1)));
  EXPECT_TRUE(square.contains({make_rat(1, 2), 1}));
  EXPECT_FALSE(square.contains({make_rat(3, 2), 0}));
  EXPECT_THROW(SectionRing({{0, 0}, {1, 1}, {2, 2}}), Error);
  EXPECT_THROW(SectionRing({{0, 0}, {1}}), Error);
}

TEST(Profiles, MonomialProfileEvaluation) {
  const MonomialProfile tent = MonomialProfile::breakpoints({{1, 0}, {0, 0}, {make_rat(1, 2), 1}});
  EXPECT_EQ(tent({make_rat(1, 4)}), make_rat(1, 2));
  EXPECT_THROW(tent({2}), Error);
  const MonomialProfile lo = MonomialProfile::affine(Kind::affine_min, {{0, 1, 0}, {0, 0, 1}});
  EXPECT_EQ(lo({3, 2}), 2);
  const MonomialProfile hi = MonomialProfile::affine(Kind::affine_max, {{0, 0}, {-1, 2}});
  EXPECT_EQ(hi({make_rat(1, 4)}), 0);
  EXPECT_EQ(hi({1}), 1);
}

TEST(Profiles, ConvexProfileValidation) {
  const ConvexProfile f(0, 1, {{0, 0}, {make_rat(1, 2), -2}, {1, -3}});
  EXPECT_EQ(f(make_rat(1, 4)), -1);
  EXPECT_EQ(f(1), -3);
  EXPECT_THROW(f(2), Error);
  EXPECT_THROW(ConvexProfile(0, 1, {{0, 0}, {1, 1}}), Error);                          // increasing
  EXPECT_THROW(ConvexProfile(0, 1, {{0, 0}, {make_rat(1, 2), -1}, {1, -3}}), Error);  // concave
  EXPECT_EQ(ConvexProfile::affine(0, 1, 2, -1)(make_rat(1, 2)), make_rat(3, 2));
}

// --- evaluation of expressions -------------------------------------------------

TEST(GradedNorm, MonomialWeights) {
  const GradedNorm e = linear_flag(line());
  EXPECT_EQ(e.eval(3).weights(), (std::vector<Rat>{0, 1, 2, 3}));
  EXPECT_EQ(e.eval(3).mode(), Mode::filtration);
  const GradedNorm tri = GradedNorm::monomial(triangle(), two_adic(), Mode::norm,
                                              MonomialProfile::affine(Kind::affine_min, {{0, 1, 0}, {0, 0, 1}}));
  EXPECT_EQ(tri.eval(2).weights(), (std::vector<Rat>{0, 0, 0, 0, 1, 0}));
  EXPECT_THROW(GradedNorm::monomial(triangle(), two_adic(), Mode::norm, MonomialProfile::zero(1)), Error);
}

TEST(GradedNorm, EvaluationIsMemoized) {
  const GradedNorm e = GradedNorm::translate(linear_flag(line()), 1);
  EXPECT_EQ(&e.eval(4), &e.eval(4));
}

TEST(GradedNorm, TranslateScaleAndRay) {
  const Ring r = line();
  const GradedNorm e = GradedNorm::translate(unit_norm(r), make_rat(1, 2));
  EXPECT_EQ(e.eval(4).weights(), (std::vector<Rat>(5, Rat(-2))));
  EXPECT_EQ(GradedNorm::scale0(linear_flag(r), 2).eval(2).weights(), (std::vector<Rat>{0, 2, 4}));
  const GradedNorm ray = GradedNorm::ray(linear_flag(r), unit_norm(r), 3);
  EXPECT_TRUE(same_norm(ray.eval(2), DiagonalNorm::standard(two_adic(), Mode::norm, {0, 3, 6})));
  EXPECT_TRUE(ell_graded(ray).same_node(linear_flag(r)) || same_norm(ell_graded(ray).eval(2), linear_flag(r).eval(2)));
  EXPECT_THROW(ell_graded(unit_norm(r)), Error);
  EXPECT_THROW(GradedNorm::ray(linear_flag(r), unit_norm(r), -1), Error);
  EXPECT_THROW(GradedNorm::geodesic(unit_norm(r), unit_norm(r), 2), Error);
}

TEST(GradedNorm, TableDimensionsAndRange) {
  const Ring r = line();
  const GradedNorm t = GradedNorm::table(r, {DiagonalNorm::unit(two_adic(), 2), DiagonalNorm::unit(two_adic(), 3)});
  EXPECT_EQ(t.eval(2).dim(), 3u);
  try {
    t.eval(3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_degree);
  }
  try {
    GradedNorm::table(r, {DiagonalNorm::unit(two_adic(), 3)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::dimension_mismatch);
  }
  try {
    GradedNorm::max(unit_norm(line()), unit_norm(triangle()));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::dimension_mismatch);
  }
}

TEST(GradedNorm, IotaWeights) {
  const Ring r = line();
  const GradedNorm half = GradedNorm::iota(ConvexProfile::affine(0, 1, 0, make_rat(-1, 2)), linear_flag(r));
  EXPECT_EQ(half.eval(4).weights(), (std::vector<Rat>{0, make_rat(1, 2), 1, make_rat(3, 2), 2}));
  const GradedNorm shifted = GradedNorm::iota(ConvexProfile::affine(0, 1, 2, -1), linear_flag(r));
  EXPECT_EQ(shifted.eval(2).weights(), (std::vector<Rat>{-4, -3, -2}));
  EXPECT_THROW(GradedNorm::iota(ConvexProfile::affine(0, 1, 0, -1), unit_norm(r)).eval(1), Error);
}

// --- submultiplicativity and boundedness -------------------------------------

TEST(Submultiplicativity, ConcaveProfilesPass) {
  const GradedNorm e = linear_flag(line());
  const SubmultiplicativityReport rep = check_submultiplicative(e, 12);
  EXPECT_TRUE(rep.passed);
  EXPECT_EQ(rep.worst_slack, 0);
  EXPECT_FALSE(rep.witness);
  const GradedNorm tri = GradedNorm::monomial(triangle(), two_adic(), Mode::filtration,
                                              MonomialProfile::affine(Kind::affine_min, {{0, 1, 0}, {0, 0, 1}}));
  EXPECT_TRUE(check_submultiplicative(tri, 6).passed);
  EXPECT_TRUE(check_submultiplicative(GradedNorm::ray(linear_flag(line()), unit_norm(line()), 2), 8).passed);
}

TEST(Submultiplicativity, ConvexProfileFailsWithWitness) {
  const GradedNorm e = GradedNorm::monomial(line(), two_adic(), Mode::filtration,
                                            MonomialProfile::affine(Kind::affine_max, {{0, 0}, {-1, 2}}));
  const SubmultiplicativityReport rep = check_submultiplicative(e, 8);
  EXPECT_FALSE(rep.passed);
  ASSERT_TRUE(rep.witness);
  EXPECT_LT(rep.worst_slack, 0);
  const auto& w = *rep.witness;
  const SectionRing& ring = e.ring();
  LatticePoint sum = ring.basis(w.m)->points[w.i];
  for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += ring.basis(w.n)->points[w.j][k];
  const Rat slack = e.eval(w.m + w.n).weights()[ring.basis(w.m + w.n)->index.at(sum)] - e.eval(w.m).weights()[w.i] -
                    e.eval(w.n).weights()[w.j];
  EXPECT_EQ(slack, rep.worst_slack);
  EXPECT_THROW(check_submultiplicative(e, 1), Error);
}

TEST(Boundedness, RunningSupremum) {
  const ConvergenceTable t = boundedness(linear_flag(line()), 6);
  ASSERT_EQ(t.rows.size(), 6u);
  for (const auto& row : t.rows) {
    EXPECT_EQ(row.value, 1);
    EXPECT_EQ(row.diagnostic, 1);
  }
}

// --- limits on the projective line -------------------------------------------

TEST(GradedLimits, ProjectiveLineAnchors) {
  const Ring r = line();
  const GradedNorm e = linear_flag(r), triv = trivial_flag(r);
  for (const auto& row : graded_volume(e, triv, degrees_up_to(16)).rows) EXPECT_EQ(row.value, make_rat(1, 2));
  for (const auto& row : graded_dp(e, triv, Exponent::finite(1), degrees_up_to(8)).rows)
    EXPECT_EQ(row.value, make_rat(1, 2));
  for (const auto& row : graded_dp(e, triv, Exponent::infinity(), degrees_up_to(8)).rows) EXPECT_EQ(row.value, 1);
  // (1/m) sum_k (k/m)^2 over k = 0..m, divided by m + 1.
  for (const auto& row : graded_dp(e, triv, Exponent::finite(2), {4}).rows) EXPECT_EQ(row.value, make_rat(3, 8));
  const LimitMeasure lm = limit_measure(e, triv, degrees_up_to(16));
  for (std::size_t i = 0; i < lm.degrees.size(); ++i) {
    EXPECT_EQ(lm.table.rows[i].value, make_rat(1, 2));
    EXPECT_EQ(cdf_distance_to_uniform(lm.measures[i], 0, 1), make_rat(1, lm.degrees[i] + 1));
  }
}

TEST(GradedLimits, ExtrapolationOfOneOverMTerms) {
  ConvergenceTable t;
  for (int m : {4, 8}) t.rows.push_back({Rat(m), Rat(2) + make_rat(3, m), 0});
  EXPECT_EQ(t.extrapolate(), std::optional<Rat>(Rat(2)));
  EXPECT_FALSE(ConvergenceTable{}.extrapolate());
}

TEST(GradedLimits, VolumeScalingLaw) {
  const Ring r = line();
  const GradedNorm a = linear_flag(r);
  const GradedNorm b =
      GradedNorm::monomial(r, two_adic(), Mode::filtration, MonomialProfile::affine(Kind::affine_max, {{0, 0}, {-1, 2}}));
  for (const Rat t : {Rat(0), make_rat(1, 2), Rat(3)})
    for (const Rat s : {Rat(0), Rat(1), make_rat(5, 2)})
      for (const auto& row : volume_scaling_check(a, b, t, s, degrees_up_to(6))) EXPECT_TRUE(row.equal);
  // vol(t.a, t.a') = t vol(a, a').
  for (const auto& row : volume_scaling_check(a, b, 2, 2, {4})) EXPECT_EQ(row.lhs, 2 * volume(a.eval(4), b.eval(4)) / 4);
}

TEST(GradedLimits, FlatEmbeddingIsIsometric) {
  const Ring r = line();
  const ConvexProfile zero = ConvexProfile::affine(0, 1, 0, 0);
  const ConvexProfile minus = ConvexProfile::affine(0, 1, 0, -1);
  const FlatIsometryReport rep = flat_isometry_check(zero, minus, linear_flag(r), unit_norm(r), Exponent::finite(1),
                                                     degrees_up_to(12));
  EXPECT_TRUE(rep.all_equal);
  for (const auto& row : rep.rows) EXPECT_EQ(row.lhs, make_rat(1, 2));
  const ConvexProfile bent(0, 1, {{0, 0}, {make_rat(1, 2), -1}, {1, -1}});
  EXPECT_TRUE(flat_isometry_check(bent, minus, linear_flag(r), unit_norm(r), Exponent::finite(2),
                                  degrees_up_to(8))
                  .all_equal);
}

TEST(Rays, DirectionRecoveredDegreewise) {
  const Ring r = line();
  for (const auto& row : ell_degreewise_check(linear_flag(r), unit_norm(r), {1, 2, 5}, degrees_up_to(6)))
    EXPECT_TRUE(row.recovered);
}

TEST(Rays, StartIndependenceForTranslatedStart) {
  const Ring r = line();
  const GradedNorm alpha = unit_norm(r);
  const Rat c = make_rat(3, 2);
  for (const auto& row : ray_start_independence(linear_flag(r), alpha, GradedNorm::translate(alpha, c),
                                                Exponent::finite(2), {1, 2, 4}, {2, 5})) {
    EXPECT_EQ(row.value, pow(Rat(c / row.t), 2));
    EXPECT_TRUE(row.within);
  }
}

TEST(Rays, RayMeasureMatchesReferenceForSharedMonomialBasis) {
  const Ring r = line();
  const GradedNorm b =
      GradedNorm::monomial(r, two_adic(), Mode::filtration, MonomialProfile::breakpoints({{0, 1}, {1, 0}}));
  for (const auto& row : theorem_b_table(linear_flag(r), b, unit_norm(r), {1, 3}, {2, 6}, {0, make_rat(1, 2)})) {
    EXPECT_EQ(row.distance, 0);
    for (const auto& [moving, reference] : row.clamped) EXPECT_EQ(moving, reference);
  }
}

TEST(Rays, ActionOfMonomialPairsIsMonomial) {
  const Ring r = triangle();
  const GradedNorm nu0 = GradedNorm::monomial(r, two_adic(), Mode::filtration,
                                              MonomialProfile::affine(Kind::affine_min, {{0, 1, 0}, {0, 0, 1}}));
  const GradedNorm alpha = GradedNorm::monomial(r, two_adic(), Mode::norm,
                                                MonomialProfile::affine(Kind::affine_min, {{1, -1, 0}}));
  const GradedNorm sum = GradedNorm::monomial(
      r, two_adic(), Mode::norm, MonomialProfile::affine(Kind::affine_min, {{1, 0, 0}, {1, -1, 1}}));
  for (int m = 1; m <= 5; ++m) EXPECT_TRUE(same_norm(GradedNorm::action(nu0, alpha).eval(m), sum.eval(m)));
}
