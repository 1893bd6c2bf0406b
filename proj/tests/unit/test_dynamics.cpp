#include "doctest.h"
#include "treelip/dynamics.hpp"
#include "treelip/theorem_keys.hpp"

using namespace treelip;

namespace {

Magnitude mag(const Rational& r) { return Magnitude::of_rational(r); }

std::vector<std::size_t> indices(const OrbitTrace& t) {
  std::vector<std::size_t> out;
  for (const auto& s : t.steps) out.push_back(path_index(s.vertex));
  return out;
}

}  // namespace

TEST_CASE("orbits") {
  CHECK(indices(orbit(affine_path_map(2, 1), path_vertex(0), 4)) == std::vector<std::size_t>{0, 1, 3, 7, 15});
  auto fixed = orbit(affine_path_map(2, 0, true), path_vertex(0), 5);
  CHECK(fixed.cycle_detected);
  CHECK(fixed.period == 1);
  auto comb = orbit(comb_map(), comb_spine(1), 3);
  REQUIRE(comb.steps.size() == 4);
  CHECK(comb.steps[1].vertex == comb_spine(0));
  CHECK(comb.steps[2].vertex == comb_ray(0, 1));
  CHECK(comb.steps[3].vertex == comb_ray(0, 2));
  for (std::size_t n = 0; n + 1 < comb.steps.size(); ++n) {
    CHECK(comb.steps[n + 1].vertex == comb_map()(comb.steps[n].vertex));
  }
}

TEST_CASE("cycle detection reports the minimal period") {
  std::map<VertexPath, VertexPath> e{{path_vertex(1), path_vertex(2)}, {path_vertex(2), path_vertex(3)},
                                     {path_vertex(3), path_vertex(1)}};
  auto t = orbit(table_map(path_tree(), e, TableDefault::Identity), path_vertex(1), 10);
  CHECK(t.cycle_detected);
  CHECK(t.period == 3);
  CHECK(t.entry == 0);
}

TEST_CASE("periodic points") {
  auto dbl = find_periodic_points(affine_path_map(2, 0, true), 6, 16);
  REQUIRE(dbl.points.size() == 1);
  CHECK(dbl.points[0].vertex == path_vertex(0));
  CHECK(dbl.points[0].period == 1);
  auto ex = find_periodic_points(affine_path_map(2, 1), 6, 16);
  CHECK(ex.points.empty());
  CHECK(ex.certified_absent);
  auto comb = find_periodic_points(comb_map(), 6, 64);
  CHECK(comb.points.empty());
  CHECK(comb.certified_absent);
}

TEST_CASE("injectivity scans") {
  CHECK(injectivity_scan(affine_path_map(2, 1), 8).status == InjectivityStatus::CertifiedByMetadata);
  auto half = injectivity_scan(path_halving_map(), 8);
  CHECK(half.status == InjectivityStatus::Collision);
  REQUIRE(half.collision.has_value());
  CHECK(half.collision->first == path_vertex(0));
  CHECK(half.collision->second == path_vertex(1));
  auto c = injectivity_scan(constant_map(path_tree(), path_vertex(2)), 8);
  CHECK(c.status == InjectivityStatus::Collision);
  CHECK(c.collision->first == path_vertex(0));
  CHECK(c.collision->second == path_vertex(1));
}

TEST_CASE("run away scans") {
  auto phi = affine_path_map(2, 1);
  CHECK(run_away_scan(phi, {path_vertex(0), path_vertex(1), path_vertex(2)}, 32) == std::set<std::size_t>{1});
  auto dbl = affine_path_map(2, 0, true);
  auto all = run_away_scan(dbl, {path_vertex(0)}, 10);
  CHECK(all.size() == 10);
  CHECK(run_away_scan(affine_path_map(1, 1), {path_vertex(5)}, 20).empty());
}

TEST_CASE("weighted separation") {
  auto comb = weighted_separation(comb_map(), Scalar(1), comb_spine(1), 100);
  REQUIRE(comb.terms.size() == 100);
  for (const auto& t : comb.terms) CHECK(t == mag(1));
  CHECK(comb.bounded_over_window);
  auto ex = weighted_separation(affine_path_map(2, 1), Scalar(1), path_vertex(1), 16);
  REQUIRE(ex.terms.size() == 16);
  for (std::size_t n = 1; n <= 16; ++n) CHECK(ex.terms[n - 1] == mag(Rational(1UL << n)));
  CHECK_FALSE(ex.bounded_over_window);
  auto lam = Scalar(Rational(3, 2));
  auto inj = weighted_separation(affine_path_map(1, 1), lam, path_vertex(3), 12);
  for (std::size_t n = 1; n <= 12; ++n) CHECK(inj.terms[n - 1] >= lam.abs().pow(static_cast<unsigned>(n)));
}

TEST_CASE("preimage times") {
  auto p = preimage_times(affine_path_map(2, 1), path_vertex(7), 16, 32);
  CHECK(p.times == std::set<std::size_t>{1, 2, 3});
  CHECK(p.assessment == PreimageAssessment::ProvablyFinite);
  CHECK(p.empty_from == 4);
  auto c = preimage_times(comb_map(), comb_ray(2, 1), 12, 32);
  CHECK(c.times.size() < 32);
  auto s = preimage_times(affine_path_map(1, 1), path_vertex(0), 8, 8);
  CHECK(s.times.empty());
}

TEST_CASE("growth checks") {
  auto g = growth_check(affine_path_map(2, 1), 16);
  CHECK(g.holds);
  CHECK(g.threshold == 0);
  CHECK(g.certified);
  auto s = growth_check(affine_path_map(1, 1), 16);
  CHECK(s.holds);
  CHECK(s.threshold == 0);
  auto comb = growth_check(comb_map(), 12);
  CHECK_FALSE(comb.holds);
  for (std::size_t v = 1; v <= 11; v += 2) {
    CHECK(std::find(comb.failures.begin(), comb.failures.end(), comb_spine(v)) != comb.failures.end());
  }
}

TEST_CASE("backward geometric maps") {
  auto shift = affine_path_map(1, 1);
  auto b = backward_geometric(shift, 3, Scalar(2), indicator(path_vertex(2)), 16);
  for (std::size_t k = 0; k <= 16; ++k) CHECK(b(path_vertex(k)) == Scalar(k == 5 ? Rational(1, 8) : Rational(0)));
  auto z = backward_geometric(shift, 2, Scalar(3), zero_function(), 8);
  for (std::size_t k = 0; k <= 8; ++k) CHECK(z(path_vertex(k)).is_zero());
  CHECK_THROWS_AS(backward_geometric(path_halving_map(), 1, Scalar(2), indicator(path_vertex(0)), 8),
                  InjectivityUnknown);
}

TEST_CASE("forward and backward maps invert each other") {
  auto phi = affine_path_map(2, 1);
  Scalar lambda(Rational(3, 2), Rational(1, 2));
  std::map<VertexPath, Scalar> table{{path_vertex(0), Scalar(1)}, {path_vertex(2), Scalar(Rational(-1, 3))},
                                     {path_vertex(3), Scalar(Rational(0), Rational(2))}};
  auto f = table_function(table);
  for (std::size_t n = 1; n <= 3; ++n) {
    auto b = backward_geometric(phi, n, lambda, f, 40);
    auto g = b;
    for (std::size_t k = 0; k < n; ++k) g = compose(phi, g);
    g = lambda.pow(static_cast<long>(n)) * g;
    for (std::size_t k = 0; k <= 6; ++k) CHECK(g(path_vertex(k)) == f(path_vertex(k)));
  }
}

TEST_CASE("separation and tents") {
  auto phi = affine_path_map(2, 1);
  for (std::size_t n = 1; n <= 4; ++n) {
    for (std::size_t v = 0; v <= 3; ++v) {
      auto s = separation_m(phi, n, path_vertex(v), 12);
      CHECK(s.value() == (std::uint64_t{1} << n));
      CHECK(s.certified.has_value());
    }
  }
  CHECK(separation_m(affine_path_map(1, 1), 1, path_vertex(3), 8).value() == 1);

  auto tent = tent_function(phi, 1, path_vertex(0), 2);
  CHECK(tent(path_vertex(1)) == Scalar(1));
  CHECK(tent(path_vertex(0)) == Scalar(Rational(1, 2)));
  CHECK(tent(path_vertex(2)) == Scalar(Rational(1, 2)));
  CHECK(tent(path_vertex(3)).is_zero());
  auto pulled = compose(phi, tent);
  for (std::size_t k = 0; k < 8; ++k) CHECK(pulled(path_vertex(k)) == Scalar(k == 0 ? 1 : 0));

  auto point = tent_function(phi, 2, path_vertex(1), 1);
  for (std::size_t k = 0; k < 12; ++k) CHECK(point(path_vertex(k)) == Scalar(k == 7 ? 1 : 0));
}

TEST_CASE("hypercyclicity verdicts") {
  auto ex = hypercyclicity_report(affine_path_map(2, 1), Scalar(1));
  CHECK(ex.verdict == HypercyclicityVerdict::MixingCertified);
  REQUIRE(ex.table.has_value());
  CHECK(ex.table->c == std::optional<std::uint64_t>(1));
  CHECK(ex.reasons.front().theorem_key == keys::kMixingSeparationTents);

  auto half = hypercyclicity_report(path_halving_map(), Scalar(3));
  CHECK(half.verdict == HypercyclicityVerdict::NotHypercyclicCertified);
  CHECK(half.reasons.front().theorem_key == keys::kNoninjectiveNotHypercyclic);

  auto dbl = hypercyclicity_report(affine_path_map(2, 0, true), Scalar(3));
  CHECK(dbl.verdict == HypercyclicityVerdict::NotHypercyclicCertified);
  CHECK(dbl.reasons.front().theorem_key == keys::kPeriodicPointObstruction);

  auto comb1 = hypercyclicity_report(comb_map(), Scalar(1));
  CHECK(comb1.verdict == HypercyclicityVerdict::NotHypercyclicCertified);
  CHECK(comb1.reasons.front().theorem_key == keys::kBoundedSeparationObstruction);

  auto comb2 = hypercyclicity_report(comb_map(), Scalar(2));
  CHECK(comb2.verdict == HypercyclicityVerdict::MixingCertified);

  auto shift = hypercyclicity_report(affine_path_map(1, 1), Scalar(2));
  CHECK(shift.verdict == HypercyclicityVerdict::MixingCertified);
  CHECK(shift.reasons.front().theorem_key == keys::kMixingEventualGrowth);

  auto shift1 = hypercyclicity_report(affine_path_map(1, 1), Scalar(1));
  CHECK(shift1.verdict == HypercyclicityVerdict::NotHypercyclicCertified);

  for (const auto* r : {&ex, &half, &dbl, &comb1, &comb2, &shift, &shift1}) {
    CHECK(r->conditions.size() == 7);
    for (const auto& c : r->conditions) CHECK(is_theorem_key(c.theorem_key));
    for (const auto& reason : r->reasons) CHECK(is_theorem_key(reason.theorem_key));
  }
}

TEST_CASE("certified verdicts survive larger budgets") {
  DynamicsBudgets big;
  big.depth = 16;
  big.horizon = 128;
  big.max_power = 12;
  CHECK(hypercyclicity_report(affine_path_map(2, 1), Scalar(1), big).verdict ==
        HypercyclicityVerdict::MixingCertified);
  CHECK(hypercyclicity_report(comb_map(), Scalar(1), big).verdict == HypercyclicityVerdict::NotHypercyclicCertified);
  CHECK(hypercyclicity_report(comb_map(), Scalar(2), big).verdict == HypercyclicityVerdict::MixingCertified);
}
