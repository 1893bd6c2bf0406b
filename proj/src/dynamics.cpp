#include "treelip/dynamics.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "treelip/errors.hpp"
#include "treelip/theorem_keys.hpp"

namespace treelip {

namespace {

const Magnitude kOne = Magnitude::of_rational(1);
constexpr std::size_t kMaxCertifyScan = 1 << 16;
constexpr std::size_t kMaxTentBall = std::size_t{1} << 22;

Magnitude of_count(std::uint64_t n) { return Magnitude::of_rational(Rational(static_cast<unsigned long>(n))); }

std::vector<VertexPath> sample_vertices(const TreeModel& model, std::size_t levels, bool include_root,
                                        std::size_t cap = 32) {
  std::vector<VertexPath> out;
  for (std::size_t n = include_root ? 0 : 1; n <= levels && out.size() < cap; ++n) {
    for (const auto& v : level(model, n)) {
      if (out.size() >= cap) break;
      out.push_back(v);
    }
  }
  return out;
}

}  // namespace

OrbitTrace orbit(const SelfMap& map, const VertexPath& v, std::size_t n) {
  map.model().validate(v);
  OrbitTrace out;
  out.start = v;
  std::unordered_map<VertexPath, std::size_t, VertexPathHash> visited;
  VertexPath cur = v;
  for (std::size_t k = 0;; ++k) {
    visited.emplace(cur, k);
    out.steps.push_back({k, cur, cur.length()});
    if (k == n) break;
    try {
      cur = map.apply_checked(cur);
    } catch (const ResourceBudgetExceeded&) {
      out.length_capped = true;
      break;
    }
    if (auto it = visited.find(cur); it != visited.end()) {
      out.cycle_detected = true;
      out.entry = it->second;
      out.period = k + 1 - it->second;
      break;
    }
  }
  return out;
}

PeriodicScan find_periodic_points(const SelfMap& map, std::size_t depth, std::size_t horizon) {
  PeriodicScan out;
  std::map<VertexPath, std::size_t> cycles;
  Truncation(map.model(), depth).for_each([&](const VertexPath& v) {
    auto trace = orbit(map, v, horizon);
    if (!trace.cycle_detected) return;
    VertexPath least = trace.steps[trace.entry].vertex;
    for (std::size_t k = trace.entry; k < trace.steps.size(); ++k) least = std::min(least, trace.steps[k].vertex);
    cycles.emplace(least, trace.period);
  });
  for (const auto& [v, p] : cycles) out.points.push_back({v, p});

  const MapFacts& f = map.facts();
  if (!out.points.empty()) {
    if (f.no_periodic_points) {
      throw MetadataContradiction("map '" + map.name() + "' declares no periodic points but " +
                                  out.points.front().vertex.to_string() + " is periodic");
    }
    return out;
  }
  if (f.no_periodic_points) {
    out.certified_absent = true;
  } else if (f.growth_threshold) {
    // Any cycle stays below the threshold, where the scan is exhaustive.
    std::size_t n = *f.growth_threshold;
    if (n == 0) {
      out.certified_absent = true;
    } else if (Truncation(map.model(), n - 1).size() <= kMaxCertifyScan) {
      bool found = false;
      Truncation(map.model(), n - 1).for_each([&](const VertexPath& v) {
        std::unordered_set<VertexPath, VertexPathHash> seen;
        VertexPath cur = v;
        while (!found && cur.length() < n) {
          if (!seen.insert(cur).second) found = true;
          cur = map(cur);
        }
      });
      out.certified_absent = !found;
    }
  }
  return out;
}

std::string to_string(InjectivityStatus s) {
  switch (s) {
    case InjectivityStatus::CertifiedByMetadata: return "certified-by-metadata";
    case InjectivityStatus::Collision: return "collision";
    case InjectivityStatus::NoCollisionObserved: return "no-collision-observed";
  }
  return "no-collision-observed";
}

InjectivityResult injectivity_scan(const SelfMap& map, std::size_t depth) {
  InjectivityResult out;
  out.collision = first_image_collision(map, depth);
  bool declared = map.facts().injective.value_or(false);
  if (out.collision) {
    if (declared) {
      throw MetadataContradiction("map '" + map.name() + "' declares injectivity but " +
                                  out.collision->first.to_string() + " and " + out.collision->second.to_string() +
                                  " share an image");
    }
    out.status = InjectivityStatus::Collision;
  } else {
    out.status = declared ? InjectivityStatus::CertifiedByMetadata : InjectivityStatus::NoCollisionObserved;
  }
  return out;
}

std::set<std::size_t> run_away_scan(const SelfMap& map, const std::vector<VertexPath>& K, std::size_t horizon) {
  if (K.empty()) throw DomainError("run_away_scan needs a nonempty K");
  if (horizon < 1) throw DomainError("run_away_scan needs horizon >= 1");
  std::unordered_set<VertexPath, VertexPathHash> home(K.begin(), K.end());
  std::unordered_set<VertexPath, VertexPathHash> cur = home;
  // With certified growth, an orbit point longer than every member of K and
  // past the threshold only gets longer, so it never meets K again.
  std::optional<std::size_t> escape;
  if (auto t = map.facts().growth_threshold) {
    std::size_t longest = 0;
    for (const auto& k : K) longest = std::max(longest, k.length());
    escape = std::max(*t, longest + 1);
  }
  std::set<std::size_t> out;
  for (std::size_t j = 1; j <= horizon && !cur.empty(); ++j) {
    std::unordered_set<VertexPath, VertexPathHash> next;
    for (const auto& v : cur) {
      auto image = map.apply_checked(v);
      if (home.count(image) != 0) out.insert(j);
      if (!escape || image.length() < *escape) next.insert(std::move(image));
    }
    cur = std::move(next);
  }
  return out;
}

SeparationSequence weighted_separation(const SelfMap& map, const Scalar& lambda, const VertexPath& w,
                                       std::size_t horizon) {
  if (w.is_root()) throw DomainError("weighted_separation needs a non-root w");
  map.model().validate(w);
  SeparationSequence out;
  Magnitude r = lambda.abs();
  Magnitude weight = kOne;
  VertexPath a = w;
  VertexPath b = *w.parent();
  for (std::size_t n = 1; n <= horizon; ++n) {
    try {
      a = map.apply_checked(a);
      b = map.apply_checked(b);
    } catch (const ResourceBudgetExceeded&) {
      out.length_capped = true;
      break;
    }
    weight = weight * r;
    out.terms.push_back(weight * of_count(distance(a, b)));
  }
  std::size_t half = out.terms.size() / 2;
  Magnitude first, second;
  for (std::size_t k = 0; k < out.terms.size(); ++k) {
    (k < half ? first : second) = max(k < half ? first : second, out.terms[k]);
  }
  out.bounded_over_window = half == 0 || approx_le(second, first);
  return out;
}

std::string to_string(PreimageAssessment a) {
  return a == PreimageAssessment::ProvablyFinite ? "provably-finite" : "empty-beyond-within-scan";
}

PreimageTimes preimage_times(const SelfMap& map, const VertexPath& v, std::size_t depth, std::size_t horizon) {
  map.model().validate(v);
  std::unordered_map<VertexPath, std::vector<VertexPath>, VertexPathHash> preimages;
  scan_images(map, depth, [&](const VertexPath& u, const VertexPath& image, const VertexPath*) {
    preimages[image].push_back(u);
  });
  PreimageTimes out;
  std::unordered_set<VertexPath, VertexPathHash> layer{v};
  std::size_t n = 1;
  for (; n <= horizon; ++n) {
    std::unordered_set<VertexPath, VertexPathHash> next;
    for (const auto& x : layer) {
      if (auto it = preimages.find(x); it != preimages.end()) next.insert(it->second.begin(), it->second.end());
    }
    if (next.empty()) break;
    out.times.insert(n);
    layer = std::move(next);
  }
  if (n > horizon) {
    throw HorizonExhausted("preimage chains of " + v.to_string() + " are still nonempty at horizon " +
                           std::to_string(horizon));
  }
  out.empty_from = n;

  const MapFacts& f = map.facts();
  if (f.preimage_times_finite) {
    out.assessment = PreimageAssessment::ProvablyFinite;
    out.theorem_key = std::string(keys::kMixingPreimageFinite);
  } else if (f.growth_threshold && f.injective.value_or(false) &&
             find_periodic_points(map, 0, 0).certified_absent) {
    out.assessment = PreimageAssessment::ProvablyFinite;
    out.theorem_key = std::string(keys::kGrowthImpliesFinitePreimages);
  } else {
    out.theorem_key = std::string(keys::kMixingPreimageFinite);
  }
  return out;
}

GrowthResult growth_check(const SelfMap& map, std::size_t depth) {
  GrowthResult out;
  std::size_t deepest = 0;
  scan_images(map, depth, [&](const VertexPath& v, const VertexPath& image, const VertexPath*) {
    if (image.length() > v.length()) return;
    out.failures.push_back(v);
    if (!out.counterexample || v.length() > deepest) {
      out.counterexample = v;
      deepest = v.length();
    }
  });
  auto declared = map.facts().growth_threshold;
  if (out.failures.empty()) {
    out.holds = true;
    out.threshold = 0;
    out.counterexample.reset();
  } else if (2 * (depth - deepest) >= depth + 1) {
    out.holds = true;
    out.threshold = deepest + 1;
    out.counterexample.reset();
  }
  if (declared) {
    if (!out.holds || out.threshold > *declared) {
      throw MetadataContradiction("map '" + map.name() + "' declares growth from level " + std::to_string(*declared) +
                                  " but |phi(v)| <= |v| at deeper v");
    }
    out.certified = true;
  }
  return out;
}

TreeFunction backward_geometric(const SelfMap& map, std::size_t n, const Scalar& lambda, const TreeFunction& f,
                                std::size_t depth) {
  if (!(kOne < lambda.abs())) throw DomainError("backward_geometric needs |lambda| > 1");
  const MapFacts& facts = map.facts();
  if (facts.injective && !*facts.injective) {
    throw InjectivityUnknown("map '" + map.name() + "' is declared non-injective; phi^-n is not single valued");
  }
  if (!facts.injective) {
    if (auto c = first_image_collision(map, depth)) {
      throw InjectivityUnknown(c->first.to_string() + " and " + c->second.to_string() +
                               " share an image; phi^-n is not single valued");
    }
  }
  const SupportHint& hint = f.hint();
  std::vector<VertexPath> support;
  if (hint.support) {
    support = *hint.support;
  } else if (hint.zero_beyond) {
    support = Truncation(map.model(), *hint.zero_beyond).vertices();
  } else {
    throw PreconditionError("backward_geometric needs a finitely supported f; '" + f.name() + "' has no support hint");
  }
  SelfMap power = iterate(map, n);
  Scalar scale = Scalar(1) / lambda.pow(static_cast<long>(n));
  std::map<VertexPath, Scalar> entries;
  for (const auto& s : support) {
    Scalar value = f(s);
    if (value.is_zero()) continue;
    entries[power.apply_checked(s)] = scale * value;
  }
  return table_function(std::move(entries), "B" + std::to_string(n) + "(" + f.name() + ")");
}

SeparationEstimate separation_m(const SelfMap& map, std::size_t n, const VertexPath& v, std::size_t depth) {
  if (n < 1) throw DomainError("separation_m needs n >= 1");
  map.model().validate(v);
  SelfMap power = iterate(map, n);
  VertexPath target = power.apply_checked(v);
  SeparationEstimate out;
  bool found = false;
  Truncation(map.model(), depth).for_each([&](const VertexPath& u) {
    if (u == v) return;
    std::uint64_t d = distance(power(u), target);
    if (!found || d < out.upper) {
      out.upper = d;
      out.nearest = u;
      found = true;
    }
  });
  if (auto base = map.facts().separation_base) {
    std::uint64_t m = 1;
    for (std::size_t k = 0; k < n; ++k) m *= *base;
    if (found && out.upper < m) {
      throw MetadataContradiction("map '" + map.name() + "' declares m(n,v) = " + std::to_string(m) +
                                  " but dist(phi^n(" + out.nearest.to_string() + "), phi^n(" + v.to_string() +
                                  ")) = " + std::to_string(out.upper));
    }
    out.certified = m;
  }
  return out;
}

TreeFunction tent_function(const SelfMap& map, std::size_t n, const VertexPath& v, std::uint64_t m_nv) {
  if (m_nv < 1) throw DomainError("tent_function needs m >= 1");
  const TreeModel& model = map.model();
  VertexPath centre = iterate(map, n).apply_checked(v);
  std::map<VertexPath, Scalar> entries;
  std::deque<std::pair<VertexPath, std::uint64_t>> queue{{centre, 0}};
  std::unordered_set<VertexPath, VertexPathHash> seen{centre};
  Rational m(static_cast<unsigned long>(m_nv));
  while (!queue.empty()) {
    auto [u, d] = std::move(queue.front());
    queue.pop_front();
    entries[u] = Scalar(Rational(Rational(static_cast<unsigned long>(m_nv - d)) / m));
    if (entries.size() > kMaxTentBall) throw ResourceBudgetExceeded("tent ball exceeds the vertex cap");
    if (d + 1 >= m_nv) continue;
    std::vector<VertexPath> next;
    if (auto p = u.parent()) next.push_back(*p);
    for (std::uint32_t k = 0, a = model.arity(u); k < a; ++k) next.push_back(u.child(k));
    for (auto& x : next) {
      if (seen.insert(x).second) queue.emplace_back(std::move(x), d + 1);
    }
  }
  return table_function(std::move(entries), "tent(n=" + std::to_string(n) + ",v=" + v.to_string() +
                                                 ",m=" + std::to_string(m_nv) + ")");
}

std::string to_string(HypercyclicityVerdict v) {
  switch (v) {
    case HypercyclicityVerdict::NotHypercyclicCertified: return "NotHypercyclicCertified";
    case HypercyclicityVerdict::NotHypercyclicEvidence: return "NotHypercyclicEvidence";
    case HypercyclicityVerdict::MixingCertified: return "MixingCertified";
    case HypercyclicityVerdict::MixingEvidence: return "MixingEvidence";
    case HypercyclicityVerdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

namespace {

std::string join_terms(const std::vector<Magnitude>& terms, std::size_t count) {
  std::string out;
  for (std::size_t k = 0; k < std::min(count, terms.size()); ++k) {
    if (k) out += ", ";
    out += terms[k].to_string();
  }
  if (terms.size() > count) out += ", ...";
  return out;
}

}  // namespace

HypercyclicityReport hypercyclicity_report(const SelfMap& map, const Scalar& lambda, DynamicsBudgets budgets) {
  HypercyclicityReport rep;
  rep.lambda = lambda;
  rep.budgets = budgets;
  spot_check_facts(map, budgets.depth);
  const MapFacts& facts = map.facts();
  const TreeModel& model = map.model();
  Magnitude r = lambda.abs();
  bool above = lambda.exact() ? kOne < r : r.to_double() > 1.0 + kDefaultTolerance;
  bool on_circle = lambda.exact() ? r == kOne : std::abs(r.to_double() - 1.0) <= kDefaultTolerance;

  auto decide = [&](HypercyclicityVerdict v, std::string condition, std::string_view key, std::string evidence) {
    rep.verdict = v;
    rep.reasons.push_back({std::move(condition), std::string(key), std::move(evidence)});
  };
  auto row = [&](std::string id, std::string_view key, std::string status, std::string detail) {
    rep.conditions.push_back({std::move(id), std::string(key), std::move(status), std::move(detail)});
  };

  // Condition table.
  auto inj = injectivity_scan(map, budgets.depth);
  bool injective_certified = inj.status == InjectivityStatus::CertifiedByMetadata;
  row("injectivity", keys::kNoninjectiveNotHypercyclic, to_string(inj.status),
      inj.collision ? inj.collision->first.to_string() + " and " + inj.collision->second.to_string() +
                          " share the image " + map(inj.collision->first).to_string()
                    : "no two truncation vertices share an image (depth " + std::to_string(budgets.depth) + ")");

  auto periodic = find_periodic_points(map, budgets.depth, budgets.horizon);
  row("periodic-points", keys::kPeriodicPointObstruction,
      !periodic.points.empty() ? "found" : (periodic.certified_absent ? "certified-absent" : "none-observed"),
      !periodic.points.empty() ? periodic.points.front().vertex.to_string() + " has period " +
                                     std::to_string(periodic.points.front().period)
                               : "orbits from the truncation scanned for " + std::to_string(budgets.horizon) +
                                     " steps");

  {
    auto pool = sample_vertices(model, budgets.sample_levels, true);
    bool respected = true;
    std::string detail;
    for (std::size_t k = 1; k <= std::min(budgets.max_run_away_set, pool.size()); ++k) {
      std::vector<VertexPath> K(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));
      std::size_t count = 0;
      try {
        count = run_away_scan(map, K, budgets.horizon).size();
      } catch (const ResourceBudgetExceeded&) {
        continue;
      }
      if (count > k * k - k) respected = false;
      if (!detail.empty()) detail += "; ";
      detail += "|K|=" + std::to_string(k) + ": " + std::to_string(count) + " return times";
    }
    row("run-away", keys::kRunAwayBound, respected ? "bound-respected" : "bound-exceeded", detail);
  }

  // Weighted separation over sampled w, plus any metadata witness.
  std::optional<std::pair<VertexPath, SeparationSequence>> bounded_seq;
  {
    auto pool = sample_vertices(model, budgets.sample_levels, false);
    if (facts.bounded_separation) pool.insert(pool.begin(), facts.bounded_separation->w);
    for (const auto& w : pool) {
      auto seq = weighted_separation(map, lambda, w, budgets.horizon);
      if (seq.bounded_over_window && !seq.terms.empty()) {
        bounded_seq = std::make_pair(w, std::move(seq));
        break;
      }
    }
  }
  std::optional<std::string> separation_certificate;
  if (!above) {
    if (facts.bounded_separation) {
      separation_certificate = "dist(phi^n(w), phi^n(w^-)) <= " + std::to_string(facts.bounded_separation->bound) +
                               " for w = " + facts.bounded_separation->w.to_string() + " and |lambda| <= 1";
    } else if (auto b = facts.parent_separation_base) {
      Magnitude rb = r * of_count(*b);
      if (lambda.exact() ? !(kOne < rb) : rb.to_double() <= 1.0 + kDefaultTolerance) {
        separation_certificate = "dist(phi^n(w), phi^n(w^-)) = " + std::to_string(*b) + "^n and |lambda| * " +
                                 std::to_string(*b) + " <= 1";
      }
    }
  }
  row("weighted-separation", keys::kBoundedSeparationObstruction,
      separation_certificate ? "bounded-certified" : (bounded_seq ? "bounded-over-window" : "unbounded-over-window"),
      bounded_seq ? "w = " + bounded_seq->first.to_string() + ": " + join_terms(bounded_seq->second.terms, 8)
                  : (separation_certificate ? *separation_certificate : "every sampled w grows over the window"));

  auto growth = growth_check(map, budgets.depth);
  row("growth", keys::kMixingEventualGrowth,
      growth.certified ? "certified" : (growth.holds ? "holds-within-scan" : "fails"),
      growth.holds ? "|phi(v)| > |v| for |v| >= " + std::to_string(growth.threshold)
                   : std::to_string(growth.failures.size()) + " vertices with |phi(v)| <= |v|, deepest " +
                         growth.counterexample->to_string());

  bool preimages_finite_in_scan = true;
  {
    std::string detail;
    for (const auto& v : sample_vertices(model, budgets.sample_levels, true, 8)) {
      try {
        auto t = preimage_times(map, v, budgets.depth, budgets.horizon);
        if (!detail.empty()) detail += "; ";
        detail += v.to_string() + ": empty from n=" + std::to_string(t.empty_from);
      } catch (const HorizonExhausted&) {
        preimages_finite_in_scan = false;
        if (!detail.empty()) detail += "; ";
        detail += v.to_string() + ": chains persist at the horizon";
      }
    }
    row("preimage-times", keys::kMixingPreimageFinite,
        facts.preimage_times_finite ? "certified"
                                    : (preimages_finite_in_scan ? "finite-within-scan" : "persistent"),
        detail);
  }

  // Early verdicts leave the separation table unevaluated.
  auto skipped = [&]() -> HypercyclicityReport {
    row("separation-m", keys::kMixingSeparationTents, "not-evaluated",
        "decided by " + rep.reasons.back().condition);
    return rep;
  };

  // (1) collision
  if (inj.collision) {
    decide(HypercyclicityVerdict::NotHypercyclicCertified, "injectivity", keys::kNoninjectiveNotHypercyclic,
           inj.collision->first.to_string() + " and " + inj.collision->second.to_string() + " share an image");
    return skipped();
  }
  // (2) periodic point
  if (!periodic.points.empty()) {
    decide(HypercyclicityVerdict::NotHypercyclicCertified, "periodic-points", keys::kPeriodicPointObstruction,
           periodic.points.front().vertex.to_string() + " is periodic with period " +
               std::to_string(periodic.points.front().period));
    return skipped();
  }
  // (3) bounded weighted separation
  if (separation_certificate) {
    decide(HypercyclicityVerdict::NotHypercyclicCertified, "weighted-separation",
           keys::kBoundedSeparationObstruction, *separation_certificate);
    return skipped();
  }
  if (bounded_seq) {
    decide(HypercyclicityVerdict::NotHypercyclicEvidence, "weighted-separation", keys::kBoundedSeparationObstruction,
           "w = " + bounded_seq->first.to_string() + ": " + join_terms(bounded_seq->second.terms, 8) +
               " does not grow over " + std::to_string(bounded_seq->second.terms.size()) + " terms");
    return skipped();
  }

  bool no_periodic_certified = periodic.certified_absent;
  bool clean_scan = inj.status != InjectivityStatus::Collision && periodic.points.empty();

  // (4) |lambda| > 1
  if (above) {
    if (injective_certified && growth.certified) {
      decide(HypercyclicityVerdict::MixingCertified, "growth", keys::kMixingEventualGrowth,
             "phi injective and |phi(v)| > |v| for |v| >= " + std::to_string(*facts.growth_threshold) +
                 " (metadata)");
    } else if (injective_certified && no_periodic_certified && facts.preimage_times_finite) {
      decide(HypercyclicityVerdict::MixingCertified, "preimage-times", keys::kMixingPreimageFinite,
             "phi injective without periodic points and every preimage-time set finite (metadata)");
    } else if (clean_scan && growth.holds) {
      decide(HypercyclicityVerdict::MixingEvidence, "growth", keys::kMixingEventualGrowth,
             "no collision, no periodic point and growth from level " + std::to_string(growth.threshold) +
                 " within the scan");
    } else if (clean_scan && preimages_finite_in_scan) {
      decide(HypercyclicityVerdict::MixingEvidence, "preimage-times", keys::kMixingPreimageFinite,
             "no collision, no periodic point and preimage chains empty within the scan");
    } else {
      decide(HypercyclicityVerdict::Inconclusive, "open", keys::kHypercyclicityOpen,
             "no sufficient condition observed for |lambda| > 1");
    }
    return skipped();
  }

  // (5) |lambda| <= 1: separation tents.
  SeparationTable table;
  table.depth = budgets.depth;
  auto vs = sample_vertices(model, budgets.sample_levels, true, 16);
  bool trend = true;
  bool table_complete = true;
  for (const auto& v : vs) {
    Magnitude previous;
    for (std::size_t n = 1; n <= budgets.max_power; ++n) {
      SeparationEstimate est;
      std::size_t image_length = 0;
      try {
        est = separation_m(map, n, v, budgets.depth);
        image_length = iterate(map, n)(v).length();
      } catch (const ResourceBudgetExceeded&) {
        table_complete = false;
        break;
      }
      table.entries.push_back({n, v, est.value(), est.certified.has_value(), image_length});
      Magnitude weighted = r.pow(static_cast<unsigned>(n)) * of_count(est.value());
      if (n > 1 && !(previous < weighted)) trend = false;
      previous = weighted;
    }
  }
  for (std::uint64_t c = 0; c <= budgets.max_c && !table.entries.empty(); ++c) {
    bool ok = std::all_of(table.entries.begin(), table.entries.end(),
                          [&](const SeparationCell& cell) { return cell.image_length + c >= cell.m; });
    if (ok) {
      table.c = c;
      break;
    }
  }
  rep.table = table;
  row("separation-m", keys::kMixingSeparationTents,
      trend && table.c ? "holds-on-table" : "fails-on-table",
      std::string("|lambda|^n m(n,v) ") + (trend ? "increasing" : "not increasing") + " on the grid; c = " +
          (table.c ? std::to_string(*table.c) : "none in [0, " + std::to_string(budgets.max_c) + "]") +
          (table_complete ? "" : " (grid cut by the length cap)"));

  bool preimage_ok_certified = !on_circle || facts.preimage_times_finite;
  bool preimage_ok_scan = !on_circle || preimages_finite_in_scan;
  bool cond1_certified = false;
  if (auto b = facts.separation_base) {
    Magnitude rb = r * of_count(*b);
    cond1_certified = lambda.exact() ? kOne < rb : rb.to_double() > 1.0 + kDefaultTolerance;
  }
  if (injective_certified && no_periodic_certified && cond1_certified && facts.separation_constant &&
      preimage_ok_certified) {
    decide(HypercyclicityVerdict::MixingCertified, "separation-m", keys::kMixingSeparationTents,
           "m(n,v) = " + std::to_string(*facts.separation_base) + "^n, |lambda| * " +
               std::to_string(*facts.separation_base) + " > 1, c = " + std::to_string(*facts.separation_constant) +
               (on_circle ? ", preimage times finite" : "") + " (metadata)");
  } else if (clean_scan && trend && table.c && preimage_ok_scan) {
    decide(HypercyclicityVerdict::MixingEvidence, "separation-m", keys::kMixingSeparationTents,
           "tent hypotheses hold on the sampled grid with c = " + std::to_string(*table.c));
  } else {
    decide(HypercyclicityVerdict::Inconclusive, "open", keys::kHypercyclicityOpen,
           "the separation-tent hypotheses are not met on the sampled grid");
  }
  return rep;
}

}  // namespace treelip
