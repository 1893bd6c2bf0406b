#include "treelip/comp_op.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <unordered_map>

#include "treelip/errors.hpp"
#include "treelip/theorem_keys.hpp"

namespace treelip {

namespace {

constexpr std::int64_t kMaxImageLength = std::int64_t{1} << 20;

std::optional<std::uint64_t> checked_pow(std::uint64_t base, std::size_t n) {
  std::uint64_t out = 1;
  for (std::size_t k = 0; k < n; ++k) {
    if (base != 0 && out > std::numeric_limits<std::uint64_t>::max() / base) return std::nullopt;
    out *= base;
  }
  return out;
}

std::int64_t affine_length(std::int64_t a, std::int64_t b, std::int64_t m) {
  // a, m >= 0 and the result is non-negative by construction.
  if (a != 0 && m > (kMaxImageLength - std::max<std::int64_t>(b, 0)) / a) {
    throw ResourceBudgetExceeded("affine image of " + std::to_string(m) + " exceeds the length cap");
  }
  return a * m + b;
}

// Least N with (a-1)m + b > 0 for every m >= N, if any.
std::optional<std::size_t> affine_growth_from(std::int64_t a, std::int64_t b) {
  if (a >= 2) {
    if (b >= 1) return 0;
    return static_cast<std::size_t>((-b) / (a - 1) + 1);
  }
  if (a == 1 && b >= 1) return 0;
  return std::nullopt;
}

MapFacts affine_facts(std::int64_t a, std::int64_t b, bool fixzero) {
  MapFacts f;
  auto ua = static_cast<std::uint64_t>(a);
  if (!fixzero) {
    f.lipschitz_number = ua;
    f.injective = a >= 1;
    f.growth_threshold = affine_growth_from(a, b);
    if (a == 0) {
      f.constant_value = path_vertex(static_cast<std::size_t>(b));
      f.nonconstant_set_finite = true;
    } else {
      f.separation_base = ua;
      f.parent_separation_base = ua;
      if (b >= a - 1) f.separation_constant = 1;
    }
  } else {
    f.lipschitz_number = static_cast<std::uint64_t>(std::max(a, a + b));
    f.injective = a >= 1 && !(b < 0 && (-b) % a == 0);
    if (auto n = affine_growth_from(a, b)) f.growth_threshold = std::max<std::size_t>(*n, 1);
    if (a == 0) {
      f.nonconstant_set_finite = true;
      if (b == 0) f.constant_value = VertexPath{};
    }
  }
  return f;
}

// No cycle among path vertices of length < limit: every orbit started there
// either leaves the window (and then only grows) or would repeat.
bool path_cycles_absent_below(const SelfMap& map, std::size_t limit) {
  if (limit > 4096) return false;
  for (std::size_t m = 0; m < limit; ++m) {
    std::set<std::size_t> seen;
    std::size_t cur = m;
    while (cur < limit) {
      if (!seen.insert(cur).second) return false;
      cur = map(path_vertex(cur)).length();
    }
  }
  return true;
}

SelfMap make_affine(std::int64_t a, std::int64_t b, bool fixzero) {
  if (a < 0) throw SpecError("affine-path map needs a >= 0");
  if (!fixzero && b < 0) throw SpecError("affine-path map needs b >= 0 (or fixzero with a + b >= 0)");
  if (fixzero && a + b < 0) throw SpecError("affine-path map with fixzero needs a + b >= 0");
  std::string name = "affine-path(" + std::to_string(a) + "m" + (b < 0 ? "" : "+") + std::to_string(b) +
                     (fixzero ? ",fixzero" : "") + ")";
  MapSpec spec{"affine-path",
               {{"a", std::to_string(a)}, {"b", std::to_string(b)}, {"fixzero", fixzero ? "true" : "false"}}};
  SelfMap map(
      std::move(name), path_tree(),
      [a, b, fixzero](const VertexPath& v) {
        auto m = static_cast<std::int64_t>(path_index(v));
        if (fixzero && m == 0) return VertexPath{};
        return path_vertex(static_cast<std::size_t>(affine_length(a, b, m)));
      },
      affine_facts(a, b, fixzero), std::move(spec));
  MapFacts facts = map.facts();
  if (facts.growth_threshold && path_cycles_absent_below(map, *facts.growth_threshold)) {
    facts.no_periodic_points = true;
    if (facts.injective.value_or(false)) facts.preimage_times_finite = true;
  }
  return map.with_facts(std::move(facts));
}

}  // namespace

// ---- SelfMap ----------------------------------------------------------------

SelfMap::SelfMap(std::string name, TreeModel model, ApplyFn apply, MapFacts facts, MapSpec spec)
    : name_(std::move(name)),
      model_(std::move(model)),
      apply_(std::make_shared<const ApplyFn>(std::move(apply))),
      facts_(std::move(facts)),
      spec_(std::move(spec)) {}

VertexPath SelfMap::apply_checked(const VertexPath& v) const {
  VertexPath image = (*apply_)(v);
  if (!model_.contains(image)) {
    throw InvalidVertex("map '" + name_ + "' sends " + v.to_string() + " to " + image.to_string() +
                        ", which is not a vertex of tree '" + model_.name() + "'");
  }
  return image;
}

SelfMap SelfMap::with_facts(MapFacts facts) const {
  SelfMap copy = *this;
  copy.facts_ = std::move(facts);
  return copy;
}

// ---- built-in maps ----------------------------------------------------------

SelfMap affine_path_map(std::int64_t a, std::int64_t b, bool fixzero) { return make_affine(a, b, fixzero); }

SelfMap constant_map(const TreeModel& model, const VertexPath& target) {
  model.validate(target);
  MapFacts f;
  f.lipschitz_number = 0;
  f.injective = false;
  f.nonconstant_set_finite = true;
  f.constant_value = target;
  return SelfMap("constant(" + target.to_string() + ")", model,
                 [target](const VertexPath&) { return target; }, std::move(f),
                 MapSpec{"constant", {{"target", target.to_string()}}});
}

SelfMap comb_map() {
  MapFacts f;
  f.lipschitz_number = 3;
  f.injective = true;
  f.no_periodic_points = true;
  f.preimage_times_finite = true;
  f.bounded_separation = SeparationBound{comb_spine(1), 1};
  return SelfMap(
      "comb", comb_tree(),
      [](const VertexPath& v) {
        auto c = comb_coordinates(v);
        if (!c.on_spine) return comb_ray(c.spine, c.ray + 1);
        if (c.spine % 2 == 1) return comb_spine(c.spine - 1);
        return comb_ray(c.spine, 1);
      },
      std::move(f), MapSpec{"comb", {}});
}

SelfMap table_map(const TreeModel& model, std::map<VertexPath, VertexPath> entries, TableDefault fallback,
                  MapFacts facts) {
  for (const auto& [from, to] : entries) {
    model.validate(from);
    model.validate(to);
  }
  auto shared = std::make_shared<const std::map<VertexPath, VertexPath>>(std::move(entries));
  std::string def = fallback == TableDefault::Identity ? "identity" : "error";
  return SelfMap(
      "table(" + std::to_string(shared->size()) + " entries, default " + def + ")", model,
      [shared, fallback](const VertexPath& v) {
        auto it = shared->find(v);
        if (it != shared->end()) return it->second;
        if (fallback == TableDefault::Identity) return v;
        throw SpecError("table map has no entry for " + v.to_string() + " and its default is 'error'");
      },
      std::move(facts), MapSpec{"table", {{"default", def}}});
}

SelfMap path_halving_map() {
  MapFacts f;
  f.lipschitz_number = 1;
  f.injective = false;
  return SelfMap(
      "path-halving", path_tree(), [](const VertexPath& v) { return path_vertex(path_index(v) / 2); },
      std::move(f), MapSpec{"path-halving", {}});
}

SelfMap path_even_collapse_map() {
  return SelfMap(
      "path-even-collapse", path_tree(),
      [](const VertexPath& v) { return v.length() % 2 == 0 ? VertexPath{} : v; }, MapFacts{},
      MapSpec{"path-even-collapse", {}});
}

VertexPath apply_power(const SelfMap& map, const VertexPath& v, std::size_t n) {
  VertexPath cur = v;
  for (std::size_t k = 0; k < n; ++k) cur = map(cur);
  return cur;
}

SelfMap iterate(const SelfMap& map, std::size_t n) {
  if (n == 1) return map;
  const auto& spec = map.spec();
  if (spec.kind == "affine-path" && n >= 1) {
    std::int64_t a = std::stoll(spec.params.at("a"));
    std::int64_t b = std::stoll(spec.params.at("b"));
    bool fixzero = spec.params.at("fixzero") == "true";
    if (!fixzero || a + b >= 1) {
      // phi^n(m) = a^n m + b (1 + a + ... + a^(n-1)) on the affine part.
      std::int64_t an = 1, bn = 0;
      for (std::size_t k = 0; k < n; ++k) {
        bn = affine_length(a, b, bn);
        an = affine_length(a, 0, an);
      }
      return make_affine(an, bn, fixzero);
    }
  }
  if (spec.kind == "constant") return map;

  const MapFacts& f = map.facts();
  MapFacts g;
  if (n == 0) {
    g.lipschitz_number = 1;
    g.injective = true;
  } else {
    if (auto lam = f.certified_lipschitz_bound()) g.lipschitz_bound = checked_pow(*lam, n);
    g.injective = f.injective;
    g.growth_threshold = f.growth_threshold;
    g.no_periodic_points = f.no_periodic_points;
    g.preimage_times_finite = f.preimage_times_finite;
    g.nonconstant_set_finite = f.nonconstant_set_finite;
    if (f.parent_separation_base) g.parent_separation_base = checked_pow(*f.parent_separation_base, n);
  }
  return SelfMap(map.name() + "^" + std::to_string(n), map.model(),
                 [map, n](const VertexPath& v) { return apply_power(map, v, n); }, std::move(g),
                 MapSpec{"iterate", {{"base", map.name()}, {"n", std::to_string(n)}}});
}

void scan_images(const SelfMap& map, std::size_t depth,
                 const std::function<void(const VertexPath&, const VertexPath&, const VertexPath*)>& visit) {
  std::unordered_map<VertexPath, VertexPath, VertexPathHash> previous, current;
  for (std::size_t n = 0; n <= depth; ++n) {
    current.clear();
    for (const auto& v : level(map.model(), n)) {
      VertexPath image = map.apply_checked(v);
      const VertexPath* parent_image = nullptr;
      if (n > 0) parent_image = &previous.at(v.prefix(n - 1));
      visit(v, image, parent_image);
      current.emplace(v, std::move(image));
    }
    std::swap(previous, current);
  }
}

std::optional<std::pair<VertexPath, VertexPath>> first_image_collision(const SelfMap& map, std::size_t depth) {
  std::unordered_map<VertexPath, VertexPath, VertexPathHash> seen;
  std::optional<std::pair<VertexPath, VertexPath>> out;
  scan_images(map, depth, [&](const VertexPath& v, const VertexPath& image, const VertexPath*) {
    if (out) return;
    auto [it, fresh] = seen.emplace(image, v);
    if (!fresh) out = std::make_pair(it->second, v);
  });
  return out;
}

void spot_check_facts(const SelfMap& map, std::size_t depth) {
  const MapFacts& f = map.facts();
  auto bound = f.certified_lipschitz_bound();
  std::unordered_map<VertexPath, VertexPath, VertexPathHash> seen;
  auto fail = [&](const std::string& what) {
    throw MetadataContradiction("declared metadata of map '" + map.name() + "' is contradicted: " + what);
  };
  scan_images(map, depth, [&](const VertexPath& v, const VertexPath& image, const VertexPath* parent_image) {
    if (parent_image && bound) {
      auto d = distance(image, *parent_image);
      if (d > *bound) fail("dist(phi(" + v.to_string() + "), phi(parent)) = " + std::to_string(d));
      if (f.lipschitz_number && d > *f.lipschitz_number) fail("Lipschitz number exceeded at " + v.to_string());
    }
    if (f.growth_threshold && v.length() >= *f.growth_threshold && image.length() <= v.length()) {
      fail("|phi(" + v.to_string() + ")| <= |" + v.to_string() + "|");
    }
    if (f.constant_value && image != *f.constant_value) fail("phi(" + v.to_string() + ") differs from the constant");
    if (f.injective.value_or(false)) {
      auto [it, fresh] = seen.emplace(image, v);
      if (!fresh) fail(it->second.to_string() + " and " + v.to_string() + " share an image");
    }
  });
}

// ---- operator ---------------------------------------------------------------

TreeFunction compose(const SelfMap& map, const TreeFunction& f) {
  SupportHint hint;
  const MapFacts& facts = map.facts();
  if (facts.constant_value) {
    hint.tail = TailBound{0, Magnitude()};
  } else if (facts.growth_threshold) {
    std::optional<std::size_t> d = f.hint().zero_beyond;
    if (f.hint().support) {
      std::size_t deepest = 0;
      for (const auto& v : *f.hint().support) deepest = std::max(deepest, v.length());
      d = d ? std::min(*d, deepest) : deepest;
    }
    // |v| > max(N, d) forces |phi(v)| > |v| > d, where f vanishes.
    if (d) hint.zero_beyond = std::max(*facts.growth_threshold, *d);
  }
  return TreeFunction("C[" + map.name() + "](" + f.name() + ")",
                      [map, f](const VertexPath& v) { return f(map(v)); }, std::move(hint));
}

LipschitzEstimate lipschitz_number(const SelfMap& map, std::size_t depth) {
  if (depth < 1) throw DomainError("lipschitz_number needs depth >= 1");
  LipschitzEstimate out;
  out.depth = depth;
  out.certified = map.facts().lipschitz_number;
  bool found = false;
  scan_images(map, depth, [&](const VertexPath& v, const VertexPath& image, const VertexPath* parent_image) {
    if (!parent_image) return;
    std::uint64_t d = distance(image, *parent_image);
    if (!found || d > out.value) {
      out.value = d;
      out.attained_at = v;
      found = true;
    } else if (d == out.value && v < out.attained_at) {
      out.attained_at = v;
    }
  });
  if (auto bound = map.facts().certified_lipschitz_bound(); bound && out.value > *bound) {
    throw MetadataContradiction("map '" + map.name() + "' declares lambda_phi <= " + std::to_string(*bound) +
                                " but dist(phi(v), phi(v^-)) = " + std::to_string(out.value) + " at " +
                                out.attained_at.to_string());
  }
  out.exact = out.certified.has_value() && *out.certified == out.value;
  return out;
}

NonconstantSectors nonconstant_sectors(const SelfMap& map, std::size_t depth, std::size_t probe) {
  if (probe < depth) throw DomainError("nonconstant_sectors needs probe >= depth");
  NonconstantSectors out;
  out.depth = depth;
  out.probe = probe;
  std::unordered_map<VertexPath, VertexPath, VertexPathHash> images;
  scan_images(map, probe, [&](const VertexPath& u, const VertexPath& image, const VertexPath*) {
    if (u.length() <= depth) images.emplace(u, image);
    std::size_t top = std::min(u.length(), depth);
    for (std::size_t k = 0; k <= top; ++k) {
      VertexPath v = u.prefix(k);
      if (out.members.count(v)) continue;
      if (images.at(v) != image) out.members.emplace(std::move(v), u);
    }
  });
  return out;
}

std::string to_string(BoundednessStatus s) {
  switch (s) {
    case BoundednessStatus::BoundedCertified: return "BoundedCertified";
    case BoundednessStatus::NotBounded: return "NotBounded";
    case BoundednessStatus::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

BoundednessVerdict classify_boundedness(const SelfMap& map, std::size_t depth, BoundednessOptions options) {
  spot_check_facts(map, depth);
  BoundednessVerdict out;
  out.depth = depth;
  out.probe = depth + (options.probe_extra ? options.probe_extra : depth);

  const MapFacts& f = map.facts();
  if (auto lam = f.certified_lipschitz_bound()) {
    auto certify = [&](std::string_view key, std::string reason) {
      out.status = BoundednessStatus::BoundedCertified;
      out.theorem_key = std::string(key);
      out.reason = "lambda_phi <= " + std::to_string(*lam) + " is certified and " + std::move(reason);
    };
    if (f.constant_value) {
      certify(keys::kBoundedFiniteNonconstantSet, "phi is constant, so A is empty");
    } else if (f.nonconstant_set_finite) {
      certify(keys::kBoundedFiniteNonconstantSet, "A is declared finite");
    } else if (f.injective.value_or(false)) {
      certify(keys::kBoundedFiniteFibers, "phi is injective, so every fibre is finite");
    } else if (f.growth_threshold) {
      certify(keys::kBoundedLengthDivergence,
              "|phi(v)| > |v| for |v| >= " + std::to_string(*f.growth_threshold) + ", so |phi(v)| -> infinity");
    }
    if (out.status == BoundednessStatus::BoundedCertified) return out;
  }

  auto sectors = nonconstant_sectors(map, depth, out.probe);
  out.observed_a = sectors.members.size();
  out.min_image_length.assign(depth + 1, std::nullopt);
  // target w -> depth -> (first A-preimage at that depth, its witness)
  std::map<VertexPath, std::map<std::size_t, std::pair<VertexPath, VertexPath>>> buckets;
  for (const auto& [v, u] : sectors.members) {
    VertexPath w = map(v);
    auto& slot = out.min_image_length[v.length()];
    slot = slot ? std::min(*slot, w.length()) : w.length();
    buckets[w].emplace(v.length(), std::make_pair(v, u));
  }

  const VertexPath* best = nullptr;
  std::size_t best_count = 0;
  for (const auto& [w, by_depth] : buckets) {
    if (by_depth.size() > best_count) {
      best = &w;
      best_count = by_depth.size();
    }
  }

  if (best && best_count >= options.threshold) {
    TreeFunction chi = indicator(*best);
    TreeFunction pulled = compose(map, chi);
    std::set<std::size_t> unit_depths;
    std::vector<VertexPath> preimages, increments;
    for (const auto& [d, pair] : buckets.at(*best)) {
      const auto& [v, u] = pair;
      // Vertices strictly between v and u were scanned earlier and share
      // phi(v), so the increment sits at u.
      if (derivative(pulled, u).abs() == Magnitude::of_rational(1) && unit_depths.insert(u.length()).second) {
        preimages.push_back(v);
        increments.push_back(u);
      }
    }
    if (unit_depths.size() >= options.threshold) {
      out.status = BoundednessStatus::NotBounded;
      out.theorem_key = std::string(keys::kUnboundedPreimageAccumulation);
      out.reason = std::to_string(best_count) + " vertices of A at distinct depths map to " + best->to_string() +
                   "; chi_w o phi has unit increments at " + std::to_string(unit_depths.size()) +
                   " distinct depths";
      out.witness_vertex = *best;
      out.witness_function = chi;
      out.witness_preimages = std::move(preimages);
      out.unit_increments = std::move(increments);
      out.heuristic = true;
      return out;
    }
  }

  out.status = BoundednessStatus::Inconclusive;
  out.theorem_key = std::string(keys::kBoundednessOpen);
  out.reason = f.certified_lipschitz_bound()
                   ? "lambda_phi is certified but neither finiteness of A nor growth along A is"
                   : "no certified Lipschitz number and no target accumulates " + std::to_string(options.threshold) +
                         " A-preimages at distinct depths";
  return out;
}

// ---- norm bounds ------------------------------------------------------------

TreeFunction norm_tent(std::size_t m) {
  auto mm = static_cast<long>(m);
  return TreeFunction(
      "tent(m=" + std::to_string(m) + ")",
      [mm](const VertexPath& v) -> Scalar {
        auto n = static_cast<long>(v.length());
        if (n <= mm) return Scalar(1 + n);
        if (n <= 2 * mm + 1) return Scalar(2 * mm + 1 - n);
        return Scalar(0);
      },
      SupportHint{std::nullopt, 2 * m, std::nullopt});
}

namespace {

TreeFunction bump(const TreeModel& model, const VertexPath& c) {
  std::map<VertexPath, Scalar> entries;
  entries[c] = Scalar(2);
  if (auto p = c.parent()) entries[*p] = Scalar(1);
  auto a = model.arity(c);
  for (std::uint32_t k = 0; k < a; ++k) entries[c.child(k)] = Scalar(1);
  return table_function(std::move(entries), "bump" + c.to_string());
}

}  // namespace

NormBounds norm_bounds(const SelfMap& map, std::size_t depth, NormBoundsOptions options) {
  if (depth < 1) throw DomainError("norm_bounds needs depth >= 1");
  const TreeModel& model = map.model();
  std::size_t m = map.apply_checked(VertexPath{}).length();
  Magnitude lower = Magnitude::of_rational(Rational(static_cast<unsigned long>(m + 1)));

  auto estimate = lipschitz_number(map, depth);
  auto certified = map.facts().certified_lipschitz_bound();
  std::uint64_t lam = certified ? *certified : estimate.value;
  Magnitude lam_mag = Magnitude::of_rational(Rational(static_cast<unsigned long>(lam)));

  TreeFunction g = norm_tent(m);
  auto g_image = lip_norm(compose(map, g), model, depth);

  NormBounds out{lower,
                 max(lower, lam_mag),
                 certified.has_value(),
                 lam,
                 g,
                 g_image.value,
                 RatioWitness{"tent", g, Magnitude(), Magnitude(), Magnitude(), false},
                 depth,
                 options.witness_radius,
                 0};

  bool have_best = false;
  auto consider = [&](std::string family, const TreeFunction& f) {
    auto norm = lip_norm(f, model, options.witness_radius + 2 * m + 3);
    if (norm.value.is_zero()) return;
    auto image = lip_norm(compose(map, f), model, depth);
    Magnitude ratio = image.value / norm.value;
    ++out.candidates;
    if (out.upper_certified && !approx_le(ratio, out.upper)) {
      throw TheoremViolation("witness " + f.name() + " has ratio " + ratio.to_string() +
                             " above the certified upper bound " + out.upper.to_string());
    }
    if (!have_best || ratio > out.best.ratio) {
      out.best = RatioWitness{std::move(family), f, norm.value, image.value, ratio, image.exact};
      have_best = true;
    }
  };

  consider("tent", g);
  std::vector<VertexPath> centres;
  for (std::size_t n = 0; n <= options.witness_radius; ++n) {
    std::size_t taken = 0;
    for (const auto& c : level(model, n)) {
      if (taken++ >= options.max_centres_per_level) break;
      centres.push_back(c);
    }
  }
  for (const auto& c : centres) consider("indicator", indicator(c));
  for (const auto& c : centres) consider("bump", bump(model, c));
  return out;
}

}  // namespace treelip
