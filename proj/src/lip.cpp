#include "treelip/lip.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "treelip/errors.hpp"

namespace treelip {

std::optional<std::size_t> SupportHint::flat_beyond() const {
  std::optional<std::size_t> out;
  auto take = [&](std::size_t d) { out = out ? std::min(*out, d) : d; };
  if (support) {
    std::size_t deepest = 0;
    for (const auto& v : *support) deepest = std::max(deepest, v.length());
    take(support->empty() ? 0 : deepest + 1);
  }
  if (zero_beyond) take(*zero_beyond + 1);
  if (tail && tail->bound.is_zero()) take(tail->depth);
  return out;
}

TreeFunction::TreeFunction(std::string name, EvalFn eval, SupportHint hint)
    : name_(std::move(name)), eval_(std::make_shared<const EvalFn>(std::move(eval))), hint_(std::move(hint)) {}

TreeFunction TreeFunction::with_hint(SupportHint hint) const {
  TreeFunction copy = *this;
  copy.hint_ = std::move(hint);
  return copy;
}

TreeFunction TreeFunction::renamed(std::string name) const {
  TreeFunction copy = *this;
  copy.name_ = std::move(name);
  return copy;
}

namespace {

// Hint for a linear combination: only facts that survive addition.
SupportHint combine_hints(const SupportHint& a, const SupportHint& b) {
  SupportHint out;
  if (a.support && b.support) {
    std::set<VertexPath> all(a.support->begin(), a.support->end());
    all.insert(b.support->begin(), b.support->end());
    out.support = std::vector<VertexPath>(all.begin(), all.end());
  }
  auto zero_depth = [](const SupportHint& h) -> std::optional<std::size_t> {
    if (h.zero_beyond) return h.zero_beyond;
    if (h.support) {
      std::size_t deepest = 0;
      for (const auto& v : *h.support) deepest = std::max(deepest, v.length());
      return deepest;
    }
    return std::nullopt;
  };
  auto za = zero_depth(a);
  auto zb = zero_depth(b);
  if (za && zb) out.zero_beyond = std::max(*za, *zb);
  if (a.tail && b.tail) {
    out.tail = TailBound{std::max(a.tail->depth, b.tail->depth), Magnitude::approx(0)};
    if (a.tail->bound.exact() && b.tail->bound.exact() && a.tail->bound.rational() &&
        b.tail->bound.rational()) {
      out.tail->bound = Magnitude::of_rational(*a.tail->bound.rational() + *b.tail->bound.rational());
    } else {
      out.tail->bound = Magnitude::approx(a.tail->bound.to_double() + b.tail->bound.to_double());
    }
  } else {
    auto fa = a.flat_beyond();
    auto fb = b.flat_beyond();
    if (fa && fb) out.tail = TailBound{std::max(*fa, *fb), Magnitude()};
  }
  return out;
}

}  // namespace

TreeFunction operator+(const TreeFunction& f, const TreeFunction& g) {
  return TreeFunction("(" + f.name() + "+" + g.name() + ")",
                      [f, g](const VertexPath& v) { return f(v) + g(v); }, combine_hints(f.hint(), g.hint()));
}

TreeFunction operator-(const TreeFunction& f, const TreeFunction& g) {
  return TreeFunction("(" + f.name() + "-" + g.name() + ")",
                      [f, g](const VertexPath& v) { return f(v) - g(v); }, combine_hints(f.hint(), g.hint()));
}

TreeFunction operator*(const Scalar& a, const TreeFunction& f) {
  SupportHint hint = f.hint();
  if (hint.tail) hint.tail->bound = hint.tail->bound * a.abs();
  if (a.is_zero()) hint = SupportHint{std::vector<VertexPath>{}, std::nullopt, std::nullopt};
  return TreeFunction("(" + a.to_string() + "*" + f.name() + ")",
                      [a, f](const VertexPath& v) { return a * f(v); }, std::move(hint));
}

// ---- built-ins ------------------------------------------------------------

TreeFunction zero_function() {
  return TreeFunction("zero", [](const VertexPath&) { return Scalar(0); },
                      SupportHint{std::vector<VertexPath>{}, std::nullopt, std::nullopt});
}

TreeFunction constant_function(const Scalar& c) {
  return TreeFunction("const(" + c.to_string() + ")", [c](const VertexPath&) { return c; },
                      SupportHint{std::nullopt, std::nullopt, TailBound{0, Magnitude()}});
}

TreeFunction indicator(const VertexPath& w) {
  return TreeFunction("chi" + w.to_string(), [w](const VertexPath& v) { return Scalar(v == w ? 1 : 0); },
                      SupportHint{std::vector<VertexPath>{w}, std::nullopt, std::nullopt});
}

TreeFunction table_function(std::map<VertexPath, Scalar> entries, std::string name) {
  std::vector<VertexPath> support;
  for (const auto& [v, value] : entries) {
    if (!value.is_zero()) support.push_back(v);
  }
  auto shared = std::make_shared<const std::map<VertexPath, Scalar>>(std::move(entries));
  return TreeFunction(
      std::move(name),
      [shared](const VertexPath& v) {
        auto it = shared->find(v);
        return it == shared->end() ? Scalar(0) : it->second;
      },
      SupportHint{std::move(support), std::nullopt, std::nullopt});
}

TreeFunction length_function() {
  return TreeFunction("linear", [](const VertexPath& v) { return Scalar(static_cast<long>(v.length())); },
                      SupportHint{std::nullopt, std::nullopt, TailBound{0, Magnitude::of_rational(1)}});
}

TreeFunction harmonic_function() {
  return TreeFunction("harmonic", [](const VertexPath& v) {
    Rational sum = 0;
    for (std::size_t k = 1; k <= v.length(); ++k) sum += Rational(1, static_cast<unsigned long>(k));
    sum.canonicalize();
    return Scalar(sum);
  });
}

TreeFunction power_function(const Scalar& mu) {
  if (mu.is_zero()) {
    return constant_function(Scalar(1)).renamed("power(0)");
  }
  auto m = mu.to_complex();
  return TreeFunction("power(" + mu.to_string() + ")", [m](const VertexPath& v) {
    double len = static_cast<double>(v.length()) + 1.0;
    return Scalar::approx(std::exp(m * std::log(len)));
  });
}

// ---- operations -----------------------------------------------------------

Scalar derivative(const TreeFunction& f, const VertexPath& v) {
  if (v.is_root()) return f(v);
  return f(v) - f(*v.parent());
}

namespace {

// Level-by-level scan of f' that evaluates f once per vertex.
template <class Visit>
void scan_derivative(const TreeFunction& f, const TreeModel& model, std::size_t depth, Visit&& visit) {
  std::vector<std::pair<VertexPath, Scalar>> previous;
  for (std::size_t n = 0; n <= depth; ++n) {
    std::vector<std::pair<VertexPath, Scalar>> current;
    std::size_t parent_at = 0;
    for (const auto& v : level(model, n)) {
      Scalar value = f(v);
      Scalar d = value;
      if (n > 0) {
        // parents appear in the same lexicographic order as their children
        while (!std::equal(previous[parent_at].first.indices().begin(),
                           previous[parent_at].first.indices().end(), v.indices().begin())) {
          ++parent_at;
        }
        d -= previous[parent_at].second;
      }
      visit(v, d);
      current.emplace_back(v, std::move(value));
    }
    previous = std::move(current);
  }
}

}  // namespace

LipNormReport lip_norm(const TreeFunction& f, const TreeModel& model, std::size_t depth) {
  LipNormReport report;
  report.depth = depth;
  bool first = true;
  scan_derivative(f, model, depth, [&](const VertexPath& v, const Scalar& d) {
    Magnitude m = d.abs();
    if (first || m > report.value || (m == report.value && v < report.attained_at)) {
      report.value = m;
      report.attained_at = v;
      first = false;
    }
  });
  const auto& hint = f.hint();
  if (auto flat = hint.flat_beyond(); flat && depth >= *flat) {
    report.exact = true;
  } else if (hint.tail && depth >= hint.tail->depth && report.value >= hint.tail->bound) {
    report.exact = true;
  }
  return report;
}

std::vector<Magnitude> decay_profile(const TreeFunction& f, const TreeModel& model, std::size_t depth) {
  std::vector<Magnitude> out(depth);
  std::vector<bool> seen(depth, false);
  scan_derivative(f, model, depth, [&](const VertexPath& v, const Scalar& d) {
    if (v.is_root()) return;
    std::size_t k = v.length() - 1;
    Magnitude m = d.abs();
    if (!seen[k] || m > out[k]) out[k] = m;
    seen[k] = true;
  });
  return out;
}

namespace {

Magnitude half_of(const Scalar& epsilon) {
  if (!epsilon.is_real()) throw DomainError("epsilon must be a positive real");
  if (epsilon.exact()) {
    if (sgn(epsilon.re()) <= 0) throw DomainError("epsilon must be positive");
    return Magnitude::of_rational(epsilon.re() / 2);
  }
  double e = epsilon.to_complex().real();
  if (!(e > 0)) throw DomainError("epsilon must be positive");
  return Magnitude::approx(e / 2);
}

// Least M >= 1 with level_max < M * half.
std::size_t least_ramp(const Magnitude& level_max, const Magnitude& half) {
  double guess = level_max.to_double() / half.to_double();
  auto m = static_cast<std::size_t>(std::max(1.0, std::floor(guess) - 2.0));
  auto holds = [&](std::size_t candidate) {
    Magnitude bound = half.exact() ? Magnitude::of_rational(Rational(static_cast<unsigned long>(candidate)) *
                                                            *half.rational())
                                   : Magnitude::approx(static_cast<double>(candidate) * half.to_double());
    return level_max < bound;
  };
  while (!holds(m)) ++m;
  while (m > 1 && holds(m - 1)) --m;
  return m;
}

}  // namespace

FiniteSupportApprox finite_support_approx(const TreeFunction& g, const Scalar& epsilon, const TreeModel& model,
                                          std::size_t probe_depth) {
  Magnitude half = half_of(epsilon);
  if (probe_depth < 1) throw DecayNotObserved("probe depth must be at least 1");
  auto profile = decay_profile(g, model, probe_depth);
  // least N >= 1 whose suffix of the observed profile stays below epsilon/2
  std::size_t n = probe_depth + 1;
  while (n > 1 && profile[n - 2] < half) --n;
  if (n > probe_depth) {
    throw DecayNotObserved("|g'| does not drop below epsilon/2 by level " + std::to_string(probe_depth));
  }
  Magnitude level_max;
  for (const auto& v : level(model, n)) level_max = max(level_max, g(v).abs());
  std::size_t m = least_ramp(level_max, half);

  auto cut = n;
  auto ramp = m;
  TreeFunction f(
      "approx(" + g.name() + ")",
      [g, cut, ramp](const VertexPath& v) -> Scalar {
        std::size_t len = v.length();
        if (len <= cut) return g(v);
        if (len >= cut + ramp) return Scalar(0);
        Rational factor(static_cast<unsigned long>(cut + ramp - len), static_cast<unsigned long>(ramp));
        factor.canonicalize();
        return Scalar(factor) * g(v.prefix(cut));
      },
      SupportHint{std::nullopt, cut + ramp - 1, std::nullopt});
  return {std::move(f), n, m, probe_depth};
}

TreeFunction localized_extension(const TreeFunction& f, const TreeModel& model, std::size_t cutoff_depth,
                                 std::size_t m, std::size_t norm_depth) {
  if (m < 1) throw DomainError("ramp length m must be positive");
  Magnitude norm = lip_norm(f, model, norm_depth).value;
  Magnitude level_max;
  for (const auto& w : level(model, cutoff_depth)) level_max = max(level_max, f(w).abs());
  Magnitude allowed = norm * Magnitude::of_rational(Rational(static_cast<unsigned long>(m)));
  if (level_max > allowed) {
    throw RampTooSteep("max |f| on level " + std::to_string(cutoff_depth) + " is " + level_max.to_string() +
                       ", above m * ||f|| = " + allowed.to_string());
  }
  TreeFunction out(
      "extend(" + f.name() + ")",
      [f, cutoff_depth, m](const VertexPath& u) -> Scalar {
        std::size_t len = u.length();
        if (len <= cutoff_depth) return f(u);
        if (len >= cutoff_depth + m) return Scalar(0);
        Rational factor(static_cast<unsigned long>(cutoff_depth + m - len), static_cast<unsigned long>(m));
        factor.canonicalize();
        return Scalar(factor) * f(u.prefix(cutoff_depth));
      },
      SupportHint{std::nullopt, cutoff_depth + m - 1, std::nullopt});
  return out;
}

}  // namespace treelip
