#include "treelip/spectra.hpp"

#include <cmath>
#include <complex>
#include <unordered_map>
#include <unordered_set>

#include "treelip/errors.hpp"
#include "treelip/theorem_keys.hpp"

namespace treelip {

namespace {

const Magnitude kOne = Magnitude::of_rational(1);

bool within(const Magnitude& residual, bool exact, double tol) {
  return exact ? residual.is_zero() : residual.to_double() <= tol;
}

void require_injective(const SelfMap& map, std::size_t depth, const char* op) {
  const auto& inj = map.facts().injective;
  if (inj && !*inj) throw PreconditionError(std::string(op) + " needs an injective map; '" + map.name() + "' is not");
  if (auto c = first_image_collision(map, depth)) {
    throw PreconditionError(std::string(op) + " needs an injective map; " + c->first.to_string() + " and " +
                            c->second.to_string() + " share an image");
  }
}

// Max image length over the truncation, and whether w is hit.
struct ImageScan {
  std::size_t max_length = 0;
  std::optional<VertexPath> preimage_of_w;
};

ImageScan scan_for(const SelfMap& map, std::size_t depth, const VertexPath& w) {
  ImageScan out;
  scan_images(map, depth, [&](const VertexPath& v, const VertexPath& image, const VertexPath*) {
    out.max_length = std::max(out.max_length, image.length());
    if (!out.preimage_of_w && image == w) out.preimage_of_w = v;
  });
  return out;
}

// Forward orbit phi^first(w), phi^(first+1)(w), ... as vertex -> n. Stops
// once growth metadata proves later terms never reach length <= bound.
struct OrbitTable {
  std::unordered_map<VertexPath, std::size_t, VertexPathHash> index;
  std::size_t terms = 0;
  bool escaped = false;
};

OrbitTable forward_orbit(const SelfMap& map, const VertexPath& w, std::size_t first, std::size_t bound,
                         std::size_t horizon) {
  OrbitTable out;
  auto growth = map.facts().growth_threshold;
  std::unordered_set<VertexPath, VertexPathHash> seen{w};
  VertexPath cur = apply_power(map, w, first);
  for (std::size_t n = first;; ++n) {
    if (n > first && !seen.insert(cur).second) {
      throw OrbitCollision("the orbit of " + w.to_string() + " revisits " + cur.to_string() + " at step " +
                           std::to_string(n) + "; phi has a periodic point");
    }
    if (first > 0 && n == first && cur == w) {
      throw OrbitCollision(w.to_string() + " is a periodic point of phi");
    }
    seen.insert(cur);
    out.index.emplace(cur, n);
    out.terms = n - first + 1;
    if (growth && cur.length() >= *growth && cur.length() > bound) {
      out.escaped = true;
      break;
    }
    if (n >= horizon) break;
    cur = map(cur);
  }
  return out;
}

TreeFunction orbit_function(std::string name, const OrbitTable& table, const Scalar& lambda, std::size_t first) {
  auto index = std::make_shared<const std::unordered_map<VertexPath, std::size_t, VertexPathHash>>(table.index);
  return TreeFunction(std::move(name), [index, lambda, first](const VertexPath& v) -> Scalar {
    auto it = index->find(v);
    if (it == index->end()) return Scalar(0);
    return lambda.pow(static_cast<long>(it->second - first));
  });
}

}  // namespace

EigenPair check_eigenpair(const SelfMap& map, const Scalar& lambda, const TreeFunction& f, std::size_t depth,
                          std::string theorem_key, double tol) {
  EigenPair out{lambda, f, depth, Magnitude(), false, std::move(theorem_key), 0, false};
  bool exact = lambda.exact();
  bool nonzero = false;
  Truncation(map.model(), depth).for_each([&](const VertexPath& v) {
    Scalar fv = f(v);
    Scalar r = f(map.apply_checked(v)) - lambda * fv;
    exact = exact && r.exact();
    nonzero = nonzero || !fv.is_zero();
    out.residual = max(out.residual, r.abs());
  });
  out.accepted = nonzero && within(out.residual, exact, tol);
  const MapFacts& facts = map.facts();
  if (out.accepted && !facts.constant_value) {
    if (auto lam = facts.certified_lipschitz_bound()) {
      Magnitude radius = Magnitude::of_rational(Rational(static_cast<unsigned long>(*lam)));
      if (!approx_le(lambda.abs(), radius, tol)) {
        throw TheoremViolation("eigenvalue " + lambda.to_string() + " verified outside the disk of radius " +
                               std::to_string(*lam) + " for map '" + map.name() + "'");
      }
    }
  }
  return out;
}

EigenPair geometric_eigenfunction(const SelfMap& map, const VertexPath& w, const Scalar& lambda, std::size_t depth,
                                  std::size_t horizon) {
  if (!(lambda.abs() < kOne)) throw DomainError("geometric eigenfunction needs |lambda| < 1");
  map.model().validate(w);
  require_injective(map, depth, "geometric_eigenfunction");
  auto scan = scan_for(map, depth, w);
  if (scan.preimage_of_w) {
    throw NotOutsideImage(w.to_string() + " is the image of " + scan.preimage_of_w->to_string());
  }
  auto table = forward_orbit(map, w, 0, std::max(scan.max_length, depth), horizon);
  auto f = orbit_function("geometric(w=" + w.to_string() + ",lambda=" + lambda.to_string() + ")", table, lambda, 0);
  auto pair = check_eigenpair(map, lambda, f, depth, std::string(keys::kGeometricEigenfunction));
  pair.orbit_terms = table.terms;
  pair.orbit_escaped = table.escaped;
  return pair;
}

PowerEigenResult power_eigenfunction_path_tree(const Scalar& lambda, std::size_t depth, double tol) {
  Magnitude r = lambda.abs();
  if (r.is_zero() || !(r < Magnitude::of_rational(2))) {
    throw DomainError("the (m+1)^mu eigenfamily needs 0 < |lambda| < 2");
  }
  Scalar mu(0);
  if (!(lambda.exact() && lambda == Scalar(1))) {
    mu = Scalar::approx(std::log(lambda.to_complex()) / std::log(2.0));
  }
  SelfMap map = affine_path_map(2, 1);
  TreeFunction f = power_function(mu);
  PowerEigenResult out{check_eigenpair(map, lambda, f, depth, std::string(keys::kPathPowerEigenfunction), tol), mu,
                       decay_profile(f, map.model(), depth)};
  return out;
}

std::string to_string(ResolventCase c) {
  switch (c) {
    case ResolventCase::InsideDisk: return "case1";
    case ResolventCase::OutsideDisk: return "case2";
    case ResolventCase::FinitePreimages: return "case3";
  }
  return "case1";
}

namespace {

// First n <= horizon with phi^n(x) = w; nullopt when not hit. `never` is
// set when a miss is proven (growth escape or a cycle avoiding w).
std::optional<std::size_t> first_hit(const SelfMap& map, const VertexPath& x, const VertexPath& w,
                                     std::size_t horizon, bool* never = nullptr) {
  auto growth = map.facts().growth_threshold;
  VertexPath cur = x;
  std::unordered_set<VertexPath, VertexPathHash> seen;
  for (std::size_t t = 0; t <= horizon; ++t) {
    if (cur == w) return t;
    if (growth && cur.length() >= *growth && cur.length() > w.length()) {
      if (never) *never = true;
      return std::nullopt;
    }
    if (!seen.insert(cur).second) {
      if (never) *never = true;
      return std::nullopt;
    }
    cur = map(cur);
  }
  if (never) *never = false;
  return std::nullopt;
}

}  // namespace

ResolventSolution resolvent_solution(const SelfMap& map, const VertexPath& w, const Scalar& lambda,
                                     ResolventCase mode, std::size_t depth, std::size_t horizon, double tol) {
  map.model().validate(w);
  ResolventSolution out{mode, zero_function(), "", depth, horizon, Magnitude(), false, "n/a", std::nullopt,
                        std::nullopt};
  Magnitude r = lambda.abs();

  if (mode == ResolventCase::InsideDisk) {
    if (!(r < kOne)) throw PreconditionError("case1 needs |lambda| < 1");
    require_injective(map, depth, "resolvent case1");
    auto scan = scan_for(map, depth, w);
    auto table = forward_orbit(map, w, 1, std::max(scan.max_length, depth), horizon);
    out.f = orbit_function("resolvent1(w=" + w.to_string() + ")", table, lambda, 1);
    out.theorem_key = std::string(keys::kDenseRangeInsideDisk);
  } else {
    if (mode == ResolventCase::OutsideDisk && !(kOne < r)) throw PreconditionError("case2 needs |lambda| > 1");
    if (mode == ResolventCase::FinitePreimages && lambda.is_zero()) throw PreconditionError("case3 needs lambda != 0");

    // Period of w, if w lies on a cycle reached within the horizon.
    if (auto p = first_hit(map, map(w), w, horizon)) out.period = *p + 1;
    if (out.period && mode == ResolventCase::FinitePreimages) {
      throw PreconditionError("case3 needs phi^-N({w}) empty for some N, but " + w.to_string() +
                              " is periodic with period " + std::to_string(*out.period));
    }

    std::size_t max_hit = 0;
    Truncation(map.model(), depth).for_each([&](const VertexPath& v) {
      if (auto t = first_hit(map, v, w, horizon)) max_hit = std::max(max_hit, *t);
    });
    auto growth = map.facts().growth_threshold;
    bool proven = growth && depth >= std::max(w.length(), *growth);
    out.emptiness = proven ? "proven-by-metadata" : "not-found-within-horizon";
    if (!out.period) out.chain_length = max_hit + 1;

    std::size_t limit = horizon;
    if (mode == ResolventCase::FinitePreimages) {
      if (*out.chain_length > horizon) {
        throw PreconditionError("case3: preimage chains of " + w.to_string() + " persist beyond the horizon " +
                                std::to_string(horizon));
      }
      limit = *out.chain_length - 1;
    }
    Scalar scale(1);
    if (out.period) scale = Scalar(1) / (Scalar(1) - Scalar(1) / lambda.pow(static_cast<long>(*out.period)));
    auto shared_map = map;
    out.f = TreeFunction("resolvent" + std::string(mode == ResolventCase::OutsideDisk ? "2" : "3") +
                             "(w=" + w.to_string() + ")",
                         [shared_map, w, lambda, limit, scale](const VertexPath& x) -> Scalar {
                           auto t = first_hit(shared_map, x, w, limit);
                           if (!t) return Scalar(0);
                           return -(scale / lambda.pow(static_cast<long>(*t + 1)));
                         });
    out.theorem_key = std::string(mode == ResolventCase::OutsideDisk ? keys::kDenseRangeOutsideDisk
                                                                     : keys::kDenseRangeFinitePreimages);
  }

  bool exact = lambda.exact();
  TreeFunction chi = indicator(w);
  Truncation(map.model(), depth).for_each([&](const VertexPath& v) {
    Scalar d = out.f(map.apply_checked(v)) - lambda * out.f(v) - chi(v);
    exact = exact && d.exact();
    out.max_defect = max(out.max_defect, d.abs());
  });
  out.verified = within(out.max_defect, exact, tol);
  if (!out.verified) {
    throw HorizonExhausted("(C_phi - lambda) f - chi_w is nonzero on the truncation (max " +
                           out.max_defect.to_string() + "); orbits or preimage chains outlast horizon " +
                           std::to_string(horizon));
  }
  return out;
}

SpectralProbeReport point_spectrum_disk(const SelfMap& map, std::size_t depth, SpectralProbeOptions options) {
  SpectralProbeReport out;
  out.depth = depth;
  const MapFacts& facts = map.facts();
  auto est = lipschitz_number(map, std::max<std::size_t>(depth, 1));
  auto bound = facts.certified_lipschitz_bound();
  out.disk_radius = Magnitude::of_rational(Rational(static_cast<unsigned long>(bound ? *bound : est.value)));
  out.disk_radius_certified = bound.has_value();

  if (facts.constant_value) {
    out.constant_map_special = std::vector<Scalar>{Scalar(0), Scalar(1)};
    out.compression_notes.push_back({std::string(keys::kConstantMapSpectrum), "phi is constant: point spectrum {0, 1}"});
  } else {
    out.compression_notes.push_back({std::string(keys::kPointSpectrumDisk),
                                     "point spectrum inside the closed disk of radius " + out.disk_radius.to_string() +
                                         (out.disk_radius_certified ? "" : " (truncated estimate)")});
  }

  std::unordered_set<VertexPath, VertexPathHash> images;
  scan_images(map, depth, [&](const VertexPath&, const VertexPath& image, const VertexPath*) { images.insert(image); });
  Truncation(map.model(), depth).for_each([&](const VertexPath& v) {
    if (!out.non_image_vertex && !images.count(v)) out.non_image_vertex = v;
  });
  if (out.non_image_vertex) {
    out.zero_eigen = true;
    const auto& w = *out.non_image_vertex;
    auto growth = facts.growth_threshold;
    out.non_image_certified = facts.constant_value.has_value() || (growth && depth >= std::max(w.length(), *growth));
    out.compression_notes.push_back({std::string(keys::kNonSurjectiveZero),
                                     w.to_string() + " is not an image" +
                                         (out.non_image_certified ? "" : " within the truncation") +
                                         ": C_phi chi_w = 0, so 0 is an eigenvalue"});
  }

  out.injectivity_collision = first_image_collision(map, depth);
  if (out.injectivity_collision || (facts.injective && !*facts.injective)) {
    std::string why = out.injectivity_collision ? out.injectivity_collision->first.to_string() + " and " +
                                                      out.injectivity_collision->second.to_string() + " share an image"
                                                : "phi is declared non-injective";
    out.compression_notes.push_back(
        {std::string(keys::kNoninjectiveNotDenseRange), why + ": C_phi lacks dense range, 0 in sigma_c"});
  } else if (facts.injective.value_or(false)) {
    out.compression_notes.push_back({std::string(keys::kDenseRangeInsideDisk),
                                     "phi injective: C_phi - lambda has dense range for |lambda| < 1"});
    out.compression_notes.push_back(
        {std::string(keys::kInjectiveApproximateSpectrum),
         "phi injective: sigma_c inside the unit circle and sigma(C_phi) = sigma_ap(C_phi)"});
  }
  out.compression_notes.push_back(
      {std::string(keys::kDenseRangeOutsideDisk), "C_phi - lambda has dense range for every |lambda| > 1"});

  for (std::size_t n = 1; n <= options.max_power; ++n) {
    SelfMap it = iterate(map, n);
    std::size_t r0 = apply_power(map, VertexPath{}, n).length() + 1;
    auto lam = it.facts().certified_lipschitz_bound();
    bool certified = lam.has_value();
    std::uint64_t value = certified ? *lam : lipschitz_number(it, std::max<std::size_t>(options.iterate_depth, 1)).value;
    std::uint64_t top = std::max<std::uint64_t>(r0, value);
    out.spectral_radius_upper_sequence.push_back(
        {n, Magnitude::of_rational(Rational(static_cast<unsigned long>(top))).root(static_cast<unsigned>(n)),
         certified});
  }
  return out;
}

}  // namespace treelip
