// One PASS/FAIL line per acceptance criterion; exit status 1 when any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "treelip/comp_op.hpp"
#include "treelip/dynamics.hpp"
#include "treelip/lip.hpp"
#include "treelip/spectra.hpp"
#include "treelip/theorem_keys.hpp"

using namespace treelip;

namespace {

// scale multiplies every depth and horizon; signature collects the exact
// values and verdicts that must not move when scale doubles.
struct Run {
  std::size_t scale = 1;
  bool pass = true;
  std::ostringstream signature;
  std::string failure;

  void expect(bool ok, const std::string& what) {
    if (!ok && pass) failure = what;
    pass = pass && ok;
  }
  template <class T>
  void record(const std::string& name, const T& value) {
    signature << name << '=' << value << ';';
  }
};

Magnitude mag(const Rational& r) { return Magnitude::of_rational(r); }

VertexPath to_vertex(const std::vector<std::uint32_t>& p) {
  return VertexPath(std::vector<VertexPath::Index>(p.begin(), p.end()));
}

oracle::Path to_path(const VertexPath& v) { return oracle::Path(v.indices().begin(), v.indices().end()); }

void criterion1(Run& r) {
  auto nb = norm_bounds(affine_path_map(2, 0, true), 16 * r.scale);
  r.expect(nb.lower == mag(1), "lower != 1");
  r.expect(nb.upper == mag(2) && nb.upper_certified, "upper != 2");
  r.expect(nb.best.ratio == mag(2) && nb.best.image_norm_exact, "best ratio != 2 exactly");
  std::vector<Scalar> bump;
  for (std::size_t k = 0; k < 8; ++k) bump.push_back(nb.best.f(path_vertex(k)));
  r.expect(bump == std::vector<Scalar>{0, 1, 2, 1, 0, 0, 0, 0}, "witness is not (0,1,2,1,0,...)");
  r.record("lower", nb.lower.to_string());
  r.record("upper", nb.upper.to_string());
  r.record("ratio", nb.best.ratio.to_string());
}

void criterion2(Run& r) {
  auto phi = constant_map(path_tree(), path_vertex(3));
  auto depth = 16 * r.scale;
  auto nb = norm_bounds(phi, depth);
  r.expect(nb.lower == mag(4) && nb.upper == mag(4), "bounds are not 4/4");
  auto g = norm_tent(3);
  auto g_norm = lip_norm(g, path_tree(), depth).value;
  auto image = lip_norm(compose(phi, g), path_tree(), depth).value;
  r.expect(g_norm == mag(1) && image == mag(4), "tent witness ratio is not 4");
  r.expect(nb.best.ratio == mag(4), "search ratio is not 4");
  r.record("lower", nb.lower.to_string());
  r.record("upper", nb.upper.to_string());
  r.record("witness", image.to_string());
}

void criterion3(Run& r) {
  auto rep = point_spectrum_disk(affine_path_map(2, 1), 8 * r.scale, {.max_power = 16, .iterate_depth = 8 * r.scale});
  r.expect(rep.spectral_radius_upper_sequence.size() == 16, "sequence length != 16");
  for (const auto& t : rep.spectral_radius_upper_sequence) {
    r.expect(t.value == mag(2), "term " + std::to_string(t.n) + " != 2");
    r.record("r" + std::to_string(t.n), t.value.to_string());
  }
}

void criterion4(Run& r) {
  std::size_t depth = (std::size_t{1} << 12) * r.scale;
  for (const auto& lambda :
       {Scalar(Rational(3, 2)), Scalar::approx({std::sqrt(2.0), 0.0}), Scalar(Rational(1), Rational(1, 2))}) {
    auto res = power_eigenfunction_path_tree(lambda, depth);
    r.expect(res.pair.accepted && res.pair.residual.to_double() <= 1e-9,
             "residual too large for lambda = " + lambda.to_string());
    r.expect(res.decay.size() >= 1024, "decay profile shorter than 1024");
    for (std::size_t k = res.decay.size() - 1023; k < res.decay.size(); ++k) {
      r.expect(res.decay[k] < res.decay[k - 1], "decay not strictly decreasing for lambda = " + lambda.to_string());
    }
    r.record("accepted", res.pair.accepted);
  }
}

void criterion5(Run& r) {
  auto shift = affine_path_map(1, 1);
  for (const auto& lambda : {Scalar(0), Scalar(Rational(1, 2)), Scalar(Rational(-1, 3)), Scalar(Rational(0), Rational(1, 2))}) {
    auto p = geometric_eigenfunction(shift, path_vertex(0), lambda, 256 * r.scale);
    r.expect(p.accepted && p.residual.is_zero(), "nonzero residual for lambda = " + lambda.to_string());
    r.record("residual", p.residual.to_string());
  }
}

// max |f(phi(v)) - lambda f(v) - chi_w(v)| over the truncation.
Magnitude resolvent_defect(const SelfMap& map, const TreeFunction& f, const Scalar& lambda, const VertexPath& w,
                           std::size_t depth) {
  Magnitude worst;
  Truncation(map.model(), depth).for_each([&](const VertexPath& v) {
    worst = max(worst, (f(map(v)) - lambda * f(v) - Scalar(v == w ? 1 : 0)).abs());
  });
  return worst;
}

void criterion6(Run& r) {
  auto shift = affine_path_map(1, 1);
  auto example = affine_path_map(2, 1);
  struct Case {
    const SelfMap* map;
    VertexPath w;
    Scalar lambda;
    ResolventCase mode;
  };
  std::vector<Case> cases{
      {&shift, path_vertex(0), Scalar(Rational(1, 2)), ResolventCase::InsideDisk},
      {&example, path_vertex(2), Scalar(Rational(-1, 3)), ResolventCase::InsideDisk},
      {&shift, path_vertex(5), Scalar(2), ResolventCase::OutsideDisk},
      {&example, path_vertex(7), Scalar(Rational(3), Rational(1)), ResolventCase::OutsideDisk},
      {&shift, path_vertex(5), Scalar(2), ResolventCase::FinitePreimages},
      {&example, path_vertex(15), Scalar(Rational(1, 2)), ResolventCase::FinitePreimages},
  };
  std::size_t depth = 32 * r.scale;
  for (const auto& c : cases) {
    auto sol = resolvent_solution(*c.map, c.w, c.lambda, c.mode, depth, 64 * r.scale);
    auto d = resolvent_defect(*c.map, sol.f, c.lambda, c.w, depth);
    r.expect(sol.verified && d.is_zero(), "nonzero defect in case " + to_string(c.mode));
    r.record(to_string(c.mode), d.to_string());
  }
}

void criterion7(Run& r) {
  auto g = harmonic_function();
  auto a = finite_support_approx(g, Scalar(Rational(1, 2)), path_tree(), 16 * r.scale);
  r.expect(a.n == 5 && a.m == 10, "N, M != 5, 10");
  for (std::size_t k = 15; k <= 64; ++k) r.expect(a.f(path_vertex(k)).is_zero(), "support exceeds depth 15");
  std::size_t depth = 32 * r.scale;
  auto t = oracle::path_tree(depth + 1);
  std::vector<mpq_class> diff;
  for (std::size_t k = 0; k <= depth; ++k) {
    auto d = g(path_vertex(k)) - a.f(path_vertex(k));
    r.expect(d.exact() && d.im() == 0, "difference is not an exact real");
    diff.push_back(d.re());
  }
  auto norm = oracle::brute_lip_norm(t, diff);
  r.expect(norm <= mpq_class(1, 2), "brute norm of g - f exceeds 1/2");
  r.record("n", a.n);
  r.record("m", a.m);
}

void criterion8(Run& r) {
  std::mt19937 rng(8);
  std::uniform_int_distribution<int> size(1, 6);
  std::uniform_int_distribution<std::size_t> index(0, 64);
  std::size_t horizon = 64 * r.scale;
  auto example = affine_path_map(2, 1);
  auto shift = affine_path_map(1, 1);
  std::size_t worst = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto& phi = trial % 2 == 0 ? example : shift;
    std::size_t a = trial % 2 == 0 ? 2 : 1;
    std::vector<VertexPath> K;
    std::vector<oracle::Path> Kp;
    for (int n = size(rng); static_cast<int>(K.size()) < n;) {
      auto v = path_vertex(index(rng));
      if (std::find(K.begin(), K.end(), v) != K.end()) continue;
      K.push_back(v);
      Kp.push_back(to_path(v));
    }
    // Integer form of m -> a*m + 1. Lengths past 4096 (beyond every member
    // of K) collapse to the absorbing off-path vertex [1].
    oracle::PathMap brute = [a](const oracle::Path& p) {
      if (p == oracle::Path{1}) return p;
      std::size_t image = a * p.size() + 1;
      return image > 4096 ? oracle::Path{1} : oracle::Path(image, 0);
    };
    auto scan = run_away_scan(phi, K, horizon);
    auto k = K.size();
    r.expect(scan.size() <= k * k - k, "run-away count exceeds k^2 - k");
    r.expect(scan == oracle::brute_run_away(brute, Kp, horizon), "scan differs from brute force");
    worst = std::max(worst, scan.size());
  }
  r.record("worst", worst);
}

void criterion9(Run& r) {
  auto comb = comb_map();
  std::mt19937 rng(9);
  std::uniform_int_distribution<std::size_t> spine(0, 10);
  std::uniform_int_distribution<std::size_t> ray(1, 5);
  std::bernoulli_distribution on_spine(0.5);
  for (int s = 0; s < 20; ++s) {
    auto k = spine(rng);
    auto v = on_spine(rng) ? comb_spine(k) : comb_ray(k - k % 2, ray(rng));
    auto p = preimage_times(comb, v, 16 * r.scale, 64 * r.scale);
    r.expect(p.assessment == PreimageAssessment::ProvablyFinite, "preimage times not certified finite");
    r.record("times" + v.to_string(), p.times.size());
  }
  std::size_t depth = 12 * r.scale;
  auto g = growth_check(comb, depth);
  r.expect(!g.holds, "growth check holds on the comb");
  for (std::size_t v = 1; v <= depth; v += 2) {
    r.expect(std::find(g.failures.begin(), g.failures.end(), comb_spine(v)) != g.failures.end(),
             "odd spine vertex " + std::to_string(v) + " not a growth failure");
  }
  auto sep = weighted_separation(comb, Scalar(1), comb_spine(1), 100 * r.scale);
  r.expect(sep.terms.size() == 100 * r.scale, "separation sequence truncated");
  for (const auto& t : sep.terms) r.expect(t == mag(1), "weighted separation not constantly 1");
  DynamicsBudgets b;
  b.depth *= r.scale;
  b.horizon *= r.scale;
  auto one = hypercyclicity_report(comb, Scalar(1), b);
  auto two = hypercyclicity_report(comb, Scalar(2), b);
  r.expect(one.verdict == HypercyclicityVerdict::NotHypercyclicCertified, "lambda = 1 is not NotHypercyclic");
  r.expect(two.verdict == HypercyclicityVerdict::MixingCertified, "lambda = 2 is not Mixing");
  r.record("lambda1", to_string(one.verdict));
  r.record("lambda2", to_string(two.verdict));
}

void criterion10(Run& r) {
  auto phi = affine_path_map(2, 1);
  std::size_t depth = 12 * r.scale;
  for (std::size_t n = 1; n <= 10; ++n) {
    Rational bound(1, static_cast<unsigned long>(std::uint64_t{1} << n));
    for (std::size_t k = 0; k <= 3; ++k) {
      auto v = path_vertex(k);
      auto m = separation_m(phi, n, v, depth);
      r.expect(m.value() == (std::uint64_t{1} << n) && m.upper == m.value(), "m(n,v) != 2^n");
      auto tent = tent_function(phi, n, v, m.value());
      auto centre = path_index(apply_power(phi, v, n));
      r.expect(lip_norm(tent, path_tree(), centre + m.value() + 1).value <= mag(bound), "tent norm exceeds c/2^n");
      auto pulled = compose(iterate(phi, n), tent);
      for (std::size_t j = 0; j <= depth; ++j) {
        r.expect(pulled(path_vertex(j)) == Scalar(j == k ? 1 : 0), "pullback is not chi_v");
      }
      r.record("m" + std::to_string(n) + "_" + std::to_string(k), m.value());
    }
  }
  DynamicsBudgets b;
  b.depth *= r.scale;
  b.horizon *= r.scale;
  auto rep = hypercyclicity_report(phi, Scalar(1), b);
  r.expect(rep.verdict == HypercyclicityVerdict::MixingCertified, "lambda = 1 is not Mixing");
  r.expect(rep.table && rep.table->c == std::optional<std::uint64_t>(1), "c != 1");
  r.record("verdict", to_string(rep.verdict));
}

TreeModel model_of(const oracle::FiniteTree& t) {
  std::map<VertexPath, std::uint32_t> table;
  auto kids = t.children();
  auto paths = t.paths();
  for (std::size_t v = 0; v < t.size(); ++v) {
    if (!kids[v].empty()) table[to_vertex(paths[v])] = static_cast<std::uint32_t>(kids[v].size());
  }
  return custom_table_tree(std::move(table), 1);
}

void criterion11(Run& r) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> num(-20, 20);
  std::uniform_int_distribution<int> den(1, 9);
  auto rational = [&] {
    mpq_class q(num(rng), den(rng));
    q.canonicalize();
    return q;
  };
  std::size_t trees = 0;
  for (std::size_t n = 1; n <= 12; ++n) {
    oracle::enumerate_small_trees(n, [&](const oracle::FiniteTree& t) {
      ++trees;
      auto paths = t.paths();
      std::vector<VertexPath> vs;
      std::size_t height = 0;
      for (const auto& p : paths) {
        vs.push_back(to_vertex(p));
        height = std::max(height, p.size());
      }
      for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = 0; v < n; ++v) {
          if (distance(vs[u], vs[v]) != oracle::bfs_distance(t, static_cast<int>(u), static_cast<int>(v))) {
            r.expect(false, "distance mismatch");
          }
        }
      }
      auto model = model_of(t);
      for (int trial = 0; trial < 50; ++trial) {
        std::vector<oracle::Complex> f(n);
        std::map<VertexPath, Scalar> table;
        for (std::size_t v = 0; v < n; ++v) {
          f[v] = {rational(), rational()};
          table[vs[v]] = Scalar(f[v].re, f[v].im);
        }
        // Constant down the infinite ray below each leaf, so increments
        // beyond the finite tree vanish.
        TreeFunction ext("extended", [&table](const VertexPath& v) {
          std::vector<VertexPath::Index> idx(v.indices().begin(), v.indices().end());
          while (true) {
            if (auto it = table.find(VertexPath(idx)); it != table.end()) return it->second;
            idx.pop_back();
          }
        });
        auto got = lip_norm(ext, model, height).value;
        if (!got.exact() || got.square() != oracle::brute_lip_norm_squared(t, f)) r.expect(false, "lip norm mismatch");
      }
    });
  }
  r.expect(trees == 7813, "enumerated " + std::to_string(trees) + " trees, expected 7813");
}

struct Criterion {
  int id;
  const char* name;
  std::function<void(Run&)> body;
  double limit_seconds;  // 0 means no limit
};

}  // namespace

int main() {
  std::vector<Criterion> criteria{
      {1, "operator norm sharp example", criterion1, 1.0},
      {2, "constant map norm", criterion2, 0},
      {3, "spectral radius of the doubling-plus-one map", criterion3, 1.0},
      {4, "power eigenfamily", criterion4, 5.0},
      {5, "geometric eigenfunctions", criterion5, 0},
      {6, "resolvent identities", criterion6, 0},
      {7, "finite support density", criterion7, 0},
      {8, "run-away bound", criterion8, 0},
      {9, "comb tree strictness", criterion9, 5.0},
      {10, "mixing certificate by separation tents", criterion10, 0},
      {11, "oracle equivalence", criterion11, 60.0},
  };
  bool all = true;
  std::vector<std::string> base_signatures(criteria.size());
  auto report = [&](int id, const char* name, bool pass, double seconds, const std::string& detail) {
    std::printf("criterion %2d %-4s %s (%.3fs)%s%s\n", id, pass ? "PASS" : "FAIL", name, seconds,
                detail.empty() ? "" : ": ", detail.c_str());
    std::fflush(stdout);
    all = all && pass;
  };
  auto run_one = [](const Criterion& c, std::size_t scale, double& seconds) {
    Run r;
    r.scale = scale;
    auto start = std::chrono::steady_clock::now();
    try {
      c.body(r);
    } catch (const std::exception& e) {
      r.expect(false, std::string("threw: ") + e.what());
    }
    seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0 && seconds > c.limit_seconds) {
      r.expect(false, "runtime exceeds " + std::to_string(c.limit_seconds) + "s");
    }
    return r;
  };
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    double seconds = 0;
    auto r = run_one(criteria[i], 1, seconds);
    base_signatures[i] = r.signature.str();
    report(criteria[i].id, criteria[i].name, r.pass, seconds, r.failure);
  }

  // Criterion 12: criteria 1-10 again with doubled depth and horizon.
  auto start = std::chrono::steady_clock::now();
  bool stable = true;
  std::string detail;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (criteria[i].id > 10) continue;
    Criterion doubled = criteria[i];
    doubled.limit_seconds = 0;
    double seconds = 0;
    auto r = run_one(doubled, 2, seconds);
    if (!r.pass || r.signature.str() != base_signatures[i]) {
      if (stable) {
        detail = "criterion " + std::to_string(criteria[i].id) + " " + (r.pass ? "changed a value" : r.failure);
      }
      stable = false;
    }
  }
  report(12, "verdict stability under doubled budgets", stable,
         std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), detail);
  return all ? 0 : 1;
}
