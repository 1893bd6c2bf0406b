#include <random>

#include "doctest.h"
#include "treelip/comp_op.hpp"
#include "treelip/dynamics.hpp"
#include "treelip/lip.hpp"

using namespace treelip;

namespace {

Rational random_rational(std::mt19937& rng) {
  std::uniform_int_distribution<int> num(-12, 12);
  std::uniform_int_distribution<int> den(1, 6);
  Rational q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

Scalar random_scalar(std::mt19937& rng) { return Scalar(random_rational(rng), random_rational(rng)); }

VertexPath random_vertex(std::mt19937& rng, const TreeModel& model, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::vector<VertexPath::Index> idx;
  for (std::size_t n = len(rng); n > 0; --n) {
    std::uniform_int_distribution<VertexPath::Index> child(0, model.arity(VertexPath(idx)) - 1);
    idx.push_back(child(rng));
  }
  return VertexPath(std::move(idx));
}

// Random function supported on the truncation at `depth`.
TreeFunction random_function(std::mt19937& rng, const TreeModel& model, std::size_t depth) {
  std::map<VertexPath, Scalar> table;
  std::bernoulli_distribution keep(0.6);
  Truncation(model, depth).for_each([&](const VertexPath& v) {
    if (keep(rng)) table[v] = random_scalar(rng);
  });
  return table_function(std::move(table));
}

SelfMap random_affine(std::mt19937& rng) {
  std::uniform_int_distribution<std::int64_t> a(1, 3);
  std::uniform_int_distribution<std::int64_t> b(0, 3);
  return affine_path_map(a(rng), b(rng));
}

}  // namespace

TEST_CASE("distance is a tree metric") {
  std::mt19937 rng(1);
  auto model = homogeneous_tree(3);
  for (int trial = 0; trial < 500; ++trial) {
    auto u = random_vertex(rng, model, 7);
    auto v = random_vertex(rng, model, 7);
    auto w = random_vertex(rng, model, 7);
    CHECK(distance(u, v) == distance(v, u));
    CHECK((distance(u, v) == 0) == (u == v));
    CHECK(distance(u, w) <= distance(u, v) + distance(v, w));
    CHECK(distance(u, v) == u.length() + v.length() - 2 * common_prefix_length(u, v));
    // four-point condition
    auto x = random_vertex(rng, model, 7);
    std::array<std::size_t, 3> s{distance(u, v) + distance(w, x), distance(u, w) + distance(v, x),
                                 distance(u, x) + distance(v, w)};
    std::sort(s.begin(), s.end());
    CHECK(s[1] == s[2]);
  }
}

TEST_CASE("scalar arithmetic is an exact field") {
  std::mt19937 rng(2);
  for (int trial = 0; trial < 300; ++trial) {
    auto a = random_scalar(rng);
    auto b = random_scalar(rng);
    auto c = random_scalar(rng);
    CHECK(a * (b + c) == a * b + a * c);
    CHECK((a + b) - b == a);
    if (!b.is_zero()) CHECK((a / b) * b == a);
    CHECK((a * b).abs() == a.abs() * b.abs());
    CHECK(Scalar::parse(a.to_string()) == a);
  }
}

TEST_CASE("composition is linear for random data") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    auto phi = trial % 2 == 0 ? random_affine(rng) : comb_map();
    const auto& model = phi.model();
    auto f = random_function(rng, model, 5);
    auto g = random_function(rng, model, 5);
    auto a = random_scalar(rng);
    auto b = random_scalar(rng);
    auto lhs = compose(phi, a * f + b * g);
    auto rhs = a * compose(phi, f) + b * compose(phi, g);
    Truncation(model, 6).for_each([&](const VertexPath& v) { CHECK(lhs(v) == rhs(v)); });
  }
}

TEST_CASE("operator norm upper bound holds on random finitely supported functions") {
  std::mt19937 rng(4);
  for (int trial = 0; trial < 60; ++trial) {
    auto phi = random_affine(rng);
    auto nb = norm_bounds(phi, 12, {.witness_radius = 2});
    REQUIRE(nb.upper_certified);
    CHECK(nb.lower <= nb.best.ratio);
    CHECK(nb.best.ratio <= nb.upper);
    auto f = random_function(rng, path_tree(), 6);
    auto norm = lip_norm(f, path_tree(), 7).value;
    // f o phi vanishes beyond level 6 because phi does not decrease length.
    auto image = lip_norm(compose(phi, f), path_tree(), 7).value;
    CHECK(image <= nb.upper * norm);
  }
}

TEST_CASE("run away counts stay below k^2 - k without periodic points") {
  std::mt19937 rng(5);
  std::uniform_int_distribution<std::size_t> size(1, 6);
  for (int trial = 0; trial < 200; ++trial) {
    auto phi = trial % 3 == 0 ? comb_map() : random_affine(rng);
    // b = 0 fixes 0, and the bound needs a map without periodic points.
    if (phi.spec().params.count("b") && phi.spec().params.at("b") == "0") continue;
    std::vector<VertexPath> K;
    for (std::size_t n = size(rng); K.size() < n;) {
      auto v = random_vertex(rng, phi.model(), 10);
      if (std::find(K.begin(), K.end(), v) == K.end()) K.push_back(v);
    }
    auto k = K.size();
    CHECK(run_away_scan(phi, K, 64).size() <= k * k - k);
  }
}

TEST_CASE("tent functions have norm at most 1/m and pull back to indicators") {
  std::mt19937 rng(6);
  std::uniform_int_distribution<std::size_t> power(1, 4);
  std::uniform_int_distribution<std::size_t> start(0, 4);
  auto phi = affine_path_map(2, 1);
  for (int trial = 0; trial < 30; ++trial) {
    auto n = power(rng);
    auto v = path_vertex(start(rng));
    auto m = separation_m(phi, n, v, 8).value();
    auto tent = tent_function(phi, n, v, m);
    auto depth = path_index(apply_power(phi, v, n)) + m + 1;
    CHECK(lip_norm(tent, path_tree(), depth).value <= Magnitude::of_rational(Rational(1, static_cast<long>(m))));
    auto pulled = compose(iterate(phi, n), tent);
    for (std::size_t k = 0; k < 12; ++k) CHECK(pulled(path_vertex(k)) == Scalar(path_vertex(k) == v ? 1 : 0));
  }
}

TEST_CASE("backward maps invert the weighted forward map") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<std::size_t> power(1, 3);
  for (int trial = 0; trial < 30; ++trial) {
    auto phi = trial % 2 == 0 ? random_affine(rng) : comb_map();
    auto lambda = random_scalar(rng);
    if (lambda.is_zero()) continue;
    auto n = power(rng);
    auto f = random_function(rng, phi.model(), 3);
    auto b = backward_geometric(phi, n, lambda, f, 40);
    auto g = lambda.pow(static_cast<long>(n)) * compose(iterate(phi, n), b);
    Truncation(phi.model(), 3).for_each([&](const VertexPath& v) { CHECK(g(v) == f(v)); });
  }
}

TEST_CASE("lipschitz number of an iterate is submultiplicative") {
  std::mt19937 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    auto phi = trial % 2 == 0 ? random_affine(rng) : comb_map();
    auto one = lipschitz_number(phi, 8).value;
    auto two = lipschitz_number(iterate(phi, 2), 6).value;
    CHECK(two <= one * one);
  }
}
