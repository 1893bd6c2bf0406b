#pragma once

// Brute-force reference implementations. Deliberately naive and independent
// of the treelip sources: only the standard library and GMP.

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

// Vertex 0 is the root; parent[0] == -1; every other parent index is smaller
// than the child index.
struct FiniteTree {
  std::vector<int> parent;
  int root = 0;

  std::size_t size() const { return parent.size(); }
  // Connected, acyclic, parent-consistent.
  bool valid() const;
  std::vector<std::vector<int>> children() const;
  // Child-index path from the root, children ordered by vertex index.
  std::vector<std::vector<std::uint32_t>> paths() const;
};

FiniteTree path_tree(std::size_t n);
FiniteTree star_tree(std::size_t leaves);

// Edge count of a shortest u-v path by breadth-first search.
std::size_t bfs_distance(const FiniteTree& t, int u, int v);

struct Complex {
  mpq_class re = 0;
  mpq_class im = 0;
};

// Square of max(|f(root)|, max |f(v) - f(parent v)|).
mpq_class brute_lip_norm_squared(const FiniteTree& t, const std::vector<Complex>& f);
// Real-valued form: the norm itself.
mpq_class brute_lip_norm(const FiniteTree& t, const std::vector<mpq_class>& f);

// Every rooted tree with exactly n vertices, one per isomorphism class, via
// canonical level sequences. n <= 12.
void enumerate_small_trees(std::size_t n, const std::function<void(const FiniteTree&)>& visit);
std::vector<FiniteTree> small_trees(std::size_t n);

// Rooted-tree counts 1, 1, 2, 4, 9, ... by the Euler transform recurrence.
std::vector<std::uint64_t> rooted_tree_counts(std::size_t max_n);

using Path = std::vector<std::uint32_t>;
using PathMap = std::function<Path(const Path&)>;

// {1 <= j <= horizon : phi^j(K) meets K}, recomputing phi^j from scratch
// for each j.
std::set<std::size_t> brute_run_away(const PathMap& phi, const std::vector<Path>& K, std::size_t horizon);

}  // namespace oracle
