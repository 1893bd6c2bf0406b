#include "oracle.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace oracle {

bool FiniteTree::valid() const {
  if (parent.empty() || parent[0] != -1 || root != 0) return false;
  for (std::size_t v = 1; v < parent.size(); ++v) {
    if (parent[v] < 0 || static_cast<std::size_t>(parent[v]) >= v) return false;
  }
  return true;
}

std::vector<std::vector<int>> FiniteTree::children() const {
  std::vector<std::vector<int>> out(parent.size());
  for (std::size_t v = 1; v < parent.size(); ++v) out[parent[v]].push_back(static_cast<int>(v));
  return out;
}

std::vector<std::vector<std::uint32_t>> FiniteTree::paths() const {
  std::vector<std::vector<std::uint32_t>> out(parent.size());
  auto kids = children();
  for (std::size_t v = 0; v < parent.size(); ++v) {
    for (std::size_t i = 0; i < kids[v].size(); ++i) {
      out[kids[v][i]] = out[v];
      out[kids[v][i]].push_back(static_cast<std::uint32_t>(i));
    }
  }
  return out;
}

FiniteTree path_tree(std::size_t n) {
  FiniteTree t;
  for (std::size_t v = 0; v < n; ++v) t.parent.push_back(static_cast<int>(v) - 1);
  return t;
}

FiniteTree star_tree(std::size_t leaves) {
  FiniteTree t;
  t.parent.push_back(-1);
  for (std::size_t i = 0; i < leaves; ++i) t.parent.push_back(0);
  return t;
}

std::size_t bfs_distance(const FiniteTree& t, int u, int v) {
  std::vector<std::vector<int>> adj(t.size());
  for (std::size_t w = 1; w < t.size(); ++w) {
    adj[w].push_back(t.parent[w]);
    adj[t.parent[w]].push_back(static_cast<int>(w));
  }
  std::vector<long> dist(t.size(), -1);
  std::deque<int> queue{u};
  dist[u] = 0;
  while (!queue.empty()) {
    int x = queue.front();
    queue.pop_front();
    if (x == v) return static_cast<std::size_t>(dist[x]);
    for (int y : adj[x]) {
      if (dist[y] < 0) {
        dist[y] = dist[x] + 1;
        queue.push_back(y);
      }
    }
  }
  throw std::logic_error("bfs_distance: disconnected tree");
}

mpq_class brute_lip_norm_squared(const FiniteTree& t, const std::vector<Complex>& f) {
  auto sq = [](const mpq_class& a, const mpq_class& b) -> mpq_class { return a * a + b * b; };
  mpq_class best = sq(f[0].re, f[0].im);
  for (std::size_t v = 1; v < t.size(); ++v) {
    const auto& p = f[t.parent[v]];
    mpq_class d = sq(f[v].re - p.re, f[v].im - p.im);
    if (d > best) best = d;
  }
  return best;
}

mpq_class brute_lip_norm(const FiniteTree& t, const std::vector<mpq_class>& f) {
  mpq_class best = abs(f[0]);
  for (std::size_t v = 1; v < t.size(); ++v) {
    mpq_class d = abs(f[v] - f[t.parent[v]]);
    if (d > best) best = d;
  }
  return best;
}

namespace {

FiniteTree from_levels(const std::vector<int>& levels) {
  FiniteTree t;
  std::vector<int> last_at_level(levels.size() + 1, -1);
  for (std::size_t i = 0; i < levels.size(); ++i) {
    t.parent.push_back(levels[i] == 0 ? -1 : last_at_level[levels[i] - 1]);
    last_at_level[levels[i]] = static_cast<int>(i);
  }
  return t;
}

}  // namespace

// Beyer-Hedetniemi successor on canonical level sequences.
void enumerate_small_trees(std::size_t n, const std::function<void(const FiniteTree&)>& visit) {
  if (n == 0) return;
  if (n > 12) throw std::invalid_argument("enumerate_small_trees: n <= 12");
  std::vector<int> L(n);
  for (std::size_t i = 0; i < n; ++i) L[i] = static_cast<int>(i);
  while (true) {
    visit(from_levels(L));
    long p = static_cast<long>(n) - 1;
    while (p > 0 && L[p] == 1) --p;
    if (p <= 0) return;
    long q = p - 1;
    while (L[q] != L[p] - 1) --q;
    for (long i = p; i < static_cast<long>(n); ++i) L[i] = L[i - (p - q)];
  }
}

std::vector<FiniteTree> small_trees(std::size_t n) {
  std::vector<FiniteTree> out;
  enumerate_small_trees(n, [&](const FiniteTree& t) { out.push_back(t); });
  return out;
}

std::vector<std::uint64_t> rooted_tree_counts(std::size_t max_n) {
  // a(n+1) = (1/n) sum_{k=1}^{n} (sum_{d | k} d a(d)) a(n-k+1)
  std::vector<std::uint64_t> a(max_n + 1, 0);
  if (max_n >= 1) a[1] = 1;
  for (std::size_t n = 1; n < max_n; ++n) {
    std::uint64_t total = 0;
    for (std::size_t k = 1; k <= n; ++k) {
      std::uint64_t s = 0;
      for (std::size_t d = 1; d <= k; ++d) {
        if (k % d == 0) s += d * a[d];
      }
      total += s * a[n - k + 1];
    }
    a[n + 1] = total / n;
  }
  return a;
}

std::set<std::size_t> brute_run_away(const PathMap& phi, const std::vector<Path>& K, std::size_t horizon) {
  std::set<std::size_t> out;
  for (std::size_t j = 1; j <= horizon; ++j) {
    bool meets = false;
    for (const auto& k : K) {
      Path x = k;
      for (std::size_t i = 0; i < j; ++i) x = phi(x);
      if (std::find(K.begin(), K.end(), x) != K.end()) meets = true;
    }
    if (meets) out.insert(j);
  }
  return out;
}

}  // namespace oracle
