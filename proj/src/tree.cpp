#include "treelip/tree.hpp"

#include <algorithm>

#include "treelip/errors.hpp"

namespace treelip {

// ---- VertexPath -----------------------------------------------------------

VertexPath VertexPath::repeat(Index index, std::size_t count) {
  return VertexPath(std::vector<Index>(count, index));
}

std::optional<VertexPath> VertexPath::parent() const {
  if (indices_.empty()) return std::nullopt;
  return prefix(indices_.size() - 1);
}

VertexPath VertexPath::child(Index index) const {
  std::vector<Index> out;
  out.reserve(indices_.size() + 1);
  out.assign(indices_.begin(), indices_.end());
  out.push_back(index);
  return VertexPath(std::move(out));
}

VertexPath VertexPath::prefix(std::size_t k) const {
  k = std::min(k, indices_.size());
  return VertexPath(std::vector<Index>(indices_.begin(), indices_.begin() + static_cast<std::ptrdiff_t>(k)));
}

bool VertexPath::has_prefix(const VertexPath& p) const {
  if (p.length() > length()) return false;
  return std::equal(p.indices_.begin(), p.indices_.end(), indices_.begin());
}

std::string VertexPath::to_string() const {
  std::string out = "[";
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    if (k > 0) out += ',';
    out += std::to_string(indices_[k]);
  }
  return out + "]";
}

std::size_t VertexPathHash::operator()(const VertexPath& v) const noexcept {
  // FNV-1a over the indices
  std::size_t h = 1469598103934665603ULL;
  for (auto x : v.indices()) {
    h ^= x + 0x9e3779b9U;
    h *= 1099511628211ULL;
  }
  return h ^ v.length();
}

std::optional<VertexPath> parent(const VertexPath& v) { return v.parent(); }

std::size_t common_prefix_length(const VertexPath& u, const VertexPath& v) {
  auto a = u.indices();
  auto b = v.indices();
  auto [ia, ib] = std::mismatch(a.begin(), a.end(), b.begin(), b.end());
  return static_cast<std::size_t>(ia - a.begin());
}

std::size_t distance(const VertexPath& u, const VertexPath& v) {
  return u.length() + v.length() - 2 * common_prefix_length(u, v);
}

bool in_sector(const VertexPath& u, const VertexPath& v) { return u.has_prefix(v); }

// ---- TreeModel ------------------------------------------------------------

TreeModel::TreeModel(std::string name, ArityFn arity, TreeFacts facts)
    : name_(std::move(name)),
      arity_(std::make_shared<const ArityFn>(std::move(arity))),
      facts_(std::move(facts)) {}

std::uint32_t TreeModel::arity(std::span<const VertexPath::Index> path) const {
  std::uint32_t a = (*arity_)(path);
  if (a < 1) throw InvalidVertex("tree '" + name_ + "' reports arity 0; every vertex needs a child");
  return a;
}

bool TreeModel::contains(const VertexPath& v) const {
  auto idx = v.indices();
  if (facts_.uniform_arity) {
    auto q = *facts_.uniform_arity;
    return std::all_of(idx.begin(), idx.end(), [q](auto x) { return x < q; });
  }
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (idx[k] >= arity(idx.first(k))) return false;
  }
  return true;
}

void TreeModel::validate(const VertexPath& v) const {
  auto idx = v.indices();
  for (std::size_t k = 0; k < idx.size(); ++k) {
    auto a = arity(idx.first(k));
    if (idx[k] >= a) {
      throw InvalidVertex("vertex " + v.to_string() + " is not in tree '" + name_ + "': index " +
                          std::to_string(idx[k]) + " at step " + std::to_string(k) +
                          " exceeds arity " + std::to_string(a));
    }
  }
}

TreeModel TreeModel::with_level_cap(std::size_t cap) const {
  TreeModel copy = *this;
  copy.level_cap_ = cap;
  return copy;
}

// ---- levels ---------------------------------------------------------------

LevelRange::iterator::iterator(const TreeModel* model, std::size_t n)
    : model_(model), digits_(n, 0), current_(digits_), produced_(1), done_(false) {
  if (model_->level_cap() < 1) throw ResourceBudgetExceeded("level cap is zero");
  // Uniform arity fixes the level size; refuse before enumerating.
  if (auto q = model_->facts().uniform_arity; q && *q > 1) {
    std::size_t size = 1;
    for (std::size_t k = 0; k < n && size <= model_->level_cap(); ++k) size *= *q;
    if (size > model_->level_cap()) {
      throw ResourceBudgetExceeded("level " + std::to_string(n) + " of tree '" + model_->name() +
                                   "' exceeds the cap of " + std::to_string(model_->level_cap()) + " vertices");
    }
  }
}

LevelRange::iterator& LevelRange::iterator::operator++() {
  std::span<const VertexPath::Index> all(digits_);
  for (std::size_t k = digits_.size(); k-- > 0;) {
    if (digits_[k] + 1 < model_->arity(all.first(k))) {
      ++digits_[k];
      std::fill(digits_.begin() + static_cast<std::ptrdiff_t>(k) + 1, digits_.end(), 0U);
      if (++produced_ > model_->level_cap()) {
        throw ResourceBudgetExceeded("level " + std::to_string(digits_.size()) + " of tree '" +
                                     model_->name() + "' exceeds the cap of " +
                                     std::to_string(model_->level_cap()) + " vertices");
      }
      current_ = VertexPath(digits_);
      return *this;
    }
  }
  done_ = true;
  return *this;
}

LevelRange level(const TreeModel& model, std::size_t n) { return {model, n}; }

std::vector<VertexPath> level_vertices(const TreeModel& model, std::size_t n) {
  std::vector<VertexPath> out;
  for (const auto& v : level(model, n)) out.push_back(v);
  return out;
}

std::vector<VertexPath> Truncation::vertices() const {
  std::vector<VertexPath> out;
  for_each([&](const VertexPath& v) { out.push_back(v); });
  return out;
}

std::size_t Truncation::size() const {
  std::size_t count = 0;
  for_each([&](const VertexPath&) { ++count; });
  return count;
}

// ---- built-in trees -------------------------------------------------------

TreeModel path_tree() {
  return TreeModel("path", [](std::span<const VertexPath::Index>) { return 1U; },
                   TreeFacts{"path", 1U});
}

TreeModel homogeneous_tree(std::uint32_t q) {
  if (q < 1) throw DomainError("homogeneous tree needs q >= 1");
  return TreeModel("homogeneous-" + std::to_string(q),
                   [q](std::span<const VertexPath::Index>) { return q; },
                   TreeFacts{q == 1 ? "path" : "homogeneous", q});
}

TreeModel comb_tree() {
  return TreeModel(
      "comb",
      [](std::span<const VertexPath::Index> p) -> std::uint32_t {
        bool spine = std::all_of(p.begin(), p.end(), [](auto x) { return x == 0; });
        return (spine && p.size() % 2 == 0) ? 2U : 1U;
      },
      TreeFacts{"comb", std::nullopt});
}

TreeModel custom_table_tree(std::map<VertexPath, std::uint32_t> table, std::uint32_t default_arity,
                            std::string name) {
  if (default_arity < 1) throw DomainError("custom-table default arity must be >= 1");
  for (const auto& [v, a] : table) {
    if (a < 1) throw DomainError("custom-table arity for " + v.to_string() + " must be >= 1");
  }
  auto shared = std::make_shared<const std::map<VertexPath, std::uint32_t>>(std::move(table));
  return TreeModel(
      std::move(name),
      [shared, default_arity](std::span<const VertexPath::Index> p) {
        auto it = shared->find(VertexPath(std::vector<VertexPath::Index>(p.begin(), p.end())));
        return it == shared->end() ? default_arity : it->second;
      },
      TreeFacts{"custom-table", std::nullopt});
}

VertexPath path_vertex(std::size_t n) { return VertexPath::repeat(0, n); }

std::size_t path_index(const VertexPath& v) {
  for (auto x : v.indices()) {
    if (x != 0) throw InvalidVertex(v.to_string() + " is not a path-tree vertex");
  }
  return v.length();
}

VertexPath comb_spine(std::size_t n) { return VertexPath::repeat(0, n); }

VertexPath comb_ray(std::size_t k, std::size_t v) {
  if (k % 2 != 0) throw DomainError("comb rays hang off even spine vertices only");
  if (v < 1) throw DomainError("comb ray positions start at 1");
  std::vector<VertexPath::Index> idx(k + v, 0);
  idx[k] = 1;
  return VertexPath(std::move(idx));
}

CombCoordinates comb_coordinates(const VertexPath& v) {
  auto idx = v.indices();
  auto it = std::find_if(idx.begin(), idx.end(), [](auto x) { return x != 0; });
  if (it == idx.end()) return {true, v.length(), 0};
  auto k = static_cast<std::size_t>(it - idx.begin());
  if (*it != 1 || k % 2 != 0 ||
      std::any_of(it + 1, idx.end(), [](auto x) { return x != 0; })) {
    throw InvalidVertex(v.to_string() + " is not a comb-tree vertex");
  }
  return {false, k, v.length() - k};
}

}  // namespace treelip
