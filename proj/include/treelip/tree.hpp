#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <iterator>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace treelip {

// A vertex, named by the child indices on its path from the root. The
// empty path is the root; length() is the distance to the root.
class VertexPath {
 public:
  using Index = std::uint32_t;

  VertexPath() = default;
  explicit VertexPath(std::vector<Index> indices) : indices_(std::move(indices)) {}
  VertexPath(std::initializer_list<Index> indices) : indices_(indices) {}

  // The vertex reached by taking child `index` `count` times from the root.
  static VertexPath repeat(Index index, std::size_t count);

  std::size_t length() const { return indices_.size(); }
  bool is_root() const { return indices_.empty(); }
  std::span<const Index> indices() const { return indices_; }
  Index operator[](std::size_t k) const { return indices_[k]; }
  Index back() const { return indices_.back(); }

  std::optional<VertexPath> parent() const;
  VertexPath child(Index index) const;
  VertexPath prefix(std::size_t k) const;
  bool has_prefix(const VertexPath& p) const;

  // Lexicographic on the index sequence.
  friend auto operator<=>(const VertexPath&, const VertexPath&) = default;
  friend bool operator==(const VertexPath&, const VertexPath&) = default;

  std::string to_string() const;

 private:
  std::vector<Index> indices_;
};

struct VertexPathHash {
  std::size_t operator()(const VertexPath& v) const noexcept;
};

std::optional<VertexPath> parent(const VertexPath& v);
std::size_t common_prefix_length(const VertexPath& u, const VertexPath& v);
// Edge count of the unique path between u and v.
std::size_t distance(const VertexPath& u, const VertexPath& v);
// True iff u lies in the sector of v (v is u or an ancestor of u).
bool in_sector(const VertexPath& u, const VertexPath& v);

// Declared facts about a tree family; used for reporting and for the
// path-tree integer adapters.
struct TreeFacts {
  std::string family;                         // "path", "homogeneous", "comb", "custom-table", ...
  std::optional<std::uint32_t> uniform_arity;  // arity of every vertex, when constant
};

// A lazily generated, locally finite rooted tree: the root plus a pure arity
// function. Every vertex has at least one child, so the tree is infinite.
class TreeModel {
 public:
  using ArityFn = std::function<std::uint32_t(std::span<const VertexPath::Index>)>;

  static constexpr std::size_t kDefaultLevelCap = std::size_t{1} << 22;

  TreeModel(std::string name, ArityFn arity, TreeFacts facts = {});

  const std::string& name() const { return name_; }
  const TreeFacts& facts() const { return facts_; }

  std::uint32_t arity(std::span<const VertexPath::Index> path) const;
  std::uint32_t arity(const VertexPath& v) const { return arity(v.indices()); }

  bool contains(const VertexPath& v) const;
  // Throws InvalidVertex naming the first bad index.
  void validate(const VertexPath& v) const;

  std::size_t level_cap() const { return level_cap_; }
  TreeModel with_level_cap(std::size_t cap) const;

 private:
  std::string name_;
  std::shared_ptr<const ArityFn> arity_;
  TreeFacts facts_;
  std::size_t level_cap_ = kDefaultLevelCap;
};

// Vertices of one level, in lexicographic order, generated on demand.
// Iteration throws ResourceBudgetExceeded once more than level_cap()
// vertices have been produced.
class LevelRange {
 public:
  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = VertexPath;
    using difference_type = std::ptrdiff_t;
    using pointer = const VertexPath*;
    using reference = const VertexPath&;

    iterator() = default;
    reference operator*() const { return current_; }
    pointer operator->() const { return &current_; }
    iterator& operator++();
    void operator++(int) { ++*this; }
    friend bool operator==(const iterator& a, const iterator& b) { return a.done_ == b.done_; }

   private:
    friend class LevelRange;
    iterator(const TreeModel* model, std::size_t n);

    const TreeModel* model_ = nullptr;
    std::vector<VertexPath::Index> digits_;
    VertexPath current_;
    std::size_t produced_ = 0;
    bool done_ = true;
  };

  LevelRange(const TreeModel& model, std::size_t n) : model_(&model), n_(n) {}
  iterator begin() const { return iterator(model_, n_); }
  iterator end() const { return iterator(); }

 private:
  const TreeModel* model_;
  std::size_t n_;
};

LevelRange level(const TreeModel& model, std::size_t n);
std::vector<VertexPath> level_vertices(const TreeModel& model, std::size_t n);

// All vertices of length <= depth.
class Truncation {
 public:
  Truncation(TreeModel model, std::size_t depth) : model_(std::move(model)), depth_(depth) {}

  const TreeModel& model() const { return model_; }
  std::size_t depth() const { return depth_; }
  bool contains(const VertexPath& v) const { return v.length() <= depth_ && model_.contains(v); }

  // Visits vertices level by level, lexicographically within a level.
  template <class F>
  void for_each(F&& visit) const {
    for (std::size_t n = 0; n <= depth_; ++n) {
      for (const auto& v : level(model_, n)) visit(v);
    }
  }

  std::vector<VertexPath> vertices() const;
  std::size_t size() const;

 private:
  TreeModel model_;
  std::size_t depth_;
};

// ---- built-in trees ----

// The path tree N0 (every vertex has one child); vertex n is [0]^n.
TreeModel path_tree();
// Every vertex has q children.
TreeModel homogeneous_tree(std::uint32_t q);
// Spine N0 with a ray hanging off each even spine vertex. Spine vertex n is
// [0]^n; ray vertex v_k (v >= 1, k even) is [0]^k, 1, [0]^(v-1).
TreeModel comb_tree();
// Explicit arity table with a default for unlisted vertices.
TreeModel custom_table_tree(std::map<VertexPath, std::uint32_t> table, std::uint32_t default_arity,
                            std::string name = "custom-table");

// Path-tree adapters between integers and vertices.
VertexPath path_vertex(std::size_t n);
std::size_t path_index(const VertexPath& v);

// Comb-tree coordinates.
VertexPath comb_spine(std::size_t n);
VertexPath comb_ray(std::size_t k, std::size_t v);
struct CombCoordinates {
  bool on_spine = true;
  std::size_t spine = 0;  // n for spine vertices, k for ray vertices
  std::size_t ray = 0;    // v >= 1 for ray vertices
};
CombCoordinates comb_coordinates(const VertexPath& v);

}  // namespace treelip
