#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "treelip/errors.hpp"
#include "treelip/lip.hpp"
#include "treelip/scalar.hpp"
#include "treelip/tree.hpp"

namespace treelip {

// A vertex w together with a bound K on dist(phi^n(w), phi^n(w^-)) for all n.
struct SeparationBound {
  VertexPath w;
  std::uint64_t bound = 0;
};

// Analytic facts about a self-map. Every field is a certificate for the
// whole infinite tree; absent fields mean "unknown", never "false".
// Scans spot-check declared facts and throw MetadataContradiction when a
// truncation refutes one.
struct MapFacts {
  // lambda_phi exactly.
  std::optional<std::uint64_t> lipschitz_number;
  // lambda_phi <= this; implied by lipschitz_number.
  std::optional<std::uint64_t> lipschitz_bound;
  std::optional<bool> injective;
  // |phi(v)| > |v| for every |v| >= growth_threshold.
  std::optional<std::size_t> growth_threshold;
  // A = {v : phi not constant on S_v} is finite.
  bool nonconstant_set_finite = false;
  // phi is the constant map to this vertex.
  std::optional<VertexPath> constant_value;
  bool no_periodic_points = false;
  // {n : phi^-n({v}) nonempty} is finite for every v.
  bool preimage_times_finite = false;
  // dist(phi^n(u), phi^n(v)) >= base^n for all u != v, attained: m(n,v) = base^n.
  std::optional<std::uint64_t> separation_base;
  // |phi^n(v)| + c >= m(n,v) for all v and n >= 1.
  std::optional<std::uint64_t> separation_constant;
  // dist(phi^n(w), phi^n(w^-)) = base^n for every non-root w.
  std::optional<std::uint64_t> parent_separation_base;
  std::optional<SeparationBound> bounded_separation;

  std::optional<std::uint64_t> certified_lipschitz_bound() const {
    return lipschitz_number ? lipschitz_number : lipschitz_bound;
  }
};

class MetadataContradiction : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
  const char* kind() const noexcept override { return "MetadataContradiction"; }
};

// Declarative description of a built-in map, kept so maps can be echoed in
// reports and iterated in closed form.
struct MapSpec {
  std::string kind;
  std::map<std::string, std::string> params;
};

// A total self-map phi of a tree model.
class SelfMap {
 public:
  using ApplyFn = std::function<VertexPath(const VertexPath&)>;

  SelfMap(std::string name, TreeModel model, ApplyFn apply, MapFacts facts = {}, MapSpec spec = {});

  // phi(v) without validation.
  VertexPath operator()(const VertexPath& v) const { return (*apply_)(v); }
  // phi(v), throwing InvalidVertex when the image leaves the model.
  VertexPath apply_checked(const VertexPath& v) const;

  const std::string& name() const { return name_; }
  const TreeModel& model() const { return model_; }
  const MapFacts& facts() const { return facts_; }
  const MapSpec& spec() const { return spec_; }

  SelfMap with_facts(MapFacts facts) const;

 private:
  std::string name_;
  TreeModel model_;
  std::shared_ptr<const ApplyFn> apply_;
  MapFacts facts_;
  MapSpec spec_;
};

// ---- built-in maps ----

// m -> a*m + b on the path tree. With fixzero, 0 -> 0 and the affine rule
// applies to m >= 1 only.
SelfMap affine_path_map(std::int64_t a, std::int64_t b, bool fixzero = false);
SelfMap constant_map(const TreeModel& model, const VertexPath& target);
// On the comb tree: odd spine v -> v-1, even spine v -> 1_v, ray v_k -> (v+1)_k.
SelfMap comb_map();
enum class TableDefault { Identity, Error };
SelfMap table_map(const TreeModel& model, std::map<VertexPath, VertexPath> entries, TableDefault fallback,
                  MapFacts facts = {});
// m -> floor(m / 2) on the path tree.
SelfMap path_halving_map();
// m -> 0 for even m, m -> m for odd m, on the path tree.
SelfMap path_even_collapse_map();

// phi^n; closed form for affine maps, composition otherwise. Facts are
// carried over only where they are preserved by iteration.
SelfMap iterate(const SelfMap& map, std::size_t n);
VertexPath apply_power(const SelfMap& map, const VertexPath& v, std::size_t n);

// Visits each truncation vertex v with phi(v) and, off the root,
// phi(v^-). Images are validated against the model.
void scan_images(const SelfMap& map, std::size_t depth,
                 const std::function<void(const VertexPath& v, const VertexPath& image,
                                          const VertexPath* parent_image)>& visit);

// First pair u != v (in scan order) with phi(u) = phi(v) in the truncation.
std::optional<std::pair<VertexPath, VertexPath>> first_image_collision(const SelfMap& map, std::size_t depth);

// Throws MetadataContradiction when the truncation refutes a declared fact.
void spot_check_facts(const SelfMap& map, std::size_t depth);

// ---- operator ----

// v -> f(phi(v)).
TreeFunction compose(const SelfMap& map, const TreeFunction& f);

struct LipschitzEstimate {
  std::uint64_t value = 0;  // max dist(phi(v), phi(v^-)) over the truncation
  bool exact = false;       // value equals the certified lambda_phi
  VertexPath attained_at;
  std::size_t depth = 0;
  std::optional<std::uint64_t> certified;
};

LipschitzEstimate lipschitz_number(const SelfMap& map, std::size_t depth);

// Truncation vertices v for which phi is observed nonconstant on S_v.
struct NonconstantSectors {
  // v -> a vertex u in S_v with phi(u) != phi(v), |u| <= probe.
  std::map<VertexPath, VertexPath> members;
  std::size_t depth = 0;
  std::size_t probe = 0;

  bool contains(const VertexPath& v) const { return members.count(v) != 0; }
};

NonconstantSectors nonconstant_sectors(const SelfMap& map, std::size_t depth, std::size_t probe);

enum class BoundednessStatus { BoundedCertified, NotBounded, Inconclusive };
std::string to_string(BoundednessStatus s);

struct BoundednessOptions {
  std::size_t threshold = 8;  // distinct preimage depths for a NotBounded witness
  std::size_t probe_extra = 0;  // probe = depth + probe_extra; 0 means depth
};

struct BoundednessVerdict {
  BoundednessStatus status = BoundednessStatus::Inconclusive;
  std::string theorem_key;
  std::string reason;
  // NotBounded: the accumulating target w, chi_w, and one A-preimage of w
  // per distinct depth.
  std::optional<VertexPath> witness_vertex;
  std::optional<TreeFunction> witness_function;
  std::vector<VertexPath> witness_preimages;
  // Vertices u with |(chi_w o phi)'(u)| = 1, one per distinct depth.
  std::vector<VertexPath> unit_increments;
  // True for scan-based refutations: infinitely many preimages are not proven.
  bool heuristic = false;
  // Evidence.
  std::size_t depth = 0;
  std::size_t probe = 0;
  std::size_t observed_a = 0;
  // Entry n: min |phi(v)| over observed A-vertices of length n.
  std::vector<std::optional<std::size_t>> min_image_length;
};

BoundednessVerdict classify_boundedness(const SelfMap& map, std::size_t depth, BoundednessOptions options = {});

struct RatioWitness {
  std::string family;  // "tent", "indicator", "bump"
  TreeFunction f;
  Magnitude norm;
  Magnitude image_norm;
  Magnitude ratio;
  bool image_norm_exact = false;
};

struct NormBounds {
  Magnitude lower;  // 1 + |phi(root)|
  Magnitude upper;  // max{lower, lambda_phi}
  bool upper_certified = false;
  std::uint64_t lipschitz_used = 0;
  TreeFunction witness_lower;
  Magnitude witness_lower_image_norm;
  RatioWitness best;
  std::size_t depth = 0;
  std::size_t witness_radius = 0;
  std::size_t candidates = 0;
};

struct NormBoundsOptions {
  // Indicators and bumps are centred at vertices of length <= witness_radius.
  std::size_t witness_radius = 4;
  // Cap on the number of centres per level.
  std::size_t max_centres_per_level = 64;
};

NormBounds norm_bounds(const SelfMap& map, std::size_t depth, NormBoundsOptions options = {});

// The lower-bound witness g with ramp parameter m:
// g(v) = 1+|v| for |v| <= m, 2m+1-|v| for m <= |v| <= 2m+1, 0 beyond.
TreeFunction norm_tent(std::size_t m);

}  // namespace treelip
