#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "treelip/comp_op.hpp"

namespace treelip {

struct OrbitStep {
  std::size_t n = 0;
  VertexPath vertex;
  std::size_t length = 0;
};

struct OrbitTrace {
  VertexPath start;
  std::vector<OrbitStep> steps;
  bool cycle_detected = false;
  // With cycle_detected: steps[entry] is the first repeated vertex and
  // apply(steps.back()) == steps[entry]; period is minimal.
  std::size_t period = 0;
  std::size_t entry = 0;
  // Iteration stopped because an image exceeded the vertex length cap.
  bool length_capped = false;
};

// phi^0(v), ..., phi^n(v), stopping early at the first repetition.
OrbitTrace orbit(const SelfMap& map, const VertexPath& v, std::size_t n);

struct PeriodicPoint {
  VertexPath vertex;  // least vertex of its cycle
  std::size_t period = 0;
};

struct PeriodicScan {
  std::vector<PeriodicPoint> points;
  // True when no periodic point exists anywhere: metadata, or growth
  // metadata plus an exhaustive scan below the threshold.
  bool certified_absent = false;
};

PeriodicScan find_periodic_points(const SelfMap& map, std::size_t depth, std::size_t horizon);

enum class InjectivityStatus { CertifiedByMetadata, Collision, NoCollisionObserved };
std::string to_string(InjectivityStatus s);

struct InjectivityResult {
  InjectivityStatus status = InjectivityStatus::NoCollisionObserved;
  std::optional<std::pair<VertexPath, VertexPath>> collision;
};

InjectivityResult injectivity_scan(const SelfMap& map, std::size_t depth);

// {1 <= j <= horizon : phi^j(K) meets K}.
std::set<std::size_t> run_away_scan(const SelfMap& map, const std::vector<VertexPath>& K, std::size_t horizon);

struct SeparationSequence {
  std::vector<Magnitude> terms;  // n = 1..horizon
  // max over the second half of the window <= max over the first half.
  bool bounded_over_window = false;
  // Fewer than `horizon` terms: an orbit exceeded the vertex length cap.
  bool length_capped = false;
};

// |lambda|^n dist(phi^n(w), phi^n(w^-)) for n = 1..horizon.
SeparationSequence weighted_separation(const SelfMap& map, const Scalar& lambda, const VertexPath& w,
                                       std::size_t horizon);

enum class PreimageAssessment { ProvablyFinite, EmptyBeyondWithinScan };
std::string to_string(PreimageAssessment a);

struct PreimageTimes {
  std::set<std::size_t> times;  // n >= 1 with phi^-n({v}) meeting the truncation
  PreimageAssessment assessment = PreimageAssessment::EmptyBeyondWithinScan;
  std::size_t empty_from = 0;  // least n with phi^-n({v}) empty within the truncation
  std::string theorem_key;
};

PreimageTimes preimage_times(const SelfMap& map, const VertexPath& v, std::size_t depth, std::size_t horizon);

struct GrowthResult {
  bool holds = false;
  std::size_t threshold = 0;                  // with holds: |phi(v)| > |v| once |v| >= threshold
  std::optional<VertexPath> counterexample;  // deepest failure
  std::vector<VertexPath> failures;           // every truncation vertex with |phi(v)| <= |v|
  bool certified = false;                     // backed by growth metadata
};

// Holds with threshold 1 + (deepest failure) when the failure-free suffix
// spans at least half of the scanned levels; fails otherwise.
GrowthResult growth_check(const SelfMap& map, std::size_t depth);

// B_n f: (B_n f)(phi^n(s)) = lambda^-n f(s), zero off ran phi^n.
TreeFunction backward_geometric(const SelfMap& map, std::size_t n, const Scalar& lambda, const TreeFunction& f,
                                std::size_t depth);

struct SeparationEstimate {
  std::uint64_t upper = 0;  // min over truncation u != v of dist(phi^n(u), phi^n(v))
  VertexPath nearest;
  std::optional<std::uint64_t> certified;  // m(n,v) from metadata

  std::uint64_t value() const { return certified ? *certified : upper; }
};

SeparationEstimate separation_m(const SelfMap& map, std::size_t n, const VertexPath& v, std::size_t depth);

// (m - dist(u, phi^n(v))) / m on the ball of radius m-1 around phi^n(v).
TreeFunction tent_function(const SelfMap& map, std::size_t n, const VertexPath& v, std::uint64_t m_nv);

struct DynamicsBudgets {
  std::size_t depth = 8;
  std::size_t horizon = 64;
  std::size_t sample_levels = 3;  // w and v samples come from levels <= this
  std::size_t max_power = 8;      // n grid for m(n,v)
  std::size_t max_c = 8;
  std::size_t max_run_away_set = 3;
};

enum class HypercyclicityVerdict {
  NotHypercyclicCertified,
  NotHypercyclicEvidence,
  MixingCertified,
  MixingEvidence,
  Inconclusive
};
std::string to_string(HypercyclicityVerdict v);

struct ConditionRow {
  std::string id;           // "injectivity", "periodic-points", ...
  std::string theorem_key;
  std::string status;       // "certified", "holds", "fails", "observed", "unknown", ...
  std::string detail;
};

struct Reason {
  std::string condition;
  std::string theorem_key;
  std::string evidence;
};

struct SeparationCell {
  std::size_t n = 0;
  VertexPath v;
  std::uint64_t m = 0;
  bool certified = false;
  std::size_t image_length = 0;  // |phi^n(v)|
};

struct SeparationTable {
  std::vector<SeparationCell> entries;
  std::optional<std::uint64_t> c;  // least c in [0, max_c] with |phi^n(v)| + c >= m(n,v) on the table
  std::size_t depth = 0;
};

struct HypercyclicityReport {
  Scalar lambda;
  HypercyclicityVerdict verdict = HypercyclicityVerdict::Inconclusive;
  std::vector<Reason> reasons;
  std::vector<ConditionRow> conditions;
  std::optional<SeparationTable> table;
  DynamicsBudgets budgets;
};

HypercyclicityReport hypercyclicity_report(const SelfMap& map, const Scalar& lambda, DynamicsBudgets budgets = {});

}  // namespace treelip
