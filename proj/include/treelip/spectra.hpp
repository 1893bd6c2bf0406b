#pragma once

#include <optional>
#include <string>
#include <vector>

#include "treelip/comp_op.hpp"

namespace treelip {

struct EigenPair {
  Scalar lambda;
  TreeFunction f;
  std::size_t residual_depth = 0;
  // max |f(phi(v)) - lambda f(v)| over the truncation.
  Magnitude residual;
  // residual == 0 for exact data, <= tolerance otherwise.
  bool accepted = false;
  std::string theorem_key;
  // Orbit bookkeeping for orbit-supported eigenfunctions.
  std::size_t orbit_terms = 0;
  bool orbit_escaped = false;
};

// Evaluates the eigen-equation residual and refuses acceptance outside the
// certified disk |lambda| <= lambda_phi (TheoremViolation).
EigenPair check_eigenpair(const SelfMap& map, const Scalar& lambda, const TreeFunction& f, std::size_t depth,
                          std::string theorem_key, double tol = kDefaultTolerance);

// f = sum_n lambda^n chi_{phi^n(w)} for injective phi and w outside im(phi).
// The orbit of w is walked until it provably leaves the truncation (growth
// metadata) or for `horizon` steps.
EigenPair geometric_eigenfunction(const SelfMap& map, const VertexPath& w, const Scalar& lambda,
                                  std::size_t depth, std::size_t horizon = 4096);

struct PowerEigenResult {
  EigenPair pair;
  Scalar mu;  // principal log(lambda) / log 2
  std::vector<Magnitude> decay;
};

// On the path tree with phi(m) = 2m+1: f(m) = (m+1)^mu, 2^mu = lambda.
PowerEigenResult power_eigenfunction_path_tree(const Scalar& lambda, std::size_t depth,
                                               double tol = kDefaultTolerance);

enum class ResolventCase { InsideDisk, OutsideDisk, FinitePreimages };
std::string to_string(ResolventCase c);

struct ResolventSolution {
  ResolventCase mode = ResolventCase::InsideDisk;
  TreeFunction f;
  std::string theorem_key;
  std::size_t depth = 0;
  std::size_t horizon = 0;
  // max |(C_phi - lambda) f - chi_w| over the truncation.
  Magnitude max_defect;
  bool verified = false;
  // Preimage-chain bookkeeping (outside-disk and finite-preimage cases):
  // "proven-by-metadata", "not-found-within-horizon", or "n/a".
  std::string emptiness = "n/a";
  // Least N with phi^-N({w}) empty within the truncation.
  std::optional<std::size_t> chain_length;
  // Period of w under phi, when w is periodic (outside-disk case only).
  std::optional<std::size_t> period;
};

// Solves (C_phi - lambda) f = chi_w in one of the three dense-range cases.
ResolventSolution resolvent_solution(const SelfMap& map, const VertexPath& w, const Scalar& lambda,
                                     ResolventCase mode, std::size_t depth, std::size_t horizon,
                                     double tol = kDefaultTolerance);

struct SpectralNote {
  std::string theorem_key;
  std::string text;
};

struct RadiusTerm {
  std::size_t n = 0;
  Magnitude value;  // max{1 + |phi^n(root)|, lambda_{phi^n}}^(1/n)
  bool lipschitz_certified = false;
};

struct SpectralProbeReport {
  Magnitude disk_radius;  // lambda_phi
  bool disk_radius_certified = false;
  // {0, 1} when phi is constant.
  std::optional<std::vector<Scalar>> constant_map_special;
  bool zero_eigen = false;
  std::optional<VertexPath> non_image_vertex;
  bool non_image_certified = false;
  std::optional<std::pair<VertexPath, VertexPath>> injectivity_collision;
  std::vector<SpectralNote> compression_notes;
  std::vector<RadiusTerm> spectral_radius_upper_sequence;
  std::size_t depth = 0;
};

struct SpectralProbeOptions {
  std::size_t max_power = 8;
  // Truncation depth used for lambda_{phi^n} when it is not certified.
  std::size_t iterate_depth = 8;
};

SpectralProbeReport point_spectrum_disk(const SelfMap& map, std::size_t depth, SpectralProbeOptions options = {});

}  // namespace treelip
