#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "treelip/scalar.hpp"
#include "treelip/tree.hpp"

namespace treelip {

// |f'(v)| <= bound for every |v| > depth.
struct TailBound {
  std::size_t depth = 0;
  Magnitude bound;
};

// What is known about a function beyond what a truncated scan can see.
struct SupportHint {
  // f vanishes outside this finite set.
  std::optional<std::vector<VertexPath>> support;
  // f(v) = 0 whenever |v| > zero_beyond.
  std::optional<std::size_t> zero_beyond;
  std::optional<TailBound> tail;

  // Least d such that f'(v) = 0 for every |v| > d, when the hint implies one.
  std::optional<std::size_t> flat_beyond() const;
  bool finitely_supported() const { return support.has_value() || zero_beyond.has_value(); }
};

// A complex-valued function on the vertices of a tree.
class TreeFunction {
 public:
  using EvalFn = std::function<Scalar(const VertexPath&)>;

  TreeFunction(std::string name, EvalFn eval, SupportHint hint = {});

  Scalar operator()(const VertexPath& v) const { return (*eval_)(v); }
  const std::string& name() const { return name_; }
  const SupportHint& hint() const { return hint_; }

  TreeFunction with_hint(SupportHint hint) const;
  TreeFunction renamed(std::string name) const;

 private:
  std::string name_;
  std::shared_ptr<const EvalFn> eval_;
  SupportHint hint_;
};

TreeFunction operator+(const TreeFunction& f, const TreeFunction& g);
TreeFunction operator-(const TreeFunction& f, const TreeFunction& g);
TreeFunction operator*(const Scalar& a, const TreeFunction& f);

// ---- built-in functions ----

TreeFunction zero_function();
TreeFunction constant_function(const Scalar& c);
// chi_{w}
TreeFunction indicator(const VertexPath& w);
// Finite table; zero off the table.
TreeFunction table_function(std::map<VertexPath, Scalar> entries, std::string name = "table");
// f(v) = |v|; on the path tree, f(n) = n.
TreeFunction length_function();
// f(v) = sum_{k=1}^{|v|} 1/k, so f'(v) = 1/|v| off the root.
TreeFunction harmonic_function();
// f(v) = (|v|+1)^mu with the principal logarithm.
TreeFunction power_function(const Scalar& mu);

// ---- operations ----

// f(v) - f(v^-) off the root, f(root) at the root.
Scalar derivative(const TreeFunction& f, const VertexPath& v);

struct LipNormReport {
  Magnitude value;
  std::size_t depth = 0;
  VertexPath attained_at;
  // True when the support hint proves the truncated max is the true sup.
  bool exact = false;
};

// max(|f(root)|, max |f'(v)|) over the truncation at `depth`. Ties go to
// the lexicographically least vertex.
LipNormReport lip_norm(const TreeFunction& f, const TreeModel& model, std::size_t depth);

// Entry n-1 is max_{|v| = n} |f'(v)|, for n = 1..depth.
std::vector<Magnitude> decay_profile(const TreeFunction& f, const TreeModel& model, std::size_t depth);

// Finitely supported approximation of g within epsilon in Lip norm, built
// by copying g up to level N and ramping g(v_N) linearly down to zero over
// the next M levels.
struct FiniteSupportApprox {
  TreeFunction f;
  std::size_t n = 0;  // copy depth
  std::size_t m = 0;  // ramp length
  std::size_t probe_depth = 0;
};

FiniteSupportApprox finite_support_approx(const TreeFunction& g, const Scalar& epsilon,
                                          const TreeModel& model, std::size_t probe_depth);

// f cut off below `cutoff_depth`: equal to f up to the cutoff, then ramped
// from f(u*) (u* the ancestor at the cutoff) to zero over m levels.
// Requires max{|f(w)| : |w| = cutoff_depth} <= m * lip_norm(f) at
// `norm_depth`; throws RampTooSteep otherwise.
TreeFunction localized_extension(const TreeFunction& f, const TreeModel& model, std::size_t cutoff_depth,
                                 std::size_t m, std::size_t norm_depth);

}  // namespace treelip
