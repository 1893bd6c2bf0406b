#include "treelip/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "treelip/dynamics.hpp"
#include "treelip/errors.hpp"
#include "treelip/spectra.hpp"
#include "treelip/theorem_keys.hpp"

namespace treelip::cli {

namespace {

constexpr std::size_t kMaxTableRows = 4096;

struct CommandInfo {
  std::string name;
  std::string summary;
  bool needs_map = false;
  std::size_t functions = 0;  // exact count required
  std::vector<std::string> budgets;
  std::vector<std::string> params;
  Budgets defaults;
};

const std::vector<CommandInfo>& command_table() {
  static const std::vector<CommandInfo> table = {
      {"tree show", "levels and level sizes of a truncated tree", false, 0, {"depth"}, {}, Budgets{.depth = 3}},
      {"norm", "Lipschitz norm and decay profile of a function", false, 1, {"depth"}, {}, Budgets{.depth = 16}},
      {"bounded", "boundedness of C_phi on Lip0", true, 0, {"depth", "witness_radius"}, {}, Budgets{.depth = 32, .witness_radius = 4}},
      {"opnorm", "operator norm bounds and the best ratio witness", true, 0, {"depth", "witness_radius"}, {}, Budgets{.depth = 16, .witness_radius = 4}},
      {"spectrum probe",
       "point spectrum disk, eigenfunctions and resolvent solutions",
       true,
       0,
       {"depth", "horizon", "tolerance", "max_power"},
       {"lambda", "w", "mode"},
       Budgets{.depth = 8, .horizon = 256, .tolerance = kDefaultTolerance, .max_power = 8}},
      {"dynamics report",
       "hypercyclicity and mixing verdict for lambda C_phi",
       true,
       0,
       {"depth", "horizon", "max_power", "sample_levels"},
       {"lambda"},
       Budgets{.depth = 8, .horizon = 64, .max_power = 8, .sample_levels = 3}},
      {"orbit", "orbit of a vertex under phi", true, 0, {"horizon"}, {"vertex", "steps"}, Budgets{.horizon = 64}},
      {"approx", "finitely supported approximation within epsilon", false, 1, {}, {"epsilon", "probe_depth", "check_depth"}, Budgets{}},
  };
  return table;
}

const CommandInfo& command_info(const std::string& name) {
  for (const auto& c : command_table()) {
    if (c.name == name) return c;
  }
  throw SpecError("unknown command '" + name + "'");
}

bool contains(const std::vector<std::string>& xs, std::string_view x) {
  return std::find(xs.begin(), xs.end(), x) != xs.end();
}

std::size_t to_size(const json& j, std::string_view what) {
  if (j.is_number_unsigned()) return j.get<std::size_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return static_cast<std::size_t>(j.get<std::int64_t>());
  throw SpecError(std::string(what) + " must be a non-negative integer");
}

std::size_t parse_size_text(std::string_view text, std::string_view what) {
  std::string s(text);
  try {
    std::size_t used = 0;
    auto v = std::stoull(s, &used);
    if (used == s.size() && s.find('-') == std::string::npos) return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
  }
  throw SpecError(std::string(what) + " must be a non-negative integer, got '" + s + "'");
}

double parse_double_text(std::string_view text, std::string_view what) {
  std::string s(text);
  try {
    std::size_t used = 0;
    auto v = std::stod(s, &used);
    if (used == s.size() && v >= 0) return v;
  } catch (const std::exception&) {
  }
  throw SpecError(std::string(what) + " must be a non-negative number, got '" + s + "'");
}

void set_budget(Budgets& b, const std::string& key, const json& value) {
  if (key == "depth") {
    b.depth = to_size(value, key);
  } else if (key == "horizon") {
    b.horizon = to_size(value, key);
  } else if (key == "tolerance") {
    if (!value.is_number() || value.get<double>() < 0) throw SpecError("tolerance must be a non-negative number");
    b.tolerance = value.get<double>();
  } else if (key == "max_power") {
    b.max_power = to_size(value, key);
  } else if (key == "sample_levels") {
    b.sample_levels = to_size(value, key);
  } else if (key == "witness_radius") {
    b.witness_radius = to_size(value, key);
  } else {
    throw SpecError("unknown budget '" + key + "'");
  }
}

json budgets_to_json(const Budgets& b) {
  json out = json::object();
  if (b.depth) out["depth"] = *b.depth;
  if (b.horizon) out["horizon"] = *b.horizon;
  if (b.tolerance) out["tolerance"] = *b.tolerance;
  if (b.max_power) out["max_power"] = *b.max_power;
  if (b.sample_levels) out["sample_levels"] = *b.sample_levels;
  if (b.witness_radius) out["witness_radius"] = *b.witness_radius;
  return out;
}

template <typename T>
void overlay(std::optional<T>& into, const std::optional<T>& from) {
  if (from) into = from;
}

Budgets overlay(Budgets base, const Budgets& top) {
  overlay(base.depth, top.depth);
  overlay(base.horizon, top.horizon);
  overlay(base.tolerance, top.tolerance);
  overlay(base.max_power, top.max_power);
  overlay(base.sample_levels, top.sample_levels);
  overlay(base.witness_radius, top.witness_radius);
  return base;
}

Budgets restrict_to(const Budgets& b, const std::vector<std::string>& keys) {
  Budgets out;
  if (contains(keys, "depth")) out.depth = b.depth;
  if (contains(keys, "horizon")) out.horizon = b.horizon;
  if (contains(keys, "tolerance")) out.tolerance = b.tolerance;
  if (contains(keys, "max_power")) out.max_power = b.max_power;
  if (contains(keys, "sample_levels")) out.sample_levels = b.sample_levels;
  if (contains(keys, "witness_radius")) out.witness_radius = b.witness_radius;
  return out;
}

// ---- report assembly -------------------------------------------------------------

std::string vertex_text(const VertexPath& v) { return vertex_to_json(v).dump(); }

json magnitude_cell(const Magnitude& m) { return m.to_string(); }

struct Report {
  json doc;

  explicit Report(const RunSpec& spec) {
    doc["schema"] = kReportSchema;
    doc["command"] = spec.command;
    doc["inputs"] = to_json(spec);
    doc["provenance"] = budgets_to_json(spec.budgets);
    doc["result"] = json::object();
    doc["verdicts"] = json::array();
    doc["tables"] = json::object();
  }

  json& result() { return doc["result"]; }

  void verdict(const std::string& id, const std::string& value, std::string_view key_view,
               const std::string& detail = {}) {
    std::string key(key_view);
    if (!is_theorem_key(key)) throw TheoremViolation("verdict '" + id + "' carries unregistered key '" + key + "'");
    json v{{"id", id}, {"verdict", value}, {"theorem_key", key}};
    if (!detail.empty()) v["detail"] = detail;
    doc["verdicts"].push_back(v);
  }

  json& table(const std::string& name, std::vector<std::string> columns) {
    json& t = doc["tables"][name];
    t["columns"] = columns;
    t["rows"] = json::array();
    return t["rows"];
  }
};

// Values of f on the truncation at `depth`, capped at kMaxTableRows rows.
void value_table(Report& r, const std::string& name, const TreeFunction& f, const TreeModel& model, std::size_t depth,
                 bool nonzero_only) {
  auto& rows = r.table(name, {"vertex", "length", "value"});
  bool truncated = false;
  for (std::size_t n = 0; n <= depth && !truncated; ++n) {
    for (const auto& v : level(model, n)) {
      auto x = f(v);
      if (nonzero_only && x.is_zero()) continue;
      if (rows.size() == kMaxTableRows) {
        truncated = true;
        break;
      }
      rows.push_back(json::array({vertex_text(v), v.length(), x.to_string()}));
    }
  }
  r.doc["tables"][name]["truncated"] = truncated;
}

json witness_json(const RatioWitness& w) {
  return json{{"family", w.family},
              {"function", w.f.name()},
              {"norm", magnitude_to_json(w.norm)},
              {"image_norm", magnitude_to_json(w.image_norm)},
              {"ratio", magnitude_to_json(w.ratio)},
              {"image_norm_exact", w.image_norm_exact}};
}

void norm_bounds_into(Report& r, const NormBounds& nb, json& into) {
  into["lower"] = magnitude_to_json(nb.lower);
  into["upper"] = magnitude_to_json(nb.upper);
  into["upper_certified"] = nb.upper_certified;
  into["lipschitz_used"] = nb.lipschitz_used;
  into["best"] = witness_json(nb.best);
  into["best_ratio"] = magnitude_to_json(nb.best.ratio);
  into["witness_lower"] = nb.witness_lower.name();
  into["witness_lower_image_norm"] = magnitude_to_json(nb.witness_lower_image_norm);
  into["candidates"] = nb.candidates;
  into["witness_radius"] = nb.witness_radius;
  if (nb.lower == nb.upper) into["norm"] = magnitude_to_json(nb.lower);
  r.verdict("operator-norm", nb.upper_certified ? (nb.best.ratio == nb.upper ? "sharp" : "bounded") : "estimated",
            keys::kNormBounds, "lower " + nb.lower.to_string() + ", upper " + nb.upper.to_string());
}

// ---- commands ----------------------------------------------------------------------

TreeModel tree_of(const RunSpec& s) { return parse_tree(*s.tree); }
SelfMap map_of(const RunSpec& s) { return parse_map(*s.map, tree_of(s)); }

void cmd_tree_show(const RunSpec& s, Report& r) {
  auto model = tree_of(s);
  auto depth = *s.budgets.depth;
  r.result()["name"] = model.name();
  r.result()["family"] = model.facts().family;
  if (model.facts().uniform_arity) r.result()["uniform_arity"] = *model.facts().uniform_arity;
  auto& levels = r.table("levels", {"level", "vertices"});
  auto& vertices = r.table("vertices", {"vertex", "length", "arity"});
  bool truncated = false;
  for (std::size_t n = 0; n <= depth; ++n) {
    std::size_t count = 0;
    for (const auto& v : level(model, n)) {
      ++count;
      if (vertices.size() < kMaxTableRows) {
        vertices.push_back(json::array({vertex_text(v), v.length(), model.arity(v)}));
      } else {
        truncated = true;
      }
    }
    levels.push_back(json::array({n, count}));
  }
  r.doc["tables"]["vertices"]["truncated"] = truncated;
}

void cmd_norm(const RunSpec& s, Report& r) {
  auto model = tree_of(s);
  auto f = parse_function(s.functions.front());
  auto depth = *s.budgets.depth;
  auto rep = lip_norm(f, model, depth);
  r.result()["function"] = f.name();
  r.result()["value"] = magnitude_to_json(rep.value);
  r.result()["attained_at"] = vertex_to_json(rep.attained_at);
  r.result()["exact"] = rep.exact;
  auto& rows = r.table("decay", {"level", "max_increment", "approx"});
  auto profile = decay_profile(f, model, depth);
  for (std::size_t n = 0; n < profile.size(); ++n) {
    rows.push_back(json::array({n + 1, magnitude_cell(profile[n]), profile[n].to_double()}));
  }
}

void cmd_bounded(const RunSpec& s, Report& r) {
  auto map = map_of(s);
  auto depth = *s.budgets.depth;
  auto v = classify_boundedness(map, depth);
  auto& res = r.result();
  res["status"] = to_string(v.status);
  res["theorem_key"] = v.theorem_key;
  res["reason"] = v.reason;
  res["heuristic"] = v.heuristic;
  res["observed_a"] = v.observed_a;
  res["probe"] = v.probe;
  if (v.witness_vertex) res["witness_vertex"] = vertex_to_json(*v.witness_vertex);
  if (v.witness_function) res["witness_function"] = v.witness_function->name();
  res["witness_preimages"] = json::array();
  for (const auto& p : v.witness_preimages) res["witness_preimages"].push_back(vertex_to_json(p));
  res["unit_increments"] = json::array();
  for (const auto& p : v.unit_increments) res["unit_increments"].push_back(vertex_to_json(p));
  r.verdict("boundedness", to_string(v.status), v.theorem_key, v.reason);
  auto& rows = r.table("min_image_length", {"level", "min_image_length"});
  for (std::size_t n = 0; n < v.min_image_length.size(); ++n) {
    rows.push_back(json::array({n, v.min_image_length[n] ? json(*v.min_image_length[n]) : json(nullptr)}));
  }
  if (v.status == BoundednessStatus::BoundedCertified) {
    auto nb = norm_bounds(map, depth, NormBoundsOptions{.witness_radius = *s.budgets.witness_radius});
    res["norm_bounds"] = json::object();
    norm_bounds_into(r, nb, res["norm_bounds"]);
    if (nb.lower == nb.upper) res["norm"] = magnitude_to_json(nb.lower);
  }
}

void cmd_opnorm(const RunSpec& s, Report& r) {
  auto map = map_of(s);
  auto depth = *s.budgets.depth;
  auto nb = norm_bounds(map, depth, NormBoundsOptions{.witness_radius = *s.budgets.witness_radius});
  norm_bounds_into(r, nb, r.result());
  value_table(r, "best_witness", nb.best.f, map.model(), std::min(depth, nb.witness_radius + 2), false);
  value_table(r, "best_witness_image", compose(map, nb.best.f), map.model(), std::min(depth, nb.witness_radius + 2),
              false);
}

json eigen_json(const EigenPair& p) {
  return json{{"lambda", scalar_to_json(p.lambda)},  {"function", p.f.name()},
              {"residual", magnitude_to_json(p.residual)}, {"residual_depth", p.residual_depth},
              {"accepted", p.accepted},                     {"theorem_key", p.theorem_key},
              {"orbit_terms", p.orbit_terms},               {"orbit_escaped", p.orbit_escaped}};
}

bool is_path_2m_plus_1(const SelfMap& map) {
  const auto& spec = map.spec();
  if (spec.kind != "affine-path") return false;
  auto get = [&](const char* k) {
    auto it = spec.params.find(k);
    return it == spec.params.end() ? std::string() : it->second;
  };
  return get("a") == "2" && get("b") == "1" && get("fixzero") != "true";
}

void cmd_spectrum_probe(const RunSpec& s, Report& r) {
  auto map = map_of(s);
  auto depth = *s.budgets.depth;
  auto max_power = *s.budgets.max_power;
  auto rep = point_spectrum_disk(map, depth, SpectralProbeOptions{.max_power = max_power, .iterate_depth = depth});
  auto& res = r.result();
  res["disk_radius"] = magnitude_to_json(rep.disk_radius);
  res["disk_radius_certified"] = rep.disk_radius_certified;
  res["zero_eigen"] = rep.zero_eigen;
  res["non_image_certified"] = rep.non_image_certified;
  if (rep.non_image_vertex) res["non_image_vertex"] = vertex_to_json(*rep.non_image_vertex);
  if (rep.injectivity_collision) {
    res["injectivity_collision"] = json::array(
        {vertex_to_json(rep.injectivity_collision->first), vertex_to_json(rep.injectivity_collision->second)});
  }
  if (rep.constant_map_special) {
    res["constant_map_special"] = json::array();
    for (const auto& x : *rep.constant_map_special) res["constant_map_special"].push_back(scalar_to_json(x));
    r.verdict("constant-map-spectrum", "{0,1}", keys::kConstantMapSpectrum);
  }
  res["compression_notes"] = json::array();
  for (const auto& n : rep.compression_notes) {
    res["compression_notes"].push_back(json{{"theorem_key", n.theorem_key}, {"text", n.text}});
    r.verdict("compression", "noted", n.theorem_key, n.text);
  }
  r.verdict("point-spectrum-disk", rep.disk_radius_certified ? "certified" : "estimated", keys::kPointSpectrumDisk,
            "point spectrum within |lambda| <= " + rep.disk_radius.to_string());
  if (rep.zero_eigen) {
    r.verdict("zero-eigenvalue", rep.non_image_certified ? "certified" : "observed", keys::kNonSurjectiveZero);
  }
  auto& rows = r.table("spectral_radius_upper", {"n", "value", "approx", "lipschitz_certified"});
  for (const auto& t : rep.spectral_radius_upper_sequence) {
    rows.push_back(json::array({t.n, magnitude_cell(t.value), t.value.to_double(), t.lipschitz_certified}));
  }
  r.verdict("spectral-radius", "upper-sequence", keys::kSpectralRadiusBound);

  if (!s.params.contains("lambda")) return;
  auto lambda = parse_scalar(s.params["lambda"]);
  auto mode = s.params.value("mode", std::string("eigen"));
  auto tol = *s.budgets.tolerance;
  auto horizon = *s.budgets.horizon;
  json probe{{"mode", mode}, {"lambda", scalar_to_json(lambda)}};
  if (mode == "power") {
    if (!is_path_2m_plus_1(map)) throw PreconditionError("mode 'power' needs the path map m -> 2m+1");
    auto pr = power_eigenfunction_path_tree(lambda, depth, tol);
    probe["eigenpair"] = eigen_json(pr.pair);
    probe["mu"] = scalar_to_json(pr.mu);
    auto& decay = r.table("power_decay", {"level", "max_increment", "approx"});
    for (std::size_t n = 0; n < pr.decay.size(); ++n) {
      decay.push_back(json::array({n + 1, magnitude_cell(pr.decay[n]), pr.decay[n].to_double()}));
    }
    r.verdict("eigenpair", pr.pair.accepted ? "accepted" : "rejected", pr.pair.theorem_key);
  } else {
    auto w = parse_vertex(s.params.value("w", json::array()));
    probe["w"] = vertex_to_json(w);
    if (mode == "eigen") {
      auto p = geometric_eigenfunction(map, w, lambda, depth, horizon);
      probe["eigenpair"] = eigen_json(p);
      value_table(r, "eigenfunction", p.f, map.model(), depth, true);
      r.verdict("eigenpair", p.accepted ? "accepted" : "rejected", p.theorem_key);
    } else {
      ResolventCase c;
      if (mode == "case1") {
        c = ResolventCase::InsideDisk;
      } else if (mode == "case2") {
        c = ResolventCase::OutsideDisk;
      } else if (mode == "case3") {
        c = ResolventCase::FinitePreimages;
      } else {
        throw SpecError("unknown spectrum mode '" + mode + "'");
      }
      auto sol = resolvent_solution(map, w, lambda, c, depth, horizon, tol);
      probe["case"] = to_string(sol.mode);
      probe["function"] = sol.f.name();
      probe["max_defect"] = magnitude_to_json(sol.max_defect);
      probe["verified"] = sol.verified;
      probe["emptiness"] = sol.emptiness;
      if (sol.chain_length) probe["chain_length"] = *sol.chain_length;
      if (sol.period) probe["period"] = *sol.period;
      value_table(r, "resolvent_solution", sol.f, map.model(), depth, true);
      r.verdict("dense-range", sol.verified ? "verified" : "unverified", sol.theorem_key);
    }
  }
  res["probe"] = probe;
}

void cmd_dynamics_report(const RunSpec& s, Report& r) {
  auto map = map_of(s);
  auto lambda = parse_scalar(s.params.value("lambda", json("1")));
  DynamicsBudgets b;
  b.depth = *s.budgets.depth;
  b.horizon = *s.budgets.horizon;
  b.max_power = *s.budgets.max_power;
  b.sample_levels = *s.budgets.sample_levels;
  auto rep = hypercyclicity_report(map, lambda, b);
  auto& res = r.result();
  res["lambda"] = scalar_to_json(rep.lambda);
  res["verdict"] = to_string(rep.verdict);
  res["reasons"] = json::array();
  for (const auto& reason : rep.reasons) {
    res["reasons"].push_back(
        json{{"condition", reason.condition}, {"theorem_key", reason.theorem_key}, {"evidence", reason.evidence}});
  }
  auto key = rep.reasons.empty() ? std::string(keys::kHypercyclicityOpen) : rep.reasons.front().theorem_key;
  r.verdict("hypercyclicity", to_string(rep.verdict), key,
            rep.reasons.empty() ? std::string() : rep.reasons.front().evidence);
  auto& cond = r.table("conditions", {"id", "theorem_key", "status", "detail"});
  res["conditions"] = json::array();
  for (const auto& c : rep.conditions) {
    cond.push_back(json::array({c.id, c.theorem_key, c.status, c.detail}));
    res["conditions"].push_back(
        json{{"id", c.id}, {"theorem_key", c.theorem_key}, {"status", c.status}, {"detail", c.detail}});
  }
  if (rep.table) {
    if (rep.table->c) res["separation_constant"] = *rep.table->c;
    auto& sep = r.table("separation", {"n", "vertex", "m", "certified", "image_length"});
    for (const auto& e : rep.table->entries) {
      sep.push_back(json::array({e.n, vertex_text(e.v), e.m, e.certified, e.image_length}));
    }
  }
}

void cmd_orbit(const RunSpec& s, Report& r) {
  auto map = map_of(s);
  auto v = parse_vertex(s.params.value("vertex", json::array()));
  map.model().validate(v);
  auto steps = s.params.contains("steps") ? to_size(s.params["steps"], "steps") : *s.budgets.horizon;
  auto tr = orbit(map, v, steps);
  auto& res = r.result();
  res["start"] = vertex_to_json(tr.start);
  res["cycle_detected"] = tr.cycle_detected;
  res["length_capped"] = tr.length_capped;
  if (tr.cycle_detected) {
    res["period"] = tr.period;
    res["entry"] = tr.entry;
  }
  auto& rows = r.table("orbit", {"n", "vertex", "length"});
  for (const auto& st : tr.steps) {
    rows.push_back(json::array({st.n, st.length <= 64 ? vertex_text(st.vertex) : std::string("..."), st.length}));
  }
}

void cmd_approx(const RunSpec& s, Report& r) {
  auto model = tree_of(s);
  auto g = parse_function(s.functions.front());
  auto eps = parse_scalar(s.params["epsilon"]);
  auto probe = to_size(s.params["probe_depth"], "probe_depth");
  auto check = to_size(s.params["check_depth"], "check_depth");
  auto a = finite_support_approx(g, eps, model, probe);
  auto err = lip_norm(g - a.f, model, check);
  bool within = approx_le(err.value, eps.abs());
  auto& res = r.result();
  res["n"] = a.n;
  res["m"] = a.m;
  res["support_depth"] = a.n + a.m;
  res["error_norm"] = magnitude_to_json(err.value);
  res["error_attained_at"] = vertex_to_json(err.attained_at);
  res["within_epsilon"] = within;
  r.verdict("finite-support-approximation", within ? "within-epsilon" : "outside-epsilon", keys::kFiniteSupportDensity,
            "||g - f|| = " + err.value.to_string() + " at depth " + std::to_string(check));
  auto& rows = r.table("approximation", {"level", "g", "f"});
  for (std::size_t n = 0; n <= std::min(check, a.n + a.m + 1); ++n) {
    auto v = level_vertices(model, n).front();
    rows.push_back(json::array({n, g(v).to_string(), a.f(v).to_string()}));
  }
}

std::string csv_cell(const json& x) {
  std::string s = x.is_string() ? x.get<std::string>() : x.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& c : command_table()) out.push_back(c.name);
    return out;
  }();
  return names;
}

json to_json(const RunSpec& spec) {
  json out{{"command", spec.command}, {"format", spec.format}};
  if (spec.tree) out["tree"] = *spec.tree;
  if (spec.map) out["map"] = *spec.map;
  out["functions"] = spec.functions;
  out["budgets"] = budgets_to_json(spec.budgets);
  out["params"] = spec.params;
  return out;
}

RunSpec run_spec_from_json(const json& j) {
  if (!j.is_object()) throw SpecError("a run spec must be a JSON object");
  RunSpec s;
  for (const auto& [key, value] : j.items()) {
    if (key == "command") {
      s.command = value.get<std::string>();
    } else if (key == "format") {
      s.format = value.get<std::string>();
    } else if (key == "tree") {
      s.tree = value;
    } else if (key == "map") {
      s.map = value;
    } else if (key == "functions") {
      if (!value.is_array()) throw SpecError("functions must be an array");
      s.functions = value.get<std::vector<json>>();
    } else if (key == "budgets") {
      if (!value.is_object()) throw SpecError("budgets must be an object");
      for (const auto& [bk, bv] : value.items()) set_budget(s.budgets, bk, bv);
    } else if (key == "params") {
      if (!value.is_object()) throw SpecError("params must be an object");
      s.params = value;
    } else {
      throw SpecError("unknown field '" + key + "' in run spec");
    }
  }
  return s;
}

Budgets parse_budget_list(std::string_view text) {
  Budgets b;
  for (const auto& [k, v] : split_params(text)) {
    if (k == "tolerance") {
      b.tolerance = parse_double_text(v, k);
    } else {
      set_budget(b, k, json(parse_size_text(v, k)));
    }
  }
  return b;
}

RunSpec normalize(RunSpec s, const Budgets& env_defaults) {
  const auto& info = command_info(s.command);
  if (s.format != "json" && s.format != "csv") throw SpecError("format must be 'json' or 'csv'");

  auto resolved = overlay(overlay(info.defaults, restrict_to(env_defaults, info.budgets)), s.budgets);
  auto given = budgets_to_json(s.budgets);
  for (const auto& [k, v] : given.items()) {
    if (!contains(info.budgets, k)) throw SpecError("budget '" + k + "' does not apply to '" + s.command + "'");
  }
  s.budgets = restrict_to(resolved, info.budgets);

  for (const auto& [k, v] : s.params.items()) {
    if (!contains(info.params, k)) throw SpecError("parameter '" + k + "' does not apply to '" + s.command + "'");
  }
  if (s.params.contains("lambda")) s.params["lambda"] = parse_scalar(s.params["lambda"]).to_string();
  if (s.params.contains("w")) s.params["w"] = vertex_to_json(parse_vertex(s.params["w"]));
  if (s.params.contains("vertex")) s.params["vertex"] = vertex_to_json(parse_vertex(s.params["vertex"]));
  if (s.params.contains("steps")) s.params["steps"] = to_size(s.params["steps"], "steps");
  if (s.params.contains("mode")) {
    auto mode = s.params["mode"].get<std::string>();
    static const std::vector<std::string> modes = {"eigen", "power", "case1", "case2", "case3"};
    if (!contains(modes, mode)) throw SpecError("unknown spectrum mode '" + mode + "'");
    if (!s.params.contains("lambda")) throw SpecError("--mode needs --lambda");
  }
  if (s.command == "spectrum probe" && s.params.contains("lambda") && !s.params.contains("mode")) {
    s.params["mode"] = "eigen";
  }
  if (s.command == "approx") {
    s.params["epsilon"] = parse_scalar(s.params.value("epsilon", json("1/2"))).to_string();
    s.params["probe_depth"] = to_size(s.params.value("probe_depth", json(16)), "probe_depth");
    s.params["check_depth"] = to_size(s.params.value("check_depth", json(32)), "check_depth");
  }

  if (info.needs_map && !s.map) throw SpecError("'" + s.command + "' needs --map");
  if (!info.needs_map && s.map) throw SpecError("'" + s.command + "' takes no map");
  if (s.functions.size() != info.functions) {
    throw SpecError("'" + s.command + "' takes " + std::to_string(info.functions) + " function(s), got " +
                    std::to_string(s.functions.size()));
  }
  if (!s.tree) s.tree = s.map ? default_tree_for_map(*s.map) : json{{"kind", "path"}};
  if (!s.tree->contains("params")) (*s.tree)["params"] = json::object();

  // Parsing validates every document before dispatch.
  auto model = parse_tree(*s.tree);
  if (s.map) parse_map(*s.map, model);
  for (const auto& f : s.functions) parse_function(f);
  return s;
}

json execute(const RunSpec& s) {
  Report r(s);
  if (s.command == "tree show") {
    cmd_tree_show(s, r);
  } else if (s.command == "norm") {
    cmd_norm(s, r);
  } else if (s.command == "bounded") {
    cmd_bounded(s, r);
  } else if (s.command == "opnorm") {
    cmd_opnorm(s, r);
  } else if (s.command == "spectrum probe") {
    cmd_spectrum_probe(s, r);
  } else if (s.command == "dynamics report") {
    cmd_dynamics_report(s, r);
  } else if (s.command == "orbit") {
    cmd_orbit(s, r);
  } else if (s.command == "approx") {
    cmd_approx(s, r);
  } else {
    throw SpecError("unknown command '" + s.command + "'");
  }
  return r.doc;
}

std::string to_csv(const json& report) {
  std::ostringstream out;
  bool first = true;
  for (const auto& [name, table] : report.at("tables").items()) {
    if (!first) out << '\n';
    first = false;
    out << "# " << name << '\n';
    const auto& cols = table.at("columns");
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << csv_cell(cols[i]);
    out << '\n';
    for (const auto& row : table.at("rows")) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
      out << '\n';
    }
  }
  return out.str();
}

namespace {

struct Flags {
  std::string spec_file, tree, map, format, lambda, w, mode, vertex, epsilon;
  std::vector<std::string> functions;
  std::size_t depth = 0, horizon = 0, max_power = 0, sample_levels = 0, witness_radius = 0, steps = 0,
              probe_depth = 0, check_depth = 0;
  double tolerance = 0;
  std::map<std::string, CLI::Option*> opts;

  bool given(const std::string& name) const {
    auto it = opts.find(name);
    return it != opts.end() && it->second->count() > 0;
  }
};

void add_flags(CLI::App* sub, Flags& f, const CommandInfo& info) {
  f.opts["spec"] = sub->add_option("--spec", f.spec_file, "RunSpec JSON file; flags override its fields");
  f.opts["format"] = sub->add_option("--format", f.format, "json or csv");
  f.opts["tree"] = sub->add_option("--tree", f.tree, "path | comb | homogeneous:q=Q | JSON");
  if (info.needs_map) {
    f.opts["map"] = sub->add_option("--map", f.map, "affine-path:a=A,b=B[,fixzero] | constant:target=[..] | comb | JSON");
  }
  if (info.functions > 0) {
    f.opts["function"] =
        sub->add_option("--function", f.functions, "indicator:w=[..] | linear | harmonic | power-mu:mu=M | JSON");
  }
  auto budget = [&](const std::string& key, const std::string& flag, auto& target, const std::string& help) {
    if (contains(info.budgets, key)) f.opts[key] = sub->add_option(flag, target, help);
  };
  budget("depth", "--depth", f.depth, "truncation depth");
  budget("horizon", "--horizon", f.horizon, "iteration horizon");
  budget("tolerance", "--tolerance", f.tolerance, "acceptance tolerance for inexact data");
  budget("max_power", "--max-power", f.max_power, "largest iterate power");
  budget("sample_levels", "--sample-levels", f.sample_levels, "levels sampled for w and v");
  budget("witness_radius", "--witness-radius", f.witness_radius, "levels searched for norm witnesses");
  auto param = [&](const std::string& key, const std::string& flag, auto& target, const std::string& help) {
    if (contains(info.params, key)) f.opts[key] = sub->add_option(flag, target, help);
  };
  param("lambda", "--lambda", f.lambda, "complex scalar a+bi");
  param("w", "--w", f.w, "vertex [i,j,..]");
  param("mode", "--mode", f.mode, "eigen | power | case1 | case2 | case3");
  param("vertex", "--vertex", f.vertex, "start vertex [i,j,..]");
  param("steps", "--steps", f.steps, "orbit length");
  param("epsilon", "--epsilon", f.epsilon, "target accuracy");
  param("probe_depth", "--probe-depth", f.probe_depth, "depth of the decay probe");
  param("check_depth", "--check-depth", f.check_depth, "depth of the error check");
}

RunSpec spec_from_flags(const Flags& f, const std::string& command) {
  RunSpec s;
  if (f.given("spec")) {
    std::ifstream in(f.spec_file);
    if (!in) throw SpecError("cannot read spec file '" + f.spec_file + "'");
    json j;
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw SpecError(std::string("malformed spec file: ") + e.what());
    }
    s = run_spec_from_json(j);
    if (!s.command.empty() && s.command != command) {
      throw SpecError("spec file is for '" + s.command + "', not '" + command + "'");
    }
  }
  s.command = command;
  if (f.given("format")) s.format = f.format;
  if (f.given("tree")) s.tree = tree_flag_to_json(f.tree);
  if (f.given("map")) s.map = map_flag_to_json(f.map);
  if (f.given("function")) {
    s.functions.clear();
    for (const auto& text : f.functions) s.functions.push_back(function_flag_to_json(text));
  }
  if (f.given("depth")) s.budgets.depth = f.depth;
  if (f.given("horizon")) s.budgets.horizon = f.horizon;
  if (f.given("tolerance")) s.budgets.tolerance = f.tolerance;
  if (f.given("max_power")) s.budgets.max_power = f.max_power;
  if (f.given("sample_levels")) s.budgets.sample_levels = f.sample_levels;
  if (f.given("witness_radius")) s.budgets.witness_radius = f.witness_radius;
  if (f.given("lambda")) s.params["lambda"] = f.lambda;
  if (f.given("w")) s.params["w"] = vertex_to_json(parse_vertex(std::string_view(f.w)));
  if (f.given("mode")) s.params["mode"] = f.mode;
  if (f.given("vertex")) s.params["vertex"] = vertex_to_json(parse_vertex(std::string_view(f.vertex)));
  if (f.given("steps")) s.params["steps"] = f.steps;
  if (f.given("epsilon")) s.params["epsilon"] = f.epsilon;
  if (f.given("probe_depth")) s.params["probe_depth"] = f.probe_depth;
  if (f.given("check_depth")) s.params["check_depth"] = f.check_depth;
  return s;
}

void write_error(std::ostream& err, const std::string& kind, const std::string& message, int status) {
  err << json{{"schema", kReportSchema}, {"error", {{"kind", kind}, {"message", message}, {"exit_status", status}}}}
             .dump()
      << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Composition operators on the little Lipschitz space of rooted trees", "treelip"};
  app.require_subcommand(1);
  std::map<std::string, Flags> flags;
  std::map<std::string, CLI::App*> leaves;
  std::map<std::string, CLI::App*> groups;
  for (const auto& info : command_table()) {
    CLI::App* parent = &app;
    std::string leaf = info.name;
    if (auto space = info.name.find(' '); space != std::string::npos) {
      auto group = info.name.substr(0, space);
      leaf = info.name.substr(space + 1);
      if (!groups.count(group)) {
        groups[group] = app.add_subcommand(group, group + " commands");
        groups[group]->require_subcommand(1);
      }
      parent = groups[group];
    }
    auto* sub = parent->add_subcommand(leaf, info.summary);
    add_flags(sub, flags[info.name], info);
    leaves[info.name] = sub;
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    write_error(err, "SpecError", e.what(), kSpecInvalid);
    return kSpecInvalid;
  }

  std::string command;
  for (const auto& [name, sub] : leaves) {
    if (sub->parsed()) command = name;
  }
  try {
    Budgets env;
    if (const char* text = std::getenv(kBudgetsEnv); text != nullptr && *text != '\0') env = parse_budget_list(text);
    auto spec = normalize(spec_from_flags(flags[command], command), env);
    auto report = execute(spec);
    if (spec.format == "csv") {
      out << to_csv(report);
    } else {
      out << report.dump(2) << '\n';
    }
    return kOk;
  } catch (const SpecError& e) {
    write_error(err, e.kind(), e.what(), kSpecInvalid);
    return kSpecInvalid;
  } catch (const ResourceBudgetExceeded& e) {
    write_error(err, e.kind(), e.what(), kBudgetExhausted);
    return kBudgetExhausted;
  } catch (const PreconditionError& e) {
    write_error(err, e.kind(), e.what(), kPreconditionUnmet);
    return kPreconditionUnmet;
  } catch (const TheoremViolation& e) {
    write_error(err, "TheoremViolation", e.what(), kTheoremViolated);
    return kTheoremViolated;
  } catch (const json::exception& e) {
    write_error(err, "SpecError", e.what(), kSpecInvalid);
    return kSpecInvalid;
  } catch (const std::exception& e) {
    write_error(err, "Error", e.what(), kFailure);
    return kFailure;
  }
}

}  // namespace treelip::cli
