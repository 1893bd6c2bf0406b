#include "treelip/spec_io.hpp"

#include <set>

#include "treelip/errors.hpp"

namespace treelip {

namespace {

void reject_unknown(const json& j, std::initializer_list<std::string_view> allowed, std::string_view what) {
  if (!j.is_object()) throw SpecError(std::string(what) + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw SpecError("unknown field '" + key + "' in " + std::string(what));
  }
}

const json& require(const json& j, const char* key, std::string_view what) {
  if (!j.contains(key)) throw SpecError(std::string(what) + " is missing '" + key + "'");
  return j.at(key);
}

std::int64_t as_int(const json& j, std::string_view what) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_string()) {
    try {
      std::size_t used = 0;
      auto s = j.get<std::string>();
      auto v = std::stoll(s, &used);
      if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
  }
  throw SpecError(std::string(what) + " must be an integer");
}

std::uint64_t as_count(const json& j, std::string_view what) {
  auto v = as_int(j, what);
  if (v < 0) throw SpecError(std::string(what) + " must be non-negative");
  return static_cast<std::uint64_t>(v);
}

bool as_bool(const json& j, std::string_view what) {
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_string()) {
    auto s = j.get<std::string>();
    if (s == "true" || s == "1" || s.empty()) return true;
    if (s == "false" || s == "0") return false;
  }
  throw SpecError(std::string(what) + " must be a boolean");
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t");
  auto e = s.find_last_not_of(" \t");
  return b == std::string_view::npos ? std::string() : std::string(s.substr(b, e - b + 1));
}

// "kind:params" -> (kind, params)
std::pair<std::string, std::vector<std::pair<std::string, std::string>>> split_flag(std::string_view text) {
  auto colon = text.find(':');
  std::string kind = trim(text.substr(0, colon));
  if (kind.empty()) throw SpecError("empty specification '" + std::string(text) + "'");
  if (colon == std::string_view::npos) return {kind, {}};
  return {kind, split_params(text.substr(colon + 1))};
}

json parse_json_text(std::string_view text, std::string_view what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SpecError("malformed " + std::string(what) + " JSON: " + e.what());
  }
}

bool looks_like_json(std::string_view text) {
  auto t = trim(text);
  return !t.empty() && t.front() == '{';
}

MapFacts parse_metadata(const json& j, MapFacts facts) {
  reject_unknown(j,
                 {"lipschitz_number", "lipschitz_bound", "injective", "growth_threshold", "nonconstant_set_finite",
                  "constant_value", "no_periodic_points", "preimage_times_finite", "separation_base",
                  "separation_constant", "parent_separation_base", "bounded_separation"},
                 "map metadata");
  if (j.contains("lipschitz_number")) facts.lipschitz_number = as_count(j["lipschitz_number"], "lipschitz_number");
  if (j.contains("lipschitz_bound")) facts.lipschitz_bound = as_count(j["lipschitz_bound"], "lipschitz_bound");
  if (j.contains("injective")) facts.injective = as_bool(j["injective"], "injective");
  if (j.contains("growth_threshold")) facts.growth_threshold = as_count(j["growth_threshold"], "growth_threshold");
  if (j.contains("nonconstant_set_finite")) {
    facts.nonconstant_set_finite = as_bool(j["nonconstant_set_finite"], "nonconstant_set_finite");
  }
  if (j.contains("constant_value")) facts.constant_value = parse_vertex(j["constant_value"]);
  if (j.contains("no_periodic_points")) facts.no_periodic_points = as_bool(j["no_periodic_points"], "no_periodic_points");
  if (j.contains("preimage_times_finite")) {
    facts.preimage_times_finite = as_bool(j["preimage_times_finite"], "preimage_times_finite");
  }
  if (j.contains("separation_base")) facts.separation_base = as_count(j["separation_base"], "separation_base");
  if (j.contains("separation_constant")) {
    facts.separation_constant = as_count(j["separation_constant"], "separation_constant");
  }
  if (j.contains("parent_separation_base")) {
    facts.parent_separation_base = as_count(j["parent_separation_base"], "parent_separation_base");
  }
  if (j.contains("bounded_separation")) {
    const auto& b = j["bounded_separation"];
    reject_unknown(b, {"w", "bound"}, "bounded_separation");
    facts.bounded_separation =
        SeparationBound{parse_vertex(require(b, "w", "bounded_separation")),
                        as_count(require(b, "bound", "bounded_separation"), "bounded_separation.bound")};
  }
  return facts;
}

std::string tree_kind_of(const TreeModel& tree) { return tree.facts().family; }

}  // namespace

std::vector<std::pair<std::string, std::string>> split_params(std::string_view text) {
  std::vector<std::pair<std::string, std::string>> out;
  int nesting = 0;
  std::string current;
  auto flush = [&]() {
    auto item = trim(current);
    current.clear();
    if (item.empty()) return;
    auto eq = item.find('=');
    if (eq == std::string::npos) {
      out.emplace_back(item, "");
    } else {
      out.emplace_back(trim(item.substr(0, eq)), trim(item.substr(eq + 1)));
    }
  };
  for (char ch : text) {
    if (ch == '[' || ch == '{') ++nesting;
    if (ch == ']' || ch == '}') --nesting;
    if (ch == ',' && nesting == 0) {
      flush();
    } else {
      current += ch;
    }
  }
  if (nesting != 0) throw SpecError("unbalanced brackets in '" + std::string(text) + "'");
  flush();
  return out;
}

// ---- vertices and scalars ----------------------------------------------------

VertexPath parse_vertex(const json& j) {
  if (j.is_string()) return parse_vertex(std::string_view(j.get_ref<const std::string&>()));
  if (!j.is_array()) throw SpecError("a vertex is an array of child indices, e.g. [0,1]");
  std::vector<VertexPath::Index> idx;
  for (const auto& x : j) {
    if (!x.is_number_integer() || x.get<std::int64_t>() < 0) {
      throw SpecError("vertex indices must be non-negative integers");
    }
    idx.push_back(static_cast<VertexPath::Index>(x.get<std::int64_t>()));
  }
  return VertexPath(std::move(idx));
}

VertexPath parse_vertex(std::string_view text) {
  auto t = trim(text);
  if (t.empty() || t.front() != '[') throw SpecError("a vertex is written [i,j,...], got '" + t + "'");
  return parse_vertex(parse_json_text(t, "vertex"));
}

json vertex_to_json(const VertexPath& v) {
  json out = json::array();
  for (auto x : v.indices()) out.push_back(x);
  return out;
}

Scalar parse_scalar(const json& j) {
  if (j.is_number_integer()) return Scalar(static_cast<long>(j.get<std::int64_t>()));
  if (j.is_number_float()) return Scalar::approx({j.get<double>(), 0.0});
  if (j.is_string()) return Scalar::parse(j.get<std::string>());
  throw SpecError("a scalar is a number or a string like \"1/2+3i\"");
}

json scalar_to_json(const Scalar& s) {
  json out{{"value", s.to_string()}, {"exact", s.exact()}};
  auto z = s.to_complex();
  out["re"] = z.real();
  out["im"] = z.imag();
  return out;
}

json magnitude_to_json(const Magnitude& m) {
  return json{{"value", m.to_string()}, {"approx", m.to_double()}, {"exact", m.exact()}};
}

// ---- trees ---------------------------------------------------------------------

TreeModel parse_tree(const json& j) {
  reject_unknown(j, {"kind", "params"}, "tree spec");
  auto kind = require(j, "kind", "tree spec").get<std::string>();
  json params = j.value("params", json::object());
  if (kind == "path") {
    reject_unknown(params, {}, "path tree params");
    return path_tree();
  }
  if (kind == "homogeneous") {
    reject_unknown(params, {"q"}, "homogeneous tree params");
    auto q = as_count(require(params, "q", "homogeneous tree params"), "q");
    if (q < 1 || q > 1024) throw SpecError("homogeneous tree needs 1 <= q <= 1024");
    return homogeneous_tree(static_cast<std::uint32_t>(q));
  }
  if (kind == "comb") {
    reject_unknown(params, {}, "comb tree params");
    return comb_tree();
  }
  if (kind == "custom-table") {
    reject_unknown(params, {"table", "default"}, "custom-table params");
    auto def = as_count(require(params, "default", "custom-table params"), "default");
    std::map<VertexPath, std::uint32_t> table;
    for (const auto& row : params.value("table", json::array())) {
      if (!row.is_array() || row.size() != 2) throw SpecError("custom-table rows are [path, arity]");
      auto a = as_count(row[1], "arity");
      if (a < 1) throw SpecError("custom-table arity must be >= 1");
      table[parse_vertex(row[0])] = static_cast<std::uint32_t>(a);
    }
    if (def < 1) throw SpecError("custom-table default arity must be >= 1");
    return custom_table_tree(std::move(table), static_cast<std::uint32_t>(def));
  }
  throw SpecError("unknown tree kind '" + kind + "'");
}

json tree_flag_to_json(std::string_view text) {
  if (looks_like_json(text)) return parse_json_text(text, "tree");
  auto [kind, params] = split_flag(text);
  json out{{"kind", kind}};
  if (kind == "binary") return json{{"kind", "homogeneous"}, {"params", {{"q", 2}}}};
  json p = json::object();
  for (const auto& [k, v] : params) {
    if (k == "q" || k == "default") {
      p[k] = as_int(json(v), k);
    } else {
      throw SpecError("unknown tree parameter '" + k + "'");
    }
  }
  if (!p.empty()) out["params"] = p;
  return out;
}

// ---- maps ----------------------------------------------------------------------

SelfMap parse_map(const json& j, const TreeModel& tree) {
  if (!j.is_object()) throw SpecError("map spec must be a JSON object");
  auto kind = require(j, "kind", "map spec").get<std::string>();
  auto need_tree = [&](std::string_view family) {
    if (tree_kind_of(tree) != family) {
      throw SpecError("map kind '" + kind + "' lives on the " + std::string(family) + " tree, not on '" +
                      tree.name() + "'");
    }
  };
  std::optional<SelfMap> map;
  if (kind == "affine-path") {
    reject_unknown(j, {"kind", "a", "b", "fixzero", "metadata"}, "affine-path map");
    need_tree("path");
    map = affine_path_map(as_int(require(j, "a", "affine-path map"), "a"), as_int(j.value("b", json(0)), "b"),
                          j.contains("fixzero") && as_bool(j["fixzero"], "fixzero"));
  } else if (kind == "constant") {
    reject_unknown(j, {"kind", "target", "metadata"}, "constant map");
    map = constant_map(tree, parse_vertex(require(j, "target", "constant map")));
  } else if (kind == "comb") {
    reject_unknown(j, {"kind", "metadata"}, "comb map");
    need_tree("comb");
    map = comb_map();
  } else if (kind == "table") {
    reject_unknown(j, {"kind", "entries", "default", "metadata"}, "table map");
    auto def = j.value("default", std::string("identity"));
    if (def != "identity" && def != "error") throw SpecError("table map default must be 'identity' or 'error'");
    std::map<VertexPath, VertexPath> entries;
    for (const auto& row : require(j, "entries", "table map")) {
      if (!row.is_array() || row.size() != 2) throw SpecError("table map entries are [from, to]");
      entries[parse_vertex(row[0])] = parse_vertex(row[1]);
    }
    try {
      map = table_map(tree, std::move(entries), def == "identity" ? TableDefault::Identity : TableDefault::Error);
    } catch (const InvalidVertex& e) {
      throw SpecError(e.what());
    }
  } else if (kind == "path-halving") {
    reject_unknown(j, {"kind", "metadata"}, "path-halving map");
    need_tree("path");
    map = path_halving_map();
  } else if (kind == "path-even-collapse") {
    reject_unknown(j, {"kind", "metadata"}, "path-even-collapse map");
    need_tree("path");
    map = path_even_collapse_map();
  } else {
    throw SpecError("unknown map kind '" + kind + "'");
  }
  if (j.contains("metadata")) *map = map->with_facts(parse_metadata(j["metadata"], map->facts()));
  return *map;
}

json map_flag_to_json(std::string_view text) {
  if (looks_like_json(text)) return parse_json_text(text, "map");
  auto [kind, params] = split_flag(text);
  json out{{"kind", kind}};
  for (const auto& [k, v] : params) {
    if (kind == "affine-path" && (k == "a" || k == "b")) {
      out[k] = as_int(json(v), k);
    } else if (kind == "affine-path" && k == "fixzero") {
      out[k] = v.empty() ? true : as_bool(json(v), k);
    } else if (kind == "constant" && k == "target") {
      out[k] = vertex_to_json(parse_vertex(std::string_view(v)));
    } else {
      throw SpecError("unknown parameter '" + k + "' for map kind '" + kind + "'");
    }
  }
  return out;
}

json default_tree_for_map(const json& map_spec) {
  auto kind = map_spec.value("kind", std::string());
  if (kind == "comb") return json{{"kind", "comb"}};
  return json{{"kind", "path"}};
}

// ---- functions -----------------------------------------------------------------

TreeFunction parse_function(const json& j) {
  if (!j.is_object()) throw SpecError("function spec must be a JSON object");
  auto kind = require(j, "kind", "function spec").get<std::string>();
  if (kind == "table") {
    reject_unknown(j, {"kind", "entries"}, "table function");
    std::map<VertexPath, Scalar> entries;
    for (const auto& row : require(j, "entries", "table function")) {
      if (!row.is_array() || row.size() < 2 || row.size() > 3) {
        throw SpecError("table function entries are [path, re] or [path, re, im]");
      }
      Scalar re = parse_scalar(row[1]);
      Scalar im = row.size() == 3 ? parse_scalar(row[2]) : Scalar(0);
      entries[parse_vertex(row[0])] = re + Scalar(Rational(0), Rational(1)) * im;
    }
    return table_function(std::move(entries));
  }
  if (kind == "builtin") {
    reject_unknown(j, {"kind", "name", "params"}, "builtin function");
    auto name = require(j, "name", "builtin function").get<std::string>();
    json params = j.value("params", json::object());
    if (name == "indicator") {
      reject_unknown(params, {"w"}, "indicator params");
      return indicator(parse_vertex(require(params, "w", "indicator params")));
    }
    if (name == "linear") {
      reject_unknown(params, {}, "linear params");
      return length_function();
    }
    if (name == "harmonic") {
      reject_unknown(params, {}, "harmonic params");
      return harmonic_function();
    }
    if (name == "power-mu") {
      reject_unknown(params, {"mu"}, "power-mu params");
      return power_function(parse_scalar(require(params, "mu", "power-mu params")));
    }
    throw SpecError("unknown builtin function '" + name + "'");
  }
  throw SpecError("unknown function kind '" + kind + "'");
}

json function_flag_to_json(std::string_view text) {
  if (looks_like_json(text)) return parse_json_text(text, "function");
  auto [name, params] = split_flag(text);
  json p = json::object();
  for (const auto& [k, v] : params) {
    if (name == "indicator" && k == "w") {
      p[k] = vertex_to_json(parse_vertex(std::string_view(v)));
    } else if (name == "power-mu" && k == "mu") {
      p[k] = v;
    } else {
      throw SpecError("unknown parameter '" + k + "' for function '" + name + "'");
    }
  }
  json out{{"kind", "builtin"}, {"name", name}};
  if (!p.empty()) out["params"] = p;
  return out;
}

}  // namespace treelip
