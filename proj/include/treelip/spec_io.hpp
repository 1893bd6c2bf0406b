#pragma once

#include "json.hpp"
#include <string>
#include <string_view>

#include "treelip/comp_op.hpp"
#include "treelip/lip.hpp"
#include "treelip/tree.hpp"

namespace treelip {

using json = nlohmann::json;

// JSON documents for trees, maps and functions. Unknown fields are
// rejected with SpecError. The short flag forms accepted by the CLI are
// normalized to these documents first.

VertexPath parse_vertex(const json& j);
VertexPath parse_vertex(std::string_view text);
json vertex_to_json(const VertexPath& v);

// {"kind": "path" | "homogeneous" | "comb" | "custom-table", "params": {...}}
TreeModel parse_tree(const json& j);
// "path", "comb", "homogeneous:q=3", "custom-table:..." is JSON only, or a
// JSON document.
json tree_flag_to_json(std::string_view text);

// {"kind": "affine-path", "a", "b", "fixzero"} | {"kind": "constant", "target"} |
// {"kind": "comb"} | {"kind": "table", "entries", "default"} |
// {"kind": "path-halving"} | {"kind": "path-even-collapse"}, each with an
// optional "metadata" block.
SelfMap parse_map(const json& j, const TreeModel& tree);
json map_flag_to_json(std::string_view text);
// The tree a map spec lives on when no tree is given.
json default_tree_for_map(const json& map_spec);

// {"kind": "table", "entries": [[path, re, im], ...]} |
// {"kind": "builtin", "name": "indicator|linear|harmonic|power-mu", "params": {...}}
TreeFunction parse_function(const json& j);
json function_flag_to_json(std::string_view text);

Scalar parse_scalar(const json& j);
json scalar_to_json(const Scalar& s);
json magnitude_to_json(const Magnitude& m);

// Splits "k1=v1,k2=[a,b],flag" on top-level commas.
std::vector<std::pair<std::string, std::string>> split_params(std::string_view text);

}  // namespace treelip
