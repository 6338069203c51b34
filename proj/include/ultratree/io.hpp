#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "ultratree/analysis.hpp"
#include "ultratree/metric.hpp"
#include "ultratree/represent.hpp"
#include "ultratree/sdz.hpp"
#include "ultratree/tree.hpp"

namespace ultratree {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Parses "p/2^k" with integer p >= 0 and 0 <= k <= 1074; nullopt if the text
/// is not of that form. The result is exact.
std::optional<Value> parse_dyadic_literal(std::string_view text);

/// Header row of labels, then one row per point. A row may start with its
/// label. Cells are decimals or dyadic literals; dyadic cells are exact and
/// never snapped. Blank lines are ignored. Throws ParseError.
DistanceMatrix parse_matrix_csv(std::string_view text);
std::string write_matrix_csv(const DistanceMatrix& m);

/// {"labels": [...], "d": [[...], ...]} with an optional "schema_version".
/// Cells are numbers or dyadic-literal strings.
DistanceMatrix parse_matrix_json(std::string_view text);
Json matrix_to_json(const DistanceMatrix& m);

enum class MatrixFormat { csv, json };
/// JSON if the first non-blank character is '{', CSV otherwise.
MatrixFormat detect_matrix_format(std::string_view text);
DistanceMatrix parse_matrix(std::string_view text);
std::string write_matrix(const DistanceMatrix& m, MatrixFormat format);

/// Node: {"children": {"<label>": node, ...}, "stalk": bool}. A tree document
/// is {"schema_version": 1, "root": node} with optional "members", a list of
/// branches given as label arrays (all stalk-terminated).
Json tree_to_json(const PrunedTree& t);
PrunedTree tree_from_json(const Json& node);
Json tree_document(const PrunedTree& t, const std::vector<Branch>* members = nullptr);

struct TreeDocument {
    PrunedTree tree;
    std::vector<Branch> members;
};
TreeDocument parse_tree_document(std::string_view text);

/// {"radii": [...], "zero_tail": bool}. Generated schedules list r_0..r_h.
Json schedule_to_json(const RadiusSchedule& s);
RadiusSchedule schedule_from_json(const Json& j);

Json branch_to_json(const Branch& b);
/// Schedule, tree, the member labels of every ball and φ of every point.
Json representing_tree_to_json(const Representation& rep);

Json validation_to_json(const DistanceMatrix& m, const ValidationReport& r);
Json verdict_to_json(const Verdict& v);
Json analysis_to_json(const AnalysisReport& r);

/// {"schema_version": 1, "balls": [{"center": "<label>", "radius": r}, ...]};
/// radii may be dyadic-literal strings.
std::vector<BallRequest> parse_ball_requests(std::string_view text, const DistanceMatrix& m);
Json vitali_to_json(const DistanceMatrix& m, const std::vector<BallRequest>& selected);

/// Pretty-printed with a trailing newline.
std::string dump(const Json& j);

}  // namespace ultratree
