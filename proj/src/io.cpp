#include "ultratree/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "ultratree/errors.hpp"
#include "ultratree/format.hpp"

namespace ultratree {

namespace {

bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\r'; }

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_blank(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_blank(s.back())) s.remove_suffix(1);
    return s;
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset) {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

Json parse_json(std::string_view text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        const auto [line, column] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
        throw ParseError(line, column, "invalid JSON");
    }
}

void reject_unknown(const Json& j, const std::string& where, std::initializer_list<std::string_view> allowed) {
    if (!j.is_object()) throw SchemaError(where, "expected an object");
    for (const auto& [key, value] : j.items())
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw SchemaError(where + "/" + key, "unknown field");
}

void check_schema_version(const Json& j) {
    if (!j.contains("schema_version")) return;
    const Json& v = j["schema_version"];
    if (!v.is_number_integer() || v.get<int>() != kSchemaVersion)
        throw SchemaError("/schema_version", "unsupported schema version");
}

struct Cell {
    Value value;
    bool exact;
};

std::optional<Cell> parse_cell(std::string_view text) {
    if (auto v = parse_dyadic_literal(text)) return Cell{*v, true};
    double v = 0;
    const char* end = text.data() + text.size();
    auto res = std::from_chars(text.data(), end, v);
    if (text.empty() || res.ec != std::errc{} || res.ptr != end) return std::nullopt;
    return Cell{v, false};
}

std::optional<Cell> json_cell(const Json& j) {
    if (j.is_number()) return Cell{j.get<double>(), false};
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (auto v = parse_dyadic_literal(s)) return Cell{*v, true};
    }
    return std::nullopt;
}

// CSV fields with optional double-quote quoting. Columns are 1-based.
struct Field {
    std::string text;
    std::size_t column;
};

std::vector<Field> split_csv_line(std::string_view line, std::size_t line_no) {
    std::vector<Field> out;
    std::size_t i = 0;
    while (true) {
        while (i < line.size() && is_blank(line[i])) ++i;
        Field f{{}, i + 1};
        if (i < line.size() && line[i] == '"') {
            ++i;
            while (true) {
                if (i >= line.size()) throw ParseError(line_no, f.column, "unterminated quoted field");
                if (line[i] == '"') {
                    if (i + 1 < line.size() && line[i + 1] == '"') {
                        f.text += '"';
                        i += 2;
                        continue;
                    }
                    ++i;
                    break;
                }
                f.text += line[i++];
            }
            while (i < line.size() && is_blank(line[i])) ++i;
            if (i < line.size() && line[i] != ',') throw ParseError(line_no, i + 1, "expected ',' after quoted field");
        } else {
            const std::size_t start = i;
            while (i < line.size() && line[i] != ',') ++i;
            f.text = std::string(trim(line.substr(start, i - start)));
        }
        out.push_back(std::move(f));
        if (i >= line.size()) break;
        ++i;  // comma
    }
    return out;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos && trim(s) == s && !s.empty()) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string dyadic_literal(Value v) {
    int e = 0;
    const double mant = std::frexp(v, &e);
    auto p = static_cast<std::uint64_t>(std::ldexp(mant, 53));
    int k = 53 - e;
    while (k > 0 && p % 2 == 0) {
        p /= 2;
        --k;
    }
    if (k < 0) return format_value(v);
    return std::to_string(p) + "/2^" + std::to_string(k);
}

std::string scope_of(bool exact, const std::optional<std::size_t>& horizon) {
    if (exact || !horizon) return "exact";
    return "up to horizon " + std::to_string(*horizon);
}

Json labels_of(const DistanceMatrix& m, const PointSet& s) {
    Json out = Json::array();
    for (PointIndex x : s) out.push_back(m.labels()[x]);
    return out;
}

Label parse_label_key(const std::string& key, const std::string& where) {
    Label l = 0;
    auto res = std::from_chars(key.data(), key.data() + key.size(), l);
    if (key.empty() || res.ec != std::errc{} || res.ptr != key.data() + key.size() || l < 0)
        throw SchemaError(where, "child labels must be nonnegative integers");
    return l;
}

void add_children(PrunedTree::Builder& b, std::size_t id, const Json& node, const std::string& where) {
    reject_unknown(node, where, {"children", "stalk"});
    bool stalk = false;
    if (node.contains("stalk")) {
        if (!node["stalk"].is_boolean()) throw SchemaError(where + "/stalk", "expected a boolean");
        stalk = node["stalk"].get<bool>();
    }
    if (stalk) b.mark_stalk(id);
    if (!node.contains("children")) return;
    const Json& children = node["children"];
    if (!children.is_object()) throw SchemaError(where + "/children", "expected an object");
    for (const auto& [key, child] : children.items()) {
        const std::string here = where + "/children/" + key;
        add_children(b, b.add_child(id, parse_label_key(key, here)), child, here);
    }
}

Json node_to_json(const PrunedTree& t, std::size_t id) {
    const auto& n = t.nodes()[id];
    Json children = Json::object();
    for (std::size_t c : n.children) children[std::to_string(t.nodes()[c].label)] = node_to_json(t, c);
    return Json{{"children", std::move(children)}, {"stalk", n.stalk}};
}

Json witness_json(const std::optional<Position>& p) {
    if (!p) return nullptr;
    return Json(*p);
}

}  // namespace

std::optional<Value> parse_dyadic_literal(std::string_view text) {
    text = trim(text);
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return std::nullopt;
    const std::string_view num = text.substr(0, slash);
    std::string_view den = text.substr(slash + 1);
    if (den.substr(0, 2) != "2^") return std::nullopt;
    den.remove_prefix(2);
    std::uint64_t p = 0;
    int k = 0;
    auto r1 = std::from_chars(num.data(), num.data() + num.size(), p);
    auto r2 = std::from_chars(den.data(), den.data() + den.size(), k);
    if (num.empty() || r1.ec != std::errc{} || r1.ptr != num.data() + num.size()) return std::nullopt;
    if (den.empty() || r2.ec != std::errc{} || r2.ptr != den.data() + den.size()) return std::nullopt;
    if (k < 0 || k > 1074 || p >= (std::uint64_t{1} << 53)) return std::nullopt;
    const Value v = std::ldexp(static_cast<double>(p), -k);
    if (std::ldexp(v, k) != static_cast<double>(p)) return std::nullopt;
    return v;
}

DistanceMatrix parse_matrix_csv(std::string_view text) {
    std::vector<std::pair<std::size_t, std::vector<Field>>> rows;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        ++line_no;
        const std::string_view line = text.substr(pos, nl - pos);
        if (!trim(line).empty() && trim(line).front() != '#') rows.emplace_back(line_no, split_csv_line(line, line_no));
        pos = nl + 1;
    }
    if (rows.empty()) throw ParseError(1, 1, "empty input");

    auto& [header_line, header] = rows.front();
    const bool corner = !header.empty() && header.front().text.empty();
    std::vector<std::string> labels;
    for (std::size_t i = corner ? 1 : 0; i < header.size(); ++i) {
        if (header[i].text.empty()) throw ParseError(header_line, header[i].column, "empty label");
        labels.push_back(header[i].text);
    }
    const std::size_t n = labels.size();
    if (n == 0) throw ParseError(header_line, 1, "header has no labels");

    std::vector<Value> entries;
    std::vector<bool> exact;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& [line, fields] = rows[r];
        std::size_t first = 0;
        if (fields.size() == n + 1) {
            first = 1;
            if (r - 1 < n && fields[0].text != labels[r - 1])
                throw ParseError(line, fields[0].column, "row label '" + fields[0].text + "' does not match header");
        } else if (fields.size() != n) {
            throw ParseError(line, fields.back().column,
                             "expected " + std::to_string(n) + " cells, found " + std::to_string(fields.size()));
        }
        for (std::size_t c = first; c < fields.size(); ++c) {
            auto cell = parse_cell(fields[c].text);
            if (!cell) throw ParseError(line, fields[c].column, "not a number: '" + fields[c].text + "'");
            entries.push_back(cell->value);
            exact.push_back(cell->exact);
        }
    }
    if (rows.size() - 1 != n) {
        const std::size_t line = rows.back().first;
        throw ParseError(line + 1, 1, "expected " + std::to_string(n) + " rows, found " + std::to_string(rows.size() - 1));
    }
    return DistanceMatrix(std::move(labels), std::move(entries), std::move(exact));
}

std::string write_matrix_csv(const DistanceMatrix& m) {
    // Values closer than the snapping tolerance would merge on re-reading,
    // so such matrices are written with exact dyadic literals.
    bool literal = false;
    const auto& vals = m.values();
    for (std::size_t i = 1; i + 1 < vals.size(); ++i)
        if (vals[i + 1] - vals[i] <= 10 * kSnapTolerance * vals[i + 1]) literal = true;
    auto cell = [&](Value v) { return literal ? dyadic_literal(v) : format_value(v); };

    std::string out;
    for (std::size_t i = 0; i < m.size(); ++i) out += (i ? "," : "") + csv_quote(m.labels()[i]);
    out += "\n";
    for (PointIndex i = 0; i < m.size(); ++i) {
        for (PointIndex j = 0; j < m.size(); ++j) out += (j ? "," : "") + cell(m(i, j));
        out += "\n";
    }
    return out;
}

DistanceMatrix parse_matrix_json(std::string_view text) {
    const Json j = parse_json(text);
    reject_unknown(j, "", {"schema_version", "labels", "d"});
    check_schema_version(j);
    if (!j.contains("d") || !j["d"].is_array()) throw SchemaError("/d", "expected an array of rows");
    const Json& d = j["d"];
    const std::size_t n = d.size();
    std::vector<std::string> labels;
    if (j.contains("labels")) {
        if (!j["labels"].is_array()) throw SchemaError("/labels", "expected an array");
        for (std::size_t i = 0; i < j["labels"].size(); ++i) {
            const Json& l = j["labels"][i];
            if (!l.is_string()) throw SchemaError("/labels/" + std::to_string(i), "expected a string");
            labels.push_back(l.get<std::string>());
        }
        if (labels.size() != n) throw SchemaError("/labels", "label count differs from row count");
    } else {
        labels = DistanceMatrix::default_labels(n);
    }
    std::vector<Value> entries;
    std::vector<bool> exact;
    for (std::size_t i = 0; i < n; ++i) {
        const std::string where = "/d/" + std::to_string(i);
        if (!d[i].is_array()) throw SchemaError(where, "expected an array");
        if (d[i].size() != n) throw StructuralError(i, d[i].size(), "row length differs from row count");
        for (std::size_t k = 0; k < n; ++k) {
            auto cell = json_cell(d[i][k]);
            if (!cell) throw SchemaError(where + "/" + std::to_string(k), "expected a number or dyadic literal");
            entries.push_back(cell->value);
            exact.push_back(cell->exact);
        }
    }
    return DistanceMatrix(std::move(labels), std::move(entries), std::move(exact));
}

Json matrix_to_json(const DistanceMatrix& m) {
    Json d = Json::array();
    for (PointIndex i = 0; i < m.size(); ++i) {
        Json row = Json::array();
        for (PointIndex j = 0; j < m.size(); ++j) row.push_back(m(i, j));
        d.push_back(std::move(row));
    }
    return Json{{"schema_version", kSchemaVersion}, {"labels", m.labels()}, {"d", std::move(d)}};
}

MatrixFormat detect_matrix_format(std::string_view text) {
    for (char c : text) {
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') continue;
        return c == '{' ? MatrixFormat::json : MatrixFormat::csv;
    }
    return MatrixFormat::csv;
}

DistanceMatrix parse_matrix(std::string_view text) {
    return detect_matrix_format(text) == MatrixFormat::json ? parse_matrix_json(text) : parse_matrix_csv(text);
}

std::string write_matrix(const DistanceMatrix& m, MatrixFormat format) {
    return format == MatrixFormat::json ? dump(matrix_to_json(m)) : write_matrix_csv(m);
}

Json tree_to_json(const PrunedTree& t) {
    if (!t.is_explicit()) throw std::invalid_argument("generator trees have no finite JSON form");
    return node_to_json(t, 0);
}

PrunedTree tree_from_json(const Json& node) {
    PrunedTree::Builder b;
    try {
        add_children(b, PrunedTree::Builder::root(), node, "/root");
        return std::move(b).build();
    } catch (const std::invalid_argument& e) {
        throw SchemaError("/root", e.what());
    }
}

Json tree_document(const PrunedTree& t, const std::vector<Branch>* members) {
    Json j{{"schema_version", kSchemaVersion}, {"root", tree_to_json(t)}};
    if (members) {
        Json list = Json::array();
        for (const auto& b : *members) list.push_back(b.prefix);
        j["members"] = std::move(list);
    }
    return j;
}

TreeDocument parse_tree_document(std::string_view text) {
    const Json j = parse_json(text);
    reject_unknown(j, "", {"schema_version", "root", "members"});
    check_schema_version(j);
    if (!j.contains("root")) throw SchemaError("/root", "missing");
    TreeDocument doc{tree_from_json(j["root"]), {}};
    if (j.contains("members")) {
        const Json& list = j["members"];
        if (!list.is_array()) throw SchemaError("/members", "expected an array");
        for (std::size_t i = 0; i < list.size(); ++i) {
            const std::string where = "/members/" + std::to_string(i);
            if (!list[i].is_array()) throw SchemaError(where, "expected an array of labels");
            Branch b;
            for (const auto& l : list[i]) {
                if (!l.is_number_integer()) throw SchemaError(where, "labels must be integers");
                b.prefix.push_back(l.get<Label>());
            }
            if (!is_branch_of(doc.tree, b)) throw SchemaError(where, "not a branch of the tree");
            doc.members.push_back(std::move(b));
        }
    }
    return doc;
}

Json schedule_to_json(const RadiusSchedule& s) {
    return Json{{"radii", s.positive_radii()}, {"zero_tail", s.has_zero_tail()}};
}

RadiusSchedule schedule_from_json(const Json& j) {
    reject_unknown(j, "", {"radii", "zero_tail"});
    if (!j.contains("radii") || !j["radii"].is_array()) throw SchemaError("/radii", "expected an array");
    if (!j.contains("zero_tail") || !j["zero_tail"].is_boolean())
        throw SchemaError("/zero_tail", "expected a boolean");
    if (!j["zero_tail"].get<bool>()) throw SchemaError("/zero_tail", "only finite schedules can be read back");
    std::vector<Value> radii;
    for (std::size_t i = 0; i < j["radii"].size(); ++i) {
        auto cell = json_cell(j["radii"][i]);
        if (!cell) throw SchemaError("/radii/" + std::to_string(i), "expected a number");
        radii.push_back(cell->value);
    }
    try {
        return RadiusSchedule::finite(std::move(radii));
    } catch (const std::invalid_argument& e) {
        throw SchemaError("/radii", e.what());
    }
}

Json branch_to_json(const Branch& b) { return Json{{"prefix", b.prefix}, {"stalk", b.stalk}}; }

Json representing_tree_to_json(const Representation& rep) {
    const RepresentingTree& rt = rep.tree;
    Json balls = Json::array();
    for (const auto& [key, members] : rt.ball_of) {
        Json names = Json::array();
        for (PointIndex x : members) names.push_back(rt.point_labels[x]);
        balls.push_back(Json{{"level", key.first},
                             {"label", key.second},
                             {"radius", rt.schedule[key.first]},
                             {"members", std::move(names)}});
    }
    Json phi = Json::object();
    for (PointIndex x = 0; x < rep.clade.phi.size(); ++x) phi[rt.point_labels[x]] = rep.clade.phi[x].prefix;
    return Json{{"schema_version", kSchemaVersion},
                {"labels", rt.point_labels},
                {"schedule", schedule_to_json(rt.schedule)},
                {"levels", rt.levels},
                {"root", tree_to_json(*rt.tree)},
                {"balls", std::move(balls)},
                {"phi", std::move(phi)}};
}

Json validation_to_json(const DistanceMatrix& m, const ValidationReport& r) {
    Json witness = nullptr;
    if (r.witness) {
        const Violation& v = *r.witness;
        static constexpr const char* kinds[] = {"triangle", "strong_triangle", "isosceles"};
        witness = Json{{"kind", kinds[static_cast<int>(v.kind)]},
                       {"x", m.labels()[v.x]},
                       {"y", m.labels()[v.y]},
                       {"z", m.labels()[v.z]},
                       {"dxy", v.dxy},
                       {"dxz", v.dxz},
                       {"dzy", v.dzy}};
    }
    return Json{{"schema_version", kSchemaVersion},
                {"points", m.size()},
                {"is_metric", r.is_metric},
                {"is_ultrametric", r.is_ultrametric},
                {"witness", std::move(witness)}};
}

Json verdict_to_json(const Verdict& v) {
    Json j{{"value", v.value}, {"scope", scope_of(v.exact, v.horizon)}};
    if (v.witness) j["witness"] = *v.witness;
    return j;
}

Json analysis_to_json(const AnalysisReport& r) {
    Json positions{{"per_level", r.positions.per_level},
                   {"tail", r.positions.tail_count ? Json(*r.positions.tail_count) : Json(nullptr)},
                   {"overflow_at", witness_json(r.positions.overflow_at)},
                   {"scope", scope_of(r.positions.exact, r.positions.horizon)}};
    Json isolated_list = Json::array();
    for (const auto& b : r.isolated.isolated) isolated_list.push_back(branch_to_json(b));
    Json isolated{{"count", r.isolated.isolated.size()},
                  {"probed", r.isolated.probed},
                  {"branches", std::move(isolated_list)},
                  {"scope", scope_of(r.isolated.exact, r.isolated.horizon)}};
    Json offspring{{"per_level", r.offspring.per_level},
                   {"max", r.offspring.max},
                   {"overflow_at", witness_json(r.offspring.overflow_at)},
                   {"scope", scope_of(r.offspring.exact, r.offspring.horizon)}};
    Json sufficient = nullptr;
    if (const auto& s = r.doubling_sufficient) {
        sufficient = Json{{"constant", s->constant}, {"condition", s->condition}};
        if (s->depth) sufficient["depth"] = *s->depth;
        if (s->lag) sufficient["lag"] = *s->lag;
        sufficient["scope"] = scope_of(s->exact, s->horizon);
    }
    Json doubling{{"necessary_bound", r.doubling_necessary_bound},
                  {"sufficient", std::move(sufficient)},
                  {"bruteforce", r.doubling_bruteforce ? Json(*r.doubling_bruteforce) : Json(nullptr)},
                  {"sandwich_holds", r.sandwich_holds}};
    return Json{{"schema_version", kSchemaVersion},
                {"horizon", r.horizon ? Json(*r.horizon) : Json(nullptr)},
                {"totally_bounded", verdict_to_json(r.totally_bounded)},
                {"separable", verdict_to_json(r.separable)},
                {"discrete", verdict_to_json(r.discrete)},
                {"perfect", verdict_to_json(r.perfect)},
                {"positions", std::move(positions)},
                {"isolated", std::move(isolated)},
                {"max_offspring", std::move(offspring)},
                {"doubling", std::move(doubling)}};
}

std::vector<BallRequest> parse_ball_requests(std::string_view text, const DistanceMatrix& m) {
    const Json j = parse_json(text);
    reject_unknown(j, "", {"schema_version", "balls"});
    check_schema_version(j);
    if (!j.contains("balls") || !j["balls"].is_array()) throw SchemaError("/balls", "expected an array");
    std::vector<BallRequest> out;
    for (std::size_t i = 0; i < j["balls"].size(); ++i) {
        const Json& b = j["balls"][i];
        const std::string where = "/balls/" + std::to_string(i);
        reject_unknown(b, where, {"center", "radius"});
        if (!b.contains("center") || !b["center"].is_string()) throw SchemaError(where + "/center", "expected a label");
        const auto label = b["center"].get<std::string>();
        const auto it = std::find(m.labels().begin(), m.labels().end(), label);
        if (it == m.labels().end()) throw SchemaError(where + "/center", "unknown point '" + label + "'");
        auto radius = b.contains("radius") ? json_cell(b["radius"]) : std::nullopt;
        if (!radius || !(radius->value > 0)) throw SchemaError(where + "/radius", "expected a positive radius");
        out.push_back({static_cast<PointIndex>(it - m.labels().begin()), radius->value});
    }
    return out;
}

Json vitali_to_json(const DistanceMatrix& m, const std::vector<BallRequest>& selected) {
    Json list = Json::array();
    for (const auto& r : selected)
        list.push_back(Json{{"center", m.labels()[r.center]},
                            {"radius", r.radius},
                            {"members", labels_of(m, open_ball(m, r.center, r.radius).members)}});
    return Json{{"schema_version", kSchemaVersion}, {"selected", std::move(list)}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace ultratree
