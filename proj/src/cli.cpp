#include "ultratree/cli.hpp"

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <stdexcept>

#include "ultratree/errors.hpp"
#include "ultratree/generators.hpp"
#include "ultratree/io.hpp"
#include "ultratree/represent.hpp"

namespace ultratree {

namespace {

std::string read_input(const std::string& path) {
    if (path == "-") return std::string(std::istreambuf_iterator<char>(std::cin), {});
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    return std::string(std::istreambuf_iterator<char>(in), {});
}

void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
    if (!cfg.output) {
        out << text;
        return;
    }
    std::ofstream file(*cfg.output, std::ios::binary | std::ios::trunc);
    if (!file) throw std::invalid_argument("cannot write '" + *cfg.output + "'");
    file << text;
}

std::size_t parse_count(const std::string& text) {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(text, &pos);
    if (pos != text.size() || v == 0) throw std::invalid_argument("expected a positive point count, got '" + text + "'");
    return static_cast<std::size_t>(v);
}

int analyze_builtin(const RunConfig& cfg, std::ostream& out) {
    const AnalysisOptions options{cfg.cap_n, cfg.l_max};
    AnalysisReport report;
    if (cfg.input == "builtin:binary") {
        report = analyze(complete_tree(2, cfg.horizon, cfg.child_cap), geometric_schedule(cfg.horizon), options);
    } else if (cfg.input == "builtin:xgeo") {
        report = analyze(geometric_tail_tree(cfg.horizon, cfg.child_cap), geometric_schedule(cfg.horizon), options);
    } else if (cfg.input == "builtin:x4") {
        report = analyze(x4_space(), options);
    } else {
        throw std::invalid_argument("unknown builtin '" + cfg.input + "'");
    }
    emit(cfg, out, dump(analysis_to_json(report)));
    return kExitOk;
}

int dispatch(const RunConfig& cfg, std::ostream& out) {
    if (cfg.horizon == 0) throw std::invalid_argument("horizon must be at least 1");
    if (cfg.cap_n == 0 || cfg.child_cap == 0 || cfg.levels == 0) throw std::invalid_argument("caps must be positive");

    if (cfg.command == "generate") {
        const DistanceMatrix m = random_ultrametric(parse_count(cfg.input), cfg.levels, cfg.seed, cfg.radii);
        emit(cfg, out, write_matrix_csv(m));
        return kExitOk;
    }
    if (cfg.command == "analyze" && cfg.input.starts_with("builtin:")) return analyze_builtin(cfg, out);

    const std::string text = read_input(cfg.input);
    const DistanceMatrix m = parse_matrix(text);

    if (cfg.command == "validate") {
        const ValidationReport r = validate(m);
        emit(cfg, out, dump(validation_to_json(m, r)));
        return r.is_ultrametric ? kExitOk : kExitNegative;
    }
    if (cfg.command == "coerce") {
        emit(cfg, out, write_matrix(coerce_sdz(m), detect_matrix_format(text)));
        return kExitOk;
    }
    if (cfg.command == "tree") {
        const Representation rep = build(m);
        Json j = representing_tree_to_json(rep);
        j["newick"] = export_newick(rep.tree);
        j["clade_size"] = rep.clade.clade.members().size();
        j["isometry"] = verify_isometry(m, rep).ok;
        emit(cfg, out, dump(j));
        return kExitOk;
    }
    if (cfg.command == "vitali") {
        if (!cfg.balls) throw std::invalid_argument("vitali needs --balls");
        const auto requests = parse_ball_requests(read_input(*cfg.balls), m);
        emit(cfg, out, dump(vitali_to_json(m, vitali_select(m, requests))));
        return kExitOk;
    }
    if (cfg.command == "analyze") {
        emit(cfg, out, dump(analysis_to_json(analyze(m, AnalysisOptions{cfg.cap_n, cfg.l_max}))));
        return kExitOk;
    }
    throw std::invalid_argument("unknown command '" + cfg.command + "'");
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        return dispatch(cfg, out);
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
    } catch (const StructuralError& e) {
        err << "structural error: " << e.what() << "\n";
    } catch (const SchemaError& e) {
        err << "schema error: " << e.what() << "\n";
    } catch (const NotUltrametricError& e) {
        err << "not ultrametric: " << e.what() << "\n";
        return kExitNegative;
    } catch (const NotSdzError& e) {
        err << "not SDZ: " << e.what() << "\n";
        return kExitNegative;
    } catch (const CapExceededError& e) {
        err << "cap exceeded: " << e.what() << "\n";
        return kExitCapExceeded;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
    }
    return kExitMalformed;
}

}  // namespace ultratree
