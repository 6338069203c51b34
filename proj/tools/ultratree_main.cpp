#include <iostream>

#include "CLI11.hpp"
#include "ultratree/cli.hpp"

int main(int argc, char** argv) {
    ultratree::RunConfig cfg;
    CLI::App app{"Ultrametric spaces and their representing trees"};
    app.add_option("command", cfg.command, "validate | coerce | tree | vitali | analyze | generate")
        ->required()
        ->check(CLI::IsMember({"validate", "coerce", "tree", "vitali", "analyze", "generate"}));
    app.add_option("input", cfg.input, "matrix file (CSV or JSON, - for stdin), builtin:NAME, or point count")
        ->required();
    app.add_option("--out", cfg.output, "write the result here instead of stdout");
    app.add_option("--horizon", cfg.horizon, "depth horizon for generator trees")->check(CLI::PositiveNumber);
    app.add_option("--seed", cfg.seed, "random seed for generate");
    app.add_option("--cap-n", cfg.cap_n, "largest n for the brute-force doubling search")->check(CLI::PositiveNumber);
    app.add_option("--child-cap", cfg.child_cap, "child enumeration cap")->check(CLI::PositiveNumber);
    app.add_option("--l-max", cfg.l_max, "largest lag tried by the radius-ratio condition");
    app.add_option("--levels", cfg.levels, "radius levels for generate")->check(CLI::PositiveNumber);
    app.add_option("--balls", cfg.balls, "ball requests (JSON) for vitali");
    app.add_option("--radii", cfg.radii, "radius kind for generate")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, ultratree::RadiusKind>{{"dyadic", ultratree::RadiusKind::dyadic},
                                                         {"irregular", ultratree::RadiusKind::irregular}}));
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : ultratree::kExitMalformed;
    }
    return ultratree::run(cfg, std::cout, std::cerr);
}
