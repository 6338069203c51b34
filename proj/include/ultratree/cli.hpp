#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "ultratree/analysis.hpp"
#include "ultratree/random.hpp"
#include "ultratree/tree.hpp"

namespace ultratree {

enum ExitCode : int {
    kExitOk = 0,
    kExitNegative = 1,    // input is valid but not ultrametric
    kExitMalformed = 2,   // parse, schema or structural error
    kExitCapExceeded = 3,
};

struct RunConfig {
    std::string command;  // validate | coerce | tree | vitali | analyze | generate
    /// Matrix file ("-" for stdin); `builtin:binary`, `builtin:xgeo` or
    /// `builtin:x4` for analyze; the point count for generate.
    std::string input;
    std::optional<std::string> output;
    std::optional<std::string> balls;  // ball requests for vitali
    std::size_t horizon = 10;
    std::uint64_t seed = 0;
    std::size_t cap_n = kDefaultBruteForceCap;
    std::size_t child_cap = kDefaultChildCap;
    std::size_t l_max = kDefaultLagMax;
    std::size_t levels = 4;
    RadiusKind radii = RadiusKind::dyadic;
};

/// Runs one command, writing the artifact to cfg.output (or `out`) and
/// diagnostics to `err`. Returns an ExitCode.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace ultratree
