// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.
//
// usage: acceptance <path-to-ultratree> <scratch-dir>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "ultratree/analysis.hpp"
#include "ultratree/generators.hpp"
#include "ultratree/random.hpp"
#include "ultratree/represent.hpp"
#include "ultratree/sdz.hpp"

using namespace ultratree;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        if (pass) detail = why;
        pass = false;
    }
};

DistanceMatrix instance(std::uint64_t seed, std::size_t max_n, RadiusKind kind = RadiusKind::dyadic) {
    const std::size_t n = 1 + (seed * 7 + seed / 3) % max_n;
    return random_ultrametric(n, 1 + seed % 10, seed, kind);
}

std::vector<Value> probe_grid(const DistanceMatrix& m) {
    std::vector<Value> grid = m.values();
    for (std::size_t i = 0; i + 1 < m.values().size(); ++i) grid.push_back((m.values()[i] + m.values()[i + 1]) / 2);
    grid.push_back(2 * m.max_value());
    std::sort(grid.begin(), grid.end());
    return grid;
}

std::string tag(std::uint64_t seed) { return "seed " + std::to_string(seed) + ": "; }

Outcome isometry() {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    std::size_t pairs = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const auto m = instance(seed, 64);
        const auto rep = build(m);
        const auto& phi = rep.clade.phi;
        for (PointIndex x = 0; x < m.size(); ++x)
            for (PointIndex y = x + 1; y < m.size(); ++y, ++pairs)
                if (d_T(rep.tree, phi[x], phi[y]) != m(x, y)) o.fail(tag(seed) + "d_T differs from d");
        if (!verify_isometry(m, rep).ok) o.fail(tag(seed) + "verify_isometry failed");
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs >= 60) o.fail("took " + std::to_string(secs) + " s");
    if (o.pass) {
        std::ostringstream s;
        s << "1000 instances, " << pairs << " pairs exact, " << std::fixed << std::setprecision(2) << secs << " s";
        o.detail = s.str();
    }
    return o;
}

Outcome coercion() {
    Outcome o;
    for (std::uint64_t i = 0; i < 2000; ++i) {
        const bool irregular = i >= 1000;
        const std::uint64_t seed = i % 1000;
        const auto m = instance(seed, 64, irregular ? RadiusKind::irregular : RadiusKind::dyadic);
        const auto c = coerce_sdz(m);
        if (!validate(c).is_ultrametric || !oracle::is_ultrametric(c)) o.fail(tag(i) + "coerced matrix not ultrametric");
        for (Value v : c.values())
            if (!oracle::is_dyadic_power_or_zero(v)) o.fail(tag(i) + "value outside {0,1,2^-k}");
        for (std::size_t k = 0; k < m.entries().size(); ++k) {
            const Value t = m.entries()[k], g = c.entries()[k];
            const bool ok = t == 0 ? g == 0 : t >= 1 ? g == 1 : (g <= t && t < 2 * g);
            if (!ok) o.fail(tag(i) + "bracket g(t) <= t < 2g(t) violated");
        }
    }
    if (o.pass) o.detail = "1000 dyadic + 1000 irregular instances";
    return o;
}

Outcome balls() {
    Outcome o;
    std::size_t probes = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto m = instance(seed, 12);
        const auto grid = probe_grid(m);
        const auto values = oracle::image(m);
        for (PointIndex x = 0; x < m.size(); ++x)
            for (Value r : grid) {
                ++probes;
                const PointSet cl = closed_ball(m, x, r).members;
                if (cl != oracle::ball(m, x, r, false)) o.fail(tag(seed) + "closed ball differs from definition");
                // (1) diameters
                if (diam(m, cl) > r) o.fail(tag(seed) + "diam of closed ball exceeds r");
                // (2) a closed ball is the closed ball of its own diameter
                if (closed_ball(m, x, diam(m, cl)).members != cl) o.fail(tag(seed) + "closed ball changes at its diameter");
                // (3) every point is a center, closed form
                for (PointIndex y : cl)
                    if (closed_ball(m, y, r).members != cl) o.fail(tag(seed) + "closed ball not egocentric");
                // (6) closed ball equals an open ball of the deterministic larger radius
                Value rho_want;
                auto above = values.upper_bound(r);
                if (above != values.end()) rho_want = (r + *above) / 2;
                else rho_want = r > 0 ? 2 * r : 1;
                const Value rho = closed_equals_open(m, x, r);
                if (rho != rho_want || !(rho > r) || oracle::ball(m, x, rho, true) != cl)
                    o.fail(tag(seed) + "closed=open witness wrong");
                if (r == 0) continue;

                const PointSet op = open_ball(m, x, r).members;
                if (op != oracle::ball(m, x, r, true)) o.fail(tag(seed) + "open ball differs from definition");
                if (diam(m, op) > diam(m, cl)) o.fail(tag(seed) + "diam B(x,r) > diam B̄(x,r)");
                for (PointIndex y : op)
                    if (open_ball(m, y, r).members != op) o.fail(tag(seed) + "open ball not egocentric");
                // (4) a smaller ball meeting a larger one lies inside it
                for (PointIndex y = 0; y < m.size(); ++y)
                    for (Value q : grid) {
                        if (q <= 0 || q > r) continue;
                        const PointSet small = oracle::ball(m, y, q, true);
                        const bool meets = std::find_first_of(small.begin(), small.end(), op.begin(), op.end()) != small.end();
                        if (meets && !std::includes(op.begin(), op.end(), small.begin(), small.end()))
                            o.fail(tag(seed) + "nested-ball property violated");
                    }
                // (5) open ball equals the closed ball of radius r*
                const Value rstar_want = *std::prev(values.lower_bound(r));
                const Value rstar = open_equals_closed(m, x, r);
                if (rstar != rstar_want || oracle::ball(m, x, rstar, false) != op)
                    o.fail(tag(seed) + "open=closed witness wrong");
            }
    }
    if (o.pass) o.detail = "200 instances, " + std::to_string(probes) + " (x, r) probes";
    return o;
}

Outcome vitali() {
    Outcome o;
    std::mt19937_64 rng(20240601);
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        const auto m = instance(seed, 12);
        const std::size_t k = 1 + uniform_below(rng, 12);
        std::vector<BallRequest> req;
        std::vector<oracle::Request> oreq;
        const auto grid = probe_grid(m);
        for (std::size_t i = 0; i < k; ++i) {
            const PointIndex x = uniform_below(rng, m.size());
            Value r = grid[uniform_below(rng, grid.size())];
            if (r == 0) r = grid.back() > 0 ? grid.back() : 1;
            req.push_back({x, r});
            oreq.push_back({x, r});
        }
        const auto kept = vitali_select(m, req);
        std::set<PointIndex> want, got;
        std::size_t total = 0;
        for (const auto& r : req)
            for (PointIndex y : oracle::ball(m, r.center, r.radius, true)) want.insert(y);
        for (const auto& r : kept) {
            const auto s = oracle::ball(m, r.center, r.radius, true);
            total += s.size();
            got.insert(s.begin(), s.end());
        }
        const bool valid = total == got.size() && got == want && !kept.empty();
        if (valid != oracle::vitali_feasible(m, oreq)) o.fail(tag(seed) + "selection disagrees with exhaustive search");
        if (!valid) o.fail(tag(seed) + "selection not disjoint or union differs");
    }
    if (o.pass) o.detail = "500 instances, up to 12 balls each";
    return o;
}

Outcome doubling() {
    Outcome o;
    std::size_t fired = 0, crosschecked = 0;
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const auto m = instance(seed, 12);
        const auto rep = build(m);
        const auto suff = doubling_sufficient(*rep.tree.tree, rep.tree.schedule);
        if (!suff) continue;
        ++fired;
        const std::size_t M = max_offspring(*rep.tree.tree).max;
        const std::size_t D = doubling_bruteforce(m);
        if (!(M <= D && D <= suff->constant)) o.fail(tag(seed) + "sandwich M <= D <= C violated");
        if (m.size() <= 8) {
            ++crosschecked;
            if (D != oracle::doubling_constant(m)) o.fail(tag(seed) + "brute force differs from subset enumeration");
        }
    }
    const std::size_t x4 = doubling_bruteforce(x4_space());
    if (x4 != 2) o.fail("X4 brute force gives " + std::to_string(x4));
    if (fired == 0) o.fail("sufficient condition never fired");
    if (o.pass)
        o.detail = std::to_string(fired) + " instances, " + std::to_string(crosschecked) + " cross-checked, X4 = 2";
    return o;
}

Outcome completeness() {
    Outcome o;
    for (std::size_t N = 4; N <= 10; ++N) {
        auto tree = std::make_shared<const PrunedTree>(geometric_tail_tree(2 * N));
        const auto c = completion(*tree, geometric_tail_clade(tree));
        if (c.added.size() != 1 || c.is_complete) o.fail("X_geo N=" + std::to_string(N) + ": expected one added branch");
        else if (c.added.front().prefix != geometric_tail_limit(2 * N)) o.fail("X_geo N=" + std::to_string(N) + ": wrong added branch");
    }
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const auto rep = build(instance(seed, 64));
        const auto c = completion(*rep.tree.tree, rep.clade.clade);
        if (!c.added.empty() || !c.is_complete || !is_subcanopy(rep.clade.clade))
            o.fail(tag(seed) + "finite clade not complete");
    }
    if (o.pass) o.detail = "X_geo N=4..10 add one branch each; 300 finite clades add none";
    return o;
}

Outcome topology() {
    Outcome o;
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const auto m = instance(seed, 64);
        const auto rep = build(m);
        const auto& t = *rep.tree.tree;
        if (!is_totally_bounded(t).value) o.fail(tag(seed) + "not totally bounded");
        if (!is_discrete(t).value) o.fail(tag(seed) + "not discrete");
        if (is_perfect(t).value) o.fail(tag(seed) + "reported perfect");
        const auto counts = count_positions(t);
        if (!counts.exact || counts.tail_count != m.size() || counts.per_level.back() != m.size())
            o.fail(tag(seed) + "position counts not finite and exact");
    }
    const std::size_t h = 10;
    const auto bin = complete_tree(2, h);
    const auto perfect = is_perfect(bin);
    if (!perfect.value || perfect.exact || perfect.horizon != h) o.fail("binary tree not perfect up to horizon 10");
    const auto counts = count_positions(bin);
    for (std::size_t k = 0; k <= h; ++k)
        if (counts.per_level.size() != h + 1 || counts.per_level[k] != std::size_t{1} << k)
            o.fail("binary tree count at level " + std::to_string(k));
    if (o.pass) o.detail = "300 finite trees; binary tree perfect up to horizon 10 with 2^k positions";
    return o;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

Outcome determinism(const std::string& exe, const fs::path& dir) {
    Outcome o;
    fs::create_directories(dir);
    const auto q = [](const fs::path& p) { return "'" + p.string() + "'"; };
    auto run_twice = [&](const std::string& name, const std::string& args) {
        for (int i = 0; i < 2; ++i) {
            const fs::path out = dir / (name + "." + std::to_string(i));
            const std::string cmd = "'" + exe + "' " + args + " --out " + q(out) + " 2>/dev/null";
            const int status = std::system(cmd.c_str());
            if (status == -1 || !fs::exists(out)) o.fail(name + ": command produced no output");
        }
        if (slurp(dir / (name + ".0")) != slurp(dir / (name + ".1"))) o.fail(name + ": outputs differ");
    };
    const fs::path matrix = dir / "generate.0";
    const fs::path small = dir / "small.0";
    run_twice("generate", "generate 40 --seed 11 --levels 6");
    run_twice("irregular", "generate 40 --seed 11 --levels 6 --radii irregular");
    run_twice("small", "generate 10 --seed 5 --levels 4");
    run_twice("validate", "validate " + q(matrix));
    run_twice("coerce", "coerce " + q(dir / "irregular.0"));
    run_twice("tree", "tree " + q(matrix));
    run_twice("analyze", "analyze " + q(small));
    run_twice("binary", "analyze builtin:binary --horizon 10");
    std::ofstream(dir / "balls.json") << R"({"balls":[{"center":"p0","radius":2},{"center":"p3","radius":0.5}]})";
    run_twice("vitali", "vitali " + q(small) + " --balls " + q(dir / "balls.json"));
    if (slurp(dir / "generate.0") == slurp(dir / "small.0")) o.fail("different invocations gave identical bytes");
    if (o.pass) o.detail = "9 command lines run twice, outputs byte-identical";
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 3) {
        std::cerr << "usage: acceptance <ultratree-executable> <scratch-dir>\n";
        return 2;
    }
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"1 isometry exactness", isometry},
        {"2 coercion contract", coercion},
        {"3 ball invariants", balls},
        {"4 vitali selection", vitali},
        {"5 doubling sandwich", doubling},
        {"6 completion", completeness},
        {"7 topology checkers", topology},
        {"8 cli determinism", [&] { return determinism(argv[1], argv[2]); }},
    };
    int failed = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
        failed += !o.pass;
    }
    return failed == 0 ? 0 : 1;
}
