// trimap: benchmark, verify and square-root range tool for the triangular and
// tetrahedral thread maps.

#include "trimap/bench.hpp"
#include "trimap/maps.hpp"
#include "trimap/roots.hpp"
#include "trimap/verify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

using namespace trimap;

namespace {

constexpr int kVerificationFailed = 1;
constexpr int kUsage = 2;

template <class T, class Parse>
std::vector<T> parse_tags(const std::vector<std::string>& names, Parse parse, const char* what,
                          const std::vector<T>& all)
{
    std::vector<T> out;
    for (const auto& name : names) {
        if (name == "all") {
            return all;
        }
        const auto tag = parse(name);
        if (!tag) {
            throw CLI::ValidationError(std::string("unknown ") + what + " '" + name + "'");
        }
        out.push_back(*tag);
    }
    return out;
}

const std::vector<Strategy> kAllStrategies{Strategy::BB,  Strategy::LTM, Strategy::RB, Strategy::REC,
                                           Strategy::UTM, Strategy::BB3, Strategy::TET};
const std::vector<Workload> kAllWorkloads{Workload::Dummy, Workload::Edm, Workload::Collision1D,
                                          Workload::Collision3D};
const std::vector<SqrtKind> kAllSqrt{SqrtKind::Exact, SqrtKind::NewtonMagic, SqrtKind::ReciprocalEps};

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Thread-map strategies for triangular and tetrahedral domains"};
    app.require_subcommand(1);

    // bench ----------------------------------------------------------------
    auto* bench = app.add_subcommand("bench", "Time strategies against BB and report improvement factors");
    std::vector<std::string> workloads{"dummy", "edm", "collision3d"};
    std::vector<std::string> strategies{"BB", "LTM", "RB", "REC", "UTM", "BB3D", "TET"};
    std::vector<std::string> sqrt_names{"exact"};
    SuiteConfig suite;
    std::string out_csv;
    std::string plot_dir;
    bool untiled = false;
    bench->add_option("--workload", workloads, "dummy, edm, collision1d, collision3d or all")->delimiter(',');
    bench->add_option("--strategy", strategies, "BB, LTM, RB, REC, UTM, BB3D, TET or all")->delimiter(',');
    bench->add_option("--sizes", suite.sizes, "2-D sizes n")->delimiter(',');
    bench->add_option("--sizes-3d", suite.sizes_3d, "3-D sizes n")->delimiter(',');
    bench->add_option("--rho", suite.rho, "2-D block edge")->capture_default_str();
    bench->add_option("--rho-3d", suite.rho_3d, "3-D block edge")->capture_default_str();
    bench->add_option("--sqrt", sqrt_names, "exact, newton, rsqrt or all")->delimiter(',');
    bench->add_option("--reps", suite.reps, "timed repetitions (>= 3)")->capture_default_str();
    bench->add_option("--warmups", suite.warmups, "untimed warmup runs")->capture_default_str();
    bench->add_option("--seed", suite.seed, "workload data seed")->capture_default_str();
    bench->add_option("--rsd-threshold", suite.rsd_threshold, "flag records above this relative stddev")
        ->capture_default_str();
    bench->add_option("--out", out_csv, "CSV destination");
    bench->add_option("--plot-dir", plot_dir, "directory for per-series plot data");
    bench->add_flag("--single-thread", suite.single_thread, "serial reference execution");
    bench->add_flag("--untiled", untiled, "collision reads records from global memory");

    // verify ---------------------------------------------------------------
    auto* verify = app.add_subcommand("verify", "Check every strategy against the enumeration oracle");
    VerifyOptions vopts;
    std::string verify_sqrt = "exact";
    std::string mutate;
    verify->add_option("--sizes", vopts.sizes, "2-D sizes n")->delimiter(',');
    verify->add_option("--sizes-3d", vopts.sizes_3d, "3-D sizes n")->delimiter(',');
    verify->add_option("--rho", vopts.rho, "2-D block edge")->capture_default_str();
    verify->add_option("--rho-3d", vopts.rho_3d, "3-D block edge")->capture_default_str();
    verify->add_option("--sqrt", verify_sqrt, "square root used inside the maps")->capture_default_str();
    verify->add_option("--mutate", mutate, "corrupt one strategy's output (smoke test for the checks)");

    // sqrt-range -----------------------------------------------------------
    auto* range = app.add_subcommand("sqrt-range", "First omega where a square-root strategy misplaces a row");
    std::string range_sqrt = "newton";
    std::optional<double> epsilon;
    std::optional<Index> omega_max;
    Index range_n = 30720;
    Index range_rho = 16;
    Index search_limit = 0;
    std::string range_map = "ltm";
    range->add_option("--sqrt", range_sqrt, "exact, newton or rsqrt")->capture_default_str();
    range->add_option("--epsilon", epsilon, "additive correction (default 1e-4, 0 for exact)");
    range->add_option("--omega-max", omega_max, "last block index checked");
    range->add_option("--n", range_n, "domain size; omega-max defaults to tri_number(ceil(n/rho))")->capture_default_str();
    range->add_option("--rho", range_rho, "block edge")->capture_default_str();
    range->add_option("--search-limit", search_limit, "keep scanning to here to locate the first failure beyond");
    range->add_option("--map", range_map, "ltm (block space) or utm (thread space, size n)")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (bench->parsed()) {
            suite.workloads = parse_tags(workloads, parse_workload, "workload", kAllWorkloads);
            suite.strategies = parse_tags(strategies, parse_strategy, "strategy", kAllStrategies);
            suite.sqrt = parse_tags(sqrt_names, parse_sqrt_kind, "sqrt", kAllSqrt);
            suite.tiled_collision = !untiled;

            std::cout << "# CPU emulation of GPU launches: improvement factors compare algorithmic shape only and\n"
                         "# do not reproduce GPU-measured percentages.\n";
            const auto records = run_benchmark(suite, &std::cout);
            for (const auto& r : records) {
                if (r.unstable) {
                    std::cout << "flagged: " << to_string(r.workload) << ' ' << to_string(r.strategy) << " n=" << r.n
                              << " rsd=" << r.rsd << " exceeds " << suite.rsd_threshold << '\n';
                }
            }
            for (const auto& c : tet_ceilings(records)) {
                std::cout << "tetrahedral n=" << c.n << ": alpha=" << c.alpha_ns << "ns/block gamma=" << c.gamma_ns
                          << "ns/block ceiling 6*alpha/gamma=" << c.ceiling << " measured I=" << c.measured << '\n';
            }
            if (!out_csv.empty()) {
                emit_csv(records, out_csv);
                std::cout << "wrote " << out_csv << '\n';
            } else {
                write_csv(records, std::cout);
            }
            if (!plot_dir.empty()) {
                const auto files = emit_plotdata(records, plot_dir);
                std::cout << "wrote " << files.size() << " plot files to " << plot_dir << '\n';
            }
            return 0;
        }

        if (verify->parsed()) {
            const auto kind = parse_sqrt_kind(verify_sqrt);
            if (!kind) {
                std::cerr << "unknown sqrt '" << verify_sqrt << "'\n";
                return kUsage;
            }
            vopts.sqrt = SqrtStrategy::of(*kind);
            if (!mutate.empty()) {
                vopts.mutate = parse_strategy(mutate);
                if (!vopts.mutate) {
                    std::cerr << "unknown strategy '" << mutate << "'\n";
                    return kUsage;
                }
            }
            const auto results = run_verification(vopts, &std::cout);
            const auto failed = std::count_if(results.begin(), results.end(), [](const auto& r) { return !r.passed; });
            std::cout << results.size() - static_cast<std::size_t>(failed) << " passed, " << failed << " failed\n";
            return failed == 0 ? 0 : kVerificationFailed;
        }

        if (range->parsed()) {
            const auto kind = parse_sqrt_kind(range_sqrt);
            if (!kind) {
                std::cerr << "unknown sqrt '" << range_sqrt << "'\n";
                return kUsage;
            }
            const SqrtStrategy s = epsilon ? SqrtStrategy{*kind, *epsilon} : SqrtStrategy::of(*kind);

            if (range_map == "utm") {
                const auto fail = validate_utm_range(s, range_n);
                std::cout << "utm n=" << range_n << " sqrt=" << to_string(s.kind()) << " eps=" << s.epsilon()
                          << ": first failure " << (fail ? std::to_string(*fail) : std::string("none")) << '\n';
                return fail ? kVerificationFailed : 0;
            }
            if (range_map != "ltm") {
                std::cerr << "unknown map '" << range_map << "'\n";
                return kUsage;
            }
            const Index last = omega_max ? *omega_max : tri_number((range_n + range_rho - 1) / range_rho);
            const auto fail = validate_sqrt_range(s, last);
            std::cout << "ltm sqrt=" << to_string(s.kind()) << " eps=" << s.epsilon() << " omega in [0, " << last
                      << "]: first failure " << (fail ? std::to_string(*fail) : std::string("none")) << '\n';
            if (!fail && search_limit > last) {
                const auto beyond = validate_sqrt_range(s, search_limit);
                std::cout << "first failure up to " << search_limit << ": "
                          << (beyond ? std::to_string(*beyond) : std::string("none")) << '\n';
            }
            return fail ? kVerificationFailed : 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kVerificationFailed;
    }
    return 0;
}
