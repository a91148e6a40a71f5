#pragma once

#include "trimap/maps.hpp"
#include "trimap/roots.hpp"
#include "trimap/simulator.hpp"
#include "trimap/workloads.hpp"

#include <chrono>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace trimap {

struct BenchmarkRecord {
    Strategy strategy = Strategy::BB;
    Workload workload = Workload::Dummy;
    Index n = 0;
    Index rho = 0;
    SqrtKind sqrt = SqrtKind::Exact;
    unsigned reps = 0;
    std::int64_t median_ns = 0;
    double improvement = 0.0; ///< t_BB / t_strategy against the BB row of the same (workload, n, rho, sqrt)
    double waste_fraction = 0.0; ///< discarded / dispatched threads

    // Not part of the CSV.
    double rsd = 0.0;       ///< relative standard deviation of the repetitions
    bool unstable = false;  ///< rsd above SuiteConfig::rsd_threshold
    bool skipped = false;   ///< size inadmissible for the strategy; see note
    std::string note;

    friend bool operator==(const BenchmarkRecord& a, const BenchmarkRecord& b);
};

struct SuiteConfig {
    std::vector<Strategy> strategies{Strategy::BB, Strategy::LTM, Strategy::RB, Strategy::REC, Strategy::UTM};
    std::vector<Workload> workloads{Workload::Dummy, Workload::Edm, Workload::Collision3D};
    std::vector<Index> sizes{256, 512, 1024, 2048, 4096, 8192};
    std::vector<Index> sizes_3d{32, 64, 128, 256};
    Index rho = 16;
    Index rho_3d = 8;
    std::vector<SqrtKind> sqrt{SqrtKind::Exact};
    unsigned reps = 5;
    unsigned warmups = 2;
    bool single_thread = false;
    std::uint64_t seed = 42;
    double rsd_threshold = 0.10;
    /// Collision runs tile their records through shared memory.
    bool tiled_collision = true;
};

/// Strategies in the suite that are 3-D (BB3D, TET) run the dummy workload on
/// sizes_3d; the 2-D ones run every workload on sizes. Before timing, each
/// configuration's digest must match BB's (std::runtime_error otherwise).
/// Rows come out ordered by sqrt, workload, n, then strategy as listed; BB is
/// always timed, as the baseline, even when not listed.
/// Throws std::invalid_argument for an empty size list or reps < 3.
std::vector<BenchmarkRecord> run_benchmark(const SuiteConfig& cfg, std::ostream* log = nullptr);

/// Timing of one launch: warmups, then reps timed runs. Returns the per-run wall times.
std::vector<std::chrono::nanoseconds> time_launch(const LaunchConfig& cfg, const WorkloadData& data, unsigned warmups,
                                                  unsigned reps);

std::int64_t median_ns(std::vector<std::chrono::nanoseconds> samples);
double relative_stddev(const std::vector<std::chrono::nanoseconds>& samples);

inline constexpr std::string_view kCsvHeader = "strategy,workload,n,rho,sqrt,reps,median_ns,improvement,waste_fraction";

/// Header plus one row per non-skipped record. Throws std::runtime_error naming
/// the path when it cannot be written.
void emit_csv(const std::vector<BenchmarkRecord>& records, const std::filesystem::path& destination);
void write_csv(const std::vector<BenchmarkRecord>& records, std::ostream& out);
/// Throws std::runtime_error on malformed input.
std::vector<BenchmarkRecord> parse_csv(std::istream& in);
std::vector<BenchmarkRecord> read_csv(const std::filesystem::path& source);

/// One "n improvement" series per (workload, strategy[, sqrt]) plus the I = 1
/// reference line, written into directory. Returns the files written.
std::vector<std::filesystem::path> emit_plotdata(const std::vector<BenchmarkRecord>& records,
                                                 const std::filesystem::path& directory);

/// Per-block map costs from BB3D and TET dummy rows of one size: alpha and
/// gamma in ns per dispatched block, and the ceiling 6 alpha / gamma that
/// bounds TET's improvement as n grows.
struct TetCeiling {
    Index n = 0;
    double alpha_ns = 0.0;
    double gamma_ns = 0.0;
    double ceiling = 0.0;
    double measured = 0.0;
};

std::vector<TetCeiling> tet_ceilings(const std::vector<BenchmarkRecord>& records);

} // namespace trimap
