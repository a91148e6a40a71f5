#pragma once

// Deterministic emulation of a GPU launch: every block of the grid is visited,
// every thread of a block derives its element coordinate through the chosen
// map, out-of-domain threads drop out, and the survivors run the workload.

#include "trimap/domain.hpp"
#include "trimap/maps.hpp"
#include "trimap/roots.hpp"
#include "trimap/workloads.hpp"

#include <chrono>
#include <cstdint>
#include <variant>
#include <vector>

namespace trimap {

using Domain = std::variant<TriDomain, TetDomain>;

enum class ExecutionMode { Serial, Parallel };

struct LaunchConfig {
    GridSpec grid;
    Strategy strategy = Strategy::BB;
    Workload workload = Workload::Dummy;
    Domain domain = TriDomain{1};
    std::uint64_t seed = 0;
    SqrtStrategy sqrt;
    /// Collision only: stage each block's records through a Tile first.
    bool tiled = false;
    ExecutionMode mode = ExecutionMode::Parallel;
    unsigned workers = 0; ///< 0: hardware concurrency
    /// Record how often each domain element ran (SimulationReport::visits).
    bool track_visits = false;
};

/// Config with the grid from grid_dims for the domain.
LaunchConfig make_launch(Strategy strategy, Workload workload, const Domain& domain, Index rho, std::uint64_t seed = 0);

struct WorkloadData {
    std::vector<Point4> points;
    std::vector<Sphere> spheres;
};

WorkloadData make_workload_data(Workload workload, Index n, std::uint64_t seed);

struct SimulationReport {
    Index dispatched_threads = 0;
    Index useful_threads = 0;
    Index discarded_threads = 0;
    Index discarded_blocks = 0; ///< blocks dropped whole by the block map

    // discarded_threads = discarded_block_threads + diagonal_block_threads + padding_threads
    Index discarded_block_threads = 0; ///< inside the bounding box, in blocks dropped whole
    Index diagonal_block_threads = 0;  ///< inside the bounding box, off-domain, in kept blocks
    Index padding_threads = 0;         ///< outside the bounding box or past the map's range

    std::uint64_t output_digest = 0;
    std::chrono::nanoseconds wall_time{0};

    std::uint64_t coordinate_sum = 0;   ///< Dummy
    std::vector<float> distances;       ///< Edm, indexed by the domain's linear index
    std::vector<Pair> pairs;            ///< Collision, sorted
    std::vector<std::uint32_t> visits;  ///< per element, when tracked
};

/// Runs the launch. Throws std::invalid_argument when strategy, grid, domain
/// and workload do not fit together.
SimulationReport dispatch(const LaunchConfig& cfg);
SimulationReport dispatch(const LaunchConfig& cfg, const WorkloadData& data);

struct WasteSummary {
    Index discarded_blocks = 0; ///< (a) threads of blocks dropped above the diagonal
    Index diagonal_blocks = 0;  ///< (b) off-domain threads inside kept blocks
    Index padding = 0;          ///< (c) grid padding

    /// In-box off-domain threads, whichever way they were dropped.
    Index above_diagonal() const noexcept { return discarded_blocks + diagonal_blocks; }
    Index total() const noexcept { return discarded_blocks + diagonal_blocks + padding; }
};

WasteSummary utilization(const SimulationReport& report) noexcept;

} // namespace trimap
