#pragma once

#include "trimap/maps.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace trimap {

/// Coordinates a strategy's maps produce for a triangular domain, in dispatch
/// order, with block-space maps expanded to threads and filtered per thread.
/// Computed from the map functions alone, without the simulator.
std::vector<Coord2> mapped_tri(Strategy strategy, Index n, Index rho, bool diag, const SqrtStrategy& sqrt = {});
std::vector<Coord3> mapped_tet(Strategy strategy, Index n, Index rho, const SqrtStrategy& sqrt = {});

struct VerifyOptions {
    std::vector<Index> sizes{1, 2, 3, 7, 8, 16, 31, 64, 100, 127, 128, 255, 256};
    std::vector<Index> sizes_3d{1, 2, 5, 16, 33};
    Index rho = 8;
    Index rho_3d = 4;
    SqrtStrategy sqrt;
    /// Fault injection: corrupt this strategy's mapped output so its checks must fail.
    std::optional<Strategy> mutate;
};

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Oracle checks: every strategy's mapped set against the enumeration, and
/// exactly-once execution plus BB-equal digests through the simulator.
std::vector<CheckResult> run_verification(const VerifyOptions& opts, std::ostream* log = nullptr);

} // namespace trimap
