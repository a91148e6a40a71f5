#pragma once

// Grid-to-domain maps for triangular and tetrahedral domains.
//
// Block-space maps (BB, LTM, REC, TET) turn a block index into the data-space
// block coordinate; threads add their local offset. Thread-space maps (RB,
// UTM) turn each thread's own index into an element coordinate.
//
// The square-root maps compute a row (or layer) in floating point and then
// walk it by +-1 against the figurate numbers until the row bracket holds
// exactly. The *_uncorrected entry points expose the raw estimate.

#include "trimap/domain.hpp"
#include "trimap/roots.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace trimap {

enum class Strategy { BB, LTM, RB, REC, UTM, BB3, TET };

std::string_view to_string(Strategy s) noexcept;
std::optional<Strategy> parse_strategy(std::string_view name) noexcept;
constexpr bool is_3d(Strategy s) noexcept { return s == Strategy::BB3 || s == Strategy::TET; }

// ---------------------------------------------------------------------------
// LTM: lambda(omega), block index -> lower-triangular block coordinate.

/// floor(sqrt(1/4 + 2 omega) - 1/2) as evaluated under s. May be off by one
/// (or -1) for approximate strategies.
std::int64_t ltm_row_uncorrected(Index omega, const SqrtStrategy& s = {}) noexcept;

/// Block coordinate of omega in the diagonal-inclusive layout. No range check.
Coord2 ltm_solve(Index omega, const SqrtStrategy& s = {});

/// As ltm_solve, but requires omega < m (m + 1) / 2 (std::out_of_range).
Coord2 ltm_map(Index omega, Index m, const SqrtStrategy& s = {});

/// Strict lower triangle: i = floor(sqrt(1/4 + 2 omega) + 1/2), j = omega - i (i - 1) / 2.
Coord2 ltm_solve_nodiag(Index omega, const SqrtStrategy& s = {});

/// Requires omega < m (m - 1) / 2.
Coord2 ltm_map_nodiag(Index omega, Index m, const SqrtStrategy& s = {});

// ---------------------------------------------------------------------------
// BB: identity over an m x m box of blocks; returns the data-space block
// (by, bx) or nullopt when the block lies strictly above the diagonal.

std::optional<Coord2> bb_map(Index bx, Index by, Index m);

// ---------------------------------------------------------------------------
// RB: the strict triangle of size N (N = n + 1 with diagonal, which is then
// shifted up one row) folds into a rectangle with zero spare threads:
// N odd -> N x (N-1)/2, N even -> (N-1) x N/2. Rows below the rectangle
// diagonal keep their place; the rest is the far part of the triangle rotated
// by a half turn.

struct RbShape {
    Index width = 0;  ///< threads along x
    Index height = 0; ///< threads along y
};

RbShape rb_shape(Index n, bool diag);

/// Thread (tx, ty) of the rectangle -> element. No range check.
Coord2 rb_solve(Index tx, Index ty, Index n, bool diag) noexcept;

/// Throws std::out_of_range outside rb_shape(n, diag).
Coord2 rb_map(Index tx, Index ty, Index n, bool diag);

// ---------------------------------------------------------------------------
// REC: n = base * 2^levels with base a multiple of rho. Level 0 is the
// diagonal pass over 2^levels squares of side base (upper halves discarded);
// level l >= 1 holds 2^(levels-l) squares of side base * 2^(l-1), each the
// lower-left quadrant of a diagonal triangle of side base * 2^l. Blocks are
// numbered linearly: the diagonal pass first, then level 1, 2, ... Inside a
// square blocks are row-major.

struct RecPlan {
    Index n = 0;
    Index rho = 0;
    Index base = 0;
    unsigned levels = 0;

    Index base_blocks() const noexcept { return base / rho; }
    Index total_blocks() const noexcept;
};

/// Largest admissible level count unless one is requested. Throws
/// std::invalid_argument when n is not base * 2^levels with rho | base.
RecPlan rec_plan(Index n, Index rho, std::optional<unsigned> levels = std::nullopt);

Coord2 rec_square_origin(const RecPlan& plan, unsigned level, Index square);

struct RecBlock {
    Coord2 origin; ///< element coordinate of the block's (0, 0) thread
    unsigned level = 0;
};

/// Linear block index -> origin, by arithmetic only.
RecBlock rec_block(const RecPlan& plan, Index block);

struct RecLevel {
    unsigned level = 0;
    Index side = 0; ///< square side in elements
    std::vector<Coord2> origins;
};

std::vector<RecLevel> rec_layout(Index n, Index rho);

// ---------------------------------------------------------------------------
// UTM: thread index t -> pair (a, b), 1 <= a < b <= n, of the strict upper
// triangle in row-major order:
//   a = floor((-(2n+1) + sqrt(4n^2 - 4n - 8t + 1)) / -2)
//   b = (a + 1) + t - (a - 1)(2n - a) / 2
// utm_map reports it as the lower-triangular element (b - 1, a - 1).

struct UtmPair {
    Index a = 0;
    Index b = 0;

    friend constexpr bool operator==(const UtmPair&, const UtmPair&) = default;
};

std::int64_t utm_row_uncorrected(Index t, Index n, const SqrtStrategy& s = {}) noexcept;
UtmPair utm_solve(Index t, Index n, const SqrtStrategy& s = {});

/// Requires t < n (n - 1) / 2.
UtmPair utm_pair(Index t, Index n, const SqrtStrategy& s = {});
constexpr Coord2 utm_to_lower(UtmPair p) noexcept { return {p.b - 1, p.a - 1}; }
Coord2 utm_map(Index t, Index n, const SqrtStrategy& s = {});

/// First t of the size-n problem whose uncorrected row is wrong, if any.
std::optional<Index> validate_utm_range(const SqrtStrategy& s, Index n);

// ---------------------------------------------------------------------------
// TET: layer k = floor(x) with x the real root of x^3 + 3x^2 + 2x - 6 omega,
// then (i, j) = ltm(omega - tet_number(k)).

std::int64_t tet_layer_uncorrected(Index omega, const SqrtStrategy& s = {}) noexcept;
Coord3 tet_solve(Index omega, const SqrtStrategy& s = {});

/// Requires omega < tet_number(m).
Coord3 tet_map(Index omega, Index m, const SqrtStrategy& s = {});

// ---------------------------------------------------------------------------

/// Launch geometry of one strategy for a domain of linear size n.
struct GridSpec {
    Strategy strategy = Strategy::BB;
    Index n = 0;
    Index rho = 1;
    bool diag = true;
    unsigned dims = 2;
    std::array<Index, 3> extents{1, 1, 1}; ///< blocks per grid dimension
    Index m = 0;             ///< ceil(n / rho): blocks per side of the bounding box
    Index needed_blocks = 0; ///< blocks the map can assign work to
    bool ltm_strict = false; ///< LTM enumerates only strictly-lower blocks (rho == 1, no diagonal)
    RbShape rb;              ///< RB thread rectangle
    RecPlan rec;             ///< REC decomposition

    Index total_blocks() const noexcept { return extents[0] * extents[1] * extents[2]; }
    Index threads_per_block() const noexcept { return dims == 3 ? rho * rho * rho : rho * rho; }
    Index dispatched_threads() const noexcept { return total_blocks() * threads_per_block(); }
};

/// Grid for strategy over a domain of size n.
///  BB:  m x m          LTM: m' x m', m' = ceil(sqrt(m (m + 1) / 2))
///  RB:  ceil(W/rho) x ceil(H/rho)     REC, UTM: 1-D block count
///  BB3: m x m x m      TET: s x s x s, s = ceil(cbrt(tet_number(m)))
/// Throws std::invalid_argument for rho == 0, n == 0 or an inadmissible REC size.
GridSpec grid_dims(Strategy strategy, Index n, Index rho, bool diag = true);

/// Smallest r with r * r >= v.
Index ceil_sqrt(Index v) noexcept;
/// Smallest r with r * r * r >= v.
Index ceil_cbrt(Index v) noexcept;

} // namespace trimap
