#include "trimap/maps.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace trimap {

namespace {

constexpr std::array kStrategyNames{
    std::pair{Strategy::BB, std::string_view{"BB"}},   std::pair{Strategy::LTM, std::string_view{"LTM"}},
    std::pair{Strategy::RB, std::string_view{"RB"}},   std::pair{Strategy::REC, std::string_view{"REC"}},
    std::pair{Strategy::UTM, std::string_view{"UTM"}}, std::pair{Strategy::BB3, std::string_view{"BB3D"}},
    std::pair{Strategy::TET, std::string_view{"TET"}},
};

[[noreturn]] void out_of_range(const char* what, Index value, Index bound)
{
    throw std::out_of_range(std::string(what) + ": index " + std::to_string(value) + " not below " +
                            std::to_string(bound));
}

Index clamp_estimate(std::int64_t est) noexcept { return est < 0 ? 0 : static_cast<Index>(est); }

// Smallest-step walk until start(i) <= omega < start(i + 1).
template <class Start>
Index settle(Index i, Index omega, Start start)
{
    while (i > 0 && start(i) > omega) {
        --i;
    }
    while (start(i + 1) <= omega) {
        ++i;
    }
    return i;
}

} // namespace

std::string_view to_string(Strategy s) noexcept
{
    for (const auto& [tag, name] : kStrategyNames) {
        if (tag == s) {
            return name;
        }
    }
    return "?";
}

std::optional<Strategy> parse_strategy(std::string_view name) noexcept
{
    for (const auto& [tag, label] : kStrategyNames) {
        if (label == name) {
            return tag;
        }
    }
    return std::nullopt;
}

// --- LTM -------------------------------------------------------------------

std::int64_t ltm_row_uncorrected(Index omega, const SqrtStrategy& s) noexcept
{
    if (s.kind() == SqrtKind::Exact) {
        return static_cast<std::int64_t>(std::floor(std::sqrt(0.25 + 2.0 * static_cast<double>(omega)) - 0.5));
    }
    const float root = sqrt_eval_f32(s, 0.25F + 2.0F * static_cast<float>(omega));
    return static_cast<std::int64_t>(std::floor(root - 0.5F));
}

Coord2 ltm_solve(Index omega, const SqrtStrategy& s)
{
    const Index i = settle(clamp_estimate(ltm_row_uncorrected(omega, s)), omega, [](Index r) { return tri_number(r); });
    return {i, omega - tri_number(i)};
}

Coord2 ltm_map(Index omega, Index m, const SqrtStrategy& s)
{
    if (omega >= tri_number(m)) {
        out_of_range("ltm_map", omega, tri_number(m));
    }
    return ltm_solve(omega, s);
}

Coord2 ltm_solve_nodiag(Index omega, const SqrtStrategy& s)
{
    std::int64_t est = 0;
    if (s.kind() == SqrtKind::Exact) {
        est = static_cast<std::int64_t>(std::floor(std::sqrt(0.25 + 2.0 * static_cast<double>(omega)) + 0.5));
    } else {
        const float root = sqrt_eval_f32(s, 0.25F + 2.0F * static_cast<float>(omega));
        est = static_cast<std::int64_t>(std::floor(root + 0.5F));
    }
    // Row i of the strict triangle starts at tri_number(i - 1); row 0 is empty.
    const Index i = settle(clamp_estimate(est - 1), omega, [](Index r) { return tri_number(r); }) + 1;
    return {i, omega - tri_number(i - 1)};
}

Coord2 ltm_map_nodiag(Index omega, Index m, const SqrtStrategy& s)
{
    const Index count = m == 0 ? 0 : tri_number(m - 1);
    if (omega >= count) {
        out_of_range("ltm_map_nodiag", omega, count);
    }
    return ltm_solve_nodiag(omega, s);
}

// --- BB --------------------------------------------------------------------

std::optional<Coord2> bb_map(Index bx, Index by, Index m)
{
    if (bx >= m || by >= m) {
        out_of_range("bb_map", bx >= m ? bx : by, m);
    }
    if (bx > by) {
        return std::nullopt;
    }
    return Coord2{by, bx};
}

// --- RB --------------------------------------------------------------------

RbShape rb_shape(Index n, bool diag)
{
    const Index big = diag ? n + 1 : n;
    if (big < 2) {
        return {0, 0};
    }
    if (big % 2 == 1) {
        return {big, (big - 1) / 2};
    }
    return {big - 1, big / 2};
}

Coord2 rb_solve(Index tx, Index ty, Index n, bool diag) noexcept
{
    const Index big = diag ? n + 1 : n;
    Coord2 c;
    if (big % 2 == 1) {
        c = tx <= ty ? Coord2{ty + 1, tx} : Coord2{big - 1 - ty, big - 1 - tx};
    } else {
        c = tx < ty ? Coord2{ty, tx} : Coord2{big - 1 - ty, big - 2 - tx};
    }
    if (diag) {
        --c.i;
    }
    return c;
}

Coord2 rb_map(Index tx, Index ty, Index n, bool diag)
{
    const auto shape = rb_shape(n, diag);
    if (tx >= shape.width) {
        out_of_range("rb_map", tx, shape.width);
    }
    if (ty >= shape.height) {
        out_of_range("rb_map", ty, shape.height);
    }
    return rb_solve(tx, ty, n, diag);
}

// --- REC -------------------------------------------------------------------

Index RecPlan::total_blocks() const noexcept
{
    const Index unit = base_blocks() * base_blocks();
    const Index diagonal = unit << levels;
    if (levels == 0) {
        return diagonal;
    }
    return diagonal + unit * ((Index{1} << (levels - 1)) * ((Index{1} << levels) - 1));
}

RecPlan rec_plan(Index n, Index rho, std::optional<unsigned> levels)
{
    if (rho == 0 || n == 0 || n % rho != 0) {
        throw std::invalid_argument("REC: n = " + std::to_string(n) + " is not a multiple of rho = " +
                                    std::to_string(rho));
    }
    RecPlan plan{n, rho, n, 0};
    if (levels) {
        if (*levels >= 63 || n % (Index{1} << *levels) != 0 || (n >> *levels) % rho != 0) {
            throw std::invalid_argument("REC: n = " + std::to_string(n) + " is not m * 2^" + std::to_string(*levels) +
                                        " with m a multiple of rho = " + std::to_string(rho));
        }
        plan.levels = *levels;
        plan.base = n >> *levels;
        return plan;
    }
    while (plan.base % 2 == 0 && (plan.base / 2) % rho == 0) {
        plan.base /= 2;
        ++plan.levels;
    }
    return plan;
}

Coord2 rec_square_origin(const RecPlan& plan, unsigned level, Index square)
{
    if (level > plan.levels) {
        out_of_range("rec_square_origin level", level, plan.levels + 1);
    }
    if (level == 0) {
        if (square >= (Index{1} << plan.levels)) {
            out_of_range("rec_square_origin", square, Index{1} << plan.levels);
        }
        return {square * plan.base, square * plan.base};
    }
    const Index side = plan.base << (level - 1);
    if (square >= (Index{1} << (plan.levels - level))) {
        out_of_range("rec_square_origin", square, Index{1} << (plan.levels - level));
    }
    return {2 * side * square + side, 2 * side * square};
}

RecBlock rec_block(const RecPlan& plan, Index block)
{
    const Index per_side = plan.base_blocks();
    const Index unit = per_side * per_side;
    const Index diagonal = unit << plan.levels;
    if (block < diagonal) {
        const Index square = block / unit;
        const Index local = block % unit;
        const Index corner = square * plan.base;
        return {{corner + (local / per_side) * plan.rho, corner + (local % per_side) * plan.rho}, 0};
    }
    // Level l >= 1 spans 2^(levels + l - 2) units of `unit` blocks; the units
    // before it number 2^(levels - 1) (2^(l - 1) - 1).
    const Index rest = block - diagonal;
    const Index units = rest / unit;
    const auto level = static_cast<unsigned>(std::bit_width((units >> (plan.levels - 1)) + 1));
    const Index before = (Index{1} << (plan.levels - 1)) * ((Index{1} << (level - 1)) - 1);
    const Index offset = rest - before * unit;
    const Index square_blocks = unit << (2 * (level - 1));
    const Index side_blocks = per_side << (level - 1);
    const Index square = offset / square_blocks;
    const Index local = offset % square_blocks;
    const Coord2 corner = rec_square_origin(plan, level, square);
    return {{corner.i + (local / side_blocks) * plan.rho, corner.j + (local % side_blocks) * plan.rho}, level};
}

std::vector<RecLevel> rec_layout(Index n, Index rho)
{
    const auto plan = rec_plan(n, rho);
    std::vector<RecLevel> out;
    for (unsigned level = 0; level <= plan.levels; ++level) {
        RecLevel entry;
        entry.level = level;
        entry.side = level == 0 ? plan.base : plan.base << (level - 1);
        const Index squares = level == 0 ? Index{1} << plan.levels : Index{1} << (plan.levels - level);
        for (Index q = 0; q < squares; ++q) {
            entry.origins.push_back(rec_square_origin(plan, level, q));
        }
        out.push_back(std::move(entry));
    }
    return out;
}

// --- UTM -------------------------------------------------------------------

namespace {
// First thread index of 1-based row a.
Index utm_row_start(Index a, Index n) noexcept { return (a - 1) * (2 * n - a) / 2; }
} // namespace

std::int64_t utm_row_uncorrected(Index t, Index n, const SqrtStrategy& s) noexcept
{
    if (s.kind() == SqrtKind::Exact) {
        const double nn = static_cast<double>(n);
        const double disc = 4.0 * nn * nn - 4.0 * nn - 8.0 * static_cast<double>(t) + 1.0;
        return static_cast<std::int64_t>(std::floor((-(2.0 * nn + 1.0) + std::sqrt(disc)) / -2.0));
    }
    const float nn = static_cast<float>(n);
    const float disc = 4.0F * nn * nn - 4.0F * nn - 8.0F * static_cast<float>(t) + 1.0F;
    const float root = sqrt_eval_f32(s, disc < 0.0F ? 0.0F : disc);
    return static_cast<std::int64_t>(std::floor((-(2.0F * nn + 1.0F) + root) / -2.0F));
}

UtmPair utm_solve(Index t, Index n, const SqrtStrategy& s)
{
    std::int64_t est = utm_row_uncorrected(t, n, s);
    if (est < 1) {
        est = 1;
    }
    if (static_cast<Index>(est) > n - 1) {
        est = static_cast<std::int64_t>(n - 1);
    }
    Index a = static_cast<Index>(est);
    while (a > 1 && utm_row_start(a, n) > t) {
        --a;
    }
    while (a + 1 < n && utm_row_start(a + 1, n) <= t) {
        ++a;
    }
    return {a, (a + 1) + t - utm_row_start(a, n)};
}

UtmPair utm_pair(Index t, Index n, const SqrtStrategy& s)
{
    const Index count = n == 0 ? 0 : tri_number(n - 1);
    if (t >= count) {
        out_of_range("utm_map", t, count);
    }
    return utm_solve(t, n, s);
}

Coord2 utm_map(Index t, Index n, const SqrtStrategy& s) { return utm_to_lower(utm_pair(t, n, s)); }

std::optional<Index> validate_utm_range(const SqrtStrategy& s, Index n)
{
    Index t = 0;
    for (Index a = 1; a < n; ++a) {
        for (Index b = a + 1; b <= n; ++b, ++t) {
            if (utm_row_uncorrected(t, n, s) != static_cast<std::int64_t>(a)) {
                return t;
            }
        }
    }
    return std::nullopt;
}

// --- TET -------------------------------------------------------------------

std::int64_t tet_layer_uncorrected(Index omega, const SqrtStrategy& s) noexcept
{
    // 729 omega^2 - 3 < 0 at omega = 0.
    if (omega == 0) {
        return 0;
    }
    const double w = static_cast<double>(omega);
    const double radicand = 729.0 * w * w - 3.0;
    const double root = s.kind() == SqrtKind::Exact ? std::sqrt(radicand)
                                                    : static_cast<double>(sqrt_eval_f32(s, static_cast<float>(radicand)));
    const double c = std::cbrt(root + 27.0 * w);
    const double x = c / std::cbrt(9.0) + 1.0 / (std::cbrt(3.0) * c) - 1.0;
    return static_cast<std::int64_t>(std::floor(x));
}

Coord3 tet_solve(Index omega, const SqrtStrategy& s)
{
    const Index k = settle(clamp_estimate(tet_layer_uncorrected(omega, s)), omega, [](Index r) { return tet_number(r); });
    const Coord2 in_layer = ltm_solve(omega - tet_number(k), s);
    return {in_layer.i, in_layer.j, k};
}

Coord3 tet_map(Index omega, Index m, const SqrtStrategy& s)
{
    if (omega >= tet_number(m)) {
        out_of_range("tet_map", omega, tet_number(m));
    }
    return tet_solve(omega, s);
}

// --- grids -----------------------------------------------------------------

namespace {
// Largest r with r^p representable, for p = 2 and 3.
constexpr Index kMaxSqrtRoot = 0xFFFFFFFFULL;
constexpr Index kMaxCbrtRoot = 2642245;

template <class Power>
Index ceil_root(Index v, double estimate, Index max_root, Power pow) noexcept
{
    auto r = std::min(static_cast<Index>(estimate), max_root);
    while (r > 0 && pow(r) > v) {
        --r;
    }
    while (r < max_root && pow(r + 1) <= v) {
        ++r;
    }
    return pow(r) == v ? r : r + 1;
}
} // namespace

Index ceil_sqrt(Index v) noexcept
{
    return ceil_root(v, std::sqrt(static_cast<double>(v)), kMaxSqrtRoot, [](Index r) { return r * r; });
}

Index ceil_cbrt(Index v) noexcept
{
    return ceil_root(v, std::cbrt(static_cast<double>(v)), kMaxCbrtRoot, [](Index r) { return r * r * r; });
}

GridSpec grid_dims(Strategy strategy, Index n, Index rho, bool diag)
{
    if (rho == 0 || n == 0) {
        throw std::invalid_argument("grid_dims: n and rho must be positive");
    }
    GridSpec g;
    g.strategy = strategy;
    g.n = n;
    g.rho = rho;
    g.diag = is_3d(strategy) ? true : diag;
    g.m = (n + rho - 1) / rho;
    const Index m = g.m;

    switch (strategy) {
    case Strategy::BB:
        g.extents = {m, m, 1};
        g.needed_blocks = tri_number(m);
        break;
    case Strategy::LTM: {
        g.ltm_strict = !diag && rho == 1;
        g.needed_blocks = g.ltm_strict ? tri_number(m - 1) : tri_number(m);
        const Index side = ceil_sqrt(g.needed_blocks);
        g.extents = {side, side, 1};
        break;
    }
    case Strategy::RB:
        g.rb = rb_shape(n, diag);
        g.extents = {(g.rb.width + rho - 1) / rho, (g.rb.height + rho - 1) / rho, 1};
        g.needed_blocks = g.total_blocks();
        break;
    case Strategy::REC:
        g.rec = rec_plan(n, rho);
        g.extents = {g.rec.total_blocks(), 1, 1};
        g.needed_blocks = g.total_blocks();
        break;
    case Strategy::UTM: {
        const Index pairs = tri_number(diag ? n : n - 1);
        const Index per_block = rho * rho;
        g.extents = {(pairs + per_block - 1) / per_block, 1, 1};
        g.needed_blocks = g.total_blocks();
        break;
    }
    case Strategy::BB3:
        g.dims = 3;
        g.extents = {m, m, m};
        g.needed_blocks = tet_number(m);
        break;
    case Strategy::TET: {
        g.dims = 3;
        g.needed_blocks = tet_number(m);
        const Index side = ceil_cbrt(g.needed_blocks);
        g.extents = {side, side, side};
        break;
    }
    }
    return g;
}

} // namespace trimap
