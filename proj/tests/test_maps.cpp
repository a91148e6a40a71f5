#include "trimap/maps.hpp"
#include "trimap/verify.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

using namespace trimap;

namespace {

// Row of omega by binary search over triangular numbers.
Coord2 row_oracle(Index omega)
{
    Index lo = 0;
    Index hi = Index{1} << 32;
    while (hi - lo > 1) {
        const Index mid = lo + (hi - lo) / 2;
        (tri_number(mid) <= omega ? lo : hi) = mid;
    }
    return {lo, omega - tri_number(lo)};
}

const SqrtStrategy kAll[] = {SqrtStrategy{}, SqrtStrategy::newton_magic(), SqrtStrategy::reciprocal(),
                             SqrtStrategy::newton_magic(0.0)};

} // namespace

TEST_CASE("strategy names")
{
    for (auto s : {Strategy::BB, Strategy::LTM, Strategy::RB, Strategy::REC, Strategy::UTM, Strategy::BB3,
                   Strategy::TET}) {
        CHECK(parse_strategy(to_string(s)) == s);
    }
    CHECK(to_string(Strategy::BB3) == "BB3D");
    CHECK_FALSE(parse_strategy("bb").has_value());
    CHECK(is_3d(Strategy::TET));
    CHECK_FALSE(is_3d(Strategy::UTM));
}

TEST_CASE("LTM witnesses")
{
    CHECK(ltm_map(0, 4) == Coord2{0, 0});
    CHECK(ltm_map(3, 4) == Coord2{2, 0});
    CHECK(ltm_map(4, 4) == Coord2{2, 1});
    CHECK(ltm_map(7, 4) == Coord2{3, 1});
    CHECK(ltm_map(9, 4) == Coord2{3, 3});
    CHECK_THROWS_AS(ltm_map(10, 4), std::out_of_range);

    CHECK(ltm_map_nodiag(0, 4) == Coord2{1, 0});
    CHECK(ltm_map_nodiag(2, 4) == Coord2{2, 1});
    CHECK(ltm_map_nodiag(5, 4) == Coord2{3, 2});
    CHECK_THROWS_AS(ltm_map_nodiag(6, 4), std::out_of_range);
}

TEST_CASE("LTM equals the enumeration for every sqrt strategy")
{
    const Index m = 2048;
    for (const auto& s : kAll) {
        CAPTURE(to_string(s.kind()));
        CAPTURE(s.epsilon());
        Index omega = 0;
        for (Index i = 0; i < m; ++i) {
            for (Index j = 0; j <= i; ++j, ++omega) {
                REQUIRE(ltm_solve(omega, s) == Coord2{i, j});
            }
        }
    }
}

TEST_CASE("LTM strict equals the strict enumeration")
{
    for (const auto& s : kAll) {
        const auto all = enumerate_tri(TriDomain{300, false});
        for (Index w = 0; w < all.size(); ++w) {
            REQUIRE(ltm_solve_nodiag(w, s) == all[w]);
        }
    }
}

TEST_CASE("LTM with the correction ladder is exact at large omega")
{
    std::mt19937_64 rng(1234);
    std::uniform_int_distribution<Index> dist(0, Index{1} << 50);
    for (const auto& s : kAll) {
        for (int k = 0; k < 20000; ++k) {
            const Index omega = dist(rng);
            REQUIRE(ltm_solve(omega, s) == row_oracle(omega));
        }
        // Row boundaries are where a rounding error shows first.
        for (Index i = 1; i < 3000000; i += 997) {
            REQUIRE(ltm_solve(tri_number(i), s) == Coord2{i, 0});
            REQUIRE(ltm_solve(tri_number(i) - 1, s) == Coord2{i - 1, i - 1});
        }
    }
}

TEST_CASE("BB block map")
{
    CHECK_FALSE(bb_map(3, 0, 4).has_value());
    CHECK(bb_map(0, 3, 4) == Coord2{3, 0});
    CHECK(bb_map(2, 2, 4) == Coord2{2, 2});
    CHECK_THROWS_AS(bb_map(4, 0, 4), std::out_of_range);

    int discarded = 0;
    for (Index by = 0; by < 4; ++by) {
        for (Index bx = 0; bx < 4; ++bx) {
            discarded += bb_map(bx, by, 4) ? 0 : 1;
        }
    }
    CHECK(discarded == 6);
}

TEST_CASE("RB folds the triangle into a rectangle with no waste")
{
    CHECK(rb_shape(4, true).width == 5);
    CHECK(rb_shape(4, true).height == 2);
    CHECK(rb_shape(4, false).width == 3);
    CHECK(rb_shape(4, false).height == 2);
    CHECK(rb_shape(1, false).width == 0);

    for (bool diag : {true, false}) {
        for (Index n = 1; n <= 64; ++n) {
            const TriDomain d{n, diag};
            const auto shape = rb_shape(n, diag);
            CHECK(shape.width * shape.height == d.size());
            std::set<Coord2> seen;
            for (Index y = 0; y < shape.height; ++y) {
                for (Index x = 0; x < shape.width; ++x) {
                    const Coord2 c = rb_map(x, y, n, diag);
                    REQUIRE(d.contains(c));
                    seen.insert(c);
                }
            }
            REQUIRE(seen.size() == d.size());
        }
    }
    CHECK_THROWS_AS(rb_map(5, 0, 4, true), std::out_of_range);
}

TEST_CASE("REC plan")
{
    const auto p = rec_plan(64, 8);
    CHECK(p.base == 8);
    CHECK(p.levels == 3);
    // 8 diagonal squares of one block each, then 4 + 4*4 + 2*16 ... per level.
    CHECK(p.total_blocks() == 8 + 4 * 1 + 2 * 4 + 1 * 16);

    const auto q = rec_plan(96, 8);
    CHECK(q.base == 24);
    CHECK(q.levels == 2);
    CHECK(rec_plan(64, 8, 1u).base == 32);
    CHECK_THROWS_AS(rec_plan(60, 8), std::invalid_argument);
    CHECK_THROWS_AS(rec_plan(64, 8, 4u), std::invalid_argument);

    const auto layout = rec_layout(64, 8);
    REQUIRE(layout.size() == 4);
    CHECK(layout[0].origins.size() == 8);
    CHECK(layout[1].side == 8);
    CHECK(layout[1].origins.front() == Coord2{8, 0});
    CHECK(layout[3].side == 32);
    CHECK(layout[3].origins == std::vector<Coord2>{{32, 0}});
}

TEST_CASE("REC blocks tile the lower triangle")
{
    for (auto [n, rho] : {std::pair<Index, Index>{64, 8}, {96, 8}, {32, 8}, {8, 8}, {40, 4}}) {
        const auto plan = rec_plan(n, rho);
        std::set<Coord2> lower;
        std::set<Coord2> all;
        for (Index b = 0; b < plan.total_blocks(); ++b) {
            const auto blk = rec_block(plan, b);
            CHECK(blk.origin.i % rho == 0);
            CHECK(blk.origin.j % rho == 0);
            CHECK(blk.origin.i < n);
            all.insert(blk.origin);
            if (blk.origin.i >= blk.origin.j) {
                lower.insert(blk.origin);
            } else {
                // Only the diagonal pass reaches above the diagonal.
                CHECK(blk.level == 0);
            }
        }
        const Index m = n / rho;
        CHECK(all.size() == plan.total_blocks());
        CHECK(lower.size() == tri_number(m));
    }
    CHECK(grid_dims(Strategy::REC, 32, 8).dispatched_threads() == 640);
}

TEST_CASE("UTM pairs")
{
    CHECK(utm_pair(0, 4) == UtmPair{1, 2});
    CHECK(utm_pair(2, 4) == UtmPair{1, 4});
    CHECK(utm_pair(3, 4) == UtmPair{2, 3});
    CHECK(utm_pair(5, 4) == UtmPair{3, 4});
    CHECK(utm_map(5, 4) == Coord2{3, 2});
    CHECK_THROWS_AS(utm_pair(6, 4), std::out_of_range);

    for (Index n : {2, 4, 64, 1000}) {
        Index t = 0;
        for (Index a = 1; a < n; ++a) {
            for (Index b = a + 1; b <= n; ++b, ++t) {
                for (const auto& s : kAll) {
                    REQUIRE(utm_pair(t, n, s) == UtmPair{a, b});
                }
            }
        }
    }
    CHECK_FALSE(validate_utm_range(SqrtStrategy{}, 3000).has_value());
}

TEST_CASE("TET witnesses and bijection")
{
    CHECK(tet_map(0, 4) == Coord3{0, 0, 0});
    CHECK(tet_map(1, 4) == Coord3{0, 0, 1});
    CHECK(tet_map(4, 4) == Coord3{0, 0, 2});
    CHECK(tet_map(9, 4) == Coord3{2, 2, 2});
    CHECK(tet_map(19, 4) == Coord3{3, 3, 3});
    CHECK_THROWS_AS(tet_map(20, 4), std::out_of_range);

    const auto all = enumerate_tet(TetDomain{64});
    for (const auto& s : kAll) {
        for (Index w = 0; w < all.size(); ++w) {
            REQUIRE(tet_map(w, 64, s) == all[w]);
        }
    }
}

TEST_CASE("grid shapes")
{
    CHECK(grid_dims(Strategy::LTM, 8, 2).extents == std::array<Index, 3>{4, 4, 1});
    CHECK(grid_dims(Strategy::BB, 8, 2).extents == std::array<Index, 3>{4, 4, 1});
    CHECK(grid_dims(Strategy::TET, 6, 2).extents == std::array<Index, 3>{3, 3, 3});

    const auto bb = grid_dims(Strategy::BB, 100, 16);
    CHECK(bb.m == 7);
    CHECK(bb.total_blocks() == 49);
    CHECK(bb.dispatched_threads() == 49 * 256);

    const auto ltm = grid_dims(Strategy::LTM, 100, 16);
    CHECK(ltm.needed_blocks == 28);
    CHECK(ltm.extents[0] == 6);
    CHECK(ltm.total_blocks() == 36);
    CHECK_FALSE(ltm.ltm_strict);
    CHECK(grid_dims(Strategy::LTM, 100, 1, false).ltm_strict);

    const auto rb = grid_dims(Strategy::RB, 100, 16);
    CHECK(rb.rb.width == 101);
    CHECK(rb.rb.height == 50);
    CHECK(rb.total_blocks() == 7 * 4);

    const auto utm = grid_dims(Strategy::UTM, 100, 16, false);
    CHECK(utm.total_blocks() == (4950 + 255) / 256);

    const auto tet = grid_dims(Strategy::TET, 64, 8);
    CHECK(tet.needed_blocks == 120);
    CHECK(tet.extents[0] == 5);
    CHECK(tet.threads_per_block() == 512);
    CHECK(grid_dims(Strategy::BB3, 64, 8).total_blocks() == 512);

    CHECK_THROWS_AS(grid_dims(Strategy::BB, 0, 16), std::invalid_argument);
    CHECK_THROWS_AS(grid_dims(Strategy::REC, 100, 16), std::invalid_argument);
}

TEST_CASE("integer ceil roots")
{
    CHECK(ceil_sqrt(0) == 0);
    CHECK(ceil_sqrt(1) == 1);
    CHECK(ceil_sqrt(2) == 2);
    CHECK(ceil_sqrt(16) == 4);
    CHECK(ceil_sqrt(17) == 5);
    CHECK(ceil_cbrt(27) == 3);
    CHECK(ceil_cbrt(28) == 4);
    for (Index v = 1; v < 100000; v += 7) {
        const Index r = ceil_sqrt(v);
        REQUIRE(r * r >= v);
        REQUIRE((r - 1) * (r - 1) < v);
        const Index c = ceil_cbrt(v);
        REQUIRE(c * c * c >= v);
        REQUIRE((c - 1) * (c - 1) * (c - 1) < v);
    }
    const Index big = (Index{1} << 32) - 1;
    CHECK(ceil_sqrt(big * big) == big);
    CHECK(ceil_sqrt(big * big + 1) == big + 1);
}

TEST_CASE("mapped sets equal the enumeration for small sizes")
{
    for (bool diag : {true, false}) {
        for (Index n : {1, 5, 16, 17, 40}) {
            auto oracle = enumerate_tri(TriDomain{n, diag});
            std::sort(oracle.begin(), oracle.end());
            for (auto s : {Strategy::BB, Strategy::LTM, Strategy::RB, Strategy::UTM}) {
                auto got = mapped_tri(s, n, 4, diag);
                std::sort(got.begin(), got.end());
                CHECK(got == oracle);
            }
            if (n % 4 == 0) {
                auto got = mapped_tri(Strategy::REC, n, 4, diag);
                std::sort(got.begin(), got.end());
                CHECK(got == oracle);
            }
        }
    }
}
