#include "trimap/maps.hpp"
#include "trimap/roots.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

using namespace trimap;

namespace {
std::int64_t row_of(Index omega)
{
    std::int64_t i = 0;
    while (tri_number(static_cast<Index>(i + 1)) <= omega) {
        ++i;
    }
    return i;
}
} // namespace

TEST_CASE("SqrtStrategy construction")
{
    CHECK(SqrtStrategy{}.kind() == SqrtKind::Exact);
    CHECK(SqrtStrategy{}.epsilon() == 0.0);
    CHECK(SqrtStrategy::newton_magic().epsilon() == kDefaultEpsilon);
    CHECK(SqrtStrategy::of(SqrtKind::ReciprocalEps) == SqrtStrategy::reciprocal());
    CHECK_THROWS_AS(SqrtStrategy(SqrtKind::NewtonMagic, -1e-4), std::invalid_argument);
    CHECK_THROWS_AS(SqrtStrategy(SqrtKind::Exact, 1e-4), std::invalid_argument);
    CHECK_THROWS_AS(SqrtStrategy(SqrtKind::NewtonMagic, std::nan("")), std::invalid_argument);
}

TEST_CASE("sqrt kind names round-trip")
{
    for (auto k : {SqrtKind::Exact, SqrtKind::NewtonMagic, SqrtKind::ReciprocalEps}) {
        CHECK(parse_sqrt_kind(to_string(k)) == k);
    }
    CHECK_FALSE(parse_sqrt_kind("fast").has_value());
}

TEST_CASE("exact sqrt")
{
    CHECK(sqrt_eval(SqrtStrategy{}, 4.0) == 2.0);
    CHECK(sqrt_eval(SqrtStrategy{}, 0.0) == 0.0);
    CHECK_THROWS_AS(sqrt_eval(SqrtStrategy{}, -1.0), std::domain_error);
    CHECK_THROWS_AS(sqrt_eval(SqrtStrategy::newton_magic(), std::nan("")), std::domain_error);
}

TEST_CASE("approximate sqrt: relative error within 1e-3 on a log grid")
{
    for (auto s : {SqrtStrategy::newton_magic(0.0), SqrtStrategy::reciprocal(0.0)}) {
        CAPTURE(to_string(s.kind()));
        for (double x = 1.0; x <= 2147483648.0; x *= 1.07) {
            const double got = sqrt_eval(s, x);
            REQUIRE(std::abs(got - std::sqrt(x)) / std::sqrt(x) <= 1e-3);
        }
    }
}

TEST_CASE("approximate sqrt is monotone non-decreasing over integers")
{
    for (auto s : {SqrtStrategy::newton_magic(), SqrtStrategy::reciprocal()}) {
        double prev = sqrt_eval(s, 0.0);
        for (Index x = 1; x < 200000; ++x) {
            const double cur = sqrt_eval(s, static_cast<double>(x));
            REQUIRE(cur >= prev);
            prev = cur;
        }
    }
}

TEST_CASE("rsqrt units")
{
    CHECK(rsqrt_unit(4.0F) == 0.5F);
    CHECK(rsqrt_unit(1.0F) == 1.0F);
    CHECK(std::abs(rsqrt_magic(4.0F) - 0.5F) < 1e-6F);
    CHECK(std::abs(rsqrt_magic(1e6F) - 1e-3F) < 1e-9F);
}

TEST_CASE("uncorrected row: epsilon is required below the range limit")
{
    // Without epsilon, perfect squares land just below the integer and the floor misses.
    const auto bare = validate_sqrt_range(SqrtStrategy::newton_magic(0.0), 10000);
    REQUIRE(bare.has_value());
    CHECK(*bare < 10000);

    const Index limit = tri_number(1920);
    CHECK_FALSE(validate_sqrt_range(SqrtStrategy::newton_magic(), limit).has_value());
    CHECK_FALSE(validate_sqrt_range(SqrtStrategy::reciprocal(), limit).has_value());
    CHECK_FALSE(validate_sqrt_range(SqrtStrategy{}, limit).has_value());
}

TEST_CASE("uncorrected row agrees with the exact row where it passes")
{
    const auto s = SqrtStrategy::newton_magic();
    for (Index i = 0; i <= 1920; ++i) {
        const Index first = tri_number(i);
        REQUIRE(ltm_row_uncorrected(first, s) == static_cast<std::int64_t>(i));
        REQUIRE(ltm_row_uncorrected(first + i, s) == static_cast<std::int64_t>(i));
    }
    // Beyond the range the first miss is a row start rounded down into the previous row.
    const auto miss = validate_sqrt_range(s, tri_number(4096));
    REQUIRE(miss.has_value());
    CHECK(*miss > tri_number(1920));
    CHECK(ltm_row_uncorrected(*miss, s) != row_of(*miss));
}
