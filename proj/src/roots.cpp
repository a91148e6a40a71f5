#include "trimap/roots.hpp"

#include "trimap/maps.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace trimap {

SqrtStrategy::SqrtStrategy(SqrtKind kind, double epsilon) : kind_(kind), epsilon_(epsilon)
{
    if (!(epsilon >= 0.0)) {
        throw std::invalid_argument("SqrtStrategy: epsilon must be non-negative");
    }
    if (kind == SqrtKind::Exact && epsilon != 0.0) {
        throw std::invalid_argument("SqrtStrategy: Exact takes no epsilon");
    }
}

SqrtStrategy SqrtStrategy::of(SqrtKind kind)
{
    return kind == SqrtKind::Exact ? exact() : SqrtStrategy{kind, kDefaultEpsilon};
}

float rsqrt_magic(float x) noexcept
{
    const float half = 0.5F * x;
    auto bits = std::bit_cast<std::uint32_t>(x);
    bits = kMagicSeed - (bits >> 1U);
    float y = std::bit_cast<float>(bits);
    for (int step = 0; step < kNewtonSteps; ++step) {
        y = y * std::fma(-(half * y), y, 1.5F);
    }
    return y;
}

float rsqrt_unit(float x) noexcept
{
    return static_cast<float>(1.0 / std::sqrt(static_cast<double>(x)));
}

float sqrt_eval_f32(const SqrtStrategy& s, float x) noexcept
{
    const auto eps = static_cast<float>(s.epsilon());
    switch (s.kind()) {
    case SqrtKind::Exact:
        return std::sqrt(x);
    case SqrtKind::NewtonMagic:
        // x * rsqrt(x) is NaN at 0 (0 * inf).
        return x == 0.0F ? eps : x * rsqrt_magic(x) + eps;
    case SqrtKind::ReciprocalEps:
        return x == 0.0F ? eps : x * rsqrt_unit(x) + eps;
    }
    return std::sqrt(x);
}

double sqrt_eval(const SqrtStrategy& s, double x)
{
    if (!(x >= 0.0)) {
        throw std::domain_error("sqrt_eval: negative argument " + std::to_string(x));
    }
    if (s.kind() == SqrtKind::Exact) {
        return std::sqrt(x);
    }
    return static_cast<double>(sqrt_eval_f32(s, static_cast<float>(x)));
}

std::optional<Index> validate_sqrt_range(const SqrtStrategy& s, Index omega_max)
{
    // Walk the enumeration order row by row instead of materialising it.
    Index row = 0;
    Index next_row_start = 1;
    for (Index omega = 0; omega <= omega_max; ++omega) {
        while (omega >= next_row_start) {
            ++row;
            next_row_start += row + 1;
        }
        if (ltm_row_uncorrected(omega, s) != static_cast<std::int64_t>(row)) {
            return omega;
        }
    }
    return std::nullopt;
}

std::string_view to_string(SqrtKind kind) noexcept
{
    switch (kind) {
    case SqrtKind::Exact: return "exact";
    case SqrtKind::NewtonMagic: return "newton";
    case SqrtKind::ReciprocalEps: return "rsqrt";
    }
    return "?";
}

std::optional<SqrtKind> parse_sqrt_kind(std::string_view name) noexcept
{
    for (auto k : {SqrtKind::Exact, SqrtKind::NewtonMagic, SqrtKind::ReciprocalEps}) {
        if (to_string(k) == name) {
            return k;
        }
    }
    return std::nullopt;
}

} // namespace trimap
