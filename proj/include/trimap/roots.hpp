#pragma once

#include "trimap/domain.hpp"

#include <cstdint>
#include <optional>
#include <string_view>

namespace trimap {

/// Square-root evaluation used by the square-root based maps.
///
///  - Exact:         platform sqrt in double precision.
///  - NewtonMagic:   bit-level reciprocal sqrt seeded with 0x5f3759df and
///                   refined by three Newton-Raphson steps, all in float;
///                   sqrt(x) = x * rsqrt(x) + epsilon.
///  - ReciprocalEps: sqrt(x) = x * rsqrtf(x) + epsilon, where rsqrtf is a
///                   software stand-in for a hardware reciprocal-sqrt unit.
enum class SqrtKind { Exact, NewtonMagic, ReciprocalEps };

inline constexpr std::uint32_t kMagicSeed = 0x5f3759df;
inline constexpr double kDefaultEpsilon = 1e-4;
inline constexpr int kNewtonSteps = 3;

class SqrtStrategy {
public:
    constexpr SqrtStrategy() = default;
    SqrtStrategy(SqrtKind kind, double epsilon);

    static SqrtStrategy exact() { return {}; }
    static SqrtStrategy newton_magic(double epsilon = kDefaultEpsilon) { return {SqrtKind::NewtonMagic, epsilon}; }
    static SqrtStrategy reciprocal(double epsilon = kDefaultEpsilon) { return {SqrtKind::ReciprocalEps, epsilon}; }
    /// Strategy of the given kind with its default epsilon.
    static SqrtStrategy of(SqrtKind kind);

    SqrtKind kind() const noexcept { return kind_; }
    double epsilon() const noexcept { return epsilon_; }

    friend bool operator==(const SqrtStrategy&, const SqrtStrategy&) = default;

private:
    SqrtKind kind_ = SqrtKind::Exact;
    double epsilon_ = 0.0;
};

/// 0x5f3759df seed followed by kNewtonSteps Newton-Raphson refinements.
/// Each step is evaluated as y * fma(-(x/2 * y), y, 1.5), the contraction a GPU
/// compiler applies to y * (1.5 - x/2 * y * y).
float rsqrt_magic(float x) noexcept;

/// Software reciprocal-sqrt unit: 1/sqrt(x) correctly rounded to float.
float rsqrt_unit(float x) noexcept;

/// Float evaluation of a fast strategy (epsilon included). Exact is evaluated
/// with std::sqrt in float here; maps use the double path for Exact instead.
float sqrt_eval_f32(const SqrtStrategy& s, float x) noexcept;

/// sqrt(x) under strategy s. Throws std::domain_error for negative or NaN x.
double sqrt_eval(const SqrtStrategy& s, double x);

/// Scans omega in [0, omega_max] and returns the first omega whose row from
/// the uncorrected lower-triangular map disagrees with the enumeration order.
std::optional<Index> validate_sqrt_range(const SqrtStrategy& s, Index omega_max);

std::string_view to_string(SqrtKind kind) noexcept;
std::optional<SqrtKind> parse_sqrt_kind(std::string_view name) noexcept;

} // namespace trimap
