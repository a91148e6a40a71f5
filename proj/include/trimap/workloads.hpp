#pragma once

#include "trimap/domain.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace trimap {

enum class Workload { Dummy, Edm, Collision1D, Collision3D };

std::string_view to_string(Workload w) noexcept;
std::optional<Workload> parse_workload(std::string_view name) noexcept;

constexpr bool is_collision(Workload w) noexcept { return w == Workload::Collision1D || w == Workload::Collision3D; }

struct Point4 {
    float x = 0, y = 0, z = 0, w = 0;
};

/// Sphere (3-D) or interval (1-D, only c[0] used) with radius r.
struct Sphere {
    std::array<float, 3> c{};
    float r = 0;
};

using Pair = std::pair<std::uint32_t, std::uint32_t>; ///< (i, j), i > j

/// Largest radius drawn for the collision workloads.
inline constexpr float kMaxRadius3D = 0.05F;
inline constexpr float kMaxRadius1D = 0.005F;

/// splitmix64 finaliser; derives independent stream seeds from one user seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// n points uniform in [0,1)^4.
std::vector<Point4> make_points(Index n, std::uint64_t seed);

/// n spheres with centres uniform in [0,1)^dim and radii uniform in [0, max_radius).
/// The first dim centre coordinates are drawn from one stream and radii from
/// another, so 1-D and 3-D sets from the same seed share their x and r.
std::vector<Sphere> make_spheres(Index n, unsigned dim, std::uint64_t seed);

/// Euclidean distance of two 4-feature records, in float.
float edm_distance(const Point4& a, const Point4& b) noexcept;

/// |c_a - c_b| < r_a + r_b, compared squared, in float.
bool spheres_collide(const Sphere& a, const Sphere& b, unsigned dim) noexcept;

/// Block-local staging buffer: the records of the rows and columns a block
/// touches, loaded once per block. Holds at most rho^2 records per side.
class Tile {
public:
    explicit Tile(Index rho);

    /// Loads the records for the given (i, j) footprint. Rows and columns are
    /// deduplicated; throws std::length_error past capacity.
    void stage(std::span<const Coord2> footprint, std::span<const Sphere> global);

    const Sphere& row(Index i) const;
    const Sphere& col(Index j) const;

    std::size_t capacity() const noexcept { return capacity_; }
    std::size_t staged() const noexcept { return row_ids_.size() + col_ids_.size(); }

private:
    std::size_t capacity_;
    std::vector<Index> row_ids_, col_ids_;
    std::vector<Sphere> rows_, cols_;
};

/// 64-bit FNV-1a.
class Digest {
public:
    void add(const void* data, std::size_t bytes) noexcept;
    template <class T>
    void add(const T& v) noexcept
    {
        add(&v, sizeof(T));
    }
    std::uint64_t value() const noexcept { return h_; }

private:
    std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

std::uint64_t digest_distances(std::span<const float> d) noexcept;
/// Pairs must be sorted.
std::uint64_t digest_pairs(std::span<const Pair> pairs) noexcept;

} // namespace trimap
