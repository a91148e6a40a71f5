#include "trimap/workloads.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>

namespace trimap {

namespace {

// [0, 1) with 24 random bits, identical on every standard library.
float unit_float(std::mt19937_64& rng) { return static_cast<float>(rng() >> 40U) * 0x1.0p-24F; }

enum Stream : std::uint64_t { kPoints = 1, kCentres = 2, kRadii = 3 };

} // namespace

std::string_view to_string(Workload w) noexcept
{
    switch (w) {
    case Workload::Dummy: return "dummy";
    case Workload::Edm: return "edm";
    case Workload::Collision1D: return "collision1d";
    case Workload::Collision3D: return "collision3d";
    }
    return "?";
}

std::optional<Workload> parse_workload(std::string_view name) noexcept
{
    for (auto w : {Workload::Dummy, Workload::Edm, Workload::Collision1D, Workload::Collision3D}) {
        if (to_string(w) == name) {
            return w;
        }
    }
    return std::nullopt;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept
{
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30U)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27U)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31U);
}

std::vector<Point4> make_points(Index n, std::uint64_t seed)
{
    std::mt19937_64 rng(mix_seed(seed, kPoints));
    std::vector<Point4> pts(n);
    for (auto& p : pts) {
        p.x = unit_float(rng);
        p.y = unit_float(rng);
        p.z = unit_float(rng);
        p.w = unit_float(rng);
    }
    return pts;
}

std::vector<Sphere> make_spheres(Index n, unsigned dim, std::uint64_t seed)
{
    if (dim != 1 && dim != 3) {
        throw std::invalid_argument("make_spheres: dim must be 1 or 3");
    }
    std::mt19937_64 centres(mix_seed(seed, kCentres));
    std::mt19937_64 radii(mix_seed(seed, kRadii));
    const float max_r = dim == 3 ? kMaxRadius3D : kMaxRadius1D;
    std::vector<Sphere> out(n);
    for (auto& s : out) {
        for (auto& c : s.c) {
            c = unit_float(centres);
        }
        for (unsigned d = dim; d < 3; ++d) {
            s.c[d] = 0.0F;
        }
        s.r = unit_float(radii) * max_r;
    }
    return out;
}

float edm_distance(const Point4& a, const Point4& b) noexcept
{
    const float dx = a.x - b.x;
    const float dy = a.y - b.y;
    const float dz = a.z - b.z;
    const float dw = a.w - b.w;
    return std::sqrt(dx * dx + dy * dy + dz * dz + dw * dw);
}

bool spheres_collide(const Sphere& a, const Sphere& b, unsigned dim) noexcept
{
    float d2 = 0.0F;
    for (unsigned d = 0; d < dim; ++d) {
        const float delta = a.c[d] - b.c[d];
        d2 += delta * delta;
    }
    const float reach = a.r + b.r;
    return d2 < reach * reach;
}

Tile::Tile(Index rho) : capacity_(static_cast<std::size_t>(rho * rho))
{
    row_ids_.reserve(capacity_);
    col_ids_.reserve(capacity_);
    rows_.reserve(capacity_);
    cols_.reserve(capacity_);
}

void Tile::stage(std::span<const Coord2> footprint, std::span<const Sphere> global)
{
    row_ids_.clear();
    col_ids_.clear();
    for (const auto& c : footprint) {
        row_ids_.push_back(c.i);
        col_ids_.push_back(c.j);
    }
    for (auto* ids : {&row_ids_, &col_ids_}) {
        std::sort(ids->begin(), ids->end());
        ids->erase(std::unique(ids->begin(), ids->end()), ids->end());
        if (ids->size() > capacity_) {
            throw std::length_error("Tile: footprint exceeds rho^2 records");
        }
    }
    rows_.clear();
    cols_.clear();
    for (Index i : row_ids_) {
        rows_.push_back(global[i]);
    }
    for (Index j : col_ids_) {
        cols_.push_back(global[j]);
    }
}

namespace {
std::size_t slot(const std::vector<Index>& ids, Index id)
{
    const auto it = std::lower_bound(ids.begin(), ids.end(), id);
    if (it == ids.end() || *it != id) {
        throw std::out_of_range("Tile: record not staged");
    }
    return static_cast<std::size_t>(it - ids.begin());
}
} // namespace

const Sphere& Tile::row(Index i) const { return rows_[slot(row_ids_, i)]; }
const Sphere& Tile::col(Index j) const { return cols_[slot(col_ids_, j)]; }

void Digest::add(const void* data, std::size_t bytes) noexcept
{
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t k = 0; k < bytes; ++k) {
        h_ ^= p[k];
        h_ *= 0x100000001b3ULL;
    }
}

std::uint64_t digest_distances(std::span<const float> d) noexcept
{
    Digest h;
    for (float v : d) {
        h.add(std::bit_cast<std::uint32_t>(v));
    }
    return h.value();
}

std::uint64_t digest_pairs(std::span<const Pair> pairs) noexcept
{
    Digest h;
    for (const auto& [i, j] : pairs) {
        h.add(i);
        h.add(j);
    }
    return h.value();
}

} // namespace trimap
