#pragma once

// Triangular and tetrahedral problem domains, figurate-number arithmetic and
// the enumeration oracles every mapping strategy is checked against.
//
// Layout of the triangular domain (0-based, row-major, lower triangle):
//
//        j
//      +---------+
//      | 0       |
//     i| 1 2     |   -> omega = i (i + 1) / 2 + j    for j <= i
//      | 3 4 5   |
//      +---------+
//
// Without the diagonal the strict lower triangle is enumerated the same way
// and omega = i (i - 1) / 2 + j for j < i. A tetrahedron of n layers stacks
// triangles of side 1..n; layer k starts at tet_number(k).

#include <compare>
#include <initializer_list>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace trimap {

using Index = std::uint64_t;

/// Raised when a figurate number does not fit in Index.
class CapacityError : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

struct Coord2 {
    Index i = 0;
    Index j = 0;

    friend constexpr auto operator<=>(const Coord2&, const Coord2&) = default;
};

/// (row-in-layer, column-in-layer, layer).
struct Coord3 {
    Index i = 0;
    Index j = 0;
    Index k = 0;

    friend constexpr auto operator<=>(const Coord3&, const Coord3&) = default;
};

namespace detail {
[[noreturn]] void throw_capacity(const char* what, Index r);

constexpr Index checked_mul(Index a, Index b, const char* what, Index r)
{
    if (b != 0 && a > std::numeric_limits<Index>::max() / b) {
        throw_capacity(what, r);
    }
    return a * b;
}
} // namespace detail

/// r (r + 1) / 2, exact.
constexpr Index tri_number(Index r)
{
    if (r == std::numeric_limits<Index>::max()) {
        detail::throw_capacity("tri_number", r);
    }
    return r % 2 == 0 ? detail::checked_mul(r / 2, r + 1, "tri_number", r)
                      : detail::checked_mul(r, (r + 1) / 2, "tri_number", r);
}

/// r (r + 1) (r + 2) / 6, exact.
constexpr Index tet_number(Index r)
{
    if (r > std::numeric_limits<Index>::max() - 2) {
        detail::throw_capacity("tet_number", r);
    }
    // Divide the 2 and the 3 out of the consecutive factors before multiplying.
    Index f[3] = {r, r + 1, r + 2};
    for (Index d : {Index{2}, Index{3}}) {
        for (auto& x : f) {
            if (x % d == 0) {
                x /= d;
                break;
            }
        }
    }
    return detail::checked_mul(detail::checked_mul(f[0], f[1], "tet_number", r), f[2], "tet_number", r);
}

class TriDomain {
public:
    explicit TriDomain(Index n, bool include_diagonal = true);

    Index n() const noexcept { return n_; }
    bool include_diagonal() const noexcept { return diag_; }

    Index size() const noexcept { return diag_ ? tri_number(n_) : tri_number(n_ - 1); }

    bool contains(Coord2 c) const noexcept
    {
        return c.i < n_ && (diag_ ? c.j <= c.i : c.j < c.i);
    }

    /// Position of an in-domain coordinate in enumerate_tri order.
    Index linear_index(Coord2 c) const noexcept
    {
        return (diag_ ? tri_number(c.i) : tri_number(c.i) - c.i) + c.j;
    }

    friend bool operator==(const TriDomain&, const TriDomain&) = default;

private:
    Index n_;
    bool diag_;
};

class TetDomain {
public:
    explicit TetDomain(Index n);

    Index n() const noexcept { return n_; }
    Index size() const noexcept { return tet_number(n_); }

    bool contains(Coord3 c) const noexcept { return c.k < n_ && c.i <= c.k && c.j <= c.i; }

    Index linear_index(Coord3 c) const noexcept { return tet_number(c.k) + tri_number(c.i) + c.j; }

    friend bool operator==(const TetDomain&, const TetDomain&) = default;

private:
    Index n_;
};

std::vector<Coord2> enumerate_tri(const TriDomain& d);
std::vector<Coord3> enumerate_tet(const TetDomain& d);

} // namespace trimap
