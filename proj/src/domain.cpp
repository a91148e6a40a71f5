#include "trimap/domain.hpp"

#include <string>

namespace trimap {

namespace detail {
void throw_capacity(const char* what, Index r)
{
    throw CapacityError(std::string(what) + "(" + std::to_string(r) + ") exceeds 64-bit capacity");
}
} // namespace detail

TriDomain::TriDomain(Index n, bool include_diagonal) : n_(n), diag_(include_diagonal)
{
    if (n == 0) {
        throw std::invalid_argument("TriDomain: n must be positive");
    }
    tri_number(n);
}

TetDomain::TetDomain(Index n) : n_(n)
{
    if (n == 0) {
        throw std::invalid_argument("TetDomain: n must be positive");
    }
    tet_number(n);
}

std::vector<Coord2> enumerate_tri(const TriDomain& d)
{
    std::vector<Coord2> out;
    out.reserve(d.size());
    for (Index i = 0; i < d.n(); ++i) {
        const Index row_end = d.include_diagonal() ? i + 1 : i;
        for (Index j = 0; j < row_end; ++j) {
            out.push_back({i, j});
        }
    }
    return out;
}

std::vector<Coord3> enumerate_tet(const TetDomain& d)
{
    std::vector<Coord3> out;
    out.reserve(d.size());
    for (Index k = 0; k < d.n(); ++k) {
        for (Index i = 0; i <= k; ++i) {
            for (Index j = 0; j <= i; ++j) {
                out.push_back({i, j, k});
            }
        }
    }
    return out;
}

} // namespace trimap
