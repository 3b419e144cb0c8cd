#pragma once

// The Farey triangle T = {0 < x <= 1, y <= 1, x + y > 1}, the L-chain
// L_0 = x, L_1 = y, L_i = floor((1 + L_{i-2}) / L_{i-1}) L_{i-1} - L_{i-2},
// the quotient vector k_i = floor((1 + L_{i-1}) / L_i) and the cells T_{k,l}
// on which (k_1, k_2) is constant.
//
// Geometry is exact (cpp_rational). l_chain and k_vector also run on doubles
// for sampling.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace farey {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

template <class T>
struct Point {
    T x{};
    T y{};

    friend bool operator==(const Point&, const Point&) = default;
};

using ExactPoint = Point<Rational>;
using ApproxPoint = Point<double>;

std::int64_t floor_int(const Rational& r);
inline std::int64_t floor_int(double v) { return static_cast<std::int64_t>(std::floor(v)); }

double to_double(const Rational& r);
inline double to_double(double v) { return v; }

ApproxPoint to_approx(const ExactPoint& p);

/// Membership in T (strict on x > 0 and on the hypotenuse x + y > 1).
template <class T>
bool in_triangle(const Point<T>& p) {
    return p.x > 0 && p.x <= 1 && p.y <= 1 && p.x + p.y > 1;
}

/// (L_0, ..., L_n). Throws std::domain_error for p outside T.
template <class T>
std::vector<T> l_chain(const Point<T>& p, int n) {
    if (n < 1) throw std::invalid_argument("l_chain needs n >= 1");
    if (!in_triangle(p)) throw std::domain_error("point is not in the Farey triangle");
    std::vector<T> chain;
    chain.reserve(static_cast<std::size_t>(n) + 1);
    chain.push_back(p.x);
    chain.push_back(p.y);
    for (int i = 2; i <= n; ++i) {
        const T& before = chain[i - 2];
        const T& last = chain[i - 1];
        const T k = T(floor_int(T(1 + before) / last));
        T next = k * last - before;
        if (!(next > 0)) throw std::logic_error("L-chain produced a non-positive term");
        chain.push_back(std::move(next));
    }
    return chain;
}

struct CellIndex {
    std::vector<std::int64_t> ks;

    friend bool operator==(const CellIndex&, const CellIndex&) = default;
};

/// (k_1, ..., k_h) with k_i = floor((1 + L_{i-1}) / L_i).
template <class T>
CellIndex k_vector(const Point<T>& p, int h) {
    if (h < 1) throw std::invalid_argument("k_vector needs h >= 1");
    const auto chain = l_chain(p, h);
    CellIndex idx;
    idx.ks.reserve(static_cast<std::size_t>(h));
    for (int i = 1; i <= h; ++i) idx.ks.push_back(floor_int(T(1 + chain[i - 1]) / chain[i]));
    return idx;
}

/// a x + b y + c >= 0, or > 0 when strict.
struct HalfPlane {
    std::int64_t a = 0;
    std::int64_t b = 0;
    std::int64_t c = 0;
    bool strict = false;

    template <class T>
    T evaluate(const Point<T>& p) const {
        return T(a) * p.x + T(b) * p.y + T(c);
    }
    template <class T>
    bool satisfied(const Point<T>& p) const {
        const T v = evaluate(p);
        return strict ? v > 0 : v >= 0;
    }
};

struct CellEdge {
    ExactPoint from;
    ExactPoint to;
    HalfPlane line;
    bool owned = false;  // points of the open edge belong to the cell
};

/// Closure of a cell as an exact convex polygon. Membership of individual
/// points is decided by the defining constraints, which follow the floor
/// convention (lower strip bounds open, upper bounds closed).
struct CellPolygon {
    CellIndex index;
    std::vector<ExactPoint> vertices;  // counterclockwise, from the eastmost (then lowest) vertex
    std::vector<CellEdge> edges;       // edges[i] runs vertices[i] -> vertices[i + 1]
    std::vector<HalfPlane> constraints;

    bool empty() const { return vertices.size() < 3; }

    template <class T>
    bool contains(const Point<T>& p) const {
        if (empty()) return false;
        for (const auto& hp : constraints)
            if (!hp.satisfied(p)) return false;
        return true;
    }

    /// Strictly inside every constraint line.
    bool contains_interior(const ApproxPoint& p) const;
    std::vector<ApproxPoint> approx_vertices() const;
};

/// Exact polygon of T_{k,l}; empty (no vertices) when the closure has no interior.
CellPolygon cell_polygon(std::int64_t k, std::int64_t l);

/// Exact polygon of the first-level strip T_k = {k_1 = k}.
CellPolygon strip_polygon(std::int64_t k);

/// Shoelace area; 0 for empty polygons.
Rational cell_area(const CellPolygon& poly);

/// Exact feasibility of the defining inequalities of T_{k,l}.
bool is_empty(std::int64_t k, std::int64_t l);

/// Range [lmin, lmax] of k_2 over the strip T_k, from the vertex values of
/// the linear-fractional (1 + y) / L_2. lmax is INT64_MAX when unbounded.
std::pair<std::int64_t, std::int64_t> second_index_range(std::int64_t k);

/// Nonempty cells with max(k, l) <= bound, lexicographic in (k, l).
std::vector<std::pair<std::int64_t, std::int64_t>> nonempty_cells(std::int64_t bound);

/// Nonempty cells with k <= kbound and l <= lbound, lexicographic.
std::vector<std::pair<std::int64_t, std::int64_t>> nonempty_cells(std::int64_t kbound, std::int64_t lbound);

namespace detail {
void check_off_boundary(const ApproxPoint& p, const std::vector<double>& chain);
}

/// sigma(p) = (L_3(p), L_2(p)), mapping T_{k,l} onto T_{l,k}; sigma o sigma = id.
/// Exact points: defined on all of T. Double points: throws std::domain_error
/// within 1e-9 (relative) of a floor discontinuity.
template <class T>
Point<T> symmetry_involution(const Point<T>& p) {
    auto chain = l_chain(p, 3);
    if constexpr (std::is_floating_point_v<T>) detail::check_off_boundary(p, chain);
    return Point<T>{chain[3], chain[2]};
}

}  // namespace farey
