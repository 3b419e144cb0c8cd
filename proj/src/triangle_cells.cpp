#include "farey/triangle_cells.hpp"

#include <algorithm>
#include <limits>

namespace farey {

std::int64_t floor_int(const Rational& r) {
    const BigInt num = boost::multiprecision::numerator(r);
    const BigInt den = boost::multiprecision::denominator(r);  // > 0
    BigInt q = num / den;
    if (num % den != 0 && num < 0) --q;
    return q.convert_to<std::int64_t>();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

ApproxPoint to_approx(const ExactPoint& p) { return {to_double(p.x), to_double(p.y)}; }

namespace {

std::vector<HalfPlane> triangle_constraints() {
    return {
        {1, 0, 0, true},     // x > 0
        {-1, 0, 1, false},   // x <= 1
        {0, -1, 1, false},   // y <= 1
        {1, 1, -1, true},    // x + y > 1
    };
}

// k = floor((1 + x) / y)  <=>  k y <= 1 + x < (k + 1) y
void add_strip_constraints(std::vector<HalfPlane>& out, std::int64_t k) {
    out.push_back({1, -k, 1, false});
    out.push_back({-1, k + 1, -1, true});
}

// l = floor((1 + y) / (k y - x))  <=>  (kl - 1) y <= 1 + l x,  (k(l + 1) - 1) y > 1 + (l + 1) x
void add_second_constraints(std::vector<HalfPlane>& out, std::int64_t k, std::int64_t l) {
    out.push_back({l, -(k * l - 1), 1, false});
    out.push_back({-(l + 1), k * (l + 1) - 1, -1, true});
}

Rational cross(const ExactPoint& o, const ExactPoint& a, const ExactPoint& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Sutherland-Hodgman against the closure {a x + b y + c >= 0}.
std::vector<ExactPoint> clip(const std::vector<ExactPoint>& poly, const HalfPlane& hp) {
    std::vector<ExactPoint> out;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const ExactPoint& p = poly[i];
        const ExactPoint& q = poly[(i + 1) % n];
        const Rational sp = hp.evaluate(p);
        const Rational sq = hp.evaluate(q);
        if (sp >= 0) out.push_back(p);
        if ((sp > 0 && sq < 0) || (sp < 0 && sq > 0)) {
            const Rational s = sp / (sp - sq);
            out.push_back(ExactPoint{p.x + s * (q.x - p.x), p.y + s * (q.y - p.y)});
        }
    }
    return out;
}

std::vector<ExactPoint> simplify(std::vector<ExactPoint> poly) {
    bool changed = true;
    while (changed && poly.size() >= 2) {
        changed = false;
        const std::size_t n = poly.size();
        for (std::size_t i = 0; i < n; ++i) {
            const ExactPoint& prev = poly[(i + n - 1) % n];
            const ExactPoint& next = poly[(i + 1) % n];
            if (poly[i] == next || (n >= 3 && cross(prev, poly[i], next) == 0)) {
                poly.erase(poly.begin() + static_cast<std::ptrdiff_t>(i));
                changed = true;
                break;
            }
        }
    }
    return poly;
}

Rational shoelace(const std::vector<ExactPoint>& v) {
    Rational twice = 0;
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        const ExactPoint& p = v[i];
        const ExactPoint& q = v[(i + 1) % n];
        twice += p.x * q.y - q.x * p.y;
    }
    return twice / 2;
}

std::vector<ExactPoint> closure_of(const std::vector<HalfPlane>& constraints) {
    std::vector<ExactPoint> poly{{1, 0}, {1, 1}, {0, 1}};
    for (const auto& hp : constraints) {
        poly = clip(poly, hp);
        if (poly.empty()) break;
    }
    return simplify(std::move(poly));
}

CellPolygon build(CellIndex index, std::vector<HalfPlane> constraints) {
    CellPolygon cell;
    cell.index = std::move(index);
    cell.constraints = std::move(constraints);
    auto verts = closure_of(cell.constraints);
    if (verts.size() < 3 || shoelace(verts) <= 0) return cell;

    auto start = std::min_element(verts.begin(), verts.end(), [](const ExactPoint& a, const ExactPoint& b) {
        if (a.x != b.x) return a.x > b.x;
        return a.y < b.y;
    });
    std::rotate(verts.begin(), start, verts.end());
    cell.vertices = std::move(verts);

    const std::size_t n = cell.vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        CellEdge edge{cell.vertices[i], cell.vertices[(i + 1) % n], {}, true};
        bool found = false;
        for (const auto& hp : cell.constraints) {
            if (hp.evaluate(edge.from) == 0 && hp.evaluate(edge.to) == 0) {
                if (!found) edge.line = hp;
                found = true;
                edge.owned = edge.owned && !hp.strict;
            }
        }
        if (!found) throw std::logic_error("cell edge does not lie on a constraint line");
        cell.edges.push_back(edge);
    }
    return cell;
}

}  // namespace

bool CellPolygon::contains_interior(const ApproxPoint& p) const {
    if (empty()) return false;
    for (const auto& hp : constraints)
        if (!(hp.evaluate(p) > 0)) return false;
    return true;
}

std::vector<ApproxPoint> CellPolygon::approx_vertices() const {
    std::vector<ApproxPoint> out;
    out.reserve(vertices.size());
    for (const auto& v : vertices) out.push_back(to_approx(v));
    return out;
}

CellPolygon cell_polygon(std::int64_t k, std::int64_t l) {
    if (k < 1 || l < 1) throw std::invalid_argument("cell indices must be >= 1");
    auto constraints = triangle_constraints();
    add_strip_constraints(constraints, k);
    add_second_constraints(constraints, k, l);
    return build(CellIndex{{k, l}}, std::move(constraints));
}

CellPolygon strip_polygon(std::int64_t k) {
    if (k < 1) throw std::invalid_argument("strip index must be >= 1");
    auto constraints = triangle_constraints();
    add_strip_constraints(constraints, k);
    return build(CellIndex{{k}}, std::move(constraints));
}

Rational cell_area(const CellPolygon& poly) {
    if (poly.empty()) return Rational(0);
    return shoelace(poly.vertices);
}

bool is_empty(std::int64_t k, std::int64_t l) {
    if (k < 1 || l < 1) throw std::invalid_argument("cell indices must be >= 1");
    auto constraints = triangle_constraints();
    add_strip_constraints(constraints, k);
    add_second_constraints(constraints, k, l);
    const auto closure = closure_of(constraints);
    if (closure.size() >= 3 && shoelace(closure) > 0) return false;
    // Degenerate closure (point or segment): feasible iff one of its points
    // satisfies the strict system. Vertices and the midpoint cover both cases.
    std::vector<ExactPoint> candidates = closure;
    if (closure.size() == 2)
        candidates.push_back({(closure[0].x + closure[1].x) / 2, (closure[0].y + closure[1].y) / 2});
    for (const auto& p : candidates) {
        bool ok = true;
        for (const auto& hp : constraints) ok = ok && hp.satisfied(p);
        if (ok) return false;
    }
    return true;
}

std::pair<std::int64_t, std::int64_t> second_index_range(std::int64_t k) {
    const auto strip = strip_polygon(k);
    if (strip.empty()) throw std::logic_error("empty strip");
    std::int64_t lo = std::numeric_limits<std::int64_t>::max();
    std::int64_t hi = 0;
    for (const auto& v : strip.vertices) {
        const Rational z = Rational(k) * v.y - v.x;
        if (z <= 0) {
            hi = std::numeric_limits<std::int64_t>::max();
            continue;
        }
        const std::int64_t f = floor_int(Rational(1 + v.y) / z);
        lo = std::min(lo, f);
        hi = std::max(hi, f);
    }
    return {std::max<std::int64_t>(lo, 1), hi};
}

std::vector<std::pair<std::int64_t, std::int64_t>> nonempty_cells(std::int64_t bound) {
    return nonempty_cells(bound, bound);
}

std::vector<std::pair<std::int64_t, std::int64_t>> nonempty_cells(std::int64_t kbound, std::int64_t lbound) {
    std::vector<std::pair<std::int64_t, std::int64_t>> out;
    for (std::int64_t k = 1; k <= kbound; ++k) {
        const auto [lmin, lmax] = second_index_range(k);
        for (std::int64_t l = lmin; l <= std::min(lbound, lmax); ++l) {
            if (!is_empty(k, l)) out.emplace_back(k, l);
        }
    }
    return out;
}

namespace detail {

namespace {
double floor_margin(double v) {
    const double frac = v - std::floor(v);
    return std::min(frac, 1.0 - frac) / std::max(1.0, std::abs(v));
}
}  // namespace

void check_off_boundary(const ApproxPoint& p, const std::vector<double>& chain) {
    constexpr double kMargin = 1e-9;
    const double args[] = {
        (1 + p.x) / p.y,                // k_1 at p
        (1 + p.y) / chain[2],           // k_2 at p
        (1 + chain[3]) / chain[2],      // k_1 at sigma(p)
        (1 + chain[2]) / p.y,           // k_2 at sigma(p)
    };
    for (double a : args)
        if (floor_margin(a) < kMargin) throw std::domain_error("point lies on a cell boundary");
}

}  // namespace detail

}  // namespace farey
