#include "farey/phi_measure.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <optional>
#include <random>
#include <string>

#include "farey/parallel.hpp"

namespace farey {

void phi_into(const ApproxPoint& p, std::span<double> out) {
    if (out.empty()) throw std::invalid_argument("phi needs h >= 1");
    if (!in_triangle(p)) throw std::domain_error("point is not in the Farey triangle");
    double before = p.x;
    double last = p.y;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double k = std::floor((1 + before) / last);
        const double next = k * last - before;
        if (!(next > 0)) throw std::logic_error("L-chain produced a non-positive term");
        out[i] = kThreeOverPiSquared * k / (before * next);
        before = last;
        last = next;
    }
}

std::vector<double> phi(const ApproxPoint& p, int h) {
    if (h < 1) throw std::invalid_argument("phi needs h >= 1");
    std::vector<double> out(static_cast<std::size_t>(h));
    phi_into(p, out);
    return out;
}

std::vector<double> phi(const ExactPoint& p, int h) {
    if (h < 1) throw std::invalid_argument("phi needs h >= 1");
    const auto chain = l_chain(p, h + 1);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(h));
    for (int i = 1; i <= h; ++i) {
        const Rational k = Rational(floor_int(Rational(1 + chain[i - 1]) / chain[i]));
        out.push_back(kThreeOverPiSquared * to_double(k / (chain[i - 1] * chain[i + 1])));
    }
    return out;
}

std::array<double, 2> phi22_closed_form(const ApproxPoint& p, std::int64_t k, std::int64_t l) {
    const double kd = static_cast<double>(k);
    const double ld = static_cast<double>(l);
    const double z = kd * p.y - p.x;
    const double w = ld * z - p.y;
    return {kThreeOverPiSquared * kd / (p.x * z), kThreeOverPiSquared * ld / (p.y * w)};
}

std::array<double, 2> phi22_closed_form(const ApproxPoint& p) {
    const auto idx = k_vector(p, 2);
    return phi22_closed_form(p, idx.ks[0], idx.ks[1]);
}

std::array<double, 2> phi22_closed_form(const ExactPoint& p) {
    const auto idx = k_vector(p, 2);
    const Rational k(idx.ks[0]);
    const Rational l(idx.ks[1]);
    const Rational z = k * p.y - p.x;
    const Rational w = l * z - p.y;
    return {kThreeOverPiSquared * to_double(k / (p.x * z)), kThreeOverPiSquared * to_double(l / (p.y * w))};
}

// ---------------------------------------------------------------- boxes

bool BoxSpec::finite() const {
    return std::all_of(axes.begin(), axes.end(), [](const AxisInterval& a) { return std::isfinite(a.hi); });
}

void BoxSpec::validate() const {
    if (axes.empty()) throw std::invalid_argument("box needs at least one axis");
    for (const auto& a : axes) {
        if (std::isnan(a.lo) || std::isnan(a.hi)) throw std::invalid_argument("box bound is NaN");
        if (!std::isfinite(a.lo) || a.lo < 0) throw std::invalid_argument("box lower bounds must be finite and >= 0");
        if (!(a.lo < a.hi)) throw std::invalid_argument("box needs lo < hi on every axis");
    }
}

bool BoxSpec::contains(std::span<const double> point) const {
    if (point.size() != axes.size()) throw std::invalid_argument("point dimension does not match box");
    for (std::size_t i = 0; i < axes.size(); ++i)
        if (!(point[i] > axes[i].lo && point[i] < axes[i].hi)) return false;
    return true;
}

BoxSpec BoxSpec::cube(int dim, double lo, double hi) {
    BoxSpec box;
    box.axes.assign(static_cast<std::size_t>(dim), AxisInterval{lo, hi});
    return box;
}

namespace {

double parse_bound(std::string token) {
    token.erase(0, token.find_first_not_of(" \t"));
    token.erase(token.find_last_not_of(" \t") + 1);
    std::string lower = token;
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "inf" || lower == "infinity" || lower == "+inf") return kInf;
    if (token.empty() || lower.find("nan") != std::string::npos || lower.find("inf") != std::string::npos)
        throw std::invalid_argument("bad box bound '" + token + "'");
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end != token.c_str() + token.size()) throw std::invalid_argument("bad box bound '" + token + "'");
    return v;
}

}  // namespace

BoxSpec parse_box(std::string_view text) {
    std::vector<double> values;
    std::size_t start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        values.push_back(parse_bound(std::string(text.substr(start, comma - start))));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    if (values.size() % 2 != 0) throw std::invalid_argument("box needs pairs lo,hi");
    BoxSpec box;
    for (std::size_t i = 0; i < values.size(); i += 2) box.axes.push_back({values[i], values[i + 1]});
    box.validate();
    return box;
}

std::string_view to_string(MeasureMethod m) {
    return m == MeasureMethod::MonteCarlo ? "monte-carlo" : "adaptive-subdivision";
}

double MeasureResult::lower() const { return std::max(0.0, value - error_bound); }
double MeasureResult::upper() const { return std::min(1.0, value + error_bound); }

std::vector<std::int64_t> cell_bound_for_box(const BoxSpec& box) {
    box.validate();
    std::vector<std::int64_t> out;
    for (const auto& a : box.axes) {
        if (!std::isfinite(a.hi)) throw std::invalid_argument("cell bound needs a finite box");
        // Relative slack so that beta = 6/pi^2 in floating point still gives 2.
        out.push_back(static_cast<std::int64_t>(std::floor(a.hi / kThreeOverPiSquared * (1 + 1e-12))));
    }
    return out;
}

// ---------------------------------------------------------------- quadrature

namespace {

struct CellGeom {
    double k = 0;
    double l = 0;  // 0 for strips
    std::vector<ApproxPoint> poly;
};

struct Rect {
    double x0, y0, x1, y1;
};

enum class State : unsigned char { Outside, Inside, Undecided };

struct Node {
    std::uint32_t cell;
    Rect rect;
    double area;
};

struct Classified {
    State state = State::Outside;
    double area = 0;
};

double polygon_area(const std::vector<ApproxPoint>& v) {
    double s = 0;
    for (std::size_t i = 0, n = v.size(); i < n; ++i) {
        const auto& a = v[i];
        const auto& b = v[(i + 1) % n];
        s += a.x * b.y - b.x * a.y;
    }
    return s / 2;
}

// Keeps the part with sign * (coord - c) >= 0.
void clip_axis(std::vector<ApproxPoint>& poly, std::vector<ApproxPoint>& scratch, bool use_x, double c, double sign) {
    scratch.clear();
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = poly[i];
        const auto& b = poly[(i + 1) % n];
        const double da = sign * ((use_x ? a.x : a.y) - c);
        const double db = sign * ((use_x ? b.x : b.y) - c);
        if (da >= 0) scratch.push_back(a);
        if ((da >= 0) != (db >= 0)) {
            const double t = da / (da - db);
            ApproxPoint p{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
            if (use_x) p.x = c; else p.y = c;
            scratch.push_back(p);
        }
    }
    poly.swap(scratch);
}

struct Range {
    double lo, hi;
};

// Bounds of c k / (u v) over the polygon, u and v linear and >= 0 on it.
// u v is log-concave, so its minimum sits at a vertex.
Range component_range(double k, const std::vector<double>& u, const std::vector<double>& v) {
    double pmin = kInf, umax = 0, vmax = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        pmin = std::min(pmin, std::max(0.0, u[i]) * std::max(0.0, v[i]));
        umax = std::max(umax, u[i]);
        vmax = std::max(vmax, v[i]);
    }
    const double c = kThreeOverPiSquared * k;
    return {c / (umax * vmax), pmin > 0 ? c / pmin : kInf};
}

Classified classify(const CellGeom& cell, const Rect& r, const std::vector<AxisInterval>& axes) {
    thread_local std::vector<ApproxPoint> poly, scratch;
    thread_local std::vector<double> u, v;
    poly = cell.poly;
    clip_axis(poly, scratch, true, r.x0, 1);
    if (poly.size() >= 3) clip_axis(poly, scratch, true, r.x1, -1);
    if (poly.size() >= 3) clip_axis(poly, scratch, false, r.y0, 1);
    if (poly.size() >= 3) clip_axis(poly, scratch, false, r.y1, -1);
    Classified out;
    if (poly.size() < 3) return out;
    out.area = polygon_area(poly);
    if (!(out.area > 0)) {
        out.area = 0;
        return out;
    }

    bool inside = true;
    u.resize(poly.size());
    v.resize(poly.size());
    for (std::size_t axis = 0; axis < axes.size(); ++axis) {
        // axis 0: x * z, axis 1: y * w with z = k y - x, w = l z - y
        for (std::size_t i = 0; i < poly.size(); ++i) {
            const double z = cell.k * poly[i].y - poly[i].x;
            if (axis == 0) {
                u[i] = poly[i].x;
                v[i] = z;
            } else {
                u[i] = poly[i].y;
                v[i] = cell.l * z - poly[i].y;
            }
        }
        const Range range = component_range(axis == 0 ? cell.k : cell.l, u, v);
        const auto& a = axes[axis];
        if (range.hi <= a.lo || range.lo >= a.hi) {
            out.state = State::Outside;
            return out;
        }
        if (!(range.lo >= a.lo && range.hi <= a.hi)) inside = false;
    }
    out.state = inside ? State::Inside : State::Undecided;
    return out;
}

std::vector<CellGeom> cells_for(const std::vector<std::int64_t>& bound) {
    std::vector<CellGeom> cells;
    if (bound.size() == 1) {
        for (std::int64_t k = 1; k <= bound[0]; ++k) {
            auto strip = strip_polygon(k);
            if (!strip.empty()) cells.push_back({static_cast<double>(k), 0, strip.approx_vertices()});
        }
    } else {
        for (auto [k, l] : nonempty_cells(bound[0], bound[1]))
            cells.push_back({static_cast<double>(k), static_cast<double>(l), cell_polygon(k, l).approx_vertices()});
    }
    return cells;
}

MeasureResult quadtree_measure(const BoxSpec& box, const QuadratureOptions& opts) {
    const auto cells = cells_for(cell_bound_for_box(box));
    MeasureResult result;
    result.method = MeasureMethod::AdaptiveSubdivision;

    std::vector<Node> frontier;
    double inside_area = 0;
    std::vector<Node> candidates;
    for (std::uint32_t c = 0; c < cells.size(); ++c) {
        Rect r{kInf, kInf, -kInf, -kInf};
        for (const auto& p : cells[c].poly) {
            r.x0 = std::min(r.x0, p.x);
            r.y0 = std::min(r.y0, p.y);
            r.x1 = std::max(r.x1, p.x);
            r.y1 = std::max(r.y1, p.y);
        }
        candidates.push_back({c, r, 0});
    }

    std::vector<Classified> verdicts;
    std::vector<char> touched(cells.size(), 0);
    for (int depth = 0;; ++depth) {
        verdicts.assign(candidates.size(), {});
        parallel_for(candidates.size(), [&](std::size_t i) {
            verdicts[i] = classify(cells[candidates[i].cell], candidates[i].rect, box.axes);
        });
        frontier.clear();
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            const auto& v = verdicts[i];
            if (v.state == State::Outside) continue;
            touched[candidates[i].cell] = 1;
            if (v.state == State::Inside) {
                inside_area += v.area;
            } else {
                frontier.push_back({candidates[i].cell, candidates[i].rect, v.area});
            }
        }
        double undecided = 0;
        for (const auto& n : frontier) undecided += n.area;

        result.value = 2 * inside_area + undecided;
        result.error_bound = undecided;
        result.cells_visited = std::count(touched.begin(), touched.end(), 1);
        if (undecided < opts.tol) break;
        if (depth >= opts.max_depth)
            throw NonConvergence("quadtree did not reach the tolerance within the depth cap", result);

        candidates.clear();
        candidates.reserve(frontier.size() * 4);
        for (const auto& n : frontier) {
            const double xm = 0.5 * (n.rect.x0 + n.rect.x1);
            const double ym = 0.5 * (n.rect.y0 + n.rect.y1);
            candidates.push_back({n.cell, {n.rect.x0, n.rect.y0, xm, ym}, 0});
            candidates.push_back({n.cell, {xm, n.rect.y0, n.rect.x1, ym}, 0});
            candidates.push_back({n.cell, {n.rect.x0, ym, xm, n.rect.y1}, 0});
            candidates.push_back({n.cell, {xm, ym, n.rect.x1, n.rect.y1}, 0});
        }
    }
    result.value = std::clamp(result.value, 0.0, 1.0);
    return result;
}

// Axes set to nullopt are unconstrained, i.e. (0, inf).
using PartialBox = std::vector<std::optional<AxisInterval>>;

MeasureResult measure_partial(const PartialBox& axes, double tol, const QuadratureOptions& opts) {
    for (std::size_t j = 0; j < axes.size(); ++j) {
        if (!axes[j] || std::isfinite(axes[j]->hi)) continue;
        PartialBox dropped = axes;
        dropped[j].reset();
        if (axes[j]->lo <= 0) return measure_partial(dropped, tol, opts);
        PartialBox below = axes;
        below[j] = AxisInterval{0.0, axes[j]->lo};
        const auto whole = measure_partial(dropped, tol / 2, opts);
        const auto part = measure_partial(below, tol / 2, opts);
        MeasureResult r = whole;
        r.value = std::clamp(whole.value - part.value, 0.0, 1.0);
        r.error_bound = whole.error_bound + part.error_bound;
        r.cells_visited = whole.cells_visited + part.cells_visited;
        return r;
    }
    std::vector<AxisInterval> finite;
    for (const auto& a : axes)
        if (a) finite.push_back(*a);
    if (finite.empty()) return MeasureResult{1.0, 0.0, MeasureMethod::AdaptiveSubdivision, 0};
    QuadratureOptions local = opts;
    local.tol = tol;
    // With one axis of h = 2 free, the other component has the law mu_{2,1};
    // for the second component this is the swap symmetry of mu_{2,2}.
    if (finite.size() <= 2) return quadtree_measure(BoxSpec{finite}, local);
    throw std::invalid_argument("measure_box supports h = 1 and h = 2");
}

}  // namespace

MeasureResult measure_box(const BoxSpec& box, int h, const QuadratureOptions& opts) {
    box.validate();
    if (h != 1 && h != 2) throw std::invalid_argument("measure_box supports h = 1 and h = 2");
    if (box.dim() != h) throw std::invalid_argument("box dimension must equal h");
    if (!(opts.tol > 0)) throw std::invalid_argument("tol must be > 0");
    if (opts.max_depth < 0) throw std::invalid_argument("max_depth must be >= 0");
    PartialBox axes(box.axes.begin(), box.axes.end());
    return measure_partial(axes, opts.tol, opts);
}

// ---------------------------------------------------------------- Monte Carlo

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

double unit_open_closed(std::mt19937_64& rng) {
    return static_cast<double>((rng() >> 11) + 1) * 0x1p-53;  // (0, 1]
}

constexpr std::int64_t kBlock = 1 << 16;

}  // namespace

MeasureResult measure_box_mc(const BoxSpec& box, int h, std::int64_t samples, std::uint64_t seed) {
    box.validate();
    if (h < 1) throw std::invalid_argument("h must be >= 1");
    if (box.dim() != h) throw std::invalid_argument("box dimension must equal h");
    if (samples < 1) throw std::invalid_argument("samples must be >= 1");

    const std::int64_t blocks = (samples + kBlock - 1) / kBlock;
    std::vector<std::int64_t> hits(static_cast<std::size_t>(blocks), 0);
    parallel_for(static_cast<std::size_t>(blocks), [&](std::size_t b) {
        std::mt19937_64 rng(splitmix64(seed ^ splitmix64(b)));
        const std::int64_t n = std::min(kBlock, samples - static_cast<std::int64_t>(b) * kBlock);
        std::vector<double> image(static_cast<std::size_t>(h));
        std::int64_t count = 0;
        for (std::int64_t i = 0; i < n;) {
            const ApproxPoint p{unit_open_closed(rng), unit_open_closed(rng)};
            if (!(p.x + p.y > 1)) continue;
            ++i;
            phi_into(p, image);
            if (box.contains(image)) ++count;
        }
        hits[b] = count;
    });
    std::int64_t total = 0;
    for (auto c : hits) total += c;

    const double n = static_cast<double>(samples);
    const double p = static_cast<double>(total) / n;
    // Three standard errors, with the variance floored at 1/n so that p = 0
    // or p = 1 still reports a nonzero envelope.
    const double var = std::max(p * (1 - p), 1 / n);
    return MeasureResult{p, 3 * std::sqrt(var / n), MeasureMethod::MonteCarlo, 0};
}

// ---------------------------------------------------------------- sampling

namespace {

double radical_inverse(std::uint64_t i, std::uint64_t base) {
    double inv = 1.0 / static_cast<double>(base);
    double f = inv;
    double r = 0;
    while (i > 0) {
        r += f * static_cast<double>(i % base);
        i /= base;
        f *= inv;
    }
    return r;
}

// Low-discrepancy points of a convex polygon: a fan triangulation chosen by
// area through a base-5 coordinate, then the folded unit square (bases 2, 3).
std::vector<ApproxPoint> polygon_sample(const CellPolygon& poly, int n) {
    std::vector<ApproxPoint> out;
    if (poly.empty() || n <= 0) return out;
    const auto v = poly.approx_vertices();
    std::vector<double> cumulative;
    double total = 0;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        total += polygon_area({v[0], v[i], v[i + 1]});
        cumulative.push_back(total);
    }
    out.reserve(static_cast<std::size_t>(n));
    for (std::uint64_t idx = 1; out.size() < static_cast<std::size_t>(n) && idx < 64ULL * n + 64; ++idx) {
        double s = radical_inverse(idx, 2);
        double t = radical_inverse(idx, 3);
        const double pick = radical_inverse(idx, 5) * total;
        const auto tri = std::min<std::size_t>(
            static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), pick) - cumulative.begin()),
            cumulative.size() - 1);
        if (s + t > 1) {
            s = 1 - s;
            t = 1 - t;
        }
        const auto& a = v[0];
        const auto& b = v[tri + 1];
        const auto& c = v[tri + 2];
        const ApproxPoint p{a.x + s * (b.x - a.x) + t * (c.x - a.x), a.y + s * (b.y - a.y) + t * (c.y - a.y)};
        if (poly.contains_interior(p)) out.push_back(p);
    }
    return out;
}

}  // namespace

std::vector<ApproxPoint> cell_sample(std::int64_t k, std::int64_t l, int n) {
    return polygon_sample(cell_polygon(k, l), n);
}

PointCloud support_points(int h, std::int64_t kmax, int n_per_cell) {
    if (h < 1) throw std::invalid_argument("h must be >= 1");
    if (kmax < 2) throw std::invalid_argument("kmax must be >= 2");
    if (n_per_cell < 1) throw std::invalid_argument("n_per_cell must be >= 1");

    std::vector<std::pair<std::int64_t, std::int64_t>> cells;
    if (h == 1) {
        for (std::int64_t k = 1; k <= kmax; ++k) cells.emplace_back(k, 0);
    } else {
        cells = nonempty_cells(kmax);
    }
    std::vector<std::vector<double>> parts(cells.size());
    parallel_for(cells.size(), [&](std::size_t c) {
        const auto [k, l] = cells[c];
        const auto pts = polygon_sample(l == 0 ? strip_polygon(k) : cell_polygon(k, l), n_per_cell);
        auto& dst = parts[c];
        dst.reserve(pts.size() * static_cast<std::size_t>(h));
        for (const auto& p : pts) {
            if (h == 1) {
                const double kd = static_cast<double>(k);
                dst.push_back(kThreeOverPiSquared * kd / (p.x * (kd * p.y - p.x)));
            } else if (h == 2) {
                const auto img = phi22_closed_form(p, k, l);
                dst.insert(dst.end(), img.begin(), img.end());
            } else {
                const auto img = phi(p, h);
                dst.insert(dst.end(), img.begin(), img.end());
            }
        }
    });
    PointCloud cloud;
    cloud.dim = h;
    for (const auto& part : parts) cloud.coords.insert(cloud.coords.end(), part.begin(), part.end());
    return cloud;
}

std::vector<std::array<double, 2>> segment_image_sample(std::int64_t k, std::int64_t l, const ExactPoint& from,
                                                        const ExactPoint& to, int n) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    std::vector<std::array<double, 2>> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const Rational s(i + 1, n + 1);
        const ExactPoint p{from.x + s * (to.x - from.x), from.y + s * (to.y - from.y)};
        out.push_back(phi22_closed_form(to_approx(p), k, l));
    }
    return out;
}

std::vector<std::array<double, 2>> edge_image_sample(std::int64_t k, std::int64_t l, int edge_index, int n) {
    const auto poly = cell_polygon(k, l);
    if (poly.empty()) throw std::invalid_argument("cell is empty");
    if (edge_index < 0 || edge_index >= static_cast<int>(poly.edges.size()))
        throw std::invalid_argument("edge index out of range");
    const auto& e = poly.edges[static_cast<std::size_t>(edge_index)];
    return segment_image_sample(k, l, e.from, e.to, n);
}

}  // namespace farey
