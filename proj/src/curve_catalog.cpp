#include "farey/curve_catalog.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "farey/phi_measure.hpp"

namespace farey {

std::int64_t ParamPoly::operator()(std::int64_t n) const { return c[0] + n * (c[1] + n * (c[2] + n * c[3])); }

Rational ParamRatio::operator()(std::int64_t n) const {
    const std::int64_t d = den(n);
    if (d == 0) throw std::domain_error("zero denominator in curve parameter");
    return Rational(num(n), d);
}

const char* to_string(CurveForm f) {
    switch (f) {
        case CurveForm::RationalSqrt: return "rational-sqrt";
        case CurveForm::RationalQuadratic: return "rational-quadratic";
        case CurveForm::ProductForm: return "product-form";
    }
    return "?";
}

namespace {

constexpr std::int64_t kOpen = std::numeric_limits<std::int64_t>::max();

ParamRatio fr(std::int64_t n, std::int64_t d = 1) { return {ParamPoly(n), ParamPoly(d)}; }
ParamPoint pt(ParamRatio x, ParamRatio y) { return {x, y}; }

// Some domains are listed high end first; store them as [min, max].
void set_domain(CurveSpec& s, ParamRatio lo, std::optional<ParamRatio> hi) {
    if (hi && (*hi)(0) < lo(0)) std::swap(lo, *hi);
    s.t_lo = lo;
    s.t_hi = hi;
}

CurveSpec sqrt_row(std::int64_t k, std::int64_t l, ParamPoint from, ParamPoint to, std::int64_t e, std::int64_t a,
                   std::int64_t b, std::int64_t c, std::int64_t p, std::int64_t r, ParamRatio lo,
                   std::optional<ParamRatio> hi) {
    CurveSpec s;
    s.k = k;
    s.l = l;
    s.from = from;
    s.to = to;
    s.form = CurveForm::RationalSqrt;
    s.e = e;
    s.t_power = 1;
    s.factors = {{a, b, c}};
    s.p = p;
    s.r = r;
    set_domain(s, lo, hi);
    return s;
}

// e t^2 / ((t + a)(u t + b))
CurveSpec quad_row(std::int64_t k, std::int64_t l, ParamPoint from, ParamPoint to, std::int64_t e, std::int64_t a,
                   std::int64_t u, std::int64_t b, ParamRatio lo, ParamRatio hi) {
    CurveSpec s;
    s.k = k;
    s.l = l;
    s.from = from;
    s.to = to;
    s.form = CurveForm::RationalQuadratic;
    s.e = e;
    s.t_power = 2;
    s.factors = {{a, 1, 0}, {b, u, 0}};
    set_domain(s, lo, hi);
    return s;
}

std::vector<CurveSpec> concrete_rows() {
    const ParamRatio one = fr(1), zero = fr(0);
    std::vector<CurveSpec> v;
    v.push_back(sqrt_row(1, 2, pt(fr(1, 3), one), pt(zero, one), 2, 0, 0, 1, 1, -4, fr(9, 2), std::nullopt));
    v.push_back(sqrt_row(1, 2, pt(zero, one), pt(fr(1, 5), fr(4, 5)), 16, -12, 3, 5, 1, -8, fr(25, 3), std::nullopt));
    v.push_back(sqrt_row(1, 2, pt(fr(1, 5), fr(4, 5)), pt(fr(1, 3), one), 16, -12, -3, 5, 1, 8, fr(9, 2), fr(25, 3)));

    v.push_back(sqrt_row(1, 3, pt(fr(1, 2), one), pt(fr(1, 3), one), 6, 0, 1, 3, 1, -4, fr(4), fr(9, 2)));
    v.push_back(sqrt_row(1, 3, pt(fr(1, 3), one), pt(fr(1, 5), fr(4, 5)), 12, 0, -1, 3, 1, 8, fr(9, 2), fr(25, 3)));
    v.push_back(sqrt_row(1, 3, pt(fr(1, 5), fr(4, 5)), pt(fr(1, 4), fr(3, 4)), 24, -20, 7, 9, 1, -8, fr(8), fr(25, 3)));
    v.push_back(sqrt_row(1, 3, pt(fr(1, 4), fr(3, 4)), pt(fr(2, 7), fr(5, 7)), 24, -20, 7, -9, 1, -8, fr(8), fr(49, 6)));
    v.push_back(sqrt_row(1, 3, pt(fr(2, 7), fr(5, 7)), pt(fr(1, 2), one), 54, -24, -7, 11, 1, 12, fr(4), fr(49, 6)));

    v.push_back(sqrt_row(1, 4, pt(fr(3, 5), one), pt(fr(1, 2), one), 4, 0, 1, -2, 1, -4, fr(25, 6), fr(4)));
    v.push_back(sqrt_row(1, 4, pt(fr(1, 2), one), pt(fr(2, 7), fr(5, 7)), 12, 0, -1, 2, 1, 12, fr(4), fr(49, 6)));
    v.push_back(sqrt_row(1, 4, pt(fr(2, 7), fr(5, 7)), pt(fr(1, 3), fr(2, 3)), 32, -28, 11, -13, 1, -8, fr(49, 6), fr(9)));
    v.push_back(sqrt_row(1, 4, pt(fr(1, 3), fr(2, 3)), pt(fr(3, 5), one), 128, -40, -13, 19, 1, 16, fr(25, 6), fr(9)));

    v.push_back(quad_row(2, 1, pt(one, one), pt(fr(1, 3), fr(2, 3)), 4, 2, 1, -2, fr(2), fr(6)));
    v.push_back(sqrt_row(2, 1, pt(fr(1, 3), fr(2, 3)), pt(fr(2, 5), fr(3, 5)), 9, -12, 4, -5, 1, -6, fr(6), fr(25, 4)));
    v.push_back(sqrt_row(2, 1, pt(fr(2, 5), fr(3, 5)), pt(one, one), 9, -12, -4, 5, 1, 6, fr(2), fr(25, 4)));

    v.push_back(quad_row(2, 2, pt(one, fr(4, 5)), pt(one, one), -8, 2, 1, -6, fr(2), fr(10, 3)));
    v.push_back(sqrt_row(2, 2, pt(one, one), pt(fr(2, 5), fr(3, 5)), 6, 0, -1, 2, 1, 6, fr(2), fr(25, 4)));
    v.push_back(sqrt_row(2, 2, pt(fr(2, 5), fr(3, 5)), pt(fr(1, 2), fr(1, 2)), 18, -30, 13, -14, 1, -6, fr(25, 4), fr(8)));
    v.push_back(sqrt_row(2, 2, pt(fr(1, 2), fr(1, 2)), pt(one, fr(4, 5)), 50, -30, -11, 14, 1, 10, fr(10, 3), fr(8)));

    v.push_back(quad_row(2, 3, pt(one, fr(5, 7)), pt(one, fr(4, 5)), -12, 2, 1, -10, fr(10, 3), fr(14, 3)));
    v.push_back(sqrt_row(2, 3, pt(one, fr(4, 5)), pt(fr(1, 2), fr(1, 2)), 30, 0, -4, 6, 1, 10, fr(10, 3), fr(8)));
    v.push_back(sqrt_row(2, 3, pt(fr(1, 2), fr(1, 2)), pt(fr(4, 5), fr(3, 5)), 27, 24, -2, 7, 1, -6, fr(8), fr(25, 4)));
    v.push_back(sqrt_row(2, 3, pt(fr(4, 5), fr(3, 5)), pt(one, fr(5, 7)), 147, -56, -22, 27, 1, 14, fr(14, 3), fr(25, 4)));

    v.push_back(quad_row(2, 4, pt(one, fr(2, 3)), pt(one, fr(5, 7)), -16, 2, 1, -14, fr(14, 3), fr(6)));
    v.push_back(sqrt_row(2, 4, pt(one, fr(5, 7)), pt(fr(4, 5), fr(3, 5)), 28, 0, -3, 4, 1, 14, fr(14, 3), fr(25, 4)));
    v.push_back(sqrt_row(2, 4, pt(fr(4, 5), fr(3, 5)), pt(one, fr(2, 3)), 36, 30, -1, 8, 1, -6, fr(6), fr(25, 4)));

    v.push_back(quad_row(3, 1, pt(one, fr(3, 5)), pt(one, fr(2, 3)), -9, 3, 1, -6, fr(3), fr(15, 4)));
    v.push_back(quad_row(3, 1, pt(one, fr(2, 3)), pt(fr(1, 2), fr(1, 2)), 9, 3, 2, -3, fr(3), fr(6)));
    v.push_back(sqrt_row(3, 1, pt(fr(1, 2), fr(1, 2)), pt(fr(4, 7), fr(3, 7)), 32, -72, 31, -11, 9, -48, fr(6), fr(147, 20)));
    v.push_back(sqrt_row(3, 1, pt(fr(4, 7), fr(3, 7)), pt(one, fr(3, 5)), 50, -60, -23, 9, 9, 60, fr(15, 4), fr(147, 20)));

    v.push_back(quad_row(3, 2, pt(one, fr(1, 2)), pt(one, fr(3, 5)), -18, 3, 1, -15, fr(15, 4), fr(6)));
    v.push_back(sqrt_row(3, 2, pt(one, fr(3, 5)), pt(fr(4, 7), fr(3, 7)), 10, 0, -2, 1, 9, 60, fr(15, 4), fr(147, 20)));
    v.push_back(sqrt_row(3, 2, pt(fr(4, 7), fr(3, 7)), pt(fr(3, 5), fr(2, 5)), 64, -168, 79, -27, 9, -48, fr(147, 20), fr(25, 3)));
    v.push_back(sqrt_row(3, 2, pt(fr(3, 5), fr(2, 5)), pt(one, fr(1, 2)), 64, 72, -11, 7, 9, -48, fr(6), fr(25, 3)));

    v.push_back(quad_row(4, 1, pt(one, fr(3, 7)), pt(one, fr(1, 2)), -16, 4, 1, -12, fr(4), fr(28, 5)));
    v.push_back(quad_row(4, 1, pt(one, fr(1, 2)), pt(fr(3, 5), fr(2, 5)), 16, 4, 3, -4, fr(4), fr(20, 3)));
    v.push_back(sqrt_row(4, 1, pt(fr(3, 5), fr(2, 5)), pt(fr(2, 3), fr(1, 3)), 25, -80, 37, -38, 1, -5, fr(20, 3), fr(9)));
    v.push_back(sqrt_row(4, 1, pt(fr(2, 3), fr(1, 3)), pt(one, fr(3, 7)), 49, -56, -23, 26, 1, 7, fr(28, 5), fr(9)));

    v.push_back(quad_row(4, 2, pt(one, fr(2, 5)), pt(one, fr(3, 7)), -32, 4, 1, -28, fr(28, 5), fr(20, 3)));
    v.push_back(sqrt_row(4, 2, pt(one, fr(3, 7)), pt(fr(2, 3), fr(1, 3)), 14, 0, -3, 4, 1, 7, fr(28, 5), fr(9)));
    v.push_back(sqrt_row(4, 2, pt(fr(2, 3), fr(1, 3)), pt(one, fr(2, 5)), 50, 60, -9, 16, 1, -5, fr(20, 3), fr(9)));
    return v;
}

// Polynomials in the family parameter n.
const ParamPoly n1{0, 1};

ParamPoly lin(std::int64_t c0, std::int64_t c1) { return {c0, c1}; }

std::vector<CurveSpec> one_l_rows() {
    std::vector<CurveSpec> v;
    auto make = [](int edge, ParamPoint from, ParamPoint to) {
        CurveSpec s;
        s.family = Family::OneL;
        s.k = 1;
        s.param_min = 5;
        s.param_max = kOpen;
        s.edge_index = edge;
        s.from = from;
        s.to = to;
        s.p = 1;
        return s;
    };
    const ParamRatio one{ParamPoly(1), ParamPoly(1)};
    // ((n-1)/(n+1), 1) -> ((n-2)/n, 1)
    CurveSpec a = make(0, {{lin(-1, 1), lin(1, 1)}, one}, {{lin(-2, 1), n1}, one});
    a.e = lin(0, 2);
    a.factors = {{0, lin(-2, 1), lin(0, -1)}};
    a.r = -4;
    a.t_lo = {{0, 0, 1}, lin(-4, 2)};
    a.t_hi = ParamRatio{{1, 2, 1}, lin(-2, 2)};
    v.push_back(a);

    // ((n-2)/n, 1) -> ((n-3)/(n+1), (n-1)/(n+1))
    CurveSpec b = make(1, {{lin(-2, 1), n1}, one}, {{lin(-3, 1), lin(1, 1)}, {lin(-1, 1), lin(1, 1)}});
    b.e = {0, -2, 2};
    b.factors = {{0, lin(2, -1), n1}};
    b.r = lin(-4, 4);
    b.t_lo = {{0, 0, 1}, lin(-4, 2)};
    b.t_hi = ParamRatio{{1, 2, 1}, lin(-6, 2)};
    v.push_back(b);

    // ((n-3)/(n+1), (n-1)/(n+1)) -> ((n-2)/(n+2), n/(n+2)); the root changes
    // sign between n = 6 and n = 7, and so does the order of the endpoints.
    const ParamPoint c_from{{lin(-3, 1), lin(1, 1)}, {lin(-1, 1), lin(1, 1)}};
    const ParamPoint c_to{{lin(-2, 1), lin(2, 1)}, {n1, lin(2, 1)}};
    const ParamRatio c_first{{1, 2, 1}, lin(-6, 2)};   // (n+1)^2 / (2(n-3))
    const ParamRatio c_second{{4, 4, 1}, lin(-4, 2)};  // (n+2)^2 / (2(n-2))
    CurveSpec c_small = make(2, c_from, c_to);
    c_small.param_max = 6;
    c_small.e = lin(0, 8);
    c_small.factors = {{lin(4, 4), lin(-5, 1), lin(3, 1)}};
    c_small.r = -8;
    c_small.t_lo = c_second;
    c_small.t_hi = c_first;
    v.push_back(c_small);
    CurveSpec c_large = c_small;
    c_large.param_min = 7;
    c_large.param_max = kOpen;
    c_large.factors = {{lin(4, 4), lin(-5, 1), lin(-3, -1)}};
    c_large.t_lo = c_first;
    c_large.t_hi = c_second;
    v.push_back(c_large);

    // ((n-2)/(n+2), n/(n+2)) -> ((n-1)/(n+1), 1)
    CurveSpec d = make(3, c_to, {{lin(-1, 1), lin(1, 1)}, one});
    d.form = CurveForm::ProductForm;
    d.t_power = 2;
    d.e = {0, 0, 0, 4};
    d.factors = {{0, lin(1, -2), 1}, {0, lin(-1, 1), lin(-1, -1)}};
    d.r = lin(0, 4);
    d.t_lo = {{1, 2, 1}, lin(-2, 2)};
    d.t_hi = ParamRatio{{4, 4, 1}, lin(-4, 2)};
    v.push_back(d);
    return v;
}

std::vector<CurveSpec> k_one_rows() {
    std::vector<CurveSpec> v;
    auto make = [](int edge, ParamPoint from, ParamPoint to) {
        CurveSpec s;
        s.family = Family::KOne;
        s.l = 1;
        s.param_min = 5;
        s.param_max = kOpen;
        s.edge_index = edge;
        s.from = from;
        s.to = to;
        return s;
    };
    const ParamRatio one{ParamPoly(1), ParamPoly(1)};
    const ParamRatio first_lo{n1, ParamPoly(1)};               // n
    const ParamRatio first_hi{{0, 1, 1}, lin(-1, 1)};          // n(n+1)/(n-1)
    const ParamRatio second_hi{{4, 4, 1}, n1};                 // (n+2)^2/n
    const ParamPoint p_low{one, {ParamPoly(2), lin(1, 1)}};    // (1, 2/(n+1))
    const ParamPoint p_high{one, {ParamPoly(2), n1}};          // (1, 2/n)
    const ParamPoint p_left{{lin(-1, 1), lin(1, 1)}, {ParamPoly(2), lin(1, 1)}};
    const ParamPoint p_mid{{n1, lin(2, 1)}, {ParamPoly(2), lin(2, 1)}};

    // -n^2 t^2 / ((t - n^2 + n)(t + n))
    CurveSpec a = make(0, p_low, p_high);
    a.form = CurveForm::RationalQuadratic;
    a.t_power = 2;
    a.e = {0, 0, -1};
    a.factors = {{{0, 1, -1}, 1, 0}, {n1, 1, 0}};
    a.t_lo = first_lo;
    a.t_hi = first_hi;
    v.push_back(a);

    // n^2 t^2 / ((t + n)((n-1) t - n))
    CurveSpec b = make(1, p_high, p_left);
    b.form = CurveForm::RationalQuadratic;
    b.t_power = 2;
    b.e = {0, 0, 1};
    b.factors = {{n1, 1, 0}, {lin(0, -1), lin(-1, 1), 0}};
    b.t_lo = first_lo;
    b.t_hi = first_hi;
    v.push_back(b);

    CurveSpec c = make(2, p_left, p_mid);
    c.form = CurveForm::ProductForm;
    c.t_power = 2;
    c.e = {4, 8, 4};
    c.factors = {{0, lin(2, 1), -1}, {0, {-2, 0, 1}, lin(0, -1)}};
    c.p = {0, 0, 1};
    c.r = {0, -4, -4};
    c.t_lo = first_hi;
    c.t_hi = second_hi;
    v.push_back(c);

    CurveSpec d = make(3, p_mid, p_low);
    d.form = CurveForm::ProductForm;
    d.t_power = 2;
    d.e = {2, 4, 2};
    d.factors = {{0, 1, -1}, {0, lin(-2, -1), 1}};
    d.p = {0, 0, 1};
    d.r = {0, -4, -4};
    d.t_lo = first_hi;
    d.t_hi = second_hi;
    v.push_back(d);
    return v;
}

std::vector<CurveSpec> build_catalog() {
    auto rows = concrete_rows();
    std::map<std::pair<std::int64_t, std::int64_t>, int> position;
    for (auto& r : rows) r.edge_index = position[{r.k, r.l}]++;
    for (auto& r : one_l_rows()) rows.push_back(std::move(r));
    for (auto& r : k_one_rows()) rows.push_back(std::move(r));
    return rows;
}

ParamPoly fixed(const ParamPoly& p, std::int64_t n) { return ParamPoly(p(n)); }
ParamRatio fixed(const ParamRatio& r, std::int64_t n) {
    const Rational v = r(n);
    return {ParamPoly(static_cast<std::int64_t>(numerator(v))), ParamPoly(static_cast<std::int64_t>(denominator(v)))};
}
ParamPoint fixed(const ParamPoint& p, std::int64_t n) { return {fixed(p.x, n), fixed(p.y, n)}; }

}  // namespace

CurveSpec CurveSpec::instantiate(std::int64_t param) const {
    if (concrete()) return *this;
    if (!accepts(param)) throw std::invalid_argument("family parameter outside the row's range");
    CurveSpec s = *this;
    s.family = Family::None;
    if (family == Family::OneL) s.l = param;
    else s.k = param;
    s.param_min = s.param_max = 0;
    s.from = fixed(from, param);
    s.to = fixed(to, param);
    s.e = fixed(e, param);
    for (auto& f : s.factors) f = {fixed(f.a, param), fixed(f.b, param), fixed(f.c, param)};
    s.p = fixed(p, param);
    s.r = fixed(r, param);
    s.t_lo = fixed(t_lo, param);
    if (t_hi) s.t_hi = fixed(*t_hi, param);
    return s;
}

int CurveSpec::branch() const {
    if (factors.empty()) return 0;
    const std::int64_t c = concrete() ? factors.front().c(0) : factors.front().c(param_min);
    return (c > 0) - (c < 0);
}

std::pair<double, double> CurveSpec::t_domain() const {
    if (!concrete()) throw std::invalid_argument("family row must be instantiated first");
    return {to_double(t_lo(0)), t_hi ? to_double((*t_hi)(0)) : kInf};
}

std::string CurveSpec::cell_label() const {
    switch (family) {
        case Family::OneL:
            return param_max == kOpen ? "(1,l>=" + std::to_string(param_min) + ")"
                                      : "(1,l=" + std::to_string(param_min) + ".." + std::to_string(param_max) + ")";
        case Family::KOne: return "(k>=" + std::to_string(param_min) + ",1)";
        case Family::None: break;
    }
    return "(" + std::to_string(k) + "," + std::to_string(l) + ")";
}

const std::vector<CurveSpec>& curve_catalog() {
    static const std::vector<CurveSpec> catalog = build_catalog();
    return catalog;
}

std::vector<CurveSpec> rows_for_cell(std::int64_t k, std::int64_t l) {
    std::vector<CurveSpec> out;
    for (const auto& row : curve_catalog()) {
        if (row.concrete()) {
            if (row.k == k && row.l == l) out.push_back(row);
        } else if (row.family == Family::OneL && k == 1 && row.accepts(l)) {
            out.push_back(row.instantiate(l));
        } else if (row.family == Family::KOne && l == 1 && row.accepts(k)) {
            out.push_back(row.instantiate(k));
        }
    }
    return out;
}

std::array<double, 2> curve_eval(const CurveSpec& spec, double t) {
    if (!spec.concrete()) throw std::invalid_argument("family row must be instantiated first");
    const auto [lo, hi] = spec.t_domain();
    constexpr double kSlack = 1e-12;
    if (!(t >= lo * (1 - kSlack) && t <= hi * (1 + kSlack))) throw std::domain_error("t outside the curve's domain");

    const double p = static_cast<double>(spec.p(0));
    const double r = static_cast<double>(spec.r(0));
    double radicand = p * t * t + r * t;
    double s = 0;
    bool uses_root = false;
    for (const auto& f : spec.factors) uses_root = uses_root || f.c(0) != 0;
    if (uses_root) {
        if (radicand < 0) {
            if (radicand < -kSlack * (std::abs(p * t * t) + std::abs(r * t)))
                throw std::domain_error("negative radicand");
            radicand = 0;
        }
        s = std::sqrt(radicand);
    }
    double denom = 1;
    for (const auto& f : spec.factors)
        denom *= static_cast<double>(f.a(0)) + static_cast<double>(f.b(0)) * t + static_cast<double>(f.c(0)) * s;
    const double g = static_cast<double>(spec.e(0)) * std::pow(t, spec.t_power) / denom;
    return {kThreeOverPiSquared * t, kThreeOverPiSquared * g};
}

double curve_deviation(const CurveSpec& spec, int n) {
    if (!spec.concrete()) throw std::invalid_argument("family row must be instantiated first");
    double worst = 0;
    for (const auto& img : segment_image_sample(spec.k, spec.l, spec.from(0), spec.to(0), n)) {
        const double t = img[0] / kThreeOverPiSquared;
        const double y = curve_eval(spec, t)[1];
        const double dev = std::abs(y - img[1]) / std::abs(img[1]);
        if (std::isnan(dev)) return dev;
        worst = std::max(worst, dev);
    }
    return worst;
}

}  // namespace farey
