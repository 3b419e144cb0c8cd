#pragma once

// Boundary curves of the support of mu_{2,2}: the images under Phi of the
// boundary pieces of the cells T_{k,l}, in closed form
//   (pi^2 / 3) Y = e t^n / prod_j (a_j + b_j t + c_j S),  S = sqrt(p t^2 + r t),
// with t = (pi^2 / 3) X.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "farey/triangle_cells.hpp"

namespace farey {

/// c0 + c1 n + c2 n^2 + c3 n^3 in the family parameter n.
struct ParamPoly {
    std::array<std::int64_t, 4> c{};

    ParamPoly() = default;
    ParamPoly(std::int64_t c0, std::int64_t c1 = 0, std::int64_t c2 = 0, std::int64_t c3 = 0) : c{c0, c1, c2, c3} {}

    std::int64_t operator()(std::int64_t n) const;
    bool constant() const { return c[1] == 0 && c[2] == 0 && c[3] == 0; }
};

struct ParamRatio {
    ParamPoly num;
    ParamPoly den{1};

    Rational operator()(std::int64_t n) const;
    bool constant() const { return num.constant() && den.constant(); }
};

struct ParamPoint {
    ParamRatio x;
    ParamRatio y;

    ExactPoint operator()(std::int64_t n) const { return {x(n), y(n)}; }
};

enum class CurveForm { RationalSqrt, RationalQuadratic, ProductForm };
const char* to_string(CurveForm f);

/// Which index the family parameter fills.
enum class Family { None, OneL, KOne };

/// a + b t + c S
struct CurveFactor {
    ParamPoly a;
    ParamPoly b;
    ParamPoly c;
};

struct CurveSpec {
    Family family = Family::None;
    std::int64_t k = 0;  // ignored for Family::KOne
    std::int64_t l = 0;  // ignored for Family::OneL
    std::int64_t param_min = 0;
    std::int64_t param_max = 0;  // inclusive; INT64_MAX when open-ended
    int edge_index = 0;          // position among the rows of its cell
    ParamPoint from;
    ParamPoint to;
    CurveForm form = CurveForm::RationalSqrt;
    ParamPoly e;
    int t_power = 1;
    std::vector<CurveFactor> factors;
    ParamPoly p;  // S = sqrt(p t^2 + r t)
    ParamPoly r;
    ParamRatio t_lo;
    std::optional<ParamRatio> t_hi;  // nullopt: unbounded

    bool concrete() const { return family == Family::None; }
    bool accepts(std::int64_t param) const { return param >= param_min && param <= param_max; }

    /// Concrete copy with the family parameter substituted. Throws
    /// std::invalid_argument if the parameter is outside the row's range.
    CurveSpec instantiate(std::int64_t param) const;

    /// Sign of the square-root coefficient (first factor); 0 without a root.
    int branch() const;

    /// Domain as doubles; hi is +inf when unbounded. Concrete rows only.
    std::pair<double, double> t_domain() const;

    /// "(k,l)" or "(1,l>=5)"-style label.
    std::string cell_label() const;
};

/// All catalog rows: the concrete ones first (by cell, in listing order),
/// then the (1, l >= 5) rows and the (k >= 5, 1) rows.
const std::vector<CurveSpec>& curve_catalog();

/// Concrete rows for cell (k, l), family rows instantiated as needed, in
/// listing order. Empty when the catalog has no rows for the cell.
std::vector<CurveSpec> rows_for_cell(std::int64_t k, std::int64_t l);

/// (X, Y) = ((3/pi^2) t, (3/pi^2) g(t)). Throws std::domain_error for t
/// outside the domain or a negative radicand, std::invalid_argument for a
/// family row.
std::array<double, 2> curve_eval(const CurveSpec& spec, double t);

/// Max over n interior samples of the row's segment of the relative
/// deviation |Y - curve_eval(t).Y| / |Y| with t = (pi^2 / 3) X, where (X, Y)
/// is the Phi-image of the sample.
double curve_deviation(const CurveSpec& spec, int n);

}  // namespace farey
