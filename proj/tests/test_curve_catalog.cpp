#include <cmath>
#include <map>

#include "doctest.h"
#include "farey/curve_catalog.hpp"
#include "farey/phi_measure.hpp"

using farey::CurveSpec;
using farey::ExactPoint;
using farey::Family;
using farey::Rational;
using farey::kSixOverPiSquared;
using farey::kThreeOverPiSquared;

namespace {

const CurveSpec& find_row(std::int64_t k, std::int64_t l, int edge) {
    for (const auto& r : farey::curve_catalog())
        if (r.concrete() && r.k == k && r.l == l && r.edge_index == edge) return r;
    throw std::runtime_error("row not found");
}

std::vector<CurveSpec> regression_rows() {
    std::vector<CurveSpec> rows;
    for (const auto& r : farey::curve_catalog()) {
        if (r.concrete()) {
            rows.push_back(r);
            continue;
        }
        for (std::int64_t n = 5; n <= 12; ++n)
            if (r.accepts(n)) rows.push_back(r.instantiate(n));
    }
    return rows;
}

bool on_boundary(const farey::CellPolygon& poly, const ExactPoint& p) {
    bool touches = false;
    for (const auto& hp : poly.constraints) {
        const Rational v = hp.evaluate(p);
        if (v < 0) return false;
        touches = touches || v == 0;
    }
    return touches;
}

}  // namespace

TEST_CASE("catalog size") {
    int concrete = 0, one_l = 0, k_one = 0;
    for (const auto& r : farey::curve_catalog()) {
        if (r.family == Family::None) ++concrete;
        if (r.family == Family::OneL) ++one_l;
        if (r.family == Family::KOne) ++k_one;
    }
    CHECK(concrete == 41);
    CHECK(one_l == 5);
    CHECK(k_one == 4);
}

TEST_CASE("catalog examples") {
    const auto& first = find_row(1, 2, 0);
    CHECK(first.from(0) == ExactPoint{Rational(1, 3), Rational(1)});
    CHECK(first.to(0) == ExactPoint{Rational(0), Rational(1)});
    CHECK(first.form == farey::CurveForm::RationalSqrt);
    CHECK(first.e(0) == 2);
    CHECK(first.factors[0].a(0) == 0);
    CHECK(first.factors[0].b(0) == 0);
    CHECK(first.factors[0].c(0) == 1);
    CHECK(first.r(0) == -4);
    CHECK(first.t_domain().first == 4.5);
    CHECK(std::isinf(first.t_domain().second));
    CHECK(first.branch() == 1);

    const auto& beak_row = find_row(2, 2, 0);
    CHECK(beak_row.form == farey::CurveForm::RationalQuadratic);
    CHECK(beak_row.e(0) == -8);
    CHECK(beak_row.factors[0].a(0) == 2);
    CHECK(beak_row.factors[1].a(0) == -6);
    CHECK(beak_row.t_lo(0) == 2);
    CHECK((*beak_row.t_hi)(0) == Rational(10, 3));
    CHECK(beak_row.branch() == 0);

    const auto fam = farey::rows_for_cell(1, 5).front();
    CHECK(fam.concrete());
    CHECK(fam.e(0) == 10);
    CHECK(fam.factors[0].b(0) == 3);
    CHECK(fam.factors[0].c(0) == -5);
    CHECK(fam.r(0) == -4);
    CHECK(fam.t_lo(0) == Rational(25, 6));
    CHECK((*fam.t_hi)(0) == Rational(9, 2));
}

TEST_CASE("family branch split") {
    const auto five = farey::rows_for_cell(1, 5);
    const auto seven = farey::rows_for_cell(1, 7);
    REQUIRE(five.size() == 4);
    REQUIRE(seven.size() == 4);
    CHECK(five[2].branch() == 1);
    CHECK(seven[2].branch() == -1);
    CHECK(farey::rows_for_cell(1, 6)[2].branch() == 1);
    CHECK(farey::rows_for_cell(6, 1).size() == 4);
    CHECK(farey::rows_for_cell(2, 2).size() == 4);
    CHECK(farey::rows_for_cell(1, 3).size() == 5);
    CHECK(farey::rows_for_cell(9, 9).empty());
    CHECK(farey::rows_for_cell(1, 1).empty());
    for (const auto& r : farey::curve_catalog())
        if (!r.concrete()) CHECK_THROWS_AS(r.instantiate(4), std::invalid_argument);
}

TEST_CASE("curve_eval examples") {
    const auto& first = find_row(1, 2, 0);
    const auto a = farey::curve_eval(first, 4.5);
    CHECK(a[0] == doctest::Approx(kThreeOverPiSquared * 4.5).epsilon(1e-15));
    CHECK(a[1] == doctest::Approx(kThreeOverPiSquared * 6).epsilon(1e-14));
    const auto corner = farey::phi22_closed_form(farey::to_approx(ExactPoint{Rational(1, 3), Rational(1)}), 1, 2);
    CHECK(a[1] == doctest::Approx(corner[1]).epsilon(1e-14));

    const auto beak = farey::curve_eval(find_row(2, 2, 0), 2);
    CHECK(beak[0] == doctest::Approx(kSixOverPiSquared).epsilon(1e-15));
    CHECK(beak[1] == doctest::Approx(kSixOverPiSquared).epsilon(1e-15));

    const auto far = farey::curve_eval(first, 1e8);
    CHECK(std::abs(far[1] - kSixOverPiSquared) < 1e-3);

    CHECK_THROWS_AS(farey::curve_eval(first, 4), std::domain_error);
    CHECK_THROWS_AS(farey::curve_eval(find_row(2, 2, 0), 4), std::domain_error);
    CHECK_THROWS_AS(farey::curve_eval(farey::curve_catalog().back(), 10), std::invalid_argument);
}

TEST_CASE("catalog regression against the Phi-image") {
    const auto rows = regression_rows();
    CHECK(rows.size() == 41 + 4 * 8 + 4 * 8);
    for (const auto& r : rows) {
        INFO(r.cell_label(), " edge ", r.edge_index);
        CHECK(farey::curve_deviation(r, 200) <= 1e-9);
    }
}

TEST_CASE("domains match the images of the segment endpoints") {
    for (const auto& r : regression_rows()) {
        INFO(r.cell_label(), " edge ", r.edge_index);
        auto t_of = [&](const ExactPoint& p) {
            const Rational z = Rational(r.k) * p.y - p.x;
            return p.x * z == 0 ? farey::kInf : farey::to_double(Rational(r.k) / (p.x * z));
        };
        const double a = t_of(r.from(0)), b = t_of(r.to(0));
        const auto [lo, hi] = r.t_domain();
        CHECK(std::min(a, b) == doctest::Approx(lo).epsilon(1e-14));
        if (std::isinf(hi)) {
            CHECK(std::isinf(std::max(a, b)));
        } else {
            CHECK(std::max(a, b) == doctest::Approx(hi).epsilon(1e-14));
        }
    }
}

TEST_CASE("rows of a cell trace its boundary as a closed loop") {
    std::map<std::pair<std::int64_t, std::int64_t>, std::vector<CurveSpec>> cells;
    for (const auto& r : regression_rows()) cells[{r.k, r.l}].push_back(r);
    CHECK(cells.size() == 11 + 8 + 8);
    for (const auto& [kl, rows] : cells) {
        INFO("cell ", kl.first, ",", kl.second);
        const auto poly = farey::cell_polygon(kl.first, kl.second);
        REQUIRE_FALSE(poly.empty());
        Rational perimeter_area = 0;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto from = rows[i].from(0);
            const auto to = rows[i].to(0);
            CHECK(on_boundary(poly, from));
            CHECK(on_boundary(poly, to));
            CHECK(to == rows[(i + 1) % rows.size()].from(0));
            perimeter_area += from.x * to.y - to.x * from.y;
        }
        // The pieces cover the whole boundary: their loop encloses the cell.
        CHECK(perimeter_area / 2 == farey::cell_area(poly));
    }
}
