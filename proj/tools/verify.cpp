#include "verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <stdexcept>
#include <tuple>

#include "farey/curve_catalog.hpp"
#include "farey/empirics.hpp"
#include "farey/farey_core.hpp"
#include "farey/phi_measure.hpp"
#include "farey/triangle_cells.hpp"
#include "format.hpp"

namespace farey::cli {

namespace {

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

std::vector<Fraction> brute_force(std::int64_t q) {
    std::vector<Fraction> out;
    for (std::int64_t d = 1; d <= q; ++d)
        for (std::int64_t a = 0; a <= d; ++a)
            if (std::gcd(a, d) == 1) out.push_back({a, d});
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<CheckResult> recurrence_suite(std::int64_t max_q) {
    std::vector<CheckResult> out;
    std::int64_t mismatches = 0, delta_bad = 0, k_bad = 0, count_bad = 0, windows = 0;
    for (std::int64_t q = 1; q <= max_q; ++q) {
        const SequenceParams params{q, Interval{}};
        const auto seq = farey_sequence(params);
        if (seq != brute_force(q)) ++mismatches;
        if (count(params) != static_cast<std::int64_t>(seq.size()) || farey_length(q) != count(params)) ++count_bad;
        for (std::size_t j = 0; j + 1 < seq.size(); ++j)
            if (delta(seq[j], seq[j + 1]) != 1) ++delta_bad;
        for (std::size_t j = 0; j + 2 < seq.size(); ++j) {
            ++windows;
            if (delta(seq[j], seq[j + 2]) != (seq[j].q + q) / seq[j + 1].q) ++k_bad;
        }
    }
    const std::string range = "Q <= " + std::to_string(max_q);
    out.push_back({"enumeration equals brute force", mismatches == 0, range + ", " + std::to_string(mismatches) + " mismatches"});
    out.push_back({"Delta of neighbours is 1", delta_bad == 0, std::to_string(delta_bad) + " violations"});
    out.push_back({"Delta(j, j+2) = floor((q_j + Q) / q_{j+1})", k_bad == 0,
                   std::to_string(k_bad) + " violations in " + std::to_string(windows) + " windows"});
    out.push_back({"count equals totient length", count_bad == 0, std::to_string(count_bad) + " mismatches"});
    return out;
}

bool classified_nonempty(std::int64_t k, std::int64_t l) {
    if (k == 1) return l >= 2;
    if (l == 1) return k >= 2;
    static const std::set<std::pair<std::int64_t, std::int64_t>> exceptional{{2, 2}, {2, 3}, {2, 4}, {3, 2}, {4, 2}};
    return exceptional.count({k, l}) > 0;
}

/// Sum over k > bound of the area of the strip k = floor((1 + y) / x) of T,
/// which is the cell (k, 1); the cells (1, l) carry the same tail.
double strip_tail(std::int64_t bound) {
    double sum = 0;
    for (std::int64_t k = 1000000; k > bound; --k) {
        const double kk = static_cast<double>(k);
        const double xs[4] = {2 / (kk + 2), 2 / (kk + 1), 2 / kk, 2 / (kk + 1)};
        const double ys[4] = {kk / (kk + 2), (kk - 1) / (kk + 1), 1, 1};
        double a = 0;
        for (int i = 0; i < 4; ++i) a += xs[i] * ys[(i + 1) % 4] - xs[(i + 1) % 4] * ys[i];
        sum += std::abs(a) / 2;
    }
    return sum;
}

std::vector<CheckResult> cells_suite(std::int64_t bound) {
    std::vector<CheckResult> out;
    std::int64_t wrong = 0;
    for (std::int64_t k = 1; k <= bound; ++k)
        for (std::int64_t l = 1; l <= bound; ++l)
            if (is_empty(k, l) == classified_nonempty(k, l)) ++wrong;
    out.push_back({"nonempty cells match the classification", wrong == 0,
                   "k, l <= " + std::to_string(bound) + ", " + std::to_string(wrong) + " disagreements"});
    out.push_back({"T_{1,1} is empty", is_empty(1, 1), ""});
    const Rational a22 = cell_area(cell_polygon(2, 2));
    out.push_back({"area of T_{2,2} is 1/10", a22 == Rational(1, 10), "area " + a22.str()});
    Rational total = 0;
    for (auto [k, l] : nonempty_cells(bound)) total += cell_area(cell_polygon(k, l));
    const double deficit = 0.5 - to_double(total);
    const double tail = 2 * strip_tail(bound);
    out.push_back({"cell areas sum to 1/2 minus the strip tail", std::abs(deficit - tail) <= 1e-9,
                   "k, l <= " + std::to_string(bound) + ", 1/2 - sum = " + sci(deficit) + ", tail " + sci(tail)});
    return out;
}

std::vector<CurveSpec> regression_rows() {
    std::vector<CurveSpec> rows;
    for (const auto& r : curve_catalog()) {
        if (r.concrete()) {
            rows.push_back(r);
            continue;
        }
        for (std::int64_t n = 5; n <= 12; ++n)
            if (r.accepts(n)) rows.push_back(r.instantiate(n));
    }
    return rows;
}

std::vector<CheckResult> table1_suite(std::int64_t samples) {
    std::vector<CheckResult> out;
    const auto rows = regression_rows();
    double worst = 0;
    std::string worst_row;
    for (const auto& r : rows) {
        double dev;
        try {
            dev = curve_deviation(r, static_cast<int>(samples));
        } catch (const std::exception&) {
            dev = kInf;
        }
        if (!(dev <= worst)) {
            worst = std::isnan(dev) ? kInf : dev;
            worst_row = r.cell_label() + " edge " + std::to_string(r.edge_index);
        }
        if (!(dev <= 1e-9))
            out.push_back({"row " + r.cell_label() + " edge " + std::to_string(r.edge_index), false,
                           "deviation " + sci(dev)});
    }
    out.push_back({"catalog rows match the Phi-image", worst <= 1e-9,
                   std::to_string(rows.size()) + " rows x " + std::to_string(samples) + " samples, max deviation " +
                       sci(worst) + (worst_row.empty() ? "" : " (" + worst_row + ")")});
    return out;
}

std::vector<CheckResult> symmetry_suite(std::int64_t max_q) {
    std::vector<CheckResult> out;
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int checked = 0;
    double worst = 0;
    while (checked < 10000) {
        const ApproxPoint p{1.0 - u(rng), 1.0 - u(rng)};
        if (!in_triangle(p)) continue;
        ApproxPoint s;
        try {
            s = symmetry_involution(p);
        } catch (const std::domain_error&) {
            continue;
        }
        const auto a = phi(p, 2);
        const auto b = phi(s, 2);
        worst = std::max({worst, std::abs(a[0] - b[1]) / a[0], std::abs(a[1] - b[0]) / a[1]});
        ++checked;
    }
    out.push_back({"Phi o sigma = swap o Phi", worst <= 1e-12, "10000 points, max relative deviation " + sci(worst)});

    std::int64_t bad_q = 0;
    for (std::int64_t q = 3; q <= max_q; ++q) {
        using Key = std::tuple<std::int64_t, std::int64_t, std::int64_t, std::int64_t>;
        std::vector<Key> pairs, swapped;
        for_each_window(SequenceParams{q, Interval{}}, 2, [&](std::int64_t, std::span<const Fraction> w) {
            const std::int64_t d1 = delta(w[0], w[2]), m1 = w[0].q * w[2].q;
            const std::int64_t d2 = delta(w[1], w[3]), m2 = w[1].q * w[3].q;
            pairs.emplace_back(d1, m1, d2, m2);
            swapped.emplace_back(d2, m2, d1, m1);
        });
        std::sort(pairs.begin(), pairs.end());
        std::sort(swapped.begin(), swapped.end());
        if (pairs != swapped) ++bad_q;
    }
    out.push_back({"gap pair multiset is swap invariant", bad_q == 0,
                   "Q <= " + std::to_string(max_q) + ", " + std::to_string(bad_q) + " failures"});
    return out;
}

std::vector<CheckResult> convergence_suite(std::int64_t max_q) {
    std::vector<CheckResult> out;
    const BoxSpec box = BoxSpec::cube(2, 0.7, 1.2);
    const auto limit = measure_box(box, 2, {1e-6, 24});
    std::vector<std::int64_t> qs;
    for (std::int64_t q = 100; q <= max_q; q *= 2) qs.push_back(q);
    const auto rows = convergence_series(qs, box, 2, Interval{}, limit.value);

    // Generous fixed constant: observed values are around 1e-2.
    constexpr double kScaledBound = 1.0;
    for (const auto& r : rows)
        out.push_back({"Q=" + std::to_string(r.q_order) + " |diff| Q/log Q", r.scaled <= kScaledBound,
                       "empirical " + fmt_fixed(r.empirical, 8) + ", |diff| " + sci(r.abs_diff) + ", scaled " +
                           fmt_fixed(r.scaled, 5)});
    if (rows.size() >= 3) {
        const auto n = rows.size();
        const bool rising = rows[n - 3].scaled < rows[n - 2].scaled && rows[n - 2].scaled < rows[n - 1].scaled;
        out.push_back({"no increasing trend over the last three rows", !rising, ""});
    }

    const auto e5000 = empirical_measure(SequenceParams{5000, Interval{}}, 2, box);
    const double d5000 = std::abs(e5000.value - limit.value);
    out.push_back({"Q=5000 |empirical - limit| <= 0.01", d5000 <= 0.01,
                   "limit " + fmt_fixed(limit.value, 8) + " +- " + sci(limit.error_bound) + ", |diff| " + sci(d5000)});

    std::vector<double> values{e5000.value};
    for (const char* iv : {"0,1/4", "1/3,2/3"})
        values.push_back(empirical_measure(SequenceParams{5000, parse_interval(iv)}, 2, box).value);
    const double spread = *std::max_element(values.begin(), values.end()) - *std::min_element(values.begin(), values.end());
    out.push_back({"Q=5000 intervals [0,1], [0,1/4], [1/3,2/3] within 0.02", spread <= 0.02, "spread " + sci(spread)});
    return out;
}

}  // namespace

std::vector<std::string> verify_suites() { return {"recurrence", "cells", "table1", "symmetry", "convergence"}; }

std::vector<CheckResult> run_suite(const std::string& suite, std::optional<std::int64_t> limit) {
    if (limit && *limit < 1) throw std::invalid_argument("--max must be positive");
    if (suite == "recurrence") return recurrence_suite(limit.value_or(300));
    if (suite == "cells") return cells_suite(limit.value_or(50));
    if (suite == "table1") return table1_suite(limit.value_or(200));
    if (suite == "symmetry") return symmetry_suite(limit.value_or(300));
    if (suite == "convergence") {
        if (limit && *limit < 400) throw std::invalid_argument("convergence needs --max >= 400");
        return convergence_suite(limit.value_or(3200));
    }
    throw std::invalid_argument("unknown suite '" + suite + "'");
}

void print_checks(std::ostream& out, const std::vector<CheckResult>& checks) {
    std::size_t width = 0;
    for (const auto& c : checks) width = std::max(width, c.name.size());
    for (const auto& c : checks) {
        out << (c.passed ? "PASS  " : "FAIL  ") << c.name;
        if (!c.detail.empty()) out << std::string(width - c.name.size() + 2, ' ') << c.detail;
        out << '\n';
    }
}

}  // namespace farey::cli
