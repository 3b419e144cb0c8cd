#include <algorithm>
#include <cmath>
#include <random>
#include <tuple>

#include "doctest.h"
#include "farey/empirics.hpp"

using farey::BoxSpec;
using farey::Fraction;
using farey::Interval;
using farey::SequenceParams;

namespace {

SequenceParams full(std::int64_t q) { return SequenceParams{q, Interval{}}; }

}  // namespace

TEST_CASE("empirical measure on F_5") {
    const auto a = farey::empirical_measure(full(5), 1, farey::parse_box("1.5,2"));
    CHECK(a.hits == 4);
    CHECK(a.windows == 9);
    CHECK(a.value == doctest::Approx(4.0 / 9));
    CHECK(farey::empirical_measure(full(5), 1, farey::parse_box("0,0.5")).value == 0);
    CHECK(farey::empirical_measure(full(5), 1, farey::parse_box("0,inf")).value == 1);
    // 11/4 is a gap value; open boxes exclude it.
    CHECK(farey::empirical_measure(full(5), 1, farey::parse_box("2.75,3")).hits == 0);
    CHECK_THROWS_AS(farey::empirical_measure(full(3), 5, BoxSpec::cube(5, 0, 1)), std::invalid_argument);
    CHECK_THROWS_AS(farey::empirical_measure(full(5), 2, farey::parse_box("0,1")), std::invalid_argument);
}

TEST_CASE("unbounded box has mass one") {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 60; ++trial) {
        const std::int64_t q = 5 + trial * 7;
        const int h = 1 + trial % 4;
        const std::int64_t lo = static_cast<std::int64_t>(rng() % 50);
        const Interval iv{Fraction::make(lo, 100), Fraction::make(lo + 30 + static_cast<std::int64_t>(rng() % 20), 100)};
        const auto r = farey::empirical_measure(SequenceParams{q, iv}, h, BoxSpec::cube(h, 0, farey::kInf));
        REQUIRE(r.value == 1);
        REQUIRE(r.windows == farey::count(SequenceParams{q, iv}) - h - 1);
    }
}

TEST_CASE("empirical mass is subadditive over a split box") {
    for (std::int64_t q : {50, 200, 701}) {
        const auto whole = farey::empirical_measure(full(q), 2, farey::parse_box("0.7,2,0.7,1.2"));
        const auto left = farey::empirical_measure(full(q), 2, farey::parse_box("0.7,1.1,0.7,1.2"));
        const auto right = farey::empirical_measure(full(q), 2, farey::parse_box("1.1,2,0.7,1.2"));
        CHECK(left.hits + right.hits <= whole.hits);
        CHECK(whole.value <= 1);
    }
}

TEST_CASE("histogram of F_5 pairs") {
    const auto g = farey::histogram2d(full(5), {2, 2}, BoxSpec::cube(2, 1, 3));
    CHECK(g.total == 8);
    CHECK(g.dropped == 0);
    CHECK(g.at(0, 0) == 4);
    CHECK(g.at(1, 0) == 2);
    CHECK(g.at(0, 1) == 2);
    CHECK(g.at(1, 1) == 0);

    const auto narrow = farey::histogram2d(full(5), {3, 1}, farey::parse_box("1.5,2,1.5,2"));
    CHECK(narrow.total == 8);
    std::int64_t sum = 0;
    for (auto c : narrow.counts) sum += c;
    CHECK(sum + narrow.dropped == narrow.total);
    CHECK(sum == 2);  // (1.65, 1.8333) and (1.8333, 1.65)

    CHECK_THROWS_AS(farey::histogram2d(full(2), {2, 2}, BoxSpec::cube(2, 1, 3)), std::invalid_argument);
    CHECK_THROWS_AS(farey::histogram2d(full(5), {0, 2}, BoxSpec::cube(2, 1, 3)), std::invalid_argument);
    CHECK_THROWS_AS(farey::histogram2d(full(5), {2, 2}, farey::parse_box("1,inf,1,3")), std::invalid_argument);
}

TEST_CASE("pair multiset is swap invariant") {
    for (std::int64_t q = 3; q <= 300; ++q) {
        using Key = std::tuple<std::int64_t, std::int64_t, std::int64_t, std::int64_t>;
        std::vector<Key> pairs, swapped;
        farey::for_each_window(full(q), 2, [&](std::int64_t, std::span<const Fraction> w) {
            const Key k{farey::delta(w[0], w[2]), w[0].q * w[2].q, farey::delta(w[1], w[3]), w[1].q * w[3].q};
            pairs.push_back(k);
            swapped.push_back({std::get<2>(k), std::get<3>(k), std::get<0>(k), std::get<1>(k)});
        });
        std::sort(pairs.begin(), pairs.end());
        std::sort(swapped.begin(), swapped.end());
        REQUIRE(pairs == swapped);
    }
}

TEST_CASE("convergence series") {
    const auto box = BoxSpec::cube(2, 0.7, 1.2);
    const auto rows = farey::convergence_series({50, 100, 200}, box, 2, Interval{}, 0.0725195);
    REQUIRE(rows.size() == 3);
    CHECK(rows[1].q_order == 100);
    CHECK(rows[1].empirical == farey::empirical_measure(full(100), 2, box).value);
    CHECK(rows[1].abs_diff == doctest::Approx(std::abs(rows[1].empirical - 0.0725195)));
    CHECK(rows[1].scaled == doctest::Approx(rows[1].abs_diff * 100 / std::log(100.0)));
    CHECK(rows[2].abs_diff < 0.02);

    const auto computed = farey::convergence_series({100}, box, 2, Interval{}, farey::QuadratureOptions{1e-4, 24});
    CHECK(computed[0].limit == doctest::Approx(0.0725195).epsilon(2e-3));

    CHECK_THROWS_AS(farey::convergence_series({200, 100}, box, 2, Interval{}, 0.07), std::invalid_argument);
    CHECK_THROWS_AS(farey::convergence_series({100}, farey::parse_box("0.7,inf,0.7,1.2"), 2, Interval{}, 0.07),
                    std::invalid_argument);
}

TEST_CASE("proximity index matches brute force") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    farey::PointCloud cloud;
    for (int i = 0; i < 2000; ++i) cloud.coords.insert(cloud.coords.end(), {u(rng), u(rng)});
    cloud.coords.insert(cloud.coords.end(), {900.0, 2.0});  // far tail point
    const farey::ProximityIndex idx(cloud, 0.05);
    for (int i = 0; i < 5000; ++i) {
        const double x = u(rng) * 1.2 - 0.3, y = u(rng) * 1.2 - 0.3;
        bool brute = false;
        for (std::size_t k = 0; k < cloud.size(); ++k)
            brute = brute || std::hypot(cloud.point(k)[0] - x, cloud.point(k)[1] - y) <= 0.05;
        REQUIRE(idx.near(x, y) == brute);
    }
    CHECK(idx.near(900.01, 2.0));
    CHECK_FALSE(idx.near(899.0, 2.0));
}

TEST_CASE("finite-Q pairs lie near the support") {
    const auto cloud = farey::support_points(2, 40, 1000);
    const farey::ProximityIndex idx(cloud, 0.05);
    std::vector<std::array<double, 2>> in_range;
    for (const auto& p : farey::gap_pairs(full(600)))
        if (p[0] > 0.5 && p[0] < 5 && p[1] > 0.5 && p[1] < 5) in_range.push_back(p);
    CHECK(idx.fraction_near(in_range) >= 0.99);
}
