#include "farey/empirics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "farey/parallel.hpp"

namespace farey {

EmpiricalResult empirical_measure(const SequenceParams& params, int h, const BoxSpec& box) {
    params.validate();
    box.validate();
    if (box.dim() != h) throw std::invalid_argument("box dimension must equal h");
    EmpiricalResult r;
    r.q_order = params.order;
    r.interval = params.interval;
    r.h = h;
    r.box = box;
    for_each_gap_tuple(params, h, [&](std::int64_t, std::span<const double> g) {
        ++r.windows;
        if (box.contains(g)) ++r.hits;
    });
    r.value = static_cast<double>(r.hits) / static_cast<double>(r.windows);
    return r;
}

std::vector<std::array<double, 2>> gap_pairs(const SequenceParams& params) {
    params.validate();
    std::vector<std::array<double, 2>> out;
    for_each_gap_tuple(params, 2, [&](std::int64_t, std::span<const double> g) { out.push_back({g[0], g[1]}); });
    return out;
}

HistogramGrid histogram2d(const SequenceParams& params, std::pair<std::int64_t, std::int64_t> bins,
                          const BoxSpec& range) {
    params.validate();
    range.validate();
    if (range.dim() != 2 || !range.finite()) throw std::invalid_argument("histogram range must be a finite 2-d box");
    if (bins.first < 1 || bins.second < 1) throw std::invalid_argument("bin counts must be positive");
    if (count(params) < 4) throw std::invalid_argument("histogram needs N_I(Q) >= 4");

    HistogramGrid g;
    g.x_range = range.axes[0];
    g.y_range = range.axes[1];
    g.x_bins = bins.first;
    g.y_bins = bins.second;
    g.counts.assign(static_cast<std::size_t>(g.x_bins * g.y_bins), 0);
    const double wx = (g.x_range.hi - g.x_range.lo) / static_cast<double>(g.x_bins);
    const double wy = (g.y_range.hi - g.y_range.lo) / static_cast<double>(g.y_bins);
    for_each_gap_tuple(params, 2, [&](std::int64_t, std::span<const double> p) {
        ++g.total;
        if (!(p[0] >= g.x_range.lo && p[0] < g.x_range.hi && p[1] >= g.y_range.lo && p[1] < g.y_range.hi)) {
            ++g.dropped;
            return;
        }
        const auto ix = std::min(g.x_bins - 1, static_cast<std::int64_t>((p[0] - g.x_range.lo) / wx));
        const auto iy = std::min(g.y_bins - 1, static_cast<std::int64_t>((p[1] - g.y_range.lo) / wy));
        ++g.counts[static_cast<std::size_t>(ix * g.y_bins + iy)];
    });
    return g;
}

std::vector<ConvergenceRow> convergence_series(const std::vector<std::int64_t>& q_list, const BoxSpec& box, int h,
                                               const Interval& interval, double limit) {
    box.validate();
    if (!box.finite()) throw std::invalid_argument("convergence series needs a finite box");
    if (!std::is_sorted(q_list.begin(), q_list.end()) ||
        std::adjacent_find(q_list.begin(), q_list.end()) != q_list.end())
        throw std::invalid_argument("q_list must be increasing");
    if (!q_list.empty() && q_list.front() < 2) throw std::invalid_argument("every Q must be >= 2");

    std::vector<ConvergenceRow> rows(q_list.size());
    parallel_for(q_list.size(), [&](std::size_t i) {
        const std::int64_t q = q_list[i];
        const auto e = empirical_measure(SequenceParams{q, interval}, h, box);
        auto& row = rows[i];
        row.q_order = q;
        row.empirical = e.value;
        row.limit = limit;
        row.abs_diff = std::abs(e.value - limit);
        row.scaled = row.abs_diff * static_cast<double>(q) / std::log(static_cast<double>(q));
    });
    return rows;
}

std::vector<ConvergenceRow> convergence_series(const std::vector<std::int64_t>& q_list, const BoxSpec& box, int h,
                                               const Interval& interval, const QuadratureOptions& opts) {
    const auto limit = measure_box(box, h, opts);
    return convergence_series(q_list, box, h, interval, limit.value);
}

std::uint64_t ProximityIndex::key(std::int64_t ix, std::int64_t iy) {
    return (static_cast<std::uint64_t>(ix) << 32) ^ (static_cast<std::uint64_t>(iy) & 0xffffffffu);
}

ProximityIndex::ProximityIndex(const PointCloud& cloud, double radius) : radius_(radius) {
    if (cloud.dim != 2) throw std::invalid_argument("proximity index needs a 2-d cloud");
    if (!(radius > 0)) throw std::invalid_argument("radius must be > 0");
    // Sparse grid of side radius: clouds reach far out along the wings.
    std::vector<std::pair<std::uint64_t, std::array<double, 2>>> keyed;
    keyed.reserve(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const auto p = cloud.point(i);
        // Cell indices are packed into 32 bits each.
        if (!(std::abs(p[0]) < 1e8 && std::abs(p[1]) < 1e8)) continue;
        keyed.push_back({key(cell_index(p[0]), cell_index(p[1])), {p[0], p[1]}});
    }
    std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    points_.reserve(keyed.size());
    for (std::size_t i = 0; i < keyed.size(); ++i) {
        if (i == 0 || keyed[i].first != keyed[i - 1].first)
            cells_[keyed[i].first] = {static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i)};
        ++cells_[keyed[i].first].second;
        points_.push_back(keyed[i].second);
    }
}

bool ProximityIndex::near(double x, double y) const {
    if (!(std::abs(x) < 1e8 && std::abs(y) < 1e8)) return false;
    const double r2 = radius_ * radius_;
    const std::int64_t cx = cell_index(x), cy = cell_index(y);
    for (std::int64_t ix = cx - 1; ix <= cx + 1; ++ix)
        for (std::int64_t iy = cy - 1; iy <= cy + 1; ++iy) {
            const auto it = cells_.find(key(ix, iy));
            if (it == cells_.end()) continue;
            for (auto k = it->second.first; k < it->second.second; ++k) {
                const double ex = points_[k][0] - x, ey = points_[k][1] - y;
                if (ex * ex + ey * ey <= r2) return true;
            }
        }
    return false;
}

double ProximityIndex::fraction_near(const std::vector<std::array<double, 2>>& points) const {
    if (points.empty()) return 1.0;
    std::int64_t hits = 0;
    for (const auto& p : points) hits += near(p[0], p[1]) ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(points.size());
}

}  // namespace farey
