#pragma once

// Finite-Q empirical third-gap measures, 2-d histograms and convergence to
// the limit mu_{2,h}.

#include <array>
#include <cstdint>
#include <utility>
#include <cmath>
#include <unordered_map>
#include <vector>

#include "farey/farey_core.hpp"
#include "farey/phi_measure.hpp"

namespace farey {

struct EmpiricalResult {
    std::int64_t q_order = 0;
    Interval interval;
    int h = 1;
    BoxSpec box;
    std::int64_t hits = 0;
    std::int64_t windows = 0;  // N_I(Q) - h - 1
    double value = 0.0;        // hits / windows
};

/// Fraction of gap tuples strictly inside the box.
EmpiricalResult empirical_measure(const SequenceParams& params, int h, const BoxSpec& box);

/// Consecutive third-gap pairs (the h = 2 tuples) in window order.
std::vector<std::array<double, 2>> gap_pairs(const SequenceParams& params);

struct HistogramGrid {
    AxisInterval x_range;
    AxisInterval y_range;
    std::int64_t x_bins = 0;
    std::int64_t y_bins = 0;
    std::vector<std::int64_t> counts;  // counts[ix * y_bins + iy]
    std::int64_t total = 0;            // all pairs, binned or dropped
    std::int64_t dropped = 0;          // pairs outside the range

    std::int64_t at(std::int64_t ix, std::int64_t iy) const { return counts[static_cast<std::size_t>(ix * y_bins + iy)]; }
    std::int64_t binned() const { return total - dropped; }
};

/// Bins [lo + i w, lo + (i + 1) w) per axis over the finite 2-d range.
/// Requires N_I(Q) >= 4, positive bin counts and a finite range.
HistogramGrid histogram2d(const SequenceParams& params, std::pair<std::int64_t, std::int64_t> bins,
                          const BoxSpec& range);

struct ConvergenceRow {
    std::int64_t q_order = 0;
    double empirical = 0.0;
    double limit = 0.0;
    double abs_diff = 0.0;
    double scaled = 0.0;  // abs_diff * Q / log Q
};

/// One row per Q against a precomputed limit. q_list must be increasing
/// and every Q >= 2; the box must be finite.
std::vector<ConvergenceRow> convergence_series(const std::vector<std::int64_t>& q_list, const BoxSpec& box, int h,
                                               const Interval& interval, double limit);

/// Same with the limit from measure_box at the given tolerance.
std::vector<ConvergenceRow> convergence_series(const std::vector<std::int64_t>& q_list, const BoxSpec& box, int h,
                                               const Interval& interval, const QuadratureOptions& opts = {1e-6, 24});

/// Uniform-grid lookup for "is there a cloud point within radius".
class ProximityIndex {
public:
    ProximityIndex(const PointCloud& cloud, double radius);

    bool near(double x, double y) const;
    /// Share of the points within radius of the cloud; 1 for an empty list.
    double fraction_near(const std::vector<std::array<double, 2>>& points) const;

private:
    static std::uint64_t key(std::int64_t ix, std::int64_t iy);
    std::int64_t cell_index(double v) const { return static_cast<std::int64_t>(std::floor(v / radius_)); }

    double radius_;
    std::unordered_map<std::uint64_t, std::pair<std::uint32_t, std::uint32_t>> cells_;  // grid cell -> point range
    std::vector<std::array<double, 2>> points_;
};

}  // namespace farey
