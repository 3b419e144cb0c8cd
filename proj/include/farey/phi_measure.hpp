#pragma once

// The limiting map Phi_{2,h}(x, y) = (3/pi^2) (k_i / (L_{i-1} L_{i+1}))_{i=1..h}
// and the measure mu_{2,h}(C) = 2 Area(Phi^{-1}(C)) over open boxes C.

#include <array>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "farey/triangle_cells.hpp"

namespace farey {

inline constexpr double kThreeOverPiSquared = 3.0 / (std::numbers::pi * std::numbers::pi);
inline constexpr double kSixOverPiSquared = 2.0 * kThreeOverPiSquared;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Phi_{2,h}(p) without allocation; out.size() == h.
void phi_into(const ApproxPoint& p, std::span<double> out);

std::vector<double> phi(const ApproxPoint& p, int h);
/// Exact L-chain, components rounded once at the end.
std::vector<double> phi(const ExactPoint& p, int h);

/// (3/pi^2) (k / (x z), l / (y w)) with z = k y - x and w = l z - y, for the
/// cell (k, l) that contains p.
std::array<double, 2> phi22_closed_form(const ApproxPoint& p);
std::array<double, 2> phi22_closed_form(const ExactPoint& p);

/// Same formula with the cell indices given, i.e. the smooth extension of
/// Phi from the interior of T_{k,l} to its closure.
std::array<double, 2> phi22_closed_form(const ApproxPoint& p, std::int64_t k, std::int64_t l);

struct AxisInterval {
    double lo = 0.0;
    double hi = kInf;
};

/// Product of open intervals (lo_i, hi_i) in normalized-gap units.
struct BoxSpec {
    std::vector<AxisInterval> axes;

    int dim() const { return static_cast<int>(axes.size()); }
    bool finite() const;
    /// Throws std::invalid_argument unless dim >= 1, 0 <= lo < hi for every axis.
    void validate() const;
    bool contains(std::span<const double> point) const;

    static BoxSpec cube(int dim, double lo, double hi);
};

/// Flat "lo1,hi1[,lo2,hi2,...]"; "inf" is accepted for an upper bound.
BoxSpec parse_box(std::string_view text);

enum class MeasureMethod { AdaptiveSubdivision, MonteCarlo };
std::string_view to_string(MeasureMethod m);

struct MeasureResult {
    double value = 0.0;
    double error_bound = 0.0;
    MeasureMethod method = MeasureMethod::AdaptiveSubdivision;
    std::int64_t cells_visited = 0;

    double lower() const;  // max(0, value - error_bound)
    double upper() const;  // min(1, value + error_bound)
};

class NonConvergence : public std::runtime_error {
public:
    NonConvergence(const std::string& what, MeasureResult partial)
        : std::runtime_error(what), partial_(partial) {}
    const MeasureResult& partial() const { return partial_; }

private:
    MeasureResult partial_;
};

/// Per-axis index bounds: Phi^{-1}(box) misses every cell with k_i > bound_i,
/// since k_i < (pi^2 / 3) beta_i L_{i-1} L_{i+1} <= (pi^2 / 3) beta_i.
/// Throws std::invalid_argument for an unbounded axis.
std::vector<std::int64_t> cell_bound_for_box(const BoxSpec& box);

struct QuadratureOptions {
    double tol = 1e-4;
    int max_depth = 24;
};

/// mu_{2,h}(box) by quadtree subdivision of each cell. h must equal
/// box.dim() and be 1 or 2. Unbounded axes are handled by complementation.
/// error_bound is a rigorous bound on |value - mu| up to rounding.
/// Throws NonConvergence (carrying the partial result) past max_depth.
MeasureResult measure_box(const BoxSpec& box, int h = 2, const QuadratureOptions& opts = {});

/// Uniform rejection sampling on T. error_bound is three standard errors.
/// Deterministic for a fixed seed, independent of the thread count.
MeasureResult measure_box_mc(const BoxSpec& box, int h, std::int64_t samples, std::uint64_t seed = 1);

/// Flattened list of h-dimensional points.
struct PointCloud {
    int dim = 2;
    std::vector<double> coords;

    std::size_t size() const { return dim > 0 ? coords.size() / static_cast<std::size_t>(dim) : 0; }
    std::span<const double> point(std::size_t i) const {
        return std::span<const double>(coords).subspan(i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim));
    }
    void append(std::span<const double> p) { coords.insert(coords.end(), p.begin(), p.end()); }
};

/// Quasi-uniform (Halton) interior points of T_{k,l}.
std::vector<ApproxPoint> cell_sample(std::int64_t k, std::int64_t l, int n);

/// Phi-images of n interior points of every nonempty cell with indices <= kmax.
/// h = 1 samples the strips T_k, h >= 2 the cells T_{k,l}.
PointCloud support_points(int h, std::int64_t kmax, int n_per_cell);

/// Images under phi22_closed_form(., k, l) of n points strictly inside the
/// segment from -> to (which should lie on the boundary of T_{k,l}).
std::vector<std::array<double, 2>> segment_image_sample(std::int64_t k, std::int64_t l, const ExactPoint& from,
                                                        const ExactPoint& to, int n);

/// segment_image_sample over edge edge_index of cell_polygon(k, l).
/// Throws std::invalid_argument for an empty cell or a bad edge index.
std::vector<std::array<double, 2>> edge_image_sample(std::int64_t k, std::int64_t l, int edge_index, int n);

}  // namespace farey
