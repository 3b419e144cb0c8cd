#include "farey/farey_core.hpp"

#include <charconv>
#include <cstdlib>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace farey {

namespace {

using i128 = __int128;

std::int64_t floor_div(i128 num, i128 den) {
    // den > 0
    i128 q = num / den;
    if ((num % den != 0) && (num < 0)) --q;
    return static_cast<std::int64_t>(q);
}

std::int64_t parse_int(std::string_view text) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
    return v;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

}  // namespace

Fraction Fraction::make(std::int64_t num, std::int64_t den) {
    if (den <= 0 || num < 0 || num > den)
        throw std::invalid_argument("fraction " + std::to_string(num) + "/" + std::to_string(den) +
                                    " is not in [0, 1]");
    const std::int64_t g = std::gcd(num, den);
    return Fraction{num / g, den / g};
}

int compare(const Fraction& f, const Fraction& g) {
    const i128 lhs = static_cast<i128>(f.a) * g.q;
    const i128 rhs = static_cast<i128>(g.a) * f.q;
    return (lhs > rhs) - (lhs < rhs);
}

std::ostream& operator<<(std::ostream& os, const Fraction& f) { return os << f.a << '/' << f.q; }

Fraction parse_fraction(std::string_view text) {
    text = trim(text);
    if (text.empty()) throw std::invalid_argument("empty fraction");
    if (auto slash = text.find('/'); slash != std::string_view::npos)
        return Fraction::make(parse_int(trim(text.substr(0, slash))), parse_int(trim(text.substr(slash + 1))));
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        const auto whole = text.substr(0, dot);
        const auto frac = text.substr(dot + 1);
        if (frac.size() > 15) throw std::invalid_argument("too many decimals: '" + std::string(text) + "'");
        std::int64_t den = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
        const std::int64_t w = whole.empty() ? 0 : parse_int(whole);
        const std::int64_t f = frac.empty() ? 0 : parse_int(frac);
        if (w < 0 || f < 0) throw std::invalid_argument("negative fraction: '" + std::string(text) + "'");
        return Fraction::make(w * den + f, den);
    }
    return Fraction::make(parse_int(text), 1);
}

double Interval::length() const { return hi.value() - lo.value(); }

std::pair<std::int64_t, std::int64_t> Interval::length_ratio() const {
    return {hi.a * lo.q - lo.a * hi.q, hi.q * lo.q};
}

Interval parse_interval(std::string_view text) {
    const auto comma = text.find(',');
    if (comma == std::string_view::npos)
        throw std::invalid_argument("interval must be 'lo,hi': '" + std::string(text) + "'");
    Interval iv{parse_fraction(text.substr(0, comma)), parse_fraction(text.substr(comma + 1))};
    if (!(iv.lo < iv.hi)) throw std::invalid_argument("empty interval: '" + std::string(text) + "'");
    return iv;
}

void SequenceParams::validate() const {
    if (order < 1) throw std::invalid_argument("order Q must be >= 1");
    if (!(interval.lo < interval.hi)) throw std::invalid_argument("interval must satisfy lo < hi");
}

std::int64_t delta(const Fraction& f, const Fraction& g) { return g.a * f.q - f.a * g.q; }

Fraction next_fraction(const Fraction& prev, const Fraction& curr, std::int64_t order) {
    if (curr.a == curr.q) throw std::invalid_argument("1/1 has no successor in [0, 1]");
    if (delta(prev, curr) != 1 || prev.q > order || curr.q > order || prev.q + curr.q <= order)
        throw std::invalid_argument("fractions are not consecutive in F_Q");
    const std::int64_t k = (prev.q + order) / curr.q;
    return Fraction{k * curr.a - prev.a, k * curr.q - prev.q};
}

Fraction prev_fraction(const Fraction& curr, const Fraction& next, std::int64_t order) {
    if (curr.a == 0) throw std::invalid_argument("0/1 has no predecessor in [0, 1]");
    if (delta(curr, next) != 1 || next.q > order || curr.q > order || next.q + curr.q <= order)
        throw std::invalid_argument("fractions are not consecutive in F_Q");
    const std::int64_t k = (next.q + order) / curr.q;
    return Fraction{k * curr.a - next.a, k * curr.q - next.q};
}

std::pair<Fraction, Fraction> initial_pair(const Fraction& x0, std::int64_t order) {
    if (order < 1) throw std::invalid_argument("order Q must be >= 1");
    if (x0.a < 0 || x0.a >= x0.q) throw std::invalid_argument("x0 must lie in [0, 1)");
    const i128 n = x0.a;
    const i128 d = x0.q;
    // Invariant: lo <= x0 < hi, delta(lo, hi) = 1.
    std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 1;
    while (q0 + q1 <= order) {
        const std::int64_t pm = p0 + p1, qm = q0 + q1;
        if (d * pm <= n * qm) {
            // advance lo towards hi: lo + t*hi stays <= x0
            std::int64_t t = (order - q0) / q1;
            const i128 gap_hi = d * p1 - n * q1;  // > 0
            t = std::min<std::int64_t>(t, floor_div(n * q0 - d * p0, gap_hi));
            p0 += t * p1;
            q0 += t * q1;
        } else {
            // advance hi towards lo: hi + t*lo stays > x0
            std::int64_t t = (order - q1) / q0;
            const i128 gap_lo = n * q0 - d * p0;  // >= 0
            if (gap_lo > 0) t = std::min<std::int64_t>(t, floor_div(d * p1 - n * q1 - 1, gap_lo));
            p1 += t * p0;
            q1 += t * q0;
        }
    }
    return {Fraction{p0, q0}, Fraction{p1, q1}};
}

FareyRange::FareyRange(const SequenceParams& params) : params_(params) { params_.validate(); }

FareyRange::iterator FareyRange::begin() const {
    iterator it;
    it.order_ = params_.order;
    it.hi_ = params_.interval.hi;
    const Fraction& lo = params_.interval.lo;
    if (lo.a == lo.q) {
        // unreachable for validated params (lo < hi <= 1)
        it.done_ = true;
        return it;
    }
    auto [left, right] = initial_pair(lo, params_.order);
    if (left == lo) {
        it.curr_ = left;
        it.next_ = right;
    } else {
        it.curr_ = right;
        it.next_ = right.a == right.q ? right : next_fraction(left, right, params_.order);
    }
    it.has_next_ = !(it.curr_.a == it.curr_.q);
    it.done_ = it.hi_ < it.curr_;
    return it;
}

// next_ holds the successor of curr_ (valid when has_next_), so each step is
// one application of the recurrence.
FareyRange::iterator& FareyRange::iterator::operator++() {
    if (done_) return *this;
    if (!has_next_) {
        done_ = true;
        return *this;
    }
    const Fraction old = curr_;
    curr_ = next_;
    if (curr_.a == curr_.q) {
        has_next_ = false;
    } else {
        const std::int64_t k = (old.q + order_) / curr_.q;
        next_ = Fraction{k * curr_.a - old.a, k * curr_.q - old.q};
    }
    if (hi_ < curr_) done_ = true;
    return *this;
}

std::vector<Fraction> farey_sequence(const SequenceParams& params) {
    std::vector<Fraction> out;
    for (const Fraction& f : FareyRange(params)) out.push_back(f);
    return out;
}

std::int64_t farey_length(std::int64_t order) {
    if (order < 1) throw std::invalid_argument("order Q must be >= 1");
    std::vector<std::int64_t> phi(static_cast<std::size_t>(order) + 1);
    std::iota(phi.begin(), phi.end(), std::int64_t{0});
    for (std::int64_t p = 2; p <= order; ++p) {
        if (phi[p] != p) continue;  // composite
        for (std::int64_t m = p; m <= order; m += p) phi[m] -= phi[m] / p;
    }
    std::int64_t total = 1;
    for (std::int64_t q = 1; q <= order; ++q) total += phi[q];
    return total;
}

std::int64_t count(const SequenceParams& params) {
    params.validate();
    if (params.interval == Interval{}) return farey_length(params.order);
    std::int64_t n = 0;
    for (const Fraction& f : FareyRange(params)) {
        (void)f;
        ++n;
    }
    return n;
}

void for_each_window(const SequenceParams& params, int h,
                     const std::function<void(std::int64_t, std::span<const Fraction>)>& fn) {
    if (h < 1) throw std::invalid_argument("h must be >= 1");
    const std::size_t width = static_cast<std::size_t>(h) + 2;
    std::vector<Fraction> window;
    window.reserve(width);
    std::int64_t j = 0;
    for (const Fraction& f : FareyRange(params)) {
        if (window.size() == width) window.erase(window.begin());
        window.push_back(f);
        if (window.size() == width) fn(++j, std::span<const Fraction>(window));
    }
    if (j == 0)
        throw std::invalid_argument("sequence has fewer than h + 2 = " + std::to_string(width) + " elements");
}

void for_each_gap_tuple(const SequenceParams& params, int h,
                        const std::function<void(std::int64_t, std::span<const double>)>& fn) {
    if (h < 1) throw std::invalid_argument("h must be >= 1");
    const std::int64_t n = count(params);
    if (n < h + 2)
        throw std::invalid_argument("N_I(Q) = " + std::to_string(n) + " is smaller than h + 2 = " +
                                    std::to_string(h + 2));
    const auto [len_num, len_den] = params.interval.length_ratio();
    const double scale = static_cast<double>(n) * static_cast<double>(len_den) / static_cast<double>(len_num);
    std::vector<double> gaps(static_cast<std::size_t>(h));
    for_each_window(params, h, [&](std::int64_t j, std::span<const Fraction> w) {
        for (int i = 1; i <= h; ++i) {
            const Fraction& left = w[i - 1];
            const Fraction& right = w[i + 1];
            gaps[i - 1] = scale * static_cast<double>(delta(left, right)) /
                          (static_cast<double>(left.q) * static_cast<double>(right.q));
        }
        fn(j, std::span<const double>(gaps));
    });
}

std::vector<GapTuple> gap_tuples(const SequenceParams& params, int h) {
    std::vector<GapTuple> out;
    for_each_gap_tuple(params, h, [&](std::int64_t j, std::span<const double> g) {
        out.push_back(GapTuple{j, std::vector<double>(g.begin(), g.end())});
    });
    return out;
}

std::int64_t mod_inverse(std::int64_t a, std::int64_t m) {
    if (m < 1) throw std::invalid_argument("modulus must be >= 1");
    std::int64_t old_r = ((a % m) + m) % m, r = m;
    std::int64_t old_s = 1, s = 0;
    while (r != 0) {
        const std::int64_t quot = old_r / r;
        old_r -= quot * r;
        std::swap(old_r, r);
        old_s -= quot * s;
        std::swap(old_s, s);
    }
    if (old_r != 1 && m != 1) throw std::invalid_argument("arguments are not coprime");
    return ((old_s % m) + m) % m;
}

bool inverse_membership(std::int64_t qprime, std::int64_t qsecond, const Interval& interval) {
    if (qprime < 1 || qsecond < 1) throw std::invalid_argument("denominators must be positive");
    if (std::gcd(qprime, qsecond) != 1) throw std::invalid_argument("denominators are not coprime");
    std::int64_t a = mod_inverse(qprime, qsecond);
    if (a == 0) a = qsecond;  // modulus 1: the fraction is 1/1
    return interval.contains(Fraction{a, qsecond});
}

}  // namespace farey
