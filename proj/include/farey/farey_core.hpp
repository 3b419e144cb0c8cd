#pragma once

// Exact enumeration of Farey sequences F_Q and F_Q(I), the three-term
// recurrence, the determinant Delta and normalized third-gap windows.
//
// All arithmetic is on 64-bit integers. Fractions are kept irreducible with
// 0 <= a <= q. Delta(f, g) is the numerator of g - f, so neighbours in F_Q
// have Delta = +1.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace farey {

/// Irreducible fraction a/q in [0, 1].
struct Fraction {
    std::int64_t a = 0;
    std::int64_t q = 1;

    /// Reduces num/den; throws std::invalid_argument unless 0 <= num <= den, den > 0.
    static Fraction make(std::int64_t num, std::int64_t den);

    double value() const { return static_cast<double>(a) / static_cast<double>(q); }

    friend bool operator==(const Fraction&, const Fraction&) = default;
};

/// Exact three-way comparison by cross multiplication.
int compare(const Fraction& f, const Fraction& g);
inline bool operator<(const Fraction& f, const Fraction& g) { return compare(f, g) < 0; }
inline bool operator<=(const Fraction& f, const Fraction& g) { return compare(f, g) <= 0; }

std::ostream& operator<<(std::ostream& os, const Fraction& f);

/// Parses "a/q", an integer, or a finite decimal such as "0.37" into an exact
/// fraction in [0, 1].
Fraction parse_fraction(std::string_view text);

/// Closed interval [lo, hi] of [0, 1] with rational endpoints.
struct Interval {
    Fraction lo{0, 1};
    Fraction hi{1, 1};

    bool contains(const Fraction& f) const { return lo <= f && f <= hi; }
    double length() const;
    /// Exact length as (numerator, denominator), not reduced.
    std::pair<std::int64_t, std::int64_t> length_ratio() const;

    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Parses "lo,hi" where each endpoint is accepted by parse_fraction.
Interval parse_interval(std::string_view text);

struct SequenceParams {
    std::int64_t order = 1;  // Q
    Interval interval{};

    /// Throws std::invalid_argument on order < 1 or lo >= hi.
    void validate() const;
};

/// a_g q_f - a_f q_g, the numerator of g - f over q_f q_g.
std::int64_t delta(const Fraction& f, const Fraction& g);

/// Successor of curr in F_Q given its predecessor prev.
Fraction next_fraction(const Fraction& prev, const Fraction& curr, std::int64_t order);

/// Predecessor of curr in F_Q given its successor next.
Fraction prev_fraction(const Fraction& curr, const Fraction& next, std::int64_t order);

/// Consecutive members (left, right) of F_Q with left <= x0 < right.
/// Stern-Brocot descent with batched steps, O(log Q) iterations.
std::pair<Fraction, Fraction> initial_pair(const Fraction& x0, std::int64_t order);

/// Sentinel for FareyRange iteration.
struct FareyEnd {};

/// Streaming F_Q ∩ I in increasing order. Constant memory.
class FareyRange {
public:
    explicit FareyRange(const SequenceParams& params);

    class iterator {
    public:
        using value_type = Fraction;
        using difference_type = std::ptrdiff_t;

        const Fraction& operator*() const { return curr_; }
        const Fraction* operator->() const { return &curr_; }
        iterator& operator++();
        void operator++(int) { ++*this; }
        bool operator==(FareyEnd) const { return done_; }

    private:
        friend class FareyRange;
        Fraction next_{};
        Fraction curr_{};
        Fraction hi_{};
        std::int64_t order_ = 1;
        bool has_next_ = false;
        bool done_ = true;
    };

    iterator begin() const;
    FareyEnd end() const { return {}; }

private:
    SequenceParams params_;
};

/// Materialized F_Q ∩ I.
std::vector<Fraction> farey_sequence(const SequenceParams& params);

/// #(F_Q ∩ I). Totient summation for [0, 1], enumeration otherwise.
std::int64_t count(const SequenceParams& params);

/// 1 + sum_{q <= Q} phi(q).
std::int64_t farey_length(std::int64_t order);

struct GapTuple {
    std::int64_t start_index = 1;  // j, 1-based
    std::vector<double> values;    // h normalized third gaps
};

/// Calls fn(j, window) for every window gamma_j .. gamma_{j+h+1},
/// j = 1 .. N - h - 1. The span is only valid during the call.
void for_each_window(const SequenceParams& params, int h,
                     const std::function<void(std::int64_t, std::span<const Fraction>)>& fn);

/// Calls fn(j, gaps) with the h normalized third gaps
/// (N/|I|) (gamma_{j+i+1} - gamma_{j+i-1}), i = 1..h.
/// Throws std::invalid_argument if N_I(Q) < h + 2 or h < 1.
void for_each_gap_tuple(const SequenceParams& params, int h,
                        const std::function<void(std::int64_t, std::span<const double>)>& fn);

std::vector<GapTuple> gap_tuples(const SequenceParams& params, int h);

/// Modular inverse of a mod m for gcd(a, m) = 1, in [0, m). m = 1 gives 0.
std::int64_t mod_inverse(std::int64_t a, std::int64_t m);

/// Whether the fraction following a denominator pair (q', q'') lies in I,
/// using only a'' = (q')^{-1} mod q''. For q'' = 1 the fraction is 1/1.
bool inverse_membership(std::int64_t qprime, std::int64_t qsecond, const Interval& interval);

}  // namespace farey
