#pragma once

#include <cstdint>

#include "sobnum/budget.hpp"
#include "sobnum/counting.hpp"
#include "sobnum/weights.hpp"

namespace sobnum {

// Certified interval: the mathematically exact value lies in [lo, hi]
// (truncation fully accounted for; round-off follows the compensated
// summation model documented in the tail engine, <= ~1e-13 relative).
struct Enclosure {
    double lo = 0.0;
    double hi = 0.0;

    double width() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
    bool contains(double x) const { return lo <= x && x <= hi; }
};

// sigma_n: the n-th largest element of {1/w(k) : k in Z^d}.
struct SigmaValue {
    std::uint64_t n = 0;
    double value = 0.0;        // sigma_n = 1/level
    double level = 0.0;        // weight value t_n with sigma_n = 1/t_n
    long long raw_level = -1;  // integer level index, -1 for non-integer families
    std::uint64_t rank_first = 0;  // first rank sharing this value
    std::uint64_t rank_last = 0;   // last rank sharing this value
};

struct TailOptions {
    double rel_width = 1e-6;   // requested relative enclosure width
    double cutoff_hint = 0.0;  // initial weight cutoff for the exact part, 0 = auto
    Budget budget{};
};

struct TailResult {
    Enclosure enclosure;
    double width = 0.0;        // hi - lo
    double cutoff_used = 0.0;  // weight value up to which the sum is exact
    bool width_ok = true;      // false: width target unreachable within budget
};

SigmaValue sigma(const WeightFamily& f, std::uint64_t n, const Budget& budget = {});

// Enclosure of T_q(n) = (sum_{j>=n} sigma_j^q)^(1/q).
// Pre: check_summability(f, q). Throws EmbeddingError otherwise.
TailResult tail(const WeightFamily& f, std::uint64_t n, double q,
                const TailOptions& opts = {});

// Exact finite part sum_{w(k) <= cutoff} w(k)^{-q}, accumulated per level in
// increasing level order with compensated summation.
double partial_sum_leq(const WeightFamily& f, double cutoff, double q,
                       const Budget& budget = {});

// Compensated (Kahan) accumulator, used wherever determinism of the exact
// finite parts matters.
struct Kahan {
    double sum = 0.0;
    double c = 0.0;
    void add(double x) {
        double y = x - c;
        double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

}  // namespace sobnum
