#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "sobnum/budget.hpp"
#include "sobnum/weights.hpp"

namespace sobnum {

// Relative tolerance for boundary classification of non-exact level values.
// Ties within this tolerance are counted as <= (deterministic convention).
inline constexpr double kLevelTol = 1e-12;

struct LevelEntry {
    double value;               // attained weight value w
    long long raw;              // integer level index, -1 for non-integer families
    std::uint64_t multiplicity; // #{k : w(k) == value}
};

// All attained weight values <= cutoff with exact multiplicities,
// sorted strictly increasing. The first entry has value 1 with
// multiplicity 1 (finite r) or 3^d (r = inf).
struct LevelTable {
    WeightFamily family;
    double cutoff = 1.0;
    std::vector<LevelEntry> levels;

    std::uint64_t total_count() const;
};

// N(t) = #{k in Z^d : w(k) <= t}. Exact for integer-level families.
// Consults the optional persistent cache in $SOBNUM_CACHE_DIR.
std::uint64_t count_leq(const WeightFamily& f, double t, const Budget& budget = {});

LevelTable level_multiplicities(const WeightFamily& f, double cutoff,
                                const Budget& budget = {});

// Memoized counting engine for repeated queries against one family.
// Pure apart from its private memo caches; not shared between threads.
class Counter {
public:
    explicit Counter(const WeightFamily& f, const Budget& budget = {});
    ~Counter();

    Counter(const Counter&) = delete;
    Counter& operator=(const Counter&) = delete;

    const WeightFamily& family() const { return family_; }
    const Budget& budget() const { return budget_; }

    std::uint64_t count_leq(double t);

    // Integer-level interface (family().integer_levels() only).
    // Level indices: Isotropic finite r: lam = sum |k_j|^r, min 0.
    // Isotropic r=inf: lam = max(1,|k|_inf), min 1.
    // Mixed finite r: lam = prod(1+|k_j|^r), min 1.
    // Mixed r=inf: lam = prod max(1,|k_j|), min 1.
    long long min_level() const;
    double weight_of_level(long long lam) const;
    long long max_level(double t) const;  // largest lam with weight <= t*(1+tol)
    std::uint64_t count_level_leq(long long lam);

    std::uint64_t steps_used() const;

    struct Impl;  // implementation detail, defined in the .cpp

private:
    WeightFamily family_;
    Budget budget_;
    std::unique_ptr<Impl> impl_;
};

// Exact per-level point counts, used by the level table and the tail engine.
//
// iso_ball_level_counts: out[lam] = #{k : sum |k_j|^r == lam}, lam <= lam_max.
// iso_box_level_counts:  same but restricted to the box |k|_inf <= K
//                        (covers lam up to d*K^r).
// mix_level_counts:      out[u] = #{k : prod(1+|k_j|^r) == u}, u <= u_max.
// All require integer levels and finite counts; throw MemoryBudgetError /
// BudgetExceeded / OverflowError per the budget.
std::vector<std::uint64_t> iso_ball_level_counts(const WeightFamily& f, long long lam_max,
                                                 const Budget& budget);
std::vector<std::uint64_t> iso_box_level_counts(const WeightFamily& f, long long box_radius,
                                                const Budget& budget);
std::vector<std::uint64_t> mix_level_counts(const WeightFamily& f, long long u_max,
                                            const Budget& budget);

// Weight value of an integer level index (see Counter for the conventions).
double level_weight(const WeightFamily& f, long long lam);

// floor(x^(1/r)) for integers x >= 0, r >= 1, exact.
long long integer_root(long long x, long long r);
// m^r with overflow saturation to a sentinel above any usable level.
long long ipow_clamped(long long m, long long r, long long cap);

}  // namespace sobnum
