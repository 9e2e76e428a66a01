#pragma once

#include <cstdint>
#include <vector>

#include "sobnum/constants.hpp"
#include "sobnum/tails.hpp"
#include "sobnum/weights.hpp"

namespace sobnum {

// First n_max values of the non-increasing rearrangement of {1/w(k)},
// by full enumeration over a guard box and sorting. Shares no code with the
// counting engine; intended as an independent oracle.
std::vector<double> brute_sigma(const WeightFamily& f, std::uint64_t n_max,
                                const Budget& budget = {});

struct CertFailure {
    std::uint64_t n;
    double lhs;  // actual value endpoint used in the comparison
    double rhs;  // certificate bound at n
};

struct CertificationReport {
    BoundCertificate certificate;
    WeightFamily family;
    std::uint64_t n_min = 0;
    std::uint64_t n_max = 0;
    std::uint64_t checked_points = 0;
    std::uint64_t skipped_below_threshold = 0;
    std::vector<CertFailure> failures;
    double min_margin = 0.0;  // min over checked n; >= 1 iff no failures

    struct Point {
        std::uint64_t n;
        double actual_lo;
        double actual_hi;
        double bound;
        double margin;
    };
    std::vector<Point> points;  // in increasing n

    bool passed() const { return checked_points > 0 && failures.empty(); }
};

struct Sampling {
    bool exhaustive = false;      // check every n in range
    int points_per_decade = 64;   // geometric sampling density otherwise
};

// Check the certificate against engine values over [n_min, n_max].
// Points below the validity threshold are skipped and counted, never failed.
// Upper bounds compare the enclosure hi endpoint, lower bounds the lo
// endpoint. Ranges below 1024 are checked exhaustively regardless of
// sampling. threads > 1 parallelizes without changing any output.
CertificationReport certify(const BoundCertificate& cert, const WeightFamily& f,
                            std::uint64_t n_min, std::uint64_t n_max,
                            const Sampling& sampling = {}, int threads = 1,
                            const Budget& budget = {});

struct ConvergenceTrace {
    LimitSpec limit_spec;
    std::vector<std::uint64_t> grid;  // strictly increasing
    std::vector<double> ratios;       // n^rate * a_n / ((ln n)^log_exp * constant)
};

ConvergenceTrace convergence_trace(const LimitSpec& spec,
                                   const std::vector<std::uint64_t>& n_grid,
                                   const Budget& budget = {});

// Strictly increasing geometric grid from n_min to n_max (both included).
std::vector<std::uint64_t> geometric_grid(std::uint64_t n_min, std::uint64_t n_max,
                                          int points_per_decade);

}  // namespace sobnum
