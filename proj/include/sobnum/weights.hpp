#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>

namespace sobnum {

enum class Kind { Isotropic, Mixed };

// A weight family w(k) on Z^d.
//
//   Isotropic: w(k) = (1 + sum_j |k_j|^r)^(s/r)
//   Mixed:     w(k) = prod_j (1 + |k_j|^r)^(s/r)
//
// r = infinity uses the pointwise limit convention
//   Isotropic: w(k) = max(1, |k|_inf)^s
//   Mixed:     w(k) = prod_j max(1, |k_j|)^s
struct WeightFamily {
    Kind kind = Kind::Isotropic;
    double s = 1.0;   // smoothness, s > 0
    double r = 2.0;   // norm exponent, r > 0 or +inf
    int d = 1;        // dimension, d >= 1

    bool r_infinite() const { return r == std::numeric_limits<double>::infinity(); }

    // True when attained weight levels have an exact integer representation:
    // integer r (levels sum_j |k_j|^r resp. prod_j (1+|k_j|^r)) or r = inf.
    bool integer_levels() const;

    // Short stable identifier, usable as a cache file name.
    std::string id() const;

    // CLI spec syntax, e.g. "iso:s=1,r=2,d=3" or "mix:s=0.5,r=inf,d=2".
    std::string spec() const;
};

// Validates invariants (s > 0, d >= 1, r > 0), throws DomainError.
void validate(const WeightFamily& f);

// Parses the CLI family syntax. Throws ParseError / DomainError.
WeightFamily parse_family(const std::string& spec);

// w(k). Throws DimensionMismatch if k.size() != f.d.
double eval_weight(const WeightFamily& f, std::span<const long long> k);

// True iff sum_k w(k)^(-q) < infinity, i.e. q*s > d (isotropic)
// or q*s > 1 (mixed). Requires q >= 1.
bool check_summability(const WeightFamily& f, double q);

}  // namespace sobnum
