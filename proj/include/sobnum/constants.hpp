#pragma once

#include <string>

#include "sobnum/weights.hpp"

namespace sobnum {

// Target side of a limit statement.
enum class LimitTarget { L2, Linf };

// Asymptotic constant of n^rate * a_n / (ln n)^log_exp -> constant.
struct LimitSpec {
    Kind family_kind = Kind::Isotropic;
    LimitTarget target = LimitTarget::L2;
    double s = 1.0;
    double r = 2.0;
    int d = 1;
    double rate_exponent = 0.0;  // power of n multiplied in
    double log_exponent = 0.0;   // power of ln n divided out ((d-1)s for mixed)
    double constant = 0.0;
};

enum class BoundName {
    Prop2Upper,
    Prop2Lower,
    Cor1Upper,
    Cor1Lower,
    Cor1LowerAlt,  // transfer-derived alternative coefficient, see explicit_bound
    Cor12Upper,
    Cor12Lower,
    Cor12bUpper,
};

enum class BoundSide { Upper, Lower };
enum class LogArgument { LogN, Log2N };

// What the bound compares against.
enum class Comparand { SigmaL2, TailLinf, TailLp };

// An explicit preasymptotic inequality: for all valid n,
//   a_{n + index_shift} (side) coefficient * n^n_exponent * (ln arg)^log_exponent,
// valid for n >= threshold (or n > threshold when strict).
struct BoundCertificate {
    BoundName name;
    double coefficient = 0.0;
    double n_exponent = 0.0;
    double log_exponent = 0.0;
    LogArgument log_argument = LogArgument::LogN;
    double threshold = 1.0;
    bool strict = false;  // true: valid for n > threshold; false: n >= threshold
    BoundSide side = BoundSide::Upper;
    Comparand comparand = Comparand::SigmaL2;
    int index_shift = 0;  // 1 when the bound controls a_{n+1}
    double p = 0.0;       // L_p exponent for Comparand::TailLp

    // First integer n the certificate applies to.
    long long min_valid_n() const;
    // Right-hand side at n.
    double rhs(double n) const;
};

std::string to_string(BoundName name);
BoundName parse_bound_name(const std::string& s);

// Gamma(x) for x > 0, relative error <= 1e-12 on (0, 171].
double gamma_fn(double x);

// ((x/e)^x, (x+1)^x), a two-sided bracket of Gamma(1+x).
struct GammaBounds {
    double lower;
    double upper;
};
GammaBounds gamma_bounds(double x);

// Volume of the unit ball of |.|_r in R^d: 2^d Gamma(1+1/r)^d / Gamma(1+d/r),
// and 2^d for r = inf.
double volume_ball(int d, double r);

// Elementary two-sided bracket of volume_ball(d,r)^(s/d):
//   2^s / (e(d+r))^(s/r) <= vol^(s/d) <= 2^s (e(r+1))^(s/r) / d^(s/r).
struct VolumeDecayBounds {
    double lower;
    double upper;
};
VolumeDecayBounds volume_decay_bounds(int d, double s, double r);

// The four limit statements (isotropic/mixed x L2/Linf).
LimitSpec limit_constant(Kind kind, LimitTarget target, double s, double r, int d);

struct TransferBound {
    double coefficient;
    double exponent;   // 1/2 - alpha
    double threshold;  // first real n the bound holds from
};

// Log-transfer of a two-sided L2 rate A n^-alpha (log n)^beta <= sigma_n <=
// B n^-alpha (log n)^beta into sup-norm bounds. Upper controls a_{n+1} with
// the same log power on log n; lower controls a_n with log 2n.
TransferBound transfer_upper(double B, double alpha, double beta, long long N);
TransferBound transfer_lower(double A, double alpha, double beta, long long N);

// Named explicit bound certificates; p only used by Cor12bUpper.
BoundCertificate explicit_bound(BoundName name, int d, double s, double p = 0.0);

}  // namespace sobnum
