#include "sobnum/constants.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "sobnum/errors.hpp"

namespace sobnum {

namespace {

constexpr double kE = 2.718281828459045235360287471352662498;

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

}  // namespace

long long BoundCertificate::min_valid_n() const {
    double t = strict ? std::floor(threshold) + 1.0 : std::ceil(threshold);
    return static_cast<long long>(std::max(t, 1.0));
}

double BoundCertificate::rhs(double n) const {
    double v = coefficient * std::pow(n, n_exponent);
    if (log_exponent != 0.0) {
        double arg = (log_argument == LogArgument::Log2N) ? 2.0 * n : n;
        v *= std::pow(std::log(arg), log_exponent);
    }
    return v;
}

std::string to_string(BoundName name) {
    switch (name) {
        case BoundName::Prop2Upper: return "Prop2Upper";
        case BoundName::Prop2Lower: return "Prop2Lower";
        case BoundName::Cor1Upper: return "Cor1Upper";
        case BoundName::Cor1Lower: return "Cor1Lower";
        case BoundName::Cor1LowerAlt: return "Cor1LowerAlt";
        case BoundName::Cor12Upper: return "Cor12Upper";
        case BoundName::Cor12Lower: return "Cor12Lower";
        case BoundName::Cor12bUpper: return "Cor12bUpper";
    }
    throw DomainError("unknown bound name");
}

BoundName parse_bound_name(const std::string& s) {
    // case-insensitive, dashes ignored: "prop2-upper" == "Prop2Upper"
    auto canon = [](const std::string& in) {
        std::string out;
        for (char c : in)
            if (c != '-' && c != '_') out.push_back(char(std::tolower(unsigned(c))));
        return out;
    };
    std::string key = canon(s);
    for (BoundName name : {BoundName::Prop2Upper, BoundName::Prop2Lower,
                           BoundName::Cor1Upper, BoundName::Cor1Lower,
                           BoundName::Cor1LowerAlt, BoundName::Cor12Upper,
                           BoundName::Cor12Lower, BoundName::Cor12bUpper}) {
        if (canon(to_string(name)) == key) return name;
    }
    throw ParseError("unknown bound name: " + s);
}

double gamma_fn(double x) {
    if (!(x > 0.0)) throw DomainError("gamma_fn requires x > 0");
    double g = std::tgamma(x);
    if (!std::isfinite(g)) throw OverflowError("gamma_fn overflow at x = " + std::to_string(x));
    return g;
}

GammaBounds gamma_bounds(double x) {
    if (!(x > 0.0)) throw DomainError("gamma_bounds requires x > 0");
    return {std::pow(x / kE, x), std::pow(x + 1.0, x)};
}

double volume_ball(int d, double r) {
    if (d < 1) throw DomainError("volume_ball requires d >= 1");
    if (std::isinf(r)) return std::pow(2.0, d);
    if (!(r > 0.0)) throw DomainError("volume_ball requires r > 0");
    double log_vol = d * std::log(2.0) + d * std::lgamma(1.0 + 1.0 / r) - std::lgamma(1.0 + d / r);
    double v = std::exp(log_vol);
    if (!std::isfinite(v)) throw OverflowError("volume_ball overflow");
    return v;
}

VolumeDecayBounds volume_decay_bounds(int d, double s, double r) {
    if (d < 1 || !(s > 0.0) || !(r > 0.0) || std::isinf(r))
        throw DomainError("volume_decay_bounds requires d >= 1, s > 0, finite r > 0");
    double lo = std::pow(2.0, s) / std::pow(kE * (d + r), s / r);
    double hi = std::pow(2.0, s) * std::pow(kE * (r + 1.0), s / r) / std::pow(double(d), s / r);
    return {lo, hi};
}

LimitSpec limit_constant(Kind kind, LimitTarget target, double s, double r, int d) {
    if (d < 1 || !(s > 0.0) || !(r > 0.0))
        throw DomainError("limit_constant requires d >= 1, s > 0, r > 0");
    LimitSpec spec;
    spec.family_kind = kind;
    spec.target = target;
    spec.s = s;
    spec.r = r;
    spec.d = d;
    if (kind == Kind::Isotropic) {
        double vol_pow = std::pow(volume_ball(d, r), s / d);
        if (target == LimitTarget::L2) {
            spec.rate_exponent = s / d;
            spec.log_exponent = 0.0;
            spec.constant = vol_pow;
        } else {
            if (!(s > d / 2.0))
                throw EmbeddingError("isotropic sup-norm limit requires s > d/2");
            spec.rate_exponent = s / d - 0.5;
            spec.log_exponent = 0.0;
            spec.constant = std::sqrt(d / (2.0 * s - d)) * vol_pow;
        }
    } else {
        // independent of r
        double base = std::pow(std::pow(2.0, d) / factorial(d - 1), s);
        if (target == LimitTarget::L2) {
            spec.rate_exponent = s;
            spec.log_exponent = (d - 1) * s;
            spec.constant = base;
        } else {
            if (!(s > 0.5)) throw EmbeddingError("mixed sup-norm limit requires s > 1/2");
            spec.rate_exponent = s - 0.5;
            spec.log_exponent = (d - 1) * s;
            spec.constant = base / std::sqrt(2.0 * s - 1.0);
        }
    }
    return spec;
}

TransferBound transfer_upper(double B, double alpha, double beta, long long N) {
    if (!(alpha > 0.5)) throw DomainError("transfer requires alpha > 1/2");
    if (!(beta >= 0.0) || N < 1) throw DomainError("transfer requires beta >= 0, N >= 1");
    TransferBound t;
    t.coefficient = B * std::sqrt(2.0 / (2.0 * alpha - 1.0));
    t.exponent = 0.5 - alpha;
    t.threshold = std::max(double(N), std::exp(4.0 * beta / (2.0 * alpha - 1.0)));
    return t;
}

TransferBound transfer_lower(double A, double alpha, double beta, long long N) {
    if (!(alpha > 0.5)) throw DomainError("transfer requires alpha > 1/2");
    if (!(beta >= 0.0)) throw DomainError("transfer requires beta >= 0");
    TransferBound t;
    t.coefficient = A * std::sqrt(1.0 / (4.0 * alpha - 2.0));
    t.exponent = 0.5 - alpha;
    t.threshold = std::max(double(N), 2.0);
    return t;
}

BoundCertificate explicit_bound(BoundName name, int d, double s, double p) {
    if (d < 1 || !(s > 0.0)) throw DomainError("explicit_bound requires d >= 1, s > 0");
    BoundCertificate c;
    c.name = name;
    switch (name) {
        case BoundName::Prop2Upper:
            c.coefficient = std::pow(32.0 * kE / d, s / 2.0);
            c.n_exponent = -s / d;
            c.threshold = std::pow(9.0, d) * std::exp(d / 2.0);
            c.side = BoundSide::Upper;
            c.comparand = Comparand::SigmaL2;
            break;
        case BoundName::Prop2Lower:
            c.coefficient = std::pow(1.0 / (kE * (d + 2.0)), s / 2.0);
            c.n_exponent = -s / d;
            c.threshold = std::pow(11.0, d) * std::exp(d / 2.0);
            c.side = BoundSide::Lower;
            c.comparand = Comparand::SigmaL2;
            break;
        case BoundName::Cor1Upper:
            if (!(s > d / 2.0)) throw EmbeddingError("Cor1Upper requires s > d/2");
            c.coefficient = std::sqrt(2.0 * d / (2.0 * s - d)) * std::pow(32.0 * kE / d, s / 2.0);
            c.n_exponent = 0.5 - s / d;
            c.threshold = std::pow(9.0, d) * std::exp(d / 2.0);
            c.side = BoundSide::Upper;
            c.comparand = Comparand::TailLinf;
            c.index_shift = 1;
            break;
        case BoundName::Cor1Lower:
            if (!(s > d / 2.0)) throw EmbeddingError("Cor1Lower requires s > d/2");
            c.coefficient =
                std::sqrt(4.0 * d / (4.0 * s - d)) * std::pow(1.0 / (kE * (d + 2.0)), s / 2.0);
            c.n_exponent = 0.5 - s / d;
            c.threshold = std::pow(11.0, d) * std::exp(d / 2.0);
            c.side = BoundSide::Lower;
            c.comparand = Comparand::TailLinf;
            break;
        case BoundName::Cor1LowerAlt:
            // same inequality with the coefficient obtained by substituting
            // alpha = s/d into the transfer estimate instead of the sharper
            // printed constant; kept for comparison
            if (!(s > d / 2.0)) throw EmbeddingError("Cor1LowerAlt requires s > d/2");
            c.coefficient =
                std::sqrt(d / (4.0 * s - 2.0 * d)) * std::pow(1.0 / (kE * (d + 2.0)), s / 2.0);
            c.n_exponent = 0.5 - s / d;
            c.threshold = std::pow(11.0, d) * std::exp(d / 2.0);
            c.side = BoundSide::Lower;
            c.comparand = Comparand::TailLinf;
            break;
        case BoundName::Cor12Upper:
            if (!(s > 0.5)) throw EmbeddingError("Cor12Upper requires s > 1/2");
            c.coefficient = std::sqrt(2.0 / (2.0 * s - 1.0)) *
                            std::pow(std::pow(3.0 * std::sqrt(2.0), d) / factorial(d - 1), s);
            c.n_exponent = 0.5 - s;
            c.log_exponent = (d - 1) * s;
            c.log_argument = LogArgument::LogN;
            c.threshold =
                std::max(std::pow(27.0, d), std::exp(4.0 * (d - 1) * s / (2.0 * s - 1.0)));
            c.strict = true;
            c.side = BoundSide::Upper;
            c.comparand = Comparand::TailLinf;
            break;
        case BoundName::Cor12Lower:
            if (!(s > 0.5)) throw EmbeddingError("Cor12Lower requires s > 1/2");
            c.coefficient =
                std::sqrt(1.0 / (4.0 * s - 2.0)) *
                std::pow(5.0 / (6.0 * factorial(d) * std::pow(1.0 + std::log(std::sqrt(12.0)), d)),
                         s);
            c.n_exponent = 0.5 - s;
            c.log_exponent = (d - 1) * s;
            c.log_argument = LogArgument::Log2N;
            c.threshold = std::pow(12.0 * kE * kE, d);
            c.strict = true;
            c.side = BoundSide::Lower;
            c.comparand = Comparand::TailLinf;
            break;
        case BoundName::Cor12bUpper: {
            if (!(p > 2.0) || std::isinf(p))
                throw DomainError("Cor12bUpper requires 2 < p < inf");
            double inv_rp = 0.5 - 1.0 / p;
            if (!(s > d * inv_rp)) throw EmbeddingError("Cor12bUpper requires s > d(1/2 - 1/p)");
            double rp = 1.0 / inv_rp;
            double alpha = s / d;
            c.coefficient =
                std::pow(32.0 * kE / d, s / 2.0) / std::pow(alpha * rp - 1.0, inv_rp);
            c.n_exponent = 0.5 - 1.0 / p - s / d;
            c.threshold = std::pow(9.0, d) * std::exp(d / 2.0);
            c.side = BoundSide::Upper;
            c.comparand = Comparand::TailLp;
            c.index_shift = 1;
            c.p = p;
            break;
        }
    }
    return c;
}

}  // namespace sobnum
