#include "sobnum/weights.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "sobnum/errors.hpp"

namespace sobnum {

namespace {

std::string fmt_param(double v) {
    if (v == std::numeric_limits<double>::infinity()) return "inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

bool WeightFamily::integer_levels() const {
    if (r_infinite()) return true;
    return r >= 1.0 && r == std::floor(r) && r <= 62.0;
}

std::string WeightFamily::id() const {
    std::string out = (kind == Kind::Isotropic) ? "iso_s" : "mix_s";
    out += fmt_param(s);
    out += "_r";
    out += fmt_param(r);
    out += "_d";
    out += std::to_string(d);
    for (auto& c : out)
        if (c == '.' || c == '+' || c == '-') c = 'p';
    return out;
}

std::string WeightFamily::spec() const {
    std::string out = (kind == Kind::Isotropic) ? "iso:s=" : "mix:s=";
    out += fmt_param(s);
    out += ",r=";
    out += fmt_param(r);
    out += ",d=";
    out += std::to_string(d);
    return out;
}

void validate(const WeightFamily& f) {
    if (!(f.s > 0.0) || !std::isfinite(f.s))
        throw DomainError("weight family: s must be a positive real, got s=" + fmt_param(f.s));
    if (!(f.r > 0.0))
        throw DomainError("weight family: r must be positive or inf, got r=" + fmt_param(f.r));
    if (f.d < 1)
        throw DomainError("weight family: d must be a positive integer, got d=" + std::to_string(f.d));
}

WeightFamily parse_family(const std::string& spec) {
    WeightFamily f;
    auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw ParseError("family spec '" + spec + "': expected 'iso:...' or 'mix:...'");
    std::string head = spec.substr(0, colon);
    if (head == "iso")
        f.kind = Kind::Isotropic;
    else if (head == "mix")
        f.kind = Kind::Mixed;
    else
        throw ParseError("family spec '" + spec + "': unknown kind '" + head + "'");

    bool have_s = false, have_r = false, have_d = false;
    std::stringstream rest(spec.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos)
            throw ParseError("family spec '" + spec + "': bad field '" + item + "'");
        std::string key = item.substr(0, eq);
        std::string val = item.substr(eq + 1);
        try {
            if (key == "s") {
                f.s = std::stod(val);
                have_s = true;
            } else if (key == "r") {
                f.r = (val == "inf") ? std::numeric_limits<double>::infinity() : std::stod(val);
                have_r = true;
            } else if (key == "d") {
                f.d = std::stoi(val);
                have_d = true;
            } else {
                throw ParseError("family spec '" + spec + "': unknown field '" + key + "'");
            }
        } catch (const std::invalid_argument&) {
            throw ParseError("family spec '" + spec + "': bad value '" + val + "' for " + key);
        } catch (const std::out_of_range&) {
            throw ParseError("family spec '" + spec + "': value out of range '" + val + "'");
        }
    }
    if (!have_s || !have_r || !have_d)
        throw ParseError("family spec '" + spec + "': need all of s=, r=, d=");
    validate(f);
    return f;
}

double eval_weight(const WeightFamily& f, std::span<const long long> k) {
    if (static_cast<int>(k.size()) != f.d)
        throw DimensionMismatch("eval_weight: index vector has length " +
                                std::to_string(k.size()) + ", family dimension is " +
                                std::to_string(f.d));
    if (f.r_infinite()) {
        if (f.kind == Kind::Isotropic) {
            long long m = 1;
            for (long long kj : k) m = std::max(m, std::llabs(kj));
            return std::pow(static_cast<double>(m), f.s);
        }
        double prod = 1.0;
        for (long long kj : k)
            prod *= std::pow(static_cast<double>(std::max(1LL, std::llabs(kj))), f.s);
        return prod;
    }
    const double e = f.s / f.r;
    if (f.kind == Kind::Isotropic) {
        double sum = 0.0;
        for (long long kj : k) sum += std::pow(static_cast<double>(std::llabs(kj)), f.r);
        return std::pow(1.0 + sum, e);
    }
    double prod = 1.0;
    for (long long kj : k)
        prod *= std::pow(1.0 + std::pow(static_cast<double>(std::llabs(kj)), f.r), e);
    return prod;
}

bool check_summability(const WeightFamily& f, double q) {
    if (!(q >= 1.0)) throw DomainError("check_summability: q must be >= 1");
    validate(f);
    const double qs = q * f.s;
    return (f.kind == Kind::Isotropic) ? qs > static_cast<double>(f.d) : qs > 1.0;
}

}  // namespace sobnum
