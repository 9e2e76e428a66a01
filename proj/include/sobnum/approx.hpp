#pragma once

#include <cstdint>
#include <string>

#include "sobnum/tails.hpp"
#include "sobnum/weights.hpp"

namespace sobnum {

// Target space of the embedding. Linf, Continuous, Wiener, B0inf1 and the two
// dual targets all share one value (the q=2 tail); they are kept distinct so
// callers can say what they mean. Lp carries its exponent.
struct TargetSpace {
    enum class Tag {
        L2,
        Linf,
        Continuous,
        Wiener,
        B0inf1,
        Lp,
        DualMeasuresToF,
        DualBToF,
    };

    Tag tag = Tag::L2;
    double p = 0.0;  // only for Lp, must lie in (2, inf)

    static TargetSpace l2() { return {Tag::L2, 0.0}; }
    static TargetSpace linf() { return {Tag::Linf, 0.0}; }
    static TargetSpace continuous() { return {Tag::Continuous, 0.0}; }
    static TargetSpace wiener() { return {Tag::Wiener, 0.0}; }
    static TargetSpace b0inf1() { return {Tag::B0inf1, 0.0}; }
    static TargetSpace lp(double p) { return {Tag::Lp, p}; }
    static TargetSpace dual_measures() { return {Tag::DualMeasuresToF, 0.0}; }
    static TargetSpace dual_b() { return {Tag::DualBToF, 0.0}; }

    std::string name() const;
};

TargetSpace parse_target(const std::string& s);

enum class Exactness { Equality, UpperBound };

struct ApproxResult {
    WeightFamily family;
    std::uint64_t n = 0;
    TargetSpace target;
    Enclosure enclosure;
    Exactness exactness = Exactness::Equality;
    bool width_ok = true;
};

// a_n of the embedding into the target space. L2 gives the exact point value
// sigma_n. The sup-norm family of targets gives the q=2 tail enclosure. Lp is
// an upper bound only (the q-tail with 1/q = 1/2 - 1/p).
// Throws EmbeddingError when the required summability fails.
ApproxResult approx_number(const WeightFamily& f, std::uint64_t n, const TargetSpace& target,
                           const TailOptions& opts = {});

}  // namespace sobnum
