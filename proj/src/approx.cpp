#include "sobnum/approx.hpp"

#include <cmath>

#include "sobnum/errors.hpp"

namespace sobnum {

std::string TargetSpace::name() const {
    switch (tag) {
        case Tag::L2: return "L2";
        case Tag::Linf: return "Linf";
        case Tag::Continuous: return "C";
        case Tag::Wiener: return "A";
        case Tag::B0inf1: return "B0inf1";
        case Tag::Lp: return "L" + std::to_string(p);
        case Tag::DualMeasuresToF: return "dual-M";
        case Tag::DualBToF: return "dual-B";
    }
    throw DomainError("unknown target tag");
}

TargetSpace parse_target(const std::string& s) {
    if (s == "L2" || s == "l2") return TargetSpace::l2();
    if (s == "Linf" || s == "linf") return TargetSpace::linf();
    if (s == "C" || s == "c") return TargetSpace::continuous();
    if (s == "A" || s == "wiener") return TargetSpace::wiener();
    if (s == "B0inf1" || s == "b0inf1") return TargetSpace::b0inf1();
    if (s == "dual-M") return TargetSpace::dual_measures();
    if (s == "dual-B") return TargetSpace::dual_b();
    if ((s.size() > 1 && (s[0] == 'L' || s[0] == 'l')) || s.rfind("lp:", 0) == 0) {
        std::string num = (s.rfind("lp:", 0) == 0) ? s.substr(3) : s.substr(1);
        try {
            size_t pos = 0;
            double p = std::stod(num, &pos);
            if (pos == num.size() && p > 2.0 && std::isfinite(p)) return TargetSpace::lp(p);
        } catch (const std::exception&) {
        }
    }
    throw ParseError("unknown target space: " + s);
}

ApproxResult approx_number(const WeightFamily& f, std::uint64_t n, const TargetSpace& target,
                           const TailOptions& opts) {
    if (n == 0) throw DomainError("approx_number requires n >= 1");
    ApproxResult res;
    res.family = f;
    res.n = n;
    res.target = target;

    switch (target.tag) {
        case TargetSpace::Tag::L2: {
            SigmaValue sv = sigma(f, n, opts.budget);
            res.enclosure = {sv.value, sv.value};
            res.exactness = Exactness::Equality;
            return res;
        }
        case TargetSpace::Tag::Linf:
        case TargetSpace::Tag::Continuous:
        case TargetSpace::Tag::Wiener:
        case TargetSpace::Tag::B0inf1:
        case TargetSpace::Tag::DualMeasuresToF:
        case TargetSpace::Tag::DualBToF: {
            TailResult t = tail(f, n, 2.0, opts);  // throws EmbeddingError if not summable
            res.enclosure = t.enclosure;
            res.exactness = Exactness::Equality;
            res.width_ok = t.width_ok;
            return res;
        }
        case TargetSpace::Tag::Lp: {
            if (!(target.p > 2.0) || std::isinf(target.p))
                throw DomainError("Lp target requires 2 < p < inf");
            double q = 1.0 / (0.5 - 1.0 / target.p);
            TailResult t = tail(f, n, q, opts);
            res.enclosure = t.enclosure;
            res.exactness = Exactness::UpperBound;
            res.width_ok = t.width_ok;
            return res;
        }
    }
    throw DomainError("unknown target tag");
}

}  // namespace sobnum
