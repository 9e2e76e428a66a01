#include "sobnum/tails.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>

#include "sobnum/errors.hpp"

namespace sobnum {

namespace {

// 1-d factor weight: (1+m^r)^(s/r), or max(1,m)^s for r = inf.
double factor_weight(const WeightFamily& f, long long m) {
    if (f.r_infinite()) return std::pow(static_cast<double>(std::max(1LL, m)), f.s);
    return std::pow(1.0 + std::pow(static_cast<double>(m), f.r), f.s / f.r);
}

struct OneDimSum {
    double finite;  // sum over |m| <= M of g(m)^(-q), level-ordered Kahan
    double rem_lo;  // certified bounds for the remainder over |m| > M
    double rem_hi;
};

// Requires qs > 1. Remainder bounds:
//   term(m) = (1+m^r)^(-qs/r) lies in [m^(-qs)(1 - (qs/r) m^(-r)), m^(-qs)],
// and the sum over m > M is sandwiched between the integrals from M+1 (below)
// and from M (above). For r = inf, term(m) = m^(-qs) exactly (m >= 1).
OneDimSum one_dim_sum(const WeightFamily& f, double q, long long M) {
    const double qs = q * f.s;
    Kahan acc;
    acc.add(1.0);  // m = 0
    for (long long m = 1; m <= M; ++m) acc.add(2.0 * std::pow(factor_weight(f, m), -q));
    double rem_lo, rem_hi;
    const double Md = static_cast<double>(M);
    if (f.r_infinite()) {
        rem_lo = 2.0 * std::pow(Md + 1.0, 1.0 - qs) / (qs - 1.0);
        rem_hi = 2.0 * std::pow(Md, 1.0 - qs) / (qs - 1.0);
    } else {
        rem_hi = 2.0 * std::pow(Md, 1.0 - qs) / (qs - 1.0);
        double main = std::pow(Md + 1.0, 1.0 - qs) / (qs - 1.0);
        double corr = (qs / f.r) * std::pow(Md + 1.0, 1.0 - qs - f.r) / (qs - 1.0 + f.r);
        rem_lo = 2.0 * std::max(0.0, main - corr);
    }
    return {acc.sum, rem_lo, rem_hi};
}

// Shell multiplicity of the sup-norm sphere |k|_inf = lam in Z^d (lam >= 2);
// lam = 1 carries the whole cube {-1,0,1}^d.
double inf_shell_mult(int d, long long lam) {
    double outer = 1.0, inner = 1.0;
    for (int j = 0; j < d; ++j) {
        outer *= static_cast<double>(2 * lam + 1);
        inner *= static_cast<double>(2 * lam - 1);
    }
    return (lam == 1) ? outer : outer - inner;
}

std::uint64_t steps_or_throw(std::uint64_t& steps, std::uint64_t add, const Budget& b) {
    steps += add;
    if (steps > b.max_steps) throw BudgetExceeded("tail engine step budget exceeded");
    return steps;
}

}  // namespace

// ---------------------------------------------------------------------------
// sigma

SigmaValue sigma(const WeightFamily& f, std::uint64_t n, const Budget& budget) {
    validate(f);
    if (n < 1) throw DomainError("sigma: n must be >= 1");

    SigmaValue sv;
    sv.n = n;

    if (f.integer_levels()) {
        Counter c(f, budget);
        long long lo = c.min_level() - 1;
        long long hi = c.min_level();
        while (c.count_level_leq(hi) < n) {
            lo = hi;
            if (hi > (1LL << 61)) throw OverflowError("sigma: level search out of range");
            hi = (hi < 1) ? 1 : hi * 2;
        }
        while (hi - lo > 1) {
            long long mid = lo + (hi - lo) / 2;
            if (c.count_level_leq(mid) >= n)
                hi = mid;
            else
                lo = mid;
        }
        sv.raw_level = hi;
        sv.level = c.weight_of_level(hi);
        sv.value = 1.0 / sv.level;
        sv.rank_first = c.count_level_leq(hi - 1) + 1;
        sv.rank_last = c.count_level_leq(hi);
        return sv;
    }

    // non-integer r: search the materialized level table under an
    // escalating cutoff
    double cutoff = 2.0;
    for (int iter = 0; iter < 200; ++iter, cutoff *= 2.0) {
        LevelTable table = level_multiplicities(f, cutoff, budget);
        if (table.total_count() < n) continue;
        std::uint64_t cum = 0;
        for (const auto& e : table.levels) {
            if (cum + e.multiplicity >= n) {
                sv.raw_level = -1;
                sv.level = e.value;
                sv.value = 1.0 / e.value;
                sv.rank_first = cum + 1;
                sv.rank_last = cum + e.multiplicity;
                return sv;
            }
            cum += e.multiplicity;
        }
    }
    throw BudgetExceeded("sigma: cutoff escalation exhausted");
}

// ---------------------------------------------------------------------------
// exact finite parts

double partial_sum_leq(const WeightFamily& f, double cutoff, double q,
                       const Budget& budget) {
    validate(f);
    LevelTable table = level_multiplicities(f, cutoff, budget);
    Kahan acc;
    for (const auto& e : table.levels)
        acc.add(static_cast<double>(e.multiplicity) * std::pow(e.value, -q));
    return acc.sum;
}

// ---------------------------------------------------------------------------
// tail

namespace {

struct TotalSum {
    double lo = 0.0;
    double hi = 0.0;
    double cutoff_weight = 0.0;
};

// Exact sum over ranks 1..n-1 (prefix levels plus the tied block at t_n).
double excluded_sum(const WeightFamily& f, const SigmaValue& sv, double q,
                    const Budget& budget, std::uint64_t& steps) {
    Kahan acc;
    if (sv.rank_first > 1) {
        if (f.d == 1 && sv.raw_level >= 0) {
            long long m_pref;  // largest m with level(m) < level(n)
            if (f.r_infinite())
                m_pref = sv.raw_level - 1;
            else if (f.kind == Kind::Isotropic)
                m_pref = integer_root(sv.raw_level - 1, static_cast<long long>(f.r));
            else
                m_pref = integer_root(sv.raw_level - 2, static_cast<long long>(f.r));
            steps_or_throw(steps, static_cast<std::uint64_t>(m_pref) + 1, budget);
            acc.add(1.0);
            for (long long m = 1; m <= m_pref; ++m)
                acc.add(2.0 * std::pow(factor_weight(f, m), -q));
        } else if (sv.raw_level < 0) {
            LevelTable t = level_multiplicities(f, sv.level, budget);
            for (const auto& e : t.levels)
                if (e.value < sv.level * (1.0 - kLevelTol))
                    acc.add(static_cast<double>(e.multiplicity) * std::pow(e.value, -q));
        } else if (f.kind == Kind::Isotropic && f.r_infinite()) {
            steps_or_throw(steps, static_cast<std::uint64_t>(sv.raw_level), budget);
            for (long long lam = 1; lam < sv.raw_level; ++lam)
                acc.add(inf_shell_mult(f.d, lam) * std::pow(level_weight(f, lam), -q));
        } else if (f.kind == Kind::Isotropic) {
            auto counts = iso_ball_level_counts(f, sv.raw_level - 1, budget);
            for (long long lam = 0; lam < sv.raw_level; ++lam)
                if (counts[static_cast<std::size_t>(lam)])
                    acc.add(static_cast<double>(counts[static_cast<std::size_t>(lam)]) *
                            std::pow(level_weight(f, lam), -q));
        } else {
            auto counts = mix_level_counts(f, sv.raw_level - 1, budget);
            for (long long u = 1; u < sv.raw_level; ++u)
                if (counts[static_cast<std::size_t>(u)])
                    acc.add(static_cast<double>(counts[static_cast<std::size_t>(u)]) *
                            std::pow(level_weight(f, u), -q));
        }
    }
    // tied block at the cut value: tie order is irrelevant, tied values are equal
    acc.add(static_cast<double>(sv.n - sv.rank_first) * std::pow(sv.level, -q));
    return acc.sum;
}

}  // namespace

TailResult tail(const WeightFamily& f, std::uint64_t n, double q, const TailOptions& opts) {
    validate(f);
    if (n < 1) throw DomainError("tail: n must be >= 1");
    if (!(q >= 1.0)) throw DomainError("tail: q must be >= 1");
    if (!check_summability(f, q))
        throw EmbeddingError("tail: sum_k w(k)^(-" + std::to_string(q) +
                             ") diverges for family " + f.spec() +
                             "; the embedding does not exist");

    const Budget& budget = opts.budget;
    const double qs = q * f.s;
    std::uint64_t steps = 0;

    SigmaValue sv = sigma(f, n, budget);
    const double s_exc = excluded_sum(f, sv, q, budget, steps);

    // Per-structure computation of the total-sum enclosure at a given scale.
    std::function<TotalSum(long long)> compute;
    long long scale0 = 0;

    const bool factorized = (f.d == 1) || (f.kind == Kind::Mixed);
    if (factorized) {
        // 1-d line sums; for mixed d >= 2, the total factorizes as a d-th power
        long long m_cover = 1;
        if (sv.raw_level >= 0) {
            if (f.r_infinite())
                m_cover = sv.raw_level;
            else if (f.kind == Kind::Isotropic && f.d == 1)
                m_cover = integer_root(sv.raw_level, static_cast<long long>(f.r));
            else
                m_cover = integer_root(sv.raw_level - 1, static_cast<long long>(f.r));
        } else {
            m_cover = 2;
            while (factor_weight(f, m_cover) <= sv.level && m_cover < (1LL << 40))
                m_cover *= 2;
        }
        scale0 = std::max<long long>({64, m_cover + 1, static_cast<long long>(
            opts.cutoff_hint > 1.0 ? std::pow(opts.cutoff_hint, 1.0 / f.s) : 0)});
        compute = [&, qs](long long M) -> TotalSum {
            steps_or_throw(steps, static_cast<std::uint64_t>(M), budget);
            OneDimSum one = one_dim_sum(f, q, M);
            TotalSum t;
            if (f.d == 1) {
                t.lo = one.finite + one.rem_lo;
                t.hi = one.finite + one.rem_hi;
            } else {
                t.lo = std::pow(one.finite + one.rem_lo, f.d);
                t.hi = std::pow(one.finite + one.rem_hi, f.d);
            }
            (void)qs;
            t.cutoff_weight = factor_weight(f, M);
            return t;
        };
    } else if (f.r_infinite()) {
        // isotropic sup-norm levels: closed-form cube shells
        scale0 = std::max<long long>(16, sv.raw_level + 1);
        compute = [&, qs](long long K) -> TotalSum {
            steps_or_throw(steps, static_cast<std::uint64_t>(K), budget);
            Kahan acc;
            for (long long lam = 1; lam <= K; ++lam)
                acc.add(inf_shell_mult(f.d, lam) * std::pow(level_weight(f, lam), -q));
            const double Kd = static_cast<double>(K);
            const double dd = static_cast<double>(f.d);
            double rem_lo = 2.0 * dd * std::pow(Kd + 1.0, dd - qs) / (qs - dd);
            double rem_hi =
                2.0 * dd * std::pow(3.0, dd - 1.0) * std::pow(Kd, dd - qs) / (qs - dd);
            return {acc.sum + rem_lo, acc.sum + rem_hi, level_weight(f, K)};
        };
    } else if (f.integer_levels()) {
        // isotropic, finite integer r, d >= 2: exact sum over the box
        // |k|_inf <= K plus the shell remainder outside the box
        const long long r = static_cast<long long>(f.r);
        scale0 = std::max<long long>(8, integer_root(sv.raw_level, r) + 1);
        compute = [&, qs, r](long long K) -> TotalSum {
            auto counts = iso_box_level_counts(f, K, budget);
            steps_or_throw(steps, counts.size(), budget);
            Kahan acc;
            for (std::size_t lam = 0; lam < counts.size(); ++lam)
                if (counts[lam])
                    acc.add(static_cast<double>(counts[lam]) *
                            std::pow(level_weight(f, static_cast<long long>(lam)), -q));
            const double Kd = static_cast<double>(K);
            const double dd = static_cast<double>(f.d);
            double rem_hi =
                2.0 * dd * std::pow(3.0, dd - 1.0) * std::pow(Kd, dd - qs) / (qs - dd);
            return {acc.sum, acc.sum + rem_hi,
                    level_weight(f, ipow_clamped(K, r, 1LL << 62))};
        };
    } else {
        // isotropic non-integer r: materialized level table plus box bound
        scale0 = 2;
        while (std::pow(2.0, static_cast<double>(scale0)) < 2.0 * sv.level) ++scale0;
        compute = [&, qs](long long log2_cutoff) -> TotalSum {
            double cutoff = std::pow(2.0, static_cast<double>(log2_cutoff));
            LevelTable t = level_multiplicities(f, cutoff, budget);
            steps_or_throw(steps, t.levels.size() + 1, budget);
            Kahan acc;
            for (const auto& e : t.levels)
                acc.add(static_cast<double>(e.multiplicity) * std::pow(e.value, -q));
            // every point with all |k_j| <= K has weight <= cutoff
            double lam_cap = std::pow(cutoff, f.r / f.s) - 1.0;
            double K = std::floor(std::pow(lam_cap / f.d, 1.0 / f.r));
            if (K < 1.0) K = 1.0;
            const double dd = static_cast<double>(f.d);
            double rem_hi = 2.0 * dd * std::pow(3.0, dd - 1.0) * std::pow(K, dd - qs) /
                            (qs - dd);
            return {acc.sum, acc.sum + rem_hi, cutoff};
        };
    }

    const bool table_path = !factorized && !f.r_infinite() && !f.integer_levels();
    auto finish = [&](const TotalSum& t) -> TailResult {
        TailResult res;
        double lo_q = std::max(0.0, t.lo - s_exc);
        double hi_q = std::max(lo_q, t.hi - s_exc);
        res.enclosure = {std::pow(lo_q, 1.0 / q), std::pow(hi_q, 1.0 / q)};
        res.width = res.enclosure.width();
        res.cutoff_used = t.cutoff_weight;
        return res;
    };

    std::optional<TailResult> last;
    for (long long scale = scale0; ; scale = table_path ? scale + 1 : scale * 2) {
        TotalSum t;
        try {
            t = compute(scale);
        } catch (const BudgetExceeded&) {
            if (last) break;
            throw;
        } catch (const MemoryBudgetError&) {
            if (last) break;
            throw;
        }
        TailResult res = finish(t);
        // the target is met both relative to the value and absolutely, so
        // widths stay below the tolerance even for values above 1
        res.width_ok =
            res.width <= opts.rel_width * std::min(std::max(res.enclosure.hi, 1e-300), 1.0);
        last = res;
        if (res.width_ok) return res;
        if (scale > (1LL << 40)) break;
    }
    last->width_ok = false;
    return *last;
}

}  // namespace sobnum
