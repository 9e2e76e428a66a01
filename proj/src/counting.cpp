#include "sobnum/counting.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <unordered_map>

#include "sobnum/errors.hpp"

namespace sobnum {

namespace {

constexpr long long kLevelCap = std::numeric_limits<long long>::max() / 4;

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t out;
    if (__builtin_add_overflow(a, b, &out))
        throw OverflowError("lattice count overflows 64-bit counter");
    return out;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t out;
    if (__builtin_mul_overflow(a, b, &out))
        throw OverflowError("lattice count overflows 64-bit counter");
    return out;
}

}  // namespace

long long ipow_clamped(long long m, long long r, long long cap) {
    long long acc = 1;
    for (long long i = 0; i < r; ++i) {
        if (m != 0 && acc > cap / m) return cap + 1;
        acc *= m;
    }
    return acc;
}

long long integer_root(long long x, long long r) {
    if (x < 0) return -1;
    if (r == 1) return x;
    long long est = static_cast<long long>(std::floor(std::pow(static_cast<double>(x),
                                                               1.0 / static_cast<double>(r))));
    est = std::max(0LL, est - 2);
    while (ipow_clamped(est + 1, r, x) <= x) ++est;
    return est;
}

std::uint64_t LevelTable::total_count() const {
    std::uint64_t n = 0;
    for (const auto& e : levels) n = checked_add(n, e.multiplicity);
    return n;
}

// ---------------------------------------------------------------------------
// Counter

struct Counter::Impl {
    long long r_int = 0;  // integer r, 0 when r is non-integer, -1 for inf
    std::uint64_t steps = 0;
    // memo[dim] for the coordinate recursions, dim >= 2
    std::vector<std::unordered_map<long long, std::uint64_t>> memo;

    void tick(std::uint64_t n, const Budget& b) {
        steps += n;
        if (steps > b.max_steps)
            throw BudgetExceeded("counting step budget exceeded (" +
                                 std::to_string(b.max_steps) + " steps)");
    }
};

Counter::Counter(const WeightFamily& f, const Budget& budget)
    : family_(f), budget_(budget), impl_(std::make_unique<Impl>()) {
    validate(f);
    if (f.r_infinite())
        impl_->r_int = -1;
    else if (f.integer_levels())
        impl_->r_int = static_cast<long long>(f.r);
    impl_->memo.resize(static_cast<std::size_t>(f.d) + 1);
}

Counter::~Counter() = default;

std::uint64_t Counter::steps_used() const { return impl_->steps; }

long long Counter::min_level() const {
    return (family_.kind == Kind::Isotropic && !family_.r_infinite()) ? 0 : 1;
}

double level_weight(const WeightFamily& f, long long lam) {
    const long long min_lam = (f.kind == Kind::Isotropic && !f.r_infinite()) ? 0 : 1;
    if (lam < min_lam) return 0.0;
    if (f.r_infinite()) return std::pow(static_cast<double>(lam), f.s);
    if (f.kind == Kind::Isotropic)
        return std::pow(1.0 + static_cast<double>(lam), f.s / f.r);
    return std::pow(static_cast<double>(lam), f.s / f.r);
}

double Counter::weight_of_level(long long lam) const { return level_weight(family_, lam); }

long long Counter::max_level(double t) const {
    if (!family_.integer_levels())
        throw DomainError("max_level: family does not have integer levels");
    const double tcap = t * (1.0 + kLevelTol);
    const auto& f = family_;
    double est;
    if (f.r_infinite())
        est = std::pow(tcap, 1.0 / f.s);
    else if (f.kind == Kind::Isotropic)
        est = std::pow(tcap, f.r / f.s) - 1.0;
    else
        est = std::pow(tcap, f.r / f.s);
    if (est > static_cast<double>(kLevelCap))
        throw OverflowError("max_level: level index exceeds representable range");
    long long cand = static_cast<long long>(std::floor(est));
    cand = std::max(cand, min_level() - 1);
    while (weight_of_level(cand + 1) <= tcap) ++cand;
    while (cand >= min_level() && weight_of_level(cand) > tcap) --cand;
    return cand;  // min_level()-1 means "no level attained"
}

namespace {

// sum |k_j|^r <= budget, integer r
std::uint64_t iso_count_int(int dim, long long budget, long long r, Counter::Impl& im,
                            const Budget& bd) {
    if (budget < 0) return 0;
    if (dim == 0) return 1;
    if (dim == 1) return 1 + 2 * static_cast<std::uint64_t>(integer_root(budget, r));
    auto& memo = im.memo[static_cast<std::size_t>(dim)];
    if (auto it = memo.find(budget); it != memo.end()) return it->second;
    std::uint64_t res = iso_count_int(dim - 1, budget, r, im, bd);
    for (long long m = 1;; ++m) {
        long long mr = ipow_clamped(m, r, budget);
        if (mr > budget) break;
        im.tick(1, bd);
        res = checked_add(res, checked_mul(2, iso_count_int(dim - 1, budget - mr, r, im, bd)));
    }
    memo.emplace(budget, res);
    return res;
}

// prod(1+|k_j|^r) <= U (finite integer r) or prod max(1,|k_j|) <= U (r = inf)
std::uint64_t mix_count_int(int dim, long long U, long long r, Counter::Impl& im,
                            const Budget& bd) {
    const bool inf = (r == -1);
    if (U < 1) return 0;
    if (dim == 1) {
        if (inf) return checked_mul(2, static_cast<std::uint64_t>(U)) + 1;
        return 1 + 2 * static_cast<std::uint64_t>(integer_root(U - 1, r));
    }
    auto& memo = im.memo[static_cast<std::size_t>(dim)];
    if (auto it = memo.find(U); it != memo.end()) return it->second;
    std::uint64_t res =
        checked_mul(inf ? 3 : 1, mix_count_int(dim - 1, U, r, im, bd));
    if (inf || r == 1) {
        // factor values f = 2..U, grouped by equal quotient
        for (long long fv = 2; fv <= U;) {
            long long q = U / fv;
            long long f2 = U / q;
            im.tick(1, bd);
            std::uint64_t block = checked_mul(static_cast<std::uint64_t>(f2 - fv + 1),
                                              mix_count_int(dim - 1, q, r, im, bd));
            res = checked_add(res, checked_mul(2, block));
            fv = f2 + 1;
        }
    } else {
        for (long long m = 1;; ++m) {
            long long f = ipow_clamped(m, r, U - 1) + 1;
            if (f > U) break;
            im.tick(1, bd);
            res = checked_add(res,
                              checked_mul(2, mix_count_int(dim - 1, U / f, r, im, bd)));
        }
    }
    memo.emplace(U, res);
    return res;
}

// non-integer r fallbacks, real-valued level budgets
std::uint64_t iso_count_real(int dim, double rem, double r, Counter::Impl& im,
                             const Budget& bd) {
    if (rem < 0) return 0;
    if (dim == 0) return 1;
    std::uint64_t res = iso_count_real(dim - 1, rem, r, im, bd);
    for (long long m = 1;; ++m) {
        double mr = std::pow(static_cast<double>(m), r);
        if (mr > rem) break;
        im.tick(1, bd);
        res = checked_add(res, checked_mul(2, iso_count_real(dim - 1, rem - mr, r, im, bd)));
    }
    return res;
}

std::uint64_t mix_count_real(int dim, double rem, double r, Counter::Impl& im,
                             const Budget& bd) {
    if (rem < 1.0) return 0;
    if (dim == 0) return 1;
    std::uint64_t res = mix_count_real(dim - 1, rem, r, im, bd);
    for (long long m = 1;; ++m) {
        double f = 1.0 + std::pow(static_cast<double>(m), r);
        if (f > rem) break;
        im.tick(1, bd);
        res = checked_add(res, checked_mul(2, mix_count_real(dim - 1, rem / f, r, im, bd)));
    }
    return res;
}

}  // namespace

std::uint64_t Counter::count_level_leq(long long lam) {
    if (!family_.integer_levels())
        throw DomainError("count_level_leq: family does not have integer levels");
    if (lam < min_level()) return 0;
    const auto& f = family_;
    if (f.kind == Kind::Isotropic) {
        if (f.r_infinite()) {
            // all k with max(1,|k|_inf) <= lam: the box of radius lam
            std::uint64_t side = 2 * static_cast<std::uint64_t>(lam) + 1;
            std::uint64_t res = 1;
            for (int j = 0; j < f.d; ++j) res = checked_mul(res, side);
            return res;
        }
        return iso_count_int(f.d, lam, impl_->r_int, *impl_, budget_);
    }
    return mix_count_int(f.d, lam, impl_->r_int, *impl_, budget_);
}

std::uint64_t Counter::count_leq(double t) {
    if (t < 1.0) return 0;
    const auto& f = family_;
    if (f.integer_levels()) {
        long long lam = max_level(t);
        if (lam < min_level()) return 0;
        return count_level_leq(lam);
    }
    const double tcap = t * (1.0 + kLevelTol);
    if (f.kind == Kind::Isotropic) {
        double rem = std::pow(tcap, f.r / f.s) - 1.0;
        return iso_count_real(f.d, rem, f.r, *impl_, budget_);
    }
    double rem = std::pow(tcap, f.r / f.s);
    return mix_count_real(f.d, rem, f.r, *impl_, budget_);
}

// ---------------------------------------------------------------------------
// Persistent count cache (optimization only; keyed exactly, never changes
// results).

namespace {

class CountCache {
public:
    static CountCache& instance() {
        static CountCache c;
        return c;
    }

    bool enabled() const { return !dir_.empty(); }

    bool lookup(const std::string& fam_id, double t, std::uint64_t& out) {
        std::lock_guard<std::mutex> lock(mu_);
        auto& m = load(fam_id);
        auto it = m.find(key(t));
        if (it == m.end()) return false;
        out = it->second;
        return true;
    }

    void store(const std::string& fam_id, double t, std::uint64_t count) {
        std::lock_guard<std::mutex> lock(mu_);
        auto& m = load(fam_id);
        std::string k = key(t);
        if (!m.emplace(k, count).second) return;
        std::ofstream out(path(fam_id), std::ios::app);
        if (out) out << k << ' ' << count << '\n';
    }

private:
    CountCache() {
        if (const char* env = std::getenv("SOBNUM_CACHE_DIR")) dir_ = env;
    }

    static std::string key(double t) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%a", t);
        return buf;
    }

    std::string path(const std::string& fam_id) const {
        return dir_ + "/" + fam_id + ".counts";
    }

    std::unordered_map<std::string, std::uint64_t>& load(const std::string& fam_id) {
        auto [it, inserted] = maps_.try_emplace(fam_id);
        if (inserted) {
            std::ifstream in(path(fam_id));
            std::string k;
            std::uint64_t v;
            while (in >> k >> v) it->second.emplace(k, v);
        }
        return it->second;
    }

    std::mutex mu_;
    std::string dir_;
    std::map<std::string, std::unordered_map<std::string, std::uint64_t>> maps_;
};

}  // namespace

std::uint64_t count_leq(const WeightFamily& f, double t, const Budget& budget) {
    auto& cache = CountCache::instance();
    if (cache.enabled()) {
        std::uint64_t hit;
        if (cache.lookup(f.id(), t, hit)) return hit;
    }
    Counter c(f, budget);
    std::uint64_t n = c.count_leq(t);
    if (cache.enabled()) cache.store(f.id(), t, n);
    return n;
}

// ---------------------------------------------------------------------------
// Per-level count arrays

namespace {

struct StepGuard {
    std::uint64_t steps = 0;
    const Budget& budget;
    explicit StepGuard(const Budget& b) : budget(b) {}
    void tick() {
        if (++steps > budget.max_steps)
            throw BudgetExceeded("level enumeration step budget exceeded");
    }
};

void check_entries(std::uint64_t n, const Budget& b, const char* what) {
    if (n > b.max_level_entries)
        throw MemoryBudgetError(std::string(what) + ": level array of " + std::to_string(n) +
                                " entries exceeds memory budget of " +
                                std::to_string(b.max_level_entries));
}

void iso_orthant_rec(int dim, long long acc, std::uint64_t mult, long long r,
                     long long lam_cap, long long coord_cap,
                     std::vector<std::uint64_t>& counts, StepGuard& g) {
    if (dim == 0) {
        counts[static_cast<std::size_t>(acc)] += mult;
        return;
    }
    iso_orthant_rec(dim - 1, acc, mult, r, lam_cap, coord_cap, counts, g);
    for (long long m = 1; m <= coord_cap; ++m) {
        long long mr = ipow_clamped(m, r, lam_cap);
        if (acc + mr > lam_cap || mr > lam_cap) break;
        g.tick();
        iso_orthant_rec(dim - 1, acc + mr, 2 * mult, r, lam_cap, coord_cap, counts, g);
    }
}

}  // namespace

std::vector<std::uint64_t> iso_ball_level_counts(const WeightFamily& f, long long lam_max,
                                                 const Budget& budget) {
    if (f.kind != Kind::Isotropic || f.r_infinite() || !f.integer_levels())
        throw DomainError("iso_ball_level_counts: needs isotropic family with integer finite r");
    if (lam_max < 0) return {};
    check_entries(static_cast<std::uint64_t>(lam_max) + 1, budget, "iso_ball_level_counts");
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(lam_max) + 1, 0);
    StepGuard g(budget);
    iso_orthant_rec(f.d, 0, 1, static_cast<long long>(f.r), lam_max,
                    std::numeric_limits<long long>::max(), counts, g);
    return counts;
}

std::vector<std::uint64_t> iso_box_level_counts(const WeightFamily& f, long long box_radius,
                                                const Budget& budget) {
    if (f.kind != Kind::Isotropic || f.r_infinite() || !f.integer_levels())
        throw DomainError("iso_box_level_counts: needs isotropic family with integer finite r");
    const long long r = static_cast<long long>(f.r);
    long long per_coord = ipow_clamped(box_radius, r, kLevelCap);
    if (per_coord > kLevelCap / f.d)
        throw OverflowError("iso_box_level_counts: box level range overflows");
    long long lam_max = per_coord * f.d;
    check_entries(static_cast<std::uint64_t>(lam_max) + 1, budget, "iso_box_level_counts");
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(lam_max) + 1, 0);
    StepGuard g(budget);
    iso_orthant_rec(f.d, 0, 1, r, lam_max, box_radius, counts, g);
    return counts;
}

std::vector<std::uint64_t> mix_level_counts(const WeightFamily& f, long long u_max,
                                            const Budget& budget) {
    if (f.kind != Kind::Mixed || !f.integer_levels())
        throw DomainError("mix_level_counts: needs mixed family with integer levels");
    if (u_max < 1) return {};
    check_entries(static_cast<std::uint64_t>(u_max) + 1, budget, "mix_level_counts");
    const bool inf = f.r_infinite();
    const long long r = inf ? -1 : static_cast<long long>(f.r);
    const std::size_t n = static_cast<std::size_t>(u_max) + 1;
    StepGuard g(budget);

    std::vector<std::uint64_t> cur(n, 0), next(n, 0);
    cur[1] = 1;  // empty product
    for (int dim = 0; dim < f.d; ++dim) {
        std::fill(next.begin(), next.end(), 0);
        // factor value 1: m = 0, plus m = +-1 in the r=inf convention
        const std::uint64_t unit_mult = inf ? 3 : 1;
        for (std::size_t u = 1; u < n; ++u) next[u] = checked_mul(unit_mult, cur[u]);
        // factor values > 1
        for (long long m = inf ? 2 : 1;; ++m) {
            long long fv = inf ? m : ipow_clamped(m, r, u_max - 1) + 1;
            if (fv > u_max) break;
            for (long long q = 1; fv * q <= u_max; ++q) {
                g.tick();
                if (cur[static_cast<std::size_t>(q)])
                    next[static_cast<std::size_t>(fv * q)] = checked_add(
                        next[static_cast<std::size_t>(fv * q)],
                        checked_mul(2, cur[static_cast<std::size_t>(q)]));
            }
        }
        cur.swap(next);
    }
    return cur;
}

// ---------------------------------------------------------------------------
// Level tables

namespace {

void brute_levels_rec_iso(const WeightFamily& f, int dim, double acc, std::uint64_t mult,
                          double level_cap, std::vector<std::pair<double, std::uint64_t>>& out,
                          StepGuard& g, const Budget& budget) {
    if (dim == 0) {
        out.emplace_back(acc, mult);
        check_entries(out.size(), budget, "level_multiplicities");
        return;
    }
    brute_levels_rec_iso(f, dim - 1, acc, mult, level_cap, out, g, budget);
    for (long long m = 1;; ++m) {
        double mr = std::pow(static_cast<double>(m), f.r);
        if (acc + mr > level_cap) break;
        g.tick();
        brute_levels_rec_iso(f, dim - 1, acc + mr, 2 * mult, level_cap, out, g, budget);
    }
}

void brute_levels_rec_mix(const WeightFamily& f, int dim, double acc, std::uint64_t mult,
                          double level_cap, std::vector<std::pair<double, std::uint64_t>>& out,
                          StepGuard& g, const Budget& budget) {
    if (dim == 0) {
        out.emplace_back(acc, mult);
        check_entries(out.size(), budget, "level_multiplicities");
        return;
    }
    brute_levels_rec_mix(f, dim - 1, acc, mult, level_cap, out, g, budget);
    for (long long m = 1;; ++m) {
        double fv = 1.0 + std::pow(static_cast<double>(m), f.r);
        if (acc * fv > level_cap) break;
        g.tick();
        brute_levels_rec_mix(f, dim - 1, acc * fv, 2 * mult, level_cap, out, g, budget);
    }
}

}  // namespace

LevelTable level_multiplicities(const WeightFamily& f, double cutoff, const Budget& budget) {
    validate(f);
    if (cutoff < 1.0) throw DomainError("level_multiplicities: cutoff must be >= 1");
    LevelTable table;
    table.family = f;
    table.cutoff = cutoff;

    if (f.integer_levels()) {
        Counter counter(f, budget);
        long long lam_max = counter.max_level(cutoff);
        if (lam_max < counter.min_level()) return table;

        if (f.kind == Kind::Isotropic && f.r_infinite()) {
            check_entries(static_cast<std::uint64_t>(lam_max), budget, "level_multiplicities");
            for (long long lam = 1; lam <= lam_max; ++lam) {
                std::uint64_t inner = 1, outer = 1;
                for (int j = 0; j < f.d; ++j) {
                    outer = checked_mul(outer, 2 * static_cast<std::uint64_t>(lam) + 1);
                    inner = checked_mul(inner, 2 * static_cast<std::uint64_t>(lam) - 1);
                }
                std::uint64_t mult = (lam == 1) ? outer : outer - inner;
                table.levels.push_back({counter.weight_of_level(lam), lam, mult});
            }
            return table;
        }

        std::vector<std::uint64_t> counts =
            (f.kind == Kind::Isotropic) ? iso_ball_level_counts(f, lam_max, budget)
                                        : mix_level_counts(f, lam_max, budget);
        for (long long lam = counter.min_level(); lam <= lam_max; ++lam)
            if (counts[static_cast<std::size_t>(lam)])
                table.levels.push_back({counter.weight_of_level(lam), lam,
                                        counts[static_cast<std::size_t>(lam)]});
        return table;
    }

    // non-integer r: enumerate attained level values and merge ties
    const double tcap = cutoff * (1.0 + kLevelTol);
    std::vector<std::pair<double, std::uint64_t>> raw;
    StepGuard g(budget);
    const double e = f.s / f.r;
    if (f.kind == Kind::Isotropic) {
        double level_cap = std::pow(tcap, 1.0 / e) - 1.0;
        brute_levels_rec_iso(f, f.d, 0.0, 1, level_cap, raw, g, budget);
        for (auto& p : raw) p.first = std::pow(1.0 + p.first, e);
    } else {
        double level_cap = std::pow(tcap, 1.0 / e);
        brute_levels_rec_mix(f, f.d, 1.0, 1, level_cap, raw, g, budget);
        for (auto& p : raw) p.first = std::pow(p.first, e);
    }
    std::sort(raw.begin(), raw.end());
    for (const auto& [value, mult] : raw) {
        if (!table.levels.empty() &&
            value <= table.levels.back().value * (1.0 + kLevelTol))
            table.levels.back().multiplicity =
                checked_add(table.levels.back().multiplicity, mult);
        else
            table.levels.push_back({value, -1, mult});
    }
    return table;
}

}  // namespace sobnum
