#include "sobnum/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <mutex>
#include <thread>

#include "sobnum/errors.hpp"

namespace sobnum {

namespace {

// Collect 1/w over all points with w <= cap, one entry per lattice point.
// Enumerates the nonnegative orthant recursively and expands sign choices
// through the multiplicity 2^(#nonzero).
struct BruteEnumerator {
    const WeightFamily& f;
    const Budget& budget;
    std::uint64_t steps = 0;
    std::vector<double> values;

    void step() {
        if (++steps > budget.max_steps) throw BudgetExceeded("brute_sigma: step budget");
    }

    void push(double value, int nonzero) {
        std::uint64_t mult = 1ULL << nonzero;
        for (std::uint64_t i = 0; i < mult; ++i) values.push_back(value);
    }

    // isotropic: track S = sum |k_j|^r against S_max = cap^{r/s} - 1
    void iso(int dim, double S, double S_max, int nonzero) {
        for (long long k = 0;; ++k) {
            step();
            double S2 = S + (k > 0 ? std::pow(double(k), f.r) : 0.0);
            if (S2 > S_max) break;
            if (dim + 1 == f.d)
                push(std::pow(1.0 + S2, -f.s / f.r), nonzero + (k > 0));
            else
                iso(dim + 1, S2, S_max, nonzero + (k > 0));
        }
    }

    // isotropic r = inf: box |k|_inf <= K, w = max(1,|k|_inf)^s
    void iso_inf(int dim, long long K, long long cur_max, int nonzero) {
        for (long long k = 0; k <= K; ++k) {
            step();
            long long m = std::max(cur_max, std::max(k, 1LL));
            if (dim + 1 == f.d)
                push(std::pow(double(m), -f.s), nonzero + (k > 0));
            else
                iso_inf(dim + 1, K, m, nonzero + (k > 0));
        }
    }

    // mixed: track the running product of per-coordinate factors
    void mix(int dim, double prod, double cap, int nonzero) {
        for (long long k = 0;; ++k) {
            step();
            double factor;
            if (f.r_infinite())
                factor = std::pow(double(std::max(k, 1LL)), f.s);
            else
                factor = std::pow(1.0 + std::pow(double(k), f.r), f.s / f.r);
            double p2 = prod * factor;
            if (p2 > cap) break;
            if (dim + 1 == f.d)
                push(1.0 / p2, nonzero + (k > 0));
            else
                mix(dim + 1, p2, cap, nonzero + (k > 0));
        }
    }

    void run(double cap) {
        values.clear();
        if (f.kind == Kind::Isotropic) {
            if (f.r_infinite()) {
                long long K = (long long)std::floor(std::pow(cap, 1.0 / f.s) * (1.0 + 1e-15));
                if (K < 0) K = 0;
                iso_inf(0, K, 0, 0);
            } else {
                double S_max = std::pow(cap, f.r / f.s) - 1.0;
                if (S_max < 0.0) return;
                iso(0, 0.0, S_max, 0);
            }
        } else {
            mix(0, 1.0, cap, 0);
        }
    }
};

}  // namespace

std::vector<double> brute_sigma(const WeightFamily& f, std::uint64_t n_max,
                                const Budget& budget) {
    validate(f);
    if (n_max < 1) throw DomainError("brute_sigma: n_max must be >= 1");

    // Every excluded point has w > cap, hence 1/w strictly below every kept
    // value; once we keep >= n_max points the top n_max are globally correct.
    BruteEnumerator e{f, budget, 0, {}};
    for (double cap = 2.0;; cap *= 2.0) {
        e.run(cap);
        if (e.values.size() >= n_max) break;
        if (cap > 1e300) throw BudgetExceeded("brute_sigma: cap escalation exhausted");
    }
    std::sort(e.values.begin(), e.values.end(), std::greater<double>());
    e.values.resize(n_max);
    return e.values;
}

std::vector<std::uint64_t> geometric_grid(std::uint64_t n_min, std::uint64_t n_max,
                                          int points_per_decade) {
    if (n_min < 1 || n_max < n_min) throw DomainError("geometric_grid: bad range");
    if (points_per_decade < 1) throw DomainError("geometric_grid: bad density");
    std::vector<std::uint64_t> grid;
    grid.push_back(n_min);
    double lg_min = std::log10(double(n_min));
    double lg_max = std::log10(double(n_max));
    long long k_lo = (long long)std::ceil(lg_min * points_per_decade);
    long long k_hi = (long long)std::floor(lg_max * points_per_decade);
    for (long long k = k_lo; k <= k_hi; ++k) {
        auto n = (std::uint64_t)std::llround(std::pow(10.0, double(k) / points_per_decade));
        if (n > grid.back() && n <= n_max) grid.push_back(n);
    }
    if (grid.back() != n_max) grid.push_back(n_max);
    return grid;
}

CertificationReport certify(const BoundCertificate& cert, const WeightFamily& f,
                            std::uint64_t n_min, std::uint64_t n_max,
                            const Sampling& sampling, int threads, const Budget& budget) {
    validate(f);
    if (n_min < 1 || n_max < n_min) throw DomainError("certify: bad n range");
    if (threads < 1) threads = 1;

    CertificationReport rep;
    rep.certificate = cert;
    rep.family = f;
    rep.n_min = n_min;
    rep.n_max = n_max;

    // exhaustive below 1024, geometric above
    std::vector<std::uint64_t> ns;
    std::uint64_t dense_hi = sampling.exhaustive ? n_max : std::min<std::uint64_t>(n_max, 1023);
    for (std::uint64_t n = n_min; n <= dense_hi; ++n) ns.push_back(n);
    if (!sampling.exhaustive && n_max >= 1024) {
        auto geo = geometric_grid(std::max<std::uint64_t>(n_min, 1024), n_max,
                                  sampling.points_per_decade);
        for (auto n : geo)
            if (ns.empty() || n > ns.back()) ns.push_back(n);
    }

    const std::uint64_t valid_from = (std::uint64_t)std::max<long long>(cert.min_valid_n(), 1);
    std::vector<std::uint64_t> checked;
    for (auto n : ns) {
        if (n < valid_from)
            ++rep.skipped_below_threshold;
        else
            checked.push_back(n);
    }

    std::vector<CertificationReport::Point> pts(checked.size());
    auto eval = [&](std::size_t i) {
        std::uint64_t n = checked[i];
        std::uint64_t idx = n + (std::uint64_t)cert.index_shift;
        double lo, hi;
        switch (cert.comparand) {
            case Comparand::SigmaL2: {
                SigmaValue sv = sigma(f, idx, budget);
                lo = hi = sv.value;
                break;
            }
            case Comparand::TailLinf: {
                TailOptions opts;
                opts.budget = budget;
                TailResult t = tail(f, idx, 2.0, opts);
                lo = t.enclosure.lo;
                hi = t.enclosure.hi;
                break;
            }
            case Comparand::TailLp: {
                double q = 1.0 / (0.5 - 1.0 / cert.p);
                TailOptions opts;
                opts.budget = budget;
                TailResult t = tail(f, idx, q, opts);
                lo = t.enclosure.lo;
                hi = t.enclosure.hi;
                break;
            }
            default:
                throw DomainError("certify: unknown comparand");
        }
        double bound = cert.rhs(double(n));
        double margin = (cert.side == BoundSide::Upper) ? bound / hi : lo / bound;
        pts[i] = {n, lo, hi, bound, margin};
    };

    if (threads == 1 || checked.size() < 2) {
        for (std::size_t i = 0; i < checked.size(); ++i) eval(i);
    } else {
        std::size_t nthreads = std::min<std::size_t>(threads, checked.size());
        std::vector<std::thread> pool;
        std::exception_ptr err;
        std::mutex err_mu;
        for (std::size_t t = 0; t < nthreads; ++t) {
            pool.emplace_back([&, t] {
                try {
                    for (std::size_t i = t; i < checked.size(); i += nthreads) eval(i);
                } catch (...) {
                    std::lock_guard<std::mutex> g(err_mu);
                    if (!err) err = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        if (err) std::rethrow_exception(err);
    }

    rep.points = std::move(pts);
    rep.checked_points = rep.points.size();
    rep.min_margin = rep.points.empty() ? 0.0 : rep.points[0].margin;
    for (const auto& p : rep.points) {
        rep.min_margin = std::min(rep.min_margin, p.margin);
        bool ok = (cert.side == BoundSide::Upper) ? (p.actual_hi <= p.bound)
                                                  : (p.actual_lo >= p.bound);
        if (!ok) {
            double lhs = (cert.side == BoundSide::Upper) ? p.actual_hi : p.actual_lo;
            rep.failures.push_back({p.n, lhs, p.bound});
        }
    }
    return rep;
}

ConvergenceTrace convergence_trace(const LimitSpec& spec,
                                   const std::vector<std::uint64_t>& n_grid,
                                   const Budget& budget) {
    ConvergenceTrace tr;
    tr.limit_spec = spec;
    WeightFamily f{spec.family_kind, spec.s, spec.r, spec.d};
    validate(f);
    std::uint64_t prev = 0;
    for (auto n : n_grid) {
        if (n <= prev) throw DomainError("convergence_trace: grid must be strictly increasing");
        prev = n;
        double a;
        if (spec.target == LimitTarget::L2) {
            a = sigma(f, n, budget).value;
        } else {
            TailOptions opts;
            opts.budget = budget;
            a = tail(f, n, 2.0, opts).enclosure.mid();
        }
        double denom = spec.constant;
        if (spec.log_exponent != 0.0) denom *= std::pow(std::log(double(n)), spec.log_exponent);
        tr.grid.push_back(n);
        tr.ratios.push_back(std::pow(double(n), spec.rate_exponent) * a / denom);
    }
    return tr;
}

}  // namespace sobnum
