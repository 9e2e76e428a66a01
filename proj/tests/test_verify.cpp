#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "sobnum/errors.hpp"
#include "sobnum/verify.hpp"

using namespace sobnum;

namespace {
const double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("brute_sigma hand values") {
    auto iso = brute_sigma(WeightFamily{Kind::Isotropic, 1.0, 1.0, 1}, 5);
    std::vector<double> iso_expect = {1.0, 0.5, 0.5, 1.0 / 3.0, 1.0 / 3.0};
    CHECK(iso == iso_expect);

    auto mix = brute_sigma(WeightFamily{Kind::Mixed, 1.0, 1.0, 2}, 5);
    std::vector<double> mix_expect = {1.0, 0.5, 0.5, 0.5, 0.5};
    CHECK(mix == mix_expect);
}

TEST_CASE("brute_sigma agrees with the counting engine") {
    for (Kind kind : {Kind::Isotropic, Kind::Mixed})
        for (double r : {1.0, 2.0, kInf})
            for (int d : {1, 2}) {
                WeightFamily f{kind, 1.0, r, d};
                auto brute = brute_sigma(f, 60);
                for (std::uint64_t n = 1; n <= 60; ++n) {
                    double engine = sigma(f, n).value;
                    CAPTURE(f.spec());
                    CAPTURE(n);
                    CHECK(engine == doctest::Approx(brute[n - 1]).epsilon(1e-12));
                }
            }
}

TEST_CASE("partial-sum consistency of brute values and tails") {
    WeightFamily f{Kind::Isotropic, 1.0, 1.0, 1};
    auto brute = brute_sigma(f, 200);
    double head = 0.0;
    for (double v : brute) head += v * v;
    TailResult rest = tail(f, 201, 2.0);
    TailResult whole = tail(f, 1, 2.0);
    double lo = head + rest.enclosure.lo * rest.enclosure.lo;
    double hi = head + rest.enclosure.hi * rest.enclosure.hi;
    CHECK(lo <= whole.enclosure.hi * whole.enclosure.hi * (1.0 + 1e-12));
    CHECK(hi >= whole.enclosure.lo * whole.enclosure.lo * (1.0 - 1e-12));
}

TEST_CASE("geometric grid") {
    auto g = geometric_grid(1000, 100000, 64);
    CHECK(g.front() == 1000);
    CHECK(g.back() == 100000);
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
    // about 64 points per decade over two decades
    CHECK(g.size() >= 120);
    CHECK(g.size() <= 132);
    CHECK_THROWS_AS(geometric_grid(10, 5, 64), DomainError);
}

TEST_CASE("certification report structure") {
    WeightFamily f{Kind::Isotropic, 1.0, 2.0, 1};
    BoundCertificate cert = explicit_bound(BoundName::Prop2Upper, 1, 1.0);
    CertificationReport rep = certify(cert, f, 10, 2000);
    CHECK(rep.passed());
    CHECK(rep.failures.empty());
    CHECK(rep.min_margin >= 1.0);
    // n in [10, 14] are below the validity threshold
    CHECK(rep.skipped_below_threshold == 5);
    // exhaustive below 1024: 1024 - 15 = 1009 dense points, plus sampled ones
    CHECK(rep.checked_points >= 1009);
    std::uint64_t prev = 0;
    for (const auto& p : rep.points) {
        CHECK(p.n > prev);
        prev = p.n;
        CHECK(p.margin == p.bound / p.actual_hi);
    }
}

TEST_CASE("failing certificates are reported honestly") {
    WeightFamily f{Kind::Isotropic, 1.0, 2.0, 1};
    BoundCertificate cert = explicit_bound(BoundName::Prop2Upper, 1, 1.0);
    cert.coefficient = 1e-3;  // absurd bound, must fail everywhere
    CertificationReport rep = certify(cert, f, 20, 100);
    CHECK_FALSE(rep.passed());
    CHECK(rep.failures.size() == rep.checked_points);
    CHECK(rep.min_margin < 1.0);
    for (const auto& fl : rep.failures) CHECK(fl.lhs > fl.rhs);
}

TEST_CASE("certification is deterministic under threading") {
    WeightFamily f{Kind::Mixed, 1.0, 2.0, 1};
    BoundCertificate cert = explicit_bound(BoundName::Cor12Upper, 1, 1.0);
    CertificationReport a = certify(cert, f, 28, 5000, Sampling{}, 1);
    CertificationReport b = certify(cert, f, 28, 5000, Sampling{}, 4);
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        CHECK(a.points[i].n == b.points[i].n);
        CHECK(a.points[i].actual_lo == b.points[i].actual_lo);
        CHECK(a.points[i].actual_hi == b.points[i].actual_hi);
        CHECK(a.points[i].margin == b.points[i].margin);
    }
    CHECK(a.min_margin == b.min_margin);
}

TEST_CASE("lower bounds use the lo endpoint") {
    WeightFamily f{Kind::Isotropic, 1.0, 2.0, 1};
    BoundCertificate cert = explicit_bound(BoundName::Cor1Lower, 1, 1.0);
    CertificationReport rep = certify(cert, f, 19, 500);
    CHECK(rep.passed());
    for (const auto& p : rep.points) CHECK(p.margin == p.actual_lo / p.bound);
}

TEST_CASE("convergence traces approach 1") {
    LimitSpec l2 = limit_constant(Kind::Isotropic, LimitTarget::L2, 1.0, 2.0, 1);
    ConvergenceTrace t2 = convergence_trace(l2, {100, 1000, 10000});
    CHECK(t2.ratios.back() == doctest::Approx(1.0).epsilon(0.02));

    LimitSpec li = limit_constant(Kind::Isotropic, LimitTarget::Linf, 1.0, 2.0, 1);
    ConvergenceTrace ti = convergence_trace(li, {100, 1000, 10000});
    CHECK(ti.ratios.back() == doctest::Approx(1.0).epsilon(0.02));
    for (double r : ti.ratios) CHECK(r > 0.0);

    CHECK_THROWS_AS(convergence_trace(l2, {100, 100}), DomainError);
}
