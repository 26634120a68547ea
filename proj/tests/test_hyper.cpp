#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "qmt/hyper.hpp"

using namespace qmt;

static const bool kInit = [] {
    set_precision(50);
    return true;
}();

namespace {

Real rel_err(const HPComplex& a, const HPComplex& b) {
    Real m = std::max(abs(a), abs(b));
    if (m.is_zero())
        return Real(0);
    return abs(a - b) / m;
}

// Independent oracle: bilateral sum term-by-term through qpoch_finite, no
// incremental updates shared with psi2_eval.
HPComplex psi2_direct(const Psi2Spec& s, int nmin, int nmax) {
    HPComplex sum(0);
    for (int n = nmin; n <= nmax; ++n) {
        HPComplex t = pow_int(s.z, n);
        for (const Param* a : {&s.a1, &s.a2}) {
            if (a->infinite) {
                // (-1)^n q^{n(n-1)/2}
                long e = static_cast<long>(n) * (n - 1) / 2;
                t *= pow_int(s.base.qk(), e);
                if (n % 2 != 0)
                    t = -t;
            } else {
                t *= qpoch_finite(a->value, s.base, n);
            }
        }
        t *= qpoch_finite_inverse(s.b1, s.base, n);
        t *= qpoch_finite_inverse(s.b2, s.base, n);
        sum += t;
    }
    return sum;
}

HPComplex phi_direct(const PhiSpec& s, int nmax) {
    HPComplex sum(0);
    for (int n = 0; n <= nmax; ++n) {
        HPComplex t = pow_int(s.z, n);
        for (const Param& a : s.numerators) {
            if (a.infinite) {
                t *= pow_int(s.base.qk(), static_cast<long>(n) * (n - 1) / 2);
                if (n % 2 != 0)
                    t = -t;
            } else {
                t *= qpoch_finite(a.value, s.base, n);
            }
        }
        for (const HPComplex& b : s.denominators)
            t *= qpoch_finite_inverse(b, s.base, n);
        t *= qpoch_finite_inverse(s.base.qk(), s.base, n);
        sum += t;
    }
    return sum;
}

} // namespace

TEST_CASE("phi: only the n=0 term survives at z=0") {
    TruncationPolicy pol = TruncationPolicy::defaults();
    PhiSpec s{{Param(HPComplex(Real("0.2"))), Param(HPComplex(Real("0.7")))},
              {HPComplex(Real("0.3"))},
              QBase(HPComplex(Real("0.4")), 1),
              HPComplex(0)};
    CHECK(phi_eval(s, pol).value == HPComplex(1));
}

TEST_CASE("phi: Euler sum 1phi0(0;;q,z) = 1/(z;q)_inf") {
    TruncationPolicy pol = TruncationPolicy::defaults();
    QBase base(HPComplex(Real("0.5")), 1);
    PhiSpec s{{Param(HPComplex(0))}, {}, base, HPComplex(Real("0.25"))};
    HPComplex lhs = phi_eval(s, pol).value;
    HPComplex rhs = HPComplex(1) / qpoch_infinite(HPComplex(Real("0.25")), base, pol).value;
    CHECK(rel_err(lhs, rhs) < Real("1e-42"));
}

TEST_CASE("phi: frozen 2phi1 value") {
    TruncationPolicy pol = TruncationPolicy::defaults();
    PhiSpec s{{Param(HPComplex(Real("0.2"))), Param(HPComplex(Real("0.2")))},
              {HPComplex(Real("0.3"))},
              QBase(HPComplex(Real("0.4")), 1),
              HPComplex(Real("0.5"))};
    SeriesResult r = phi_eval(s, pol);
    CHECK(r.status == SeriesStatus::Converged);
    CHECK(rel_err(r.value,
                  HPComplex(Real("2.66246110973659235282394743572484135353566414"))) <
          Real("1e-40"));
    CHECK(rel_err(r.value, phi_direct(s, 300)) < Real("1e-42"));
}

TEST_CASE("phi: infinite numerator slots against the direct oracle") {
    TruncationPolicy pol = TruncationPolicy::defaults();
    QBase base(HPComplex(Real("0.3")), 2);
    PhiSpec s{{Param::infinity(), Param::infinity()},
              {HPComplex(Real("0.7"))},
              base,
              HPComplex(Real("2.5"))}; // |z| > 1 is fine with q^{n^2} decay
    SeriesResult r = phi_eval(s, pol);
    CHECK(r.status == SeriesStatus::Converged);
    CHECK(rel_err(r.value, phi_direct(s, 200)) < Real("1e-42"));
}

TEST_CASE("phi: |z| >= 1 rejected only for all-finite parameters") {
    TruncationPolicy pol = TruncationPolicy::defaults();
    QBase base(HPComplex(Real("0.3")), 1);
    PhiSpec s{{Param(HPComplex(Real("0.2"))), Param(HPComplex(Real("0.2")))},
              {HPComplex(Real("0.3"))},
              base,
              HPComplex(Real("1.1"))};
    CHECK_THROWS_AS(phi_eval(s, pol), UsageError);
}

TEST_CASE("psi2: frozen value and direct-oracle agreement") {
    TruncationPolicy pol = TruncationPolicy::defaults();
    Psi2Spec s{Param(HPComplex(Real("0.1"))), Param(HPComplex(Real("0.2"))),
               HPComplex(Real("0.05")),       HPComplex(Real("0.06")),
               QBase(HPComplex(Real("0.3")), 1), HPComplex(Real("0.5"))};
    SeriesResult r = psi2_eval(s, pol);
    CHECK(r.status == SeriesStatus::Converged);
    CHECK(rel_err(r.value,
                  HPComplex(Real("22.9885127922316528015968601304536052016879366"))) <
          Real("1e-40"));
    CHECK(rel_err(r.value, psi2_direct(s, -200, 200)) < Real("1e-42"));
}

TEST_CASE("psi2: bilateral splitting against the direct oracle at random points") {
    TruncationPolicy pol = TruncationPolicy::defaults();
    std::mt19937 eng(5);
    auto u = [&](double lo, double hi) {
        return lo + (hi - lo) * std::uniform_real_distribution<double>(0, 1)(eng);
    };
    for (int trial = 0; trial < 8; ++trial) {
        Psi2Spec s{Param(HPComplex(Real(u(0.3, 0.9)))), Param(HPComplex(Real(u(0.3, 0.9)))),
                   HPComplex(Real(u(0.02, 0.2))),       HPComplex(Real(u(0.02, 0.2))),
                   QBase(HPComplex(Real(u(0.1, 0.5))), 1), HPComplex(Real(u(0.3, 0.7)))};
        if (!(psi2_annulus_lower(s) < abs(s.z) * Real("0.8")))
            continue;
        CHECK(rel_err(psi2_eval(s, pol).value, psi2_direct(s, -300, 300)) < Real("1e-42"));
    }
}

TEST_CASE("psi2: unilateral degeneration at b1 = q") {
    TruncationPolicy pol = TruncationPolicy::defaults();
    QBase base(HPComplex(Real("0.4")), 1);
    HPComplex a1(Real("0.3")), a2(Real("0.6")), b2(Real("0.15")), z(Real("0.5"));
    Psi2Spec s{Param(a1), Param(a2), base.q, b2, base, z};
    // all n < 0 terms vanish; the bilateral sum equals the 2phi1 with the
    // (q;q)_n denominator supplied by b1 = q
    PhiSpec t{{Param(a1), Param(a2)}, {b2}, base, z};
    CHECK(rel_err(psi2_eval(s, pol).value, phi_eval(t, pol).value) < Real("1e-42"));
}

TEST_CASE("psi2: annulus gate") {
    TruncationPolicy pol = TruncationPolicy::defaults();
    QBase base(HPComplex(Real("0.3")), 1);
    Psi2Spec s{Param(HPComplex(Real("0.5"))), Param(HPComplex(Real("0.5"))),
               HPComplex(Real("0.2")),        HPComplex(Real("0.3")),
               base,                          HPComplex(Real("1.2"))};
    CHECK_THROWS_AS(psi2_eval(s, pol), AnnulusViolation);
    s.z = HPComplex(Real("0.1")); // below |b1 b2/(a1 a2)| = 0.24
    CHECK_THROWS_AS(psi2_eval(s, pol), AnnulusViolation);
    s.z = HPComplex(0);
    CHECK_THROWS_AS(psi2_eval(s, pol), AnnulusViolation);
}

TEST_CASE("psi2: negative-index numerator pole") {
    TruncationPolicy pol = TruncationPolicy::defaults();
    QBase base(HPComplex(Real("0.4")), 1);
    // a1 = q^2 exactly: (a1;q)_{-m} singular for m >= 2
    Psi2Spec s{Param(base.q * base.q), Param(HPComplex(Real("0.7"))),
               HPComplex(Real("0.05")), HPComplex(Real("0.06")),
               base, HPComplex(Real("0.5"))};
    CHECK_THROWS_AS(psi2_eval(s, pol), PoleError);
}

TEST_CASE("psi2: status honesty under tolerance halving") {
    TruncationPolicy pol = TruncationPolicy::defaults();
    Psi2Spec s{Param(HPComplex(Real("0.4"))), Param(HPComplex(Real("0.7"))),
               HPComplex(Real("0.1")),        HPComplex(Real("0.12")),
               QBase(HPComplex(Real("0.35")), 1), HPComplex(Real("0.5"))};
    SeriesResult r1 = psi2_eval(s, pol);
    REQUIRE(r1.status == SeriesStatus::Converged);
    TruncationPolicy half = pol;
    half.tail_tol = pol.tail_tol / 2;
    SeriesResult r2 = psi2_eval(s, half);
    CHECK(abs(r1.value - r2.value) < 10 * pol.tail_tol);
}
