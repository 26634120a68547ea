#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "qmt/mocktheta.hpp"

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

ParameterPoint reduction_point(const HPComplex& q, const Real& alpha) {
    ParameterPoint p;
    p.q = q;
    p.z = q;
    p.t = HPComplex(0);
    p.alpha = alpha;
    return p;
}

const Family kAll[] = {Family::Psi0, Family::Psi1, Family::Psi2,
                       Family::Psi3, Family::Phi0, Family::Phi1};

} // namespace

TEST_CASE("classical frozen values") {
    TruncationPolicy pol = TruncationPolicy::defaults();
    CHECK(rel_err(eval_classical(Family::Phi1, HPComplex(Real("0.1")), pol).value,
                  HPComplex(Real("1.12345803817522474462391049486951849255804769"))) <
          Real("1e-40"));
    CHECK(rel_err(eval_classical(Family::Phi0, HPComplex(Real("0.1")), pol).value,
                  HPComplex(Real("1.22356924950878063397103675469980806474787851"))) <
          Real("1e-40"));
    CHECK(rel_err(eval_classical(Family::Psi0, HPComplex(Real("0.2")), pol).value,
                  HPComplex(Real("1.0320533138027230519313480333507247631114694"))) <
          Real("1e-40"));
}

TEST_CASE("classical small-q limits") {
    TruncationPolicy pol = TruncationPolicy::defaults();
    HPComplex q(Real("1e-20"));
    CHECK(abs(eval_classical(Family::Psi0, q, pol).value - HPComplex(1)) < Real("1e-38"));
    CHECK(abs(eval_classical(Family::Psi1, q, pol).value - HPComplex(1)) < Real("1e-19"));
}

TEST_CASE("reduction: generalized(t=0, alpha=1, z=q) equals classical") {
    TruncationPolicy pol = TruncationPolicy::defaults().tightened("1e-45", 1000);
    for (Family f : {Family::Psi0, Family::Psi1, Family::Psi2, Family::Phi0, Family::Phi1}) {
        for (const char* qs : {"0.1", "0.3", "0.5"}) {
            HPComplex q{Real(qs)};
            HPComplex gen = eval_generalized(f, reduction_point(q, Real(1)), pol).value;
            HPComplex cls = eval_classical(f, q, pol).value;
            CAPTURE(family_name(f));
            CAPTURE(qs);
            CHECK(rel_err(gen, cls) < Real("1e-40"));
        }
    }
}

TEST_CASE("psi3 reduction at alpha=-1 identifies the negated-base denominator") {
    TruncationPolicy pol = TruncationPolicy::defaults().tightened("1e-45", 1000);
    HPComplex q(Real("0.3"));
    HPComplex gen = eval_generalized(Family::Psi3, reduction_point(q, Real(-1)), pol).value;
    HPComplex printed = eval_classical(Family::Psi3, q, pol, Psi3Denominator::AsPrinted).value;
    HPComplex negated = eval_classical(Family::Psi3, q, pol, Psi3Denominator::NegatedBase).value;
    CHECK(rel_err(gen, negated) < Real("1e-40"));
    CHECK(rel_err(gen, printed) > Real("0.01")); // the displayed (q;q)_{2n} does not reduce
}

TEST_CASE("complete: n >= 0 restriction reproduces the generalized series") {
    TruncationPolicy pol = TruncationPolicy::defaults();
    std::mt19937 eng(11);
    auto u = [&](double lo, double hi) {
        return lo + (hi - lo) * std::uniform_real_distribution<double>(0, 1)(eng);
    };
    for (Family f : kAll) {
        for (int k = 0; k < 5; ++k) {
            ParameterPoint p;
            p.q = HPComplex(Real(u(0.1, 0.5)));
            p.z = HPComplex(Real(u(0.1, 0.5)));
            p.t = HPComplex(Real(u(0.0, 0.4)));
            p.alpha = Real(static_cast<int>(eng() % 4) - 1);
            HPComplex gen = eval_generalized(f, p, pol).value;
            HPComplex part = eval_complete(f, p, pol, SumRange::NonNegativeOnly).value;
            CAPTURE(family_name(f));
            CHECK(rel_err(gen, part) < Real("1e-40"));
        }
    }
}

TEST_CASE("complete: frozen bilateral value") {
    TruncationPolicy pol = TruncationPolicy::defaults();
    ParameterPoint p;
    p.q = HPComplex(Real("0.4"));
    p.z = HPComplex(Real("0.3"));
    p.t = HPComplex(0);
    p.alpha = Real(1);
    SeriesResult r = eval_complete(Family::Psi0, p, pol);
    CHECK(r.status == SeriesStatus::Converged);
    CHECK(rel_err(r.value,
                  HPComplex(Real("2.58787333792503091692150434622567602804125683"))) <
          Real("1e-40"));
}

TEST_CASE("complete: psi0 n=-1 term via the reciprocal identity") {
    // 1/(-z^2/q; q)_{-2} = (-z^2 q^{-3}; q)_2, so the n = -1 summand at t = 0
    // is q^{5-alpha} z^{-2} (1 + z^2 q^{-3})(1 + z^2 q^{-2}).
    HPComplex q(Real("0.3")), z(Real("0.4"));
    Real alpha(1);
    QBase base(q, 1);
    HPComplex direct = pow_int(q, 5) * pow_real(q, -alpha) * pow_int(z, -2) *
                       (HPComplex(1) + z * z * pow_int(q, -3)) *
                       (HPComplex(1) + z * z * pow_int(q, -2));
    HPComplex via_poch = pow_int(q, 5) * pow_real(q, -alpha) * pow_int(z, -2) *
                         qpoch_finite_inverse(-(z * z) / q, base, -2);
    CHECK(rel_err(direct, via_poch) < Real("1e-45"));
}

TEST_CASE("complete: t = q makes the negative side singular") {
    TruncationPolicy pol = TruncationPolicy::defaults();
    ParameterPoint p;
    p.q = HPComplex(Real("0.3"));
    p.z = HPComplex(Real("0.2"));
    p.t = p.q;
    p.alpha = Real(1);
    CHECK_THROWS_AS(eval_complete(Family::Psi0, p, pol), PoleError);
    // the n >= 0 side alone stays regular
    CHECK(eval_complete(Family::Psi0, p, pol, SumRange::NonNegativeOnly).status ==
          SeriesStatus::Converged);
}

TEST_CASE("generalized: continuity in t near 0") {
    TruncationPolicy pol = TruncationPolicy::defaults();
    ParameterPoint p;
    p.q = HPComplex(Real("0.3"));
    p.z = HPComplex(Real("0.4"));
    p.alpha = Real(1);
    p.t = HPComplex(0);
    HPComplex at0 = eval_generalized(Family::Psi0, p, pol).value;
    p.t = HPComplex(Real("1e-6"));
    Real d6 = abs(eval_generalized(Family::Psi0, p, pol).value - at0);
    p.t = HPComplex(Real("1e-8"));
    Real d8 = abs(eval_generalized(Family::Psi0, p, pol).value - at0);
    CHECK(d8 < d6);
    Real ratio = d6 / d8;
    CHECK(ratio > Real(50));
    CHECK(ratio < Real(200));
}

TEST_CASE("generalized: n = 0 term is 1 before the 1/(t)_inf prefactor") {
    TruncationPolicy pol = TruncationPolicy::defaults();
    ParameterPoint p;
    p.q = HPComplex(Real("0.3"));
    p.z = HPComplex(Real("1e-21"));
    p.t = HPComplex(Real("0.2"));
    p.alpha = Real(0);
    QBase base(p.q, 1);
    for (Family f : kAll) {
        HPComplex v = eval_generalized(f, p, pol).value;
        HPComplex pref = HPComplex(1) / qpoch_infinite(p.t, base, pol).value;
        CAPTURE(family_name(f));
        CHECK(abs(v - pref) < Real("1e-40"));
    }
}

TEST_CASE("t = 0 prefactor is exactly 1") {
    TruncationPolicy pol = TruncationPolicy::defaults();
    ParameterPoint p;
    p.q = HPComplex(Real("0.25"));
    p.z = HPComplex(Real("1e-21"));
    p.t = HPComplex(0);
    p.alpha = Real(0);
    CHECK(abs(eval_generalized(Family::Psi0, p, pol).value - HPComplex(1)) < Real("1e-40"));
}

TEST_CASE("parameter point validation") {
    ParameterPoint p;
    p.q = HPComplex(Real("1.2"));
    CHECK_THROWS_AS(p.validate(), UsageError);
    p.q = HPComplex(Real("0.5"));
    p.t = HPComplex(1); // t = q^0
    CHECK_THROWS_AS(p.validate(), UsageError);
}

TEST_CASE("name round-trips") {
    for (Family f : kAll)
        CHECK(family_from_name(family_name(f)) == f);
    CHECK_THROWS_AS(family_from_name("psi9"), UsageError);
    CHECK_THROWS_AS(variant_from_name("complet"), UsageError);
}
