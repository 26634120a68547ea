#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "qmt/qcore.hpp"

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

HPComplex rand_complex(std::mt19937& eng, double lo, double hi, bool complex_part) {
    auto u = [&] {
        return lo + (hi - lo) * std::uniform_real_distribution<double>(0.0, 1.0)(eng);
    };
    return complex_part ? HPComplex(Real(u()), Real(u() * 0.3)) : HPComplex(Real(u()));
}

} // namespace

TEST_CASE("finite Pochhammer frozen values") {
    QBase base(HPComplex(Real("0.5")), 1);
    CHECK(qpoch_finite(HPComplex(Real("0.3")), base, 0) == HPComplex(1));
    // (0.5; 0.5)_2 = (1-0.5)(1-0.25)
    CHECK(rel_err(qpoch_finite(HPComplex(Real("0.5")), base, 2), HPComplex(Real("0.375"))) <
          Real("1e-49"));
    // (0.25; 0.5)_{-1} = 1/(1 - 0.25/0.5) = 2
    CHECK(rel_err(qpoch_finite(HPComplex(Real("0.25")), base, -1), HPComplex(2)) < Real("1e-49"));
    CHECK_THROWS_AS(qpoch_finite(HPComplex(Real("0.5")), base, -1), PoleError);
}

TEST_CASE("infinite Pochhammer frozen value and limits") {
    TruncationPolicy pol = TruncationPolicy::defaults();
    QBase base(HPComplex(Real("0.5")), 1);
    SeriesResult r = qpoch_infinite(HPComplex(Real("0.5")), base, pol);
    CHECK(r.status == SeriesStatus::Converged);
    CHECK(rel_err(r.value, HPComplex(Real("0.288788095086602421278899721929230780088911905"))) <
          Real("1e-40"));
    CHECK(r.tail_estimate < pol.tail_tol);

    CHECK(qpoch_infinite(HPComplex(0), base, pol).value == HPComplex(1));

    QBase tiny(HPComplex(Real("1e-25")), 1);
    SeriesResult near_q0 = qpoch_infinite(HPComplex(Real("0.3")), tiny, pol);
    CHECK(abs(near_q0.value - HPComplex(Real("0.7"))) < Real("1e-24"));
}

TEST_CASE("multi Pochhammer") {
    QBase base(HPComplex(Real("0.5")), 1);
    CHECK(multi_qpoch({}, base, 5) == HPComplex(1));
    HPComplex a(Real("0.3"));
    CHECK(multi_qpoch({a}, base, 2) == qpoch_finite(a, base, 2));
    CHECK(rel_err(multi_qpoch({HPComplex(Real("0.5")), HPComplex(Real("0.25"))}, base, 1),
                  HPComplex(Real("0.375"))) < Real("1e-49"));
    CHECK_THROWS_WITH_AS(multi_qpoch({a, HPComplex(Real("0.5"))}, base, -1),
                         doctest::Contains("factor #1"), PoleError);
}

TEST_CASE("recurrence (a;q)_{n+1} = (a;q)_n (1 - a q^n) across integer n") {
    std::mt19937 eng(42);
    for (int trial = 0; trial < 40; ++trial) {
        HPComplex q = rand_complex(eng, 0.1, 0.6, trial % 3 == 0);
        if (!(abs(q) < 1))
            continue;
        QBase base(q, 1 + (trial % 2));
        HPComplex a = rand_complex(eng, 0.05, 0.9, trial % 4 == 0);
        for (long n = -8; n <= 8; ++n) {
            HPComplex lhs = qpoch_finite(a, base, n + 1);
            HPComplex rhs = qpoch_finite(a, base, n) *
                            (HPComplex(1) - a * pow_int(base.qk(), n));
            CHECK(rel_err(lhs, rhs) < Real("1e-45"));
        }
    }
}

TEST_CASE("reciprocal (a;q)_{-n} (a q^{-n};q)_n = 1") {
    std::mt19937 eng(7);
    for (int trial = 0; trial < 25; ++trial) {
        HPComplex q = rand_complex(eng, 0.1, 0.6, trial % 2 == 0);
        QBase base(q, 1);
        HPComplex a = rand_complex(eng, 0.05, 0.9, trial % 3 == 0);
        for (long n = 1; n <= 10; ++n) {
            HPComplex lhs = qpoch_finite(a, base, -n);
            HPComplex shifted = a * pow_int(base.qk(), -n);
            HPComplex rhs = qpoch_finite(shifted, base, n);
            CHECK(rel_err(lhs * rhs, HPComplex(1)) < Real("1e-45"));
        }
    }
}

TEST_CASE("splitting (a;q)_inf = (a;q)_n (a q^n; q)_inf") {
    TruncationPolicy pol = TruncationPolicy::defaults();
    std::mt19937 eng(99);
    for (int trial = 0; trial < 20; ++trial) {
        HPComplex q = rand_complex(eng, 0.1, 0.6, trial % 2 == 1);
        QBase base(q, 1);
        HPComplex a = rand_complex(eng, 0.05, 0.9, trial % 3 == 1);
        long n = static_cast<long>(eng() % 21);
        HPComplex whole = qpoch_infinite(a, base, pol).value;
        HPComplex split = qpoch_finite(a, base, n) *
                          qpoch_infinite(a * pow_int(base.qk(), n), base, pol).value;
        CHECK(rel_err(whole, split) < Real("1e-42"));
    }
}

TEST_CASE("determinism: identical inputs give bit-identical strings") {
    TruncationPolicy pol = TruncationPolicy::defaults();
    QBase base(HPComplex(Real("0.37"), Real("0.11")), 2);
    HPComplex a(Real("0.83"), Real("-0.21"));
    std::string s1 = to_string(qpoch_finite(a, base, 17));
    std::string s2 = to_string(qpoch_finite(a, base, 17));
    CHECK(s1 == s2);
    std::string t1 = to_string(qpoch_infinite(a, base, pol).value);
    std::string t2 = to_string(qpoch_infinite(a, base, pol).value);
    CHECK(t1 == t2);
}

TEST_CASE("near-pole flag") {
    QBase base(HPComplex(Real("0.5")), 1);
    bool near = false;
    HPComplex a = HPComplex(Real("0.5")) * (HPComplex(1) + HPComplex(Real("1e-25")));
    qpoch_finite(a, base, -1, &near);
    CHECK(near);
}

TEST_CASE("QBase validation") {
    CHECK_THROWS_AS(QBase(HPComplex(Real("1.5")), 1), UsageError);
    CHECK_THROWS_AS(QBase(HPComplex(0), 1), UsageError);
    CHECK_THROWS_AS(QBase(HPComplex(Real("0.5")), 3), UsageError);
}

TEST_CASE("inverse Pochhammer semantics") {
    QBase base(HPComplex(Real("0.5")), 1);
    // denominator at negative index: zero is a vanishing term, not a pole
    HPComplex v = qpoch_finite_inverse(HPComplex(Real("0.3")), base, -2);
    CHECK(rel_err(v * qpoch_finite(HPComplex(Real("0.3")), base, -2), HPComplex(1)) <
          Real("1e-45"));
    CHECK(qpoch_finite_inverse(HPComplex(Real("0.5")), base, -1).is_zero());
}
