#include "qmt/hyper.hpp"

namespace qmt {

Real psi2_annulus_lower(const Psi2Spec& spec) {
    Real lower = abs(spec.b1 * spec.b2);
    if (lower.is_zero())
        return lower;
    if (!spec.a1.infinite) {
        if (spec.a1.value.is_zero())
            throw UsageError("2psi2 numerator parameter a1 = 0 has an empty annulus");
        lower /= abs(spec.a1.value);
    }
    if (!spec.a2.infinite) {
        if (spec.a2.value.is_zero())
            throw UsageError("2psi2 numerator parameter a2 = 0 has an empty annulus");
        lower /= abs(spec.a2.value);
    }
    return lower;
}

SeriesResult phi_eval(const PhiSpec& spec, const TruncationPolicy& pol) {
    if (spec.numerators.empty())
        throw UsageError("phi series needs at least one numerator parameter");
    if (spec.denominators.size() + 1 != spec.numerators.size())
        throw UsageError("phi series must have one fewer denominator than numerator parameters");
    bool any_infinite = false;
    for (const Param& a : spec.numerators)
        any_infinite = any_infinite || a.infinite;
    if (!any_infinite && !(abs(spec.z) < 1))
        throw UsageError("phi series requires |z| < 1 when all parameters are finite");

    bool near = false;
    // incremental: term(0) = 1, term(n+1) = term(n) * ratio(n)
    HPComplex term(1);
    HPComplex qn(1); // q^{kn}
    auto next = [&](long n) {
        if (n == 0)
            return term;
        HPComplex ratio = spec.z;
        for (const Param& a : spec.numerators) {
            if (a.infinite)
                ratio *= -qn;
            else
                ratio *= HPComplex(1) - a.value * qn;
        }
        for (const HPComplex& b : spec.denominators) {
            HPComplex f = HPComplex(1) - b * qn;
            if (f.is_zero())
                throw PoleError("phi denominator parameter hits a pole: b = q^{-" +
                                std::to_string(n - 1) + "} with b = " + to_string(b, 8));
            if (abs(f) < near_pole_threshold())
                near = true;
            ratio /= f;
        }
        HPComplex f = HPComplex(1) - spec.base.qk() * qn;
        if (f.is_zero())
            throw PoleError("(q;q)_n factor vanished; base is degenerate");
        ratio /= f;
        qn *= spec.base.qk();
        term *= ratio;
        return term;
    };
    SeriesResult res = detail::sum_unilateral(next, pol);
    res.near_pole = res.near_pole || near;
    return res;
}

SeriesResult psi2_eval(const Psi2Spec& spec, const TruncationPolicy& pol) {
    Real az = abs(spec.z);
    Real lower = psi2_annulus_lower(spec);
    bool any_infinite = spec.a1.infinite || spec.a2.infinite;
    if (!(az > lower) || (!any_infinite && !(az < 1)))
        throw AnnulusViolation("2psi2 argument outside convergence annulus: need " +
                               real_str(lower, 8) + " < |z|" +
                               (any_infinite ? "" : " < 1") + ", got |z| = " + real_str(az, 8));

    bool near = false;
    auto check_near = [&](const HPComplex& f) {
        if (!f.is_zero() && abs(f) < near_pole_threshold())
            near = true;
    };

    // n >= 0 side: term(n+1)/term(n) = z (1-a1 q^n)(1-a2 q^n) / [(1-b1 q^n)(1-b2 q^n)]
    HPComplex pos_term(1);
    HPComplex qn(1);
    auto pos = [&](long n) {
        if (n == 0)
            return pos_term;
        HPComplex ratio = spec.z;
        for (const Param* a : {&spec.a1, &spec.a2}) {
            if (a->infinite)
                ratio *= -qn;
            else
                ratio *= HPComplex(1) - a->value * qn;
        }
        for (const HPComplex* b : {&spec.b1, &spec.b2}) {
            HPComplex f = HPComplex(1) - *b * qn;
            if (f.is_zero())
                throw PoleError("2psi2 denominator parameter b = q^{-m}: b = " + to_string(*b, 8));
            check_near(f);
            ratio /= f;
        }
        qn *= spec.base.qk();
        pos_term *= ratio;
        return pos_term;
    };
    SeriesResult pos_res = detail::sum_one_sided(pos, pol, 0, 1);

    // n <= -1 side, m = -n: t(-m)/t(-m+1) multiplies per slot
    //   b: (q^{km} - b)/q^{km}   (zero here kills the term and all deeper ones)
    //   a finite: q^{km}/(q^{km} - a)   (zero here is a pole of the term)
    //   a infinite: -q^{km}
    // and 1/z.
    HPComplex neg_term(1); // value at m-1 = 0 boundary (the n = 0 term)
    HPComplex qm(1);       // q^{k m}
    auto neg = [&](long n) {
        long m = -n;
        qm *= spec.base.qk();
        HPComplex ratio = HPComplex(1) / spec.z;
        for (const HPComplex* b : {&spec.b1, &spec.b2}) {
            HPComplex f = (qm - *b) / qm;
            check_near(f);
            ratio *= f;
        }
        for (const Param* a : {&spec.a1, &spec.a2}) {
            if (a->infinite) {
                ratio *= -qm;
            } else {
                HPComplex f = (qm - a->value) / qm;
                if (f.is_zero())
                    throw PoleError("2psi2 numerator Pochhammer singular at n = -" +
                                    std::to_string(m) + ": a = " + to_string(a->value, 8));
                check_near(f);
                ratio /= f;
            }
        }
        neg_term *= ratio;
        return neg_term;
    };
    SeriesResult neg_res = detail::sum_one_sided(neg, pol, -1, -1);

    SeriesResult res;
    res.value = pos_res.value + neg_res.value;
    res.terms_used = pos_res.terms_used + neg_res.terms_used;
    res.tail_estimate = pos_res.tail_estimate + neg_res.tail_estimate;
    res.status = worst_status(pos_res.status, neg_res.status);
    res.near_pole = near;
    return res;
}

} // namespace qmt
