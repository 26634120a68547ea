#include "qmt/mocktheta.hpp"

namespace qmt {

const char* family_name(Family f) {
    switch (f) {
    case Family::Psi0: return "psi0";
    case Family::Psi1: return "psi1";
    case Family::Psi2: return "psi2";
    case Family::Psi3: return "psi3";
    case Family::Phi0: return "phi0";
    case Family::Phi1: return "phi1";
    }
    return "?";
}

Family family_from_name(const std::string& name) {
    if (name == "psi0") return Family::Psi0;
    if (name == "psi1") return Family::Psi1;
    if (name == "psi2") return Family::Psi2;
    if (name == "psi3") return Family::Psi3;
    if (name == "phi0") return Family::Phi0;
    if (name == "phi1") return Family::Phi1;
    throw UsageError("unknown function family '" + name +
                     "' (expected psi0..psi3, phi0, phi1)");
}

const char* variant_name(FunctionVariant v) {
    switch (v) {
    case FunctionVariant::Classical:   return "classical";
    case FunctionVariant::Generalized: return "generalized";
    case FunctionVariant::Complete:    return "complete";
    }
    return "?";
}

FunctionVariant variant_from_name(const std::string& name) {
    if (name == "classical")   return FunctionVariant::Classical;
    if (name == "generalized") return FunctionVariant::Generalized;
    if (name == "complete")    return FunctionVariant::Complete;
    throw UsageError("unknown variant '" + name +
                     "' (expected classical, generalized, complete)");
}

void ParameterPoint::validate() const {
    Real aq = qmt::abs(q);
    if (!(aq > 0) || !(aq < 1))
        throw UsageError("parameter point requires 0 < |q| < 1, got |q| = " + real_str(aq, 8));
    // t = q^{-m} (m >= 0) zeroes (t)_inf; probe the first factors directly.
    if (!t.is_zero()) {
        HPComplex qm(1);
        for (int m = 0; m < 64; ++m) {
            if ((HPComplex(1) - t * qm).is_zero())
                throw UsageError("t = q^{-m} makes (t;q)_inf vanish (m = " + std::to_string(m) +
                                 ")");
            qm *= q;
        }
    }
}

namespace {

SeriesResult classical_sum(Family f, const QBase& b1, const QBase& b2,
                           const TruncationPolicy& pol, Psi3Denominator psi3) {
    const HPComplex& q = b1.q;
    auto term = [&](long n) -> HPComplex {
        switch (f) {
        case Family::Psi0:
            return pow_int(q, 2 * n * n) * qpoch_finite_inverse(-q, b1, 2 * n);
        case Family::Psi1:
            return pow_int(q, 2 * n * n + 2 * n) * qpoch_finite_inverse(-q, b1, 2 * n + 1);
        case Family::Psi2:
            return pow_int(q, 2 * n * n + 2 * n) * qpoch_finite(q, b2, n) *
                   qpoch_finite_inverse(q * q, b2, n) * qpoch_finite_inverse(-q, b1, 2 * n);
        case Family::Psi3: {
            HPComplex num = pow_int(q, n * n) * pow_int(qpoch_finite(-q, b1, n), 2);
            if (psi3 == Psi3Denominator::AsPrinted)
                return num * qpoch_finite_inverse(q, b1, 2 * n);
            return num * qpoch_finite_inverse(-q, b1, 2 * n);
        }
        case Family::Phi0:
            return pow_int(q, n) * qpoch_finite(-q, b1, 2 * n + 1);
        case Family::Phi1:
            return pow_int(q, n) * qpoch_finite(-q, b1, 2 * n);
        }
        throw UsageError("bad family");
    };
    return detail::sum_unilateral(term, pol);
}

// Shared summand of the generalized / complete forms, before the 1/(t)_inf
// prefactor. Direct per-term evaluation keeps the pole semantics explicit:
// numerator Pochhammers go through qpoch_finite (a zero negative-index factor
// is a genuine pole), denominator ones through qpoch_finite_inverse (a zero
// factor makes the term vanish).
struct MockSummand {
    Family f;
    const ParameterPoint& p;
    QBase b1;          // (q, step 1)
    QBase b2;          // (q, step 2)
    HPComplex qalpha;  // q^alpha, principal branch
    HPComplex mz2q;    // -z^2/q

    MockSummand(Family f_, const ParameterPoint& p_)
        : f(f_), p(p_), b1(p_.q, 1), b2(p_.q, 2), qalpha(pow_real(p_.q, p_.alpha)),
          mz2q(-(p_.z * p_.z) / p_.q) {}

    HPComplex operator()(long n) const {
        HPComplex tq = qpoch_finite(p.t, b1, n);
        HPComplex z2n = pow_int(p.z, 2 * n);
        switch (f) {
        case Family::Psi0:
            return tq * pow_int(p.q, 2 * n * n - 3 * n) * pow_int(qalpha, n) * z2n *
                   qpoch_finite_inverse(mz2q, b1, 2 * n);
        case Family::Psi1:
            return tq * pow_int(p.q, 2 * n * n - n) * pow_int(qalpha, n) * z2n *
                   qpoch_finite_inverse(mz2q, b1, 2 * n + 1);
        case Family::Psi2:
            return tq * pow_int(p.q, 2 * n * n + 2 * n) * pow_int(qalpha, -2 * n) * z2n *
                   qpoch_finite(p.z, b2, n) * qpoch_finite_inverse(p.z * p.z, b2, n) *
                   qpoch_finite_inverse(mz2q, b1, 2 * n);
        case Family::Psi3:
            return tq * pow_int(p.q, n * n - n) * pow_int(qalpha, n) * z2n *
                   pow_int(qpoch_finite(-p.z, b1, n), 2) *
                   qpoch_finite_inverse(mz2q, b1, 2 * n);
        case Family::Phi0:
            return tq * pow_int(p.q, n) * pow_int(qalpha, -2 * n) * z2n *
                   qpoch_finite(mz2q, b1, 2 * n + 1);
        case Family::Phi1:
            return tq * pow_int(p.q, n) * pow_int(qalpha, -2 * n) * z2n *
                   qpoch_finite(mz2q, b1, 2 * n);
        }
        throw UsageError("bad family");
    }
};

SeriesResult apply_t_prefactor(SeriesResult sum, const ParameterPoint& p,
                               const TruncationPolicy& pol) {
    if (p.t.is_zero())
        return sum;
    QBase b1(p.q, 1);
    SeriesResult tinf = qpoch_infinite(p.t, b1, pol);
    if (tinf.value.is_zero())
        throw PoleError("(t;q)_inf vanished; the 1/(t)_inf prefactor has a pole");
    SeriesResult res;
    res.value = sum.value / tinf.value;
    res.terms_used = sum.terms_used + tinf.terms_used;
    Real inv = 1 / abs(tinf.value);
    res.tail_estimate = sum.tail_estimate * inv + tinf.tail_estimate * abs(res.value) * inv;
    res.status = worst_status(sum.status, tinf.status);
    res.near_pole = sum.near_pole || tinf.near_pole;
    return res;
}

} // namespace

SeriesResult eval_classical(Family f, const HPComplex& q, const TruncationPolicy& pol,
                            Psi3Denominator psi3) {
    QBase b1(q, 1);
    QBase b2(q, 2);
    return classical_sum(f, b1, b2, pol, psi3);
}

SeriesResult eval_generalized(Family f, const ParameterPoint& p, const TruncationPolicy& pol) {
    p.validate();
    MockSummand term(f, p);
    return apply_t_prefactor(detail::sum_unilateral(term, pol), p, pol);
}

SeriesResult eval_complete(Family f, const ParameterPoint& p, const TruncationPolicy& pol,
                           SumRange range) {
    p.validate();
    MockSummand term(f, p);
    SeriesResult sum = range == SumRange::Bilateral ? detail::sum_bilateral(term, pol)
                                                    : detail::sum_unilateral(term, pol);
    return apply_t_prefactor(sum, p, pol);
}

} // namespace qmt
