#include "qmt/qcore.hpp"

namespace qmt {

const char* status_name(SeriesStatus s) {
    switch (s) {
    case SeriesStatus::Converged: return "Converged";
    case SeriesStatus::Truncated: return "Truncated";
    case SeriesStatus::Singular:  return "Singular";
    }
    return "?";
}

SeriesStatus worst_status(SeriesStatus a, SeriesStatus b) {
    return static_cast<int>(a) >= static_cast<int>(b) ? a : b;
}

QBase::QBase(HPComplex q_, unsigned step_) : q(std::move(q_)), step(step_) {
    if (step != 1 && step != 2)
        throw UsageError("QBase step must be 1 or 2, got " + std::to_string(step));
    Real aq = qmt::abs(q);
    if (!(aq > 0) || !(aq < 1))
        throw UsageError("QBase requires 0 < |q| < 1, got |q| = " + real_str(aq, 8));
    qk_ = step == 1 ? q : q * q;
    abs_qk_ = qmt::abs(qk_);
}

Real near_pole_threshold() { return Real("1e-20"); }

namespace {

void flag_near_pole(const HPComplex& factor, bool* near_pole) {
    if (near_pole != nullptr && !factor.is_zero() && abs(factor) < near_pole_threshold())
        *near_pole = true;
}

// prod_{j=1..m} (1 - a q^{-kj}), written as (q^{kj} - a) / q^{kj}.
HPComplex negative_factor_product(const HPComplex& a, const QBase& base, long m,
                                  bool* near_pole) {
    HPComplex prod(1);
    HPComplex qj(1);
    for (long j = 1; j <= m; ++j) {
        qj *= base.qk();
        HPComplex factor = (qj - a) / qj;
        flag_near_pole(factor, near_pole);
        prod *= factor;
    }
    return prod;
}

} // namespace

HPComplex qpoch_finite(const HPComplex& a, const QBase& base, long n, bool* near_pole) {
    if (n == 0)
        return HPComplex(1);
    if (n > 0) {
        HPComplex prod(1);
        HPComplex qm(1);
        for (long m = 0; m < n; ++m) {
            HPComplex factor = HPComplex(1) - a * qm;
            flag_near_pole(factor, near_pole);
            prod *= factor;
            qm *= base.qk();
        }
        return prod;
    }
    HPComplex prod = negative_factor_product(a, base, -n, near_pole);
    if (prod.is_zero())
        throw PoleError("(a;q)_{-m} pole: a falls on q^(k j) for some 1 <= j <= " +
                        std::to_string(-n));
    return HPComplex(1) / prod;
}

HPComplex qpoch_finite_inverse(const HPComplex& a, const QBase& base, long n, bool* near_pole) {
    if (n == 0)
        return HPComplex(1);
    if (n < 0)
        return negative_factor_product(a, base, -n, near_pole);
    HPComplex v = qpoch_finite(a, base, n, near_pole);
    if (v.is_zero())
        throw PoleError("zero divisor in 1/(a;q)_n");
    return HPComplex(1) / v;
}

SeriesResult qpoch_infinite(const HPComplex& a, const QBase& base, const TruncationPolicy& pol,
                            bool* near_pole) {
    SeriesResult res;
    if (a.is_zero()) {
        res.value = HPComplex(1);
        res.terms_used = 0;
        return res;
    }
    HPComplex prod(1);
    HPComplex aqm = a; // a q^{k m}, m = 0, 1, ...
    unsigned small = 0;
    for (std::size_t m = 0; m < pol.max_terms; ++m) {
        HPComplex factor = HPComplex(1) - aqm;
        flag_near_pole(factor, near_pole);
        prod *= factor;
        ++res.terms_used;
        aqm *= base.qk();
        if (abs(aqm) < pol.tail_tol) {
            if (++small >= pol.consecutive_small) {
                res.value = prod;
                // remaining factors satisfy |log(1 - a q^{kj})| <~ |a q^{kj}|
                res.tail_estimate = abs(prod) * abs(aqm) / (1 - base.abs_qk());
                res.status = res.tail_estimate < pol.tail_tol ? SeriesStatus::Converged
                                                              : SeriesStatus::Truncated;
                return res;
            }
        } else {
            small = 0;
        }
    }
    throw NonConvergence("(a;q)_inf did not reach tail tolerance within " +
                         std::to_string(pol.max_terms) + " factors");
}

HPComplex multi_qpoch(const std::vector<HPComplex>& factors, const QBase& base, long n) {
    HPComplex prod(1);
    for (std::size_t i = 0; i < factors.size(); ++i) {
        try {
            prod *= qpoch_finite(factors[i], base, n);
        } catch (const PoleError& e) {
            throw PoleError("factor #" + std::to_string(i) + " (a = " +
                            to_string(factors[i], 8) + "): " + e.what());
        }
    }
    return prod;
}

SeriesResult multi_qpoch_infinite(const std::vector<HPComplex>& factors, const QBase& base,
                                  const TruncationPolicy& pol) {
    SeriesResult res;
    res.value = HPComplex(1);
    for (std::size_t i = 0; i < factors.size(); ++i) {
        bool np = false;
        SeriesResult one = qpoch_infinite(factors[i], base, pol, &np);
        res.tail_estimate += one.tail_estimate * abs(res.value);
        res.value *= one.value;
        res.terms_used += one.terms_used;
        res.status = worst_status(res.status, one.status);
        res.near_pole = res.near_pole || np;
    }
    return res;
}

} // namespace qmt
