#pragma once

#include <vector>

#include "qmt/series.hpp"

namespace qmt {

// q-Pochhammer symbols over HPComplex:
//
//   (a; q^k)_n     = prod_{m=1..n} (1 - a q^{k(m-1)})        n >= 0
//   (a; q^k)_{-m}  = 1 / prod_{j=1..m} (1 - a q^{-k j})      m >= 1
//   (a; q^k)_inf   = prod_{m>=1} (1 - a q^{k(m-1)})
//
// The negative-index form is the unique extension satisfying the recurrence
// (a;q)_{n+1} = (a;q)_n (1 - a q^n) for every integer n. Negative-index
// factors are computed as (q^{kj} - a)/q^{kj} so that exact pole hits
// (a = q^{kj}) are detected by an exact zero test.

// Base of a q-series: the nome q and the step k of (a; q^k)_n.
struct QBase {
    HPComplex q;
    unsigned step{1};

    explicit QBase(HPComplex q_, unsigned step_ = 1);

    const HPComplex& qk() const { return qk_; }
    const Real& abs_qk() const { return abs_qk_; }

  private:
    HPComplex qk_;
    Real abs_qk_;
};

// |factor| below this raises the near-pole flag instead of an error.
Real near_pole_threshold();

// (a; q^k)_n for any integer n. Throws PoleError when a negative-index factor
// is exactly zero. Sets *near_pole when a factor magnitude drops below
// near_pole_threshold().
HPComplex qpoch_finite(const HPComplex& a, const QBase& base, long n, bool* near_pole = nullptr);

// 1 / (a; q^k)_n without forming the reciprocal of a zero: for n < 0 this is
// the plain product prod (1 - a q^{-kj}), which may legitimately be zero (a
// vanishing series term). For n >= 0 a zero divisor raises PoleError.
HPComplex qpoch_finite_inverse(const HPComplex& a, const QBase& base, long n,
                               bool* near_pole = nullptr);

// (a; q^k)_inf truncated per policy; tail_estimate bounds the dropped factors.
SeriesResult qpoch_infinite(const HPComplex& a, const QBase& base, const TruncationPolicy& pol,
                            bool* near_pole = nullptr);

// (a1, a2, ..., am; q^k)_n. PoleError is tagged with the offending factor.
HPComplex multi_qpoch(const std::vector<HPComplex>& factors, const QBase& base, long n);

// (a1, a2, ..., am; q^k)_inf under one shared policy.
SeriesResult multi_qpoch_infinite(const std::vector<HPComplex>& factors, const QBase& base,
                                  const TruncationPolicy& pol);

} // namespace qmt
