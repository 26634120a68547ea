#pragma once

#include <cstddef>
#include <string>

#include "qmt/hpcomplex.hpp"

namespace qmt {

// How infinite sums and products are cut off. Summation stops once
// `consecutive_small` successive term magnitudes fall below tail_tol, and
// fails with NonConvergence if max_terms is exhausted first.
struct TruncationPolicy {
    std::size_t max_terms{500};
    Real tail_tol{0};
    unsigned consecutive_small{3};

    static TruncationPolicy defaults() { return {500, Real("1e-40"), 3}; }
    TruncationPolicy tightened(const char* tol, std::size_t terms = 0) const {
        TruncationPolicy p = *this;
        p.tail_tol = Real(tol);
        if (terms != 0)
            p.max_terms = terms;
        return p;
    }
};

enum class SeriesStatus { Converged, Truncated, Singular };

const char* status_name(SeriesStatus s);

struct SeriesResult {
    HPComplex value{};
    std::size_t terms_used{0};
    Real tail_estimate{0};
    SeriesStatus status{SeriesStatus::Converged};
    bool near_pole{false};
};

SeriesStatus worst_status(SeriesStatus a, SeriesStatus b);

namespace detail {

// One-sided summation driver. `term` is invoked at consecutive indices
// start, start+step, start+2*step, ... so stateful incremental functors are
// safe. Divergence (terms growing past any use) yields status Truncated; the
// geometric tail bound |t| r/(1-r) is certified only for ratio r < 0.9.
template <class TermFn>
SeriesResult sum_one_sided(TermFn&& term, const TruncationPolicy& pol, long start, long step) {
    SeriesResult res;
    HPComplex sum;
    Real prev_abs(0);
    Real ratio(0);
    unsigned small = 0;
    unsigned growing = 0;
    const Real grow_floor("1e20");
    long n = start;
    for (std::size_t k = 0; k < pol.max_terms; ++k, n += step) {
        HPComplex t = term(n);
        sum += t;
        ++res.terms_used;
        Real a = abs(t);
        if (k > 0 && prev_abs > 0)
            ratio = a / prev_abs;
        if (a < pol.tail_tol) {
            if (++small >= pol.consecutive_small) {
                res.value = sum;
                if (ratio < Real("0.9")) {
                    res.tail_estimate = ratio > 0 ? Real(a * ratio / (1 - ratio)) : Real(0);
                    res.status = res.tail_estimate < pol.tail_tol ? SeriesStatus::Converged
                                                                  : SeriesStatus::Truncated;
                } else {
                    res.tail_estimate = a;
                    res.status = SeriesStatus::Truncated;
                }
                return res;
            }
        } else {
            small = 0;
        }
        if (k > 0 && a > prev_abs && a > grow_floor) {
            if (++growing >= 8) {
                res.value = sum;
                res.tail_estimate = a;
                res.status = SeriesStatus::Truncated;
                return res;
            }
        } else {
            growing = 0;
        }
        prev_abs = a;
    }
    throw NonConvergence("series did not meet tail tolerance within " +
                         std::to_string(pol.max_terms) + " terms");
}

template <class TermFn>
SeriesResult sum_unilateral(TermFn&& term, const TruncationPolicy& pol) {
    return sum_one_sided(term, pol, 0, 1);
}

template <class TermFn>
SeriesResult sum_bilateral(TermFn&& term, const TruncationPolicy& pol) {
    SeriesResult pos = sum_one_sided(term, pol, 0, 1);
    SeriesResult neg = sum_one_sided(term, pol, -1, -1);
    SeriesResult res;
    res.value = pos.value + neg.value;
    res.terms_used = pos.terms_used + neg.terms_used;
    res.tail_estimate = pos.tail_estimate + neg.tail_estimate;
    res.status = worst_status(pos.status, neg.status);
    res.near_pole = pos.near_pole || neg.near_pole;
    return res;
}

} // namespace detail

} // namespace qmt
