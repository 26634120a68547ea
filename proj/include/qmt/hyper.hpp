#pragma once

#include <vector>

#include "qmt/qcore.hpp"

namespace qmt {

// Generic unilateral A-phi-(A-1) and bilateral 2-psi-2 evaluators.
//
//   A_phi_{A-1}[a1..aA; b1..b_{A-1}; q, z] =
//       sum_{n>=0} (a1;q)_n ... (aA;q)_n z^n / [(b1;q)_n ... (q;q)_n]
//
//   2_psi_2[a1,a2; b1,b2; q, z] =
//       sum_{n=-inf..inf} (a1;q)_n (a2;q)_n z^n / [(b1;q)_n (b2;q)_n]
//
// A numerator parameter may be a formal limit to infinity; the stored z is
// then the already-rescaled argument and each infinite slot contributes the
// limiting factor (-1)^n q^{n(n-1)/2} (valid for every integer n).

// A series parameter: a finite complex value or a formal limit to infinity.
struct Param {
    HPComplex value{};
    bool infinite{false};

    Param() = default;
    Param(HPComplex v) : value(std::move(v)) {}
    Param(int v) : value(v) {}

    static Param infinity() {
        Param p;
        p.infinite = true;
        return p;
    }
};

struct PhiSpec {
    std::vector<Param> numerators;
    std::vector<HPComplex> denominators;
    QBase base;
    HPComplex z;
};

struct Psi2Spec {
    Param a1, a2;
    HPComplex b1, b2;
    QBase base;
    HPComplex z;
};

// Lower edge of the convergence annulus |b1 b2| / (|a1| |a2|) with infinite
// slots contributing no magnitude (their 1/a has been folded into z).
Real psi2_annulus_lower(const Psi2Spec& spec);

// Unilateral series under the policy. The |z| < 1 requirement applies only
// when every numerator parameter is finite (infinite slots supply q^{n^2}
// decay). Throws UsageError on a violated precondition, PoleError on a zero
// denominator factor, NonConvergence when max_terms runs out.
SeriesResult phi_eval(const PhiSpec& spec, const TruncationPolicy& pol);

// Bilateral series, summed as two one-sided series. Throws AnnulusViolation
// when |z| is outside (annulus_lower, 1) -- the upper bound drops away when a
// numerator slot is infinite. PoleError signals a singular negative-index
// numerator Pochhammer. Terms whose denominator Pochhammer is infinite
// (reciprocal of zero) are exactly 0.
SeriesResult psi2_eval(const Psi2Spec& spec, const TruncationPolicy& pol);

} // namespace qmt
