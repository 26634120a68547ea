#pragma once

#include "qmt/identities.hpp"

namespace qmt {

// The continued fraction
//
//   K(lambda, beta; q^k) = 1 + (lambda q^k + beta)/((1-beta) + (lambda q^{2k} + beta)/((1-beta) + ...))
//
// evaluated by the three-term convergent recurrence, and the series ratio it
// represents:
//
//   K = beta + N/D,   N = sum q^{n^2} lambda^n / [(q;q)_n (-beta q;q)_n]
//                     D = sum q^{n^2+n} lambda^n / [(q;q)_n (-beta q;q)_n]
//
// (at beta = 0 this is the Rogers-Ramanujan ratio). The identity catalog's
// "7.1" asserts |K - (beta + N/D)| < assert_tol.

struct CFSpec {
    HPComplex lambda;
    HPComplex beta;
    QBase base;
    long depth{50};
};

struct CFResult {
    HPComplex value;
    Real stabilization; // |convergent(depth) - convergent(depth-1)|
    long depth{0};
};

// Depth-k convergent via A_k = d_k A_{k-1} + n_k A_{k-2} (same for B), with
// A_{-1} = 1, A_0 = 1, B_{-1} = 0, B_0 = 1 and periodic rescaling of (A, B)
// when magnitudes leave [1e-100, 1e100]. Throws Singularity when some B_k = 0.
CFResult cf_eval(const CFSpec& spec);

// The series ratio N/D (without the +beta shift). Throws PoleError when
// (-beta q; q)_n hits a zero factor and DivisionByZero when D vanishes.
HPComplex cf_series_ratio(const CFSpec& spec, const TruncationPolicy& pol);

// "7.1": verdict Pass iff |cf_eval(depth*) - (beta + cf_series_ratio)| <
// assert_tol, where depth* is the first depth at which consecutive
// convergents agree to assert_tol/100 (capped; the convergents approach the
// limit at the geometric rate |beta|, so the cap scales with 1/log|beta|).
ResidualRecord check_cf_7_1(const CFSpec& spec, const TruncationPolicy& pol,
                            const Real& assert_tol);

// Prefactors of the two-series decomposition of psi0bar / psi1bar complete
// forms (base q^2): S, T for psi0bar and S1, T1 for psi1bar, transcribed as
// quotients of infinite-product lists. Throws Singularity for |z| < 1e-6
// (the displayed 1/z^2 factors blow up) or a zero denominator product.
struct STPrefactors {
    HPComplex S, T, S1, T1;
};
STPrefactors st_prefactors(const ParameterPoint& p, const TruncationPolicy& pol);

// Substitution-consistent prefactors (candidate_fix channel): with these, the
// two-series decomposition with z^(-2n) sums reproduces the complete forms.
STPrefactors st_prefactors_derived(const ParameterPoint& p, const TruncationPolicy& pol);

// "7.4" / "7.5": continued fraction representations at t = 0. The Printed
// variant uses the displayed partial numerators (q^{2k} - q for "7.4",
// q^{k+1+alpha} - q for "7.5"); the Derived variant uses the numerators the
// stated substitution q -> q^2, lambda -> q^{1+alpha}, beta = -q produces
// (q^{2k+1+alpha} - q). sum_exponent selects the n*alpha (as displayed in the
// decomposition) or constant-alpha summand variant.
enum class SumExponent { NAlpha, Alpha };
ResidualRecord check_cf_representation(const std::string& id, const ParameterPoint& p,
                                       const TruncationPolicy& pol, TranscriptionVariant variant,
                                       SumExponent sum_exponent = SumExponent::NAlpha);

} // namespace qmt
