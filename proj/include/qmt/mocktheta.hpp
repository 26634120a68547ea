#pragma once

#include <string>

#include "qmt/hyper.hpp"

namespace qmt {

// The six mock theta functions, their one-parameter-family generalizations
// psi/phi-bar(t, alpha, z; q), and the complete (bilateral, n over all
// integers) forms. Classical series:
//
//   psi0(q) = sum q^{2n^2} / (-q;q)_{2n}
//   psi1(q) = sum q^{2n^2+2n} / (-q;q)_{2n+1}
//   psi2(q) = sum q^{2n^2+2n} (q;q^2)_n / [(q^2;q^2)_n (-q;q)_{2n}]
//   psi3(q) = sum q^{n^2} (-q;q)_n^2 / (q;q)_{2n}      [denominator variant:
//             (-q;q)_{2n}, which is the one the generalized family reduces to]
//   phi0(q) = sum q^n (-q;q)_{2n+1}
//   phi1(q) = sum q^n (-q;q)_{2n}
//
// Generalized summand (family psi0 shown; the others vary the exponent and
// Pochhammer structure):
//
//   psibar0(t,alpha,z;q) = 1/(t;q)_inf sum_{n>=0}
//       (t;q)_n q^{2n^2-3n+n*alpha} z^{2n} / (-z^2/q; q)_{2n}
//
// and the complete form extends the same sum over every integer n using the
// negative-index Pochhammer extension.

enum class Family { Psi0, Psi1, Psi2, Psi3, Phi0, Phi1 };
enum class FunctionVariant { Classical, Generalized, Complete };

struct FunctionId {
    Family family;
    FunctionVariant variant;
};

const char* family_name(Family f);          // "psi0" ... "phi1"
Family family_from_name(const std::string& name);
const char* variant_name(FunctionVariant v);
FunctionVariant variant_from_name(const std::string& name);

// Which denominator the classical psi3 series uses.
enum class Psi3Denominator { AsPrinted, NegatedBase }; // (q;q)_{2n} vs (-q;q)_{2n}

// One assignment of the free parameters. c1, c2 feed the expansion checks
// only; q^{n alpha} uses the principal branch of log q.
struct ParameterPoint {
    HPComplex q{};
    HPComplex z{};
    HPComplex t{};
    Real alpha{0};
    HPComplex c1{};
    HPComplex c2{};

    void validate() const; // UsageError on 0 < |q| < 1 or t = q^{-m} violations
};

enum class SumRange { Bilateral, NonNegativeOnly };

SeriesResult eval_classical(Family f, const HPComplex& q, const TruncationPolicy& pol,
                            Psi3Denominator psi3 = Psi3Denominator::AsPrinted);

// (1/(t)_inf) * sum_{n>=0}; PoleError when (t)_inf vanishes (t = q^{-m}).
SeriesResult eval_generalized(Family f, const ParameterPoint& p, const TruncationPolicy& pol);

// Bilateral form under the same 1/(t)_inf normalization. The n >= 0 partial
// sum (range = NonNegativeOnly) reproduces eval_generalized exactly.
SeriesResult eval_complete(Family f, const ParameterPoint& p, const TruncationPolicy& pol,
                           SumRange range = SumRange::Bilateral);

} // namespace qmt
