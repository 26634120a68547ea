#pragma once

#include <boost/multiprecision/mpfr.hpp>

#include <string>
#include <string_view>
#include <utility>

#include "qmt/errors.hpp"

namespace qmt {

// Arbitrary-precision real scalar. Precision (decimal digits) is process-wide
// and must be set once, before any value is computed.
using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                           boost::multiprecision::et_off>;

// Sets the working precision in decimal digits (minimum 30).
void set_precision(unsigned digits10);
unsigned precision_digits();

// Complex scalar over Real: the value type of every series and product here.
// Arithmetic is closed and deterministic at fixed precision.
struct HPComplex {
    Real re{0};
    Real im{0};

    HPComplex() = default;
    HPComplex(int v) : re(v) {}
    HPComplex(long v) : re(v) {}
    HPComplex(Real r) : re(std::move(r)) {}
    HPComplex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
    explicit HPComplex(double v) : re(v) {}

    bool is_zero() const { return re.is_zero() && im.is_zero(); }
    bool is_real() const { return im.is_zero(); }

    HPComplex& operator+=(const HPComplex& o);
    HPComplex& operator-=(const HPComplex& o);
    HPComplex& operator*=(const HPComplex& o);
    HPComplex& operator/=(const HPComplex& o);
};

HPComplex operator+(const HPComplex& a, const HPComplex& b);
HPComplex operator-(const HPComplex& a, const HPComplex& b);
HPComplex operator*(const HPComplex& a, const HPComplex& b);
HPComplex operator/(const HPComplex& a, const HPComplex& b);
HPComplex operator-(const HPComplex& a);
bool operator==(const HPComplex& a, const HPComplex& b);

Real abs(const HPComplex& z);
HPComplex conj(const HPComplex& z);

// z^n by binary exponentiation; n < 0 inverts (DivisionByZero on z == 0).
HPComplex pow_int(const HPComplex& z, long n);

// Principal-branch transcendentals: log z = log|z| + i arg z, arg in (-pi, pi].
HPComplex exp(const HPComplex& z);
HPComplex log(const HPComplex& z);

// z^e = exp(e log z) on the principal branch; real positive z stays real.
HPComplex pow_real(const HPComplex& z, const Real& e);

// Decimal serialization; digits == 0 means the current working precision.
std::string real_str(const Real& x, unsigned digits = 0);
std::string to_string(const HPComplex& z, unsigned digits = 0);

// Parses "re", "imi", or "re+imi" / "re-imi" (exponents allowed, e.g. 1.5e-3+2e-4i).
HPComplex parse_complex(std::string_view text);

} // namespace qmt
