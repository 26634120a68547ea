#include "qmt/hpcomplex.hpp"

#include <algorithm>
#include <cctype>

namespace qmt {

void set_precision(unsigned digits10) {
    if (digits10 < 30)
        throw UsageError("precision must be at least 30 decimal digits, got " +
                         std::to_string(digits10));
    Real::default_precision(digits10);
}

unsigned precision_digits() { return Real::default_precision(); }

HPComplex& HPComplex::operator+=(const HPComplex& o) {
    re += o.re;
    im += o.im;
    return *this;
}

HPComplex& HPComplex::operator-=(const HPComplex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
}

HPComplex& HPComplex::operator*=(const HPComplex& o) {
    Real r = re * o.re - im * o.im;
    Real i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
}

HPComplex& HPComplex::operator/=(const HPComplex& o) {
    Real d = o.re * o.re + o.im * o.im;
    if (d.is_zero())
        throw DivisionByZero("complex division by zero");
    Real r = (re * o.re + im * o.im) / d;
    Real i = (im * o.re - re * o.im) / d;
    re = std::move(r);
    im = std::move(i);
    return *this;
}

HPComplex operator+(const HPComplex& a, const HPComplex& b) {
    HPComplex r = a;
    r += b;
    return r;
}

HPComplex operator-(const HPComplex& a, const HPComplex& b) {
    HPComplex r = a;
    r -= b;
    return r;
}

HPComplex operator*(const HPComplex& a, const HPComplex& b) {
    HPComplex r = a;
    r *= b;
    return r;
}

HPComplex operator/(const HPComplex& a, const HPComplex& b) {
    HPComplex r = a;
    r /= b;
    return r;
}

HPComplex operator-(const HPComplex& a) { return HPComplex(-a.re, -a.im); }

bool operator==(const HPComplex& a, const HPComplex& b) {
    return a.re == b.re && a.im == b.im;
}

Real abs(const HPComplex& z) {
    if (z.im.is_zero())
        return boost::multiprecision::abs(z.re);
    if (z.re.is_zero())
        return boost::multiprecision::abs(z.im);
    return boost::multiprecision::hypot(z.re, z.im);
}

HPComplex conj(const HPComplex& z) { return HPComplex(z.re, -z.im); }

HPComplex pow_int(const HPComplex& z, long n) {
    if (n == 0)
        return HPComplex(1);
    bool invert = n < 0;
    unsigned long e = invert ? static_cast<unsigned long>(-(n + 1)) + 1ul
                             : static_cast<unsigned long>(n);
    HPComplex base = z;
    HPComplex acc(1);
    while (e != 0) {
        if (e & 1ul)
            acc *= base;
        e >>= 1;
        if (e != 0)
            base *= base;
    }
    if (invert) {
        if (acc.is_zero())
            throw DivisionByZero("0 raised to a negative power");
        return HPComplex(1) / acc;
    }
    return acc;
}

HPComplex exp(const HPComplex& z) {
    Real m = boost::multiprecision::exp(z.re);
    if (z.im.is_zero())
        return HPComplex(m);
    return HPComplex(m * boost::multiprecision::cos(z.im),
                     m * boost::multiprecision::sin(z.im));
}

HPComplex log(const HPComplex& z) {
    if (z.is_zero())
        throw DivisionByZero("log of zero");
    if (z.im.is_zero() && z.re > 0)
        return HPComplex(boost::multiprecision::log(z.re));
    return HPComplex(boost::multiprecision::log(abs(z)),
                     boost::multiprecision::atan2(z.im, z.re));
}

HPComplex pow_real(const HPComplex& z, const Real& e) {
    if (e.is_zero())
        return HPComplex(1);
    if (z.is_zero())
        return HPComplex(0);
    if (z.im.is_zero() && z.re > 0)
        return HPComplex(boost::multiprecision::exp(e * boost::multiprecision::log(z.re)));
    return exp(HPComplex(e) * log(z));
}

std::string real_str(const Real& x, unsigned digits) {
    if (digits == 0)
        digits = precision_digits();
    return x.str(digits, std::ios_base::scientific);
}

std::string to_string(const HPComplex& z, unsigned digits) {
    if (z.im.is_zero())
        return real_str(z.re, digits);
    std::string i = real_str(z.im, digits);
    std::string join = (!i.empty() && i[0] == '-') ? "" : "+";
    return real_str(z.re, digits) + join + i + "i";
}

namespace {

Real parse_real_part(std::string_view s) {
    if (s.empty())
        throw UsageError("empty numeric field");
    try {
        return Real(std::string(s));
    } catch (const std::exception&) {
        throw UsageError("cannot parse number '" + std::string(s) + "'");
    }
}

} // namespace

HPComplex parse_complex(std::string_view text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c)))
            s.push_back(c);
    if (s.empty())
        throw UsageError("empty complex literal");
    if (s.back() != 'i' && s.back() != 'I')
        return HPComplex(parse_real_part(s));
    s.pop_back(); // drop the trailing i; what remains is "re+im" or just "im"
    if (s.empty() || s == "+")
        return HPComplex(Real(0), Real(1));
    if (s == "-")
        return HPComplex(Real(0), Real(-1));
    // split at the last sign that is not a leading sign and not an exponent sign
    std::size_t split = std::string::npos;
    for (std::size_t k = s.size(); k-- > 1;) {
        char c = s[k];
        if ((c == '+' || c == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    if (split == std::string::npos)
        return HPComplex(Real(0), parse_real_part(s)); // pure imaginary
    std::string_view re_part(s.data(), split);
    std::string_view im_part(s.data() + split, s.size() - split);
    if (im_part == "+")
        return HPComplex(parse_real_part(re_part), Real(1));
    if (im_part == "-")
        return HPComplex(parse_real_part(re_part), Real(-1));
    return HPComplex(parse_real_part(re_part), parse_real_part(im_part));
}

} // namespace qmt
