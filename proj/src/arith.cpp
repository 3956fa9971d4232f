#include "latvol/arith.hpp"

#include <boost/multiprecision/mpfr.hpp>
#include <iomanip>
#include <sstream>

namespace latvol {

Int vector_content(const IntVector& v)
{
    Int g = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (v(i) != 0)
            g = boost::multiprecision::gcd(g, v(i));
        if (g == 1)
            break;
    }
    return boost::multiprecision::abs(g);
}

Int make_primitive(IntVector& v)
{
    Int g = vector_content(v);
    if (g > 1)
        for (Eigen::Index i = 0; i < v.size(); ++i)
            exact_div(v(i), v(i), g);
    return g;
}

Int factorial(int n)
{
    Int f = 1;
    for (int i = 2; i <= n; ++i)
        f *= i;
    return f;
}

Int int_pow(const Int& base, int exp)
{
    Int r = 1;
    for (int i = 0; i < exp; ++i)
        r *= base;
    return r;
}

namespace {

using BigFloat = boost::multiprecision::mpfr_float;

std::string format_float(const BigFloat& x, int digits)
{
    std::ostringstream out;
    out << std::setprecision(digits) << x;
    return out.str();
}

} // namespace

std::string decimal_string(const Rat& q, int digits)
{
    if (digits < 1)
        digits = 1;
    BigFloat::default_precision(digits + 10);
    BigFloat num(numerator(q).str());
    BigFloat den(denominator(q).str());
    return format_float(num / den, digits);
}

std::string decimal_string_sqrt(const Rat& q, const Int& gram, int digits)
{
    if (digits < 1)
        digits = 1;
    BigFloat::default_precision(digits + 10);
    BigFloat num(numerator(q).str());
    BigFloat den(denominator(q).str());
    BigFloat g(gram.str());
    return format_float(num / den * sqrt(g), digits);
}

} // namespace latvol
