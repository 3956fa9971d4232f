#ifndef LATVOL_ARITH_HPP
#define LATVOL_ARITH_HPP

#include <Eigen/Dense>
#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <string>

namespace latvol {

// All arithmetic in this project is exact. Int is an arbitrary-precision
// signed integer, Rat a rational kept in lowest terms with positive
// denominator (GMP canonical form).
using Int = boost::multiprecision::mpz_int;
using Rat = boost::multiprecision::mpq_rational;

using IntMatrix = Eigen::Matrix<Int, Eigen::Dynamic, Eigen::Dynamic>;
using IntVector = Eigen::Matrix<Int, Eigen::Dynamic, 1>;
using RatMatrix = Eigen::Matrix<Rat, Eigen::Dynamic, Eigen::Dynamic>;
using RatVector = Eigen::Matrix<Rat, Eigen::Dynamic, 1>;

inline Int numerator(const Rat& q) { return boost::multiprecision::numerator(q); }
inline Int denominator(const Rat& q) { return boost::multiprecision::denominator(q); }

/// q = a/b as an exact rational (b may be negative or a non-divisor of a).
inline Rat make_rat(const Int& a, const Int& b) { return Rat(a) / Rat(b); }

/// Scalar product of two integer vectors. Written as an explicit loop so the
/// expression-template layer folds each step into a single mpz_addmul.
inline void dot_into(Int& acc, const IntVector& a, const IntVector& b)
{
    acc = 0;
    const Eigen::Index n = a.size();
    for (Eigen::Index i = 0; i < n; ++i)
        acc += a(i) * b(i);
}

inline Int dot(const IntVector& a, const IntVector& b)
{
    Int acc;
    dot_into(acc, a, b);
    return acc;
}

/// acc = a . (row of m), without materializing the row.
inline void dot_row_into(Int& acc, const IntVector& a, const IntMatrix& m, Eigen::Index row)
{
    acc = 0;
    const Eigen::Index n = a.size();
    for (Eigen::Index j = 0; j < n; ++j)
        acc += a(j) * m(row, j);
}

/// Quotient a/b under the promise that b divides a exactly.
inline void exact_div(Int& q, const Int& a, const Int& b)
{
    mpz_divexact(q.backend().data(), a.backend().data(), b.backend().data());
}

/// gcd of the absolute values of the entries; 0 for the zero vector.
Int vector_content(const IntVector& v);

/// Divides v by its content (no-op on the zero vector); returns the content.
Int make_primitive(IntVector& v);

Int factorial(int n);
Int int_pow(const Int& base, int exp);

/// Exact rational rendered as a decimal string with `digits` significant
/// digits, e.g. "0.312832958..." -> "0.312833" at 6 digits.
std::string decimal_string(const Rat& q, int digits);

/// Decimal string of q * sqrt(gram) to `digits` significant digits.
/// Used for Euclidean volumes of lower-dimensional polytopes, where the
/// exact value lives in a quadratic extension.
std::string decimal_string_sqrt(const Rat& q, const Int& gram, int digits);

} // namespace latvol

#endif
