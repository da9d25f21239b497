#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "errors.hpp"

namespace pisotcs
{
using BigInt = boost::multiprecision::cpp_int;

//---------------------------------------------------------------------------//
// Deformation families
//---------------------------------------------------------------------------//

enum class DeformationKind
{
    symmetric,  //!< r = +1, s >= 3: bosonic q-integers
    fermionic,  //!< r = -1, s >= 1: antisymmetric q-integers
    standard_asymmetric,  //!< [n]_q = (1 - q^n)/(1 - q)
    general_qp  //!< [[n]]_{qp} with arbitrary integer (s, r)
};

inline char const* to_string(DeformationKind kind)
{
    switch (kind)
    {
        case DeformationKind::symmetric:
            return "symmetric";
        case DeformationKind::fermionic:
            return "fermionic";
        case DeformationKind::standard_asymmetric:
            return "standard_asymmetric";
        case DeformationKind::general_qp:
            return "general_qp";
    }
    return "unknown";
}

/*!
 * Integer pair (s, r) of the quadratic X^2 - s X + r = 0 whose roots (p, q)
 * define the deformation [[n]]_{qp} = (p^n - q^n)/(p - q).
 */
struct DeformationSpec
{
    std::int64_t s{3};
    std::int64_t r{1};
    DeformationKind kind{DeformationKind::symmetric};

    static DeformationSpec bosonic(std::int64_t s)
    {
        return {s, 1, DeformationKind::symmetric};
    }
    static DeformationSpec fermionic(std::int64_t s)
    {
        return {s, -1, DeformationKind::fermionic};
    }

    std::int64_t discriminant() const { return s * s - 4 * r; }

    //! Throw DegenerateSpec / InvalidSpec unless the pair is admissible.
    void validate() const
    {
        if (s == 2 && r == 1)
        {
            throw DegenerateSpec("s = 2, r = +1 gives p = q = 1");
        }
        switch (kind)
        {
            case DeformationKind::symmetric:
                if (r != 1 || s < 3)
                    throw InvalidSpec("symmetric deformation needs r = +1 "
                                      "and s >= 3");
                break;
            case DeformationKind::fermionic:
                if (r != -1 || s < 1)
                    throw InvalidSpec("fermionic deformation needs r = -1 "
                                      "and s >= 1");
                break;
            case DeformationKind::general_qp:
                if (s < 1 || r == 0 || discriminant() <= 0)
                    throw InvalidSpec("general qp deformation needs s >= 1, "
                                      "r != 0 and distinct real roots");
                break;
            case DeformationKind::standard_asymmetric:
                throw InvalidSpec("the standard q-deformation has no integer "
                                  "(s, r) representation");
        }
    }

    bool operator==(DeformationSpec const&) const = default;
};

/*!
 * Roots of a quadratic X^2 - trace X + norm = 0 with p > |q|.
 *
 * The exact surd form is p, q = (trace +- sqrt(discriminant)) / 2.
 */
struct RootPair
{
    double p{};
    double q{};
    std::int64_t trace{};
    std::int64_t norm{};

    std::int64_t discriminant() const { return trace * trace - 4 * norm; }
};

//! Roots of X^2 - s X + r = 0 for a unit (r = +-1) quadratic Pisot number.
inline RootPair solve_unit_quadratic(DeformationSpec const& spec)
{
    if (spec.r != 1 && spec.r != -1)
    {
        throw InvalidSpec("unit quadratic needs r = +1 or r = -1");
    }
    if (spec.s == 2 && spec.r == 1)
    {
        throw DegenerateSpec("s = 2, r = +1 gives p = q = 1");
    }
    if (spec.s < 1 || (spec.r == 1 && spec.s < 3))
    {
        throw InvalidSpec("unit quadratic needs s >= 3 for r = +1 and "
                          "s >= 1 for r = -1");
    }
    double const s = static_cast<double>(spec.s);
    double const root = std::sqrt(static_cast<double>(spec.discriminant()));
    double const p = 0.5 * (s + root);
    // Conjugate from the norm avoids cancellation in s - sqrt(s^2 - 4r).
    double const q = static_cast<double>(spec.r) / p;
    return {p, q, spec.s, spec.r};
}

//---------------------------------------------------------------------------//
// Integer sequences
//---------------------------------------------------------------------------//

/*!
 * Exact values u_0..u_N of u_{n+1} = s u_n - r u_{n-1}, u_0 = 0, u_1 = 1,
 * with the running products u_n! = u_1 ... u_n.
 */
struct PisotSequence
{
    DeformationSpec spec;
    std::vector<BigInt> values;
    std::vector<BigInt> factorials;

    std::size_t size() const { return values.size(); }
    BigInt const& operator[](std::size_t n) const { return values[n]; }
};

inline PisotSequence pisot_sequence(DeformationSpec const& spec, int n_max)
{
    spec.validate();
    if (n_max < 1)
    {
        throw InvalidSpec("pisot_sequence needs n_max >= 1");
    }
    PisotSequence result{spec, {}, {}};
    result.values.reserve(n_max + 1);
    result.factorials.reserve(n_max + 1);
    result.values.emplace_back(0);
    result.values.emplace_back(1);
    for (int n = 1; n < n_max; ++n)
    {
        result.values.push_back(spec.s * result.values[n]
                                - spec.r * result.values[n - 1]);
    }
    result.factorials.emplace_back(1);
    for (int n = 1; n <= n_max; ++n)
    {
        result.factorials.push_back(result.factorials.back()
                                    * result.values[n]);
    }
    return result;
}

//! Natural logarithm of a positive big integer without overflowing double.
inline double log_of(BigInt const& value)
{
    if (value <= 0)
    {
        throw OutOfDomain("log_of needs a positive integer");
    }
    std::size_t const bits = boost::multiprecision::msb(value) + 1;
    if (bits <= 1000)
    {
        return std::log(value.convert_to<double>());
    }
    std::size_t const shift = bits - 64;
#if defined(__GNUC__) && !defined(__clang__)
// GCC 11 misreads the limb copy inside cpp_int's right shift.
#    pragma GCC diagnostic push
#    pragma GCC diagnostic ignored "-Wstringop-overflow"
#    pragma GCC diagnostic ignored "-Wstringop-overread"
#endif
    BigInt const top = value >> shift;
#if defined(__GNUC__) && !defined(__clang__)
#    pragma GCC diagnostic pop
#endif
    return std::log(top.convert_to<double>())
           + static_cast<double>(shift) * std::log(2.0);
}

//---------------------------------------------------------------------------//
// Deformed integers in floating point
//---------------------------------------------------------------------------//

/*!
 * Floating q-deformation of a nonnegative integer.
 *
 * - symmetric: (q^n - q^-n)/(q - q^-1), invariant under q -> 1/q
 * - fermionic: (q^n - (-1)^n q^-n)/(q + q^-1)
 * - standard_asymmetric: (1 - q^n)/(1 - q)
 *
 * At q = 1 the symmetric and standard kinds return n.  For the two-root
 * family use qp_integer().
 */
inline double deformed_integer(DeformationKind kind, double q, int n)
{
    if (n < 0)
    {
        throw OutOfDomain("deformed_integer needs n >= 0");
    }
    double const nn = static_cast<double>(n);
    switch (kind)
    {
        case DeformationKind::symmetric: {
            if (!(q > 0))
                throw OutOfDomain("symmetric deformation needs q > 0");
            if (q == 1.0)
                return nn;
            double const qq = q > 1 ? 1 / q : q;
            // (p^n - q^n)/(p - q) with p = 1/qq > 1
            double const p = 1 / qq;
            return (std::pow(p, nn) - std::pow(qq, nn)) / (p - qq);
        }
        case DeformationKind::fermionic: {
            if (q == 0)
                throw OutOfDomain("fermionic deformation needs q != 0");
            double const sign = (n % 2 == 0) ? 1.0 : -1.0;
            return (std::pow(q, nn) - sign * std::pow(q, -nn)) / (q + 1 / q);
        }
        case DeformationKind::standard_asymmetric: {
            if (q == 1.0)
                return nn;
            return (1 - std::pow(q, nn)) / (1 - q);
        }
        case DeformationKind::general_qp:
            throw InvalidSpec("general qp deformation needs both roots; use "
                              "qp_integer(p, q, n)");
    }
    return nn;
}

//! [[n]]_{qp} = (q^n - p^n)/(q - p); the limit n p^{n-1} when p == q.
inline double qp_integer(double p, double q, int n)
{
    if (n < 0)
    {
        throw OutOfDomain("qp_integer needs n >= 0");
    }
    double const nn = static_cast<double>(n);
    if (p == q)
    {
        return n == 0 ? 0.0 : nn * std::pow(p, nn - 1);
    }
    return (std::pow(q, nn) - std::pow(p, nn)) / (q - p);
}

//---------------------------------------------------------------------------//
// General (non-unit) quadratic Pisot numbers
//---------------------------------------------------------------------------//

enum class ConjugateCase
{
    positive_conjugate,  //!< X^2 - (a+1) X + (a-b) = 0, a >= b+1, b > 0
    negative_conjugate  //!< X^2 - c X - d = 0, c >= d >= 1
};

struct GeneralPisotParams
{
    ConjugateCase conjugate{ConjugateCase::negative_conjugate};
    std::int64_t first{1};  //!< a or c
    std::int64_t second{1};  //!< b or d

    static GeneralPisotParams positive(std::int64_t a, std::int64_t b)
    {
        return {ConjugateCase::positive_conjugate, a, b};
    }
    static GeneralPisotParams negative(std::int64_t c, std::int64_t d)
    {
        return {ConjugateCase::negative_conjugate, c, d};
    }

    void validate() const
    {
        if (conjugate == ConjugateCase::positive_conjugate)
        {
            if (!(second > 0 && first >= second + 1))
                throw InvalidSpec("positive conjugate case needs a >= b + 1 "
                                  "and b > 0");
        }
        else if (!(first >= second && second >= 1))
        {
            throw InvalidSpec("negative conjugate case needs c >= d >= 1");
        }
    }

    //! Coefficient of X in X^2 - trace X + norm.
    std::int64_t trace() const
    {
        return conjugate == ConjugateCase::positive_conjugate ? first + 1
                                                              : first;
    }
    std::int64_t norm() const
    {
        return conjugate == ConjugateCase::positive_conjugate ? first - second
                                                              : -second;
    }
};

//! Pisot root beta > 1 and its conjugate beta'.
inline RootPair general_pisot_roots(GeneralPisotParams const& params)
{
    params.validate();
    double const a = static_cast<double>(params.first);
    double const b = static_cast<double>(params.second);
    double root;
    double sum;
    if (params.conjugate == ConjugateCase::positive_conjugate)
    {
        root = std::sqrt((a - 1) * (a - 1) + 4 * b);
        sum = a + 1;
    }
    else
    {
        root = std::sqrt(a * a + 4 * b);
        sum = a;
    }
    double const beta = 0.5 * (sum + root);
    double const conj = static_cast<double>(params.norm()) / beta;
    return {beta, conj, params.trace(), params.norm()};
}

//! Exact coefficients of beta^n = v beta + w, and beta^n + beta'^n.
struct PowerDecomposition
{
    BigInt v;
    BigInt w;
    BigInt power_sum;
};

inline PowerDecomposition
power_decomposition(GeneralPisotParams const& params, int n)
{
    params.validate();
    if (n < 0)
    {
        throw OutOfDomain("power_decomposition needs n >= 0");
    }
    // beta^2 = trace beta - norm, so v_{n+1} = trace v_n - norm v_{n-1}
    // and w_{n+1} = -norm v_n.
    std::int64_t const trace = params.trace();
    std::int64_t const norm = params.norm();
    if (n == 0)
    {
        return {BigInt(0), BigInt(1), BigInt(2)};
    }
    BigInt v_prev = 0;
    BigInt v = 1;
    for (int k = 1; k < n; ++k)
    {
        BigInt next = trace * v - norm * v_prev;
        v_prev = std::move(v);
        v = std::move(next);
    }
    BigInt w = -norm * v_prev;
    // beta^n + beta'^n = trace v_n - 2 norm v_{n-1}
    BigInt power_sum = trace * v - 2 * norm * v_prev;
    return {std::move(v), std::move(w), std::move(power_sum)};
}

}  // namespace pisotcs
