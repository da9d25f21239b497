#pragma once

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/differentiation/finite_difference.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "detail/series.hpp"
#include "errors.hpp"

namespace pisotcs::qcalc
{
/*!
 * Deformation parameter with its truncation control.
 *
 * Implicitly constructible from a bare q so that every kernel can be called
 * as f(..., 0.5, ...) with the default tolerance.
 */
struct QParam
{
    double q{0.5};
    double tol{1e-16};
    int max_terms{10000};

    QParam(double q_value, double tol_value = 1e-16, int max = 10000)
        : q{q_value}, tol{tol_value}, max_terms{max}
    {
        if (!(q > 0) || !std::isfinite(q))
        {
            throw OutOfDomain("q must be a positive finite number");
        }
        if (!(tol > 0))
        {
            throw OutOfDomain("tolerance must be positive");
        }
    }

    SeriesControl control() const { return {tol, max_terms}; }
    bool classical() const { return q == 1.0; }

    //! Throw unless 0 < q < 1 (or q == 1 when the classical limit is allowed).
    void require_unit_interval(char const* what, bool allow_one = true) const
    {
        if (q > 1 || (q == 1 && !allow_one))
        {
            throw OutOfDomain(std::string(what) + " needs 0 < q < 1");
        }
    }
};

//---------------------------------------------------------------------------//
// Brackets and products
//---------------------------------------------------------------------------//

//! [x]_q = (1 - q^x)/(1 - q); x at q = 1.
inline double q_bracket(double q, double x)
{
    if (q == 1.0)
    {
        return x;
    }
    return -std::expm1(x * std::log(q)) / (1 - q);
}

//! Symmetric bracket (q^x - q^-x)/(q - q^-1); x at q = 1.
inline double sym_bracket(double q, double x)
{
    if (q == 1.0)
    {
        return x;
    }
    double const lq = std::log(q);
    return std::sinh(x * lq) / std::sinh(lq);
}

//! (a + b)_q^n = prod_{j<n} (a + q^j b).
inline double q_pochhammer(double a, double b, double q, int n)
{
    if (n < 0)
    {
        throw OutOfDomain("finite q-Pochhammer needs n >= 0");
    }
    double result = 1;
    double qj = 1;
    for (int j = 0; j < n; ++j)
    {
        result *= a + qj * b;
        qj *= q;
    }
    return result;
}

/*!
 * (1 + a)_q^infinity = prod_{j>=0} (1 + q^j a), truncated once
 * |q^j a| < tol.  The reported bound is the relative size of the omitted
 * factors, sum_{k>=j} |q^k a| = |q^j a| / (1 - q).
 */
inline SeriesResult q_pochhammer_infinite(double a, QParam const& qp)
{
    qp.require_unit_interval("infinite q-Pochhammer", false);
    double const q = qp.q;
    double result = 1;
    double factor = a;
    for (int j = 0; j < qp.max_terms; ++j)
    {
        if (std::abs(factor) < qp.tol)
        {
            return {result, j, std::abs(factor) / (1 - q)};
        }
        result *= 1 + factor;
        factor *= q;
    }
    throw NonConvergent("infinite q-Pochhammer: factors did not decay");
}

//! (1 + a)_q^t = (1 + a)_q^infinity / (1 + q^t a)_q^infinity for real t.
inline double q_pochhammer_real(double a, QParam const& qp, double t)
{
    qp.require_unit_interval("real-order q-Pochhammer", false);
    double const shifted = std::pow(qp.q, t) * a;
    // A vanishing denominator factor 1 + q^{t+j} a.
    double factor = shifted;
    for (int j = 0; j < qp.max_terms && std::abs(factor) >= qp.tol; ++j)
    {
        if (std::abs(1 + factor) < 64 * std::numeric_limits<double>::epsilon())
        {
            throw DivergentProduct("real-order q-Pochhammer: vanishing "
                                   "denominator factor");
        }
        factor *= qp.q;
    }
    return q_pochhammer_infinite(a, qp).value
           / q_pochhammer_infinite(shifted, qp).value;
}

//---------------------------------------------------------------------------//
// q-exponentials
//---------------------------------------------------------------------------//

enum class QExpKind
{
    e,  //!< sum x^n / [n]_q!
    E  //!< sum q^{n(n-1)/2} x^n / [n]_q!
};

/*!
 * Standard q-exponentials e_q^x and E_q^x.
 *
 * Series form, except for 0 < q < 1 and x < 0 where the product form is used.
 * For q < 1 the e-series converges for |x| < 1/(1-q) and E is entire; for
 * q > 1 the roles swap (E needs |x| < 1/(1 - 1/q)).  q = 1 gives exp(x).
 */
inline SeriesResult q_exp(QExpKind kind, QParam const& qp, double x)
{
    double const q = qp.q;
    if (qp.classical())
    {
        return {std::exp(x), 0, 0.0};
    }
    if (kind == QExpKind::e && q < 1 && std::abs(x) >= 1 / (1 - q))
    {
        throw OutOfDomain("e_q^x with q < 1 needs |x| < 1/(1-q)");
    }
    if (kind == QExpKind::E && q > 1 && std::abs(x) >= 1 / (1 - 1 / q))
    {
        throw OutOfDomain("E_q^x with q > 1 needs |x| < 1/(1-1/q)");
    }
    if (q < 1 && x < 0)
    {
        // The alternating series loses ~|x|/ln 10 digits near q = 1; the
        // product has only positive (e) or well-conditioned (E) factors.
        double const scaled = (1 - q) * x;
        if (kind == QExpKind::E)
        {
            return q_pochhammer_infinite(scaled, qp);
        }
        auto const denom = q_pochhammer_infinite(-scaled, qp);
        return {1 / denom.value, denom.terms_used, denom.truncation_bound};
    }
    if (kind == QExpKind::e)
    {
        return pisotcs::detail::sum_ratio_series(
            1.0,
            [&](int n) { return x / q_bracket(q, n + 1); },
            qp.control(),
            "e_q^x");
    }
    return pisotcs::detail::sum_ratio_series(
        1.0,
        [&](int n) { return std::pow(q, n) * x / q_bracket(q, n + 1); },
        qp.control(),
        "E_q^x");
}

//! Product forms for 0 < q < 1: E_q^x = (1+(1-q)x)_q^inf, e_q^x = 1/(1-(1-q)x)_q^inf.
inline double q_exp_product(QExpKind kind, QParam const& qp, double x)
{
    qp.require_unit_interval("product form of the q-exponential", false);
    double const scaled = (1 - qp.q) * x;
    if (kind == QExpKind::E)
    {
        return q_pochhammer_infinite(scaled, qp).value;
    }
    if (std::abs(x) >= 1 / (1 - qp.q))
    {
        throw OutOfDomain("e_q^x with q < 1 needs |x| < 1/(1-q)");
    }
    return 1 / q_pochhammer_infinite(-scaled, qp).value;
}

//---------------------------------------------------------------------------//
// q-gamma
//---------------------------------------------------------------------------//

/*!
 * Gamma_q(t) = (1-q)_q^{t-1} / (1-q)^{t-1} for 0 < q < 1, t > 0.
 *
 * Evaluated as a sum of log1p differences so that q close to 1 (which needs
 * ~|ln tol| / (1-q) factors) keeps full relative accuracy.  q = 1 returns
 * the Euler gamma function.
 */
inline double q_gamma(QParam const& qp, double t)
{
    if (!(t > 0))
    {
        throw OutOfDomain("q_gamma needs t > 0");
    }
    qp.require_unit_interval("q_gamma");
    if (qp.classical())
    {
        return std::tgamma(t);
    }
    double const q = qp.q;
    double const lq = std::log(q);
    // Factor count needed for q^j < tol, independent of max_terms.
    long const needed = static_cast<long>(std::ceil(std::log(qp.tol) / lq))
                        + 16;
    double log_sum = 0;
    double compensation = 0;
    double qa = q;  // q^{j+1}
    double qb = std::exp(t * lq);  // q^{j+t}
    for (long j = 0; j < needed; ++j)
    {
        // Kahan summation keeps the ~1e5-term sums accurate near q = 1.
        double const y = (std::log1p(-qa) - std::log1p(-qb)) - compensation;
        double const s = log_sum + y;
        compensation = (s - log_sum) - y;
        log_sum = s;
        qa *= q;
        qb *= q;
        if (qa < qp.tol && qb < qp.tol)
        {
            break;
        }
    }
    return std::exp(log_sum + (1 - t) * std::log1p(-q));
}

//---------------------------------------------------------------------------//
// q-derivatives
//---------------------------------------------------------------------------//

//! (D_q f)(x) = (f(qx) - f(x)) / ((q-1) x); ordinary derivative at q = 1.
template<class F>
double q_derivative(F&& f, double q, double x)
{
    if (x == 0)
    {
        throw OutOfDomain("q_derivative is undefined at x = 0");
    }
    if (q == 1.0)
    {
        return boost::math::differentiation::finite_difference_derivative(
            [&](double y) { return f(y); }, x);
    }
    return (f(q * x) - f(x)) / ((q - 1) * x);
}

//! (f(qx) - f(x/q)) / ((q - 1/q) x); ordinary derivative at q = 1.
template<class F>
double sym_q_derivative(F&& f, double q, double x)
{
    if (x == 0)
    {
        throw OutOfDomain("sym_q_derivative is undefined at x = 0");
    }
    if (q == 1.0)
    {
        return boost::math::differentiation::finite_difference_derivative(
            [&](double y) { return f(y); }, x);
    }
    return (f(q * x) - f(x / q)) / ((q - 1 / q) * x);
}

//---------------------------------------------------------------------------//
// q-integrals
//---------------------------------------------------------------------------//

namespace detail
{
template<class F>
SeriesResult classical_integral(F&& f, double a)
{
    double error = 0;
    double const value
        = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
            [&](double x) { return f(x); }, 0.0, a, 20, 1e-14, &error);
    return {value, 0, error};
}

template<class F>
SeriesResult classical_improper(F&& f)
{
    boost::math::quadrature::exp_sinh<double> integrator;
    double error = 0;
    double const value = integrator.integrate(
        [&](double x) { return f(x); }, 1e-14, &error);
    return {value, 0, error};
}

}  // namespace detail

/*!
 * Jackson integral over [0, a]: (1-q) sum_{j>=0} a q^j f(a q^j).
 *
 * Converges when |f(x)| < C x^alpha near 0 with alpha > -1.
 */
template<class F>
SeriesResult jackson_integral(F&& f, QParam const& qp, double a)
{
    qp.require_unit_interval("jackson_integral");
    if (qp.classical())
    {
        return detail::classical_integral(f, a);
    }
    double const q = qp.q;
    double node = a;
    auto result = pisotcs::detail::sum_series(
        [&](int) {
            double const term = node * f(node);
            node *= q;
            return term;
        },
        qp.control(),
        "jackson_integral");
    result.value *= 1 - q;
    result.truncation_bound *= 1 - q;
    return result;
}

//! Jackson integral over [a, b] as the difference of two [0, .] integrals.
template<class F>
SeriesResult jackson_integral_ab(F&& f, QParam const& qp, double a, double b)
{
    auto const upper = jackson_integral(f, qp, b);
    auto const lower = jackson_integral(f, qp, a);
    return {upper.value - lower.value,
            upper.terms_used + lower.terms_used,
            upper.truncation_bound + lower.truncation_bound};
}

/*!
 * Improper Jackson integral (1-q) sum_{n in Z} (q^n/A) f(q^n/A).
 *
 * The value generally depends on A; no attempt is made to remove that
 * dependence.
 */
template<class F>
SeriesResult jackson_improper(F&& f, QParam const& qp, double A)
{
    qp.require_unit_interval("jackson_improper");
    if (!(A > 0))
    {
        throw OutOfDomain("jackson_improper needs A > 0");
    }
    if (qp.classical())
    {
        return detail::classical_improper(f);
    }
    double const q = qp.q;
    double down = 1 / A;
    auto const toward_zero = pisotcs::detail::sum_series(
        [&](int) {
            double const term = down * f(down);
            down *= q;
            return term;
        },
        qp.control(),
        "jackson_improper (n >= 0)");
    double up = 1 / (q * A);
    auto const toward_infinity = pisotcs::detail::sum_series(
        [&](int) {
            double const term = up * f(up);
            up /= q;
            return term;
        },
        qp.control(),
        "jackson_improper (n < 0)");
    return {(1 - q) * (toward_zero.value + toward_infinity.value),
            toward_zero.terms_used + toward_infinity.terms_used,
            (1 - q)
                * (toward_zero.truncation_bound
                   + toward_infinity.truncation_bound)};
}

//! Symmetric q-integral (1-q^2) a sum_{n>=0} q^{2n} f(q^{2n+1} a).
template<class F>
SeriesResult sym_q_integral(F&& f, QParam const& qp, double a)
{
    qp.require_unit_interval("sym_q_integral");
    if (qp.classical())
    {
        return detail::classical_integral(f, a);
    }
    double const q = qp.q;
    double const q2 = q * q;
    double weight = 1;
    double node = q * a;
    auto result = pisotcs::detail::sum_series(
        [&](int) {
            double const term = weight * f(node);
            weight *= q2;
            node *= q2;
            return term;
        },
        qp.control(),
        "sym_q_integral");
    double const scale = (1 - q2) * a;
    result.value *= scale;
    result.truncation_bound *= std::abs(scale);
    return result;
}

//! Improper symmetric q-integral (1-q^2) sum_{n in Z} (q^{2n}/A) f(q^{2n+1}/A).
template<class F>
SeriesResult sym_q_integral_improper(F&& f, QParam const& qp, double A)
{
    qp.require_unit_interval("sym_q_integral_improper");
    if (!(A > 0))
    {
        throw OutOfDomain("sym_q_integral_improper needs A > 0");
    }
    if (qp.classical())
    {
        return detail::classical_improper(f);
    }
    double const q = qp.q;
    double const q2 = q * q;
    double w_down = 1 / A;
    double x_down = q / A;
    auto const toward_zero = pisotcs::detail::sum_series(
        [&](int) {
            double const term = w_down * f(x_down);
            w_down *= q2;
            x_down *= q2;
            return term;
        },
        qp.control(),
        "sym_q_integral_improper (n >= 0)");
    double w_up = 1 / (q2 * A);
    double x_up = 1 / (q * A);
    auto const toward_infinity = pisotcs::detail::sum_series(
        [&](int) {
            double const term = w_up * f(x_up);
            w_up /= q2;
            x_up /= q2;
            return term;
        },
        qp.control(),
        "sym_q_integral_improper (n < 0)");
    return {(1 - q2) * (toward_zero.value + toward_infinity.value),
            toward_zero.terms_used + toward_infinity.terms_used,
            (1 - q2)
                * (toward_zero.truncation_bound
                   + toward_infinity.truncation_bound)};
}

//---------------------------------------------------------------------------//
// Symmetric exponentials
//---------------------------------------------------------------------------//

enum class SymExpKind
{
    e_frak,  //!< sum x^n / s[n]_q!  (the normalization N_q)
    E_frak  //!< sum q^{n(n+1)/2} x^n / s[n]_q!  (auxiliary exponential)
};

/*!
 * Series form of the symmetric exponentials.
 *
 * The e-kind is entire for every q > 0.  The E-kind is entire for q <= 1 and
 * has radius 1/(q - 1/q) for q > 1.
 */
inline SeriesResult sym_exp(SymExpKind kind, QParam const& qp, double x)
{
    double const q = qp.q;
    if (qp.classical())
    {
        return {std::exp(x), 0, 0.0};
    }
    if (kind == SymExpKind::e_frak)
    {
        return pisotcs::detail::sum_ratio_series(
            1.0,
            [&](int n) { return x / sym_bracket(q, n + 1); },
            qp.control(),
            "sym_exp (e)");
    }
    if (q > 1 && std::abs(x) >= 1 / (q - 1 / q))
    {
        throw OutOfDomain("auxiliary exponential with q > 1 needs "
                          "|x| < 1/(q - 1/q)");
    }
    // q^m / s[m] written so that neither factor overflows.
    auto scaled_inverse = [q](int m) {
        if (q > 1)
            return (q - 1 / q) / (1 - std::pow(q, -2.0 * m));
        double const q2m = std::pow(q, 2.0 * m);
        return (1 / q - q) * q2m / (1 - q2m);
    };
    return pisotcs::detail::sum_ratio_series(
        1.0,
        [&](int n) { return x * scaled_inverse(n + 1); },
        qp.control(),
        "sym_exp (E)");
}

/*!
 * Product form of the auxiliary exponential,
 * prod_{j>=0} (1 + q^{2j+1} (1 - q^2) t) for 0 < q < 1.
 *
 * The product is entire; its first zero left of the origin sits at
 * -1/(q (1 - q^2)).  For q > 1 the reflection E_q(t) = 1/E_{1/q}(-q^2 t)
 * is used inside the radius; the argument scaling q^2 follows from
 * E_q(t) = E_{q^2}^{qt} and e_p^{-x} E_p^x = 1.
 */
inline double sym_exp_product(QParam const& qp, double t)
{
    double const q = qp.q;
    if (qp.classical())
    {
        return std::exp(t);
    }
    if (q > 1)
    {
        if (std::abs(t) >= 1 / (q - 1 / q))
        {
            throw OutOfDomain("auxiliary exponential with q > 1 needs "
                              "|t| < 1/(q - 1/q)");
        }
        QParam inverse = qp;
        inverse.q = 1 / q;
        return 1 / sym_exp_product(inverse, -q * q * t);
    }
    double const q2 = q * q;
    QParam squared = qp;
    squared.q = q2;
    return q_pochhammer_infinite(q * (1 - q2) * t, squared).value;
}

//---------------------------------------------------------------------------//
// Symmetric gamma
//---------------------------------------------------------------------------//

/*!
 * Gamma-type function built on the symmetric q-integral,
 * int_0^{1/(1-q^2)} x^{t-1} E_q(-x) s-d_q x.
 *
 * It equals q^{t-1} Gamma_{q^2}(t), obeys
 * g(t+1) = q^t s[t]_q g(t), and g(n+1) = q^{n(n+1)/2} s[n]_q!.
 */
inline double sym_gamma_tilde(QParam const& qp, double t)
{
    if (!(t > 0))
    {
        throw OutOfDomain("sym_gamma_tilde needs t > 0");
    }
    qp.require_unit_interval("sym_gamma_tilde");
    if (qp.classical())
    {
        return std::tgamma(t);
    }
    double const q2 = qp.q * qp.q;
    return sym_q_integral(
               [&](double x) {
                   return std::pow(x, t - 1) * sym_exp_product(qp, -x);
               },
               qp,
               1 / (1 - q2))
        .value;
}

}  // namespace pisotcs::qcalc
