#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <type_traits>
#include <vector>

#include <boost/math/quadrature/sinh_sinh.hpp>

#include "detail/quadrature.hpp"
#include "errors.hpp"
#include "pisot_core.hpp"
#include "qcalc.hpp"

namespace pisotcs::moment
{
/*!
 * \file moment.hpp
 *
 * Positive measure solving x_n! = int t^n w_q(t) dt for the symmetric
 * q-integers x_n = s[n]_q.
 *
 * w_q is the multiplicative convolution of two pieces:
 *  - the atomic measure varpi_q with atoms t_j = q^{2j}/(1/q - q) and weights
 *    q^{2j} E_q(-t_j), whose moments are q^{n(n+1)/2} x_n!;
 *  - the density g_q (a Gaussian in ln t), whose moments are
 *    q^{-n(n+1)/2}.
 * Moments of a Mellin convolution multiply, so x_nu! for real nu is the
 * product of the two moment functions.  At q = 1 everything reduces to the
 * classical weight e^{-t} and Gamma(nu + 1).
 */

//! Smallest j with q^{2j} < tol.
inline int default_j_max(double q, double tol = 1e-18)
{
    if (!(q > 0 && q < 1))
    {
        throw OutOfDomain("atomic measure needs 0 < q < 1");
    }
    int j = static_cast<int>(std::ceil(std::log(tol) / (2 * std::log(q))));
    while (j > 0 && std::pow(q, 2.0 * (j - 1)) < tol)
        --j;
    while (std::pow(q, 2.0 * j) >= tol)
        ++j;
    return j;
}

//! Product of floating symmetric brackets s[1]_q ... s[n]_q.
inline double symmetric_factorial(double q, int n)
{
    double result = 1;
    for (int k = 1; k <= n; ++k)
        result *= qcalc::sym_bracket(q, k);
    return result;
}

struct Atom
{
    double position{};
    double weight{};
};

struct DiscreteMeasure
{
    double q{};
    int j_max{};
    std::vector<Atom> atoms;

    //! Single atom of mass 1 at u = 1 (identity of Mellin convolution).
    static DiscreteMeasure unit_mass() { return {1.0, 0, {{1.0, 1.0}}}; }

    //! sum_j t_j^nu weight_j
    double moment(double nu) const
    {
        double sum = 0;
        for (auto const& atom : atoms)
            sum += std::pow(atom.position, nu) * atom.weight;
        return sum;
    }

    //! ln of moment(nu), computed without underflow.
    double log_moment(double nu) const
    {
        double largest = -std::numeric_limits<double>::infinity();
        for (auto const& atom : atoms)
            largest = std::max(largest,
                               nu * std::log(atom.position)
                                   + std::log(atom.weight));
        double sum = 0;
        for (auto const& atom : atoms)
            sum += std::exp(nu * std::log(atom.position)
                            + std::log(atom.weight) - largest);
        return largest + std::log(sum);
    }
};

/*!
 * Atomic measure with atoms q^{2j}/(1/q - q) and weights
 * q^{2j} E_q(-q^{2j}/(1/q - q)) for j = 0..j_max, q^{2 j_max} < tol.
 *
 * The weights are positive: E_q(-t_j) = prod_{k>=0} (1 - q^{2(j+k+1)}).
 */
inline DiscreteMeasure varpi_measure_truncated(double q, int j_max)
{
    if (!(q > 0 && q < 1) || j_max < 0)
    {
        throw OutOfDomain("atomic measure needs 0 < q < 1 and j_max >= 0");
    }
    DiscreteMeasure measure{q, j_max, {}};
    measure.atoms.reserve(j_max + 1);
    double const gap = 1 / q - q;
    qcalc::QParam const qp{q};
    double q2j = 1;
    for (int j = 0; j <= j_max; ++j)
    {
        double const t = q2j / gap;
        measure.atoms.push_back({t, q2j * qcalc::sym_exp_product(qp, -t)});
        q2j *= q * q;
    }
    return measure;
}

inline DiscreteMeasure varpi_measure(double q, double tol = 1e-18)
{
    return varpi_measure_truncated(q, default_j_max(q, tol));
}

//! Density with moments q^{-n(n+1)/2}: Gaussian in ln t centred at ln sqrt(q).
inline double g_density(double q, double t)
{
    if (!(q > 0 && q < 1))
    {
        throw OutOfDomain("g_density needs 0 < q < 1");
    }
    if (!(t > 0))
    {
        throw OutOfDomain("g_density needs t > 0");
    }
    double const var = -std::log(q);
    double const u = std::log(t) - 0.5 * std::log(q);
    return std::exp(-u * u / (2 * var))
           / std::sqrt(2 * std::numbers::pi * var);
}

//! Closed-form moment int t^nu g_q(t) dt = q^{-nu(nu+1)/2}.
inline double g_moment(double q, double nu)
{
    return std::exp(-0.5 * nu * (nu + 1) * std::log(q));
}

/*!
 * The weight w_q(t) = (1/q - q) sum_j g_q(t (1/q - q)/q^{2j}) E_q(-t_j).
 *
 * At q = 1 this is e^{-t}.
 */
class WDensity
{
  public:
    explicit WDensity(double q)
        : WDensity(q, q == 1.0 ? 0 : default_j_max(q))
    {
    }

    WDensity(double q, int j_max) : q_{q}
    {
        if (!(q > 0 && q <= 1))
        {
            throw OutOfDomain("w density needs 0 < q <= 1");
        }
        if (q == 1.0)
        {
            return;
        }
        measure_ = varpi_measure_truncated(q, j_max);
        variance_ = -std::log(q);
        norm_ = 1 / std::sqrt(2 * std::numbers::pi * variance_);
        for (auto const& atom : measure_.atoms)
        {
            // Bump j: (weight_j / t_j) g_q(t / t_j)
            log_centers_.push_back(std::log(atom.position)
                                   + 0.5 * std::log(q));
            amplitudes_.push_back(atom.weight / atom.position * norm_);
        }
    }

    double q() const { return q_; }
    bool classical() const { return q_ == 1.0; }
    DiscreteMeasure const& measure() const { return measure_; }

    //! Log-scale centres of the individual bumps (empty at q = 1).
    std::vector<double> const& log_centers() const { return log_centers_; }
    //! Standard deviation of each bump in ln t (1 at q = 1).
    double log_width() const
    {
        return classical() ? 1.0 : std::sqrt(variance_);
    }

    double operator()(double t) const
    {
        if (!(t > 0))
        {
            throw OutOfDomain("w density needs t > 0");
        }
        if (classical())
        {
            return std::exp(-t);
        }
        double const lt = std::log(t);
        double sum = 0;
        for (std::size_t j = 0; j < amplitudes_.size(); ++j)
        {
            double const u = lt - log_centers_[j];
            sum += amplitudes_[j] * std::exp(-u * u / (2 * variance_));
        }
        return sum;
    }

  private:
    double q_{};
    DiscreteMeasure measure_;
    double variance_{1};
    double norm_{1};
    std::vector<double> log_centers_;
    std::vector<double> amplitudes_;
};

inline double w_density(double q, double t, int j_max)
{
    return WDensity(q, j_max)(t);
}

//---------------------------------------------------------------------------//
// Generalized factorials
//---------------------------------------------------------------------------//

//! ln x_nu! from the factorized moments; ln Gamma(nu + 1) at q = 1.
inline double
log_generalized_factorial(DiscreteMeasure const& varpi, double nu)
{
    if (!(nu >= 0))
    {
        throw OutOfDomain("generalized factorial needs nu >= 0");
    }
    if (varpi.q == 1.0)
    {
        return std::lgamma(nu + 1);
    }
    return -0.5 * nu * (nu + 1) * std::log(varpi.q) + varpi.log_moment(nu);
}

inline double log_generalized_factorial(double q, double nu)
{
    if (q > 1)
    {
        q = 1 / q;  // s[n]_q = s[n]_{1/q}
    }
    if (q == 1.0)
    {
        if (!(nu >= 0))
            throw OutOfDomain("generalized factorial needs nu >= 0");
        return std::lgamma(nu + 1);
    }
    return log_generalized_factorial(varpi_measure(q), nu);
}

//! x_nu! = q^{-nu(nu+1)/2} sum_j t_j^nu weight_j; Gamma(nu + 1) at q = 1.
inline double generalized_factorial(double q, double nu)
{
    return std::exp(log_generalized_factorial(q, nu));
}

//---------------------------------------------------------------------------//
// Mellin convolution
//---------------------------------------------------------------------------//

//! w(t) = sum_j weight_j a(t / t_j) / t_j
template<class A>
class AtomicMellinConvolution
{
  public:
    AtomicMellinConvolution(A a, DiscreteMeasure b)
        : a_{std::move(a)}, b_{std::move(b)}
    {
    }

    double operator()(double t) const
    {
        double sum = 0;
        for (auto const& atom : b_.atoms)
            sum += atom.weight * a_(t / atom.position) / atom.position;
        return sum;
    }

  private:
    A a_;
    DiscreteMeasure b_;
};

//! w(t) = int_0^inf a(t/u) b(u) du/u, evaluated in u = e^v by sinh-sinh.
template<class A, class B>
class DensityMellinConvolution
{
  public:
    DensityMellinConvolution(A a, B b) : a_{std::move(a)}, b_{std::move(b)}
    {
    }

    double operator()(double t) const
    {
        boost::math::quadrature::sinh_sinh<double> integrator;
        double error = 0;
        double const value = integrator.integrate(
            [&](double v) {
                double const u = std::exp(v);
                if (!(u > 0) || !std::isfinite(u))
                    return 0.0;
                double const arg = t / u;
                if (!(arg > 0) || !std::isfinite(arg))
                    return 0.0;
                return a_(arg) * b_(u);
            },
            1e-12,
            &error);
        if (!(error <= 1e-6 * std::abs(value) + 1e-300))
        {
            throw NonConvergent("mellin_convolve: quadrature did not "
                                "reach tolerance");
        }
        return value;
    }

  private:
    A a_;
    B b_;
};

template<class A>
AtomicMellinConvolution<A> mellin_convolve(A a, DiscreteMeasure b)
{
    return {std::move(a), std::move(b)};
}

template<class A, class B>
    requires std::is_invocable_r_v<double, B, double>
DensityMellinConvolution<A, B> mellin_convolve(A a, B b)
{
    return {std::move(a), std::move(b)};
}

//---------------------------------------------------------------------------//
// Direct quadrature against w_q
//---------------------------------------------------------------------------//

/*!
 * int_0^inf h(t) w_q(t) dt by adaptive quadrature in ln t.
 *
 * `order` is the power-law growth of h (h ~ t^order); it shifts each bump's
 * effective centre by (order + 1) |ln q| and sets the panel layout.
 */
template<class H>
detail::QuadratureResult integrate_against(WDensity const& w,
                                           H&& h,
                                           double order,
                                           double rel_tol = 1e-13)
{
    auto integrand = [&](double u) {
        double const t = std::exp(u);
        if (!(t > 0) || !std::isfinite(t))
            return 0.0;
        // h may overflow where the weight has already underflowed.
        double const wt = w(t);
        return wt == 0 ? 0.0 : h(t) * wt * t;
    };
    std::vector<double> centers;
    if (w.classical())
    {
        centers.push_back(std::log(order + 1));
    }
    else
    {
        double const shift = (order + 1) * w.log_width() * w.log_width();
        for (double c : w.log_centers())
            centers.push_back(c + shift);
    }
    return detail::integrate_line(
        integrand, centers, w.log_width(), rel_tol, "integrate_against");
}

//! int t^nu w_q(t) dt by direct quadrature.
inline double quadrature_moment(WDensity const& w, double nu)
{
    return integrate_against(
               w, [nu](double t) { return std::pow(t, nu); }, nu)
        .value;
}

struct MomentResidual
{
    int n{};
    double exact{};  //!< x_n!
    double quadrature{};  //!< direct quadrature of t^n w_q
    double factorized{};  //!< g-moment times varpi-moment
    double quadrature_residual{};
    double factorized_residual{};
};

namespace detail
{
inline MomentResidual
make_residual(WDensity const& w, int n, double exact, double factorized)
{
    MomentResidual r;
    r.n = n;
    r.exact = exact;
    r.quadrature = quadrature_moment(w, n);
    r.factorized = factorized;
    r.quadrature_residual = std::abs(r.quadrature - exact) / exact;
    r.factorized_residual = std::abs(r.factorized - exact) / exact;
    return r;
}
}  // namespace detail

/*!
 * Relative errors of the two routes to x_n! for the symmetric q-integers.
 *
 * The exact value is the floating product of symmetric brackets; use the
 * DeformationSpec overload to compare against exact Pisot integers.
 */
inline MomentResidual moment_residual(double q, int n)
{
    if (n < 0)
    {
        throw OutOfDomain("moment_residual needs n >= 0");
    }
    WDensity const w(q);
    double const exact = q == 1.0 ? std::tgamma(n + 1.0)
                                  : symmetric_factorial(q, n);
    double const factorized
        = q == 1.0 ? exact
                   : std::exp(log_generalized_factorial(w.measure(), n));
    return detail::make_residual(w, n, exact, factorized);
}

inline MomentResidual moment_residual(DeformationSpec const& spec, int n)
{
    if (spec.kind != DeformationKind::symmetric)
    {
        throw InvalidSpec("moment measure is defined for the symmetric "
                          "deformation");
    }
    if (n < 0)
    {
        throw OutOfDomain("moment_residual needs n >= 0");
    }
    double const q = solve_unit_quadratic(spec).q;
    auto const seq = pisot_sequence(spec, std::max(n, 1));
    WDensity const w(q);
    double const exact = seq.factorials[n].convert_to<double>();
    double const factorized
        = std::exp(log_generalized_factorial(w.measure(), n));
    return detail::make_residual(w, n, exact, factorized);
}

}  // namespace pisotcs::moment
