#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "pisotcs/qcalc.hpp"
#include "support/oracles.hpp"

using namespace pisotcs;
using namespace pisotcs::qcalc;

namespace
{
double poly(std::vector<double> const& c, double x)
{
    double v = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it)
        v = v * x + *it;
    return v;
}

std::vector<double> random_poly(oracle::Gen& gen, int degree)
{
    std::vector<double> c(degree + 1);
    for (auto& v : c)
        v = gen.real(-2, 2);
    return c;
}

std::vector<double> const paper_q{(3 - std::sqrt(5.0)) / 2, 2 - std::sqrt(3.0),
                                  (5 - std::sqrt(21.0)) / 2};
}  // namespace

//---------------------------------------------------------------------------//
// Brackets and q-Pochhammer symbols
//---------------------------------------------------------------------------//

TEST(Brackets, StandardAndSymmetric)
{
    EXPECT_DOUBLE_EQ(q_bracket(0.5, 3), 1.75);
    EXPECT_DOUBLE_EQ(q_bracket(1.0, 2.5), 2.5);
    for (double q : paper_q)
    {
        for (int n = 0; n < 20; ++n)
        {
            EXPECT_LE(oracle::rel(sym_bracket(q, n),
                                  static_cast<double>(oracle::sym_int(q, n))),
                      1e-14);
            EXPECT_NEAR(sym_bracket(q, n), sym_bracket(1 / q, n),
                        1e-14 * std::max(1.0, sym_bracket(q, n)));
        }
    }
}

TEST(Pochhammer, FiniteProduct)
{
    // (1 + 2)(1 + 1)(1 + 0.5) for (a, b, q) = (1, 2, 0.5)
    EXPECT_DOUBLE_EQ(q_pochhammer(1, 2, 0.5, 3), 3 * 2 * 1.5);
    EXPECT_DOUBLE_EQ(q_pochhammer(1, 2, 0.5, 0), 1);
    EXPECT_THROW(q_pochhammer(1, 2, 0.5, -1), OutOfDomain);
}

TEST(Pochhammer, InfiniteProductAgainstReference)
{
    // mpmath qp(0.5, 0.5) = prod (1 - 0.5^{j+1}) ... with a = -0.5
    EXPECT_NEAR(q_pochhammer_infinite(-0.5, 0.5).value, 0.288788095086602, 1e-14);
    for (double q : {0.1, 0.5, 0.9, 0.99})
    {
        for (double a : {-0.9, -0.3, 0.4, 2.5})
        {
            auto const r = q_pochhammer_infinite(a, q);
            EXPECT_LE(oracle::rel(r.value, static_cast<double>(
                                               oracle::pochhammer_inf(-a, q))),
                      1e-12)
                << "q=" << q << " a=" << a;
            EXPECT_GT(r.terms_used, 0);
        }
    }
    EXPECT_THROW(q_pochhammer_infinite(0.5, 1.0), OutOfDomain);
}

TEST(Pochhammer, RealOrderMatchesFiniteForIntegers)
{
    for (int n = 0; n < 8; ++n)
    {
        double const expected = q_pochhammer(1, -0.3, 0.6, n);
        EXPECT_NEAR(q_pochhammer_real(-0.3, 0.6, n), expected, 1e-14);
    }
    // 1 + q^{t+j} a = 0 at j = 0 for a = -q^{-t}.
    EXPECT_THROW(q_pochhammer_real(-1 / std::pow(0.5, 1.5), 0.5, 1.5),
                 DivergentProduct);
}

//---------------------------------------------------------------------------//
// q-exponentials
//---------------------------------------------------------------------------//

TEST(QExp, ReferenceValue)
{
    EXPECT_NEAR(q_exp(QExpKind::e, 0.5, 1.0).value, 3.4627466, 5e-8);
}

TEST(QExp, SeriesEqualsProduct)
{
    for (double q : {0.2, 0.5, 0.8})
    {
        for (double x : {-1.1, -0.3, 0.0, 0.6, 1.0})
        {
            if (std::abs(x) < 1 / (1 - q))
                EXPECT_LE(oracle::rel(q_exp(QExpKind::e, q, x).value,
                                      q_exp_product(QExpKind::e, q, x)),
                          1e-13);
            EXPECT_LE(oracle::rel(q_exp(QExpKind::E, q, 3 * x).value,
                                  q_exp_product(QExpKind::E, q, 3 * x)),
                      1e-12);
        }
    }
}

TEST(QExp, ReciprocalIdentity)
{
    // e_q^x E_q^{-x} = 1
    oracle::Gen gen(21);
    for (int trial = 0; trial < 300; ++trial)
    {
        double const q = gen.real(0.05, 0.95);
        double const x = gen.real(-0.95, 0.95) / (1 - q);
        double const prod = q_exp(QExpKind::e, q, x).value
                            * q_exp(QExpKind::E, q, -x).value;
        EXPECT_NEAR(prod, 1, 1e-11) << "q=" << q << " x=" << x;
    }
}

TEST(QExp, DomainAndClassicalLimit)
{
    EXPECT_THROW(q_exp(QExpKind::e, 0.5, 2.0), OutOfDomain);
    EXPECT_THROW(q_exp(QExpKind::E, 2.0, 2.0), OutOfDomain);
    EXPECT_DOUBLE_EQ(q_exp(QExpKind::E, 1.0, 0.7).value, std::exp(0.7));
    // Close to q = 1 the series approaches exp.
    EXPECT_NEAR(q_exp(QExpKind::e, 0.999, 0.5).value, std::exp(0.5), 1e-3);
}

TEST(QExp, EigenfunctionOfJacksonDerivative)
{
    for (double q : {0.3, 0.7})
    {
        auto e = [&](double x) { return q_exp(QExpKind::e, q, x).value; };
        for (double x : {0.2, 0.9})
            EXPECT_NEAR(q_derivative(e, q, x), e(x), 1e-12);
        // D_q E_q^x = E_q^{qx}
        auto E = [&](double x) { return q_exp(QExpKind::E, q, x).value; };
        for (double x : {-1.0, 0.5, 2.0})
            EXPECT_NEAR(q_derivative(E, q, x), E(q * x), 1e-11);
    }
}

//---------------------------------------------------------------------------//
// q-gamma
//---------------------------------------------------------------------------//

TEST(QGamma, ReferenceValues)
{
    EXPECT_NEAR(q_gamma(0.5, 3.0), 1.5, 1e-14);  // [1]_q [2]_q
    EXPECT_NEAR(q_gamma(0.5, 2.5), 1.19059362502752, 1e-13);
    EXPECT_NEAR(q_gamma(0.5, 1.0), 1.0, 1e-15);
    EXPECT_DOUBLE_EQ(q_gamma(1.0, 4.5), std::tgamma(4.5));
    EXPECT_THROW(q_gamma(0.5, 0.0), OutOfDomain);
    EXPECT_THROW(q_gamma(1.5, 2.0), OutOfDomain);
}

TEST(QGamma, FunctionalEquation)
{
    // Gamma_q(t+1) = [t]_q Gamma_q(t)
    oracle::Gen gen(31);
    for (int trial = 0; trial < 300; ++trial)
    {
        double const q = gen.real(0.02, 0.98);
        double const t = gen.real(0.05, 7);
        double const lhs = q_gamma(q, t + 1);
        double const rhs = q_bracket(q, t) * q_gamma(q, t);
        EXPECT_LE(oracle::rel(lhs, rhs), 1e-10) << "q=" << q << " t=" << t;
    }
}

TEST(QGamma, IntegersGiveQFactorials)
{
    for (double q : paper_q)
    {
        double fact = 1;
        for (int n = 1; n <= 10; ++n)
        {
            EXPECT_LE(oracle::rel(q_gamma(q, n), fact), 1e-13);
            fact *= q_bracket(q, n);
        }
    }
}

TEST(QGamma, JacksonIntegralRepresentation)
{
    // Gamma_q(t) = int_0^{1/(1-q)} x^{t-1} E_q^{-qx} d_q x
    for (double q : {0.3, 0.5, 0.7})
    {
        for (double t : {0.5, 1.0, 2.3, 4.0})
        {
            auto const value = jackson_integral(
                [&](double x) {
                    return std::pow(x, t - 1)
                           * q_exp_product(QExpKind::E, q, -q * x);
                },
                q,
                1 / (1 - q));
            EXPECT_LE(oracle::rel(value.value, q_gamma(q, t)), 1e-12)
                << "q=" << q << " t=" << t;
        }
    }
}

TEST(QGamma, ApproachesEulerGamma)
{
    for (double t : {0.5, 2.0, 3.7})
        EXPECT_NEAR(q_gamma(0.9999, t), std::tgamma(t),
                    2e-3 * std::tgamma(t));
}

//---------------------------------------------------------------------------//
// Derivatives and integrals
//---------------------------------------------------------------------------//

TEST(JacksonIntegral, Monomials)
{
    for (double q : {0.1, 0.4, 0.75, 0.9})
    {
        for (int n = 0; n <= 8; ++n)
        {
            for (double a : {0.5, 1.0, 2.0})
            {
                double const expected
                    = std::pow(a, n + 1) / q_bracket(q, n + 1);
                auto const value = jackson_integral(
                    [n](double x) { return std::pow(x, n); }, q, a);
                EXPECT_LE(oracle::rel(value.value, expected), 1e-12)
                    << "q=" << q << " n=" << n << " a=" << a;
            }
        }
    }
}

TEST(JacksonIntegral, MatchesBruteForceSum)
{
    auto f = [](double x) { return std::cos(3 * x) / (1 + x); };
    for (double q : {0.3, 0.8})
    {
        double const oracle_value = static_cast<double>(oracle::jackson_sum(
            [&](long double x) { return std::cos(3 * x) / (1 + x); }, q, 1.7L));
        EXPECT_NEAR(jackson_integral(f, q, 1.7).value, oracle_value, 1e-13);
    }
    // Isolated zeros on the nodes do not stop the sum: sin(pi x / a) vanishes
    // at the first node x = a.
    double const a = 1.0;
    auto g = [&](double x) { return std::sin(std::numbers::pi * x / a); };
    double const brute = static_cast<double>(oracle::jackson_sum(
        [&](long double x) { return std::sin(std::numbers::pi * x / a); }, 0.5L,
        1.0L));
    EXPECT_NEAR(jackson_integral(g, 0.5, a).value, brute, 1e-14);
    EXPECT_GT(brute, 0.1);
}

TEST(JacksonIntegral, IntervalAndClassical)
{
    auto cube = [](double x) { return x * x * x; };
    double const q = 0.6;
    double const expected = (std::pow(2.0, 4) - std::pow(0.5, 4)) / q_bracket(q, 4);
    EXPECT_NEAR(jackson_integral_ab(cube, q, 0.5, 2.0).value, expected, 1e-12);
    EXPECT_NEAR(jackson_integral(cube, 1.0, 2.0).value, 4.0, 1e-13);
}

TEST(JacksonIntegral, ImproperScaleInvariance)
{
    // The bilateral sum over nodes q^n / A is unchanged under A -> A / q.
    auto f = [](double x) { return x * std::exp(-x); };
    for (double q : {0.3, 0.6, 0.95})
    {
        double const A = 1.3;
        double const a = jackson_improper(f, q, A).value;
        double const b = jackson_improper(f, q, A / q).value;
        EXPECT_LE(oracle::rel(a, b), 1e-13);

        long double brute = 0;
        for (int n = -400; n <= 2000; ++n)
        {
            long double const x = std::pow(static_cast<long double>(q), n) / A;
            if (x > 800)
                continue;
            brute += x * x * std::exp(-x);
        }
        brute *= 1 - q;
        EXPECT_LE(oracle::rel(a, static_cast<double>(brute)), 1e-13);
    }
    EXPECT_NEAR(jackson_improper(f, 1.0, 1.0).value, 1.0, 1e-12);
}

TEST(SymmetricIntegral, Monomials)
{
    for (double q : {0.2, 0.5, 0.8})
    {
        for (int n = 0; n <= 8; ++n)
        {
            double const a = 1.5;
            double const expected = std::pow(a, n + 1) / sym_bracket(q, n + 1);
            auto const value = sym_q_integral(
                [n](double x) { return std::pow(x, n); }, q, a);
            EXPECT_LE(oracle::rel(value.value, expected), 1e-12)
                << "q=" << q << " n=" << n;
        }
    }
}

TEST(SymmetricIntegral, ImproperScaleInvariance)
{
    auto f = [](double x) { return x * x * std::exp(-x); };
    double const q = 0.5;
    double const a = sym_q_integral_improper(f, q, 0.7).value;
    double const b = sym_q_integral_improper(f, q, 0.7 / (q * q)).value;
    EXPECT_LE(oracle::rel(a, b), 1e-13);
    EXPECT_NEAR(sym_q_integral_improper(f, 1.0, 1.0).value, 2.0, 1e-12);
}

TEST(Derivatives, MonomialsAndClassicalLimit)
{
    double const q = 0.4;
    for (int n = 1; n <= 6; ++n)
    {
        auto f = [n](double x) { return std::pow(x, n); };
        double const x = 1.3;
        EXPECT_NEAR(q_derivative(f, q, x), q_bracket(q, n) * std::pow(x, n - 1),
                    1e-12 * std::pow(x, n));
        EXPECT_NEAR(sym_q_derivative(f, q, x),
                    sym_bracket(q, n) * std::pow(x, n - 1),
                    1e-12 * sym_bracket(q, n) * std::pow(x, n));
    }
    auto sq = [](double x) { return x * x; };
    EXPECT_NEAR(q_derivative(sq, 1.0, 3.0), 6.0, 1e-9);
    EXPECT_NEAR(sym_q_derivative(sq, 1.0, 3.0), 6.0, 1e-9);
    EXPECT_THROW(q_derivative(sq, q, 0.0), OutOfDomain);
    EXPECT_THROW(sym_q_derivative(sq, q, 0.0), OutOfDomain);
}

// Both q-Leibniz rules, both symmetric Leibniz rules and the integration by
// parts formulas on random polynomial pairs.
TEST(CalculusProperty, LeibnizRules)
{
    oracle::Gen gen(41);
    for (int trial = 0; trial < 200; ++trial)
    {
        double const q = gen.real(0.1, 0.9);
        auto const cf = random_poly(gen, gen.integer(0, 5));
        auto const cg = random_poly(gen, gen.integer(0, 5));
        auto f = [&](double x) { return poly(cf, x); };
        auto g = [&](double x) { return poly(cg, x); };
        auto fg = [&](double x) { return f(x) * g(x); };
        double const x = gen.real(0.2, 2.0);

        double const d = q_derivative(fg, q, x);
        double const rule1 = f(q * x) * q_derivative(g, q, x)
                             + g(x) * q_derivative(f, q, x);
        double const rule2 = f(x) * q_derivative(g, q, x)
                             + g(q * x) * q_derivative(f, q, x);
        double const scale = 1 + std::abs(d);
        EXPECT_NEAR(d, rule1, 1e-11 * scale);
        EXPECT_NEAR(d, rule2, 1e-11 * scale);

        double const sd = sym_q_derivative(fg, q, x);
        double const srule1 = f(q * x) * sym_q_derivative(g, q, x)
                              + g(x / q) * sym_q_derivative(f, q, x);
        double const srule2 = f(x / q) * sym_q_derivative(g, q, x)
                              + g(q * x) * sym_q_derivative(f, q, x);
        double const sscale = 1 + std::abs(sd);
        EXPECT_NEAR(sd, srule1, 1e-11 * sscale);
        EXPECT_NEAR(sd, srule2, 1e-11 * sscale);
    }
}

TEST(CalculusProperty, IntegrationByParts)
{
    oracle::Gen gen(42);
    for (int trial = 0; trial < 100; ++trial)
    {
        double const q = gen.real(0.1, 0.9);
        double const a = gen.real(0.3, 2.0);
        auto const cf = random_poly(gen, gen.integer(0, 4));
        auto const cg = random_poly(gen, gen.integer(1, 4));
        auto f = [&](double x) { return poly(cf, x); };
        auto g = [&](double x) { return poly(cg, x); };
        auto Dg = [&](double x) { return x == 0 ? 0.0 : q_derivative(g, q, x); };
        auto Df = [&](double x) { return x == 0 ? 0.0 : q_derivative(f, q, x); };

        // int f D_q g = [fg] - int g(qx) D_q f
        double const lhs
            = jackson_integral([&](double x) { return f(x) * Dg(x); }, q, a)
                  .value;
        double const rhs
            = f(a) * g(a) - f(0) * g(0)
              - jackson_integral([&](double x) { return g(q * x) * Df(x); }, q,
                                 a)
                    .value;
        EXPECT_NEAR(lhs, rhs, 1e-11 * (1 + std::abs(lhs)));

        // Symmetric form: int f(qx) sD g = [fg] - int g(x/q) sD f
        auto sDg = [&](double x) { return sym_q_derivative(g, q, x); };
        auto sDf = [&](double x) { return sym_q_derivative(f, q, x); };
        double const slhs
            = sym_q_integral([&](double x) { return f(q * x) * sDg(x); }, q, a)
                  .value;
        double const srhs
            = f(a) * g(a) - f(0) * g(0)
              - sym_q_integral([&](double x) { return g(x / q) * sDf(x); }, q,
                               a)
                    .value;
        EXPECT_NEAR(slhs, srhs, 1e-11 * (1 + std::abs(slhs)));
    }
}

TEST(CalculusProperty, FundamentalTheorem)
{
    oracle::Gen gen(43);
    for (int trial = 0; trial < 100; ++trial)
    {
        double const q = gen.real(0.1, 0.9);
        double const a = gen.real(0.3, 2.0);
        auto const c = random_poly(gen, gen.integer(1, 6));
        auto h = [&](double x) { return poly(c, x); };
        double const jack
            = jackson_integral([&](double x) { return q_derivative(h, q, x); },
                               q, a)
                  .value;
        double const sym = sym_q_integral(
                               [&](double x) { return sym_q_derivative(h, q, x); },
                               q, a)
                               .value;
        double const expected = h(a) - h(0);
        EXPECT_NEAR(jack, expected, 1e-11 * (1 + std::abs(expected)));
        EXPECT_NEAR(sym, expected, 1e-11 * (1 + std::abs(expected)));
    }
}

//---------------------------------------------------------------------------//
// Symmetric exponentials and gamma
//---------------------------------------------------------------------------//

TEST(SymExp, NormalizationSeriesIsEigenfunction)
{
    for (double q : paper_q)
    {
        auto e = [&](double x) { return sym_exp(SymExpKind::e_frak, q, x).value; };
        for (double x : {0.3, 1.0, 2.5})
            EXPECT_LE(oracle::rel(sym_q_derivative(e, q, x), e(x)), 1e-12);
    }
    EXPECT_DOUBLE_EQ(sym_exp(SymExpKind::e_frak, 1.0, 1.5).value, std::exp(1.5));
}

TEST(SymExp, AuxiliarySeriesEqualsProduct)
{
    for (double q : paper_q)
    {
        for (double t : {-3.0, -1.0, 0.0, 0.5, 4.0})
            EXPECT_LE(oracle::rel(sym_exp(SymExpKind::E_frak, q, t).value,
                                  sym_exp_product(q, t)),
                      1e-12)
                << "q=" << q << " t=" << t;
    }
}

TEST(SymExp, EqualsStandardExponentialInQSquared)
{
    // E_q(t) = E_{q^2}^{q t}
    oracle::Gen gen(51);
    for (int trial = 0; trial < 200; ++trial)
    {
        double const q = gen.real(0.1, 0.9);
        double const t = gen.real(-3, 3);
        double const lhs = sym_exp(SymExpKind::E_frak, q, t).value;
        double const rhs = q_exp(QExpKind::E, q * q, q * t).value;
        EXPECT_NEAR(lhs, rhs, 1e-11 * (1 + std::abs(lhs)));
    }
}

TEST(SymExp, ReflectionInsideRadius)
{
    // E_q(t) E_{1/q}(-q^2 t) = 1 for |t| < 1/(1/q - q), both by series.
    for (double q : paper_q)
    {
        double const radius = 1 / (1 / q - q);
        for (double f : {-0.95, -0.5, 0.1, 0.3, 0.7, 0.95})
        {
            double const t = f * radius;
            double const prod
                = sym_exp(SymExpKind::E_frak, q, t).value
                  * sym_exp(SymExpKind::E_frak, 1 / q, -q * q * t).value;
            EXPECT_NEAR(prod, 1, 1e-12) << "q=" << q << " t=" << t;
        }
        EXPECT_THROW(sym_exp(SymExpKind::E_frak, 1 / q, 1.01 * radius),
                     OutOfDomain);
    }
}

TEST(SymExp, UnscaledReflectionTelescopes)
{
    // Without the q^2 in the argument the two products telescope to
    // 1 / (1 + (1/q - q) t) instead of 1.
    for (double q : paper_q)
    {
        double const radius = 1 / (1 / q - q);
        for (double f : {-0.5, 0.3, 0.9})
        {
            double const t = f * radius;
            double const prod = sym_exp(SymExpKind::E_frak, q, t).value
                                * sym_exp(SymExpKind::E_frak, 1 / q, -t).value;
            EXPECT_NEAR(prod, 1 / (1 + f), 1e-12);
        }
    }
}

TEST(SymExp, ProductAboveOneMatchesSeries)
{
    for (double q : paper_q)
    {
        double const p = 1 / q;
        double const radius = 1 / (p - 1 / p);
        for (double f : {-0.9, -0.4, 0.2, 0.8})
            EXPECT_LE(oracle::rel(sym_exp_product(p, f * radius),
                                  sym_exp(SymExpKind::E_frak, p, f * radius)
                                      .value),
                      1e-11);
    }
}

TEST(SymExp, FirstZero)
{
    for (double q : paper_q)
    {
        double const zero = -1 / (q * (1 - q * q));
        EXPECT_NEAR(sym_exp_product(q, zero), 0, 1e-15);
        EXPECT_GT(sym_exp_product(q, 0.99 * zero), 0);
        EXPECT_LT(sym_exp_product(q, 1.01 * zero), 0);
    }
}

TEST(SymGamma, FactorialValues)
{
    for (double q : paper_q)
    {
        for (int n = 0; n <= 6; ++n)
        {
            double const expected
                = std::pow(q, n * (n + 1) / 2.0)
                  * static_cast<double>(oracle::sym_factorial(q, n));
            EXPECT_LE(oracle::rel(sym_gamma_tilde(q, n + 1), expected), 1e-9)
                << "q=" << q << " n=" << n;
        }
    }
}

TEST(SymGamma, RecurrenceAndGammaConnection)
{
    oracle::Gen gen(52);
    for (int trial = 0; trial < 100; ++trial)
    {
        double const q = gen.real(0.15, 0.85);
        double const t = gen.real(0.2, 5);
        double const g = sym_gamma_tilde(q, t);
        EXPECT_LE(oracle::rel(sym_gamma_tilde(q, t + 1),
                              std::pow(q, t) * sym_bracket(q, t) * g),
                  1e-10);
        EXPECT_LE(oracle::rel(g, std::pow(q, t - 1) * q_gamma(q * q, t)), 1e-10);
    }
    EXPECT_DOUBLE_EQ(sym_gamma_tilde(1.0, 3.5), std::tgamma(3.5));
}
