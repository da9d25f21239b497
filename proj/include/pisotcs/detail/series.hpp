#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "../errors.hpp"

namespace pisotcs
{
//! Truncation control shared by all series, products and q-integrals.
struct SeriesControl
{
    double tol{1e-16};
    int max_terms{10000};
};

//! Value of a truncated series with the number of terms and tail estimate.
struct SeriesResult
{
    double value{};
    int terms_used{};
    double truncation_bound{};

    operator double() const { return value; }
};

namespace detail
{
/*!
 * Sum term(0) + term(1) + ... until the geometric tail bound drops below
 * tol * |sum|.
 *
 * With rho = |t_n / t_{n-1}| < 1 and nonincreasing ratios, the tail after
 * t_n is bounded by |t_n| rho / (1 - rho).
 */
template<class TermFn>
SeriesResult sum_series(TermFn&& term, SeriesControl ctl, char const* what)
{
    constexpr int zero_run_limit = 64;
    double sum = 0;
    double prev = 0;
    int zero_run = 0;
    for (int n = 0; n < ctl.max_terms; ++n)
    {
        double const t = term(n);
        if (!std::isfinite(t))
        {
            throw NonConvergent(std::string(what) + ": non-finite term");
        }
        if (t == 0)
        {
            // Isolated zeros are skipped; a long run ends the series.
            if (++zero_run >= zero_run_limit)
            {
                return {sum, n + 1, 0.0};
            }
            continue;
        }
        zero_run = 0;
        sum += t;
        if (prev != 0)
        {
            double const rho = std::abs(t / prev);
            if (rho < 1)
            {
                double const tail = std::abs(t) * rho / (1 - rho);
                double const scale = ctl.tol * std::abs(sum);
                if (std::abs(t) <= scale && tail <= scale)
                {
                    return {sum, n + 1, tail};
                }
            }
        }
        prev = t;
    }
    throw NonConvergent(std::string(what) + ": no convergence within "
                        + std::to_string(ctl.max_terms) + " terms");
}

/*!
 * Sum a series whose terms obey t_{n+1} = t_n * ratio(n), starting from
 * t_0 = first.
 */
template<class RatioFn>
SeriesResult
sum_ratio_series(double first, RatioFn&& ratio, SeriesControl ctl,
                 char const* what)
{
    double current = first;
    return sum_series(
        [&](int n) {
            if (n > 0)
            {
                current *= ratio(n - 1);
            }
            return current;
        },
        ctl,
        what);
}

}  // namespace detail
}  // namespace pisotcs
