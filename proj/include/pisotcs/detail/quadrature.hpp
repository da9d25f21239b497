#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "../errors.hpp"

namespace pisotcs::detail
{
struct QuadratureResult
{
    double value{};
    double error{};
};

//! Adaptive Gauss-Kronrod over consecutive panels [b_i, b_{i+1}].
template<class F>
QuadratureResult
integrate_panels(F&& f, std::vector<double> const& breaks, double rel_tol)
{
    QuadratureResult total;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
    {
        if (!(breaks[i + 1] > breaks[i]))
        {
            continue;
        }
        double err = 0;
        double const v
            = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
                f, breaks[i], breaks[i + 1], 18, rel_tol, &err);
        total.value += v;
        total.error += err;
    }
    return total;
}

/*!
 * Integrate a smooth, positive-ish integrand over the real line whose mass
 * sits near the given centers with spread `width`.
 *
 * The domain starts at [min center - 12 width, max center + 12 width] and is
 * widened until the integrand at both ends is negligible.
 */
template<class F>
QuadratureResult integrate_line(F&& f,
                                std::vector<double> centers,
                                double width,
                                double rel_tol,
                                char const* what)
{
    std::sort(centers.begin(), centers.end());
    centers.erase(std::unique(centers.begin(), centers.end()), centers.end());
    double lo = centers.front() - 12 * width;
    double hi = centers.back() + 12 * width;

    auto make_breaks = [&] {
        std::vector<double> breaks;
        breaks.reserve(centers.size() + 2);
        breaks.push_back(lo);
        for (double c : centers)
        {
            if (c > lo && c < hi)
                breaks.push_back(c);
        }
        breaks.push_back(hi);
        return breaks;
    };

    constexpr int max_widenings = 12;
    for (int iter = 0;; ++iter)
    {
        auto result = integrate_panels(f, make_breaks(), rel_tol);
        double const scale = rel_tol * std::abs(result.value);
        bool const lo_ok = std::abs(f(lo)) * width <= scale;
        bool const hi_ok = std::abs(f(hi)) * width <= scale;
        if (lo_ok && hi_ok)
        {
            if (!(result.error <= std::sqrt(rel_tol) * std::abs(result.value))
                && result.value != 0)
            {
                throw NonConvergent(std::string(what)
                                    + ": quadrature error estimate too large");
            }
            return result;
        }
        if (iter == max_widenings)
        {
            throw NonConvergent(std::string(what)
                                + ": integrand does not decay on the domain");
        }
        if (!lo_ok)
            lo -= 6 * width;
        if (!hi_ok)
            hi += 6 * width;
    }
}

}  // namespace pisotcs::detail
