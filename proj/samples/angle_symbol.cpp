// Angle lower symbol for the s = 3 Pisot states compared with the standard
// coherent states.

#include <cstdio>
#include <numbers>

#include "pisotcs/csquant.hpp"

int main()
{
    using namespace pisotcs::csquant;
    auto const pisot = FockModel::pisot(3, 5.0);
    auto const standard = FockModel::classical(5.0);
    std::printf("%8s %8s %12s %12s\n", "|z|", "theta", "standard", "s = 3");
    for (double r : {0.5, 1.0, 5.0})
    {
        AngleSymbol const a(standard, r, standard.n_max());
        AngleSymbol const b(pisot, r, pisot.n_max());
        for (int i = 0; i <= 8; ++i)
        {
            double const theta = 2 * std::numbers::pi * i / 8;
            std::printf("%8.2f %8.4f %12.6f %12.6f\n", r, theta, a(theta),
                        b(theta));
        }
    }
}
