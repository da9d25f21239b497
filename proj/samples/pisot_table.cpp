// Print the unit quadratic Pisot sequences with their roots and the moment
// residuals of the weight w_q.

#include <cstdio>

#include "pisotcs/moment.hpp"
#include "pisotcs/pisot_core.hpp"

int main()
{
    using namespace pisotcs;
    for (std::int64_t s = 3; s <= 5; ++s)
    {
        auto const spec = DeformationSpec::bosonic(s);
        auto const roots = solve_unit_quadratic(spec);
        auto const seq = pisot_sequence(spec, 11);
        std::printf("s = %lld  p = %.15f  q = %.15f\n  x_n:",
                    static_cast<long long>(s), roots.p, roots.q);
        for (std::size_t n = 1; n < seq.size(); ++n)
            std::printf(" %s", seq[n].str().c_str());
        std::printf("\n  moment residuals (quadrature, factorized):\n");
        for (int n = 0; n <= 8; n += 2)
        {
            auto const r = moment::moment_residual(spec, n);
            std::printf("    n = %d  %.2e  %.2e\n", n, r.quadrature_residual,
                        r.factorized_residual);
        }
    }
}
