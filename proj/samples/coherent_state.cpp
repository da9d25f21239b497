// Photon statistics and dispersions of Pisot coherent states at a few |z|.

#include <cstdio>

#include "pisotcs/csquant.hpp"

int main()
{
    using namespace pisotcs::csquant;
    for (int s : {3, 4, 5})
    {
        auto const model = FockModel::pisot(s, 4.0);
        std::printf("s = %d  (N_max = %d)\n", s, model.n_max());
        for (double r : {0.5, 1.0, 2.0, 4.0})
        {
            auto const stats = photon_statistics(model, r);
            auto const disp = dispersions(model, r);
            std::printf("  |z| = %.1f  <x_N> = %-10.6g Mandel = %-+10.5f "
                        "varQ = %-10.6g SNR = %.6g\n",
                        r, stats.mean_deformed, stats.mandel, disp.var_q,
                        stats.snr);
        }
    }
}
