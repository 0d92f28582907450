#include "rsthp/allocation.hpp"
#include "rsthp/errors.hpp"

namespace rsthp
{
    std::vector<double> delta_grid(int points)
    {
        if (points < 2)
            throw ConfigError("delta grid needs at least two points");
        std::vector<double> g(static_cast<std::size_t>(points));
        for (int i = 0; i < points; ++i)
            g[static_cast<std::size_t>(i)] = static_cast<double>(i) / static_cast<double>(points - 1);
        return g;
    }

    DeltaSearch allocate_common_power(const Scheme &scheme, const SystemConfig &config, const ErrorModel &error_model,
                                      const RngStream &rng, const DeltaSearchOptions &options)
    {
        DeltaSearch out;
        out.grid = delta_grid(options.grid_points);
        if (!scheme.rate_splitting)
        {
            out.grid = {0.0};
        }
        SystemConfig pilot = config;
        pilot.mc_channels = options.pilot_channels;
        pilot.mc_errors = options.pilot_errors;
        // Branch selection is not part of the power split search.
        Scheme single = scheme;
        single.branches = 1;

        ErgodicOptions eo;
        eo.threads = options.threads;
        for (double d : out.grid)
            out.esr.push_back(ergodic_sum_rate(pilot, single, error_model, d, rng, eo).esr_total);

        std::size_t best = 0;
        for (std::size_t i = 1; i < out.esr.size(); ++i)
            if (out.esr[i] > out.esr[best])
                best = i;
        out.delta = out.grid[best];
        return out;
    }
}
