#pragma once

#include "rsthp/rates.hpp"

#include <vector>

namespace rsthp
{
    struct DeltaSearchOptions
    {
        int grid_points = 41; // uniform grid on [0, 1], endpoints included
        int pilot_channels = 20;
        int pilot_errors = 20;
        int threads = 1;
    };

    struct DeltaSearch
    {
        double delta = 0.0;
        std::vector<double> grid;
        std::vector<double> esr; // pilot ESR at each grid point
    };

    std::vector<double> delta_grid(int points);

    // Grid point maximizing the pilot ESR. All grid points share the pilot
    // draws; ties resolve to the smaller delta. Non-RS schemes return 0.
    DeltaSearch allocate_common_power(const Scheme &scheme, const SystemConfig &config, const ErrorModel &error_model,
                                      const RngStream &rng, const DeltaSearchOptions &options = {});
}
