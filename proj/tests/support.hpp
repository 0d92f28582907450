#pragma once

#include "rsthp/numerics.hpp"

#include <catch_amalgamated.hpp>

namespace rsthp::test
{
    inline CMatrix random_matrix(Eigen::Index r, Eigen::Index c, RngStream &rng, double var = 1.0)
    {
        return sample_cgauss(r, c, var, rng);
    }

    inline double rel_diff(double a, double b)
    {
        const double s = std::max(std::abs(a), std::abs(b));
        return s == 0.0 ? 0.0 : std::abs(a - b) / s;
    }

    inline double max_abs(const CMatrix &A)
    {
        return A.size() ? A.cwiseAbs().maxCoeff() : 0.0;
    }
}
