#pragma once

#include "rsthp/combining.hpp"
#include "rsthp/precoding.hpp"

#include <string>

namespace rsthp
{
    // One transmission scheme: precoder, optional rate splitting with a common
    // stream combiner, and the number of multi-branch orderings.
    //
    // Identifiers: [mb<L>-][rs-]<zf|zf-cthp|zf-dthp|mmse-cthp|mmse-dthp>[-<minmax|mrc|mmsec>]
    // e.g. "zf-dthp", "rs-zf-cthp-mmsec", "mb4-rs-mmse-cthp-mmsec".
    struct Scheme
    {
        PrecoderSpec precoder;
        bool rate_splitting = false;
        CombinerKind combiner = CombinerKind::FirstAntenna;
        int branches = 1;
        CovarianceSource covariance = CovarianceSource::TrueChannel;

        std::string id() const;
        void validate() const; // throws ConfigError

        static Scheme parse(const std::string &id);
    };
}
