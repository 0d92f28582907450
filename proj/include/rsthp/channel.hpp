#pragma once

#include "rsthp/numerics.hpp"

#include <cstdint>
#include <vector>

namespace rsthp
{
    enum class Modulation
    {
        Gaussian,
        QPSK,
        QAM16
    };

    struct SystemConfig
    {
        int Nt = 12;                      // transmit antennas
        std::vector<int> Nk{2, 2, 2, 2, 2, 2}; // receive antennas per user
        int M = 12;                       // private streams; this implementation uses M = Nr
        double Etr = 100.0;               // total transmit power
        double sigma_n2 = 1.0;            // noise power
        Modulation modulation = Modulation::Gaussian;
        int mc_channels = 100;
        int mc_errors = 100;
        std::uint64_t seed = 1;

        int K() const { return static_cast<int>(Nk.size()); }
        int Nr() const;
        // First row of user k inside the stacked Nr x Nt channel.
        int user_offset(int k) const;

        // Throws ConfigError when an invariant is violated.
        void validate() const;
    };

    // How the nominal sigma_e2 maps onto the variance of each complex entry.
    //  PerEntry:     each entry is CN(0, sigma_e2).
    //  PerComponent: real and imaginary parts each have variance sigma_e2, i.e.
    //                entries are CN(0, 2 sigma_e2).
    enum class ErrorConvention
    {
        PerEntry,
        PerComponent
    };

    struct ErrorModel
    {
        enum class Mode
        {
            Fixed,
            SnrScaled
        };
        Mode mode = Mode::Fixed;
        double sigma_e2 = 0.0; // fixed mode
        double scale = 0.95;   // scaled mode: sigma_e2 = scale * Etr^-alpha
        double alpha = 0.6;
        ErrorConvention convention = ErrorConvention::PerEntry;

        static ErrorModel fixed(double sigma_e2, ErrorConvention c = ErrorConvention::PerEntry);
        static ErrorModel scaled(double scale, double alpha, ErrorConvention c = ErrorConvention::PerEntry);

        void validate() const;

        // Nominal error power at the given transmit power.
        double nominal_variance(double Etr) const;
        // Variance of each complex entry of the error matrix.
        double entry_variance(double Etr) const;
    };

    // Transposed-channel convention: every matrix is Nr x Nt (rows = receive antennas).
    struct ChannelSet
    {
        CMatrix H_hat;
        CMatrix H_tilde;
        CMatrix H_true;
    };

    CMatrix generate_estimate(const SystemConfig &config, RngStream &rng);
    CMatrix draw_error(const SystemConfig &config, const ErrorModel &model, double Etr, RngStream &rng);
    ChannelSet assemble(const CMatrix &H_hat, const CMatrix &H_tilde);
}
