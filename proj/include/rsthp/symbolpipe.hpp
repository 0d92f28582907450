#pragma once

#include "rsthp/channel.hpp"
#include "rsthp/precoding.hpp"

#include <vector>

namespace rsthp
{
    struct ModuloSpec
    {
        RVector lambda; // per-stream lattice period, all > 0
    };

    struct SymbolFrame
    {
        CVector s; // data symbols
        CVector v; // modulo outputs fed to the feedforward stage
        CVector d; // lattice perturbation, B v = s + d
    };

    // Folds real and imaginary parts into [-lambda/2, lambda/2).
    cdouble modulo(cdouble z, double lambda);
    double lambda_for(Modulation modulation, double Ek = 1.0);
    ModuloSpec uniform_modulo(Modulation modulation, Eigen::Index streams, double Ek = 1.0);

    // Unit-energy square constellation points (QPSK or 16-QAM).
    std::vector<cdouble> constellation(Modulation modulation);
    cdouble slice(cdouble z, const std::vector<cdouble> &points);
    CVector random_symbols(Modulation modulation, Eigen::Index n, RngStream &rng);

    // v_1 = s_1, v_i = mod(s_i - sum_{j<i} b_ij v_j). B must be unit lower triangular.
    SymbolFrame thp_encode(const CVector &s, const CMatrix &B, const ModuloSpec &spec);

    // x = p_c s_c + scale * tx_cols v. scale = 1 leaves the modulo power growth
    // uncompensated; compensation_scale() gives the value that restores the budget.
    CVector transmit(const SymbolFrame &frame, const RsPrecoder &precoder, cdouble s_c, double scale = 1.0);

    struct PowerLoss
    {
        RVector stream_variance; // E|v_i|^2 per stream
        double tau = 1.0;        // 1 / mean stream variance
    };
    PowerLoss measure_power_loss(const CMatrix &B, Modulation modulation, int n_frames, RngStream &rng);

    // sqrt of the ratio between the unit-variance design power and the power the
    // measured stream variances put on the transmit columns.
    double compensation_scale(const RsPrecoder &precoder, const RVector &stream_variance);

    struct DecodeResult
    {
        CVector private_hat;
        std::vector<bool> private_error;
        std::vector<cdouble> common_hat; // per user; empty when no common power
        std::vector<bool> common_error;

        int private_error_count() const;
    };

    // Receiver chain for one channel use. y is the full Nr receive vector.
    // The common symbol is sliced per user after combining; private streams
    // subtract the common part (ideal SIC with the true s_c and channel), divide
    // by scale * gain_i, fold, and slice.
    DecodeResult receive_decode(const CVector &y, const ChannelSet &channel, const RsPrecoder &precoder,
                                const SystemConfig &config, const std::vector<CVector> &combiners, cdouble s_c,
                                const SymbolFrame &frame, const ModuloSpec &spec, Modulation modulation,
                                double scale = 1.0);
}
