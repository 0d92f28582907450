#pragma once

#include "rsthp/channel.hpp"
#include "rsthp/scheme.hpp"

#include <cstdint>
#include <vector>

namespace rsthp
{
    struct RateSample
    {
        std::vector<double> common_rate_per_user;
        std::vector<double> private_rate_per_stream;
        double delta_used = 0.0;

        double private_sum() const;
        double min_common() const;
    };

    // Average over CSIT-error draws for one channel estimate.
    struct AverageRates
    {
        std::vector<double> common_per_user;    // mean R_{c,k}, physical user order
        std::vector<double> private_per_stream; // mean R_i, transmit order
        double private_sum = 0.0;
        std::vector<int> minmax_choice; // selected antenna per user (MinMax only)
        int draws = 0;

        double min_common() const;
        // min_k mean R_{c,k} + mean R_p; the branch-selection criterion.
        double sum_rate() const;
    };

    struct RateReport
    {
        std::vector<double> ergodic_common_per_user;
        double esr_common = 0.0;
        double esr_private = 0.0;
        double esr_total = 0.0;
        double ci_halfwidth = 0.0; // 95% half-width of the per-estimate sum rate mean
        double delta_used = 0.0;
        int n_channels = 0;
        int n_errors = 0;
        int resampled = 0; // rank-deficient estimates redrawn
    };

    // Private-stream SINRs. THP: the part of H_hat*T that the feedback loop turns
    // into lattice-shifted data is signal, the rest of H_true*T is interference
    // acting on unit-variance modulo outputs. Linear: diagonal of H_true*P is signal.
    RVector private_sinrs(const ChannelSet &channel, const RsPrecoder &precoder, double sigma_n2);

    // Per-user combining vectors for one realization.
    std::vector<CVector> make_combiners(const Scheme &scheme, const SystemConfig &config, const ChannelSet &channel,
                                        const RsPrecoder &precoder, const std::vector<int> &minmax_choice,
                                        double error_entry_variance);

    RateSample instantaneous_rates(const ChannelSet &channel, const RsPrecoder &precoder,
                                   const std::vector<CVector> &combiners, const SystemConfig &config);

    // Antenna-by-antenna common rates log2(1 + gamma_{c,k,i}) (w = e_i) per user.
    std::vector<std::vector<double>> per_antenna_common_rates(const ChannelSet &channel, const RsPrecoder &precoder,
                                                              const SystemConfig &config);

    // Mean rates over n_err error draws with the precoder built once from H_hat.
    // row_order[r] is the physical receive row carried by row r of H_hat (empty:
    // identity); errors are drawn in physical order and reordered the same way.
    AverageRates average_rates(const CMatrix &H_hat, const Scheme &scheme, const SystemConfig &config,
                               const ErrorModel &error_model, double delta, int n_err, const RngStream &rng,
                               const std::vector<int> &row_order = {});

    struct ErgodicOptions
    {
        int threads = 1;
        int branch_inner_draws = 20; // error draws per branch in the ordering criterion
        int max_resample = 100;
    };

    RateReport ergodic_sum_rate(const SystemConfig &config, const Scheme &scheme, const ErrorModel &error_model,
                                double delta, const RngStream &rng, const ErgodicOptions &options = {});

    // Per-antenna common SINR from the received-power decomposition of a ZF-THP
    // link (beta taken from the filters). cTHP:
    //   |h p|^2 / (|e p|^2 + b^2 sv2 + b^2 sum_j l_jj^-2 |e f_j|^2 + sn2)
    // dTHP:
    //   |h p|^2 / (|e p|^2 + b^2 ||row_i(L)||^2 + b^2 sum_j |e f_j|^2 + sn2)
    // with h, e the estimate and error rows of antenna i and f_j the columns of F.
    double closed_form_common_sinr(const Eigen::RowVectorXcd &h_hat_row, const Eigen::RowVectorXcd &h_tilde_row,
                                   Eigen::Index antenna, const CVector &p_c, const ThpFilters &filters,
                                   double sigma_n2, double sigma_v2 = 1.0);

    // ||Hk q_{b_i}||^2 for every stream i, expanded element-wise through Q, diag(L)
    // and B^{-1} instead of forming the product matrices.
    RVector effective_norms_expanded(const CMatrix &Hk, const ThpFilters &filters);
}
