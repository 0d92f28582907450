#include "rsthp/rates.hpp"
#include "rsthp/errors.hpp"
#include "rsthp/multibranch.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

namespace rsthp
{
    double RateSample::private_sum() const
    {
        return std::accumulate(private_rate_per_stream.begin(), private_rate_per_stream.end(), 0.0);
    }

    double RateSample::min_common() const
    {
        if (common_rate_per_user.empty())
            return 0.0;
        return *std::min_element(common_rate_per_user.begin(), common_rate_per_user.end());
    }

    double AverageRates::min_common() const
    {
        if (common_per_user.empty())
            return 0.0;
        return *std::min_element(common_per_user.begin(), common_per_user.end());
    }

    double AverageRates::sum_rate() const
    {
        return min_common() + private_sum;
    }

    RVector private_sinrs(const ChannelSet &channel, const RsPrecoder &precoder, double sigma_n2)
    {
        const Eigen::Index M = precoder.streams();
        RVector out(M);
        const CMatrix E = channel.H_true * precoder.tx_cols;
        if (!precoder.nonlinear)
        {
            for (Eigen::Index i = 0; i < M; ++i)
            {
                const double s = std::norm(E(i, i));
                out(i) = s / (E.row(i).squaredNorm() - s + sigma_n2);
            }
            return out;
        }
        const CMatrix residual = E - precoder.desired;
        for (Eigen::Index i = 0; i < M; ++i)
        {
            const double g = precoder.gain(i);
            out(i) = g * g / (residual.row(i).squaredNorm() + sigma_n2);
        }
        return out;
    }

    std::vector<std::vector<double>> per_antenna_common_rates(const ChannelSet &channel, const RsPrecoder &precoder,
                                                              const SystemConfig &config)
    {
        std::vector<std::vector<double>> table(static_cast<std::size_t>(config.K()));
        const CVector hp = channel.H_true * precoder.p_c;
        const CMatrix G = channel.H_true * precoder.tx_cols;
        for (int k = 0; k < config.K(); ++k)
        {
            const int off = config.user_offset(k);
            for (int i = 0; i < config.Nk[static_cast<std::size_t>(k)]; ++i)
            {
                const double s = std::norm(hp(off + i));
                const double gamma = s / (G.row(off + i).squaredNorm() + config.sigma_n2);
                table[static_cast<std::size_t>(k)].push_back(std::log2(1.0 + gamma));
            }
        }
        return table;
    }

    std::vector<CVector> make_combiners(const Scheme &scheme, const SystemConfig &config, const ChannelSet &channel,
                                        const RsPrecoder &precoder, const std::vector<int> &minmax_choice,
                                        double error_entry_variance)
    {
        std::vector<CVector> out;
        out.reserve(static_cast<std::size_t>(config.K()));
        for (int k = 0; k < config.K(); ++k)
        {
            const int off = config.user_offset(k);
            const int nk = config.Nk[static_cast<std::size_t>(k)];
            const CMatrix Hk = channel.H_true.middleRows(off, nk);
            switch (scheme.combiner)
            {
            case CombinerKind::FirstAntenna:
                out.push_back(selection_combiner(nk, 0));
                break;
            case CombinerKind::MinMax:
                out.push_back(selection_combiner(nk, minmax_choice.empty() ? 0 : minmax_choice[static_cast<std::size_t>(k)]));
                break;
            case CombinerKind::MRC:
            {
                const CVector h = Hk * precoder.p_c;
                out.push_back(h.squaredNorm() > 0.0 ? mrc_combiner(Hk, precoder.p_c) : selection_combiner(nk, 0));
                break;
            }
            case CombinerKind::MMSEc:
                if (scheme.covariance == CovarianceSource::TrueChannel)
                    out.push_back(mmsec_combiner(Hk, precoder.p_c, precoder.tx_cols, config.sigma_n2));
                else
                    out.push_back(mmsec_combiner_from_estimate(channel.H_hat.middleRows(off, nk), precoder.p_c,
                                                               precoder.tx_cols, error_entry_variance,
                                                               config.sigma_n2));
                break;
            }
        }
        return out;
    }

    RateSample instantaneous_rates(const ChannelSet &channel, const RsPrecoder &precoder,
                                   const std::vector<CVector> &combiners, const SystemConfig &config)
    {
        RateSample out;
        out.delta_used = precoder.delta;
        const RVector g = private_sinrs(channel, precoder, config.sigma_n2);
        out.private_rate_per_stream.resize(static_cast<std::size_t>(g.size()));
        for (Eigen::Index i = 0; i < g.size(); ++i)
            out.private_rate_per_stream[static_cast<std::size_t>(i)] = std::log2(1.0 + g(i));

        out.common_rate_per_user.assign(static_cast<std::size_t>(config.K()), 0.0);
        if (precoder.p_c.squaredNorm() == 0.0)
            return out;
        for (int k = 0; k < config.K(); ++k)
        {
            const CVector &w = combiners[static_cast<std::size_t>(k)];
            const CMatrix Hk = channel.H_true.middleRows(config.user_offset(k), config.Nk[static_cast<std::size_t>(k)]);
            if (w.squaredNorm() == 0.0)
                continue;
            const double gamma = combined_sinr(w, Hk, precoder.p_c, precoder.tx_cols, config.sigma_n2);
            out.common_rate_per_user[static_cast<std::size_t>(k)] = std::log2(1.0 + gamma);
        }
        return out;
    }

    namespace
    {
        CMatrix reorder_rows(const CMatrix &A, const std::vector<int> &row_order)
        {
            if (row_order.empty())
                return A;
            CMatrix out(A.rows(), A.cols());
            for (Eigen::Index r = 0; r < A.rows(); ++r)
                out.row(r) = A.row(row_order[static_cast<std::size_t>(r)]);
            return out;
        }

        int user_of_row(const SystemConfig &config, int row)
        {
            int acc = 0;
            for (int k = 0; k < config.K(); ++k)
            {
                acc += config.Nk[static_cast<std::size_t>(k)];
                if (row < acc)
                    return k;
            }
            throw DomainError("row index outside the receive array");
        }

        // Physical user served by user block k of a reordered channel.
        std::vector<int> block_owner(const SystemConfig &config, const std::vector<int> &row_order)
        {
            std::vector<int> owner(static_cast<std::size_t>(config.K()));
            for (int k = 0; k < config.K(); ++k)
                owner[static_cast<std::size_t>(k)] =
                    row_order.empty() ? k : user_of_row(config, row_order[static_cast<std::size_t>(config.user_offset(k))]);
            return owner;
        }
    }

    AverageRates average_rates(const CMatrix &H_hat, const Scheme &scheme, const SystemConfig &config,
                               const ErrorModel &error_model, double delta, int n_err, const RngStream &rng,
                               const std::vector<int> &row_order)
    {
        if (n_err < 1)
            throw ConfigError("average_rates: need at least one error draw");
        const bool rs = scheme.rate_splitting && delta > 0.0;
        const double d = scheme.rate_splitting ? delta : 0.0;
        const RsPrecoder pre = build_precoder(H_hat, scheme.precoder, config.Etr, config.sigma_n2, d);
        const double entry_var = error_model.entry_variance(config.Etr);
        const std::vector<int> owner = block_owner(config, row_order);

        const std::size_t K = static_cast<std::size_t>(config.K());
        AverageRates out;
        out.common_per_user.assign(K, 0.0);
        out.private_per_stream.assign(static_cast<std::size_t>(pre.streams()), 0.0);
        std::vector<std::vector<double>> antenna_sum(K);
        for (std::size_t k = 0; k < K; ++k)
            antenna_sum[k].assign(static_cast<std::size_t>(config.Nk[k]), 0.0);

        for (int e = 0; e < n_err; ++e)
        {
            RngStream draw_rng = rng.substream({static_cast<std::uint64_t>(e)});
            const CMatrix H_tilde = reorder_rows(draw_error(config, error_model, config.Etr, draw_rng), row_order);
            const ChannelSet ch = assemble(H_hat, H_tilde);

            if (rs && scheme.combiner == CombinerKind::MinMax)
            {
                const auto table = per_antenna_common_rates(ch, pre, config);
                for (std::size_t k = 0; k < K; ++k)
                    for (std::size_t i = 0; i < table[k].size(); ++i)
                        antenna_sum[k][i] += table[k][i];
                const RVector g = private_sinrs(ch, pre, config.sigma_n2);
                for (Eigen::Index i = 0; i < g.size(); ++i)
                    out.private_per_stream[static_cast<std::size_t>(i)] += std::log2(1.0 + g(i));
                continue;
            }

            std::vector<CVector> combiners;
            if (rs)
                combiners = make_combiners(scheme, config, ch, pre, {}, entry_var);
            else
                combiners.assign(K, CVector());
            const RateSample sample = instantaneous_rates(ch, pre, combiners, config);
            for (std::size_t k = 0; k < K; ++k)
                out.common_per_user[static_cast<std::size_t>(owner[k])] += sample.common_rate_per_user[k];
            for (std::size_t i = 0; i < sample.private_rate_per_stream.size(); ++i)
                out.private_per_stream[i] += sample.private_rate_per_stream[i];
        }

        const double inv = 1.0 / static_cast<double>(n_err);
        if (rs && scheme.combiner == CombinerKind::MinMax)
        {
            for (auto &row : antenna_sum)
                for (auto &v : row)
                    v *= inv;
            out.minmax_choice = minmax_select(antenna_sum);
            for (std::size_t k = 0; k < K; ++k)
                out.common_per_user[static_cast<std::size_t>(owner[k])] =
                    antenna_sum[k][static_cast<std::size_t>(out.minmax_choice[k])];
        }
        else
        {
            for (auto &v : out.common_per_user)
                v *= inv;
        }
        for (auto &v : out.private_per_stream)
            v *= inv;
        out.private_sum = std::accumulate(out.private_per_stream.begin(), out.private_per_stream.end(), 0.0);
        out.draws = n_err;
        return out;
    }

    namespace
    {
        struct ChannelOutcome
        {
            AverageRates rates;
            int resampled = 0;
        };

        ChannelOutcome evaluate_channel(int c, const SystemConfig &config, const Scheme &scheme,
                                        const ErrorModel &error_model, double delta, const RngStream &rng,
                                        const ErgodicOptions &options)
        {
            const std::uint64_t cu = static_cast<std::uint64_t>(c);
            const double d = scheme.rate_splitting ? delta : 0.0;
            for (int attempt = 0; attempt <= options.max_resample; ++attempt)
            {
                RngStream est_rng = rng.substream({1, cu, static_cast<std::uint64_t>(attempt)});
                const CMatrix H_hat = generate_estimate(config, est_rng);
                try
                {
                    ChannelOutcome out;
                    out.resampled = attempt;
                    if (scheme.branches > 1)
                    {
                        const auto patterns = branch_patterns(config.K(), config.Nk.front(), scheme.branches);
                        const BranchChoice choice = select_branch(H_hat, patterns, scheme, config, error_model, d,
                                                                  options.branch_inner_draws,
                                                                  rng.substream({3, cu}));
                        out.rates = average_rates(choice.H_reordered, scheme, config, error_model, d,
                                                  config.mc_errors, rng.substream({2, cu}),
                                                  choice.pattern.row_order);
                    }
                    else
                    {
                        out.rates = average_rates(H_hat, scheme, config, error_model, d, config.mc_errors,
                                                  rng.substream({2, cu}));
                    }
                    return out;
                }
                catch (const RankError &)
                {
                    continue;
                }
            }
            throw NumericError("ergodic_sum_rate: could not draw a full-rank channel estimate");
        }
    }

    RateReport ergodic_sum_rate(const SystemConfig &config, const Scheme &scheme, const ErrorModel &error_model,
                                double delta, const RngStream &rng, const ErgodicOptions &options)
    {
        config.validate();
        error_model.validate();
        scheme.validate();
        if (scheme.branches > 1)
            for (int nk : config.Nk)
                if (nk != config.Nk.front())
                    throw ConfigError("multi-branch ordering needs the same antenna count at every user");

        const int n = config.mc_channels;
        std::vector<ChannelOutcome> results(static_cast<std::size_t>(n));
        const int threads = std::max(1, std::min(options.threads, n));

        if (threads == 1)
        {
            for (int c = 0; c < n; ++c)
                results[static_cast<std::size_t>(c)] = evaluate_channel(c, config, scheme, error_model, delta, rng, options);
        }
        else
        {
            std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
            std::vector<std::thread> pool;
            for (int t = 0; t < threads; ++t)
                pool.emplace_back([&, t]()
                                  {
                    try
                    {
                        for (int c = t; c < n; c += threads)
                            results[static_cast<std::size_t>(c)] =
                                evaluate_channel(c, config, scheme, error_model, delta, rng, options);
                    }
                    catch (...)
                    {
                        errors[static_cast<std::size_t>(t)] = std::current_exception();
                    } });
            for (auto &th : pool)
                th.join();
            for (auto &e : errors)
                if (e)
                    std::rethrow_exception(e);
        }

        // Reduction in channel index order.
        RateReport report;
        const std::size_t K = static_cast<std::size_t>(config.K());
        report.ergodic_common_per_user.assign(K, 0.0);
        std::vector<double> per_channel(static_cast<std::size_t>(n));
        for (int c = 0; c < n; ++c)
        {
            const auto &r = results[static_cast<std::size_t>(c)];
            for (std::size_t k = 0; k < K; ++k)
                report.ergodic_common_per_user[k] += r.rates.common_per_user[k];
            report.esr_private += r.rates.private_sum;
            report.resampled += r.resampled;
            per_channel[static_cast<std::size_t>(c)] = r.rates.sum_rate();
        }
        const double inv = 1.0 / static_cast<double>(n);
        for (auto &v : report.ergodic_common_per_user)
            v *= inv;
        report.esr_private *= inv;
        report.esr_common = *std::min_element(report.ergodic_common_per_user.begin(), report.ergodic_common_per_user.end());
        report.esr_total = report.esr_common + report.esr_private;

        if (n > 1)
        {
            const double mean = std::accumulate(per_channel.begin(), per_channel.end(), 0.0) * inv;
            double ss = 0.0;
            for (double v : per_channel)
                ss += (v - mean) * (v - mean);
            const double sd = std::sqrt(ss / static_cast<double>(n - 1));
            report.ci_halfwidth = 1.96 * sd / std::sqrt(static_cast<double>(n));
        }
        report.delta_used = scheme.rate_splitting ? delta : 0.0;
        report.n_channels = n;
        report.n_errors = config.mc_errors;
        return report;
    }

    double closed_form_common_sinr(const Eigen::RowVectorXcd &h_hat_row, const Eigen::RowVectorXcd &h_tilde_row,
                                   Eigen::Index antenna, const CVector &p_c, const ThpFilters &filters,
                                   double sigma_n2, double sigma_v2)
    {
        if (filters.design != ThpDesign::ZF)
            throw DomainError("closed_form_common_sinr: defined for ZF-THP filters");
        const double b2 = filters.beta * filters.beta;
        const double signal = std::norm((h_hat_row * p_c)(0));
        const double error_common = std::norm((h_tilde_row * p_c)(0));
        const Eigen::RowVectorXcd ef = h_tilde_row * filters.F; // h~_i^T q_j^H for every j
        double error_private = 0.0;
        double own_private = 0.0;
        if (filters.centralized())
        {
            for (Eigen::Index j = 0; j < ef.size(); ++j)
                error_private += std::norm(ef(j)) / std::norm(filters.L(j, j));
            own_private = sigma_v2;
        }
        else
        {
            error_private = ef.squaredNorm();
            own_private = filters.L.row(antenna).squaredNorm();
        }
        return signal / (error_common + b2 * own_private + b2 * error_private + sigma_n2);
    }

    RVector effective_norms_expanded(const CMatrix &Hk, const ThpFilters &filters)
    {
        const Eigen::Index M = filters.B.rows();
        const Eigen::Index Nt = filters.F.rows();
        const CMatrix Binv = filters.B.triangularView<Eigen::Lower>().solve(CMatrix::Identity(M, M));
        RVector out(M);
        for (Eigen::Index i = 0; i < M; ++i)
        {
            double acc = 0.0;
            for (Eigen::Index p = 0; p < Hk.rows(); ++p)
            {
                cdouble s = 0.0;
                for (Eigen::Index n = 0; n < Nt; ++n)
                    for (Eigen::Index j = 0; j < M; ++j)
                    {
                        // F(n, j) is the conjugate of q_{j,n}.
                        cdouble term = Hk(p, n) * filters.F(n, j) * Binv(j, i);
                        if (filters.centralized())
                            term /= filters.L(j, j).real();
                        s += term;
                    }
                acc += std::norm(s);
            }
            out(i) = filters.beta * filters.beta * acc;
        }
        return out;
    }
}
