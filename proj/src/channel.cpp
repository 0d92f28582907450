#include "rsthp/channel.hpp"
#include "rsthp/errors.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace rsthp
{
    int SystemConfig::Nr() const
    {
        return std::accumulate(Nk.begin(), Nk.end(), 0);
    }

    int SystemConfig::user_offset(int k) const
    {
        return std::accumulate(Nk.begin(), Nk.begin() + k, 0);
    }

    void SystemConfig::validate() const
    {
        if (Nk.empty())
            throw ConfigError("system: at least one user is required");
        for (int n : Nk)
            if (n < 1)
                throw ConfigError("system: every user needs at least one receive antenna");
        const int nr = Nr();
        if (Nt < nr)
            throw ConfigError("system: Nt (" + std::to_string(Nt) + ") must be >= Nr (" + std::to_string(nr) + ")");
        if (M < 1 || M > nr)
            throw ConfigError("system: stream count M must satisfy 1 <= M <= Nr");
        if (M != nr)
            throw ConfigError("system: only M = Nr (one private stream per receive antenna) is supported");
        if (!(Etr > 0.0) || !std::isfinite(Etr))
            throw ConfigError("system: Etr must be positive");
        if (!(sigma_n2 > 0.0) || !std::isfinite(sigma_n2))
            throw ConfigError("system: sigma_n2 must be positive");
        if (mc_channels < 1 || mc_errors < 1)
            throw ConfigError("system: Monte-Carlo sizes must be >= 1");
    }

    ErrorModel ErrorModel::fixed(double sigma_e2, ErrorConvention c)
    {
        ErrorModel m;
        m.mode = Mode::Fixed;
        m.sigma_e2 = sigma_e2;
        m.convention = c;
        return m;
    }

    ErrorModel ErrorModel::scaled(double scale, double alpha, ErrorConvention c)
    {
        ErrorModel m;
        m.mode = Mode::SnrScaled;
        m.scale = scale;
        m.alpha = alpha;
        m.convention = c;
        return m;
    }

    void ErrorModel::validate() const
    {
        if (mode == Mode::Fixed)
        {
            if (!(sigma_e2 >= 0.0) || !std::isfinite(sigma_e2))
                throw ConfigError("error model: sigma_e2 must be >= 0");
        }
        else
        {
            if (!(scale >= 0.0) || !std::isfinite(scale))
                throw ConfigError("error model: scale must be >= 0");
            if (!(alpha >= 0.0 && alpha <= 1.0))
                throw ConfigError("error model: alpha must lie in [0, 1]");
        }
    }

    double ErrorModel::nominal_variance(double Etr) const
    {
        if (mode == Mode::Fixed)
            return sigma_e2;
        return scale * std::pow(Etr, -alpha);
    }

    double ErrorModel::entry_variance(double Etr) const
    {
        const double v = nominal_variance(Etr);
        return convention == ErrorConvention::PerComponent ? 2.0 * v : v;
    }

    CMatrix generate_estimate(const SystemConfig &config, RngStream &rng)
    {
        return sample_cgauss(config.Nr(), config.Nt, 1.0, rng);
    }

    CMatrix draw_error(const SystemConfig &config, const ErrorModel &model, double Etr, RngStream &rng)
    {
        model.validate();
        return sample_cgauss(config.Nr(), config.Nt, model.entry_variance(Etr), rng);
    }

    ChannelSet assemble(const CMatrix &H_hat, const CMatrix &H_tilde)
    {
        if (H_hat.rows() != H_tilde.rows() || H_hat.cols() != H_tilde.cols())
            throw DomainError("assemble: estimate and error shapes differ");
        return ChannelSet{H_hat, H_tilde, H_hat + H_tilde};
    }
}
