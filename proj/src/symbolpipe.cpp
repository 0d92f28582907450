#include "rsthp/symbolpipe.hpp"
#include "rsthp/errors.hpp"

#include <cmath>
#include <limits>

namespace rsthp
{
    namespace
    {
        double fold(double x, double lambda)
        {
            return x - lambda * std::floor(x / lambda + 0.5);
        }

        int alphabet_size(Modulation m)
        {
            switch (m)
            {
            case Modulation::QPSK:
                return 4;
            case Modulation::QAM16:
                return 16;
            case Modulation::Gaussian:
                break;
            }
            throw DomainError("modulation has no finite alphabet");
        }
    }

    cdouble modulo(cdouble z, double lambda)
    {
        if (!(lambda > 0.0))
            throw DomainError("modulo period must be positive");
        double re = fold(z.real(), lambda);
        double im = fold(z.imag(), lambda);
        // Guard the open upper edge against rounding in x / lambda.
        if (re >= lambda / 2)
            re -= lambda;
        if (im >= lambda / 2)
            im -= lambda;
        return {re, im};
    }

    double lambda_for(Modulation modulation, double Ek)
    {
        if (!(Ek > 0.0))
            throw DomainError("symbol energy must be positive");
        const double Mo = alphabet_size(modulation);
        return std::sqrt(6.0 * Mo * Ek / (Mo - 1.0));
    }

    ModuloSpec uniform_modulo(Modulation modulation, Eigen::Index streams, double Ek)
    {
        return {RVector::Constant(streams, lambda_for(modulation, Ek))};
    }

    std::vector<cdouble> constellation(Modulation modulation)
    {
        const int Mo = alphabet_size(modulation);
        const int side = Mo == 4 ? 2 : 4;
        const double norm = std::sqrt(2.0 * (Mo - 1.0) / 3.0);
        std::vector<cdouble> pts;
        for (int a = 0; a < side; ++a)
            for (int b = 0; b < side; ++b)
                pts.emplace_back((2.0 * a - (side - 1)) / norm, (2.0 * b - (side - 1)) / norm);
        return pts;
    }

    cdouble slice(cdouble z, const std::vector<cdouble> &points)
    {
        cdouble best = points.front();
        double best_d = std::numeric_limits<double>::infinity();
        for (const cdouble &p : points)
        {
            const double d = std::norm(z - p);
            if (d < best_d)
            {
                best_d = d;
                best = p;
            }
        }
        return best;
    }

    CVector random_symbols(Modulation modulation, Eigen::Index n, RngStream &rng)
    {
        const auto pts = constellation(modulation);
        std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
        CVector s(n);
        for (Eigen::Index i = 0; i < n; ++i)
            s(i) = pts[pick(rng.engine())];
        return s;
    }

    SymbolFrame thp_encode(const CVector &s, const CMatrix &B, const ModuloSpec &spec)
    {
        const Eigen::Index M = s.size();
        if (B.rows() != M || B.cols() != M || spec.lambda.size() != M)
            throw DomainError("thp_encode: shape mismatch");
        SymbolFrame f;
        f.s = s;
        f.v = CVector::Zero(M);
        for (Eigen::Index i = 0; i < M; ++i)
        {
            cdouble acc = s(i);
            for (Eigen::Index j = 0; j < i; ++j)
                acc -= B(i, j) * f.v(j);
            f.v(i) = i == 0 ? s(0) : modulo(acc, spec.lambda(i));
        }
        f.d = B * f.v - s;
        return f;
    }

    CVector transmit(const SymbolFrame &frame, const RsPrecoder &precoder, cdouble s_c, double scale)
    {
        if (frame.v.size() != precoder.streams())
            throw DomainError("transmit: frame does not match the precoder");
        return precoder.p_c * s_c + scale * (precoder.tx_cols * frame.v);
    }

    PowerLoss measure_power_loss(const CMatrix &B, Modulation modulation, int n_frames, RngStream &rng)
    {
        if (n_frames < 1)
            throw ConfigError("measure_power_loss: need at least one frame");
        const Eigen::Index M = B.rows();
        const ModuloSpec spec = uniform_modulo(modulation, M);
        PowerLoss out;
        out.stream_variance = RVector::Zero(M);
        for (int f = 0; f < n_frames; ++f)
        {
            const SymbolFrame frame = thp_encode(random_symbols(modulation, M, rng), B, spec);
            out.stream_variance += frame.v.cwiseAbs2();
        }
        out.stream_variance /= static_cast<double>(n_frames);
        out.tau = 1.0 / out.stream_variance.mean();
        return out;
    }

    double compensation_scale(const RsPrecoder &precoder, const RVector &stream_variance)
    {
        const RVector col_power = precoder.tx_cols.colwise().squaredNorm().transpose();
        const double design = col_power.sum();
        const double actual = col_power.dot(stream_variance);
        if (!(actual > 0.0))
            return 1.0;
        return std::sqrt(design / actual);
    }

    int DecodeResult::private_error_count() const
    {
        int n = 0;
        for (bool e : private_error)
            n += e ? 1 : 0;
        return n;
    }

    DecodeResult receive_decode(const CVector &y, const ChannelSet &channel, const RsPrecoder &precoder,
                                const SystemConfig &config, const std::vector<CVector> &combiners, cdouble s_c,
                                const SymbolFrame &frame, const ModuloSpec &spec, Modulation modulation,
                                double scale)
    {
        const Eigen::Index M = precoder.streams();
        if (y.size() != M || channel.H_true.rows() != M)
            throw DomainError("receive_decode: shape mismatch");
        if (!precoder.nonlinear)
            throw DomainError("receive_decode: THP precoder required");
        const auto pts = constellation(modulation);
        DecodeResult out;

        const CVector hp = channel.H_true * precoder.p_c;
        if (precoder.p_c.squaredNorm() > 0.0)
        {
            for (int k = 0; k < config.K(); ++k)
            {
                const int off = config.user_offset(k);
                const int nk = config.Nk[static_cast<std::size_t>(k)];
                const CVector &w = combiners[static_cast<std::size_t>(k)];
                const cdouble ref = w.dot(hp.segment(off, nk));
                const cdouble est = slice(w.dot(y.segment(off, nk)) / ref, pts);
                out.common_hat.push_back(est);
                out.common_error.push_back(est != s_c);
            }
        }

        out.private_hat.resize(M);
        out.private_error.resize(static_cast<std::size_t>(M));
        for (Eigen::Index i = 0; i < M; ++i)
        {
            const cdouble z = (y(i) - hp(i) * s_c) / (scale * precoder.gain(i));
            const cdouble est = slice(modulo(z, spec.lambda(i)), pts);
            out.private_hat(i) = est;
            out.private_error[static_cast<std::size_t>(i)] = est != frame.s(i);
        }
        return out;
    }
}
