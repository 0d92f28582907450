#include "rsthp/flops.hpp"
#include "rsthp/errors.hpp"

#include <numeric>

namespace rsthp
{
    Rational::Rational(std::int64_t num, std::int64_t den)
    {
        if (den == 0)
            throw DomainError("rational with zero denominator");
        if (den < 0)
        {
            num = -num;
            den = -den;
        }
        const std::int64_t g = std::gcd(num, den);
        num_ = g ? num / g : 0;
        den_ = g ? den / g : 1;
    }

    std::string Rational::str() const
    {
        return is_integer() ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
    }

    Rational Rational::operator+(const Rational &o) const
    {
        return {num_ * o.den_ + o.num_ * den_, den_ * o.den_};
    }

    Rational Rational::operator-(const Rational &o) const
    {
        return {num_ * o.den_ - o.num_ * den_, den_ * o.den_};
    }

    Rational Rational::operator*(const Rational &o) const
    {
        return {num_ * o.num_, den_ * o.den_};
    }

    Rational Rational::operator/(const Rational &o) const
    {
        return {num_ * o.den_, den_ * o.num_};
    }

    bool Rational::operator<(const Rational &o) const
    {
        return num_ * o.den_ < o.num_ * den_;
    }

    void FlopsModel::validate() const
    {
        if (K < 1 || n < K)
            throw ConfigError("flops model needs n >= K >= 1");
    }

    std::vector<FlopsScheme> all_flops_schemes()
    {
        return {FlopsScheme::ZfThp,   FlopsScheme::RsZfThpMinMax,   FlopsScheme::RsZfThpMrc,   FlopsScheme::RsZfThpMmsec,
                FlopsScheme::MmseThp, FlopsScheme::RsMmseThpMinMax, FlopsScheme::RsMmseThpMrc, FlopsScheme::RsMmseThpMmsec};
    }

    std::string flops_scheme_id(FlopsScheme s)
    {
        switch (s)
        {
        case FlopsScheme::ZfThp: return "zf-thp";
        case FlopsScheme::RsZfThpMinMax: return "rs-zf-thp-minmax";
        case FlopsScheme::RsZfThpMrc: return "rs-zf-thp-mrc";
        case FlopsScheme::RsZfThpMmsec: return "rs-zf-thp-mmsec";
        case FlopsScheme::MmseThp: return "mmse-thp";
        case FlopsScheme::RsMmseThpMinMax: return "rs-mmse-thp-minmax";
        case FlopsScheme::RsMmseThpMrc: return "rs-mmse-thp-mrc";
        case FlopsScheme::RsMmseThpMmsec: return "rs-mmse-thp-mmsec";
        }
        return {};
    }

    FlopsScheme parse_flops_scheme(const std::string &id)
    {
        for (FlopsScheme s : all_flops_schemes())
            if (flops_scheme_id(s) == id)
                return s;
        throw ConfigError("unknown flops scheme '" + id + "'");
    }

    Rational flops_matmul(std::int64_t m, std::int64_t n, std::int64_t p)
    {
        if (m < 1 || n < 1 || p < 1)
            throw ConfigError("flops_matmul: dimensions must be positive");
        return {8 * m * n * p - 2 * m * p};
    }

    Rational flops_lq(std::int64_t m, std::int64_t n)
    {
        if (m < 1 || m > n)
            throw ConfigError("flops_lq: need 1 <= m <= n");
        // 8 m^2 (n - m/3)
        return Rational(8 * m * m) * (Rational(n) - Rational(m, 3));
    }

    Rational flops_combiner(CombinerKind kind, std::int64_t n, std::int64_t K)
    {
        if (K < 1 || n < 1)
            throw ConfigError("flops_combiner: n and K must be positive");
        const Rational N(n);
        switch (kind)
        {
        case CombinerKind::FirstAntenna:
            return {0};
        case CombinerKind::MinMax:
            return {8 * n - 2 * K};
        case CombinerKind::MRC:
            return {8 * n * n + 6 * n + 6 * K};
        case CombinerKind::MMSEc:
            return Rational(4, 3 * K * K) * N * N * N + Rational(8, K) * N * N + Rational(8 * n * n + 4 * n - 2 * K);
        }
        return {0};
    }

    ThpStepCosts zf_thp_steps(std::int64_t n)
    {
        if (n < 2)
            throw ConfigError("zf_thp_steps: n must be at least 2");
        ThpStepCosts s;
        s.lq = flops_lq(n, n);
        s.feedback = Rational(n * n);
        s.recursion = Rational(4 * n * n + 4 * n - 8);
        s.feedforward = Rational(8 * n * n + 4 * n);
        return s;
    }

    Rational rs_overhead(CombinerKind kind, std::int64_t n)
    {
        switch (kind)
        {
        case CombinerKind::MinMax:
        case CombinerKind::MRC:
            return {8 * n * n + 6 * n};
        case CombinerKind::MMSEc:
            return {8 * n * n + 22 * n};
        case CombinerKind::FirstAntenna:
            break;
        }
        throw ConfigError("rs_overhead: RS schemes carry a combiner");
    }

    Rational flops_scheme(const FlopsModel &model)
    {
        model.validate();
        const std::int64_t n = model.n;
        const bool mmse = model.scheme == FlopsScheme::MmseThp || model.scheme == FlopsScheme::RsMmseThpMinMax ||
                          model.scheme == FlopsScheme::RsMmseThpMrc || model.scheme == FlopsScheme::RsMmseThpMmsec;
        // MMSE factors the n x 2n extended channel.
        const Rational lq = mmse ? flops_lq(n, 2 * n) : flops_lq(n, n);
        const ThpStepCosts steps = zf_thp_steps(n);
        const Rational base = lq + steps.feedback + steps.recursion + steps.feedforward;

        CombinerKind kind = CombinerKind::FirstAntenna;
        switch (model.scheme)
        {
        case FlopsScheme::ZfThp:
        case FlopsScheme::MmseThp:
            return base;
        case FlopsScheme::RsZfThpMinMax:
        case FlopsScheme::RsMmseThpMinMax:
            kind = CombinerKind::MinMax;
            break;
        case FlopsScheme::RsZfThpMrc:
        case FlopsScheme::RsMmseThpMrc:
            kind = CombinerKind::MRC;
            break;
        case FlopsScheme::RsZfThpMmsec:
        case FlopsScheme::RsMmseThpMmsec:
            kind = CombinerKind::MMSEc;
            break;
        }
        return base + flops_combiner(kind, n, model.K) + rs_overhead(kind, n);
    }
}
