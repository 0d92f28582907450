#pragma once

#include "rsthp/combining.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace rsthp
{
    // Exact rational arithmetic for closed-form operation counts.
    class Rational
    {
    public:
        Rational(std::int64_t num = 0, std::int64_t den = 1);

        std::int64_t num() const { return num_; }
        std::int64_t den() const { return den_; }
        bool is_integer() const { return den_ == 1; }
        double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
        std::string str() const;

        Rational operator+(const Rational &o) const;
        Rational operator-(const Rational &o) const;
        Rational operator*(const Rational &o) const;
        Rational operator/(const Rational &o) const;
        Rational &operator+=(const Rational &o) { return *this = *this + o; }
        bool operator==(const Rational &o) const { return num_ == o.num_ && den_ == o.den_; }
        bool operator<(const Rational &o) const;

    private:
        std::int64_t num_;
        std::int64_t den_;
    };

    enum class FlopsScheme
    {
        ZfThp,
        RsZfThpMinMax,
        RsZfThpMrc,
        RsZfThpMmsec,
        MmseThp,
        RsMmseThpMinMax,
        RsMmseThpMrc,
        RsMmseThpMmsec
    };

    struct FlopsModel
    {
        FlopsScheme scheme = FlopsScheme::ZfThp;
        std::int64_t n = 12; // Nt = Nr = n
        std::int64_t K = 6;

        void validate() const; // ConfigError unless n >= K >= 1
    };

    std::vector<FlopsScheme> all_flops_schemes();
    std::string flops_scheme_id(FlopsScheme s);
    FlopsScheme parse_flops_scheme(const std::string &id); // ConfigError on unknown id

    Rational flops_matmul(std::int64_t m, std::int64_t n, std::int64_t p);
    Rational flops_lq(std::int64_t m, std::int64_t n);
    Rational flops_combiner(CombinerKind kind, std::int64_t n, std::int64_t K);

    struct ThpStepCosts
    {
        Rational lq;
        Rational feedback;    // B from L and C
        Rational recursion;   // successive generation of v
        Rational feedforward; // F applied to the scaled v
        Rational total() const { return lq + feedback + recursion + feedforward; }
    };
    // Per-step breakdown for conventional ZF-THP with Nt = Nr = n.
    ThpStepCosts zf_thp_steps(std::int64_t n);

    // Common-precoder and SIC overhead that the RS schemes add on top of the
    // base THP and the combiner. It is not the same for every combiner.
    Rational rs_overhead(CombinerKind kind, std::int64_t n);

    Rational flops_scheme(const FlopsModel &model);
}
