// Acceptance suite: one PASS/FAIL line per criterion, details indented below.
// Exit status is the number of failed criteria.

#include "rsthp/flops.hpp"
#include "rsthp/harness.hpp"
#include "rsthp/multibranch.hpp"
#include "rsthp/symbolpipe.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using namespace rsthp;

namespace
{
    int threads()
    {
        const char *env = std::getenv("RSTHP_THREADS");
        const int n = env ? std::atoi(env) : 1;
        return n > 0 ? n : 1;
    }

    struct Outcome
    {
        bool pass = true;
        std::vector<std::string> details;

        void note(const std::string &s) { details.push_back(s); }
        void require(bool ok, const std::string &s)
        {
            pass = pass && ok;
            details.push_back(std::string(ok ? "ok    " : "FAIL  ") + s);
        }
    };

    std::string f2(double v, int prec = 2)
    {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.*f", prec, v);
        return buf;
    }

    double rel(double a, double b)
    {
        const double s = std::max(std::abs(a), std::abs(b));
        return s == 0.0 ? 0.0 : std::abs(a - b) / s;
    }

    // ---------------------------------------------------------------- 1
    Outcome reference_table()
    {
        Outcome o;
        const std::vector<std::string> schemes{"zf",          "zf-cthp",          "zf-dthp",
                                               "rs-zf-mmsec", "rs-zf-cthp-mmsec", "rs-zf-dthp-mmsec"};
        const std::vector<double> variances{0.05, 0.1, 0.2};
        const std::map<std::string, std::vector<double>> reference{
            {"zf", {9.88, 6.56, 3.90}},
            {"zf-cthp", {21.62, 15.43, 9.84}},
            {"zf-dthp", {28.21, 21.45, 14.78}},
            {"rs-zf-mmsec", {14.22, 11.55, 9.30}},
            {"rs-zf-cthp-mmsec", {25.16, 19.39, 14.18}},
            {"rs-zf-dthp-mmsec", {30.60, 24.32, 18.06}}};

        const auto rows = run_experiment(table5_spec(1), threads());
        std::map<std::string, std::vector<double>> got;
        for (const auto &r : rows)
            got[r.scheme].push_back(r.esr_total);

        o.note("seed 1, 100 x 100, SNR 20 dB, tolerance +-10% per cell");
        int in_band = 0;
        for (const auto &s : schemes)
            for (std::size_t v = 0; v < variances.size(); ++v)
            {
                const double ref = reference.at(s)[v];
                const double val = got.at(s)[v];
                const double dev = (val - ref) / ref;
                const bool ok = std::abs(dev) <= 0.10;
                in_band += ok;
                o.require(ok, s + " sigma_e2=" + f2(variances[v]) + ": " + f2(val) + " vs " + f2(ref) + " (" +
                                  (dev >= 0 ? "+" : "") + f2(100 * dev, 1) + "%)");
            }
        o.note(std::to_string(in_band) + "/18 cells within tolerance");

        bool order = true;
        for (const auto &s : schemes)
            for (std::size_t v = 1; v < variances.size(); ++v)
                order = order && got[s][v] < got[s][v - 1];
        for (std::size_t v = 0; v < variances.size(); ++v)
        {
            order = order && got["zf-dthp"][v] > got["zf-cthp"][v] && got["zf-cthp"][v] > got["zf"][v];
            order = order && got["rs-zf-dthp-mmsec"][v] > got["rs-zf-cthp-mmsec"][v] &&
                    got["rs-zf-cthp-mmsec"][v] > got["rs-zf-mmsec"][v];
            order = order && got["rs-zf-mmsec"][v] >= got["zf"][v] && got["rs-zf-cthp-mmsec"][v] >= got["zf-cthp"][v] &&
                    got["rs-zf-dthp-mmsec"][v] >= got["zf-dthp"][v];
        }
        o.require(order, "ordering: decreasing in sigma_e2, dTHP > cTHP > linear, RS >= non-RS");
        return o;
    }

    // ---------------------------------------------------------------- 2
    Outcome perfect_csit()
    {
        Outcome o;
        RngStream rng(2002);
        double worst_c = 0.0, worst_d = 0.0;
        for (int t = 0; t < 100; ++t)
        {
            const CMatrix H = sample_cgauss(12, 12, 1.0, rng);
            const RsPrecoder c = build_precoder(H, {PrecoderKind::ZfThp, ThpStructure::Centralized}, 100.0, 1.0, 0.3);
            const RsPrecoder d = build_precoder(H, {PrecoderKind::ZfThp, ThpStructure::Decentralized}, 100.0, 1.0, 0.3);
            CMatrix target_d = CMatrix::Zero(12, 12);
            for (int i = 0; i < 12; ++i)
                target_d(i, i) = d.filters.beta * d.filters.L(i, i);
            worst_c = std::max(worst_c, (H * c.q_cols - c.filters.beta * CMatrix::Identity(12, 12)).cwiseAbs().maxCoeff() /
                                            c.filters.beta);
            worst_d = std::max(worst_d, (H * d.q_cols - target_d).cwiseAbs().maxCoeff() / target_d.cwiseAbs().maxCoeff());
        }
        o.require(worst_c <= 1e-9, "cTHP  H q = beta I, worst relative entry error " + f2(worst_c * 1e12, 3) + "e-12");
        o.require(worst_d <= 1e-9,
                  "dTHP  H q = beta diag(l), worst relative entry error " + f2(worst_d * 1e12, 3) + "e-12");

        SystemConfig sys;
        int errors = 0, symbols = 0;
        for (auto st : {ThpStructure::Centralized, ThpStructure::Decentralized})
            for (int t = 0; t < 100; ++t)
            {
                const CMatrix H = sample_cgauss(12, 12, 1.0, rng);
                const ChannelSet ch = assemble(H, CMatrix::Zero(12, 12));
                const RsPrecoder p = build_precoder(H, {PrecoderKind::ZfThp, st}, 100.0, 1.0, 0.2);
                const ModuloSpec spec = uniform_modulo(Modulation::QPSK, 12);
                const auto w = make_combiners(Scheme::parse("rs-zf-dthp"), sys, ch, p, {}, 0.0);
                for (int f = 0; f < 10; ++f)
                {
                    const SymbolFrame fr = thp_encode(random_symbols(Modulation::QPSK, 12, rng), p.filters.B, spec);
                    const cdouble sc = random_symbols(Modulation::QPSK, 1, rng)(0);
                    const DecodeResult r =
                        receive_decode(H * transmit(fr, p, sc), ch, p, sys, w, sc, fr, spec, Modulation::QPSK);
                    errors += r.private_error_count();
                    symbols += 12;
                }
            }
        o.require(errors == 0, "noiseless QPSK round trips: " + std::to_string(errors) + " errors in " +
                                   std::to_string(symbols) + " private symbols");
        return o;
    }

    // ---------------------------------------------------------------- 3
    Outcome closed_forms()
    {
        Outcome o;
        RngStream rng(2003);
        double w37 = 0.0, w38 = 0.0, wmrc = 0.0, wmmse = 0.0, wnorm = 0.0;
        CVector e0 = CVector::Zero(1);
        e0(0) = 1.0;
        for (int t = 0; t < 1000; ++t)
        {
            const CMatrix H = sample_cgauss(12, 12, 1.0, rng);
            const double delta = 0.05 + 0.9 * rng.uniform();
            const int i = t % 12;
            const Eigen::RowVectorXcd zero = Eigen::RowVectorXcd::Zero(12);
            const RsPrecoder c = build_precoder(H, {PrecoderKind::ZfThp, ThpStructure::Centralized}, 100.0, 1.0, delta);
            const RsPrecoder d = build_precoder(H, {PrecoderKind::ZfThp, ThpStructure::Decentralized}, 100.0, 1.0, delta);
            w37 = std::max(w37, rel(closed_form_common_sinr(H.row(i), zero, i, c.p_c, c.filters, 1.0),
                                    combined_sinr(e0, H.row(i), c.p_c, c.q_cols, 1.0)));
            w38 = std::max(w38, rel(closed_form_common_sinr(H.row(i), zero, i, d.p_c, d.filters, 1.0),
                                    combined_sinr(e0, H.row(i), d.p_c, d.tx_cols, 1.0)));

            const CMatrix Hk = sample_cgauss(2, 12, 1.0, rng);
            const CMatrix Htrue = Hk + sample_cgauss(2, 12, 0.1, rng);
            wmrc = std::max(wmrc, rel(mrc_sinr_closed_form(Htrue, c.p_c, c.tx_cols, 1.0),
                                      combined_sinr(mrc_combiner(Htrue, c.p_c), Htrue, c.p_c, c.tx_cols, 1.0)));
            wmmse = std::max(wmmse, rel(mmsec_sinr_closed_form(Htrue, d.p_c, d.tx_cols, 1.0),
                                        combined_sinr(mmsec_combiner(Htrue, d.p_c, d.tx_cols, 1.0), Htrue, d.p_c,
                                                      d.tx_cols, 1.0)));
            for (const RsPrecoder *p : {&c, &d})
            {
                const RVector direct = (Htrue * p->q_cols).colwise().squaredNorm().transpose();
                const RVector expanded = effective_norms_expanded(Htrue, p->filters);
                for (Eigen::Index j = 0; j < 12; ++j)
                    wnorm = std::max(wnorm, rel(expanded(j), direct(j)));
            }
        }
        auto sci = [](double v) {
            char b[32];
            std::snprintf(b, sizeof b, "%.2e", v);
            return std::string(b);
        };
        o.require(w37 <= 1e-8, "cTHP per-antenna common SINR vs generic (w = e_i): worst rel " + sci(w37));
        o.require(w38 <= 1e-8, "dTHP per-antenna common SINR vs generic (w = e_i): worst rel " + sci(w38));
        o.require(wmrc <= 1e-8, "MRC closed form vs generic, 1000 instances: worst rel " + sci(wmrc));
        o.require(wmmse <= 1e-8, "MMSE closed form vs generic, 1000 instances: worst rel " + sci(wmmse));
        o.require(wnorm <= 1e-9, "element-wise norm expansion vs product: worst rel " + sci(wnorm));
        return o;
    }

    // ---------------------------------------------------------------- 4
    Outcome dominance()
    {
        Outcome o;
        RngStream rng(2004);
        int v_mrc = 0, v_sel = 0;
        const int n = 10000;
        SystemConfig sys;
        for (int t = 0; t < n; ++t)
        {
            const CMatrix H = sample_cgauss(12, 12, 1.0, rng);
            const CMatrix E = sample_cgauss(12, 12, 0.1, rng);
            const double delta = 0.05 + 0.9 * rng.uniform();
            const auto kind = t % 2 ? PrecoderKind::ZfThp : PrecoderKind::MmseThp;
            const auto st = t % 4 < 2 ? ThpStructure::Centralized : ThpStructure::Decentralized;
            const RsPrecoder p = build_precoder(H, {kind, st}, 100.0, 1.0, delta);
            const int k = t % 6;
            const CMatrix Hk = (H + E).middleRows(sys.user_offset(k), 2);
            const double g_mmse = combined_sinr(mmsec_combiner(Hk, p.p_c, p.tx_cols, 1.0), Hk, p.p_c, p.tx_cols, 1.0);
            const double g_mrc = combined_sinr(mrc_combiner(Hk, p.p_c), Hk, p.p_c, p.tx_cols, 1.0);
            double g_sel = 0.0;
            for (int i = 0; i < 2; ++i)
                g_sel = std::max(g_sel, combined_sinr(selection_combiner(2, i), Hk, p.p_c, p.tx_cols, 1.0));
            // Slack of a few ulps for the two evaluation paths.
            v_mrc += g_mmse < g_mrc * (1.0 - 1e-12);
            v_sel += g_sel > g_mmse * (1.0 + 1e-12);
        }
        o.require(v_mrc == 0, "MMSEc >= MRC: " + std::to_string(v_mrc) + " violations in " + std::to_string(n));
        o.require(v_sel == 0,
                  "MMSEc >= best single antenna: " + std::to_string(v_sel) + " violations in " + std::to_string(n));
        return o;
    }

    // ---------------------------------------------------------------- 5
    Outcome rs_never_hurts()
    {
        Outcome o;
        ExperimentSpec spec;
        spec.name = "rs-vs-base";
        spec.schemes = {Scheme::parse("zf"), Scheme::parse("zf-cthp"), Scheme::parse("zf-dthp"),
                        Scheme::parse("mmse-cthp"), Scheme::parse("mmse-dthp")};
        const std::size_t bases = spec.schemes.size();
        for (std::size_t i = 0; i < bases; ++i)
            spec.schemes.push_back(Scheme::parse("rs-" + spec.schemes[i].id() + "-mmsec"));
        spec.snr_grid_dB = {0.0, 10.0, 20.0, 30.0};
        for (double v : {0.0, 0.05, 0.1, 0.2})
            spec.error_models.push_back(ErrorModel::fixed(v, ErrorConvention::PerComponent));
        const auto rows = run_experiment(spec, threads());

        std::map<std::tuple<std::string, double, double>, ResultRow> at;
        for (const auto &r : rows)
            at[{r.scheme, r.snr_dB, r.sigma_e2}] = r;
        int points = 0, violations = 0;
        double worst = 1e9;
        std::string worst_at;
        for (std::size_t i = 0; i < bases; ++i)
        {
            const std::string b = spec.schemes[i].id();
            const std::string rs = "rs-" + b + "-mmsec";
            for (double snr : spec.snr_grid_dB)
                for (double v : {0.0, 0.05, 0.1, 0.2})
                {
                    const ResultRow &x = at[{b, snr, v}];
                    const ResultRow &y = at[{rs, snr, v}];
                    const double margin = y.esr_total - (x.esr_total - y.ci_halfwidth);
                    ++points;
                    violations += margin < 0.0;
                    if (margin < worst)
                    {
                        worst = margin;
                        worst_at = rs + " at " + f2(snr, 0) + " dB, sigma_e2=" + f2(v);
                    }
                    if (margin < 0.0)
                        o.note("FAIL  " + rs + " " + f2(y.esr_total) + " < " + b + " " + f2(x.esr_total) +
                               " - CI " + f2(y.ci_halfwidth) + " at " + f2(snr, 0) + " dB, sigma_e2=" + f2(v));
                }
        }
        o.require(violations == 0, std::to_string(points) + " (scheme, SNR, sigma_e2) points, " +
                                       std::to_string(violations) + " violations; tightest " + worst_at +
                                       " with margin " + f2(worst) + " b/s/Hz");
        return o;
    }

    // ---------------------------------------------------------------- 6
    Outcome multibranch_gain()
    {
        Outcome o;
        const ErrorModel em = ErrorModel::fixed(0.06, ErrorConvention::PerComponent);
        const RngStream eval = evaluation_stream(1);
        const RngStream pilot = pilot_stream(1);
        ErgodicOptions eo;
        eo.threads = threads();
        for (const char *base : {"zf-cthp", "zf-dthp", "mmse-cthp", "rs-zf-cthp-mmsec", "rs-zf-dthp-mmsec",
                                 "rs-mmse-cthp-mmsec"})
            for (double snr : {10.0, 20.0, 30.0})
            {
                SystemConfig sys;
                sys.Etr = snr_to_etr(snr);
                const Scheme s1 = Scheme::parse(base);
                Scheme s4 = s1;
                s4.branches = 4;
                const double delta = s1.rate_splitting ? allocate_common_power(s1, sys, em, pilot).delta : 0.0;
                const RateReport r1 = ergodic_sum_rate(sys, s1, em, delta, eval, eo);
                const RateReport r4 = ergodic_sum_rate(sys, s4, em, delta, eval, eo);
                o.require(r4.esr_total >= r1.esr_total, std::string(base) + " " + f2(snr, 0) + " dB: L_o=4 " +
                                                            f2(r4.esr_total) + " vs L_o=1 " + f2(r1.esr_total));
            }

        SystemConfig sys;
        bool identical = true;
        for (const char *id : {"zf-cthp", "rs-mmse-cthp-mmsec"})
        {
            const Scheme plain = Scheme::parse(id);
            const Scheme mb1 = Scheme::parse(std::string("mb1-") + id);
            const RateReport a = ergodic_sum_rate(sys, plain, em, 0.3, eval, eo);
            const RateReport b = ergodic_sum_rate(sys, mb1, em, 0.3, eval, eo);
            identical = identical && a.esr_total == b.esr_total && a.esr_private == b.esr_private &&
                        a.ergodic_common_per_user == b.ergodic_common_per_user && a.ci_halfwidth == b.ci_halfwidth;
        }
        o.require(identical, "L_o=1 reports are bitwise identical to the non-branching pipeline");
        return o;
    }

    // ---------------------------------------------------------------- 7
    Outcome flops()
    {
        Outcome o;
        int mismatches = 0, checked = 0;
        for (std::int64_t n : {4, 8, 12, 16})
            for (std::int64_t K : {1, 2, 4})
            {
                const Rational N3(n * n * n), N2(n * n);
                const Rational zf = Rational(16, 3) * N3, mm = Rational(40, 3) * N3;
                const Rational mmse_comb = Rational(4, 3 * K * K) * N3 + Rational(8, K) * N2;
                const std::map<FlopsScheme, Rational> table{
                    {FlopsScheme::ZfThp, zf + Rational(13 * n * n + 8 * n - 8)},
                    {FlopsScheme::RsZfThpMinMax, zf + Rational(21 * n * n + 22 * n - 2 * K - 8)},
                    {FlopsScheme::RsZfThpMrc, zf + Rational(29 * n * n + 20 * n + 6 * K - 8)},
                    {FlopsScheme::RsZfThpMmsec, zf + mmse_comb + Rational(29 * n * n + 34 * n - 2 * K - 8)},
                    {FlopsScheme::MmseThp, mm + Rational(13 * n * n + 8 * n - 8)},
                    {FlopsScheme::RsMmseThpMinMax, mm + Rational(21 * n * n + 22 * n - 2 * K - 8)},
                    {FlopsScheme::RsMmseThpMrc, mm + Rational(29 * n * n + 20 * n + 6 * K - 8)},
                    {FlopsScheme::RsMmseThpMmsec, mm + mmse_comb + Rational(29 * n * n + 34 * n - 2 * K - 8)}};
                for (const auto &[s, v] : table)
                {
                    ++checked;
                    mismatches += !(flops_scheme({s, n, K}) == v);
                }
            }
        o.require(mismatches == 0, std::to_string(checked) + " scheme polynomials at n in {4,8,12,16}, K in {1,2,4}: " +
                                       std::to_string(mismatches) + " mismatches");
        o.require(flops_scheme({FlopsScheme::ZfThp, 12, 6}) == Rational(11176), "ZF-THP at n=12: " +
                                                                                  flops_scheme({FlopsScheme::ZfThp, 12, 6}).str());

        RngStream rng(2007);
        int bad = 0, products = 0;
        for (int m = 1; m <= 12; ++m)
            for (int n = 1; n <= 12; n += 3)
                for (int p = 1; p <= 12; p += 5)
                {
                    const CountedProduct r = counted_multiply(sample_cgauss(m, n, 1.0, rng), sample_cgauss(n, p, 1.0, rng));
                    ++products;
                    bad += r.flops != static_cast<std::uint64_t>(8 * m * n * p - 2 * m * p);
                }
        o.require(bad == 0, "instrumented products: " + std::to_string(products) + " shapes, " + std::to_string(bad) +
                                " differ from 8mnp - 2mp");
        return o;
    }

    // ---------------------------------------------------------------- 8
    Outcome modulo_lattice()
    {
        Outcome o;
        RngStream rng(2008);
        std::uniform_int_distribution<int> shift(-100, 100);
        const int n = 100000;
        int period = 0, idem = 0, range = 0, eq9 = 0;
        auto off_lattice = [](cdouble d, double lambda) {
            const double a = d.real() / lambda, b = d.imag() / lambda;
            return std::max(std::abs(a - std::round(a)), std::abs(b - std::round(b))) > 1e-9;
        };
        CMatrix B;
        for (int t = 0; t < n; ++t)
        {
            const double lambda = t % 2 ? lambda_for(Modulation::QPSK) : lambda_for(Modulation::QAM16);
            const cdouble z(20.0 * rng.normal(), 20.0 * rng.normal());
            const cdouble m = modulo(z, lambda);
            const cdouble zs = z + lambda * cdouble(shift(rng.engine()), shift(rng.engine()));
            period += std::abs(modulo(zs, lambda) - m) > 1e-9;
            idem += modulo(m, lambda) != m;
            range += !(m.real() >= -lambda / 2 && m.real() < lambda / 2 && m.imag() >= -lambda / 2 &&
                       m.imag() < lambda / 2);

            if (t % 100 == 0)
                B = zf_thp_filters(sample_cgauss(6, 6, 1.0, rng), ThpStructure::Decentralized).B;
            const auto mod = t % 2 ? Modulation::QPSK : Modulation::QAM16;
            const SymbolFrame fr = thp_encode(random_symbols(mod, 6, rng), B, uniform_modulo(mod, 6));
            bool ok = (B * fr.v - fr.s - fr.d).norm() <= 1e-9;
            for (int i = 0; i < 6; ++i)
                ok = ok && !off_lattice(fr.d(i), lambda_for(mod));
            eq9 += !ok;
        }
        o.require(period == 0, "periodicity: " + std::to_string(period) + " failures in " + std::to_string(n));
        o.require(idem == 0, "idempotence: " + std::to_string(idem) + " failures in " + std::to_string(n));
        o.require(range == 0, "half-open range: " + std::to_string(range) + " failures in " + std::to_string(n));
        o.require(eq9 == 0, "B v = s + d with lattice d: " + std::to_string(eq9) + " failures in " + std::to_string(n));
        return o;
    }

    // ---------------------------------------------------------------- 9
    Outcome scaled_error()
    {
        Outcome o;
        ExperimentSpec spec = scaled_error_spec(1);
        spec.schemes = {Scheme::parse("rs-zf-cthp-mmsec"), Scheme::parse("rs-zf-dthp-mmsec"),
                        Scheme::parse("rs-mmse-cthp-mmsec"), Scheme::parse("rs-mmse-dthp-mmsec")};
        spec.snr_grid_dB = {20.0, 25.0, 30.0};
        const auto rows = run_experiment(spec, threads());
        for (std::size_t s = 0; s < spec.schemes.size(); ++s)
        {
            const auto &a = rows[3 * s], &b = rows[3 * s + 1], &c = rows[3 * s + 2];
            const bool rising = b.esr_total > a.esr_total && c.esr_total > b.esr_total;
            o.require(rising, a.scheme + ": " + f2(a.esr_total) + " / " + f2(b.esr_total) + " / " + f2(c.esr_total) +
                                  " at 20 / 25 / 30 dB");
        }
        return o;
    }
}

int main()
{
    struct Criterion
    {
        const char *name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {"C1 ZF-family ESR against reference values", reference_table},
        {"C2 perfect-CSIT cancellation and noiseless round trip", perfect_csit},
        {"C3 closed-form SINR and norm equivalences", closed_forms},
        {"C4 combiner dominance", dominance},
        {"C5 rate splitting never hurts", rs_never_hurts},
        {"C6 multi-branch gain", multibranch_gain},
        {"C7 FLOPS tables and instrumented counting", flops},
        {"C8 modulo-lattice properties", modulo_lattice},
        {"C9 scaled-error ESR keeps rising", scaled_error},
    };

    int failed = 0;
    for (const auto &c : criteria)
    {
        const auto t0 = std::chrono::steady_clock::now();
        const Outcome o = c.run();
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.name, secs);
        for (const auto &d : o.details)
            std::printf("        %s\n", d.c_str());
        std::fflush(stdout);
        failed += !o.pass;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed;
}
