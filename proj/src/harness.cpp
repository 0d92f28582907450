#include "rsthp/harness.hpp"
#include "rsthp/errors.hpp"

#include "rsthp/multibranch.hpp"

#include <json.hpp>

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace rsthp
{
    void ExperimentSpec::validate() const
    {
        system.validate();
        if (schemes.empty())
            throw ConfigError("experiment has no schemes");
        if (snr_grid_dB.empty())
            throw ConfigError("experiment has an empty SNR grid");
        if (error_models.empty())
            throw ConfigError("experiment has no error model");
        if (system.mc_channels < 1 || system.mc_errors < 1)
            throw ConfigError("Monte-Carlo channel and error counts must be positive");
        for (const Scheme &s : schemes)
        {
            s.validate();
            if (s.branches > 1)
                branch_patterns(system.Nk, s.branches);
        }
        for (const ErrorModel &e : error_models)
            e.validate();
        if (delta_policy.mode == DeltaPolicy::Mode::Fixed && !(delta_policy.value >= 0.0 && delta_policy.value <= 1.0))
            throw ConfigError("fixed delta must lie in [0, 1]");
        if (delta_policy.mode == DeltaPolicy::Mode::Search)
        {
            delta_grid(delta_policy.search.grid_points);
            if (delta_policy.search.pilot_channels < 1 || delta_policy.search.pilot_errors < 1)
                throw ConfigError("pilot ensemble sizes must be positive");
        }
    }

    double snr_to_etr(double snr_dB)
    {
        return std::pow(10.0, snr_dB / 10.0);
    }

    RngStream evaluation_stream(std::uint64_t seed)
    {
        return RngStream(seed, {0});
    }

    RngStream pilot_stream(std::uint64_t seed)
    {
        return RngStream(seed, {7});
    }

    std::vector<ResultRow> run_experiment(const ExperimentSpec &spec, int threads, const ProgressFn &progress)
    {
        spec.validate();
        const RngStream eval = evaluation_stream(spec.system.seed);
        const RngStream pilot = pilot_stream(spec.system.seed);

        std::vector<ResultRow> rows;
        for (const ErrorModel &em : spec.error_models)
        {
            for (const Scheme &scheme : spec.schemes)
            {
                for (double snr : spec.snr_grid_dB)
                {
                    SystemConfig sys = spec.system;
                    sys.Etr = snr_to_etr(snr);

                    double delta = 0.0;
                    if (scheme.rate_splitting)
                    {
                        if (spec.delta_policy.mode == DeltaPolicy::Mode::Fixed)
                        {
                            delta = spec.delta_policy.value;
                        }
                        else
                        {
                            DeltaSearchOptions opts = spec.delta_policy.search;
                            opts.threads = threads;
                            delta = allocate_common_power(scheme, sys, em, pilot, opts).delta;
                        }
                    }

                    ErgodicOptions eo;
                    eo.threads = threads;
                    const RateReport r = ergodic_sum_rate(sys, scheme, em, delta, eval, eo);

                    ResultRow row;
                    row.scheme = scheme.id();
                    row.snr_dB = snr;
                    row.sigma_e2 = em.nominal_variance(sys.Etr);
                    row.delta_used = r.delta_used;
                    row.esr_total = r.esr_total;
                    row.esr_common = r.esr_common;
                    row.esr_private = r.esr_private;
                    row.ci_halfwidth = r.ci_halfwidth;
                    row.n_channels = r.n_channels;
                    row.n_errors = r.n_errors;
                    row.seed = spec.system.seed;
                    row.resampled = r.resampled;
                    if (progress)
                        progress(row);
                    rows.push_back(row);
                }
            }
        }
        return rows;
    }

    std::vector<DeltaSweepPoint> sweep_delta(const SystemConfig &system, const Scheme &scheme,
                                             const ErrorModel &error_model, const std::vector<double> &deltas,
                                             int threads)
    {
        if (!scheme.rate_splitting)
            throw ConfigError("delta sweep needs a rate-splitting scheme");
        const RngStream eval = evaluation_stream(system.seed);
        ErgodicOptions eo;
        eo.threads = threads;
        std::vector<DeltaSweepPoint> out;
        for (double d : deltas)
        {
            if (!(d >= 0.0 && d <= 1.0))
                throw ConfigError("delta must lie in [0, 1]");
            out.push_back({d, ergodic_sum_rate(system, scheme, error_model, d, eval, eo)});
        }
        return out;
    }

    namespace
    {
        std::vector<Scheme> parse_all(const std::vector<std::string> &ids)
        {
            std::vector<Scheme> out;
            for (const auto &id : ids)
                out.push_back(Scheme::parse(id));
            return out;
        }

        std::vector<double> snr_range(double from, double to, double step)
        {
            std::vector<double> out;
            for (double s = from; s <= to + 1e-9; s += step)
                out.push_back(s);
            return out;
        }
    }

    ExperimentSpec table5_spec(std::uint64_t seed)
    {
        ExperimentSpec spec;
        spec.name = "table5";
        spec.system.seed = seed;
        spec.schemes = parse_all({"zf", "zf-cthp", "zf-dthp", "rs-zf-mmsec", "rs-zf-cthp-mmsec", "rs-zf-dthp-mmsec"});
        spec.snr_grid_dB = {20.0};
        for (double v : {0.05, 0.1, 0.2})
            spec.error_models.push_back(ErrorModel::fixed(v, ErrorConvention::PerComponent));
        return spec;
    }

    ExperimentSpec perfect_csit_spec(std::uint64_t seed)
    {
        ExperimentSpec spec;
        spec.name = "perfect-csit";
        spec.system.seed = seed;
        spec.schemes = parse_all({"zf", "zf-cthp", "zf-dthp", "rs-zf-mmsec", "rs-zf-cthp-mmsec", "rs-zf-dthp-mmsec"});
        spec.snr_grid_dB = snr_range(0.0, 30.0, 5.0);
        spec.error_models = {ErrorModel::fixed(0.0)};
        return spec;
    }

    ExperimentSpec scaled_error_spec(std::uint64_t seed)
    {
        ExperimentSpec spec;
        spec.name = "scaled-error";
        spec.system.seed = seed;
        spec.schemes = parse_all({"zf-cthp", "zf-dthp", "mmse-cthp", "mmse-dthp", "rs-zf-cthp-mmsec",
                                  "rs-zf-dthp-mmsec", "rs-mmse-cthp-mmsec", "rs-mmse-dthp-mmsec"});
        spec.snr_grid_dB = snr_range(0.0, 30.0, 5.0);
        spec.error_models = {ErrorModel::scaled(0.95, 0.6, ErrorConvention::PerComponent)};
        return spec;
    }

    ExperimentSpec multibranch_spec(std::uint64_t seed)
    {
        ExperimentSpec spec;
        spec.name = "multibranch";
        spec.system.seed = seed;
        spec.schemes = parse_all({"zf-cthp", "mb4-zf-cthp", "rs-zf-cthp-mmsec", "mb4-rs-zf-cthp-mmsec", "zf-dthp",
                                  "mb4-zf-dthp", "rs-zf-dthp-mmsec", "mb4-rs-zf-dthp-mmsec", "mmse-cthp",
                                  "mb4-mmse-cthp", "rs-mmse-cthp-mmsec", "mb4-rs-mmse-cthp-mmsec"});
        spec.snr_grid_dB = snr_range(0.0, 30.0, 5.0);
        spec.error_models = {ErrorModel::fixed(0.06, ErrorConvention::PerComponent)};
        return spec;
    }

    std::vector<std::string> preset_names()
    {
        return {"table5", "perfect-csit", "scaled-error", "multibranch"};
    }

    ExperimentSpec preset(const std::string &name, std::uint64_t seed)
    {
        if (name == "table5")
            return table5_spec(seed);
        if (name == "perfect-csit")
            return perfect_csit_spec(seed);
        if (name == "scaled-error")
            return scaled_error_spec(seed);
        if (name == "multibranch")
            return multibranch_spec(seed);
        throw ConfigError("unknown preset '" + name + "'");
    }

    const std::vector<std::string> &result_columns()
    {
        static const std::vector<std::string> cols{"scheme",       "snr_dB",      "sigma_e2",    "delta_used",
                                                   "esr_total",    "esr_common",  "esr_private", "ci_halfwidth",
                                                   "n_channels",   "n_errors",    "seed"};
        return cols;
    }

    namespace
    {
        std::string fmt(double v)
        {
            std::ostringstream s;
            s << std::setprecision(10) << v;
            return s.str();
        }
    }

    void write_csv(std::ostream &out, const std::vector<ResultRow> &rows)
    {
        const auto &cols = result_columns();
        for (std::size_t i = 0; i < cols.size(); ++i)
            out << (i ? "," : "") << cols[i];
        out << '\n';
        for (const ResultRow &r : rows)
        {
            out << r.scheme << ',' << fmt(r.snr_dB) << ',' << fmt(r.sigma_e2) << ',' << fmt(r.delta_used) << ','
                << fmt(r.esr_total) << ',' << fmt(r.esr_common) << ',' << fmt(r.esr_private) << ','
                << fmt(r.ci_halfwidth) << ',' << r.n_channels << ',' << r.n_errors << ',' << r.seed << '\n';
        }
    }

    void write_json(std::ostream &out, const ExperimentSpec &spec, const std::vector<ResultRow> &rows)
    {
        nlohmann::ordered_json doc;
        doc["schema_version"] = 1;
        doc["experiment"] = spec.name;
        doc["seed"] = spec.system.seed;
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const ResultRow &r : rows)
        {
            nlohmann::ordered_json j;
            j["scheme"] = r.scheme;
            j["snr_dB"] = r.snr_dB;
            j["sigma_e2"] = r.sigma_e2;
            j["delta_used"] = r.delta_used;
            j["esr_total"] = r.esr_total;
            j["esr_common"] = r.esr_common;
            j["esr_private"] = r.esr_private;
            j["ci_halfwidth"] = r.ci_halfwidth;
            j["n_channels"] = r.n_channels;
            j["n_errors"] = r.n_errors;
            j["seed"] = r.seed;
            j["resampled"] = r.resampled;
            arr.push_back(std::move(j));
        }
        doc["rows"] = std::move(arr);
        out << doc.dump(2) << '\n';
    }

    void write_rows(std::ostream &out, const ExperimentSpec &spec, const std::vector<ResultRow> &rows, OutputFormat f)
    {
        if (f == OutputFormat::Json)
            write_json(out, spec, rows);
        else
            write_csv(out, rows);
    }
}
