#include "rsthp/rsthp_c.h"

#include "rsthp/errors.hpp"
#include "rsthp/flops.hpp"
#include "rsthp/harness.hpp"

#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>

struct rsthp_experiment
{
    rsthp::ExperimentSpec spec;
};

struct rsthp_results
{
    rsthp::ExperimentSpec spec;
    std::vector<rsthp::ResultRow> rows;
};

namespace
{
    thread_local std::string last_error;

    template <typename Fn>
    rsthp_status guarded(Fn &&fn)
    {
        try
        {
            fn();
            last_error.clear();
            return RSTHP_OK;
        }
        catch (const rsthp::ConfigError &e)
        {
            last_error = e.what();
            return RSTHP_ERR_CONFIG;
        }
        catch (const rsthp::NumericError &e)
        {
            last_error = e.what();
            return RSTHP_ERR_NUMERIC;
        }
        catch (const rsthp::DomainError &e)
        {
            last_error = e.what();
            return RSTHP_ERR_DOMAIN;
        }
        catch (const std::exception &e)
        {
            last_error = e.what();
            return RSTHP_ERR_INTERNAL;
        }
        catch (...)
        {
            last_error = "unknown failure";
            return RSTHP_ERR_INTERNAL;
        }
    }

    rsthp_status argument_error(const char *what)
    {
        last_error = what;
        return RSTHP_ERR_ARGUMENT;
    }

    rsthp::ErrorConvention convention(rsthp_error_convention c)
    {
        return c == RSTHP_ERROR_PER_COMPONENT ? rsthp::ErrorConvention::PerComponent : rsthp::ErrorConvention::PerEntry;
    }
}

extern "C" {

const char *rsthp_last_error(void)
{
    return last_error.c_str();
}

const char *rsthp_version(void)
{
    return "0.1.0";
}

rsthp_status rsthp_experiment_new(rsthp_experiment **out)
{
    if (!out)
        return argument_error("null output handle");
    return guarded([&] { *out = new rsthp_experiment{}; });
}

rsthp_status rsthp_experiment_load(const char *path, rsthp_experiment **out)
{
    if (!path || !out)
        return argument_error("null argument");
    return guarded([&] { *out = new rsthp_experiment{rsthp::load_config(path)}; });
}

rsthp_status rsthp_experiment_preset(const char *name, uint64_t seed, rsthp_experiment **out)
{
    if (!name || !out)
        return argument_error("null argument");
    return guarded([&] { *out = new rsthp_experiment{rsthp::preset(name, seed)}; });
}

void rsthp_experiment_free(rsthp_experiment *exp)
{
    delete exp;
}

rsthp_status rsthp_experiment_set_seed(rsthp_experiment *exp, uint64_t seed)
{
    if (!exp)
        return argument_error("null experiment");
    exp->spec.system.seed = seed;
    last_error.clear();
    return RSTHP_OK;
}

rsthp_status rsthp_experiment_set_monte_carlo(rsthp_experiment *exp, int channels, int errors)
{
    if (!exp)
        return argument_error("null experiment");
    return guarded([&] {
        if (channels < 1 || errors < 1)
            throw rsthp::ConfigError("Monte-Carlo channel and error counts must be positive");
        exp->spec.system.mc_channels = channels;
        exp->spec.system.mc_errors = errors;
    });
}

rsthp_status rsthp_experiment_set_schemes(rsthp_experiment *exp, const char *ids)
{
    if (!exp || !ids)
        return argument_error("null argument");
    return guarded([&] {
        std::vector<rsthp::Scheme> schemes;
        std::stringstream ss(ids);
        std::string id;
        while (std::getline(ss, id, ','))
            if (!id.empty())
                schemes.push_back(rsthp::Scheme::parse(id));
        if (schemes.empty())
            throw rsthp::ConfigError("no scheme identifiers given");
        exp->spec.schemes = std::move(schemes);
    });
}

rsthp_status rsthp_experiment_set_snr_grid(rsthp_experiment *exp, const double *snr_dB, size_t count)
{
    if (!exp || (!snr_dB && count))
        return argument_error("null argument");
    return guarded([&] {
        if (count == 0)
            throw rsthp::ConfigError("empty SNR grid");
        exp->spec.snr_grid_dB.assign(snr_dB, snr_dB + count);
    });
}

rsthp_status rsthp_experiment_set_error_fixed(rsthp_experiment *exp, const double *sigma_e2, size_t count,
                                              rsthp_error_convention conv)
{
    if (!exp || (!sigma_e2 && count))
        return argument_error("null argument");
    return guarded([&] {
        if (count == 0)
            throw rsthp::ConfigError("no error variances given");
        std::vector<rsthp::ErrorModel> models;
        for (size_t i = 0; i < count; ++i)
        {
            models.push_back(rsthp::ErrorModel::fixed(sigma_e2[i], convention(conv)));
            models.back().validate();
        }
        exp->spec.error_models = std::move(models);
    });
}

rsthp_status rsthp_experiment_set_error_scaled(rsthp_experiment *exp, double scale, double alpha,
                                               rsthp_error_convention conv)
{
    if (!exp)
        return argument_error("null experiment");
    return guarded([&] {
        auto m = rsthp::ErrorModel::scaled(scale, alpha, convention(conv));
        m.validate();
        exp->spec.error_models = {m};
    });
}

rsthp_status rsthp_experiment_set_delta_fixed(rsthp_experiment *exp, double delta)
{
    if (!exp)
        return argument_error("null experiment");
    return guarded([&] {
        if (!(delta >= 0.0 && delta <= 1.0))
            throw rsthp::ConfigError("delta must lie in [0, 1]");
        exp->spec.delta_policy.mode = rsthp::DeltaPolicy::Mode::Fixed;
        exp->spec.delta_policy.value = delta;
    });
}

rsthp_status rsthp_experiment_set_delta_search(rsthp_experiment *exp, int grid_points, int pilot_channels,
                                               int pilot_errors)
{
    if (!exp)
        return argument_error("null experiment");
    return guarded([&] {
        rsthp::delta_grid(grid_points);
        if (pilot_channels < 1 || pilot_errors < 1)
            throw rsthp::ConfigError("pilot ensemble sizes must be positive");
        auto &p = exp->spec.delta_policy;
        p.mode = rsthp::DeltaPolicy::Mode::Search;
        p.search.grid_points = grid_points;
        p.search.pilot_channels = pilot_channels;
        p.search.pilot_errors = pilot_errors;
    });
}

rsthp_status rsthp_experiment_output(const rsthp_experiment *exp, const char **path, rsthp_format *format)
{
    if (!exp || !path || !format)
        return argument_error("null argument");
    *path = exp->spec.output_path.c_str();
    *format = exp->spec.format == rsthp::OutputFormat::Json ? RSTHP_FORMAT_JSON : RSTHP_FORMAT_CSV;
    last_error.clear();
    return RSTHP_OK;
}

rsthp_status rsthp_run(const rsthp_experiment *exp, int threads, rsthp_results **out)
{
    if (!exp || !out)
        return argument_error("null argument");
    return guarded([&] {
        auto rows = rsthp::run_experiment(exp->spec, threads);
        *out = new rsthp_results{exp->spec, std::move(rows)};
    });
}

rsthp_status rsthp_sweep_delta(const rsthp_experiment *exp, int points, int threads, rsthp_results **out)
{
    if (!exp || !out)
        return argument_error("null argument");
    return guarded([&] {
        const auto &spec = exp->spec;
        spec.validate();
        const auto grid = rsthp::delta_grid(points);
        std::vector<rsthp::ResultRow> rows;
        for (const auto &em : spec.error_models)
            for (const auto &scheme : spec.schemes)
                for (double snr : spec.snr_grid_dB)
                {
                    rsthp::SystemConfig sys = spec.system;
                    sys.Etr = rsthp::snr_to_etr(snr);
                    for (const auto &pt : rsthp::sweep_delta(sys, scheme, em, grid, threads))
                    {
                        rsthp::ResultRow row;
                        row.scheme = scheme.id();
                        row.snr_dB = snr;
                        row.sigma_e2 = em.nominal_variance(sys.Etr);
                        row.delta_used = pt.delta;
                        row.esr_total = pt.report.esr_total;
                        row.esr_common = pt.report.esr_common;
                        row.esr_private = pt.report.esr_private;
                        row.ci_halfwidth = pt.report.ci_halfwidth;
                        row.n_channels = pt.report.n_channels;
                        row.n_errors = pt.report.n_errors;
                        row.seed = sys.seed;
                        rows.push_back(row);
                    }
                }
        *out = new rsthp_results{spec, std::move(rows)};
    });
}

size_t rsthp_results_count(const rsthp_results *res)
{
    return res ? res->rows.size() : 0;
}

rsthp_status rsthp_results_row(const rsthp_results *res, size_t index, rsthp_row *out)
{
    if (!res || !out)
        return argument_error("null argument");
    if (index >= res->rows.size())
        return argument_error("row index out of range");
    const auto &r = res->rows[index];
    std::memset(out, 0, sizeof(*out));
    std::strncpy(out->scheme, r.scheme.c_str(), sizeof(out->scheme) - 1);
    out->snr_dB = r.snr_dB;
    out->sigma_e2 = r.sigma_e2;
    out->delta_used = r.delta_used;
    out->esr_total = r.esr_total;
    out->esr_common = r.esr_common;
    out->esr_private = r.esr_private;
    out->ci_halfwidth = r.ci_halfwidth;
    out->n_channels = r.n_channels;
    out->n_errors = r.n_errors;
    out->seed = r.seed;
    last_error.clear();
    return RSTHP_OK;
}

rsthp_status rsthp_results_write(const rsthp_results *res, const char *path, rsthp_format format)
{
    if (!res || !path)
        return argument_error("null argument");
    const auto f = format == RSTHP_FORMAT_JSON ? rsthp::OutputFormat::Json : rsthp::OutputFormat::Csv;
    if (std::strcmp(path, "-") == 0)
        return guarded([&] { rsthp::write_rows(std::cout, res->spec, res->rows, f); });
    std::ofstream file(path, std::ios::binary);
    if (!file)
    {
        last_error = std::string("cannot open '") + path + "' for writing";
        return RSTHP_ERR_IO;
    }
    const rsthp_status st = guarded([&] { rsthp::write_rows(file, res->spec, res->rows, f); });
    if (st == RSTHP_OK && !file.flush())
    {
        last_error = std::string("write to '") + path + "' failed";
        return RSTHP_ERR_IO;
    }
    return st;
}

void rsthp_results_free(rsthp_results *res)
{
    delete res;
}

rsthp_status rsthp_flops(const char *scheme, int64_t n, int64_t K, int64_t *num, int64_t *den)
{
    if (!scheme || !num || !den)
        return argument_error("null argument");
    return guarded([&] {
        const rsthp::Rational r = rsthp::flops_scheme({rsthp::parse_flops_scheme(scheme), n, K});
        *num = r.num();
        *den = r.den();
    });
}

const char *rsthp_flops_schemes(void)
{
    static const std::string list = [] {
        std::string s;
        for (auto f : rsthp::all_flops_schemes())
            s += (s.empty() ? "" : ",") + rsthp::flops_scheme_id(f);
        return s;
    }();
    return list.c_str();
}

} // extern "C"
