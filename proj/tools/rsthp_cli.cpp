#include "rsthp/rsthp_c.h"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

namespace
{
    int exit_code(rsthp_status st)
    {
        switch (st)
        {
        case RSTHP_OK:
            return 0;
        case RSTHP_ERR_CONFIG:
        case RSTHP_ERR_ARGUMENT:
            return 2;
        case RSTHP_ERR_NUMERIC:
            return 3;
        default:
            return 1;
        }
    }

    // Returns true when the call succeeded; otherwise prints the library message.
    bool ok(rsthp_status st, int &code)
    {
        if (st == RSTHP_OK)
            return true;
        std::cerr << "rsthp: " << rsthp_last_error() << '\n';
        code = exit_code(st);
        return false;
    }

    int default_threads()
    {
        if (const char *env = std::getenv("RSTHP_THREADS"))
        {
            const int n = std::atoi(env);
            if (n > 0)
                return n;
        }
        return 1;
    }

    rsthp_format parse_format(const std::string &s)
    {
        return s == "json" ? RSTHP_FORMAT_JSON : RSTHP_FORMAT_CSV;
    }

    struct McOverrides
    {
        int channels = 0;
        int errors = 0;
    };

    void add_mc_options(CLI::App *cmd, McOverrides &mc)
    {
        cmd->add_option("--channels", mc.channels, "Channel estimates per point")->check(CLI::PositiveNumber);
        cmd->add_option("--errors", mc.errors, "Error draws per estimate")->check(CLI::PositiveNumber);
    }

    rsthp_status apply_mc(rsthp_experiment *exp, const McOverrides &mc, int channels_default, int errors_default)
    {
        if (mc.channels == 0 && mc.errors == 0)
            return RSTHP_OK;
        return rsthp_experiment_set_monte_carlo(exp, mc.channels ? mc.channels : channels_default,
                                                mc.errors ? mc.errors : errors_default);
    }

    int run_and_write(rsthp_experiment *exp, bool sweep, int points, int threads, const std::string &out,
                      rsthp_format format)
    {
        int code = 0;
        rsthp_results *res = nullptr;
        const rsthp_status st = sweep ? rsthp_sweep_delta(exp, points, threads, &res) : rsthp_run(exp, threads, &res);
        if (ok(st, code))
            ok(rsthp_results_write(res, out.c_str(), format), code);
        rsthp_results_free(res);
        return code;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Rate-splitting THP downlink simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(rsthp_version()));

    int threads = default_threads();
    std::string format_name = "csv";
    std::string out;
    McOverrides mc;

    // run
    auto *run = app.add_subcommand("run", "Run an experiment from a config file or preset");
    std::string config_path, preset_name;
    std::uint64_t seed = 1;
    auto *config_opt = run->add_option("--config", config_path, "INI experiment file")->check(CLI::ExistingFile);
    run->add_option("--preset", preset_name, "Built-in experiment: table5, perfect-csit, scaled-error, multibranch")
        ->excludes(config_opt);
    auto *seed_opt = run->add_option("--seed", seed, "Override the experiment seed");
    run->add_option("--out", out, "Output path, '-' for stdout (default: config value or stdout)");
    auto *format_opt = run->add_option("--format", format_name, "csv or json")
                           ->check(CLI::IsMember({"csv", "json"}));
    run->add_option("--parallel", threads, "Worker threads")->check(CLI::PositiveNumber);
    add_mc_options(run, mc);

    // flops
    auto *flops = app.add_subcommand("flops", "Closed-form FLOPS counts");
    std::int64_t n = 12, K = 6, n_max = 0;
    std::string flops_scheme;
    flops->add_option("--n", n, "Dimension Nt = Nr = n");
    flops->add_option("--k", K, "Number of users");
    flops->add_option("--scheme", flops_scheme, std::string("One of: ") + rsthp_flops_schemes());
    flops->add_option("--n-max", n_max, "Emit a CSV table for n = K..n-max instead of a single value");

    // sweep-delta
    auto *sweep = app.add_subcommand("sweep-delta", "ESR against the common power fraction");
    std::string sweep_scheme = "rs-zf-dthp-mmsec";
    double snr = 20.0, sigma_e2 = 0.05;
    int points = 21;
    std::string conv_name = "per-component";
    sweep->add_option("--scheme", sweep_scheme, "Rate-splitting scheme identifier");
    sweep->add_option("--snr", snr, "SNR in dB");
    sweep->add_option("--sigma-e2", sigma_e2, "Error variance");
    sweep->add_option("--convention", conv_name, "per-entry or per-component")
        ->check(CLI::IsMember({"per-entry", "per-component"}));
    sweep->add_option("--points", points, "Grid points on [0, 1]")->check(CLI::Range(2, 1001));
    sweep->add_option("--seed", seed, "Seed");
    sweep->add_option("--out", out, "Output path, '-' for stdout");
    sweep->add_option("--format", format_name, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sweep->add_option("--parallel", threads, "Worker threads")->check(CLI::PositiveNumber);
    add_mc_options(sweep, mc);

    // table5
    auto *table5 = app.add_subcommand("table5", "ESR at 20 dB for six ZF-based schemes and three error levels");
    table5->add_option("--seed", seed, "Seed");
    table5->add_option("--out", out, "Output path, '-' for stdout");
    table5->add_option("--format", format_name, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    table5->add_option("--parallel", threads, "Worker threads")->check(CLI::PositiveNumber);
    add_mc_options(table5, mc);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    int code = 0;
    if (*flops)
    {
        if (n_max > 0)
        {
            std::cout << "n";
            std::string ids = rsthp_flops_schemes();
            std::vector<std::string> names;
            for (std::size_t pos = 0; pos <= ids.size();)
            {
                const auto next = ids.find(',', pos);
                names.push_back(ids.substr(pos, next - pos));
                if (next == std::string::npos)
                    break;
                pos = next + 1;
            }
            for (const auto &s : names)
                std::cout << ',' << s;
            std::cout << '\n';
            for (std::int64_t m = std::max<std::int64_t>(K, 2); m <= n_max; ++m)
            {
                std::cout << m;
                for (const auto &s : names)
                {
                    std::int64_t num = 0, den = 1;
                    if (!ok(rsthp_flops(s.c_str(), m, K, &num, &den), code))
                        return code;
                    std::cout << ',' << static_cast<double>(num) / static_cast<double>(den);
                }
                std::cout << '\n';
            }
            return 0;
        }
        if (flops_scheme.empty())
        {
            std::cerr << "rsthp: flops needs --scheme or --n-max\n";
            return 2;
        }
        std::int64_t num = 0, den = 1;
        if (!ok(rsthp_flops(flops_scheme.c_str(), n, K, &num, &den), code))
            return code;
        if (den == 1)
            std::cout << num << '\n';
        else
            std::cout << num << '/' << den << " (" << static_cast<double>(num) / static_cast<double>(den) << ")\n";
        return 0;
    }

    rsthp_experiment *exp = nullptr;
    if (*run)
    {
        if (!config_path.empty())
        {
            if (!ok(rsthp_experiment_load(config_path.c_str(), &exp), code))
                return code;
        }
        else if (!preset_name.empty())
        {
            if (!ok(rsthp_experiment_preset(preset_name.c_str(), seed, &exp), code))
                return code;
        }
        else
        {
            std::cerr << "rsthp: run needs --config or --preset\n";
            return 2;
        }
        const char *cfg_out = "";
        rsthp_format cfg_format = RSTHP_FORMAT_CSV;
        rsthp_experiment_output(exp, &cfg_out, &cfg_format);
        if (out.empty())
            out = *cfg_out ? cfg_out : "-";
        const rsthp_format format = *format_opt ? parse_format(format_name) : cfg_format;
        if ((*seed_opt && !ok(rsthp_experiment_set_seed(exp, seed), code)) || !ok(apply_mc(exp, mc, 100, 100), code))
        {
            rsthp_experiment_free(exp);
            return code;
        }
        code = run_and_write(exp, false, 0, threads, out, format);
    }
    else if (*sweep)
    {
        const rsthp_error_convention conv =
            conv_name == "per-entry" ? RSTHP_ERROR_PER_ENTRY : RSTHP_ERROR_PER_COMPONENT;
        const bool configured = ok(rsthp_experiment_new(&exp), code) &&
                                ok(rsthp_experiment_set_seed(exp, seed), code) &&
                                ok(rsthp_experiment_set_schemes(exp, sweep_scheme.c_str()), code) &&
                                ok(rsthp_experiment_set_snr_grid(exp, &snr, 1), code) &&
                                ok(rsthp_experiment_set_error_fixed(exp, &sigma_e2, 1, conv), code) &&
                                ok(apply_mc(exp, mc, 100, 100), code);
        if (configured)
            code = run_and_write(exp, true, points, threads, out.empty() ? "-" : out, parse_format(format_name));
    }
    else if (*table5)
    {
        if (ok(rsthp_experiment_preset("table5", seed, &exp), code) && ok(apply_mc(exp, mc, 100, 100), code))
            code = run_and_write(exp, false, 0, threads, out.empty() ? "-" : out, parse_format(format_name));
    }
    rsthp_experiment_free(exp);
    return code;
}
