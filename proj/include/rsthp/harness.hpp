#pragma once

#include "rsthp/allocation.hpp"
#include "rsthp/rates.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace rsthp
{
    struct DeltaPolicy
    {
        enum class Mode
        {
            Fixed,
            Search
        };
        Mode mode = Mode::Search;
        double value = 0.0; // fixed mode
        DeltaSearchOptions search;
    };

    enum class OutputFormat
    {
        Csv,
        Json
    };

    struct ExperimentSpec
    {
        std::string name = "experiment";
        SystemConfig system;
        std::vector<Scheme> schemes;
        std::vector<double> snr_grid_dB;
        // One sweep per error model; fixed models with several variances are
        // expanded into several entries.
        std::vector<ErrorModel> error_models;
        DeltaPolicy delta_policy;
        std::string output_path;
        OutputFormat format = OutputFormat::Csv;

        void validate() const; // ConfigError, raised before any computation
    };

    struct ResultRow
    {
        std::string scheme;
        double snr_dB = 0.0;
        double sigma_e2 = 0.0; // nominal error variance at this SNR
        double delta_used = 0.0;
        double esr_total = 0.0;
        double esr_common = 0.0;
        double esr_private = 0.0;
        double ci_halfwidth = 0.0;
        int n_channels = 0;
        int n_errors = 0;
        std::uint64_t seed = 0;
        int resampled = 0;
    };

    double snr_to_etr(double snr_dB);

    using ProgressFn = std::function<void(const ResultRow &)>;

    // Rows ordered by error model, then scheme, then SNR. Every point uses the
    // same channel and error substreams so comparisons across schemes, SNRs and
    // variances are paired.
    std::vector<ResultRow> run_experiment(const ExperimentSpec &spec, int threads = 1, const ProgressFn &progress = {});

    struct DeltaSweepPoint
    {
        double delta = 0.0;
        RateReport report;
    };
    std::vector<DeltaSweepPoint> sweep_delta(const SystemConfig &system, const Scheme &scheme,
                                             const ErrorModel &error_model, const std::vector<double> &deltas,
                                             int threads = 1);

    // Built-in experiment definitions.
    ExperimentSpec table5_spec(std::uint64_t seed = 1);
    ExperimentSpec perfect_csit_spec(std::uint64_t seed = 1);
    ExperimentSpec scaled_error_spec(std::uint64_t seed = 1);
    ExperimentSpec multibranch_spec(std::uint64_t seed = 1);
    std::vector<std::string> preset_names();
    ExperimentSpec preset(const std::string &name, std::uint64_t seed = 1); // ConfigError on unknown name

    // Parses the INI experiment format documented in docs/config.md.
    ExperimentSpec parse_config(std::istream &in);
    ExperimentSpec load_config(const std::string &path);

    const std::vector<std::string> &result_columns();
    void write_csv(std::ostream &out, const std::vector<ResultRow> &rows);
    void write_json(std::ostream &out, const ExperimentSpec &spec, const std::vector<ResultRow> &rows);
    void write_rows(std::ostream &out, const ExperimentSpec &spec, const std::vector<ResultRow> &rows, OutputFormat f);

    // Substreams shared by every experiment point.
    RngStream evaluation_stream(std::uint64_t seed);
    RngStream pilot_stream(std::uint64_t seed);
}
