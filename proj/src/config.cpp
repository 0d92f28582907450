#include "rsthp/errors.hpp"
#include "rsthp/harness.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace rsthp
{
    namespace
    {
        namespace pt = boost::property_tree;

        std::string trim(std::string s)
        {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        }

        std::vector<std::string> split_list(const std::string &s)
        {
            std::vector<std::string> out;
            std::stringstream ss(s);
            std::string item;
            while (std::getline(ss, item, ','))
            {
                item = trim(item);
                if (!item.empty())
                    out.push_back(item);
            }
            return out;
        }

        template <typename T>
        T number(const std::string &key, const std::string &text)
        {
            std::istringstream in(trim(text));
            T v{};
            in >> v;
            if (in.fail() || !in.eof())
                throw ConfigError("invalid number for '" + key + "': '" + text + "'");
            return v;
        }

        template <typename T>
        std::vector<T> number_list(const std::string &key, const std::string &text)
        {
            std::vector<T> out;
            for (const auto &item : split_list(text))
                out.push_back(number<T>(key, item));
            if (out.empty())
                throw ConfigError("empty list for '" + key + "'");
            return out;
        }

        template <typename T>
        void read_number(const pt::ptree &tree, const std::string &key, T &dst)
        {
            if (auto v = tree.get_optional<std::string>(key))
                dst = number<T>(key, *v);
        }

        Modulation parse_modulation(const std::string &s)
        {
            if (s == "gaussian")
                return Modulation::Gaussian;
            if (s == "qpsk")
                return Modulation::QPSK;
            if (s == "16qam")
                return Modulation::QAM16;
            throw ConfigError("unknown modulation '" + s + "'");
        }

        ErrorConvention parse_convention(const std::string &s)
        {
            if (s == "per-entry")
                return ErrorConvention::PerEntry;
            if (s == "per-component")
                return ErrorConvention::PerComponent;
            throw ConfigError("unknown error convention '" + s + "'");
        }

        const std::vector<std::string> &known_keys()
        {
            static const std::vector<std::string> keys{
                "experiment.name",      "system.nt",          "system.nk",           "system.users",
                "system.antennas",      "system.sigma_n2",    "system.modulation",   "system.channels",
                "system.errors",        "system.seed",        "schemes.ids",         "snr.grid_db",
                "snr.start_db",         "snr.stop_db",        "snr.step_db",         "error.mode",
                "error.sigma_e2",       "error.scale",        "error.alpha",         "error.convention",
                "delta.policy",         "delta.value",        "delta.grid_points",   "delta.pilot_channels",
                "delta.pilot_errors",   "output.path",        "output.format"};
            return keys;
        }
    }

    ExperimentSpec parse_config(std::istream &in)
    {
        pt::ptree tree;
        try
        {
            pt::read_ini(in, tree);
        }
        catch (const pt::ini_parser_error &e)
        {
            throw ConfigError(std::string("config parse error: ") + e.what());
        }

        for (const auto &section : tree)
            for (const auto &entry : section.second)
            {
                const std::string key = section.first + "." + entry.first;
                const auto &keys = known_keys();
                if (std::find(keys.begin(), keys.end(), key) == keys.end())
                    throw ConfigError("unknown config key '" + key + "'");
            }

        ExperimentSpec spec;
        spec.name = tree.get<std::string>("experiment.name", spec.name);

        SystemConfig &sys = spec.system;
        read_number(tree, "system.nt", sys.Nt);
        if (auto nk = tree.get_optional<std::string>("system.nk"))
        {
            sys.Nk = number_list<int>("system.nk", *nk);
        }
        else if (tree.get_optional<std::string>("system.users") || tree.get_optional<std::string>("system.antennas"))
        {
            int users = sys.K();
            int antennas = sys.Nk.front();
            read_number(tree, "system.users", users);
            read_number(tree, "system.antennas", antennas);
            if (users < 1)
                throw ConfigError("system.users must be positive");
            sys.Nk.assign(static_cast<std::size_t>(users), antennas);
        }
        sys.M = sys.Nr();
        read_number(tree, "system.sigma_n2", sys.sigma_n2);
        if (auto m = tree.get_optional<std::string>("system.modulation"))
            sys.modulation = parse_modulation(trim(*m));
        read_number(tree, "system.channels", sys.mc_channels);
        read_number(tree, "system.errors", sys.mc_errors);
        read_number(tree, "system.seed", sys.seed);

        const auto ids = split_list(tree.get<std::string>("schemes.ids", ""));
        for (const auto &id : ids)
            spec.schemes.push_back(Scheme::parse(id));

        if (auto grid = tree.get_optional<std::string>("snr.grid_db"))
        {
            spec.snr_grid_dB = number_list<double>("snr.grid_db", *grid);
        }
        else if (tree.get_optional<std::string>("snr.start_db"))
        {
            double start = 0, stop = 0, step = 0;
            read_number(tree, "snr.start_db", start);
            stop = start;
            read_number(tree, "snr.stop_db", stop);
            step = 5.0;
            read_number(tree, "snr.step_db", step);
            if (!(step > 0.0) || stop < start)
                throw ConfigError("snr range needs step > 0 and stop >= start");
            for (double s = start; s <= stop + 1e-9; s += step)
                spec.snr_grid_dB.push_back(s);
        }

        const std::string mode = trim(tree.get<std::string>("error.mode", "fixed"));
        const ErrorConvention conv = parse_convention(trim(tree.get<std::string>("error.convention", "per-entry")));
        if (mode == "fixed")
        {
            for (double v : number_list<double>("error.sigma_e2", tree.get<std::string>("error.sigma_e2", "0")))
                spec.error_models.push_back(ErrorModel::fixed(v, conv));
        }
        else if (mode == "scaled")
        {
            double scale = 0.95, alpha = 0.6;
            read_number(tree, "error.scale", scale);
            read_number(tree, "error.alpha", alpha);
            spec.error_models.push_back(ErrorModel::scaled(scale, alpha, conv));
        }
        else
        {
            throw ConfigError("error.mode must be 'fixed' or 'scaled'");
        }

        const std::string policy = trim(tree.get<std::string>("delta.policy", "search"));
        if (policy == "fixed")
        {
            spec.delta_policy.mode = DeltaPolicy::Mode::Fixed;
            read_number(tree, "delta.value", spec.delta_policy.value);
        }
        else if (policy == "search")
        {
            spec.delta_policy.mode = DeltaPolicy::Mode::Search;
            read_number(tree, "delta.grid_points", spec.delta_policy.search.grid_points);
            read_number(tree, "delta.pilot_channels", spec.delta_policy.search.pilot_channels);
            read_number(tree, "delta.pilot_errors", spec.delta_policy.search.pilot_errors);
        }
        else
        {
            throw ConfigError("delta.policy must be 'fixed' or 'search'");
        }

        spec.output_path = trim(tree.get<std::string>("output.path", ""));
        const std::string format = trim(tree.get<std::string>("output.format", "csv"));
        if (format == "csv")
            spec.format = OutputFormat::Csv;
        else if (format == "json")
            spec.format = OutputFormat::Json;
        else
            throw ConfigError("output.format must be 'csv' or 'json'");

        spec.validate();
        return spec;
    }

    ExperimentSpec load_config(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw ConfigError("cannot open config file '" + path + "'");
        return parse_config(in);
    }
}
