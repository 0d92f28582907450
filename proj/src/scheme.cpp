#include "rsthp/scheme.hpp"
#include "rsthp/errors.hpp"

#include <sstream>
#include <vector>

namespace rsthp
{
    namespace
    {
        std::vector<std::string> split(const std::string &s)
        {
            std::vector<std::string> parts;
            std::stringstream ss(s);
            std::string item;
            while (std::getline(ss, item, '-'))
                parts.push_back(item);
            return parts;
        }
    }

    std::string Scheme::id() const
    {
        std::string out;
        if (branches > 1)
            out += "mb" + std::to_string(branches) + "-";
        if (rate_splitting)
            out += "rs-";
        switch (precoder.kind)
        {
        case PrecoderKind::LinearZF:
            out += "zf";
            break;
        case PrecoderKind::ZfThp:
            out += precoder.structure == ThpStructure::Centralized ? "zf-cthp" : "zf-dthp";
            break;
        case PrecoderKind::MmseThp:
            out += precoder.structure == ThpStructure::Centralized ? "mmse-cthp" : "mmse-dthp";
            break;
        }
        if (rate_splitting)
        {
            switch (combiner)
            {
            case CombinerKind::FirstAntenna:
                break;
            case CombinerKind::MinMax:
                out += "-minmax";
                break;
            case CombinerKind::MRC:
                out += "-mrc";
                break;
            case CombinerKind::MMSEc:
                out += "-mmsec";
                break;
            }
        }
        return out;
    }

    void Scheme::validate() const
    {
        if (branches < 1)
            throw ConfigError("scheme " + id() + ": branch count must be >= 1");
        if (branches > 1 && !precoder.nonlinear())
            throw ConfigError("scheme " + id() + ": multi-branch ordering requires a THP precoder");
        if (!rate_splitting && combiner != CombinerKind::FirstAntenna)
            throw ConfigError("scheme: a common-stream combiner requires rate splitting");
    }

    Scheme Scheme::parse(const std::string &text)
    {
        auto parts = split(text);
        std::size_t i = 0;
        Scheme s;
        auto fail = [&text]() -> Scheme
        { throw ConfigError("unknown scheme identifier '" + text + "'"); };

        if (i < parts.size() && parts[i].size() > 2 && parts[i].rfind("mb", 0) == 0)
        {
            try
            {
                std::size_t used = 0;
                s.branches = std::stoi(parts[i].substr(2), &used);
                if (used != parts[i].size() - 2)
                    return fail();
            }
            catch (const std::logic_error &)
            {
                return fail();
            }
            ++i;
        }
        if (i < parts.size() && parts[i] == "rs")
        {
            s.rate_splitting = true;
            ++i;
        }
        if (i >= parts.size())
            return fail();
        if (parts[i] == "zf")
        {
            ++i;
            s.precoder.kind = PrecoderKind::LinearZF;
            if (i < parts.size() && (parts[i] == "cthp" || parts[i] == "dthp"))
            {
                s.precoder.kind = PrecoderKind::ZfThp;
                s.precoder.structure = parts[i] == "cthp" ? ThpStructure::Centralized : ThpStructure::Decentralized;
                ++i;
            }
        }
        else if (parts[i] == "mmse")
        {
            ++i;
            if (i >= parts.size() || (parts[i] != "cthp" && parts[i] != "dthp"))
                return fail();
            s.precoder.kind = PrecoderKind::MmseThp;
            s.precoder.structure = parts[i] == "cthp" ? ThpStructure::Centralized : ThpStructure::Decentralized;
            ++i;
        }
        else
            return fail();

        if (i < parts.size())
        {
            const std::string &c = parts[i];
            if (c == "minmax")
                s.combiner = CombinerKind::MinMax;
            else if (c == "mrc")
                s.combiner = CombinerKind::MRC;
            else if (c == "mmsec")
                s.combiner = CombinerKind::MMSEc;
            else
                return fail();
            ++i;
        }
        if (i != parts.size())
            return fail();
        s.validate();
        return s;
    }
}
