// Run configuration files (YAML).
//
// The document is a mapping of sections (domain, grid, partition, time,
// stochastic, monitor, run, output) to mappings of keys. Unknown sections or
// keys are rejected; missing keys take their defaults and produce a notice.
#pragma once

#include "stochmesh/driver.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace stochmesh {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class OutputFormat { Csv, Svg };

struct OutputConfig {
    std::string directory = "out";
    bool csv = true;
    bool svg = true;
};

struct CliConfig {
    RunConfig run;
    OutputConfig output;
    std::vector<std::string> notices;  // defaults applied for missing keys
};

namespace detail {

inline std::string where(const YAML::Node& n) {
    const auto m = n.Mark();
    return m.is_null() ? std::string{} : "line " + std::to_string(m.line + 1) + ": ";
}

inline std::optional<YAML::Node> lookup(const YAML::Node& map, const std::string& key) {
    if (!map.IsMap()) return std::nullopt;
    for (const auto& kv : map) {
        if (kv.first.Scalar() == key) return kv.second;
    }
    return std::nullopt;
}

class Reader {
public:
    Reader(const YAML::Node& doc, std::vector<std::string>& notices) : doc_(doc), notices_(notices) {
        if (doc_ && !doc_.IsNull() && !doc_.IsMap()) throw ConfigError("config: top level must be a mapping");
    }

    template <class T, class Fn>
    void read(const std::string& section, const std::string& key, T& target, Fn convert) {
        seen_.insert(section + "." + key);
        const auto sec = lookup(doc_, section);
        const auto found = sec ? lookup(*sec, key) : std::nullopt;
        if (!found) {
            notices_.push_back("notice: " + section + "." + key + " not set, using default");
            return;
        }
        const YAML::Node& v = *found;
        try {
            target = convert(v);
        } catch (const ConfigError& e) {
            throw ConfigError(where(v) + section + "." + key + ": " + e.what());
        } catch (const YAML::Exception&) {
            throw ConfigError(where(v) + section + "." + key + ": malformed value");
        }
    }

    void reject_unknown() const {
        if (!doc_.IsMap()) return;
        for (const auto& s : doc_) {
            const auto section = s.first.as<std::string>();
            if (!s.second.IsMap()) throw ConfigError(where(s.first) + "section '" + section + "' must be a mapping");
            for (const auto& k : s.second) {
                const auto key = k.first.as<std::string>();
                if (!seen_.count(section + "." + key)) {
                    throw ConfigError(where(k.first) + "unknown key '" + section + "." + key + "'");
                }
            }
        }
    }

private:
    const YAML::Node doc_;
    std::vector<std::string>& notices_;
    std::set<std::string> seen_;
};

inline void need_scalar(const YAML::Node& v) {
    if (!v.IsScalar()) throw ConfigError("expected a scalar");
}

inline double as_number(const YAML::Node& v) {
    need_scalar(v);
    double d = 0.0;
    if (!YAML::convert<double>::decode(v, d)) throw ConfigError("expected a number");
    return d;
}

inline std::string as_string(const YAML::Node& v) {
    need_scalar(v);
    return v.Scalar();
}

inline bool as_bool(const YAML::Node& v) {
    need_scalar(v);
    bool b = false;
    if (!YAML::convert<bool>::decode(v, b)) throw ConfigError("expected true or false");
    return b;
}

template <class Int>
Int as_count(const YAML::Node& v) {
    const double d = as_number(v);
    if (d < 0.0 || d != std::floor(d) || d > 9.0e15) throw ConfigError("expected a non-negative integer");
    return static_cast<Int>(d);
}

template <class T, class Fn>
std::vector<T> as_list(const YAML::Node& v, Fn item) {
    if (!v.IsSequence()) throw ConfigError("expected a list");
    std::vector<T> out;
    for (const auto& e : v) out.push_back(item(e));
    return out;
}

}  // namespace detail

/// Builds a validated configuration from a parsed document. Errors name the key.
inline CliConfig config_from_yaml(const YAML::Node& doc) {
    CliConfig c;
    RunConfig& r = c.run;
    detail::Reader rd(doc, c.notices);
    using namespace detail;

    rd.read("domain", "x_l", r.domain.x_l, as_number);
    rd.read("domain", "x_r", r.domain.x_r, as_number);
    rd.read("domain", "y_l", r.domain.y_l, as_number);
    rd.read("domain", "y_u", r.domain.y_u, as_number);
    rd.read("grid", "nx", r.nx, as_count<std::size_t>);
    rd.read("grid", "ny", r.ny, as_count<std::size_t>);
    rd.read("partition", "m", r.sub_x, as_count<std::size_t>);
    rd.read("partition", "n", r.sub_y, as_count<std::size_t>);
    rd.read("time", "dt", r.dt, as_number);
    rd.read("time", "t_end", r.t_end, as_number);
    rd.read("time", "freeze", r.freeze, [](const YAML::Node& v) {
        const std::string s = as_string(v);
        if (s == "start") return FreezeEpoch::Start;
        if (s == "end") return FreezeEpoch::End;
        throw ConfigError("expected start or end");
    });
    rd.read("stochastic", "n_sub", r.n_sub, as_count<int>);
    rd.read("stochastic", "n_paths", r.n_paths, as_count<std::size_t>);
    rd.read("stochastic", "points_per_interface", r.points_per_interface, as_count<std::size_t>);
    rd.read("stochastic", "seed", r.seed, as_count<std::uint64_t>);
    rd.read("stochastic", "shared_paths", r.shared_paths, as_bool);
    rd.read("stochastic", "hermite", r.hermite, [](const YAML::Node& v) {
        const std::string s = as_string(v);
        if (s == "monotone") return HermiteKind::Monotone;
        if (s == "classical") return HermiteKind::Classical;
        throw ConfigError("expected monotone or classical");
    });
    std::string monitor_type = "rotating_ring";
    rd.read("monitor", "type", monitor_type, as_string);
    if (monitor_type != "rotating_ring") throw ConfigError("monitor.type: only rotating_ring is supported");
    rd.read("monitor", "alpha", r.ring.alpha, as_number);
    rd.read("monitor", "beta", r.ring.beta, as_number);
    rd.read("run", "mode", r.mode, [](const YAML::Node& v) {
        const std::string s = as_string(v);
        if (s == "dd") return RunMode::DomainDecomposition;
        if (s == "single") return RunMode::SingleDomain;
        throw ConfigError("expected dd or single");
    });
    rd.read("run", "workers", r.workers, as_count<unsigned>);
    rd.read("output", "directory", c.output.directory, as_string);
    rd.read("output", "snapshot_times", r.output_times,
            [](const YAML::Node& v) { return as_list<double>(v, as_number); });
    std::vector<std::string> formats{"csv", "svg"};
    rd.read("output", "formats", formats, [](const YAML::Node& v) {
        return as_list<std::string>(v, [](const YAML::Node& e) {
            std::string s = as_string(e);
            if (s != "csv" && s != "svg") throw ConfigError("formats are csv and svg");
            return s;
        });
    });
    c.output.csv = std::find(formats.begin(), formats.end(), "csv") != formats.end();
    c.output.svg = std::find(formats.begin(), formats.end(), "svg") != formats.end();
    rd.reject_unknown();

    if (!(r.domain.x_l < r.domain.x_r)) throw ConfigError("domain.x_r: must exceed domain.x_l");
    if (!(r.domain.y_l < r.domain.y_u)) throw ConfigError("domain.y_u: must exceed domain.y_l");
    try {
        r.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return c;
}

inline CliConfig parse_config_text(const std::string& text) {
    try {
        return config_from_yaml(YAML::Load(text));
    } catch (const YAML::ParserException& e) {
        throw ConfigError(e.what());
    }
}

inline CliConfig parse_config(const std::string& path) {
    YAML::Node doc;
    try {
        doc = YAML::LoadFile(path);
    } catch (const YAML::BadFile&) {
        throw ConfigError("cannot read config file '" + path + "'");
    } catch (const YAML::ParserException& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return config_from_yaml(doc);
}

}  // namespace stochmesh
