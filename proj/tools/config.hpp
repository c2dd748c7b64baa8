#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace flqcli {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Flat key=value experiment config; repeated keys accumulate into lists,
/// '#' starts a comment. Command-line flags override file values.
class Config {
public:
    static Config load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open config '" + path + "'");
        Config cfg;
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const std::string trimmed = trim(line);
            if (trimmed.empty()) continue;
            const auto eq = trimmed.find('=');
            if (eq == std::string::npos)
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": expected key = value");
            const std::string key = trim(trimmed.substr(0, eq));
            const std::string value = trim(trimmed.substr(eq + 1));
            if (key.empty() || value.empty())
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": empty key or value");
            cfg.values_[key].push_back(value);
        }
        return cfg;
    }

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    const std::vector<std::string>& list(const std::string& key) const {
        static const std::vector<std::string> empty;
        const auto it = values_.find(key);
        return it == values_.end() ? empty : it->second;
    }

    std::string one(const std::string& key, const std::string& fallback) const {
        const auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        if (it->second.size() != 1)
            throw ConfigError("config key '" + key + "' given " +
                              std::to_string(it->second.size()) + " times, expected once");
        return it->second.front();
    }

    uint64_t one_u64(const std::string& key, uint64_t fallback) const {
        const std::string v = one(key, "");
        if (v.empty()) return fallback;
        try {
            return std::stoull(v);
        } catch (const std::logic_error&) {
            throw ConfigError("config key '" + key + "' is not an integer: '" + v + "'");
        }
    }

    double one_double(const std::string& key, double fallback) const {
        const std::string v = one(key, "");
        if (v.empty()) return fallback;
        try {
            return std::stod(v);
        } catch (const std::logic_error&) {
            throw ConfigError("config key '" + key + "' is not a number: '" + v + "'");
        }
    }

    std::vector<uint64_t> list_u64(const std::string& key) const {
        std::vector<uint64_t> out;
        for (const auto& v : list(key)) {
            try {
                out.push_back(std::stoull(v));
            } catch (const std::logic_error&) {
                throw ConfigError("config key '" + key + "' is not an integer: '" + v + "'");
            }
        }
        return out;
    }

private:
    static std::string trim(const std::string& s) {
        size_t b = 0, e = s.size();
        while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
        while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
        return s.substr(b, e - b);
    }

    std::map<std::string, std::vector<std::string>> values_;
};

/// Minimal manifest.csv view: the columns the runner needs.
struct ManifestRow {
    std::string id;
    std::string file;
    std::string status;
};

inline std::vector<ManifestRow> load_manifest_rows(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open manifest '" + path + "'");
    std::vector<ManifestRow> rows;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (header) {
            header = false;
            continue;
        }
        if (line.empty()) continue;
        std::vector<std::string> cols;
        std::istringstream ls(line);
        std::string field;
        while (std::getline(ls, field, ',')) cols.push_back(field);
        if (cols.size() < 11) throw ConfigError("manifest row with too few columns");
        rows.push_back({cols[0], cols[1], cols[10]});
    }
    return rows;
}

}  // namespace flqcli
