#include "flq/records.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "flq/error.hpp"

namespace flq {

using ordered_json = nlohmann::ordered_json;

std::string record_to_json(const SolveRecord& record) {
    ordered_json j;
    j["solver"] = record.solver;
    j["instance_id"] = record.instance_id;
    j["seed"] = record.seed;
    if (record.sweeps) j["sweeps"] = *record.sweeps;
    if (record.rounds) j["rounds"] = *record.rounds;
    j["restarts"] = record.restarts;
    // JSON has no infinity; a record with zero trials carries null.
    if (std::isfinite(record.best_energy))
        j["best_energy"] = record.best_energy;
    else
        j["best_energy"] = nullptr;
    j["success"] = record.success;
    j["work"] = record.work;
    j["model_time_us"] = record.model_time_us;
    return j.dump();
}

SolveRecord record_from_json(const std::string& line) {
    ordered_json j;
    try {
        j = ordered_json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::parse, std::string("malformed record: ") + e.what());
    }
    SolveRecord r;
    try {
        r.solver = j.at("solver").get<std::string>();
        r.instance_id = j.at("instance_id").get<std::string>();
        r.seed = j.at("seed").get<uint64_t>();
        if (j.contains("sweeps")) r.sweeps = j["sweeps"].get<uint64_t>();
        if (j.contains("rounds")) r.rounds = j["rounds"].get<uint64_t>();
        r.restarts = j.at("restarts").get<uint64_t>();
        r.best_energy = j.at("best_energy").is_null()
                            ? std::numeric_limits<double>::infinity()
                            : j.at("best_energy").get<double>();
        r.success = j.at("success").get<uint64_t>();
        r.work = j.at("work").get<double>();
        r.model_time_us = j.at("model_time_us").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::parse, std::string("record missing field: ") + e.what());
    }
    return r;
}

std::vector<SolveRecord> read_record_log(const std::string& path, size_t* skipped) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::io, "cannot open record log '" + path + "'");
    std::vector<SolveRecord> records;
    std::string line;
    size_t lineno = 0;
    size_t tolerated = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            records.push_back(record_from_json(line));
        } catch (const Error&) {
            // A torn final line from an interrupted append is tolerated.
            if (in.peek() == EOF) {
                ++tolerated;
                break;
            }
            throw Error(ErrorCode::parse,
                        "record log line " + std::to_string(lineno) + " is malformed");
        }
    }
    if (skipped) *skipped = tolerated;
    return records;
}

std::string format_range(const RangeLimit& range) {
    return range ? std::to_string(*range) : "inf";
}

RangeLimit parse_range(const std::string& text) {
    if (text == "inf" || text == "unlimited") return std::nullopt;
    try {
        const int32_t value = std::stoi(text);
        if (value < 2) throw_invalid("range limit must be >= 2 or 'inf', got '" + text + "'");
        return value;
    } catch (const std::logic_error&) {
        throw_invalid("range limit must be >= 2 or 'inf', got '" + text + "'");
    }
}

std::string manifest_header() {
    return "id,file,L,alpha,R,policy,n,k,seed,planted,status";
}

std::string manifest_row(const ManifestEntry& e) {
    std::ostringstream out;
    out << e.id << ',' << e.file << ',' << e.grid << ',' << e.alpha.to_decimal() << ','
        << format_range(e.range) << ',' << e.policy << ',' << e.n << ',' << e.loops << ','
        << e.seed << ',' << e.planted << ',' << e.status;
    return out.str();
}

std::vector<ManifestEntry> read_manifest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::io, "cannot open manifest '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || line != manifest_header())
        throw Error(ErrorCode::parse, "manifest '" + path + "' has an unexpected header");
    std::vector<ManifestEntry> entries;
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> cols;
        std::string field;
        std::istringstream ls(line);
        while (std::getline(ls, field, ',')) cols.push_back(field);
        if (cols.size() != 11)
            throw Error(ErrorCode::parse,
                        "manifest line " + std::to_string(lineno) + ": expected 11 columns");
        ManifestEntry e;
        try {
            e.id = cols[0];
            e.file = cols[1];
            e.grid = static_cast<uint32_t>(std::stoul(cols[2]));
            e.alpha = Rational::parse_decimal(cols[3]);
            e.range = parse_range(cols[4]);
            e.policy = cols[5];
            e.n = static_cast<uint32_t>(std::stoul(cols[6]));
            e.loops = std::stoll(cols[7]);
            e.seed = std::stoull(cols[8]);
            e.planted = std::stoll(cols[9]);
            e.status = cols[10];
        } catch (const std::logic_error&) {
            throw Error(ErrorCode::parse,
                        "manifest line " + std::to_string(lineno) + " is malformed");
        }
        entries.push_back(std::move(e));
    }
    return entries;
}

}  // namespace flq
