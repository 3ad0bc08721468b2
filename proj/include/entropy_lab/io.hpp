#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "entropy_lab/cover_entropy.hpp"
#include "entropy_lab/errors.hpp"
#include "entropy_lab/estimate.hpp"
#include "entropy_lab/measures.hpp"

namespace entropy_lab {

using json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "1";

// %.17g round-trips doubles and keeps emission byte-stable across runs.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct CsvTable {
    std::string name;  // file stem
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    std::string to_string() const {
        std::string out;
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (i) out += ',';
            out += columns[i];
        }
        out += '\n';
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) out += ',';
                out += row[i];
            }
            out += '\n';
        }
        return out;
    }
};

// columns: n, eps, count, count_raw, exact, saturated
inline CsvTable spanning_csv(std::string name, const EntropyEstimate& est) {
    CsvTable t;
    t.name = std::move(name);
    t.columns = {"n", "eps", "count", "count_raw", "exact", "saturated"};
    for (const GrowthCell& c : est.cells)
        t.rows.push_back({std::to_string(c.n), format_double(c.eps), format_double(c.count),
                          format_double(c.count_raw), c.exact ? "1" : "0",
                          c.saturated ? "1" : "0"});
    return t;
}

// columns: n, count_lower, count_upper, exact
inline CsvTable covering_csv(std::string name, const CoveringEntropyResult& r) {
    CsvTable t;
    t.name = std::move(name);
    t.columns = {"n", "count_lower", "count_upper", "exact"};
    for (const CoverRow& row : r.rows)
        t.rows.push_back({std::to_string(row.n), std::to_string(row.count_lower),
                          std::to_string(row.count_upper), row.exact ? "1" : "0"});
    return t;
}

// columns: n, entropy
inline CsvTable sequence_csv(std::string name, const std::vector<double>& seq) {
    CsvTable t;
    t.name = std::move(name);
    t.columns = {"n", "entropy"};
    for (std::size_t n = 0; n < seq.size(); ++n)
        t.rows.push_back({std::to_string(n), format_double(seq[n])});
    return t;
}

inline json estimate_json(const EntropyEstimate& est) {
    json slopes = json::array();
    for (const EpsilonSlope& s : est.slopes)
        slopes.push_back({{"eps", s.eps},
                          {"slope", s.usable ? json(s.slope) : json()},
                          {"residual", s.residual},
                          {"cells_used", s.cells_used},
                          {"usable", s.usable},
                          {"note", s.note}});
    return {{"value", std::isnan(est.value) ? json() : json(est.value)},
            {"slopes", slopes},
            {"diagnostics",
             {{"counts_monotone_in_n", est.diagnostics.counts_monotone_in_n},
              {"counts_monotone_in_eps", est.diagnostics.counts_monotone_in_eps},
              {"slopes_monotone_in_eps", est.diagnostics.slopes_monotone_in_eps},
              {"any_inexact", est.diagnostics.any_inexact},
              {"any_saturated", est.diagnostics.any_saturated},
              {"notes", est.diagnostics.notes}}}};
}

inline json covering_json(const CoveringEntropyResult& r) {
    return {{"slope", std::isnan(r.slope) ? json() : json(r.slope)},
            {"fit_rows", r.fit_rows},
            {"subadditive_exact", r.subadditive_exact},
            {"monotone", r.monotone},
            {"any_inexact", r.any_inexact},
            {"notes", r.notes}};
}

struct Assertion {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ResultRecord {
    std::string id;
    json params;
    double value = 0.0;
    json diagnostics;
};

struct PresetOutput {
    std::string preset;
    std::vector<ResultRecord> records;
    std::vector<Assertion> assertions;
    std::vector<CsvTable> tables;

    bool all_pass() const {
        for (const Assertion& a : assertions)
            if (!a.pass) return false;
        return true;
    }

    json summary() const {
        json asserts = json::array();
        for (const Assertion& a : assertions)
            asserts.push_back({{"name", a.name}, {"pass", a.pass}, {"detail", a.detail}});
        json recs = json::array();
        for (const ResultRecord& r : records)
            recs.push_back(
                {{"id", r.id}, {"params", r.params}, {"value", r.value}, {"diagnostics", r.diagnostics}});
        return {{"schema_version", kSchemaVersion},
                {"preset", preset},
                {"pass", all_pass()},
                {"assertions", asserts},
                {"records", recs}};
    }
};

enum class OutputFormat { Csv, Json, Both };

inline OutputFormat parse_format(const std::string& s) {
    if (s == "csv") return OutputFormat::Csv;
    if (s == "json") return OutputFormat::Json;
    if (s == "both") return OutputFormat::Both;
    throw DomainError("unknown output format '" + s + "' (expected csv|json|both)");
}

// Writes <out>/<preset>__<table>.csv and <out>/<preset>__summary.json.
inline std::vector<std::string> write_outputs(const PresetOutput& out, const std::string& out_dir,
                                              OutputFormat format) {
    std::filesystem::create_directories(out_dir);
    std::vector<std::string> written;
    if (format != OutputFormat::Json) {
        for (const CsvTable& t : out.tables) {
            std::string path = out_dir + "/" + out.preset + "__" + t.name + ".csv";
            std::ofstream f(path, std::ios::binary);
            f << t.to_string();
            written.push_back(path);
        }
    }
    if (format != OutputFormat::Csv) {
        std::string path = out_dir + "/" + out.preset + "__summary.json";
        std::ofstream f(path, std::ios::binary);
        f << out.summary().dump(2) << "\n";
        written.push_back(path);
    }
    return written;
}

}  // namespace entropy_lab
