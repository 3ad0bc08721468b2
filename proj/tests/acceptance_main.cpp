// Acceptance suite: one line per criterion, nonzero exit when any fails.
// Runs entirely through the public presets so the CLI reproduces every
// number seen here.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "entropy_lab/config.hpp"
#include "entropy_lab/presets.hpp"

using namespace entropy_lab;

namespace {

int g_failures = 0;

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void report(int number, const std::string& name, bool pass, const std::string& detail) {
    if (!pass) ++g_failures;
    std::printf("[%s] criterion %2d: %s%s%s\n", pass ? "PASS" : "FAIL", number, name.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
}

// One criterion backed by a subset of a preset's assertions.
void report_assertions(int number, const std::string& name, const PresetOutput& out,
                       const std::vector<std::size_t>& indices, const std::string& extra = "",
                       bool extra_pass = true) {
    bool pass = extra_pass;
    std::string detail = extra;
    for (std::size_t i : indices) {
        const Assertion& a = out.assertions.at(i);
        pass = pass && a.pass;
        if (!a.pass) detail += (detail.empty() ? "" : "; ") + a.name + " [" + a.detail + "]";
    }
    if (pass && detail.empty()) {
        for (std::size_t i : indices) {
            const Assertion& a = out.assertions.at(i);
            if (!a.detail.empty()) detail += (detail.empty() ? "" : "; ") + a.detail;
        }
    }
    report(number, name, pass, detail);
}

std::vector<std::size_t> all_indices(const PresetOutput& out) {
    std::vector<std::size_t> idx(out.assertions.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    return idx;
}

}  // namespace

int main() {
    PresetOptions options;  // default seed 42

    {
        auto start = std::chrono::steady_clock::now();
        PresetOutput out = preset_doubling_bowen(options);
        double secs = seconds_since(start);
        bool in_time = secs <= 30.0;
        report_assertions(1, "doubling-map Bowen entropy within 10% of log 2", out,
                          all_indices(out),
                          "runtime " + std::to_string(secs).substr(0, 5) + "s (limit 30s)",
                          in_time);
    }
    {
        PresetOutput out = preset_doubling_cover(options);
        report_assertions(2, "doubling-map covering entropy, exact set cover, subadditivity", out,
                          all_indices(out));
    }
    {
        auto start = std::chrono::steady_clock::now();
        PresetOutput out = preset_linear_euclid_vs_compactified(options);
        double secs = seconds_since(start);
        bool in_time = secs <= 60.0;
        report_assertions(3, "euclidean vs compactified contrast for diag(2)", out,
                          all_indices(out),
                          "runtime " + std::to_string(secs).substr(0, 5) + "s (limit 60s)",
                          in_time);
    }
    {
        PresetOutput out = preset_jordan_battery(options);
        report_assertions(4, "jordan battery: 200 random matrices, all invariants at 1e-9", out,
                          {0, 1});
        report_assertions(5, "recurrent set matches the orbit oracle on the 30-case battery", out,
                          {2});
    }
    {
        PresetOutput out = preset_variational_shift(options);
        report_assertions(6, "variational instance on the full 2-shift", out, all_indices(out));
    }
    {
        PresetOutput out = preset_lifted_measure(options);
        report_assertions(7, "lifted-measure identity and the 2/e bound", out, all_indices(out));
    }
    {
        PresetOutput out = preset_heisenberg_zero(options);
        report_assertions(8, "heisenberg exp/log, homomorphism, classical vs bowen", out,
                          all_indices(out));
    }
    {
        PresetOutput out = preset_counterexample_circle(options);
        report_assertions(9, "z -> z^2 counterexample guard", out, all_indices(out));
    }
    {
        // determinism: same seed, different worker counts, byte-identical CSV
        PresetOptions one = options;
        one.threads = 1;
        PresetOptions four = options;
        four.threads = 4;
        bool identical = true;
        std::string detail;
        for (const char* name : {"doubling-bowen", "jordan-battery"}) {
            PresetOutput a = run_preset(name, one);
            PresetOutput b = run_preset(name, four);
            if (a.tables.size() != b.tables.size()) {
                identical = false;
                detail += std::string(name) + ": table count differs; ";
                continue;
            }
            for (std::size_t i = 0; i < a.tables.size(); ++i) {
                if (a.tables[i].to_string() != b.tables[i].to_string()) {
                    identical = false;
                    detail += std::string(name) + "/" + a.tables[i].name + " differs; ";
                }
            }
        }
        report(10, "byte-identical CSV across thread counts at a fixed seed", identical, detail);
    }

    std::printf("%s: %d criterion(s) failed\n", g_failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
                g_failures);
    return g_failures == 0 ? 0 : 1;
}
