#pragma once

#include <filesystem>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "mirage/errors.hpp"
#include "mirage/json_io.hpp"
#include "mirage/text.hpp"

namespace mirage {

// Renders the outputs of a run directory into human-readable tables:
// one metric x system block per topic, plus the agreement table when present.
// Per-claim drill-down stays in the scores/ tree the run already wrote.
struct Report {
    json summary;
    std::string text;
};

inline Report build_report(const std::filesystem::path& run_dir) {
    namespace fs = std::filesystem;
    fs::path series_file = run_dir / "series.json";
    if (!fs::exists(series_file)) {
        throw FormatError("no series.json under " + run_dir.string() +
                          " (is this a run output directory?)");
    }
    json series = io::load_json_file(series_file);

    // topic -> system -> metric -> value
    std::map<std::string, std::map<std::string, std::map<std::string, double>>> by_topic;
    std::vector<std::string> metric_names;
    for (auto mit = series.begin(); mit != series.end(); ++mit) {
        metric_names.push_back(mit.key());
        for (auto tit = mit.value().begin(); tit != mit.value().end(); ++tit) {
            for (auto sit = tit.value().begin(); sit != tit.value().end(); ++sit) {
                by_topic[tit.key()][sit.key()][mit.key()] = sit.value().get<double>();
            }
        }
    }

    std::ostringstream out;
    auto pad = [](const std::string& s, size_t w) {
        return s.size() >= w ? s : s + std::string(w - s.size(), ' ');
    };
    size_t sys_width = 6;
    for (const auto& [topic, systems] : by_topic) {
        for (const auto& [sys, metrics] : systems) sys_width = std::max(sys_width, sys.size());
    }
    size_t metric_width = 10;
    for (const auto& name : metric_names) metric_width = std::max(metric_width, name.size());

    for (const auto& [topic, systems] : by_topic) {
        out << "topic: " << topic << "\n";
        out << "  " << pad("system", sys_width);
        for (const auto& name : metric_names) out << "  " << pad(name, metric_width);
        out << "\n";
        for (const auto& [sys, metrics] : systems) {
            out << "  " << pad(sys, sys_width);
            for (const auto& name : metric_names) {
                auto it = metrics.find(name);
                std::string cell = "-";
                if (it != metrics.end()) {
                    std::ostringstream v;
                    v << std::fixed << std::setprecision(4) << it->second;
                    cell = v.str();
                }
                out << "  " << pad(cell, metric_width);
            }
            out << "\n";
        }
        out << "\n";
    }

    json summary{{"series", series}};
    fs::path agreement_file = run_dir / "agreement.json";
    if (fs::exists(agreement_file)) {
        summary["agreement"] = io::load_json_file(agreement_file);
        fs::path agreement_text = run_dir / "agreement.txt";
        if (fs::exists(agreement_text)) {
            out << "agreement (Kendall tau-b)\n";
            out << io::read_file(agreement_text);
        }
    }
    fs::path manifest_file = run_dir / "manifest.json";
    if (fs::exists(manifest_file)) {
        json manifest = io::load_json_file(manifest_file);
        if (manifest.contains("failures") && !manifest["failures"].empty()) {
            summary["failures"] = manifest["failures"];
            out << "\nfailed cells: " << manifest["failures"].size() << "\n";
            for (const auto& f : manifest["failures"]) {
                out << "  " << f["topic"].get<std::string>() << "/"
                    << f["system"].get<std::string>() << "/" << f["metric"].get<std::string>()
                    << ": " << f["error"].get<std::string>() << "\n";
            }
        }
    }

    Report report;
    report.summary = summary;
    report.text = out.str();
    return report;
}

inline void write_report(const std::filesystem::path& run_dir) {
    Report report = build_report(run_dir);
    io::write_json_file(run_dir / "report.json", report.summary);
    io::write_file(run_dir / "report.txt", report.text);
}

}  // namespace mirage
