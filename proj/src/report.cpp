#include "mmrx/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mmrx::report {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
        if (ec) throw std::runtime_error("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace

std::vector<fs::path> write_curves(const fs::path& dir, const harness::SweepResult& sweep) {
    std::vector<fs::path> paths;
    if (sweep.points.empty()) return paths;
    const auto& curves = sweep.points.front().curves;
    for (std::size_t c = 0; c < curves.size(); ++c) {
        std::string body = "x y\n";
        for (const auto& p : sweep.points) body += num(p.snr_db) + " " + num(p.ber[c].ber) + "\n";
        paths.push_back(dir / (harness::curve_name(curves[c]) + ".tsv"));
        write_file(paths.back(), body);
    }
    return paths;
}

fs::path write_ber_summary(const fs::path& dir, const harness::SweepResult& sweep) {
    std::string body = "snr_db\tcurve\tdetector\tchest\tbit_errors\tbits\tber\tci_low\tci_high\tdcd_mean_additions\n";
    for (const auto& p : sweep.points) {
        for (std::size_t c = 0; c < p.curves.size(); ++c) {
            const auto& b = p.ber[c];
            const auto& h = p.dcd_hist[c];
            body += num(p.snr_db) + "\t" + harness::curve_name(p.curves[c]) + "\t" + harness::detector_label(p.curves[c].detector) +
                    "\t" + harness::chest_label(p.curves[c].chest) + "\t" + std::to_string(b.bit_errors) + "\t" +
                    std::to_string(b.bits_sent) + "\t" + num(b.ber) + "\t" + num(b.ci_low) + "\t" + num(b.ci_high) + "\t" +
                    (h.samples() ? num(h.mean()) : std::string("-")) + "\n";
        }
    }
    const auto path = dir / "ber_summary.tsv";
    write_file(path, body);
    return path;
}

fs::path write_histogram(const fs::path& path, const complexity::AdditionHistogram& h) {
    std::string body = "bin_left count\n";
    for (std::size_t i = 0; i < complexity::AdditionHistogram::kBins; ++i) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.15g %llu\n", h.left_edge(i), static_cast<unsigned long long>(h.counts()[i]));
        body += buf;
    }
    write_file(path, body);
    return path;
}

std::vector<fs::path> write_complexity(const fs::path& dir, const complexity::ComplexityReport& rep) {
    using complexity::stage_label;
    std::string ops = "mode\toperation\treal_additions\treal_multiplications\tlogic_operations\tnote\n";
    auto rows = [&](const char* mode, const auto& list) {
        for (const auto& r : list)
            ops += std::string(mode) + "\t" + stage_label(r.stage) + "\t" + std::to_string(r.adds) + "\t" +
                   std::to_string(r.mults) + "\t" + std::to_string(r.logic) + "\t" + (r.note.empty() ? "-" : r.note) + "\n";
    };
    rows("calibrated", rep.calibrated_rows);
    rows("measured", rep.measured_rows);

    std::string totals = "mode\tdetection_algorithm\tscenario_1\tscenario_2\n";
    const char* names[2] = {"mmse", "dcd_bound"};
    for (int d = 0; d < 2; ++d)
        totals += std::string("calibrated\t") + names[d] + "\t" + std::to_string(rep.calibrated_totals[d][0]) + "\t" +
                  std::to_string(rep.calibrated_totals[d][1]) + "\n";
    for (int d = 0; d < 2; ++d) {
        if (!rep.measured_totals[d][0]) continue;
        totals += std::string("measured\t") + names[d] + "\t" + std::to_string(*rep.measured_totals[d][0]) + "\t" +
                  std::to_string(*rep.measured_totals[d][1]) + "\n";
    }

    std::vector<fs::path> paths{dir / "complexity_operations.tsv", dir / "complexity_totals.tsv", dir / "complexity.txt"};
    write_file(paths[0], ops);
    write_file(paths[1], totals);
    write_file(paths[2], format_complexity(rep));
    return paths;
}

std::string format_complexity(const complexity::ComplexityReport& rep) {
    std::ostringstream os;
    char line[160];
    auto table = [&](const char* title, const auto& list) {
        os << title << "\n";
        std::snprintf(line, sizeof line, "  %-18s %10s %10s %12s\n", "operation", "additions", "mults", "logic ops");
        os << line;
        for (const auto& r : list) {
            std::snprintf(line, sizeof line, "  %-18s %10llu %10llu %12llu%s\n", complexity::stage_label(r.stage),
                          static_cast<unsigned long long>(r.adds), static_cast<unsigned long long>(r.mults),
                          static_cast<unsigned long long>(r.logic), r.note.empty() ? "" : "  *");
            os << line;
        }
    };
    table("Per-operation cost, 64 x 8, calibrated", rep.calibrated_rows);
    os << "\n";
    table("Per-operation cost, measured", rep.measured_rows);
    os << "\nScenario totals (logic operations)\n";
    std::snprintf(line, sizeof line, "  %-22s %14s %14s\n", "detection algorithm", "scenario 1", "scenario 2");
    os << line;
    const char* names[2] = {"MMSE", "DCD with bound"};
    for (int d = 0; d < 2; ++d) {
        std::snprintf(line, sizeof line, "  %-22s %14llu %14llu\n", names[d],
                      static_cast<unsigned long long>(rep.calibrated_totals[d][0]),
                      static_cast<unsigned long long>(rep.calibrated_totals[d][1]));
        os << line;
    }
    for (int d = 0; d < 2; ++d) {
        if (!rep.measured_totals[d][0]) continue;
        std::snprintf(line, sizeof line, "  %-22s %14llu %14llu  (measured)\n", names[d],
                      static_cast<unsigned long long>(*rep.measured_totals[d][0]),
                      static_cast<unsigned long long>(*rep.measured_totals[d][1]));
        os << line;
    }
    if (!rep.notes.empty()) {
        os << "\nNotes\n";
        for (const auto& n : rep.notes) os << "  * " << n << "\n";
    }
    return os.str();
}

std::string format_histogram_summary(const complexity::AdditionHistogram& h) {
    std::ostringstream os;
    os << "detections " << h.samples() << ", mean additions " << num(h.mean()) << ", min " << h.min() << ", max " << h.max()
       << ", below " << complexity::AdditionHistogram::kFirstEdge << ": " << h.underflow() << ", above "
       << complexity::AdditionHistogram::kLastEdge << ": " << h.overflow();
    return os.str();
}

fs::path write_manifest(const fs::path& dir, const harness::SimConfig& cfg,
                        const std::vector<std::pair<std::string, std::string>>& extra) {
    std::string body;
    for (const auto& [k, v] : harness::config_entries(cfg)) body += k + "=" + v + "\n";
    for (const auto& [k, v] : extra) body += k + "=" + v + "\n";
    const auto path = dir / "manifest.txt";
    write_file(path, body);
    return path;
}

}  // namespace mmrx::report
