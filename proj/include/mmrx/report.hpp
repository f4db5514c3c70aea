#pragma once

// Output files: plot-data TSVs, BER summary, histogram, complexity tables and
// the run manifest. Write failures throw std::runtime_error naming the file.

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "mmrx/complexity.hpp"
#include "mmrx/harness.hpp"

namespace mmrx::report {

namespace fs = std::filesystem;

// One "<curve name>.tsv" per curve with header "x y" (SNR dB, BER).
std::vector<fs::path> write_curves(const fs::path& dir, const harness::SweepResult& sweep);
// snr, curve, errors, bits, BER and Wilson interval for every point.
fs::path write_ber_summary(const fs::path& dir, const harness::SweepResult& sweep);
// Header "bin_left count".
fs::path write_histogram(const fs::path& path, const complexity::AdditionHistogram& h);

// Per-stage table and the scenario totals, as TSV and as aligned text.
std::vector<fs::path> write_complexity(const fs::path& dir, const complexity::ComplexityReport& rep);
std::string format_complexity(const complexity::ComplexityReport& rep);
std::string format_histogram_summary(const complexity::AdditionHistogram& h);

// key=value lines: the resolved configuration followed by `extra`.
fs::path write_manifest(const fs::path& dir, const harness::SimConfig& cfg,
                        const std::vector<std::pair<std::string, std::string>>& extra);

}  // namespace mmrx::report
