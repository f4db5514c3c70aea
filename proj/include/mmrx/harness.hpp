#pragma once

// Monte-Carlo link simulation: configuration, per-slot processing chain and
// SNR sweeps. Every curve (detector x channel-estimation mode) is evaluated
// on the same slots, so comparisons between curves are paired.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mmrx/channel.hpp"
#include "mmrx/complexity.hpp"
#include "mmrx/dcd.hpp"

namespace mmrx::harness {

enum class ChestMode { kMmse, kIdeal };
enum class DetectorKind { kDcd, kMmse };

const char* chest_label(ChestMode c);
const char* detector_label(DetectorKind d);

struct SimConfig {
    std::size_t n_users = 8;
    std::size_t n_rx = 64;
    int adc_bits = 2;
    double clip_scale = 2.0;
    std::string modulation = "16qam";
    std::string coding = "none";  // reserved

    std::vector<double> snr_grid_db{-20, -15, -10, -5, 0, 5, 10};
    std::size_t n_slots = 20;
    std::uint64_t seed = 1;

    channel::PdpConfig pdp;
    std::size_t num_subcarriers = 128;
    std::size_t num_symbols = 14;

    std::vector<ChestMode> chest{ChestMode::kMmse, ChestMode::kIdeal};
    std::vector<DetectorKind> detectors{DetectorKind::kDcd, DetectorKind::kMmse};
    bool mmse_unbiased = true;

    // DCD budgets. 0 selects the derived default: bound = tight 16-QAM box,
    // h_step = largest power of two not above the bound, max_updates = 8 N
    // with N = 2 n_users real unknowns.
    double bound = 0.0;
    double h_step = 0.0;
    std::size_t max_updates = 0;
    int max_halvings = 8;

    std::size_t kc = 16;  // pilots per frequency interpolation band

    double histogram_snr_db = 0.0;
    std::size_t threads = 0;  // 0 = hardware concurrency
    std::string out_dir = "out";

    double resolved_bound() const;
    double resolved_h_step() const;
    std::size_t resolved_max_updates() const;

    // Throws std::invalid_argument naming the offending key.
    void validate() const;
};

// Flat "key = value" text, '#' starts a comment. Keys are the long flag
// names; '_' and '-' are interchangeable. Unknown keys throw.
void apply_setting(SimConfig& cfg, std::string_view key, std::string_view value);
void apply_config_text(SimConfig& cfg, std::string_view text, std::string_view origin = "<config>");
void apply_config_file(SimConfig& cfg, const std::filesystem::path& path);

// "a:step:b" (inclusive) or a comma list.
std::vector<double> parse_snr_grid(std::string_view text);

// Fully resolved configuration as ordered key/value pairs; feeding them back
// through apply_setting reproduces the configuration.
std::vector<std::pair<std::string, std::string>> config_entries(const SimConfig& cfg);

struct Curve {
    DetectorKind detector;
    ChestMode chest;
};

std::vector<Curve> curves(const SimConfig& cfg);
std::string curve_name(const Curve& c);

struct BerRecord {
    double snr_db = 0.0;
    std::uint64_t bit_errors = 0;
    std::uint64_t bits_sent = 0;
    double ber = 0.0;
    double ci_low = 0.0, ci_high = 0.0;  // Wilson 95 %
};

BerRecord make_ber_record(double snr_db, std::uint64_t errors, std::uint64_t bits);

struct DcdTotals {
    std::uint64_t runs = 0;
    std::uint64_t additions = 0, comparisons = 0, bit_shifts = 0, multiplications = 0;
    std::uint64_t accepted_updates = 0;

    void add(const dcd::DcdLedger& l);
    DcdTotals& operator+=(const DcdTotals& o);
};

struct PointResult {
    double snr_db = 0.0;
    std::vector<Curve> curves;
    std::vector<BerRecord> ber;                         // per curve
    std::vector<std::vector<std::uint64_t>> slot_errors;  // [curve][slot]
    std::uint64_t bits_per_slot = 0;
    std::vector<complexity::AdditionHistogram> dcd_hist;  // per curve, empty for MMSE
    std::vector<DcdTotals> dcd_totals;                   // per curve

    // Index of the curve, or npos.
    std::size_t find(DetectorKind d, ChestMode c) const;
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

struct SweepResult {
    std::vector<PointResult> points;
};

PointResult run_point(const SimConfig& cfg, double snr_db);
SweepResult run_sweep(const SimConfig& cfg);

// Paired comparison of two curves at one point: mean and standard error of
// the per-slot BER difference (a - b).
struct PairedDiff {
    double mean = 0.0;
    double std_error = 0.0;
};
PairedDiff paired_difference(const PointResult& p, std::size_t curve_a, std::size_t curve_b);
// Difference of differences: (a1 - b1) - (a2 - b2), per slot.
PairedDiff paired_difference(const PointResult& p, std::size_t a1, std::size_t b1, std::size_t a2, std::size_t b2);

}  // namespace mmrx::harness
