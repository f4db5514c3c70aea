#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mmrx/equalizer.hpp"
#include "mmrx/frontend.hpp"
#include "mmrx/harness.hpp"

namespace mmrx::harness {

const char* chest_label(ChestMode c) { return c == ChestMode::kMmse ? "mmse" : "ideal"; }
const char* detector_label(DetectorKind d) { return d == DetectorKind::kDcd ? "dcd" : "mmse"; }

double SimConfig::resolved_bound() const { return bound > 0.0 ? bound : equalizer::qam16_bound(); }

double SimConfig::resolved_h_step() const { return h_step > 0.0 ? h_step : dcd::recommended_step(resolved_bound()); }

std::size_t SimConfig::resolved_max_updates() const { return max_updates > 0 ? max_updates : 16 * n_users; }

namespace {

[[noreturn]] void bad(std::string_view key, const std::string& what) {
    throw std::invalid_argument("config '" + std::string(key) + "': " + what);
}

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string normalize_key(std::string_view key) {
    std::string k(trim(key));
    std::replace(k.begin(), k.end(), '_', '-');
    return k;
}

double to_double(std::string_view key, std::string_view v) {
    v = trim(v);
    double out = 0.0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(out)) bad(key, "not a finite number: '" + std::string(v) + "'");
    return out;
}

std::uint64_t to_u64(std::string_view key, std::string_view v) {
    v = trim(v);
    std::uint64_t out = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size()) bad(key, "not a nonnegative integer: '" + std::string(v) + "'");
    return out;
}

bool to_bool(std::string_view key, std::string_view v) {
    v = trim(v);
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    bad(key, "not a boolean: '" + std::string(v) + "'");
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const auto next = s.find(sep, pos);
        out.push_back(trim(s.substr(pos, next - pos)));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return out;
}

template <typename E, typename Parse>
std::vector<E> parse_list(std::string_view key, std::string_view v, Parse parse) {
    std::vector<E> out;
    for (auto item : split(v, ',')) {
        const E e = parse(item);
        if (std::find(out.begin(), out.end(), e) != out.end()) bad(key, "duplicate entry '" + std::string(item) + "'");
        out.push_back(e);
    }
    return out;
}

// Shortest representation that round-trips.
std::string fmt(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace

std::vector<double> parse_snr_grid(std::string_view text) {
    text = trim(text);
    if (text.empty()) bad("snr", "empty grid");
    if (text.find(':') != std::string_view::npos) {
        const auto parts = split(text, ':');
        if (parts.size() != 3) bad("snr", "range must be start:step:stop");
        const double a = to_double("snr", parts[0]);
        const double step = to_double("snr", parts[1]);
        const double b = to_double("snr", parts[2]);
        if (!(step > 0.0) || b < a) bad("snr", "range needs step > 0 and stop >= start");
        const auto n = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
        if (n > 10000) bad("snr", "too many points");
        std::vector<double> grid(n);
        for (std::size_t i = 0; i < n; ++i) grid[i] = a + static_cast<double>(i) * step;
        return grid;
    }
    std::vector<double> grid;
    for (auto item : split(text, ',')) grid.push_back(to_double("snr", item));
    return grid;
}

void apply_setting(SimConfig& cfg, std::string_view raw_key, std::string_view value) {
    const std::string key = normalize_key(raw_key);
    const std::string_view v = trim(value);
    if (key == "users") cfg.n_users = to_u64(key, v);
    else if (key == "rx") cfg.n_rx = to_u64(key, v);
    else if (key == "adc-bits") cfg.adc_bits = static_cast<int>(to_u64(key, v));
    else if (key == "clip-scale") cfg.clip_scale = to_double(key, v);
    else if (key == "modulation") cfg.modulation = std::string(v);
    else if (key == "coding") cfg.coding = std::string(v);
    else if (key == "snr") cfg.snr_grid_db = parse_snr_grid(v);
    else if (key == "slots") cfg.n_slots = to_u64(key, v);
    else if (key == "seed") cfg.seed = to_u64(key, v);
    else if (key == "tau-rms-df") cfg.pdp.tau_rms = to_double(key, v) / cfg.pdp.delta_f;
    else if (key == "delta-f") {
        const double prod = cfg.pdp.tau_rms * cfg.pdp.delta_f;
        cfg.pdp.delta_f = to_double(key, v);
        cfg.pdp.tau_rms = prod / cfg.pdp.delta_f;
    }
    else if (key == "taps") cfg.pdp.num_taps = to_u64(key, v);
    else if (key == "cp-len") cfg.pdp.cp_len = to_u64(key, v);
    else if (key == "fft-size") cfg.pdp.fft_size = to_u64(key, v);
    else if (key == "subcarriers") cfg.num_subcarriers = to_u64(key, v);
    else if (key == "symbols") cfg.num_symbols = to_u64(key, v);
    else if (key == "chest") {
        cfg.chest = parse_list<ChestMode>(key, v, [&](std::string_view s) {
            if (s == "mmse") return ChestMode::kMmse;
            if (s == "ideal") return ChestMode::kIdeal;
            bad(key, "expected mmse or ideal, got '" + std::string(s) + "'");
        });
    } else if (key == "detector") {
        cfg.detectors = parse_list<DetectorKind>(key, v, [&](std::string_view s) {
            if (s == "dcd") return DetectorKind::kDcd;
            if (s == "mmse") return DetectorKind::kMmse;
            bad(key, "expected dcd or mmse, got '" + std::string(s) + "'");
        });
    }
    else if (key == "unbiased") cfg.mmse_unbiased = to_bool(key, v);
    else if (key == "bound") cfg.bound = v == "auto" ? 0.0 : to_double(key, v);
    else if (key == "h-step") cfg.h_step = v == "auto" ? 0.0 : to_double(key, v);
    else if (key == "nu") cfg.max_updates = v == "auto" ? 0 : to_u64(key, v);
    else if (key == "mb") cfg.max_halvings = static_cast<int>(to_u64(key, v));
    else if (key == "kc") cfg.kc = to_u64(key, v);
    else if (key == "hist-snr") cfg.histogram_snr_db = to_double(key, v);
    else if (key == "threads") cfg.threads = to_u64(key, v);
    else if (key == "out") cfg.out_dir = std::string(v);
    else throw std::invalid_argument("config: unknown key '" + key + "'");
}

void apply_config_text(SimConfig& cfg, std::string_view text, std::string_view origin) {
    std::size_t line_no = 0;
    for (auto line : split(text, '\n')) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = trim(line.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw std::invalid_argument(std::string(origin) + ":" + std::to_string(line_no) + ": expected key = value");
        }
        try {
            apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1));
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument(std::string(origin) + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
}

void apply_config_file(SimConfig& cfg, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    apply_config_text(cfg, ss.str(), path.string());
}

std::vector<std::pair<std::string, std::string>> config_entries(const SimConfig& cfg) {
    auto join = [](const auto& items, auto&& to_str) {
        std::string s;
        for (const auto& it : items) {
            if (!s.empty()) s += ',';
            s += to_str(it);
        }
        return s;
    };
    return {
        {"users", std::to_string(cfg.n_users)},
        {"rx", std::to_string(cfg.n_rx)},
        {"adc-bits", std::to_string(cfg.adc_bits)},
        {"clip-scale", fmt(cfg.clip_scale)},
        {"modulation", cfg.modulation},
        {"coding", cfg.coding},
        {"snr", join(cfg.snr_grid_db, fmt)},
        {"slots", std::to_string(cfg.n_slots)},
        {"seed", std::to_string(cfg.seed)},
        {"delta-f", fmt(cfg.pdp.delta_f)},
        {"tau-rms-df", fmt(cfg.pdp.tau_rms * cfg.pdp.delta_f)},
        {"taps", std::to_string(cfg.pdp.num_taps)},
        {"cp-len", std::to_string(cfg.pdp.cp_len)},
        {"fft-size", std::to_string(cfg.pdp.fft_size)},
        {"subcarriers", std::to_string(cfg.num_subcarriers)},
        {"symbols", std::to_string(cfg.num_symbols)},
        {"chest", join(cfg.chest, chest_label)},
        {"detector", join(cfg.detectors, detector_label)},
        {"unbiased", cfg.mmse_unbiased ? "true" : "false"},
        {"bound", fmt(cfg.resolved_bound())},
        {"h-step", fmt(cfg.resolved_h_step())},
        {"nu", std::to_string(cfg.resolved_max_updates())},
        {"mb", std::to_string(cfg.max_halvings)},
        {"kc", std::to_string(cfg.kc)},
        {"hist-snr", fmt(cfg.histogram_snr_db)},
        {"threads", std::to_string(cfg.threads)},
        {"out", cfg.out_dir},
    };
}

void SimConfig::validate() const {
    if (n_users < 1 || n_users > 8) bad("users", "must be in 1..8 (one DMRS port per user)");
    if (n_rx < 1) bad("rx", "must be >= 1");
    if (n_rx > 4096) bad("rx", "must be <= 4096");
    frontend::QuantizerConfig q{adc_bits, clip_scale};
    try {
        q.validate();
    } catch (const std::invalid_argument& e) {
        bad("adc-bits", e.what());
    }
    if (modulation != "16qam") bad("modulation", "only 16qam is supported");
    if (coding != "none") bad("coding", "only 'none' is supported");
    if (snr_grid_db.empty()) bad("snr", "empty grid");
    for (double s : snr_grid_db)
        if (!std::isfinite(s)) bad("snr", "non-finite point");
    if (n_slots < 1) bad("slots", "must be >= 1");
    try {
        pdp.validate();
    } catch (const std::invalid_argument& e) {
        bad("tau-rms-df", e.what());
    }
    if (num_subcarriers < 2 || num_subcarriers % 2 != 0) bad("subcarriers", "must be even and >= 2");
    if (num_symbols < 5) bad("symbols", "need at least one data symbol after the DMRS symbols");
    if (chest.empty()) bad("chest", "no mode selected");
    if (detectors.empty()) bad("detector", "no detector selected");
    if (bound < 0.0) bad("bound", "must be positive (or auto)");
    if (h_step < 0.0) bad("h-step", "must be positive (or auto)");
    if (h_step > 0.0) {
        int e = 0;
        if (std::frexp(h_step, &e) != 0.5) bad("h-step", "must be a power of two");
        if (h_step > resolved_bound()) bad("h-step", "must not exceed the bound");
    }
    if (max_halvings < 1 || max_halvings > 60) bad("mb", "must be in 1..60");
    if (kc < 1 || kc > num_subcarriers / 2) bad("kc", "must be in 1..subcarriers/2");
}

}  // namespace mmrx::harness
