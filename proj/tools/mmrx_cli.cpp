// mmrx: uplink detection link simulator.
//
//   mmrx sweep      --snr -20:5:10 --slots 20 --out out/
//   mmrx histogram  --snr 0 --out out/
//   mmrx complexity --out out/
//   mmrx selftest

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <exception>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mmrx/complexity.hpp"
#include "mmrx/harness.hpp"
#include "mmrx/report.hpp"
#include "mmrx/selftest.hpp"
#include "mmrx/simd/kernels.hpp"

namespace {

using mmrx::harness::SimConfig;

struct CommonOptions {
    std::string config_file;
    std::string isa;
    // Flag name -> raw value; applied over the config file in this order.
    std::vector<std::pair<std::string, std::string>> flags{
        {"users", ""}, {"rx", ""}, {"adc-bits", ""}, {"snr", ""}, {"slots", ""}, {"seed", ""}, {"chest", ""},
        {"detector", ""}, {"kc", ""}, {"mb", ""}, {"nu", ""}, {"bound", ""}, {"h-step", ""}, {"threads", ""},
        {"out", ""},
    };
    std::map<std::string, CLI::Option*> opts;
};

void add_common(CLI::App* app, CommonOptions& o) {
    app->add_option("--config", o.config_file, "key=value configuration file (flags override it)");
    app->add_option("--isa", o.isa, "kernel set: scalar or avx2 (default: best available)");
    static const std::map<std::string, std::string> help{
        {"users", "number of users (1..8)"},
        {"rx", "number of receive antennas"},
        {"adc-bits", "ADC resolution per rail"},
        {"snr", "SNR grid in dB: start:step:stop or a comma list"},
        {"slots", "slots per SNR point"},
        {"seed", "master seed"},
        {"chest", "channel estimation: mmse, ideal or both (comma list)"},
        {"detector", "detector: dcd, mmse or both (comma list)"},
        {"kc", "pilots per frequency interpolation band"},
        {"mb", "DCD: number of step halvings"},
        {"nu", "DCD: update budget (auto = 8N)"},
        {"bound", "DCD: box bound (auto = tight 16-QAM box)"},
        {"h-step", "DCD: initial step, a power of two (auto)"},
        {"threads", "worker threads (0 = all cores)"},
        {"out", "output directory"},
    };
    for (auto& [name, value] : o.flags) o.opts[name] = app->add_option("--" + name, value, help.at(name));
}

SimConfig resolve(const CommonOptions& o) {
    SimConfig cfg;
    if (!o.config_file.empty()) mmrx::harness::apply_config_file(cfg, o.config_file);
    for (const auto& [name, value] : o.flags)
        if (o.opts.at(name)->count() > 0) mmrx::harness::apply_setting(cfg, name, value);
    cfg.validate();
    if (!o.isa.empty()) mmrx::simd::select(mmrx::simd::parse_isa(o.isa));
    return cfg;
}

std::vector<std::pair<std::string, std::string>> run_info(const std::string& command) {
    return {{"command", command}, {"kernels", mmrx::simd::active().name}};
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_sweep(const CommonOptions& o) {
    const SimConfig cfg = resolve(o);
    const auto t0 = std::chrono::steady_clock::now();
    const auto sweep = mmrx::harness::run_sweep(cfg);
    const std::filesystem::path dir = cfg.out_dir;
    mmrx::report::write_curves(dir, sweep);
    mmrx::report::write_ber_summary(dir, sweep);

    for (const auto& p : sweep.points) {
        std::printf("snr %6.1f dB", p.snr_db);
        for (std::size_t c = 0; c < p.curves.size(); ++c)
            std::printf("  %s %.4e", mmrx::harness::curve_name(p.curves[c]).c_str(), p.ber[c].ber);
        std::printf("\n");
    }

    // Histogram of the DCD curve with estimated channels at the histogram SNR,
    // when that point is part of the sweep.
    std::optional<double> dcd_mean;
    for (const auto& p : sweep.points) {
        if (p.snr_db != cfg.histogram_snr_db) continue;
        std::size_t c = p.find(mmrx::harness::DetectorKind::kDcd, mmrx::harness::ChestMode::kMmse);
        if (c == p.npos) c = p.find(mmrx::harness::DetectorKind::kDcd, mmrx::harness::ChestMode::kIdeal);
        if (c == p.npos) break;
        mmrx::report::write_histogram(dir / "dcd_additions_histogram.tsv", p.dcd_hist[c]);
        dcd_mean = p.dcd_hist[c].mean();
        std::printf("dcd additions at %g dB: %s\n", p.snr_db, mmrx::report::format_histogram_summary(p.dcd_hist[c]).c_str());
    }

    auto measured = mmrx::complexity::measure_kernels(cfg.n_rx, cfg.n_users, cfg.seed);
    measured.dcd_mean_additions = dcd_mean;
    mmrx::report::write_complexity(dir, mmrx::complexity::build_report(measured));

    auto info = run_info("sweep");
    mmrx::report::write_manifest(dir, cfg, info);
    std::printf("wrote %s (%.1f s)\n", dir.string().c_str(), seconds_since(t0));
    return 0;
}

int cmd_histogram(const CommonOptions& o) {
    SimConfig cfg = resolve(o);
    if (o.opts.at("snr")->count() == 0) cfg.snr_grid_db = {cfg.histogram_snr_db};
    if (cfg.snr_grid_db.size() != 1) throw std::invalid_argument("histogram: --snr must be a single point");
    cfg.histogram_snr_db = cfg.snr_grid_db.front();
    if (o.opts.at("detector")->count() == 0) cfg.detectors = {mmrx::harness::DetectorKind::kDcd};
    if (o.opts.at("chest")->count() == 0) cfg.chest = {mmrx::harness::ChestMode::kMmse};
    if (std::find(cfg.detectors.begin(), cfg.detectors.end(), mmrx::harness::DetectorKind::kDcd) == cfg.detectors.end())
        throw std::invalid_argument("histogram: the dcd detector must be selected");

    const auto t0 = std::chrono::steady_clock::now();
    const auto p = mmrx::harness::run_point(cfg, cfg.histogram_snr_db);
    const std::filesystem::path dir = cfg.out_dir;
    mmrx::complexity::AdditionHistogram h;
    for (std::size_t c = 0; c < p.curves.size(); ++c)
        if (p.curves[c].detector == mmrx::harness::DetectorKind::kDcd) h.merge(p.dcd_hist[c]);
    mmrx::report::write_histogram(dir / "dcd_additions_histogram.tsv", h);
    mmrx::report::write_manifest(dir, cfg, run_info("histogram"));
    std::printf("%s\nwrote %s (%.1f s)\n", mmrx::report::format_histogram_summary(h).c_str(), dir.string().c_str(),
                seconds_since(t0));
    return 0;
}

int cmd_complexity(const CommonOptions& o) {
    const SimConfig cfg = resolve(o);
    const auto rep = mmrx::complexity::build_report(mmrx::complexity::measure_kernels(cfg.n_rx, cfg.n_users, cfg.seed));
    const std::filesystem::path dir = cfg.out_dir;
    mmrx::report::write_complexity(dir, rep);
    mmrx::report::write_manifest(dir, cfg, run_info("complexity"));
    std::fputs(mmrx::report::format_complexity(rep).c_str(), stdout);
    return 0;
}

int cmd_selftest(const CommonOptions& o) {
    if (!o.isa.empty()) mmrx::simd::select(mmrx::simd::parse_isa(o.isa));
    int failed = 0;
    for (const auto& c : mmrx::run_selftest()) {
        std::printf("%s  %s%s%s\n", c.ok ? "PASS" : "FAIL", c.name.c_str(), c.detail.empty() ? "" : ": ", c.detail.c_str());
        failed += !c.ok;
    }
    std::printf("kernels: %s\n", mmrx::simd::active().name);
    return failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Massive MIMO uplink link simulator with low-resolution ADCs"};
    app.require_subcommand(1);

    CommonOptions sweep_opts, hist_opts, cplx_opts, self_opts;
    auto* sweep = app.add_subcommand("sweep", "BER versus SNR for every selected detector and estimator");
    auto* hist = app.add_subcommand("histogram", "distribution of DCD additions per detection at one SNR");
    auto* cplx = app.add_subcommand("complexity", "operation counts and logic-operation totals");
    auto* self = app.add_subcommand("selftest", "quick internal consistency checks");
    add_common(sweep, sweep_opts);
    add_common(hist, hist_opts);
    add_common(cplx, cplx_opts);
    self->add_option("--isa", self_opts.isa, "kernel set: scalar or avx2");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sweep->parsed()) return cmd_sweep(sweep_opts);
        if (hist->parsed()) return cmd_histogram(hist_opts);
        if (cplx->parsed()) return cmd_complexity(cplx_opts);
        if (self->parsed()) return cmd_selftest(self_opts);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "mmrx: %s\n", e.what());
        return 2;
    }
    return 1;
}
