#include "mmrx/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>

#include "mmrx/chest.hpp"
#include "mmrx/equalizer.hpp"
#include "mmrx/frontend.hpp"
#include "mmrx/refsig.hpp"
#include "mmrx/rng.hpp"

namespace mmrx::harness {

std::vector<Curve> curves(const SimConfig& cfg) {
    std::vector<Curve> out;
    for (ChestMode c : cfg.chest)
        for (DetectorKind d : cfg.detectors) out.push_back({d, c});
    return out;
}

std::string curve_name(const Curve& c) {
    std::string name = "UncodedBER";
    name += c.detector == DetectorKind::kDcd ? "DCDBound" : "MMSE";
    name += c.chest == ChestMode::kMmse ? "Chest" : "Ideal";
    return name;
}

BerRecord make_ber_record(double snr_db, std::uint64_t errors, std::uint64_t bits) {
    if (bits == 0) throw std::invalid_argument("make_ber_record: no bits");
    if (errors > bits) throw std::invalid_argument("make_ber_record: more errors than bits");
    BerRecord r;
    r.snr_db = snr_db;
    r.bit_errors = errors;
    r.bits_sent = bits;
    const double n = static_cast<double>(bits);
    const double p = static_cast<double>(errors) / n;
    r.ber = p;
    const double z = 1.959963984540054;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    r.ci_low = errors == 0 ? 0.0 : std::max(0.0, center - half);
    r.ci_high = errors == bits ? 1.0 : std::min(1.0, center + half);
    return r;
}

void DcdTotals::add(const dcd::DcdLedger& l) {
    ++runs;
    additions += l.additions;
    comparisons += l.comparisons;
    bit_shifts += l.bit_shifts;
    multiplications += l.multiplications;
    accepted_updates += l.accepted_updates;
}

DcdTotals& DcdTotals::operator+=(const DcdTotals& o) {
    runs += o.runs;
    additions += o.additions;
    comparisons += o.comparisons;
    bit_shifts += o.bit_shifts;
    multiplications += o.multiplications;
    accepted_updates += o.accepted_updates;
    return *this;
}

std::size_t PointResult::find(DetectorKind d, ChestMode c) const {
    for (std::size_t i = 0; i < curves.size(); ++i)
        if (curves[i].detector == d && curves[i].chest == c) return i;
    return npos;
}

namespace {

struct PointSetup {
    const SimConfig& cfg;
    double snr_db;
    double noise_var;
    std::vector<Curve> curves;
    std::vector<refsig::DmrsLayerConfig> layers;     // per user
    std::vector<refsig::PilotPattern> patterns;      // per user
    std::vector<chest::InterpolatorBank> banks;      // per comb offset
    std::vector<std::size_t> data_symbols;
    frontend::QuantizerConfig quant;
    equalizer::DcdSettings dcd;
    bool need_chest = false;
    bool need_ideal = false;
};

PointSetup make_setup(const SimConfig& cfg, double snr_db) {
    PointSetup s{cfg, snr_db, channel::noise_variance(snr_db), curves(cfg), {}, {}, {}, {}, {}, {}};
    s.quant = {cfg.adc_bits, cfg.clip_scale};
    s.dcd = {cfg.resolved_bound(), cfg.resolved_h_step(), cfg.resolved_max_updates(), cfg.max_halvings};
    for (std::size_t u = 0; u < cfg.n_users; ++u) {
        s.layers.push_back(refsig::layer_weights(static_cast<int>(u) + 1));
        s.patterns.push_back(refsig::make_pilot_pattern(s.layers.back(), cfg.num_subcarriers, cfg.num_symbols));
    }
    for (std::size_t l = 0; l < cfg.num_symbols; ++l)
        if (!s.patterns.front().is_dmrs_symbol(l)) s.data_symbols.push_back(l);
    for (ChestMode c : cfg.chest) (c == ChestMode::kMmse ? s.need_chest : s.need_ideal) = true;
    if (s.need_chest) {
        // Per-pilot noise seen by the estimator: thermal noise plus the
        // converter distortion, which scales with the total received power.
        const double rx_power = static_cast<double>(cfg.n_users) + s.noise_var;
        const double snr_lin = 1.0 / (s.noise_var + frontend::distortion_ratio(s.quant) * rx_power);
        for (int comb = 0; comb < 2; ++comb) {
            auto it = std::find_if(s.layers.begin(), s.layers.end(), [&](const auto& l) { return l.w_fdm == comb; });
            if (it == s.layers.end()) {
                s.banks.emplace_back(chest::make_bank(s.patterns.front(), cfg.pdp, snr_lin, cfg.kc));
            } else {
                s.banks.emplace_back(chest::make_bank(s.patterns[it - s.layers.begin()], cfg.pdp, snr_lin, cfg.kc));
            }
        }
    }
    return s;
}

struct SlotOutput {
    std::vector<std::uint64_t> errors;
    std::vector<complexity::AdditionHistogram> hist;
    std::vector<DcdTotals> totals;
};

std::vector<std::uint8_t> random_bits(std::mt19937_64& gen, std::size_t n) {
    std::vector<std::uint8_t> bits(n);
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i % 64 == 0) word = gen();
        bits[i] = static_cast<std::uint8_t>((word >> (i % 64)) & 1u);
    }
    return bits;
}

std::uint32_t dmrs_init(std::uint64_t seed, std::size_t slot) {
    // 1 .. 2^31 - 1
    return static_cast<std::uint32_t>(stream_seed(seed, Stream::kDmrs, {slot}) % 0x7FFFFFFFull) + 1u;
}

SlotOutput run_slot(const PointSetup& s, std::size_t slot) {
    const SimConfig& cfg = s.cfg;
    const std::size_t K = cfg.num_subcarriers;
    const std::size_t U = cfg.n_users;
    const std::size_t R = cfg.n_rx;
    const std::size_t nd = s.data_symbols.size();

    // Transmit grids.
    const auto dmrs_seq = refsig::qpsk_map(refsig::gold_sequence({dmrs_init(cfg.seed, slot), refsig::kGoldFastForward, K}));
    std::vector<std::vector<std::uint8_t>> bits(U);
    std::vector<ResourceGrid> dmrs(U), tx(U);
    for (std::size_t u = 0; u < U; ++u) {
        auto gen = make_stream(cfg.seed, Stream::kPayload, {slot, u});
        bits[u] = random_bits(gen, 4 * K * nd);
        dmrs[u] = refsig::dmrs_grid(s.layers[u], s.patterns[u], dmrs_seq);
        tx[u] = dmrs[u];
        const auto syms = equalizer::qam16_map(bits[u]);
        for (std::size_t d = 0; d < nd; ++d)
            std::copy_n(syms.begin() + static_cast<std::ptrdiff_t>(d * K), K, tx[u].symbol(s.data_symbols[d]).begin());
    }

    // Channel, noise, converters. The channel and unit noise depend on the
    // slot only, so every SNR point sees the same draws.
    const auto h = channel::gen_channel(cfg.pdp, R, U, K, stream_seed(cfg.seed, Stream::kChannel, {slot}));
    auto rx = channel::apply_channel(tx, h, s.snr_db, stream_seed(cfg.seed, Stream::kNoise, {slot}));
    for (auto& grid : rx) {
        const auto q = frontend::adc_block(grid.flat(), s.quant);
        std::copy(q.samples.begin(), q.samples.end(), grid.flat().begin());
    }

    // Per-subcarrier channel matrices for each estimation mode. Without
    // Doppler the time pass gives every symbol the same estimate.
    auto channel_matrices = [&](ChestMode mode) {
        std::vector<CMatrix> hk(K, CMatrix(R, U));
        if (mode == ChestMode::kIdeal) {
            for (std::size_t r = 0; r < R; ++r)
                for (std::size_t u = 0; u < U; ++u)
                    for (std::size_t k = 0; k < K; ++k) hk[k](r, u) = h.at(r, u, k);
        } else {
            const std::size_t l0 = s.data_symbols.front();
            for (std::size_t r = 0; r < R; ++r) {
                for (std::size_t u = 0; u < U; ++u) {
                    const auto est = chest::estimate_link(rx[r], dmrs[u], s.banks[static_cast<std::size_t>(s.layers[u].w_fdm)]);
                    for (std::size_t k = 0; k < K; ++k) hk[k](r, u) = est.h(k, l0);
                }
            }
        }
        return hk;
    };

    SlotOutput out;
    out.errors.assign(s.curves.size(), 0);
    out.hist.assign(s.curves.size(), {});
    out.totals.assign(s.curves.size(), {});

    std::vector<cplx> y(R);
    for (ChestMode mode : cfg.chest) {
        const auto hk = channel_matrices(mode);
        std::vector<std::size_t> idx;
        for (std::size_t c = 0; c < s.curves.size(); ++c)
            if (s.curves[c].chest == mode) idx.push_back(c);

        for (std::size_t k = 0; k < K; ++k) {
            const auto g = equalizer::gram(hk[k]);
            RMatrix a;
            std::optional<equalizer::MmseSolver> mmse;
            for (std::size_t c : idx) {
                if (s.curves[c].detector == DetectorKind::kDcd && a.rows() == 0) a = equalizer::realify(g.g, std::vector<cplx>(U)).a;
                if (s.curves[c].detector == DetectorKind::kMmse && !mmse) mmse.emplace(g.g, s.noise_var, cfg.mmse_unbiased);
            }
            for (std::size_t d = 0; d < nd; ++d) {
                const std::size_t l = s.data_symbols[d];
                for (std::size_t r = 0; r < R; ++r) y[r] = rx[r](k, l);
                const auto v = equalizer::matched_filter(hk[k], y).v;
                for (std::size_t c : idx) {
                    std::vector<cplx> x;
                    if (s.curves[c].detector == DetectorKind::kDcd) {
                        auto det = equalizer::dcd_detect(a, v, s.dcd);
                        out.hist[c].add(det.ledger.total_additions());
                        out.totals[c].add(det.ledger);
                        x = std::move(det.x);
                    } else {
                        x = mmse->solve(v);
                    }
                    const auto hard = equalizer::demap_qam16(x);
                    const std::size_t base = 4 * (d * K + k);
                    for (std::size_t u = 0; u < U; ++u)
                        for (std::size_t b = 0; b < 4; ++b) out.errors[c] += hard[4 * u + b] != bits[u][base + b];
                }
            }
        }
    }
    return out;
}

std::vector<SlotOutput> run_slots(const PointSetup& s) {
    const std::size_t n = s.cfg.n_slots;
    std::vector<SlotOutput> results(n);
    std::size_t workers = s.cfg.threads ? s.cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, n);

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                results[i] = run_slot(s, i);
            } catch (...) {
                std::lock_guard lock(failure_mu);
                if (!failure) failure = std::current_exception();
                next = n;
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    return results;
}

}  // namespace

PointResult run_point(const SimConfig& cfg, double snr_db) {
    cfg.validate();
    if (!std::isfinite(snr_db)) throw std::invalid_argument("run_point: SNR must be finite");
    const PointSetup setup = make_setup(cfg, snr_db);
    const auto slots = run_slots(setup);

    PointResult p;
    p.snr_db = snr_db;
    p.curves = setup.curves;
    p.bits_per_slot = 4 * cfg.n_users * cfg.num_subcarriers * setup.data_symbols.size();
    const std::size_t nc = p.curves.size();
    p.slot_errors.assign(nc, std::vector<std::uint64_t>(slots.size()));
    p.dcd_hist.assign(nc, {});
    p.dcd_totals.assign(nc, {});
    for (std::size_t c = 0; c < nc; ++c) {
        std::uint64_t errors = 0;
        for (std::size_t i = 0; i < slots.size(); ++i) {
            p.slot_errors[c][i] = slots[i].errors[c];
            errors += slots[i].errors[c];
            p.dcd_hist[c].merge(slots[i].hist[c]);
            p.dcd_totals[c] += slots[i].totals[c];
        }
        p.ber.push_back(make_ber_record(snr_db, errors, p.bits_per_slot * slots.size()));
    }
    return p;
}

SweepResult run_sweep(const SimConfig& cfg) {
    cfg.validate();
    SweepResult out;
    for (double snr : cfg.snr_grid_db) out.points.push_back(run_point(cfg, snr));
    return out;
}

namespace {

PairedDiff summarize(const std::vector<double>& d) {
    PairedDiff out;
    const double n = static_cast<double>(d.size());
    for (double x : d) out.mean += x;
    out.mean /= n;
    if (d.size() < 2) {
        out.std_error = std::numeric_limits<double>::quiet_NaN();
        return out;
    }
    double ss = 0.0;
    for (double x : d) ss += (x - out.mean) * (x - out.mean);
    out.std_error = std::sqrt(ss / (n - 1.0) / n);
    return out;
}

void check_curve(const PointResult& p, std::size_t c) {
    if (c >= p.curves.size()) throw std::out_of_range("paired_difference: curve index out of range");
}

}  // namespace

PairedDiff paired_difference(const PointResult& p, std::size_t a, std::size_t b) {
    check_curve(p, a);
    check_curve(p, b);
    const double bits = static_cast<double>(p.bits_per_slot);
    std::vector<double> d(p.slot_errors[a].size());
    for (std::size_t i = 0; i < d.size(); ++i)
        d[i] = (static_cast<double>(p.slot_errors[a][i]) - static_cast<double>(p.slot_errors[b][i])) / bits;
    return summarize(d);
}

PairedDiff paired_difference(const PointResult& p, std::size_t a1, std::size_t b1, std::size_t a2, std::size_t b2) {
    for (std::size_t c : {a1, b1, a2, b2}) check_curve(p, c);
    const double bits = static_cast<double>(p.bits_per_slot);
    auto e = [&](std::size_t c, std::size_t i) { return static_cast<double>(p.slot_errors[c][i]); };
    std::vector<double> d(p.slot_errors[a1].size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = ((e(a1, i) - e(b1, i)) - (e(a2, i) - e(b2, i))) / bits;
    return summarize(d);
}

}  // namespace mmrx::harness
