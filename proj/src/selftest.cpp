#include "mmrx/selftest.hpp"

#include <cmath>
#include <random>

#include "mmrx/complexity.hpp"
#include "mmrx/dcd.hpp"
#include "mmrx/equalizer.hpp"
#include "mmrx/refsig.hpp"
#include "mmrx/rng.hpp"
#include "mmrx/simd/kernels.hpp"

namespace mmrx {

namespace {

SelfCheck check(std::string name, bool ok, std::string detail = {}) { return {std::move(name), ok, std::move(detail)}; }

SelfCheck gate_rows() {
    using namespace complexity;
    int consistent = 0;
    for (const auto& r : published_table()) consistent += r.consistent();
    const bool mf = calibrated(Stage::kMatchedFilter).logic_ops() == 5521600;
    return check("gate model", consistent == 5 && mf, std::to_string(consistent) + "/6 rows consistent");
}

SelfCheck scenario_totals() {
    using namespace complexity;
    const auto m = calibrated_stages(Detector::kMmse);
    const auto d = calibrated_stages(Detector::kDcd);
    const bool ok = scenario_total(m, ScenarioModel::scenario1(), Detector::kMmse) == 29547700 &&
                    scenario_total(m, ScenarioModel::scenario2(), Detector::kMmse) == 109040100 &&
                    scenario_total(d, ScenarioModel::scenario1(), Detector::kDcd) == 24810000 &&
                    scenario_total(d, ScenarioModel::scenario2(), Detector::kDcd) == 99840800;
    return check("scenario totals", ok);
}

SelfCheck gram_counts() {
    const auto g = equalizer::gram_ops(64, 8);
    const auto mf = equalizer::matched_filter_ops(64, 8);
    return check("gram and matched filter counts", g == OpCount{8128, 8192} && mf == OpCount{2032, 2048});
}

SelfCheck dcd_trace() {
    dcd::DcdProblem p;
    p.a = RMatrix::identity(2);
    p.b = {0.5, 0.25};
    p.h_step = 0.5;
    p.bound = 1.0;
    const auto res = dcd::dcd_bound(p, true);
    const auto& t = res.ledger.trace;
    const bool ok = t.size() == 2 && t[0].pass == 0 && t[0].coord == 0 && t[0].delta == 0.5 && t[1].pass == 2 &&
                    t[1].coord == 1 && t[1].delta == 0.25 && res.ledger.final_step == std::ldexp(1.0, -9) &&
                    res.ledger.multiplications == 0;
    return check("dcd trace", ok);
}

SelfCheck gold_prefix() {
    const auto c = refsig::gold_sequence({1, refsig::kGoldFastForward, 8});
    const std::vector<std::uint8_t> want{0, 0, 0, 0, 0, 0, 1, 0};
    return check("gold sequence", c == want);
}

SelfCheck simd_match() {
    const auto* avx = simd::avx2_kernels();
    if (!avx || !simd::cpu_has_avx2()) return check("simd kernels", true, "avx2 unavailable, scalar only");
    const auto& sc = simd::scalar_kernels();
    auto gen = make_stream(7, Stream::kTest, {1});
    std::normal_distribution<double> nd;
    const std::size_t n = 37;
    std::vector<cplx> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = {nd(gen), nd(gen)};
        b[i] = {nd(gen), nd(gen)};
    }
    const double err = std::abs(sc.cdot_conj(a.data(), b.data(), n) - avx->cdot_conj(a.data(), b.data(), n));
    return check("simd kernels", err < 1e-12, "max |scalar - avx2| " + std::to_string(err));
}

}  // namespace

std::vector<SelfCheck> run_selftest() {
    return {gate_rows(), scenario_totals(), gram_counts(), dcd_trace(), gold_prefix(), simd_match()};
}

}  // namespace mmrx
