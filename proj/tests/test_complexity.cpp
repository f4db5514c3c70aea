#include "doctest.h"
#include "mmrx/complexity.hpp"

using namespace mmrx;
using namespace mmrx::complexity;

TEST_CASE("gate cost") {
    CHECK(gate_cost(0, 0) == 0);
    CHECK(gate_cost(2000, 0) == 250000);
    CHECK(gate_cost(8128, 8192) == 19038400);
    CHECK(gate_cost(16, 0) == 2000);
    CHECK(gate_cost(1700, 1900) == 4392500);
    CHECK(gate_cost(240, 256) == 593200);
    CHECK(gate_cost(2032, 2048) == 4759600);
}

TEST_CASE("published table and calibration") {
    const auto& t = published_table();
    REQUIRE(t.size() == 6);
    int consistent = 0;
    for (const auto& r : t) {
        consistent += r.consistent();
        CHECK(calibrated(r.stage).logic_ops() == r.printed_logic);
    }
    CHECK(consistent == 5);
    const auto& mf = published_row(Stage::kMatchedFilter);
    CHECK_FALSE(mf.consistent());
    CHECK(mf.printed_logic == 5521600);
    CHECK(mf.model_logic() == 4759600);
    CHECK(calibrated(Stage::kMatchedFilter).adds == 8128);
    CHECK(calibrated(Stage::kMatchedFilter).mults == 2048);
    CHECK(calibrated(Stage::kGram).adds == 8128);
}

TEST_CASE("scenario totals") {
    const auto m = calibrated_stages(Detector::kMmse);
    const auto d = calibrated_stages(Detector::kDcd);
    CHECK(scenario_total(m, ScenarioModel::scenario1(), Detector::kMmse) == 29547700);
    CHECK(scenario_total(m, ScenarioModel::scenario2(), Detector::kMmse) == 109040100);
    CHECK(scenario_total(d, ScenarioModel::scenario1(), Detector::kDcd) == 24810000);
    CHECK(scenario_total(d, ScenarioModel::scenario2(), Detector::kDcd) == 99840800);

    // Scenario 2 = one-time stages + 14 x per-symbol stages.
    for (Detector det : {Detector::kMmse, Detector::kDcd}) {
        std::uint64_t once = 0, per = 0;
        for (const auto& s : calibrated_stages(det)) (is_per_symbol(s.stage) ? per : once) += s.logic_ops();
        CHECK(scenario_total(calibrated_stages(det), ScenarioModel::scenario2(), det) == once + 14 * per);
        CHECK(scenario_total(calibrated_stages(det), ScenarioModel::scenario1(), det) == once + per);
    }

    CHECK_THROWS_AS(scenario_total(m, ScenarioModel::scenario1(), Detector::kDcd), std::invalid_argument);
    auto dup = d;
    dup[2].stage = Stage::kGram;
    CHECK_THROWS_AS(scenario_total(dup, ScenarioModel::scenario1(), Detector::kDcd), std::invalid_argument);
    CHECK_THROWS_AS(scenario_total(d, ScenarioModel{3, 0}, Detector::kDcd), std::invalid_argument);
}

TEST_CASE("ledger additivity") {
    OpCountLedger a{Stage::kGram, 10, 3}, b{Stage::kGram, 5, 7};
    const auto la = a.logic_ops(), lb = b.logic_ops();
    a += b;
    CHECK(a.adds == 15);
    CHECK(a.mults == 10);
    CHECK(a.logic_ops() == la + lb);
}

TEST_CASE("addition histogram") {
    using H = AdditionHistogram;
    H h;
    h.add(2000);
    std::size_t nonzero = 0, bin = 0;
    for (std::size_t i = 0; i < H::kBins; ++i)
        if (h.counts()[i]) {
            ++nonzero;
            bin = i;
        }
    CHECK(nonzero == 1);
    CHECK(h.left_edge(bin) <= 2000.0);
    CHECK(h.left_edge(bin) + 200.0 / 3.0 > 2000.0);
    CHECK(h.mean() == 2000.0);

    H two;
    two.add(1900);
    two.add(2100);
    CHECK(two.mean() == 2000.0);
    CHECK(two.min() == 1900);
    CHECK(two.max() == 2100);

    H edges;
    edges.add(1040);
    edges.add(3040);
    edges.add(1039);
    edges.add(3041);
    CHECK(edges.counts()[0] == 1);
    CHECK(edges.counts()[H::kBins - 1] == 1);
    CHECK(edges.underflow() == 1);
    CHECK(edges.overflow() == 1);
    CHECK(edges.samples() == 4);
    CHECK(edges.left_edge(0) == 1040.0);
    CHECK(edges.left_edge(3) == 1240.0);
    CHECK_THROWS_AS(edges.left_edge(H::kBins), std::out_of_range);

    H merged = h;
    merged.merge(edges);
    CHECK(merged.samples() == 5);
    CHECK(merged.min() == 1039);
    CHECK(merged.max() == 3041);

    std::vector<dcd::DcdLedger> ledgers(2);
    ledgers[0].additions = 1800;
    ledgers[0].comparisons = 100;
    ledgers[1].additions = 2000;
    ledgers[1].comparisons = 100;
    CHECK(dcd_addition_histogram(ledgers).mean() == 2000.0);
    CHECK_THROWS_AS(dcd_addition_histogram(std::vector<dcd::DcdLedger>{}), std::invalid_argument);
}

TEST_CASE("report") {
    auto measured = measure_kernels(64, 8, 1);
    CHECK(measured.gram == OpCount{8128, 8192});
    CHECK(measured.matched_filter == OpCount{2032, 2048});
    CHECK(measured.inverse.mults > 0);
    const auto without_dcd = build_report(measured);
    CHECK_FALSE(without_dcd.measured_totals[1][0].has_value());
    measured.dcd_mean_additions = 1972.0;
    const auto rep = build_report(measured);
    CHECK(rep.calibrated_totals[0][0] == 29547700);
    CHECK(rep.calibrated_totals[1][1] == 99840800);
    REQUIRE(rep.measured_totals[1][0].has_value());
    CHECK(*rep.measured_totals[1][0] == 19038400 + 4759600 + 1972 * 125);
    bool flagged = false;
    for (const auto& r : rep.calibrated_rows) flagged = flagged || (r.stage == Stage::kMatchedFilter && !r.note.empty());
    CHECK(flagged);
    bool noted = false;
    for (const auto& n : rep.notes) noted = noted || n.find("4759600") != std::string::npos;
    CHECK(noted);
}
