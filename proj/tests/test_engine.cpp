#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "sgsim/engine.hpp"
#include "sgsim/errors.hpp"
#include "support/random_scenario.hpp"

using namespace sgsim;
using doctest::Approx;

namespace {

Scenario base_scenario(std::int64_t duration_s) {
  Scenario s;
  s.load_profile = {{0, 0.0}};
  s.irradiance_profile = {{0, 0.0}};
  s.grid_freq_profile = {{0, 50.0}};
  s.engine.duration_s = duration_s;
  return s;
}

struct ParsedCsv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

ParsedCsv parse_csv(const std::string& text) {
  ParsedCsv out;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (line.empty()) continue;
    if (first) {
      out.header = cells;
      first = false;
    } else {
      out.rows.push_back(cells);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("null scenario: ten quiet ticks, zero bill") {
  Scenario s = base_scenario(10);
  const auto result = simulate(s);
  CHECK(result.trace.size() == 10);
  for (const auto& r : result.trace) {
    REQUIRE(r.load_w == 0.0);
    REQUIRE(r.pv_w == 0.0);
    REQUIRE(r.grid_import_w == 0.0);
    REQUIRE(r.inv_ac_w == 0.0);
    REQUIRE(r.export_w == 0.0);
    REQUIRE(r.curtail_w == 0.0);
  }
  CHECK(result.report.bill.total == 0.0);
  CHECK(result.report.ticks == 10);
}

TEST_CASE("constant off-peak load on a dead battery imports from the grid") {
  Scenario s = base_scenario(3600);
  s.load_profile = {{0, 100.0}};
  s.plant.battery_initial_soc_wh = 0.0;  // 11.0 V, below the 12 V cutoff

  const auto result = simulate(s);
  for (const auto& r : result.trace) {
    REQUIRE(r.mode == EmsMode::GridSupply);
    REQUIRE(r.grid_import_w == Approx(100.0));
    REQUIRE(r.inv_ac_w == 0.0);
  }
  CHECK(result.report.bill.import_offpeak_kwh == Approx(0.1).epsilon(1e-9));
  CHECK(result.report.bill.total == Approx(0.6).epsilon(1e-9));  // 0.1 kWh at 6/kWh
  CHECK(result.report.event_counts.count("BatteryLowInhibit") == 1);
}

TEST_CASE("overload shorter than the grace window beeps but never disconnects") {
  // peak all day, healthy battery, load 150 -> 210 (3 s) -> 150
  Scenario s = base_scenario(60);
  s.tariff.peak_windows = {{0, 86400}};
  s.plant.battery_initial_soc_wh = 60.0;  // ~12.43 V
  s.load_profile = {{0, 150.0}, {20, 210.0}, {23, 150.0}};

  const auto result = simulate(s);
  CHECK(result.report.event_counts.at("Beep") == 3);
  CHECK(result.report.event_counts.count("Disconnect") == 0);
  for (const auto& r : result.trace) {
    REQUIRE(r.mode == EmsMode::InverterLocal);
  }
}

TEST_CASE("emit_trace: header, row count, and re-parse fidelity") {
  SUBCASE("no records emits the header only") {
    std::ostringstream os;
    emit_trace({}, os);
    const auto csv = parse_csv(os.str());
    CHECK(csv.header.size() == 17);
    CHECK(csv.header.front() == "t");
    CHECK(csv.header.back() == "events");
    CHECK(csv.rows.empty());
  }
  SUBCASE("one record emits two lines") {
    std::ostringstream os;
    emit_trace({TraceRecord{}}, os);
    std::istringstream in(os.str());
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) ++lines;
    CHECK(lines == 2);
  }
  SUBCASE("numeric fields survive a round trip to 1e-6") {
    Scenario s = base_scenario(120);
    s.load_profile = {{0, 123.456789}, {60, 87.3}};
    s.irradiance_profile = {{0, 0.37}};
    s.grid_freq_profile = {{0, 50.1}};
    const auto result = simulate(s);

    std::ostringstream os;
    emit_trace(result.trace, os);
    const auto csv = parse_csv(os.str());
    REQUIRE(csv.rows.size() == result.trace.size());
    for (std::size_t i = 0; i < csv.rows.size(); ++i) {
      const auto& row = csv.rows[i];
      const auto& rec = result.trace[i];
      REQUIRE(std::stoll(row[0]) == rec.t);
      REQUIRE(row[1] == to_string(rec.tariff));
      REQUIRE(row[2] == to_string(rec.mode));
      REQUIRE(std::abs(std::stod(row[3]) - rec.load_w) <= 1e-6);
      REQUIRE(std::abs(std::stod(row[4]) - rec.pv_w) <= 1e-6);
      REQUIRE(std::abs(std::stod(row[5]) - rec.soc_wh) <= 1e-6);
      REQUIRE(std::abs(std::stod(row[6]) - rec.v_batt) <= 1e-6);
      REQUIRE(std::abs(std::stod(row[7]) - rec.grid_import_w) <= 1e-6);
      REQUIRE(std::abs(std::stod(row[8]) - rec.inv_ac_w) <= 1e-6);
      REQUIRE(std::abs(std::stod(row[9]) - rec.export_w) <= 1e-6);
      REQUIRE(std::abs(std::stod(row[10]) - rec.curtail_w) <= 1e-6);
      REQUIRE(std::abs(std::stod(row[11]) - rec.grid_freq_hz) <= 1e-6);
      REQUIRE(std::stoi(row[12]) == (rec.locked ? 1 : 0));
      REQUIRE(std::stoi(row[13]) == (rec.lockout ? 1 : 0));
      REQUIRE(std::stoll(row[14]) == rec.import_pulses_cum);
      REQUIRE(std::stoll(row[15]) == rec.export_pulses_cum);
    }
  }
}

TEST_CASE("emit_report: zero report and totals consistent with the trace") {
  SUBCASE("null scenario reports zeros") {
    const auto result = simulate(base_scenario(10));
    std::ostringstream os;
    emit_report(result.report, os);
    const std::string text = os.str();
    CHECK(text.find("\"total\": 0.0") != std::string::npos);
    CHECK(text.find("\"ticks\": 10") != std::string::npos);
  }
  SUBCASE("totals match sums recomputed from the emitted trace") {
    const Scenario s = sgsim::test::random_scenario(123);
    const auto result = simulate(s);

    std::ostringstream os;
    emit_trace(result.trace, os);
    const auto csv = parse_csv(os.str());

    const double dt = static_cast<double>(s.engine.dt_s);
    double pv = 0, grid = 0, exp = 0, curtail = 0, inv_ac = 0;
    for (const auto& row : csv.rows) {
      pv += std::stod(row[4]) * dt;
      grid += std::stod(row[7]) * dt;
      inv_ac += std::stod(row[8]) * dt;
      exp += std::stod(row[9]) * dt;
      curtail += std::stod(row[10]) * dt;
    }
    const double to_kwh = 1.0 / 3.6e6;
    // CSV carries 6 decimals; stay within the print quantization
    const double tol = 1e-5;
    CHECK(std::abs(result.report.totals.at("pv_kwh") - pv * to_kwh) <= tol);
    CHECK(std::abs(result.report.totals.at("grid_import_kwh") - grid * to_kwh) <= tol);
    CHECK(std::abs(result.report.totals.at("inv_ac_kwh") - inv_ac * to_kwh) <= tol);
    CHECK(std::abs(result.report.totals.at("export_kwh") - exp * to_kwh) <= tol);
    CHECK(std::abs(result.report.totals.at("curtail_kwh") - curtail * to_kwh) <= tol);
  }
  SUBCASE("storyline beep count lands in event_counts") {
    Scenario s = base_scenario(60);
    s.tariff.peak_windows = {{0, 86400}};
    s.plant.battery_initial_soc_wh = 60.0;
    s.load_profile = {{0, 150.0}, {20, 210.0}, {23, 150.0}};
    const auto result = simulate(s);
    std::ostringstream os;
    emit_report(result.report, os);
    CHECK(os.str().find("\"Beep\": 3") != std::string::npos);
  }
}

TEST_CASE("report totals agree with in-memory trace sums") {
  const Scenario s = sgsim::test::random_scenario(321);
  const auto result = simulate(s);
  const double dt = static_cast<double>(s.engine.dt_s);
  double pv = 0, grid = 0, exp = 0, curtail = 0, inv_ac = 0;
  for (const auto& r : result.trace) {
    pv += r.pv_w * dt;
    grid += r.grid_import_w * dt;
    inv_ac += r.inv_ac_w * dt;
    exp += r.export_w * dt;
    curtail += r.curtail_w * dt;
  }
  const double to_kwh = 1.0 / 3.6e6;
  CHECK(std::abs(result.report.totals.at("pv_kwh") - pv * to_kwh) <= 1e-9);
  CHECK(std::abs(result.report.totals.at("grid_import_kwh") - grid * to_kwh) <= 1e-9);
  CHECK(std::abs(result.report.totals.at("inv_ac_kwh") - inv_ac * to_kwh) <= 1e-9);
  CHECK(std::abs(result.report.totals.at("export_kwh") - exp * to_kwh) <= 1e-9);
  CHECK(std::abs(result.report.totals.at("curtail_kwh") - curtail * to_kwh) <= 1e-9);
}

TEST_CASE("simulate propagates validation failures") {
  Scenario s = base_scenario(10);
  s.load_profile.clear();
  CHECK_THROWS_AS(simulate(s), ValidationError);

  Scenario s2 = base_scenario(10);
  s2.plant.battery_initial_soc_wh = 1000.0;
  CHECK_THROWS_AS(simulate(s2), ValidationError);
}

TEST_CASE("determinism: identical scenarios produce byte-identical outputs") {
  const std::string doc = emit_scenario(sgsim::test::random_scenario(2718));

  auto run = [&doc] {
    const Scenario s = load_scenario(doc);
    const auto result = simulate(s);
    std::ostringstream trace_os, report_os;
    emit_trace(result.trace, trace_os);
    emit_report(result.report, report_os);
    return std::pair{trace_os.str(), report_os.str()};
  };
  const auto a = run();
  const auto b = run();
  CHECK(a.first == b.first);
  CHECK(a.second == b.second);
}

TEST_CASE("whole-run energy conservation assembled from the bus balances") {
  for (std::uint64_t seed = 1000; seed < 1010; ++seed) {
    const Scenario s = sgsim::test::random_scenario(seed);
    const double dt = static_cast<double>(s.engine.dt_s);
    const double eta = s.plant.inverter_efficiency;

    long double lhs_wh = 0.0L, rhs_wh = 0.0L;
    double soc_first = 0.0, soc_last = 0.0;
    bool first = true;
    run_simulation(s, [&](const TickSample& sample) {
      if (first) {
        soc_first = sample.battery_before.soc_wh;
        first = false;
      }
      soc_last = sample.battery_after.soc_wh;
      const PowerFlows& f = sample.flows;
      lhs_wh += static_cast<long double>((f.pv_w + f.grid_import_w) * dt / 3600.0);
      rhs_wh += static_cast<long double>(
          (f.served_load_w + f.export_w + f.curtail_w + (1.0 - eta) * f.inv_dc_w) * dt / 3600.0);
    });
    const double delta_soc = soc_last - soc_first;
    const double residual = static_cast<double>(lhs_wh - rhs_wh) - delta_soc;
    REQUIRE(std::abs(residual) <= 1e-6);
  }
}

TEST_CASE("events in the trace respect the cross-module gates") {
  for (std::uint64_t seed = 400; seed < 430; ++seed) {
    const Scenario s = sgsim::test::random_scenario(seed);
    const auto result = simulate(s);
    const std::int64_t grace_ticks =
        (s.engine.shed_grace_s + s.engine.dt_s - 1) / s.engine.dt_s;

    for (std::size_t i = 0; i < result.trace.size(); ++i) {
      const auto& r = result.trace[i];
      if (r.export_w > 0.0) {
        REQUIRE(r.locked);
        REQUIRE(r.tariff == Tariff::OffPeak);
      }
      if (r.inv_ac_w > 0.0) {
        REQUIRE(r.v_batt >= s.plant.inverter_cutoff_v);
      }
      // a held lock implies the grid frequency is inside tolerance
      if (r.locked) {
        REQUIRE(std::abs(r.grid_freq_hz - s.plant.ac_nominal_hz) <= s.engine.freq_tolerance_hz);
      }
      REQUIRE_FALSE((r.locked && r.lockout));
      for (const auto& name : r.events) {
        if (name == "Disconnect") {
          // the ceil(grace/dt) ticks up to and including this one all beeped
          REQUIRE(i + 1 >= static_cast<std::size_t>(grace_ticks));
          for (std::int64_t k = 0; k < grace_ticks; ++k) {
            const auto& prev = result.trace[i - static_cast<std::size_t>(k)];
            bool beeped = false;
            for (const auto& n : prev.events) beeped |= (n == "Beep");
            REQUIRE(beeped);
          }
        }
      }
    }
  }
}
