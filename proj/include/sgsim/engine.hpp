#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "sgsim/ems.hpp"
#include "sgsim/gridsync.hpp"
#include "sgsim/metering.hpp"
#include "sgsim/plant.hpp"
#include "sgsim/scenario.hpp"

namespace sgsim {

// One row of the simulation trace. Sensor-style fields (soc_wh, v_batt)
// reflect start-of-tick state; flows apply over the whole tick.
struct TraceRecord {
  std::int64_t t = 0;
  Tariff tariff = Tariff::OffPeak;
  EmsMode mode = EmsMode::GridSupply;
  double load_w = 0.0;
  double pv_w = 0.0;
  double soc_wh = 0.0;
  double v_batt = 0.0;
  double grid_import_w = 0.0;
  double inv_ac_w = 0.0;
  double export_w = 0.0;
  double curtail_w = 0.0;
  double grid_freq_hz = 0.0;
  bool locked = false;
  bool lockout = false;
  std::int64_t import_pulses_cum = 0;
  std::int64_t export_pulses_cum = 0;
  std::vector<std::string> events;
};

struct RunReport {
  Bill bill;
  std::map<std::string, double> totals;  // kWh by category
  std::map<std::string, std::int64_t> event_counts;
  double peak_grid_import_w = 0.0;
  std::int64_t ticks = 0;
};

// Full per-tick observability for tests and streaming consumers.
struct TickSample {
  const TraceRecord& record;
  const PowerFlows& flows;
  BatteryState battery_before;
  BatteryState battery_after;
};

using TickObserver = std::function<void(const TickSample&)>;

// The deterministic tick loop. Validates the scenario, then for each tick:
// profiles -> tariff -> battery voltage -> controller -> phase advance and
// lock attempt -> dispatch -> meter accumulate. The observer (may be null)
// sees every tick; nothing is retained here, so arbitrarily long runs
// stream in constant memory. Contract trips abort with
// InternalInvariantError carrying the tick time.
RunReport run_simulation(const Scenario& scenario, const TickObserver& observer);

struct SimulationResult {
  std::vector<TraceRecord> trace;
  RunReport report;
};

// Convenience wrapper keeping the whole trace in memory (desk-scale runs).
SimulationResult simulate(const Scenario& scenario);

// Streaming CSV writer: header on construction, one row per write().
class TraceCsvWriter {
 public:
  explicit TraceCsvWriter(std::ostream& os);
  void write(const TraceRecord& r);

 private:
  std::ostream& os_;
};

// CSV trace: fixed header, floats with 6 decimal places, events
// semicolon-joined. Throws std::ios_base::failure on sink failure.
void emit_trace(const std::vector<TraceRecord>& records, std::ostream& os);

// JSON report mirroring RunReport field names, deterministic key order.
void emit_report(const RunReport& report, std::ostream& os);

}  // namespace sgsim
