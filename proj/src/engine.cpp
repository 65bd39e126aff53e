#include "sgsim/engine.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <ostream>

#include "json.hpp"
#include "sgsim/errors.hpp"

namespace sgsim {

namespace {

constexpr const char* kTraceHeader =
    "t,tariff,mode,load_w,pv_w,soc_wh,v_batt,grid_import_w,inv_ac_w,export_w,curtail_w,"
    "grid_freq_hz,locked,lockout,import_pulses_cum,export_pulses_cum,events";

void append_event_names(std::vector<std::string>& out, const std::vector<EmsEvent>& events) {
  for (const auto& ev : events) out.emplace_back(to_string(ev.kind));
}

}  // namespace

RunReport run_simulation(const Scenario& scenario, const TickObserver& observer) {
  validate_scenario(scenario);

  const EngineParams& eng = scenario.engine;
  const PlantParams& plant = scenario.plant;
  const double dt = static_cast<double>(eng.dt_s);

  BatteryState battery{plant.battery_initial_soc_wh};
  EmsState ems;
  SyncState sync;
  MeterState meter;

  RunReport report;
  // watt-second accumulators, converted to kWh at the end
  double pv_ws = 0, grid_ws = 0, served_ws = 0, export_ws = 0, curtail_ws = 0;
  double inv_ac_ws = 0, inv_dc_ws = 0, charge_ws = 0, discharge_ws = 0;

  for (std::int64_t t = 0; t < eng.duration_s; t += eng.dt_s) {
    const double load_w = profile_at(scenario.load_profile, t);
    const double irradiance = profile_at(scenario.irradiance_profile, t);
    const double freq_hz = profile_at(scenario.grid_freq_profile, t);
    const Tariff tariff = tariff_at(scenario.tariff, t);

    const double pv_w = pv_power(irradiance, plant);
    const double v_batt = battery_voltage(battery, plant);

    auto ctl = controller_tick(t, ems, tariff, v_batt, pv_w, load_w, plant, eng);
    ems = ctl.state;

    sync.grid_freq_hz = freq_hz;
    sync = phase_advance(sync, dt, plant);
    auto lock = try_lock(t, sync, eng, plant);
    sync = lock.state;

    DispatchResult d;
    try {
      d = dispatch(load_w, pv_w, ctl.mode, sync.locked, battery, plant, eng, dt);
    } catch (const ContractViolation& e) {
      throw InternalInvariantError(t, e.what());
    }

    auto metered = accumulate(meter, d.flows.grid_import_w, d.flows.export_w, tariff, dt, eng);
    meter = metered.state;

    TraceRecord rec;
    rec.t = t;
    rec.tariff = tariff;
    rec.mode = ctl.mode;
    rec.load_w = load_w;
    rec.pv_w = pv_w;
    rec.soc_wh = battery.soc_wh;  // start-of-tick state
    rec.v_batt = v_batt;
    rec.grid_import_w = d.flows.grid_import_w;
    rec.inv_ac_w = d.flows.inv_ac_w;
    rec.export_w = d.flows.export_w;
    rec.curtail_w = d.flows.curtail_w;
    rec.grid_freq_hz = freq_hz;
    rec.locked = sync.locked;
    rec.lockout = sync.lockout;
    rec.import_pulses_cum = meter.import_pulses;
    rec.export_pulses_cum = meter.export_pulses;
    append_event_names(rec.events, ctl.events);
    append_event_names(rec.events, lock.events);

    pv_ws += d.flows.pv_w * dt;
    grid_ws += d.flows.grid_import_w * dt;
    served_ws += d.flows.served_load_w * dt;
    export_ws += d.flows.export_w * dt;
    curtail_ws += d.flows.curtail_w * dt;
    inv_ac_ws += d.flows.inv_ac_w * dt;
    inv_dc_ws += d.flows.inv_dc_w * dt;
    charge_ws += d.flows.batt_charge_w * dt;
    discharge_ws += d.flows.batt_discharge_w * dt;
    report.peak_grid_import_w = std::max(report.peak_grid_import_w, d.flows.grid_import_w);
    for (const auto& name : rec.events) report.event_counts[name] += 1;
    report.ticks += 1;

    if (observer) observer(TickSample{rec, d.flows, battery, d.battery});
    battery = d.battery;
  }

  report.bill = compute_bill(meter, eng);
  const double ws_to_kwh = 1.0 / 3.6e6;
  report.totals["pv_kwh"] = pv_ws * ws_to_kwh;
  report.totals["grid_import_kwh"] = grid_ws * ws_to_kwh;
  report.totals["served_load_kwh"] = served_ws * ws_to_kwh;
  report.totals["export_kwh"] = export_ws * ws_to_kwh;
  report.totals["curtail_kwh"] = curtail_ws * ws_to_kwh;
  report.totals["inv_ac_kwh"] = inv_ac_ws * ws_to_kwh;
  report.totals["inv_dc_kwh"] = inv_dc_ws * ws_to_kwh;
  report.totals["batt_charge_kwh"] = charge_ws * ws_to_kwh;
  report.totals["batt_discharge_kwh"] = discharge_ws * ws_to_kwh;
  return report;
}

SimulationResult simulate(const Scenario& scenario) {
  SimulationResult result;
  result.report = run_simulation(
      scenario, [&](const TickSample& s) { result.trace.push_back(s.record); });
  return result;
}

TraceCsvWriter::TraceCsvWriter(std::ostream& os) : os_(os) {
  os_ << kTraceHeader << '\n';
}

void TraceCsvWriter::write(const TraceRecord& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "%" PRId64 ",%s,%s,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%d,%d,%" PRId64
                ",%" PRId64 ",",
                r.t, to_string(r.tariff), to_string(r.mode), r.load_w, r.pv_w, r.soc_wh, r.v_batt,
                r.grid_import_w, r.inv_ac_w, r.export_w, r.curtail_w, r.grid_freq_hz,
                r.locked ? 1 : 0, r.lockout ? 1 : 0, r.import_pulses_cum, r.export_pulses_cum);
  os_ << buf;
  for (std::size_t i = 0; i < r.events.size(); ++i) {
    if (i > 0) os_ << ';';
    os_ << r.events[i];
  }
  os_ << '\n';
}

void emit_trace(const std::vector<TraceRecord>& records, std::ostream& os) {
  TraceCsvWriter writer(os);
  for (const auto& r : records) writer.write(r);
  os.flush();
  if (!os) throw std::ios_base::failure("trace emission failed");
}

void emit_report(const RunReport& report, std::ostream& os) {
  nlohmann::json j;
  j["bill"] = {{"import_peak_kwh", report.bill.import_peak_kwh},
               {"import_offpeak_kwh", report.bill.import_offpeak_kwh},
               {"export_kwh", report.bill.export_kwh},
               {"charge_peak", report.bill.charge_peak},
               {"charge_offpeak", report.bill.charge_offpeak},
               {"credit_sellback", report.bill.credit_sellback},
               {"total", report.bill.total}};
  j["totals"] = report.totals;
  j["event_counts"] = report.event_counts;
  j["peak_grid_import_w"] = report.peak_grid_import_w;
  j["ticks"] = report.ticks;
  os << j.dump(2) << '\n';
  os.flush();
  if (!os) throw std::ios_base::failure("report emission failed");
}

}  // namespace sgsim
