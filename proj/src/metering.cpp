#include "sgsim/metering.hpp"

#include <cmath>

namespace sgsim {

namespace {

std::int64_t advance_direction(double power_w, double dt_s, double wh_per_pulse, Tariff tariff,
                               std::int64_t& pulses, double& residual_wh, double& peak_kwh,
                               double& offpeak_kwh) {
  const double energy_wh = power_w * dt_s / 3600.0;
  residual_wh += energy_wh;
  std::int64_t emitted = 0;
  if (residual_wh >= wh_per_pulse) {
    emitted = static_cast<std::int64_t>(std::floor(residual_wh / wh_per_pulse));
    residual_wh -= static_cast<double>(emitted) * wh_per_pulse;
    if (residual_wh < 0.0) residual_wh = 0.0;  // float guard at the quantum boundary
    pulses += emitted;
  }
  (tariff == Tariff::Peak ? peak_kwh : offpeak_kwh) += energy_wh / 1000.0;
  return emitted;
}

}  // namespace

AccumulateResult accumulate(MeterState state, double grid_import_w, double export_w,
                            Tariff tariff, double dt_s, const EngineParams& engine) {
  AccumulateResult out;
  out.new_import_pulses = advance_direction(
      grid_import_w, dt_s, engine.meter_wh_per_pulse, tariff, state.import_pulses,
      state.import_residual_wh, state.ledger.import_peak_kwh, state.ledger.import_offpeak_kwh);
  out.new_export_pulses = advance_direction(
      export_w, dt_s, engine.meter_wh_per_pulse, tariff, state.export_pulses,
      state.export_residual_wh, state.ledger.export_peak_kwh, state.ledger.export_offpeak_kwh);
  out.state = state;
  return out;
}

Bill compute_bill(const MeterState& state, const EngineParams& engine) {
  Bill bill;
  bill.import_peak_kwh = state.ledger.import_peak_kwh;
  bill.import_offpeak_kwh = state.ledger.import_offpeak_kwh;
  bill.export_kwh = state.ledger.export_peak_kwh + state.ledger.export_offpeak_kwh;
  bill.charge_peak = bill.import_peak_kwh * engine.price_peak;
  bill.charge_offpeak = bill.import_offpeak_kwh * engine.price_offpeak;
  bill.credit_sellback = bill.export_kwh * engine.price_sellback;
  bill.total = bill.charge_peak + bill.charge_offpeak - bill.credit_sellback;
  return bill;
}

}  // namespace sgsim
