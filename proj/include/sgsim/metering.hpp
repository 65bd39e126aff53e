#pragma once

#include <cstdint>

#include "sgsim/scenario.hpp"

namespace sgsim {

// Exact per-tariff energy ledgers in kWh, one per direction x tariff.
struct EnergyLedger {
  double import_peak_kwh = 0.0;
  double import_offpeak_kwh = 0.0;
  double export_peak_kwh = 0.0;
  double export_offpeak_kwh = 0.0;
  bool operator==(const EnergyLedger&) const = default;
};

// Bidirectional pulse meter. Pulses are the quantized observable the
// prototype's controller counts; the ledger keeps the exact integral so
// billing does not inherit quantization error. Residuals stay in
// [0, wh_per_pulse).
struct MeterState {
  std::int64_t import_pulses = 0;
  std::int64_t export_pulses = 0;
  double import_residual_wh = 0.0;
  double export_residual_wh = 0.0;
  EnergyLedger ledger;
  bool operator==(const MeterState&) const = default;
};

struct Bill {
  double import_peak_kwh = 0.0;
  double import_offpeak_kwh = 0.0;
  double export_kwh = 0.0;
  double charge_peak = 0.0;
  double charge_offpeak = 0.0;
  double credit_sellback = 0.0;
  double total = 0.0;  // charge_peak + charge_offpeak - credit_sellback
  bool operator==(const Bill&) const = default;
};

struct AccumulateResult {
  MeterState state;
  std::int64_t new_import_pulses = 0;
  std::int64_t new_export_pulses = 0;
};

// Integrates one tick of energy in each direction, emits whole pulses and
// keeps the remainder, and grows the matching ledger entry.
AccumulateResult accumulate(MeterState state, double grid_import_w, double export_w,
                            Tariff tariff, double dt_s, const EngineParams& engine);

// Prices the exact ledgers: peak and off-peak import charges minus the
// flat sell-back credit.
Bill compute_bill(const MeterState& state, const EngineParams& engine);

}  // namespace sgsim
