#pragma once

#include "sgsim/ems.hpp"
#include "sgsim/scenario.hpp"

namespace sgsim {

struct BatteryState {
  double soc_wh = 0.0;
  bool operator==(const BatteryState&) const = default;
};

// Per-tick power flows on the DC and AC buses. All watts, all >= 0.
// Invariants (see check_flow_invariants):
//   DC bus:  pv_w + batt_discharge_w == inv_dc_w + batt_charge_w + curtail_w
//   AC bus:  grid_import_w + inv_ac_w == served_load_w + export_w
//   inv_ac_w == inverter_efficiency * inv_dc_w
//   batt_charge_w and batt_discharge_w never both nonzero
struct PowerFlows {
  double pv_w = 0.0;
  double grid_import_w = 0.0;
  double inv_ac_w = 0.0;
  double inv_dc_w = 0.0;
  double batt_charge_w = 0.0;
  double batt_discharge_w = 0.0;
  double export_w = 0.0;
  double curtail_w = 0.0;
  double served_load_w = 0.0;
  bool operator==(const PowerFlows&) const = default;
};

// Linear PV model: irradiance fraction times the panel rating.
double pv_power(double irradiance, const PlantParams& params);

// Linear SoC -> terminal voltage map, monotone in soc_wh. The default
// parameters put the 12 V inverter cutoff at 50% state of charge.
double battery_voltage(const BatteryState& state, const PlantParams& params);

struct BatteryStepResult {
  BatteryState state;
  double delivered_discharge_w = 0.0;
};

// Integrates one tick of charging or discharging. A discharge request that
// would take the battery below empty is clipped; the power actually
// delivered is returned so the caller can cover the shortfall within the
// same tick. Charging beyond capacity is clamped.
// Throws ContractViolation if both charge and discharge are positive or a
// rate limit is exceeded.
BatteryStepResult battery_step(const BatteryState& state, double charge_w, double discharge_w,
                               double dt_s, const PlantParams& params);

// DC -> AC conversion: efficiency scaling, capped at the inverter rating.
double inverter_convert(double dc_w, const PlantParams& params);

struct DispatchResult {
  PowerFlows flows;
  BatteryState battery;
};

// Deterministic per-tick dispatch for the controller's mode decision.
// DC-bus priority: PV -> inverter demand -> battery charge -> curtail.
// The battery charges from PV only and discharges only to cover inverter
// shortfall. Export happens only in GridTieExport with the sync locked,
// from PV surplus left after load and charging, up to inverter headroom.
// Throws ContractViolation if a PowerFlows invariant would be violated.
DispatchResult dispatch(double load_w, double pv_w, EmsMode mode, bool sync_locked,
                        const BatteryState& state, const PlantParams& params,
                        const EngineParams& engine, double dt_s);

// Bus balances to 1e-9 W, efficiency coupling, non-negativity, and
// charge/discharge exclusivity. Throws ContractViolation on failure.
void check_flow_invariants(const PowerFlows& f, const PlantParams& params);

}  // namespace sgsim
