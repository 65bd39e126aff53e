#include "sgsim/plant.hpp"

#include <algorithm>
#include <cmath>

#include "sgsim/errors.hpp"

namespace sgsim {

namespace {

constexpr double kBalanceTolW = 1e-9;

double min3(double a, double b, double c) {
  return std::min(a, std::min(b, c));
}

}  // namespace

double pv_power(double irradiance, const PlantParams& params) {
  return irradiance * params.pv_rated_w;
}

double battery_voltage(const BatteryState& state, const PlantParams& params) {
  return params.battery_v_empty + (params.battery_v_full - params.battery_v_empty) *
                                      (state.soc_wh / params.battery_capacity_wh);
}

BatteryStepResult battery_step(const BatteryState& state, double charge_w, double discharge_w,
                               double dt_s, const PlantParams& params) {
  if (charge_w < 0.0 || discharge_w < 0.0) {
    throw ContractViolation("battery_step: negative power request");
  }
  if (charge_w > 0.0 && discharge_w > 0.0) {
    throw ContractViolation("battery_step: simultaneous charge and discharge");
  }
  if (charge_w > params.max_charge_w || discharge_w > params.max_discharge_w) {
    throw ContractViolation("battery_step: rate limit exceeded");
  }

  double delivered_w = discharge_w;
  double soc = state.soc_wh + (charge_w - discharge_w) * dt_s / 3600.0;
  if (soc < 0.0) {
    // Not enough stored energy; deliver what the battery actually held.
    delivered_w = state.soc_wh * 3600.0 / dt_s;
    soc = 0.0;
  }
  soc = std::min(soc, params.battery_capacity_wh);
  return {BatteryState{soc}, delivered_w};
}

double inverter_convert(double dc_w, const PlantParams& params) {
  return std::min(params.inverter_efficiency * dc_w, params.inverter_max_ac_w);
}

DispatchResult dispatch(double load_w, double pv_w, EmsMode mode, bool sync_locked,
                        const BatteryState& state, const PlantParams& params,
                        const EngineParams& /*engine*/, double dt_s) {
  if (load_w < 0.0 || pv_w < 0.0 || dt_s <= 0.0) {
    throw ContractViolation("dispatch: invalid input");
  }

  PowerFlows f;
  f.pv_w = pv_w;
  BatteryState batt = state;
  const double eta = params.inverter_efficiency;
  const double charge_headroom_w =
      std::max(0.0, (params.battery_capacity_wh - batt.soc_wh) * 3600.0 / dt_s);

  switch (mode) {
    case EmsMode::GridSupply:
    case EmsMode::Shed: {
      if (mode == EmsMode::GridSupply) {
        f.served_load_w = load_w;
        f.grid_import_w = load_w;
      }
      // PV charges the battery, remainder curtailed; no inverter output.
      f.batt_charge_w = min3(pv_w, params.max_charge_w, charge_headroom_w);
      f.curtail_w = pv_w - f.batt_charge_w;
      batt = battery_step(batt, f.batt_charge_w, 0.0, dt_s, params).state;
      break;
    }
    case EmsMode::InverterLocal:
    case EmsMode::GridTieExport: {
      const double ac_target_w = std::min(load_w, params.inverter_max_ac_w);
      const double dc_needed_w = ac_target_w / eta;
      const double pv_to_inv_w = std::min(pv_w, dc_needed_w);
      const double discharge_req_w = std::min(dc_needed_w - pv_to_inv_w, params.max_discharge_w);
      const double pv_surplus_w = pv_w - pv_to_inv_w;
      const double charge_w = min3(pv_surplus_w, params.max_charge_w, charge_headroom_w);

      double export_dc_w = 0.0;
      if (mode == EmsMode::GridTieExport && sync_locked) {
        // PV left after load and charging goes out through the inverter,
        // bounded by its remaining DC headroom. Export never draws on the
        // battery, so discharge_req_w > 0 implies no surplus to export.
        const double leftover_w = pv_surplus_w - charge_w;
        const double inv_dc_cap_w = params.inverter_max_ac_w / eta;
        export_dc_w = std::min(leftover_w, std::max(0.0, inv_dc_cap_w - pv_to_inv_w));
      }

      const auto step = battery_step(batt, charge_w, discharge_req_w, dt_s, params);
      batt = step.state;
      const double delivered_w = step.delivered_discharge_w;

      const double inv_ac_load_w = eta * (pv_to_inv_w + delivered_w);
      f.inv_dc_w = pv_to_inv_w + delivered_w + export_dc_w;
      f.export_w = eta * export_dc_w;
      f.inv_ac_w = inv_ac_load_w + f.export_w;
      f.served_load_w = load_w;
      f.grid_import_w = std::max(0.0, load_w - inv_ac_load_w);
      f.batt_charge_w = charge_w;
      f.batt_discharge_w = delivered_w;
      f.curtail_w = (pv_surplus_w - charge_w) - export_dc_w;
      break;
    }
  }

  check_flow_invariants(f, params);
  return {f, batt};
}

void check_flow_invariants(const PowerFlows& f, const PlantParams& params) {
  const double fields[] = {f.pv_w,       f.grid_import_w,    f.inv_ac_w,
                           f.inv_dc_w,   f.batt_charge_w,    f.batt_discharge_w,
                           f.export_w,   f.curtail_w,        f.served_load_w};
  for (double v : fields) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw ContractViolation("power flow negative or non-finite");
    }
  }
  const double dc_residual =
      (f.pv_w + f.batt_discharge_w) - (f.inv_dc_w + f.batt_charge_w + f.curtail_w);
  if (std::abs(dc_residual) > kBalanceTolW) {
    throw ContractViolation("DC bus balance violated");
  }
  const double ac_residual = (f.grid_import_w + f.inv_ac_w) - (f.served_load_w + f.export_w);
  if (std::abs(ac_residual) > kBalanceTolW) {
    throw ContractViolation("AC bus balance violated");
  }
  if (std::abs(f.inv_ac_w - params.inverter_efficiency * f.inv_dc_w) > kBalanceTolW) {
    throw ContractViolation("inverter efficiency coupling violated");
  }
  if (f.batt_charge_w != 0.0 && f.batt_discharge_w != 0.0) {
    throw ContractViolation("simultaneous battery charge and discharge");
  }
}

}  // namespace sgsim
