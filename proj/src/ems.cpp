#include "sgsim/ems.hpp"

namespace sgsim {

const char* to_string(EmsMode mode) {
  switch (mode) {
    case EmsMode::GridSupply: return "GridSupply";
    case EmsMode::InverterLocal: return "InverterLocal";
    case EmsMode::GridTieExport: return "GridTieExport";
    case EmsMode::Shed: return "Shed";
  }
  return "GridSupply";
}

const char* to_string(EmsEventKind kind) {
  switch (kind) {
    case EmsEventKind::Beep: return "Beep";
    case EmsEventKind::Disconnect: return "Disconnect";
    case EmsEventKind::Reconnect: return "Reconnect";
    case EmsEventKind::TariffChange: return "TariffChange";
    case EmsEventKind::BatteryLowInhibit: return "BatteryLowInhibit";
    case EmsEventKind::SyncLock: return "SyncLock";
    case EmsEventKind::SyncLoss: return "SyncLoss";
    case EmsEventKind::ProtectionLockout: return "ProtectionLockout";
  }
  return "Beep";
}

EmsMode select_mode(Tariff tariff, double v_batt, double /*pv_w*/, double /*load_w*/,
                    const PlantParams& params) {
  if (v_batt < params.inverter_cutoff_v) return EmsMode::GridSupply;
  return tariff == Tariff::Peak ? EmsMode::InverterLocal : EmsMode::GridTieExport;
}

ShedUpdateResult shed_update(std::int64_t t, EmsState state, double load_w, Tariff tariff,
                             const EngineParams& engine) {
  std::vector<EmsEvent> events;
  const bool over_limit = load_w > engine.load_limit_w;

  if (state.mode != EmsMode::Shed) {
    if (tariff == Tariff::Peak && over_limit) {
      state.over_limit_ticks += 1;
      events.push_back({EmsEventKind::Beep, t, {}});
      if (state.over_limit_ticks * engine.dt_s >= engine.shed_grace_s) {
        state.mode = EmsMode::Shed;
        state.over_limit_ticks = 0;
        state.under_limit_ticks = 0;
        events.push_back({EmsEventKind::Disconnect, t, {}});
      }
    } else {
      state.over_limit_ticks = 0;
    }
  } else {
    if (!over_limit) {
      state.under_limit_ticks += 1;
      if (state.under_limit_ticks * engine.dt_s >= engine.reconnect_hold_s) {
        // placeholder; controller_tick recomputes the source right away
        state.mode = EmsMode::GridSupply;
        state.under_limit_ticks = 0;
        state.over_limit_ticks = 0;
        events.push_back({EmsEventKind::Reconnect, t, {}});
      }
    } else {
      state.under_limit_ticks = 0;
    }
  }
  return {state, events};
}

ControllerResult controller_tick(std::int64_t t, EmsState state, Tariff tariff, double v_batt,
                                 double pv_w, double load_w, const PlantParams& params,
                                 const EngineParams& engine) {
  std::vector<EmsEvent> events;
  if (state.last_tariff.has_value() && *state.last_tariff != tariff) {
    events.push_back({EmsEventKind::TariffChange, t, tariff});
  }
  state.last_tariff = tariff;

  auto shed = shed_update(t, state, load_w, tariff, engine);
  state = shed.state;
  events.insert(events.end(), shed.events.begin(), shed.events.end());

  EmsMode mode;
  if (state.mode == EmsMode::Shed) {
    mode = EmsMode::Shed;
  } else {
    mode = select_mode(tariff, v_batt, pv_w, load_w, params);
    const bool low = v_batt < params.inverter_cutoff_v;
    if (low && !state.batt_low) {
      events.push_back({EmsEventKind::BatteryLowInhibit, t, {}});
    }
    state.batt_low = low;
    state.mode = mode;
  }
  return {state, mode, events};
}

}  // namespace sgsim
