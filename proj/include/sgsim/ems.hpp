#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sgsim/events.hpp"
#include "sgsim/scenario.hpp"

namespace sgsim {

enum class EmsMode { GridSupply, InverterLocal, GridTieExport, Shed };

const char* to_string(EmsMode mode);

// Controller state carried tick to tick. The counters implement the
// beep-then-disconnect grace window and the reconnect hold; batt_low and
// last_tariff latch transitions so their events fire once.
struct EmsState {
  EmsMode mode = EmsMode::GridSupply;
  std::int64_t over_limit_ticks = 0;
  std::int64_t under_limit_ticks = 0;
  bool batt_low = false;
  std::optional<Tariff> last_tariff;
  bool operator==(const EmsState&) const = default;
};

// Source selection when not shed:
//   v_batt below the inverter cutoff -> GridSupply (no inversion)
//   at or above cutoff, peak tariff  -> InverterLocal
//   at or above cutoff, off-peak     -> GridTieExport
EmsMode select_mode(Tariff tariff, double v_batt, double pv_w, double load_w,
                    const PlantParams& params);

struct ShedUpdateResult {
  EmsState state;
  std::vector<EmsEvent> events;
};

// Over-limit beeping, disconnect after the grace window, and automatic
// reconnect after the hold. The limit is enforced during peak hours only.
ShedUpdateResult shed_update(std::int64_t t, EmsState state, double load_w, Tariff tariff,
                             const EngineParams& engine);

struct ControllerResult {
  EmsState state;
  EmsMode mode;
  std::vector<EmsEvent> events;
};

// One controller step: shed machinery first; Shed overrides source
// selection. Event order within a tick is fixed: TariffChange, then
// Beep/Disconnect/Reconnect, then BatteryLowInhibit.
ControllerResult controller_tick(std::int64_t t, EmsState state, Tariff tariff, double v_batt,
                                 double pv_w, double load_w, const PlantParams& params,
                                 const EngineParams& engine);

}  // namespace sgsim
