#pragma once

#include <cstdint>
#include <vector>

#include "sgsim/events.hpp"
#include "sgsim/scenario.hpp"

namespace sgsim {

// Acquisition slew: the inverter phase may close at most this many radians
// of error per second while hunting for lock.
inline constexpr double kPhaseSlewRadPerS = 0.5;

// Phase accumulators at controller granularity. A tick spanning one or
// more grid cycles sets grid_zero_cross; lock may be acquired only on such
// ticks. lockout implies not locked.
struct SyncState {
  double grid_phase_rad = 0.0;  // [0, 2*pi)
  double inv_phase_rad = 0.0;   // [0, 2*pi)
  double grid_freq_hz = 0.0;
  bool locked = false;
  bool lockout = false;
  bool grid_zero_cross = false;
  bool operator==(const SyncState&) const = default;
};

// Normalizes an angle into [0, 2*pi).
double wrap_phase(double rad);

// Circular difference target - actual, wrapped into [-pi, pi].
double phase_error(double target_rad, double actual_rad);

// Advances both phases by dt. The grid runs at grid_freq_hz; the inverter
// runs at nominal frequency plus a correction that closes the phase error
// by at most kPhaseSlewRadPerS * dt. When locked the inverter phase is
// held equal to the grid phase.
SyncState phase_advance(SyncState state, double dt_s, const PlantParams& params);

struct TryLockResult {
  SyncState state;
  std::vector<EmsEvent> events;
};

// Frequency protection and lock acquisition, called once per tick after
// phase_advance. Out-of-tolerance grid frequency engages lockout (one
// ProtectionLockout per excursion) and drops any held lock (SyncLoss).
// Lock is acquired only on a zero-crossing tick with the circular phase
// error within tolerance.
TryLockResult try_lock(std::int64_t t, SyncState state, const EngineParams& engine,
                       const PlantParams& params);

}  // namespace sgsim
