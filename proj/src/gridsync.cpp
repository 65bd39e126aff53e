#include "sgsim/gridsync.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sgsim {

namespace {
constexpr double kTau = 2.0 * std::numbers::pi;
}

double wrap_phase(double rad) {
  double x = std::fmod(rad, kTau);
  if (x < 0.0) x += kTau;
  if (x >= kTau) x = 0.0;
  return x;
}

double phase_error(double target_rad, double actual_rad) {
  return std::remainder(target_rad - actual_rad, kTau);
}

SyncState phase_advance(SyncState state, double dt_s, const PlantParams& params) {
  const double grid_delta = kTau * state.grid_freq_hz * dt_s;
  const double unwrapped = state.grid_phase_rad + grid_delta;
  state.grid_zero_cross = unwrapped >= kTau;
  state.grid_phase_rad = wrap_phase(unwrapped);

  if (state.locked) {
    state.inv_phase_rad = state.grid_phase_rad;
  } else {
    const double naive = wrap_phase(state.inv_phase_rad + kTau * params.ac_nominal_hz * dt_s);
    const double err = phase_error(state.grid_phase_rad, naive);
    const double max_step = kPhaseSlewRadPerS * dt_s;
    state.inv_phase_rad = wrap_phase(naive + std::clamp(err, -max_step, max_step));
  }
  return state;
}

TryLockResult try_lock(std::int64_t t, SyncState state, const EngineParams& engine,
                       const PlantParams& params) {
  std::vector<EmsEvent> events;
  const bool freq_ok =
      std::abs(state.grid_freq_hz - params.ac_nominal_hz) <= engine.freq_tolerance_hz;

  if (!freq_ok) {
    if (!state.lockout) events.push_back({EmsEventKind::ProtectionLockout, t, {}});
    state.lockout = true;
    if (state.locked) {
      state.locked = false;
      events.push_back({EmsEventKind::SyncLoss, t, {}});
    }
  } else {
    state.lockout = false;
    if (!state.locked && state.grid_zero_cross) {
      const double err = phase_error(state.grid_phase_rad, state.inv_phase_rad);
      if (std::abs(err) <= engine.phase_tolerance_rad) {
        state.locked = true;
        events.push_back({EmsEventKind::SyncLock, t, {}});
      }
    }
  }
  return {state, events};
}

}  // namespace sgsim
