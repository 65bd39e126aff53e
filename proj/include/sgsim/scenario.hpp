#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace sgsim {

enum class Tariff { Peak, OffPeak };

const char* to_string(Tariff t);

// One sampled point of a step-held time series. `value` is watts for the
// load profile, a fraction 0..1 for irradiance, hertz for grid frequency.
struct ProfilePoint {
  std::int64_t t = 0;
  double value = 0.0;
  bool operator==(const ProfilePoint&) const = default;
};

using Profile = std::vector<ProfilePoint>;

enum class TariffOverride { Peak, OffPeak, Auto };

const char* to_string(TariffOverride s);

// Scripted press of the operator's tariff button. A forced state persists
// until the next toggle; Auto hands control back to the clock schedule.
struct ToggleEvent {
  std::int64_t t = 0;
  TariffOverride state = TariffOverride::Auto;
  bool operator==(const ToggleEvent&) const = default;
};

// Daily peak-price window [start_s, end_s) within [0, 86400].
struct TariffWindow {
  std::int64_t start_s = 0;
  std::int64_t end_s = 0;
  bool operator==(const TariffWindow&) const = default;
};

struct TariffSchedule {
  std::vector<TariffWindow> peak_windows;
  std::vector<ToggleEvent> toggles;
  bool operator==(const TariffSchedule&) const = default;
};

struct PlantParams {
  double pv_rated_w = 100.0;
  double battery_capacity_wh = 84.0;
  double battery_initial_soc_wh = 42.0;  // defaults to half capacity
  double battery_v_empty = 11.0;
  double battery_v_full = 13.0;
  double inverter_cutoff_v = 12.0;
  double inverter_efficiency = 0.90;
  double inverter_max_ac_w = 200.0;
  double max_charge_w = 50.0;
  double max_discharge_w = 250.0;
  double ac_nominal_v = 220.0;
  double ac_nominal_hz = 50.0;
  bool operator==(const PlantParams&) const = default;
};

struct EngineParams {
  std::int64_t dt_s = 1;
  std::int64_t duration_s = 86400;
  double load_limit_w = 200.0;
  std::int64_t shed_grace_s = 5;
  std::int64_t reconnect_hold_s = 30;
  double freq_tolerance_hz = 0.5;
  double phase_tolerance_rad = 0.1;
  double meter_wh_per_pulse = 1.0;
  double price_peak = 12.0;
  double price_offpeak = 6.0;
  double price_sellback = 4.0;
  bool operator==(const EngineParams&) const = default;
};

// Complete simulation input. Immutable after validation.
struct Scenario {
  Profile load_profile;
  Profile irradiance_profile;
  Profile grid_freq_profile;
  TariffSchedule tariff;
  PlantParams plant;
  EngineParams engine;
  bool operator==(const Scenario&) const = default;
};

// Parses and validates a scenario document (JSON; schema in the README).
// Throws ParseError for malformed input and ValidationError for invariant
// violations. Omitted plant/engine fields take the documented defaults;
// unknown keys are rejected.
Scenario load_scenario(std::istream& in);
Scenario load_scenario(const std::string& text);

// Full-form serialization; load_scenario(emit_scenario(s)) == s.
std::string emit_scenario(const Scenario& s);

// Throws ValidationError naming the first violated field.
void validate_scenario(const Scenario& s);

// Step-hold interpolation: value of the latest point with point.t <= t.
// Precondition (enforced by scenario validation): profile non-empty and
// covering t = 0.
double profile_at(const Profile& profile, std::int64_t t);

// The latest toggle at or before t wins unless it is Auto; otherwise Peak
// iff (t mod 86400) falls inside a peak window.
Tariff tariff_at(const TariffSchedule& schedule, std::int64_t t);

}  // namespace sgsim
