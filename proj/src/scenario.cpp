#include "sgsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"
#include "sgsim/errors.hpp"

namespace sgsim {

using nlohmann::json;

const char* to_string(Tariff t) {
  return t == Tariff::Peak ? "Peak" : "OffPeak";
}

const char* to_string(TariffOverride s) {
  switch (s) {
    case TariffOverride::Peak: return "peak";
    case TariffOverride::OffPeak: return "offpeak";
    case TariffOverride::Auto: return "auto";
  }
  return "auto";
}

namespace {

constexpr std::int64_t kSecondsPerDay = 86400;

[[noreturn]] void fail(const std::string& field, const std::string& detail) {
  throw ValidationError(field, detail);
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                         const std::string& prefix) {
  for (const auto& [key, _] : obj.items()) {
    if (!known.count(key)) {
      fail(prefix.empty() ? key : prefix + "." + key, "unknown key");
    }
  }
}

double require_number(const json& v, const std::string& field) {
  if (!v.is_number()) fail(field, "expected a number");
  return v.get<double>();
}

std::int64_t require_integer(const json& v, const std::string& field) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d == std::floor(d) && std::abs(d) < 9.0e15) return static_cast<std::int64_t>(d);
  }
  fail(field, "expected an integer");
}

Profile parse_profile(const json& v, const std::string& field) {
  if (!v.is_array()) fail(field, "expected an array of [t, value] pairs");
  Profile out;
  out.reserve(v.size());
  for (const auto& item : v) {
    if (!item.is_array() || item.size() != 2) fail(field, "expected [t, value] pairs");
    ProfilePoint p;
    p.t = require_integer(item[0], field);
    p.value = require_number(item[1], field);
    out.push_back(p);
  }
  return out;
}

TariffSchedule parse_tariff(const json& v) {
  if (!v.is_object()) fail("tariff", "expected an object");
  reject_unknown_keys(v, {"peak_windows", "toggles"}, "tariff");
  TariffSchedule out;
  if (v.contains("peak_windows")) {
    const auto& w = v["peak_windows"];
    if (!w.is_array()) fail("peak_windows", "expected an array of [start, end] pairs");
    for (const auto& item : w) {
      if (!item.is_array() || item.size() != 2) fail("peak_windows", "expected [start, end] pairs");
      out.peak_windows.push_back({require_integer(item[0], "peak_windows"),
                                  require_integer(item[1], "peak_windows")});
    }
  }
  if (v.contains("toggles")) {
    const auto& tg = v["toggles"];
    if (!tg.is_array()) fail("toggles", "expected an array of [t, state] pairs");
    for (const auto& item : tg) {
      if (!item.is_array() || item.size() != 2 || !item[1].is_string()) {
        fail("toggles", "expected [t, \"peak\"|\"offpeak\"|\"auto\"] pairs");
      }
      ToggleEvent ev;
      ev.t = require_integer(item[0], "toggles");
      const std::string s = item[1].get<std::string>();
      if (s == "peak") {
        ev.state = TariffOverride::Peak;
      } else if (s == "offpeak") {
        ev.state = TariffOverride::OffPeak;
      } else if (s == "auto") {
        ev.state = TariffOverride::Auto;
      } else {
        fail("toggles", "unknown state \"" + s + "\"");
      }
      out.toggles.push_back(ev);
    }
  }
  return out;
}

PlantParams parse_plant(const json& v) {
  if (!v.is_object()) fail("plant", "expected an object");
  reject_unknown_keys(v,
                      {"pv_rated_w", "battery_capacity_wh", "battery_initial_soc_wh",
                       "battery_v_empty", "battery_v_full", "inverter_cutoff_v",
                       "inverter_efficiency", "inverter_max_ac_w", "max_charge_w",
                       "max_discharge_w", "ac_nominal_v", "ac_nominal_hz"},
                      "plant");
  PlantParams p;
  auto num = [&](const char* key, double& dst) {
    if (v.contains(key)) dst = require_number(v[key], std::string("plant.") + key);
  };
  num("pv_rated_w", p.pv_rated_w);
  num("battery_capacity_wh", p.battery_capacity_wh);
  num("battery_v_empty", p.battery_v_empty);
  num("battery_v_full", p.battery_v_full);
  num("inverter_cutoff_v", p.inverter_cutoff_v);
  num("inverter_efficiency", p.inverter_efficiency);
  num("inverter_max_ac_w", p.inverter_max_ac_w);
  num("max_charge_w", p.max_charge_w);
  num("max_discharge_w", p.max_discharge_w);
  num("ac_nominal_v", p.ac_nominal_v);
  num("ac_nominal_hz", p.ac_nominal_hz);
  // Defaults to half capacity when omitted, tracking a changed capacity.
  p.battery_initial_soc_wh = 0.5 * p.battery_capacity_wh;
  num("battery_initial_soc_wh", p.battery_initial_soc_wh);
  return p;
}

EngineParams parse_engine(const json& v) {
  if (!v.is_object()) fail("engine", "expected an object");
  reject_unknown_keys(v,
                      {"dt_s", "duration_s", "load_limit_w", "shed_grace_s", "reconnect_hold_s",
                       "freq_tolerance_hz", "phase_tolerance_rad", "meter_wh_per_pulse",
                       "price_peak", "price_offpeak", "price_sellback"},
                      "engine");
  EngineParams e;
  auto num = [&](const char* key, double& dst) {
    if (v.contains(key)) dst = require_number(v[key], std::string("engine.") + key);
  };
  auto integer = [&](const char* key, std::int64_t& dst) {
    if (v.contains(key)) dst = require_integer(v[key], std::string("engine.") + key);
  };
  integer("dt_s", e.dt_s);
  integer("duration_s", e.duration_s);
  num("load_limit_w", e.load_limit_w);
  integer("shed_grace_s", e.shed_grace_s);
  integer("reconnect_hold_s", e.reconnect_hold_s);
  num("freq_tolerance_hz", e.freq_tolerance_hz);
  num("phase_tolerance_rad", e.phase_tolerance_rad);
  num("meter_wh_per_pulse", e.meter_wh_per_pulse);
  num("price_peak", e.price_peak);
  num("price_offpeak", e.price_offpeak);
  num("price_sellback", e.price_sellback);
  return e;
}

void validate_profile(const Profile& p, const std::string& field, double lo, double hi) {
  if (p.empty()) fail(field, "profile must not be empty");
  if (p.front().t != 0) fail(field, "first point must have t = 0");
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i > 0 && p[i].t <= p[i - 1].t) fail(field, "t values must be strictly increasing");
    if (p[i].t < 0) fail(field, "t must be non-negative");
    if (!(p[i].value >= lo && p[i].value <= hi)) {
      fail(field, "value " + std::to_string(p[i].value) + " outside [" + std::to_string(lo) +
                      ", " + std::to_string(hi) + "]");
    }
  }
}

json profile_to_json(const Profile& p) {
  json out = json::array();
  for (const auto& pt : p) out.push_back(json::array({pt.t, pt.value}));
  return out;
}

}  // namespace

void validate_scenario(const Scenario& s) {
  const double inf = std::numeric_limits<double>::infinity();
  validate_profile(s.load_profile, "load_profile", 0.0, inf);
  validate_profile(s.irradiance_profile, "irradiance_profile", 0.0, 1.0);
  validate_profile(s.grid_freq_profile, "grid_freq_profile", 0.0, inf);

  auto windows = s.tariff.peak_windows;
  for (const auto& w : windows) {
    if (w.start_s < 0 || w.end_s > kSecondsPerDay || w.start_s >= w.end_s) {
      fail("peak_windows", "window [" + std::to_string(w.start_s) + ", " +
                               std::to_string(w.end_s) + ") not a valid daily window");
    }
  }
  std::sort(windows.begin(), windows.end(),
            [](const TariffWindow& a, const TariffWindow& b) { return a.start_s < b.start_s; });
  for (std::size_t i = 1; i < windows.size(); ++i) {
    if (windows[i].start_s < windows[i - 1].end_s) fail("peak_windows", "windows overlap");
  }
  for (std::size_t i = 0; i < s.tariff.toggles.size(); ++i) {
    if (s.tariff.toggles[i].t < 0) fail("toggles", "t must be non-negative");
    if (i > 0 && s.tariff.toggles[i].t < s.tariff.toggles[i - 1].t) {
      fail("toggles", "toggle events must be sorted by t");
    }
  }

  const PlantParams& p = s.plant;
  auto positive = [](double v, const char* field) {
    if (!(v > 0.0)) fail(field, "must be strictly positive");
  };
  positive(p.pv_rated_w, "plant.pv_rated_w");
  positive(p.battery_capacity_wh, "plant.battery_capacity_wh");
  positive(p.inverter_efficiency, "plant.inverter_efficiency");
  positive(p.inverter_max_ac_w, "plant.inverter_max_ac_w");
  positive(p.max_charge_w, "plant.max_charge_w");
  positive(p.max_discharge_w, "plant.max_discharge_w");
  positive(p.ac_nominal_v, "plant.ac_nominal_v");
  positive(p.ac_nominal_hz, "plant.ac_nominal_hz");
  if (p.inverter_efficiency > 1.0) fail("plant.inverter_efficiency", "must be <= 1");
  if (!(p.battery_v_empty < p.inverter_cutoff_v && p.inverter_cutoff_v < p.battery_v_full)) {
    fail("plant.inverter_cutoff_v", "require battery_v_empty < inverter_cutoff_v < battery_v_full");
  }
  if (p.battery_initial_soc_wh < 0.0 || p.battery_initial_soc_wh > p.battery_capacity_wh) {
    fail("plant.battery_initial_soc_wh", "must lie in [0, battery_capacity_wh]");
  }

  const EngineParams& e = s.engine;
  if (e.dt_s < 1) fail("engine.dt_s", "must be >= 1");
  if (e.duration_s < 0 || e.duration_s % e.dt_s != 0) {
    fail("engine.duration_s", "must be a non-negative multiple of dt_s");
  }
  if (!(e.load_limit_w > 0.0)) fail("engine.load_limit_w", "must be strictly positive");
  if (e.shed_grace_s < e.dt_s) fail("engine.shed_grace_s", "must be >= dt_s");
  if (e.reconnect_hold_s < 0) fail("engine.reconnect_hold_s", "must be non-negative");
  if (!(e.freq_tolerance_hz >= 0.0)) fail("engine.freq_tolerance_hz", "must be non-negative");
  if (!(e.phase_tolerance_rad >= 0.0)) fail("engine.phase_tolerance_rad", "must be non-negative");
  if (!(e.meter_wh_per_pulse > 0.0)) fail("engine.meter_wh_per_pulse", "must be strictly positive");
  if (!(e.price_peak >= 0.0)) fail("engine.price_peak", "must be non-negative");
  if (!(e.price_offpeak >= 0.0)) fail("engine.price_offpeak", "must be non-negative");
  if (!(e.price_sellback >= 0.0)) fail("engine.price_sellback", "must be non-negative");
}

Scenario load_scenario(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
  if (!doc.is_object()) throw ParseError("scenario document must be a JSON object");
  reject_unknown_keys(
      doc, {"load_profile", "irradiance_profile", "grid_freq_profile", "tariff", "plant", "engine"},
      "");

  Scenario s;
  if (!doc.contains("load_profile")) fail("load_profile", "missing");
  if (!doc.contains("irradiance_profile")) fail("irradiance_profile", "missing");
  if (!doc.contains("grid_freq_profile")) fail("grid_freq_profile", "missing");
  s.load_profile = parse_profile(doc["load_profile"], "load_profile");
  s.irradiance_profile = parse_profile(doc["irradiance_profile"], "irradiance_profile");
  s.grid_freq_profile = parse_profile(doc["grid_freq_profile"], "grid_freq_profile");
  if (doc.contains("tariff")) s.tariff = parse_tariff(doc["tariff"]);
  if (doc.contains("plant")) s.plant = parse_plant(doc["plant"]);
  if (doc.contains("engine")) s.engine = parse_engine(doc["engine"]);

  validate_scenario(s);
  return s;
}

Scenario load_scenario(const std::string& text) {
  std::istringstream in(text);
  return load_scenario(in);
}

std::string emit_scenario(const Scenario& s) {
  json doc;
  doc["load_profile"] = profile_to_json(s.load_profile);
  doc["irradiance_profile"] = profile_to_json(s.irradiance_profile);
  doc["grid_freq_profile"] = profile_to_json(s.grid_freq_profile);

  json windows = json::array();
  for (const auto& w : s.tariff.peak_windows) windows.push_back(json::array({w.start_s, w.end_s}));
  json toggles = json::array();
  for (const auto& t : s.tariff.toggles) toggles.push_back(json::array({t.t, to_string(t.state)}));
  doc["tariff"] = {{"peak_windows", windows}, {"toggles", toggles}};

  const PlantParams& p = s.plant;
  doc["plant"] = {{"pv_rated_w", p.pv_rated_w},
                  {"battery_capacity_wh", p.battery_capacity_wh},
                  {"battery_initial_soc_wh", p.battery_initial_soc_wh},
                  {"battery_v_empty", p.battery_v_empty},
                  {"battery_v_full", p.battery_v_full},
                  {"inverter_cutoff_v", p.inverter_cutoff_v},
                  {"inverter_efficiency", p.inverter_efficiency},
                  {"inverter_max_ac_w", p.inverter_max_ac_w},
                  {"max_charge_w", p.max_charge_w},
                  {"max_discharge_w", p.max_discharge_w},
                  {"ac_nominal_v", p.ac_nominal_v},
                  {"ac_nominal_hz", p.ac_nominal_hz}};
  const EngineParams& e = s.engine;
  doc["engine"] = {{"dt_s", e.dt_s},
                   {"duration_s", e.duration_s},
                   {"load_limit_w", e.load_limit_w},
                   {"shed_grace_s", e.shed_grace_s},
                   {"reconnect_hold_s", e.reconnect_hold_s},
                   {"freq_tolerance_hz", e.freq_tolerance_hz},
                   {"phase_tolerance_rad", e.phase_tolerance_rad},
                   {"meter_wh_per_pulse", e.meter_wh_per_pulse},
                   {"price_peak", e.price_peak},
                   {"price_offpeak", e.price_offpeak},
                   {"price_sellback", e.price_sellback}};
  return doc.dump(2) + "\n";
}

double profile_at(const Profile& profile, std::int64_t t) {
  auto it = std::upper_bound(profile.begin(), profile.end(), t,
                             [](std::int64_t lhs, const ProfilePoint& p) { return lhs < p.t; });
  return std::prev(it)->value;
}

Tariff tariff_at(const TariffSchedule& schedule, std::int64_t t) {
  auto it = std::upper_bound(schedule.toggles.begin(), schedule.toggles.end(), t,
                             [](std::int64_t lhs, const ToggleEvent& e) { return lhs < e.t; });
  if (it != schedule.toggles.begin()) {
    const TariffOverride forced = std::prev(it)->state;
    if (forced == TariffOverride::Peak) return Tariff::Peak;
    if (forced == TariffOverride::OffPeak) return Tariff::OffPeak;
  }
  const std::int64_t day_s = ((t % kSecondsPerDay) + kSecondsPerDay) % kSecondsPerDay;
  for (const auto& w : schedule.peak_windows) {
    if (day_s >= w.start_s && day_s < w.end_s) return Tariff::Peak;
  }
  return Tariff::OffPeak;
}

}  // namespace sgsim
