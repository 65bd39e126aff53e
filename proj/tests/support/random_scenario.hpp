// Deterministic randomized scenario generation for property and
// acceptance tests. Everything is a pure function of the seed.
#pragma once

#include <cstdint>
#include <random>
#include <set>

#include "sgsim/scenario.hpp"

namespace sgsim::test {

struct GenOptions {
  std::int64_t ticks = 200;
  bool freq_excursions = true;  // sometimes push the grid outside tolerance
};

inline Profile random_profile(std::mt19937_64& rng, std::int64_t horizon_s, int max_points,
                              double lo, double hi) {
  std::uniform_int_distribution<int> npts(1, max_points);
  std::uniform_int_distribution<std::int64_t> tdist(1, horizon_s - 1);
  std::uniform_real_distribution<double> vdist(lo, hi);
  std::set<std::int64_t> ts{0};
  const int n = npts(rng);
  while (static_cast<int>(ts.size()) < n) ts.insert(tdist(rng));
  Profile p;
  for (std::int64_t t : ts) p.push_back({t, vdist(rng)});
  return p;
}

inline Scenario random_scenario(std::uint64_t seed, const GenOptions& opt = {}) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(rng);
  };
  auto uniform_int = [&](std::int64_t a, std::int64_t b) {
    return std::uniform_int_distribution<std::int64_t>(a, b)(rng);
  };

  Scenario s;
  s.engine.dt_s = 1;
  s.engine.duration_s = opt.ticks;
  s.engine.shed_grace_s = uniform_int(2, 8);
  s.engine.reconnect_hold_s = uniform_int(3, 40);

  const std::int64_t horizon = opt.ticks;
  s.load_profile = random_profile(rng, horizon, 12, 0.0, 400.0);
  s.irradiance_profile = random_profile(rng, horizon, 8, 0.0, 1.0);

  {
    std::uniform_int_distribution<int> npts(1, 6);
    std::uniform_int_distribution<std::int64_t> tdist(1, horizon - 1);
    std::set<std::int64_t> ts{0};
    const int n = npts(rng);
    while (static_cast<int>(ts.size()) < n) ts.insert(tdist(rng));
    for (std::int64_t t : ts) {
      double hz = 50.0 + uniform(-0.45, 0.45);
      if (opt.freq_excursions && uniform(0.0, 1.0) < 0.25) {
        hz = 50.0 + (uniform(0.0, 1.0) < 0.5 ? -1.0 : 1.0) * uniform(0.6, 3.0);
      }
      s.grid_freq_profile.push_back({t, hz});
    }
  }

  // Non-overlapping peak windows near the simulated span so they matter.
  const std::int64_t nw = uniform_int(0, 3);
  if (nw > 0) {
    std::set<std::int64_t> bounds;
    while (static_cast<std::int64_t>(bounds.size()) < 2 * nw) {
      bounds.insert(uniform_int(0, horizon + horizon / 2));
    }
    auto it = bounds.begin();
    for (std::int64_t i = 0; i < nw; ++i) {
      const std::int64_t a = *it++;
      const std::int64_t b = *it++;
      s.tariff.peak_windows.push_back({a, b});
    }
  }
  const std::int64_t nt = uniform_int(0, 3);
  if (nt > 0) {
    std::set<std::int64_t> ts;
    while (static_cast<std::int64_t>(ts.size()) < nt) ts.insert(uniform_int(0, horizon - 1));
    for (std::int64_t t : ts) {
      const auto state = static_cast<TariffOverride>(uniform_int(0, 2));
      s.tariff.toggles.push_back({t, state});
    }
  }

  s.plant.battery_initial_soc_wh = uniform(0.0, s.plant.battery_capacity_wh);
  return s;
}

}  // namespace sgsim::test
