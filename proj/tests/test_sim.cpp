#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <stdexcept>

#include "xrmarl/sim/env.hpp"
#include "xrmarl/sim/kpi_csv.hpp"
#include "xrmarl/sim/link.hpp"
#include "xrmarl/sim/traffic.hpp"
#include "xrmarl/sim/xqi.hpp"

using namespace xrmarl;
using namespace xrmarl::sim;

TEST_CASE("uma nlos pathloss closed-form values") {
  CHECK(pathloss_uma_nlos(100.0, 4.0) == doctest::Approx(103.7412).epsilon(1e-4));
  CHECK(pathloss_uma_nlos(200.0, 4.0) == doctest::Approx(115.5055).epsilon(1e-4));
  CHECK(pathloss_uma_nlos(300.0, 4.0) == doctest::Approx(122.3871).epsilon(1e-4));
  // monotone in distance
  double prev = 0.0;
  for (double d = 50.0; d <= 500.0; d += 25.0) {
    double pl = pathloss_uma_nlos(d, 4.0);
    CHECK(pl > prev);
    prev = pl;
  }
  CHECK_THROWS_AS(pathloss_uma_nlos(0.0, 4.0), std::invalid_argument);
  CHECK_THROWS_AS(pathloss_uma_nlos(-5.0, 4.0), std::invalid_argument);
}

TEST_CASE("window capacity closed-form values") {
  LinkConfig link;
  link.bandwidth_hz = 40e6;
  // fixed SNR of 10 dB over half a second
  CHECK(capacity_bits(link, 10.0, 0.5) ==
        doctest::Approx(69188632.37).epsilon(1e-6));
  // the spectral-efficiency cap binds at very large SNR
  CHECK(capacity_bits(link, 500.0, 0.5) == 40e6 * 8.0 * 0.5);
  // noise floor
  CHECK(noise_floor_dbm(40e6, 7.0) == doctest::Approx(-90.9794).epsilon(1e-5));
}

TEST_CASE("capacity is non-increasing in ring distance without shadowing") {
  LinkConfig link;
  double prev = std::numeric_limits<double>::infinity();
  for (double d = 100.0; d <= 400.0; d += 50.0) {
    double c = capacity_bits(link, snr_db(link, d, 0.0), 0.5);
    CHECK(c <= prev);
    prev = c;
  }
}

TEST_CASE("frame generation arithmetic") {
  Rng rng = make_rng(7);
  auto pkts = generate_frames(10.0, 0.5, 10.0, 60.0, 0.001, 0.0, 0.5, 0.0,
                              1500, 0, rng);
  std::set<std::int64_t> frames;
  double total_bits = 0.0;
  for (const Packet& p : pkts) {
    frames.insert(p.frame);
    total_bits += p.bits;
    CHECK(p.bits <= 1500.0 * 8.0 + 1e-9);
    CHECK(p.arrival_s >= 0.0);
    CHECK(p.arrival_s < 0.5);
  }
  CHECK(frames.size() == 30);
  // sigma = 0: every frame is exactly the mean size, 20833.33 bytes
  CHECK(total_bits / 30.0 == doctest::Approx(10e6 / 60.0).epsilon(1e-12));

  // AR minimum rate: about 1042 bytes per frame
  auto small = generate_frames(0.5, 0.5, 10.0, 60.0, 0.0, 0.0, 0.5, 0.0, 1500,
                               0, rng);
  CHECK(small.size() == 30);  // one packet per frame
  CHECK(small.front().bits / 8.0 == doctest::Approx(1041.67).epsilon(1e-4));

  CHECK_THROWS_AS(generate_frames(11.0, 0.5, 10.0, 60.0, 0.0, 0.0, 0.5, 0.0,
                                  1500, 0, rng),
                  std::invalid_argument);
}

TEST_CASE("frame size jitter stays within the truncation band") {
  Rng rng = make_rng(11);
  auto pkts = generate_frames(30.0, 10.0, 30.0, 60.0, 0.0, 0.0, 0.5, 0.105,
                              1500, 0, rng);
  const double mean = 30e6 / 60.0;
  std::map<std::int64_t, double> frame_bits;
  for (const Packet& p : pkts) frame_bits[p.frame] += p.bits;
  for (auto& [frame, bits] : frame_bits) {
    CHECK(bits >= mean * (1.0 - 2.0 * 0.105) - 1e-6);
    CHECK(bits <= mean * (1.0 + 2.0 * 0.105) + 1e-6);
  }
}

TEST_CASE("xqi level table") {
  CHECK(xqi_level(99.5, 6.0) == 5);
  CHECK(xqi_level(96.0, 12.0) == 3);
  CHECK(xqi_level(94.0, 5.0) == 1);
  CHECK(xqi_level(99.0, 7.0) == 5);
  CHECK(xqi_level(99.0, 10.0) == 4);
  CHECK(xqi_level(95.0, 13.0) == 3);
  CHECK(xqi_level(95.0, 20.0) == 2);
  CHECK(xqi_level(100.0, 0.0) == 5);
  CHECK(xqi_level(0.0, 100.0) == 1);
  CHECK_THROWS_AS(xqi_level(-1.0, 5.0), std::invalid_argument);
  CHECK_THROWS_AS(xqi_level(101.0, 5.0), std::invalid_argument);
}

TEST_CASE("xqi level is total: exhaustive half-unit grid") {
  // independent oracle with interval logic written the other way around
  auto oracle = [](double pdr, double delay) {
    const bool p99 = pdr >= 99.0, p95 = pdr >= 95.0;
    if (p99) {
      if (delay <= 7.0) return 5;
      if (delay <= 10.0) return 4;
    }
    if (p95) {
      if (delay <= 13.0) return 3;
      if (delay <= 20.0) return 2;
    }
    return 1;
  };
  for (double pdr = 0.0; pdr <= 100.0; pdr += 0.5) {
    for (double delay = 0.0; delay <= 30.0; delay += 0.5) {
      const int level = xqi_level(pdr, delay);
      CHECK(level >= 1);
      CHECK(level <= 5);
      CHECK(level == oracle(pdr, delay));
    }
  }
}

TEST_CASE("xqi reward table") {
  CHECK(reward_xqi(99.0, 7.0) == 1.0);
  CHECK(reward_xqi(99.0, 10.0) == 0.75);
  CHECK(reward_xqi(95.0, 13.0) == 0.5);
  CHECK(reward_xqi(95.0, 20.0) == 0.25);
  CHECK(reward_xqi(94.9, 5.0) == 0.0);
  CHECK(reward_xqi(99.0, 25.0) == 0.0);
}

TEST_CASE("team reward is the element-wise minimum") {
  CHECK(team_reward({1.0, 0.75, 0.5}) == 0.5);
  CHECK(team_reward({1.0, 1.0, -1.0}) == -1.0);
  CHECK(team_reward({0.25, 0.25, 0.25}) == 0.25);
  CHECK_THROWS_AS(team_reward({}), std::invalid_argument);
}

namespace {

ScenarioConfig easy_scenario() {
  ScenarioConfig cfg;
  cfg.ring_inner_m = 100.0;
  cfg.ring_outer_m = 200.0;
  return cfg;
}

}  // namespace

TEST_CASE("zero capacity window terminates with the penalty reward") {
  ScenarioConfig cfg = easy_scenario();
  cfg.link.se_cap_bps_hz = 0.0;  // kills all service
  XrEnv env(cfg, 5);
  auto result = env.step_window({5.0, 20.0, 20.0});
  CHECK(result.done);
  CHECK(result.team_reward == -1.0);
  for (const auto& f : result.kpi.flows) CHECK(f.throughput_mbps == 0.0);
  CHECK_THROWS_AS(env.step_window({5.0, 20.0, 20.0}), std::logic_error);
}

TEST_CASE("lossless limit: ample capacity gives PDR 1 and full reward") {
  ScenarioConfig cfg = easy_scenario();
  cfg.frame_size_sigma = 0.0;
  cfg.shadowing_enabled = false;
  cfg.link.antenna_gain_db = 30.0;  // force a huge SNR
  XrEnv env(cfg, 9);
  auto result = env.step_window({1.0, 12.0, 12.0});
  CHECK(!result.done);
  for (const auto& f : result.kpi.flows) {
    CHECK(f.pdr == 1.0);
    CHECK(f.dropped == 0);
  }
  for (const auto& t : result.kpi.types) {
    CHECK(t.pdr == 1.0);
    CHECK(t.mean_delay_ms < 7.0);
  }
  CHECK(result.team_reward == 1.0);
}

TEST_CASE("packet conservation holds on randomized episodes") {
  Rng seeds = make_rng(31337);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    ScenarioConfig cfg;
    const double inner = 100.0 + 100.0 * std::floor(unit(seeds) * 3.0);
    cfg.ring_inner_m = inner;
    cfg.ring_outer_m = inner + 100.0;
    cfg.windows_per_episode = 8;
    XrEnv env(cfg, 1000 + static_cast<std::uint64_t>(trial));
    bool done = false;
    while (!env.done() && !done) {
      std::array<double, 3> rates{0.5 + 9.5 * unit(seeds),
                                  10.0 + 20.0 * unit(seeds),
                                  10.0 + 20.0 * unit(seeds)};
      auto result = env.step_window(rates);
      done = result.done;
      // audit: generated = on_time + late + dropped + queued, per flow
      for (const auto& a : env.audit()) {
        CHECK(a.generated == a.on_time + a.late + a.dropped + a.queued);
        CHECK(a.queued >= 0);
      }
      for (const auto& f : result.kpi.flows) {
        CHECK(f.pdr >= 0.0);
        CHECK(f.pdr <= 1.0);
        CHECK(f.goodput_mbps <= f.throughput_mbps + 1e-9);
        CHECK(f.jitter_ms >= 0.0);
        CHECK(f.mean_delay_ms >= 0.0);
      }
      CHECK(result.team_reward >= -1.0);
      CHECK(result.team_reward <= 1.0);
    }
  }
}

TEST_CASE("per-flow throughput never exceeds its UE capacity share") {
  ScenarioConfig cfg = easy_scenario();
  cfg.shadowing_enabled = false;
  XrEnv env(cfg, 77);
  // per-UE capacity bound at the inner ring edge (closest possible)
  const double bound_mbps =
      capacity_bits(cfg.link, snr_db(cfg.link, cfg.ring_inner_m, 0.0), cfg.window_s) /
      cfg.window_s / 1e6;
  while (!env.done()) {
    auto result = env.step_window({10.0, 30.0, 30.0});
    for (const auto& f : result.kpi.flows) {
      CHECK(f.throughput_mbps <= bound_mbps + 1e-6);
    }
    if (result.done) break;
  }
}

TEST_CASE("identical config and seed give identical KPI streams") {
  auto run = [](std::uint64_t seed) {
    ScenarioConfig cfg = easy_scenario();
    XrEnv env(cfg, seed);
    std::string rows;
    int w = 0;
    while (!env.done()) {
      auto result = env.step_window({5.0, 15.0, 25.0});
      rows += kpi_csv_row(0, w++, result.kpi, result.team_reward, result.done);
      rows += "\n";
      if (result.done) break;
    }
    return rows;
  };
  CHECK(run(42) == run(42));
  CHECK(run(42) != run(43));
}

TEST_CASE("kpi csv header matches the documented schema") {
  ScenarioConfig cfg = easy_scenario();
  XrEnv env(cfg, 1);
  CHECK(kpi_csv_header(env.flow_names()) ==
        "episode,window,"
        "ar0_throughput_mbps,ar0_goodput_mbps,ar0_delay_ms,ar0_jitter_ms,ar0_pdr,"
        "ar1_throughput_mbps,ar1_goodput_mbps,ar1_delay_ms,ar1_jitter_ms,ar1_pdr,"
        "ar2_throughput_mbps,ar2_goodput_mbps,ar2_delay_ms,ar2_jitter_ms,ar2_pdr,"
        "vr0_throughput_mbps,vr0_goodput_mbps,vr0_delay_ms,vr0_jitter_ms,vr0_pdr,"
        "cg0_throughput_mbps,cg0_goodput_mbps,cg0_delay_ms,cg0_jitter_ms,cg0_pdr,"
        "xqi_ar,xqi_vr,xqi_cg,reward,done");
}

TEST_CASE("scenario validation rejects malformed configs") {
  ScenarioConfig cfg;
  cfg.ring_inner_m = 300.0;
  cfg.ring_outer_m = 200.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  ScenarioConfig cfg2;
  cfg2.window_s = 0.0;
  CHECK_THROWS_AS(cfg2.validate(), std::invalid_argument);
  ScenarioConfig ok;
  CHECK_NOTHROW(ok.validate());
}

TEST_CASE("out-of-range rates are clamped, not fatal") {
  ScenarioConfig cfg = easy_scenario();
  XrEnv env(cfg, 3);
  auto result = env.step_window({100.0, 1.0, 50.0});
  CHECK(!result.observations[0].hasNaN());
  // normalized previous rates observed at the bounds
  CHECK(result.observations[0](0) == 1.0);  // AR clamped to max
  CHECK(result.observations[0](1) == 0.0);  // VR clamped to min
  CHECK(result.observations[0](2) == 1.0);  // CG clamped to max
}

TEST_CASE("observation layout and bounds") {
  ScenarioConfig cfg = easy_scenario();
  XrEnv env(cfg, 8);
  CHECK(env.state_dim() == 20);
  for (const auto& o : env.observations()) {
    CHECK(o.size() == 5);
    CHECK((o.array() >= 0.0).all());
    CHECK((o.array() <= 1.0).all());
  }
  auto result = env.step_window({5.0, 20.0, 20.0});
  for (const auto& o : result.observations) {
    CHECK(o.size() == 5);
    CHECK((o.array() >= 0.0).all());
    CHECK((o.array() <= 1.0).all());
  }
  CHECK(result.state.size() == 20);
  CHECK(result.state.allFinite());
}
