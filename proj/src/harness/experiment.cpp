#include "xrmarl/harness/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "xrmarl/harness/stats.hpp"
#include "xrmarl/harness/svg_plot.hpp"
#include "xrmarl/rl/learner.hpp"
#include "xrmarl/sim/kpi_csv.hpp"

namespace xrmarl::harness {

namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string run_tag(const std::string& algo, int ring, std::uint64_t seed) {
  return algo + "_ring" + std::to_string(ring) + "_seed" + std::to_string(seed);
}

// Accumulates evaluation-phase KPI into the run aggregates.
struct EvalAccumulator {
  std::vector<double> window_reward;
  std::vector<double> window_xqi;
  std::vector<double> window_jitter;
  std::vector<double> window_delay;
  std::vector<double> window_throughput;
  std::vector<double> window_goodput;
  std::array<std::vector<double>, 3> type_throughput;
  std::array<std::vector<double>, 3> type_goodput;
  std::int64_t on_time = 0;
  std::int64_t resolved = 0;
  std::vector<bool> episode_ok;

  void add_window(const sim::KpiWindow& kpi, double reward) {
    window_reward.push_back(reward);
    double xqi = 0.0, jitter = 0.0, delay = 0.0, thr = 0.0, good = 0.0;
    for (int t = 0; t < sim::kNumTraffic; ++t) {
      const sim::TypeKpi& tk = kpi.types[static_cast<std::size_t>(t)];
      xqi += tk.xqi;
      jitter += tk.jitter_ms;
      delay += tk.mean_delay_ms;
      thr += tk.throughput_mbps;
      good += tk.goodput_mbps;
      type_throughput[static_cast<std::size_t>(t)].push_back(tk.throughput_mbps);
      type_goodput[static_cast<std::size_t>(t)].push_back(tk.goodput_mbps);
    }
    window_xqi.push_back(xqi / 3.0);
    window_jitter.push_back(jitter / 3.0);
    window_delay.push_back(delay / 3.0);
    window_throughput.push_back(thr);
    window_goodput.push_back(good);
    for (const sim::FlowKpi& f : kpi.flows) {
      on_time += f.delivered_on_time;
      resolved += f.delivered_on_time + f.delivered_late + f.dropped;
    }
  }

  void finish(RunRecord& rec) const {
    rec.eval_episodes = static_cast<int>(episode_ok.size());
    rec.success_rate = success_rate(episode_ok);
    rec.reward_mean = window_reward.empty() ? 0.0 : mean(window_reward);
    rec.xqi_mean = window_xqi.empty() ? 0.0 : mean(window_xqi);
    rec.jitter_ms_mean = window_jitter.empty() ? 0.0 : mean(window_jitter);
    rec.delay_ms_mean = window_delay.empty() ? 0.0 : mean(window_delay);
    rec.plr_mean =
        resolved > 0
            ? 1.0 - static_cast<double>(on_time) / static_cast<double>(resolved)
            : 0.0;
    rec.throughput_mbps_mean =
        window_throughput.empty() ? 0.0 : mean(window_throughput);
    rec.goodput_mbps_mean = window_goodput.empty() ? 0.0 : mean(window_goodput);
    for (int t = 0; t < 3; ++t) {
      const auto& tt = type_throughput[static_cast<std::size_t>(t)];
      const auto& tg = type_goodput[static_cast<std::size_t>(t)];
      rec.type_throughput_mbps[static_cast<std::size_t>(t)] = tt.empty() ? 0.0 : mean(tt);
      rec.type_goodput_mbps[static_cast<std::size_t>(t)] = tg.empty() ? 0.0 : mean(tg);
    }
  }
};

class CsvFile {
 public:
  CsvFile() = default;
  void open(const std::string& path, const std::string& header) {
    out_.open(path);
    if (!out_) throw std::runtime_error("cannot open " + path + " for writing");
    out_ << header << "\n";
  }
  void row(const std::string& line) {
    if (out_.is_open()) out_ << line << "\n";
  }
  bool enabled() const { return out_.is_open(); }

 private:
  std::ofstream out_;
};

RunRecord run_aps(const ExperimentConfig& config, std::uint64_t seed,
                  CsvFile& kpi_csv) {
  RunRecord rec;
  rec.algorithm = config.algorithm;
  rec.ring = config.ring;
  rec.seed = seed;

  sim::XrEnv env(config.scenario, seed);
  std::array<aps::ApsConfig, sim::kNumTraffic> cfgs;
  for (int t = 0; t < sim::kNumTraffic; ++t) {
    aps::ApsConfig c = config.aps;
    const sim::FlowSpec& spec = config.scenario.flows[static_cast<std::size_t>(t)];
    c.a_min = spec.min_rate_mbps;
    c.a_max = spec.max_rate_mbps;
    cfgs[static_cast<std::size_t>(t)] = c;
  }

  EvalAccumulator acc;
  for (int e = 0; e < config.eval_episodes; ++e) {
    env.reset(mix_seed(seed, 50000 + static_cast<std::uint64_t>(e)));
    aps::ApsController controller(cfgs);
    std::array<double, 3> rates = controller.initial_rates();
    bool failed = false;
    int w = 0;
    while (!env.done()) {
      sim::StepResult result = env.step_window(rates);
      acc.add_window(result.kpi, result.team_reward);
      kpi_csv.row(sim::kpi_csv_row(e, w, result.kpi, result.team_reward,
                                   result.done));
      if (result.done) {
        failed = true;
        break;
      }
      rates = controller.act(result.kpi);
      w += 1;
    }
    acc.episode_ok.push_back(!failed);
    rec.env_steps += w + (failed ? 1 : 0);
  }
  acc.finish(rec);
  return rec;
}

RunRecord run_rl(const ExperimentConfig& config, std::uint64_t seed,
                 CsvFile& kpi_csv, CsvFile& train_csv,
                 const std::string& checkpoint_path) {
  RunRecord rec;
  rec.algorithm = config.algorithm;
  rec.ring = config.ring;
  rec.seed = seed;

  rl::Hyperparams hp = config.hp;
  hp.mode = rl::mode_from_name(config.algorithm);
  rl::XrTeamEnv env(config.scenario, hp.action_levels, seed);
  rl::Learner learner(env, hp, seed);

  int episode = 0;
  while (episode < config.max_episodes &&
         learner.env_steps() < hp.max_env_steps) {
    int window = 0;
    auto hook = [&](int, double reward, bool terminal) {
      kpi_csv.row(sim::kpi_csv_row(episode, window, env.last_kpi(), reward,
                                   terminal));
      window += 1;
    };
    auto result = learner.run_episode(
        env, mix_seed(seed, static_cast<std::uint64_t>(episode)), true, hook);
    double loss = std::numeric_limits<double>::quiet_NaN();
    if (learner.can_train()) {
      if (auto l = learner.train_step()) loss = *l;
    }
    EpisodeLog log;
    log.step = learner.env_steps();
    log.episode = episode;
    log.epsilon = result.epsilon;
    log.loss = loss;
    log.reward = result.return_sum;
    log.success = result.success;
    rec.train_episodes.push_back(log);
    train_csv.row(std::to_string(log.step) + "," + std::to_string(log.episode) +
                  "," + fmt(log.epsilon) + "," + fmt(log.loss) + "," +
                  fmt(log.reward) + "," + (log.success ? "1" : "0"));
    episode += 1;
  }
  rec.env_steps = learner.env_steps();

  if (!checkpoint_path.empty()) learner.save_checkpoint(checkpoint_path);

  EvalAccumulator acc;
  for (int e = 0; e < config.eval_episodes; ++e) {
    int window = 0;
    const int kpi_episode = episode + e;
    auto hook = [&](int, double reward, bool terminal) {
      kpi_csv.row(sim::kpi_csv_row(kpi_episode, window, env.last_kpi(), reward,
                                   terminal));
      acc.add_window(env.last_kpi(), reward);
      window += 1;
    };
    auto result = learner.run_episode(
        env, mix_seed(seed, 100000 + static_cast<std::uint64_t>(e)), false, hook);
    acc.episode_ok.push_back(result.success);
  }
  acc.finish(rec);

  if (learner.mask_audit().disabled_returned != 0 ||
      !learner.mask_audit().table_monotone) {
    throw std::logic_error("masking invariant violated during run");
  }
  return rec;
}

}  // namespace

double success_rate(const std::vector<bool>& episode_ok) {
  if (episode_ok.empty()) {
    throw std::invalid_argument("success_rate: no episodes");
  }
  long ok = 0;
  for (bool b : episode_ok) ok += b ? 1 : 0;
  return static_cast<double>(ok) / static_cast<double>(episode_ok.size());
}

std::string train_log_header() {
  return "step,episode,epsilon,loss,team_reward,success";
}

std::string runs_csv_header() {
  return "algorithm,ring,seed,train_episodes,env_steps,eval_episodes,"
         "success_rate,reward_mean,xqi_mean,jitter_ms_mean,delay_ms_mean,"
         "plr_mean,throughput_mbps_mean,goodput_mbps_mean,"
         "ar_throughput_mbps,vr_throughput_mbps,cg_throughput_mbps,"
         "ar_goodput_mbps,vr_goodput_mbps,cg_goodput_mbps";
}

std::string aggregate_csv_header() {
  return "algorithm,ring,n_runs,success_rate_mean,success_rate_ci95,"
         "reward_mean,reward_ci95,xqi_mean,xqi_ci95,jitter_ms_mean,"
         "jitter_ms_ci95,delay_ms_mean,delay_ms_ci95,plr_mean,plr_ci95,"
         "throughput_mbps_mean,throughput_mbps_ci95,goodput_mbps_mean,"
         "goodput_mbps_ci95";
}

RunRecord run_single(const ExperimentConfig& config, std::uint64_t seed,
                     bool write_files) {
  CsvFile kpi_csv;
  CsvFile train_csv;
  std::string checkpoint_path;
  if (write_files) {
    const fs::path dir(config.out_dir);
    fs::create_directories(dir);
    sim::XrEnv probe(config.scenario, seed);
    kpi_csv.open((dir / ("kpi_" + run_tag(config.algorithm, config.ring, seed) +
                         ".csv")).string(),
                 sim::kpi_csv_header(probe.flow_names()));
    if (config.algorithm != "aps") {
      train_csv.open((dir / ("train_" +
                             run_tag(config.algorithm, config.ring, seed) +
                             ".csv")).string(),
                     train_log_header());
      checkpoint_path = (dir / ("checkpoint_" +
                                run_tag(config.algorithm, config.ring, seed) +
                                ".txt")).string();
    }
  }
  if (config.algorithm == "aps") {
    return run_aps(config, seed, kpi_csv);
  }
  return run_rl(config, seed, kpi_csv, train_csv, checkpoint_path);
}

std::vector<RunRecord> run_experiment(const ExperimentConfig& config) {
  config.validate();
  std::vector<RunRecord> records(config.seeds.size());
  std::vector<std::exception_ptr> errors(config.seeds.size());

  const unsigned workers = std::min<unsigned>(
      std::max(1u, std::thread::hardware_concurrency()),
      static_cast<unsigned>(config.seeds.size()));
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= config.seeds.size()) return;
      try {
        records[i] = run_single(config, config.seeds[i], true);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
  return records;
}

namespace {

std::string runs_csv_row(const RunRecord& r) {
  std::string row = r.algorithm + "," + std::to_string(r.ring) + "," +
                    std::to_string(r.seed) + "," +
                    std::to_string(r.train_episodes.size()) + "," +
                    std::to_string(r.env_steps) + "," +
                    std::to_string(r.eval_episodes);
  for (double v : {r.success_rate, r.reward_mean, r.xqi_mean, r.jitter_ms_mean,
                   r.delay_ms_mean, r.plr_mean, r.throughput_mbps_mean,
                   r.goodput_mbps_mean, r.type_throughput_mbps[0],
                   r.type_throughput_mbps[1], r.type_throughput_mbps[2],
                   r.type_goodput_mbps[0], r.type_goodput_mbps[1],
                   r.type_goodput_mbps[2]}) {
    row += "," + fmt(v);
  }
  return row;
}

struct GroupStats {
  std::vector<double> success, reward, xqi, jitter, delay, plr, thr, good;
  std::array<std::vector<double>, 3> type_thr, type_good;
};

}  // namespace

void emit_outputs(const std::vector<RunRecord>& records,
                  const ExperimentConfig& config, const std::string& out_dir) {
  if (records.empty()) {
    throw std::invalid_argument("emit_outputs: no run records");
  }
  const fs::path dir(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);

  // runs.csv, one row per run, in record order
  {
    std::ofstream out(dir / "runs.csv");
    if (!out) throw std::runtime_error("cannot write runs.csv in " + out_dir);
    out << runs_csv_header() << "\n";
    for (const RunRecord& r : records) out << runs_csv_row(r) << "\n";
  }

  // aggregate.csv keyed by (algorithm, ring)
  std::map<std::pair<std::string, int>, GroupStats> groups;
  for (const RunRecord& r : records) {
    GroupStats& g = groups[{r.algorithm, r.ring}];
    g.success.push_back(r.success_rate);
    g.reward.push_back(r.reward_mean);
    g.xqi.push_back(r.xqi_mean);
    g.jitter.push_back(r.jitter_ms_mean);
    g.delay.push_back(r.delay_ms_mean);
    g.plr.push_back(r.plr_mean);
    g.thr.push_back(r.throughput_mbps_mean);
    g.good.push_back(r.goodput_mbps_mean);
    for (int t = 0; t < 3; ++t) {
      g.type_thr[static_cast<std::size_t>(t)].push_back(
          r.type_throughput_mbps[static_cast<std::size_t>(t)]);
      g.type_good[static_cast<std::size_t>(t)].push_back(
          r.type_goodput_mbps[static_cast<std::size_t>(t)]);
    }
  }
  {
    std::ofstream out(dir / "aggregate.csv");
    if (!out) throw std::runtime_error("cannot write aggregate.csv in " + out_dir);
    out << aggregate_csv_header() << "\n";
    for (const auto& [key, g] : groups) {
      std::string row = key.first + "," + std::to_string(key.second) + "," +
                        std::to_string(g.success.size());
      for (const std::vector<double>* v :
           {&g.success, &g.reward, &g.xqi, &g.jitter, &g.delay, &g.plr, &g.thr,
            &g.good}) {
        row += "," + fmt(mean(*v)) + "," + fmt(ci95_halfwidth(*v));
      }
      out << row << "\n";
    }
  }

  if (config.write_plots) {
    const fs::path plot_dir = dir / "plots";
    fs::create_directories(plot_dir);

    // reward & success vs episode per trained (algorithm, ring) group
    for (const auto& [key, g] : groups) {
      (void)g;
      std::vector<const RunRecord*> members;
      for (const RunRecord& r : records) {
        if (r.algorithm == key.first && r.ring == key.second &&
            !r.train_episodes.empty()) {
          members.push_back(&r);
        }
      }
      if (members.empty()) continue;
      std::size_t epochs = members.front()->train_episodes.size();
      for (const RunRecord* r : members) {
        epochs = std::min(epochs, r->train_episodes.size());
      }
      Series reward_series, success_series;
      reward_series.label = "mean window reward";
      success_series.label = "success rate (trailing 100)";
      std::vector<bool> window_ok;
      for (std::size_t e = 0; e < epochs; ++e) {
        std::vector<double> rewards;
        double ok = 0.0;
        for (const RunRecord* r : members) {
          const EpisodeLog& log = r->train_episodes[e];
          const long len = (e == 0) ? log.step
                                    : log.step - r->train_episodes[e - 1].step;
          rewards.push_back(log.reward / std::max<long>(1, len));
          ok += log.success ? 1.0 : 0.0;
        }
        reward_series.x.push_back(static_cast<double>(e));
        reward_series.y.push_back(mean(rewards));
        reward_series.band.push_back(ci95_halfwidth(rewards));
        window_ok.push_back(ok / static_cast<double>(members.size()) > 0.5);
        const std::size_t from = e >= 99 ? e - 99 : 0;
        double acc = 0.0;
        for (std::size_t i = from; i <= e; ++i) acc += window_ok[i] ? 1.0 : 0.0;
        success_series.x.push_back(static_cast<double>(e));
        success_series.y.push_back(acc / static_cast<double>(e - from + 1));
      }
      SvgPlot plot("Training: " + key.first + ", ring " +
                       std::to_string(key.second),
                   "episode", "reward / success");
      plot.add(reward_series);
      plot.add(success_series);
      plot.write((plot_dir / ("reward_success_vs_episode_" + key.first +
                              "_ring" + std::to_string(key.second) + ".svg"))
                     .string());
    }

    // KPI vs ring, one series per algorithm
    std::set<std::string> algos;
    std::set<int> rings;
    for (const RunRecord& r : records) {
      algos.insert(r.algorithm);
      rings.insert(r.ring);
    }
    struct Metric {
      const char* file;
      const char* title;
      std::vector<double> GroupStats::*field;
    };
    const std::vector<Metric> metrics = {
        {"xqi_vs_ring.svg", "XR quality index vs ring", &GroupStats::xqi},
        {"jitter_vs_ring.svg", "Jitter vs ring", &GroupStats::jitter},
        {"delay_vs_ring.svg", "Delay vs ring", &GroupStats::delay},
        {"plr_vs_ring.svg", "Packet loss ratio vs ring", &GroupStats::plr},
    };
    for (const Metric& metric : metrics) {
      SvgPlot plot(metric.title, "ring outer radius (m)", metric.title);
      for (const std::string& algo : algos) {
        Series s;
        s.label = algo;
        for (int ring : rings) {
          auto it = groups.find({algo, ring});
          if (it == groups.end()) continue;
          s.x.push_back(ring_bounds(ring).second);
          s.y.push_back(mean(it->second.*(metric.field)));
          s.band.push_back(ci95_halfwidth(it->second.*(metric.field)));
        }
        plot.add(s);
      }
      plot.write((plot_dir / metric.file).string());
    }

    // per-traffic throughput / goodput vs ring
    const char* type_names[3] = {"ar", "vr", "cg"};
    for (int which = 0; which < 2; ++which) {
      SvgPlot plot(which == 0 ? "Throughput vs ring" : "Goodput vs ring",
                   "ring outer radius (m)", "Mbps");
      for (const std::string& algo : algos) {
        for (int t = 0; t < 3; ++t) {
          Series s;
          s.label = algo + " " + type_names[t];
          for (int ring : rings) {
            auto it = groups.find({algo, ring});
            if (it == groups.end()) continue;
            const auto& v = which == 0
                                ? it->second.type_thr[static_cast<std::size_t>(t)]
                                : it->second.type_good[static_cast<std::size_t>(t)];
            s.x.push_back(ring_bounds(ring).second);
            s.y.push_back(mean(v));
            s.band.push_back(ci95_halfwidth(v));
          }
          plot.add(s);
        }
      }
      plot.write(
          (plot_dir / (which == 0 ? "throughput_vs_ring.svg" : "goodput_vs_ring.svg"))
              .string());
    }
  }

  // metadata: config echo, versions, timestamp (timestamps live only here)
  {
    nlohmann::json meta;
    meta["config"] = config.echo();
    meta["versions"] = {
        {"project", "0.1.0"},
        {"compiler", __VERSION__},
        {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                      std::to_string(EIGEN_MAJOR_VERSION) + "." +
                      std::to_string(EIGEN_MINOR_VERSION)}};
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    char stamp[32];
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&tt));
    meta["timestamp"] = stamp;
    std::ofstream out(dir / "metadata.json");
    if (!out) throw std::runtime_error("cannot write metadata.json in " + out_dir);
    out << meta.dump(2) << "\n";
  }
}

}  // namespace xrmarl::harness
