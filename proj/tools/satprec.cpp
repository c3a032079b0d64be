// SPDX-License-Identifier: Apache-2.0
//
// satprec: multigateway multibeam precoding simulator CLI.
//
// Subcommands: gen-channel, run, sweep, verify, modcod, overhead.
// Exit codes: 0 success, 1 bad arguments, 2 unreadable config, 3 corrupt data
// file, 4 numerical/verification failure.

#include <cstdio>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "satprec/harness.hpp"
#include "satprec/snapshot.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

using namespace satprec;

ExperimentConfig load_config(const std::string& path, bool paper_scale) {
  ExperimentConfig cfg = paper_scale ? ExperimentConfig::paper_scale() : ExperimentConfig{};
  if (!path.empty()) {
    const auto kv = KeyValueConfig::from_file(path);
    cfg = ExperimentConfig::from_config(kv);
    if (paper_scale) {
      ExperimentConfig preset = ExperimentConfig::paper_scale();
      cfg.num_beams = preset.num_beams;
      cfg.cluster_size = preset.cluster_size;
      cfg.feeds_per_beam = preset.feeds_per_beam;
      cfg.beam_spacing_deg = preset.beam_spacing_deg;
    }
  }
  return cfg;
}

void apply_overrides(ExperimentConfig& cfg, int scenario, double power_dbw, long long drops,
                     long long seed) {
  if (scenario > 0) {
    Index group = 0;
    cfg.cooperation = scenario_kind(scenario, group);
    cfg.group_size = group;
  }
  if (power_dbw > -1e8) cfg.power_dbw = power_dbw;
  if (drops > 0) cfg.drops = static_cast<Index>(drops);
  if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
  cfg.validate();
}

int cmd_gen_channel(const ExperimentConfig& cfg, const std::string& out_dir) {
  const auto ctx = ExperimentContext::build(cfg);
  std::filesystem::create_directories(out_dir);
  for (Index d = 0; d < cfg.drops; ++d) {
    Rng user = Rng::stream(cfg.seed, d, RngPurpose::UserPlacement);
    Rng rain = Rng::stream(cfg.seed, d, RngPurpose::RainFading);
    const auto drop = assemble_channel(ctx.geometry, ctx.layout, cfg.rain, user, rain);
    MatrixSnapshot snap;
    snap.kind = SnapshotKind::Channel;
    snap.seed = cfg.seed;
    snap.num_gateways = static_cast<std::uint32_t>(ctx.layout.num_gateways);
    snap.matrix = drop.channel.entries;
    char name[64];
    std::snprintf(name, sizeof(name), "channel_%06lld.spmx", static_cast<long long>(d));
    write_snapshot(out_dir + "/" + name, snap);
  }
  std::cout << cfg.drops << " channel drops written to " << out_dir << "\n";
  return kExitOk;
}

int cmd_run(const ExperimentConfig& cfg, const std::string& out_dir, int threads,
            bool save_precoders) {
  const auto ctx = ExperimentContext::build(cfg);
  std::filesystem::create_directories(out_dir);
  const auto drops = run_experiment(ctx, threads);
  const auto summary = summarize_drops(drops);
  write_results_csv(out_dir + "/results.csv", ctx, drops);
  write_summary_json(out_dir + "/summary.json", ctx, summary);
  if (save_precoders) {
    Rng user = Rng::stream(cfg.seed, 0, RngPurpose::UserPlacement);
    Rng rain = Rng::stream(cfg.seed, 0, RngPurpose::RainFading);
    const auto drop = assemble_channel(ctx.geometry, ctx.layout, cfg.rain, user, rain);
    const auto set = build_precoders(drop.channel, ctx.scheme, cfg.power_watts(), cfg.flavor,
                                     cfg.mmse_reg);
    MatrixSnapshot snap;
    snap.kind = SnapshotKind::Precoder;
    snap.seed = cfg.seed;
    snap.num_gateways = static_cast<std::uint32_t>(ctx.layout.num_gateways);
    snap.flavor = static_cast<std::uint8_t>(cfg.flavor);
    snap.alpha = set.alpha;
    snap.matrix = set.total;
    write_snapshot(out_dir + "/precoder_drop0.spmx", snap);
  }
  std::cout << "scenario " << cooperation_name(ctx.scheme) << ": " << summary.drops_ok << "/"
            << summary.drops_requested << " drops, mean user efficiency "
            << summary.user_efficiency.mean << " bit/symbol\n";
  if (summary.drops_excluded > 0) {
    std::cout << summary.drops_excluded << " drops excluded (see summary.json)\n";
  }
  return kExitOk;
}

int cmd_verify(long long instances, long long interlacing, std::uint64_t seed) {
  Rng rng = Rng::stream(seed, 0, RngPurpose::TestData);
  long long theorem_ok = 0;
  for (long long i = 0; i < instances; ++i) {
    const Index G = 2 + static_cast<Index>(rng.next_u64() % 3);
    const Index ng = 1 + static_cast<Index>(rng.next_u64() % 4);
    const Index K = 1 + static_cast<Index>(rng.next_u64() % 20);
    const auto layout = make_uniform_layout(G, 1, ng);
    FeederLinkModel model;
    model.rho = rng.uniform();
    model.num_interferers = static_cast<Index>(rng.next_u64() % G);
    const CMatX h_f = feeder_matrix<double>(model, layout);
    CMatX h_u(K, layout.num_feeds);
    for (Index r = 0; r < K; ++r) {
      for (Index c = 0; c < layout.num_feeds; ++c) h_u(r, c) = rng.complex_normal();
    }
    const double power = db_to_linear(rng.uniform(10.0, 30.0));
    const auto check = verify_theorem1<double>(h_u, h_f, static_cast<double>(G), power);
    if (check.holds) ++theorem_ok;
  }
  std::cout << theorem_ok << "/" << instances << " theorem instances hold\n";

  long long inter_ok = 0, inter_all = 0;
  for (long long i = 0; i < interlacing; ++i) {
    const Index rows = 4 + static_cast<Index>(rng.next_u64() % 9);
    const Index cols = 2 + static_cast<Index>(rng.next_u64() % (rows - 1));
    CMatX d(rows, cols);
    for (Index r = 0; r < rows; ++r) {
      for (Index c = 0; c < cols; ++c) d(r, c) = rng.complex_normal();
    }
    for (Index r = 1; r < cols; ++r) {
      ++inter_all;
      if (check_interlacing<double>(d, r)) ++inter_ok;
    }
  }
  std::cout << inter_ok << "/" << inter_all << " interlacing chains hold\n";

  const bool pass = theorem_ok == instances && inter_ok == inter_all;
  std::cout << (pass ? "verification passed\n" : "verification FAILED\n");
  return pass ? kExitOk : kExitNumeric;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multigateway multibeam satellite precoding simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  int scenario = 0;
  double power_dbw = -1e9;
  long long drops = 0;
  long long seed = -1;
  int threads = 1;
  bool paper_scale = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "key=value config file");
    cmd->add_option("--scenario", scenario, "scenario id 1..6")->check(CLI::Range(1, 6));
    cmd->add_option("--power-dbw", power_dbw, "total transmit power [dBW]");
    cmd->add_option("--drops", drops, "Monte Carlo drops");
    cmd->add_option("--seed", seed, "master seed");
    cmd->add_flag("--paper-scale", paper_scale, "K=100, G=14 preset layout");
  };

  auto* gen = app.add_subcommand("gen-channel", "write channel drop snapshots");
  add_common(gen);
  gen->add_option("--out", out_dir, "output directory");

  auto* run = app.add_subcommand("run", "run a scenario and write results");
  add_common(run);
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  bool save_precoders = false;
  run->add_flag("--save-precoders", save_precoders, "snapshot the drop-0 precoder");

  auto* sweep = app.add_subcommand("sweep", "power or interferer sweeps");
  add_common(sweep);
  sweep->add_option("--out", out_dir, "output directory");
  sweep->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  std::vector<double> power_list;
  std::vector<long long> interferer_list;
  sweep->add_option("--power", power_list, "power sweep points [dBW]");
  sweep->add_option("--interferers", interferer_list, "interferer count sweep points");
  double sweep_rho = -1.0;
  sweep->add_option("--rho", sweep_rho, "feeder coupling for interferer sweeps");

  auto* verify = app.add_subcommand("verify", "run the numerical property suites");
  long long instances = 1000;
  long long interlacing = 500;
  long long verify_seed = 20240901;
  verify->add_option("--instances", instances, "theorem-1 instances");
  verify->add_option("--interlacing", interlacing, "interlacing matrices");
  verify->add_option("--seed", verify_seed, "suite seed");

  auto* modcod_cmd = app.add_subcommand("modcod", "SINR [dB] -> efficiency lookup");
  double sinr_db = 0.0;
  std::string table_path;
  modcod_cmd->add_option("--sinr-db", sinr_db, "input SINR in dB")->required();
  modcod_cmd->add_option("--table", table_path, "MODCOD CSV override");

  auto* overhead_cmd = app.add_subcommand("overhead", "inter-gateway CSI sharing counts");
  long long oh_ng = 11, oh_k = 100, oh_kg = 7, oh_g = 14;
  std::string oh_scheme = "gcm";
  bool per_gateway = false;
  overhead_cmd->add_option("--ng", oh_ng, "feeds per gateway");
  overhead_cmd->add_option("--k", oh_k, "total beams");
  overhead_cmd->add_option("--kg", oh_kg, "beams per cluster");
  overhead_cmd->add_option("--g", oh_g, "gateways");
  overhead_cmd->add_option("--scheme", oh_scheme, "icm|4gc|7gc|gcm|lmc|ref");
  overhead_cmd->add_flag("--per-gateway", per_gateway, "print the per-gateway count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen->parsed() || run->parsed() || sweep->parsed()) {
      ExperimentConfig cfg;
      try {
        cfg = load_config(config_path, paper_scale);
      } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
      }
      apply_overrides(cfg, scenario, power_dbw, drops, seed);
      if (gen->parsed()) return cmd_gen_channel(cfg, out_dir);
      if (run->parsed()) return cmd_run(cfg, out_dir, threads, save_precoders);
      std::filesystem::create_directories(out_dir);
      if (!power_list.empty()) {
        const auto points = sweep_power(cfg, power_list, threads);
        write_sweep_csv(out_dir + "/sweep_power.csv", points);
        std::cout << points.size() << " power points written\n";
      }
      if (!interferer_list.empty()) {
        if (sweep_rho >= 0.0) cfg.feeder.rho = sweep_rho;
        if (cfg.feeder.rho == 0.0) cfg.feeder.rho = 1.0;  // worst case default
        std::vector<Index> ms(interferer_list.begin(), interferer_list.end());
        const auto points = sweep_interferers(cfg, ms, threads);
        write_sweep_csv(out_dir + "/sweep_interferers.csv", points);
        std::cout << points.size() << " interferer points written\n";
      }
      if (power_list.empty() && interferer_list.empty()) {
        std::cerr << "sweep: provide --power or --interferers\n";
        return kExitUsage;
      }
      return kExitOk;
    }
    if (verify->parsed()) return cmd_verify(instances, interlacing, static_cast<std::uint64_t>(verify_seed));
    if (modcod_cmd->parsed()) {
      ModcodTable table;
      if (!table_path.empty()) {
        try {
          table = ModcodTable::from_csv(table_path);
        } catch (const std::exception& e) {
          std::cerr << "table error: " << e.what() << "\n";
          return kExitData;
        }
      }
      std::printf("%.3f\n", table.efficiency(sinr_db));
      return kExitOk;
    }
    if (overhead_cmd->parsed()) {
      Index group = 0;
      CooperationKind kind = parse_cooperation(oh_scheme);
      if (kind == CooperationKind::GroupCollab) group = oh_scheme == "4gc" ? 4 : 7;
      const long long per = overhead_per_gateway(kind, group, static_cast<Index>(oh_ng),
                                                 static_cast<Index>(oh_k), static_cast<Index>(oh_kg),
                                                 static_cast<Index>(oh_g));
      std::cout << (per_gateway ? per : per * oh_g) << "\n";
      return kExitOk;
    }
  } catch (const SnapshotError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitUsage;
}
