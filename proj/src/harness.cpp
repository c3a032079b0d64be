// SPDX-License-Identifier: Apache-2.0
#include "satprec/harness.hpp"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "satprec/impairments.hpp"

namespace satprec {

ExperimentContext ExperimentContext::build(const ExperimentConfig& config) {
  config.validate();
  ExperimentContext ctx;
  ctx.config = config;
  ctx.grid = make_hex_grid(config.num_beams, config.cluster_size, config.beam_spacing_deg,
                           config.geometry.coverage_center_lonlat);
  ctx.layout = layout_from_grid(ctx.grid, config.feeds_per_beam);
  GeometryConfig gc = config.geometry;
  gc.beam_spacing_deg = config.beam_spacing_deg;
  ctx.geometry = build_geometry(gc, ctx.grid, ctx.layout);
  ctx.scheme = make_scheme(config.cooperation, ctx.layout.num_gateways, config.group_size);
  if (config.feeder.num_interferers > 0 && config.feeder.rho > 0.0) {
    ctx.feeder = feeder_matrix<double>(config.feeder, ctx.layout);
  } else {
    ctx.feeder = CMatX::Identity(ctx.layout.num_feeds, ctx.layout.num_feeds);
  }
  return ctx;
}

PrecoderSet build_precoders(const ChannelMatrix& csi, const CooperationScheme& scheme,
                            double total_power, PrecoderFlavor flavor, MmseRegMode reg) {
  PrecoderSet set;
  set.flavor = flavor;
  if (scheme.kind == CooperationKind::SingleGatewayRef) {
    const auto res = single_gateway_precoder(csi.entries, total_power, flavor, reg);
    set.total = res.block;
    set.beta.resize(1);
    set.beta(0) = res.beta;
    set.alpha = res.alpha;
    return set;
  }
  const Index G = csi.layout.num_gateways;
  std::vector<CMatX> blocks(G);
  set.beta.resize(G);
  for (Index g = 0; g < G; ++g) {
    const CsiView view = effective_csi(scheme, g, csi);
    const auto res = precoder_for_view(view, csi.layout, total_power, flavor, reg);
    blocks[g] = res.block;
    set.inner.push_back(res.inner);
    set.projectors.push_back(res.projector);
    set.beta(g) = res.beta;
    if (g == 0) set.alpha = res.alpha;
  }
  set.total = assemble_total<double>(blocks, csi.layout);
  set.blocks = std::move(blocks);
  return set;
}

VecX gateway_leakage(const ChannelMatrix& channel, const CMatX& total) {
  const ClusterLayout& layout = channel.layout;
  VecX out(layout.num_gateways);
  for (Index g = 0; g < layout.num_gateways; ++g) {
    const auto [first, count] = layout.feeds_of_gateway[g];
    const auto& beams = layout.beams_of_cluster[g];
    CMatX t_g(count, static_cast<Index>(beams.size()));
    for (Index j = 0; j < static_cast<Index>(beams.size()); ++j) {
      t_g.col(j) = total.block(first, beams[j], count, 1);
    }
    const CMatX h_g = channel.gateway_columns(g);
    double own = 0.0, other = 0.0;
    for (Index k = 0; k < layout.num_beams; ++k) {
      const double e = (h_g.row(k) * t_g).squaredNorm();
      if (layout.cluster_of_beam(k) == g) {
        own += e;
      } else {
        other += e;
      }
    }
    out(g) = own > 0.0 ? std::sqrt(other / own) : std::numeric_limits<double>::infinity();
  }
  return out;
}

DropResult run_drop(const ExperimentContext& ctx, Index drop_index) {
  const ExperimentConfig& cfg = ctx.config;
  DropResult result;
  result.drop_index = drop_index;
  result.seed = cfg.seed;
  result.scenario = cooperation_name(ctx.scheme);

  Rng user_rng = Rng::stream(cfg.seed, static_cast<std::uint64_t>(drop_index), RngPurpose::UserPlacement);
  Rng rain_rng = Rng::stream(cfg.seed, static_cast<std::uint64_t>(drop_index), RngPurpose::RainFading);

  try {
    const ChannelDrop drop = assemble_channel(ctx.geometry, ctx.layout, cfg.rain, user_rng, rain_rng);
    const bool feeder_on = ctx.config.feeder.num_interferers > 0 && ctx.config.feeder.rho > 0.0;

    ChannelMatrix physical = drop.channel;
    if (feeder_on) physical.entries = apply_feeder<double>(drop.channel.entries, ctx.feeder);

    ChannelMatrix csi = cfg.feeder_known_at_gateway ? physical : drop.channel;
    if (cfg.csi_max_feeds > 0 && cfg.csi_max_feeds < ctx.layout.num_feeds) {
      csi.entries = feed_subset_limit<double>(csi.entries, cfg.csi_max_feeds);
    }
    if (cfg.csi_quantized) csi.entries = quantize_csi<double>(csi.entries);

    const double power = cfg.power_watts();
    const PrecoderSet set = build_precoders(csi, ctx.scheme, power, cfg.flavor, cfg.mmse_reg);

    const VecX snr = sinr<double>(physical.entries, set.total);
    result.sinr_db.resize(snr.size());
    result.efficiency_bps.resize(snr.size());
    for (Index k = 0; k < snr.size(); ++k) {
      result.sinr_db(k) = linear_to_db(snr(k));
      result.efficiency_bps(k) = ctx.modcod.efficiency(result.sinr_db(k));
    }
    result.sum_efficiency = result.efficiency_bps.sum();

    const auto pair = smse<double>(drop.channel.entries, ctx.feeder,
                                   static_cast<double>(ctx.layout.num_gateways), power);
    result.smse_no_interference = pair.no_interference;
    result.smse_interference = pair.interference;
    result.overhead_total = overhead_count(ctx.scheme, ctx.layout).total;
    if (ctx.scheme.kind != CooperationKind::SingleGatewayRef) {
      result.leakage_ratio = gateway_leakage(physical, set.total);
    }
  } catch (const std::exception& e) {
    result.excluded = true;
    result.exclusion_reason = e.what();
  }
  return result;
}

std::vector<DropResult> run_experiment(const ExperimentContext& ctx, int threads) {
  const Index n = ctx.config.drops;
  std::vector<DropResult> results(n);
  if (threads <= 1) {
    for (Index d = 0; d < n; ++d) results[d] = run_drop(ctx, d);
    return results;
  }
  std::vector<std::thread> pool;
  std::atomic<Index> next{0};
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&]() {
      while (true) {
        const Index d = next.fetch_add(1);
        if (d >= n) break;
        results[d] = run_drop(ctx, d);
      }
    });
  }
  for (auto& th : pool) th.join();
  return results;
}

ExperimentSummary summarize_drops(const std::vector<DropResult>& drops) {
  ExperimentSummary s;
  s.drops_requested = static_cast<Index>(drops.size());
  std::vector<double> user_eff, sum_eff;
  std::vector<double> sinrs;
  double smse_no = 0.0, smse_int = 0.0;
  for (const auto& d : drops) {
    if (d.excluded) {
      ++s.drops_excluded;
      s.exclusion_reasons.push_back("drop " + std::to_string(d.drop_index) + ": " + d.exclusion_reason);
      continue;
    }
    ++s.drops_ok;
    for (Index k = 0; k < d.efficiency_bps.size(); ++k) {
      user_eff.push_back(d.efficiency_bps(k));
      sinrs.push_back(d.sinr_db(k));
    }
    sum_eff.push_back(d.sum_efficiency);
    smse_no += d.smse_no_interference;
    smse_int += d.smse_interference;
    s.overhead_total = d.overhead_total;
  }
  if (s.drops_ok > 0) {
    s.user_efficiency = summarize(user_eff);
    s.drop_sum_efficiency = summarize(sum_eff);
    s.mean_sinr_db = summarize(sinrs).mean;
    s.mean_smse_no_interference = smse_no / static_cast<double>(s.drops_ok);
    s.mean_smse_interference = smse_int / static_cast<double>(s.drops_ok);
  }
  return s;
}

std::vector<SweepPoint> sweep_power(const ExperimentConfig& config,
                                    const std::vector<double>& powers_dbw, int threads) {
  if (powers_dbw.empty()) throw std::invalid_argument("sweep_power: empty power list");
  std::vector<SweepPoint> out;
  for (double p : powers_dbw) {
    ExperimentConfig c = config;
    c.power_dbw = p;
    const auto ctx = ExperimentContext::build(c);
    SweepPoint pt;
    pt.sweep = "power_dbw";
    pt.value = p;
    pt.scenario = cooperation_name(ctx.scheme);
    pt.flavor = c.flavor == PrecoderFlavor::Mmse ? "mmse" : "zf";
    pt.summary = summarize_drops(run_experiment(ctx, threads));
    out.push_back(std::move(pt));
  }
  return out;
}

std::vector<SweepPoint> sweep_interferers(const ExperimentConfig& config,
                                          const std::vector<Index>& interferer_counts,
                                          int threads) {
  if (interferer_counts.empty()) throw std::invalid_argument("sweep_interferers: empty list");
  std::vector<SweepPoint> out;
  for (Index m : interferer_counts) {
    ExperimentConfig c = config;
    c.feeder.num_interferers = m;
    const auto ctx = ExperimentContext::build(c);
    SweepPoint pt;
    pt.sweep = "interferers";
    pt.value = static_cast<double>(m);
    pt.scenario = cooperation_name(ctx.scheme);
    pt.flavor = c.flavor == PrecoderFlavor::Mmse ? "mmse" : "zf";
    pt.summary = summarize_drops(run_experiment(ctx, threads));
    out.push_back(std::move(pt));
  }
  return out;
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

void write_results_csv(const std::string& path, const ExperimentContext& ctx,
                       const std::vector<DropResult>& drops) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "drop,seed,scenario,user,beam,cluster,sinr_db,efficiency_bps\n";
  for (const auto& d : drops) {
    if (d.excluded) continue;
    for (Index k = 0; k < d.sinr_db.size(); ++k) {
      out << d.drop_index << ',' << d.seed << ',' << d.scenario << ',' << k << ',' << k << ','
          << ctx.layout.cluster_of_beam(k) << ',' << fmt(d.sinr_db(k)) << ','
          << fmt(d.efficiency_bps(k)) << '\n';
    }
  }
}

void write_summary_json(const std::string& path, const ExperimentContext& ctx,
                        const ExperimentSummary& summary) {
  nlohmann::json j;
  j["scenario"] = cooperation_name(ctx.scheme);
  j["flavor"] = ctx.config.flavor == PrecoderFlavor::Mmse ? "mmse" : "zf";
  j["power_dbw"] = ctx.config.power_dbw;
  j["seed"] = ctx.config.seed;
  j["layout"] = {{"beams", ctx.layout.num_beams},
                 {"feeds", ctx.layout.num_feeds},
                 {"gateways", ctx.layout.num_gateways}};
  j["drops"] = {{"requested", summary.drops_requested},
                {"ok", summary.drops_ok},
                {"excluded", summary.drops_excluded},
                {"exclusion_reasons", summary.exclusion_reasons}};
  j["user_efficiency"] = {{"mean", summary.user_efficiency.mean},
                          {"median", summary.user_efficiency.median},
                          {"p5", summary.user_efficiency.p5},
                          {"p95", summary.user_efficiency.p95}};
  j["sum_efficiency"] = {{"mean", summary.drop_sum_efficiency.mean},
                         {"median", summary.drop_sum_efficiency.median},
                         {"p5", summary.drop_sum_efficiency.p5},
                         {"p95", summary.drop_sum_efficiency.p95}};
  j["mean_sinr_db"] = summary.mean_sinr_db;
  j["smse"] = {{"convention", "eigenvalue_sum_no_prefactor"},
               {"mean_no_interference", summary.mean_smse_no_interference},
               {"mean_interference", summary.mean_smse_interference}};
  j["overhead_complex_numbers"] = summary.overhead_total;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

void write_sweep_csv(const std::string& path, const std::vector<SweepPoint>& points) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "sweep,value,scenario,flavor,drops_ok,drops_excluded,mean_user_eff,median_user_eff,"
         "p5_user_eff,p95_user_eff,mean_sum_eff,mean_sinr_db\n";
  for (const auto& p : points) {
    out << p.sweep << ',' << fmt(p.value) << ',' << p.scenario << ',' << p.flavor << ','
        << p.summary.drops_ok << ',' << p.summary.drops_excluded << ','
        << fmt(p.summary.user_efficiency.mean) << ',' << fmt(p.summary.user_efficiency.median)
        << ',' << fmt(p.summary.user_efficiency.p5) << ',' << fmt(p.summary.user_efficiency.p95)
        << ',' << fmt(p.summary.drop_sum_efficiency.mean) << ',' << fmt(p.summary.mean_sinr_db)
        << '\n';
  }
}

}  // namespace satprec
