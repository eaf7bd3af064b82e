#include "mimocov/runner.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mimocov/chanest.hpp"
#include "mimocov/channels.hpp"
#include "mimocov/covest.hpp"
#include "mimocov/parallel.hpp"
#include "mimocov/rng.hpp"
#include "mimocov/scenario.hpp"
#include "mimocov/se.hpp"

namespace mimo {

namespace {

// Stream tags; every random draw in a sweep descends from
// (seed, tag, ...) so results are invariant to the worker count.
constexpr std::uint64_t kTagFactorSearch = 1;
constexpr std::uint64_t kTagOuter = 2;
constexpr std::uint64_t kTagSeBlocks = 3;
constexpr std::uint64_t kTagValidate = 4;

std::uint64_t kind_id(ObservationKind kind) {
  switch (kind) {
    case ObservationKind::Regular: return 0;
    case ObservationKind::Clean: return 1;
    case ObservationKind::Contaminants: return 2;
  }
  return 3;
}

struct Stats {
  double mean = 0.0;
  double stderr_value = 0.0;
};

Stats mean_stderr(const std::vector<double>& x) {
  Stats st;
  const int n = static_cast<int>(x.size());
  for (double v : x) st.mean += v;
  st.mean /= n;
  if (n > 1) {
    double ss = 0.0;
    for (double v : x) ss += (v - st.mean) * (v - st.mean);
    st.stderr_value = std::sqrt(ss / (n - 1) / n);
  }
  return st;
}

struct SweepContext {
  SystemParams params;
  CovarianceSet covset;
  ChannelSampler sampler;  // observing the center BS

  explicit SweepContext(const SystemParams& p)
      : params(p),
        covset(build_covariance_set(build_geometry(p), p)),
        sampler(covset, 0) {}
};

// One covariance-estimation realization for pilot k. The observation
// streams are keyed without the sweep-point index, and observe_blocks
// extends a stream column-by-column, so larger N_R reuses the shorter
// point's observations as a prefix (common random numbers across the
// sweep).
CovSamples make_cov_samples(const SweepContext& ctx, int k, int n_q, int n_r,
                            std::uint64_t seed, std::uint64_t tag, int realization) {
  auto stream = [&](ObservationKind kind) {
    return derive_seed(seed, {tag, static_cast<std::uint64_t>(k),
                              static_cast<std::uint64_t>(realization), kind_id(kind)});
  };
  CovSamples cs;
  cs.regular = sample_covariance(observe_blocks(
      ctx.sampler, ObservationKind::Regular, k, n_q, stream(ObservationKind::Regular),
      ctx.params));
  cs.contaminants = sample_covariance(observe_blocks(
      ctx.sampler, ObservationKind::Contaminants, k, n_r,
      stream(ObservationKind::Contaminants), ctx.params));
  cs.clean = sample_covariance(observe_blocks(
      ctx.sampler, ObservationKind::Clean, k, n_r, stream(ObservationKind::Clean),
      ctx.params));
  return cs;
}

// Genie-optimized (eta, mu) for every center-cell UE and both schemes at
// one sweep point. The n_avg search realizations are shared between the
// two schemes.
struct PointFactors {
  std::vector<RegularizationFactors> viaq;     // per UE
  std::vector<RegularizationFactors> rdirect;  // per UE
};

PointFactors optimize_point_factors(const SweepContext& ctx, const ExperimentConfig& cfg,
                                    int n_r) {
  const int k_ues = ctx.params.ues_per_cell;
  const int n_q = cfg.nq_multiplier * n_r;
  PointFactors out;
  out.viaq.resize(k_ues);
  out.rdirect.resize(k_ues);
  parallel_for(k_ues, cfg.workers, [&](int k) {
    std::vector<CovSamples> realizations;
    realizations.reserve(cfg.n_avg);
    for (int r = 0; r < cfg.n_avg; ++r)
      realizations.push_back(make_cov_samples(ctx, k, n_q, n_r, cfg.seed, kTagFactorSearch, r));
    const CMatrix& r_true = ctx.covset.R(0, 0, k);
    const CMatrix& q_true = ctx.covset.Q(0, k);
    out.viaq[k] = optimize_factors(r_true, q_true, Scheme::ViaQ, ctx.params.rho_tr,
                                   realizations, cfg.grid_step);
    out.rdirect[k] = optimize_factors(r_true, q_true, Scheme::RDirect, ctx.params.rho_tr,
                                      realizations, cfg.grid_step);
  });
  return out;
}

double mean_factor(const std::vector<RegularizationFactors>& f, bool eta) {
  double s = 0.0;
  for (const auto& x : f) s += eta ? x.eta : x.mu;
  return s / static_cast<double>(f.size());
}

std::string scheme_name(Scheme s) {
  return s == Scheme::ViaQ ? "approx_viaq" : "approx_rdirect";
}

std::uint64_t estimator_id(const std::string& name) {
  if (name == "mmse") return 0;
  if (name == "ls") return 1;
  if (name == "approx_viaq") return 2;
  if (name == "approx_rdirect") return 3;
  return 99;
}

}  // namespace

void ExperimentConfig::validate() const {
  scenario.validate();
  if (sweep.empty()) throw std::invalid_argument("config: sweep must not be empty");
  for (int n_r : sweep) {
    if (n_r < 1) throw std::invalid_argument("config: sweep values must be >= 1");
    double uses = static_cast<double>(n_r) * scenario.ues_per_cell * scenario.cells;
    if (uses > scenario.tau_s * scenario.tau_c)
      throw std::invalid_argument(
          "config: covariance pilot overhead exceeds the statistics window");
  }
  if (nq_multiplier < 1) throw std::invalid_argument("config: nq_multiplier must be >= 1");
  if (n_outer < 1) throw std::invalid_argument("config: n_outer must be >= 1");
  if (n_blocks < 1) throw std::invalid_argument("config: n_blocks must be >= 1");
  if (n_avg < 1) throw std::invalid_argument("config: n_avg must be >= 1");
  if (!(grid_step > 0.0 && grid_step <= 1.0))
    throw std::invalid_argument("config: grid_step must be in (0, 1]");
  if (workers < 0) throw std::invalid_argument("config: workers must be >= 0");
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto eq = line.find('=');
    std::string key, value;
    if (eq == std::string::npos) {
      key = line;
    } else {
      key = line.substr(0, eq);
      value = line.substr(eq + 1);
    }
    auto trim = [](std::string& s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      s = (b == std::string::npos) ? std::string() : s.substr(b, e - b + 1);
    };
    trim(key);
    trim(value);
    if (key.empty()) continue;
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": missing '='");

    auto bad = [&](const std::string& why) {
      return std::invalid_argument("config line " + std::to_string(line_no) + ": " + why);
    };
    try {
      if (key == "antennas") cfg.scenario.antennas = std::stoi(value);
      else if (key == "ues_per_cell") cfg.scenario.ues_per_cell = std::stoi(value);
      else if (key == "cells") cfg.scenario.cells = std::stoi(value);
      else if (key == "tau_c") cfg.scenario.tau_c = std::stod(value);
      else if (key == "tau_s") cfg.scenario.tau_s = std::stod(value);
      else if (key == "rho_ul") cfg.scenario.rho_ul = std::stod(value);
      else if (key == "rho_tr") cfg.scenario.rho_tr = std::stod(value);
      else if (key == "spread_deg") cfg.scenario.spread_deg = std::stod(value);
      else if (key == "antenna_spacing") cfg.scenario.antenna_spacing = std::stod(value);
      else if (key == "pathloss_a") cfg.scenario.pathloss_a = std::stod(value);
      else if (key == "pathloss_b") cfg.scenario.pathloss_b = std::stod(value);
      else if (key == "inter_bs_distance") cfg.scenario.inter_bs_distance = std::stod(value);
      else if (key == "ue_ring_radius") cfg.scenario.ue_ring_radius = std::stod(value);
      else if (key == "sweep") {
        cfg.sweep.clear();
        std::stringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ',')) {
          trim(item);
          if (!item.empty()) cfg.sweep.push_back(std::stoi(item));
        }
      } else if (key == "nq_multiplier") cfg.nq_multiplier = std::stoi(value);
      else if (key == "n_outer") cfg.n_outer = std::stoi(value);
      else if (key == "n_blocks") cfg.n_blocks = std::stoi(value);
      else if (key == "n_avg") cfg.n_avg = std::stoi(value);
      else if (key == "grid_step") cfg.grid_step = std::stod(value);
      else if (key == "seed") cfg.seed = std::stoull(value);
      else if (key == "output_path") cfg.output_path = value;
      else if (key == "workers") cfg.workers = std::stoi(value);
      else throw bad("unknown key '" + key + "'");
    } catch (const std::invalid_argument&) {
      throw;
    } catch (const std::exception&) {
      throw bad("cannot parse value '" + value + "' for key '" + key + "'");
    }
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  return parse_config(in);
}

std::vector<ResultRow> run_mse_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  SweepContext ctx(cfg.scenario);
  const int k_ues = cfg.scenario.ues_per_cell;

  // N_R-independent constants.
  double mmse_const = 0.0, ls_const = 0.0;
  for (int k = 0; k < k_ues; ++k) {
    const CMatrix& r = ctx.covset.R(0, 0, k);
    const CMatrix& q = ctx.covset.Q(0, k);
    mmse_const += 1.0 - mmse_estimate_covariance(r, q).real().trace() / r.real().trace();
    ls_const += (q.real().trace() - r.real().trace()) / r.real().trace();
  }
  mmse_const /= k_ues;
  ls_const /= k_ues;

  std::vector<ResultRow> rows;
  for (int n_r : cfg.sweep) {
    const int n_q = cfg.nq_multiplier * n_r;
    PointFactors factors = optimize_point_factors(ctx, cfg, n_r);

    // Outer average of the UE-mean normalized MSE for each scheme.
    std::vector<double> viaq_outer(cfg.n_outer), rdirect_outer(cfg.n_outer);
    parallel_for(cfg.n_outer, cfg.workers, [&](int o) {
      double viaq_sum = 0.0, rdirect_sum = 0.0;
      for (int k = 0; k < k_ues; ++k) {
        CovSamples samples = make_cov_samples(ctx, k, n_q, n_r, cfg.seed, kTagOuter, o);
        const CMatrix& r_true = ctx.covset.R(0, 0, k);
        const CMatrix& q_true = ctx.covset.Q(0, k);
        for (Scheme scheme : {Scheme::ViaQ, Scheme::RDirect}) {
          const RegularizationFactors& f =
              (scheme == Scheme::ViaQ ? factors.viaq : factors.rdirect)[k];
          CMatrix q_hat = estimate_Q(samples.regular, f.eta);
          CMatrix r_hat = estimate_R(samples, scheme, f.mu, cfg.scenario.rho_tr);
          FilterMatrix w = approx_mmse_filter(r_hat, q_hat);
          double nmse = normalized_mse(w, r_true, q_true);
          (scheme == Scheme::ViaQ ? viaq_sum : rdirect_sum) += nmse;
        }
      }
      viaq_outer[o] = viaq_sum / k_ues;
      rdirect_outer[o] = rdirect_sum / k_ues;
    });

    rows.push_back({"nmse", "mmse", "none", n_r, 1.0, 1.0, mmse_const, 0.0, cfg.seed});
    rows.push_back({"nmse", "ls", "none", n_r, 0.0, 0.0, ls_const, 0.0, cfg.seed});
    Stats viaq = mean_stderr(viaq_outer);
    rows.push_back({"nmse", "approx_viaq", "none", n_r, mean_factor(factors.viaq, true),
                    mean_factor(factors.viaq, false), viaq.mean, viaq.stderr_value, cfg.seed});
    Stats rdir = mean_stderr(rdirect_outer);
    rows.push_back({"nmse", "approx_rdirect", "none", n_r, mean_factor(factors.rdirect, true),
                    mean_factor(factors.rdirect, false), rdir.mean, rdir.stderr_value,
                    cfg.seed});
  }
  return rows;
}

namespace {

// Sum over center-cell UEs of the closed-form MRC SE.
double mrc_sum_se(const SweepContext& ctx, const std::vector<CMatrix>& filters,
                  int n_r_overhead) {
  double sum = 0.0;
  for (int k = 0; k < ctx.params.ues_per_cell; ++k) {
    SinrTerms terms = mrc_sinr_closed_form(filters[k], ctx.covset, 0, k, ctx.params.rho_ul);
    sum += uatf_se(terms.sinr(), ctx.params, n_r_overhead);
  }
  return sum;
}

// Sum over center-cell UEs of the Monte-Carlo RZF SE.
double rzf_sum_se(const SweepContext& ctx, const std::vector<CMatrix>& filters,
                  int n_r_overhead, int n_blocks, Rng rng) {
  CombinerSpec spec{CombinerKind::Rzf, filters};
  std::vector<double> sinr = uatf_sinr_monte_carlo(spec, ctx.sampler, ctx.params, n_blocks, rng);
  double sum = 0.0;
  for (double g : sinr) sum += uatf_se(g, ctx.params, n_r_overhead);
  return sum;
}

}  // namespace

std::vector<ResultRow> run_se_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  SweepContext ctx(cfg.scenario);
  const int k_ues = cfg.scenario.ues_per_cell;

  // Deterministic filters for the two N_R-independent estimators.
  std::vector<CMatrix> w_mmse(k_ues), w_ls(k_ues);
  for (int k = 0; k < k_ues; ++k) {
    w_mmse[k] = mmse_filter(ctx.covset.R(0, 0, k), ctx.covset.Q(0, k)).w;
    w_ls[k] = CMatrix::Identity(cfg.scenario.antennas, cfg.scenario.antennas);
  }

  struct Cell {
    double value = 0.0;
    double stderr_value = 0.0;
    double eta = 0.0;
    double mu = 0.0;
  };

  // MMSE / LS: MRC is closed form; RZF is Monte Carlo over outer reps.
  auto baseline = [&](const std::vector<CMatrix>& filters, std::uint64_t est_id) {
    std::pair<Cell, Cell> out;  // (mrc, rzf)
    out.first.value = mrc_sum_se(ctx, filters, 0);
    std::vector<double> rzf(cfg.n_outer);
    parallel_for(cfg.n_outer, cfg.workers, [&](int o) {
      Rng rng = Rng::substream(cfg.seed, {kTagSeBlocks, est_id, 1,
                                          static_cast<std::uint64_t>(o)});
      rzf[o] = rzf_sum_se(ctx, filters, 0, cfg.n_blocks, rng);
    });
    Stats st = mean_stderr(rzf);
    out.second.value = st.mean;
    out.second.stderr_value = st.stderr_value;
    return out;
  };
  auto mmse_cells = baseline(w_mmse, estimator_id("mmse"));
  mmse_cells.first.eta = mmse_cells.first.mu = 1.0;
  mmse_cells.second.eta = mmse_cells.second.mu = 1.0;
  auto ls_cells = baseline(w_ls, estimator_id("ls"));

  std::vector<ResultRow> rows;
  for (int n_r : cfg.sweep) {
    const int n_q = cfg.nq_multiplier * n_r;
    PointFactors factors = optimize_point_factors(ctx, cfg, n_r);

    // Per scheme and combiner, outer realizations of the sum SE.
    std::vector<double> mrc_outer[2], rzf_outer[2];
    for (int s = 0; s < 2; ++s) {
      mrc_outer[s].resize(cfg.n_outer);
      rzf_outer[s].resize(cfg.n_outer);
    }
    parallel_for(cfg.n_outer, cfg.workers, [&](int o) {
      for (int s = 0; s < 2; ++s) {
        Scheme scheme = (s == 0) ? Scheme::ViaQ : Scheme::RDirect;
        std::vector<CMatrix> filters(k_ues);
        for (int k = 0; k < k_ues; ++k) {
          CovSamples samples = make_cov_samples(ctx, k, n_q, n_r, cfg.seed, kTagOuter, o);
          const RegularizationFactors& f =
              (scheme == Scheme::ViaQ ? factors.viaq : factors.rdirect)[k];
          filters[k] = approx_mmse_filter(
                           estimate_R(samples, scheme, f.mu, cfg.scenario.rho_tr),
                           estimate_Q(samples.regular, f.eta))
                           .w;
        }
        mrc_outer[s][o] = mrc_sum_se(ctx, filters, n_r);
        // Block stream shared across sweep points: common random numbers.
        Rng rng = Rng::substream(cfg.seed, {kTagSeBlocks, estimator_id(scheme_name(scheme)),
                                            1, static_cast<std::uint64_t>(o)});
        rzf_outer[s][o] = rzf_sum_se(ctx, filters, n_r, cfg.n_blocks, rng);
      }
    });

    auto push = [&](const std::string& est, const std::string& comb, const Cell& c) {
      rows.push_back({"sum_se", est, comb, n_r, c.eta, c.mu, c.value, c.stderr_value,
                      cfg.seed});
    };
    push("mmse", "mrc", mmse_cells.first);
    push("mmse", "rzf", mmse_cells.second);
    push("ls", "mrc", ls_cells.first);
    push("ls", "rzf", ls_cells.second);
    for (int s = 0; s < 2; ++s) {
      Scheme scheme = (s == 0) ? Scheme::ViaQ : Scheme::RDirect;
      const auto& fac = (scheme == Scheme::ViaQ) ? factors.viaq : factors.rdirect;
      Stats mrc = mean_stderr(mrc_outer[s]);
      Stats rzf = mean_stderr(rzf_outer[s]);
      Cell cm{mrc.mean, mrc.stderr_value, mean_factor(fac, true), mean_factor(fac, false)};
      Cell cr{rzf.mean, rzf.stderr_value, mean_factor(fac, true), mean_factor(fac, false)};
      push(scheme_name(scheme), "mrc", cm);
      push(scheme_name(scheme), "rzf", cr);
    }
  }

  // Perfect-covariance baseline, reported separately.
  for (int c = 0; c < 2; ++c) {
    CombinerKind kind = (c == 0) ? CombinerKind::Mrc : CombinerKind::Rzf;
    std::vector<double> outer(cfg.n_outer);
    parallel_for(cfg.n_outer, cfg.workers, [&](int o) {
      Rng rng = Rng::substream(cfg.seed, {kTagSeBlocks, 90, static_cast<std::uint64_t>(c),
                                          static_cast<std::uint64_t>(o)});
      std::vector<double> se = perfect_cov_se_baseline(ctx.covset, ctx.sampler, 0, kind,
                                                       ctx.params, cfg.n_blocks, rng);
      double sum = 0.0;
      for (double v : se) sum += v;
      outer[o] = sum;
    });
    Stats st = mean_stderr(outer);
    rows.push_back({"sum_se_perfect", "mmse", c == 0 ? "mrc" : "rzf", 0, 1.0, 1.0, st.mean,
                    st.stderr_value, cfg.seed});
  }
  return rows;
}

void write_csv(const std::vector<ResultRow>& rows, std::ostream& out) {
  auto fmt = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return std::string(buf);
  };
  out << "experiment,estimator,combiner,n_r,eta,mu,value,stderr,seed\n";
  for (const ResultRow& r : rows) {
    out << r.experiment << ',' << r.estimator << ',' << r.combiner << ',' << r.n_r << ','
        << fmt(r.eta) << ',' << fmt(r.mu) << ',' << fmt(r.value) << ','
        << fmt(r.stderr_value) << ',' << r.seed << '\n';
  }
}

void write_csv(const std::vector<ResultRow>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  write_csv(rows, out);
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace mimo
