#include <cmath>
#include <iostream>

#include "mimocov/chanest.hpp"
#include "mimocov/channels.hpp"
#include "mimocov/covest.hpp"
#include "mimocov/rng.hpp"
#include "mimocov/runner.hpp"
#include "mimocov/scenario.hpp"
#include "mimocov/se.hpp"

// Brute-force Monte-Carlo oracles for the closed-form expressions, run
// at desk scale (M = 8). Each oracle is independent of the
// implementation path it checks: expectations are estimated by raw
// sample means over fresh draws.

namespace mimo {

namespace {

constexpr std::uint64_t kTagValidate = 4;

SystemParams desk_params() {
  SystemParams p;
  p.antennas = 8;
  p.ues_per_cell = 2;
  p.cells = 2;
  p.tau_c = 20;
  return p;
}

// Random complex matrix with O(1) entries.
CMatrix random_matrix(int m, Rng& rng) { return rng.cgauss_matrix(m, m) / std::sqrt(m); }

// Random PSD matrix A A^H / m.
CMatrix random_psd(int m, Rng& rng) {
  CMatrix a = rng.cgauss_matrix(m, m);
  return hermitize((a * a.adjoint()) / static_cast<double>(m));
}

struct Welford {
  long n = 0;
  double mean = 0.0, m2 = 0.0;
  void add(double x) {
    ++n;
    double d = x - mean;
    mean += d / n;
    m2 += d * (x - mean);
  }
  double stderr_value() const { return n > 1 ? std::sqrt(m2 / (n - 1) / n) : 0.0; }
};

// Criterion-style scales.
constexpr long kMseDraws = 1000000;
constexpr long kMomentDraws = 1000000;
constexpr int kSinrBlocks = 200000;
constexpr int kQDraws = 100000;

// |mc - exact| relative error and sigma score for one scalar estimate.
struct OracleScore {
  double rel_err = 0.0;
  double sigma = 0.0;
  void update(double mc, double exact, double se) {
    double err = std::abs(mc - exact);
    rel_err = std::max(rel_err, err / std::max(std::abs(exact), 1e-12));
    sigma = std::max(sigma, se > 0.0 ? err / se : 0.0);
  }
};

// Filter-MSE oracle: analytic MSE vs brute-force MSE for random (W, R, Q)
// with Q - R kept PSD so (h, y) can be drawn jointly.
OracleScore filter_mse_oracle(std::uint64_t seed) {
  const int m = 8;
  OracleScore score;
  for (int inst = 0; inst < 10; ++inst) {
    Rng rng = Rng::substream(seed, {kTagValidate, 10, static_cast<std::uint64_t>(inst)});
    CMatrix r = random_psd(m, rng);
    CMatrix extra = random_psd(m, rng) + 0.1 * CMatrix::Identity(m, m);
    CMatrix q = r + extra;
    CMatrix w = random_matrix(m, rng);
    double exact = analytic_mse(w, r, q);

    GaussianSampler sample_h(r), sample_u(extra);
    Welford acc;
    for (long d = 0; d < kMseDraws; ++d) {
      CVector h = sample_h.sample(rng);
      CVector y = h + sample_u.sample(rng);
      acc.add((h - w * y).squaredNorm());
    }
    score.update(acc.mean, exact, acc.stderr_value());
  }
  return score;
}

// Combining-moment oracle: the three moments, every (l, i) branch.
OracleScore combining_moments_oracle(const CovarianceSet& covset, const ChannelSampler& sampler,
                          const SystemParams& params, std::uint64_t seed) {
  const int m = covset.antennas();
  const int j = 0, k = 0;
  Rng wrng = Rng::substream(seed, {kTagValidate, 20});
  CMatrix w = random_matrix(m, wrng);

  Rng rng = Rng::substream(seed, {kTagValidate, 21});
  Welford sig_re, sig_im, pow_acc;
  std::vector<std::vector<Welford>> interf(covset.cells(),
                                           std::vector<Welford>(covset.ues()));
  for (long d = 0; d < kMomentDraws; ++d) {
    ChannelDraw draw = sampler.draw(rng);
    CVector y = observe(ObservationKind::Regular, k, draw, rng, params);
    CVector v = w * y;
    Complex s = v.dot(draw.channel(j, k));
    sig_re.add(s.real());
    sig_im.add(s.imag());
    pow_acc.add(v.squaredNorm());
    for (int l = 0; l < covset.cells(); ++l)
      for (int i = 0; i < covset.ues(); ++i)
        interf[l][i].add(std::norm(v.dot(draw.channel(l, i))));
  }

  OracleScore score;
  for (int l = 0; l < covset.cells(); ++l)
    for (int i = 0; i < covset.ues(); ++i) {
      MrcMoments mom = mrc_moments(w, covset, j, k, l, i);
      if (l == 0 && i == 0) {
        score.update(sig_re.mean, mom.signal.real(), sig_re.stderr_value());
        score.update(sig_im.mean, mom.signal.imag(), sig_im.stderr_value());
        score.update(pow_acc.mean, mom.power, pow_acc.stderr_value());
      }
      score.update(interf[l][i].mean, mom.interference, interf[l][i].stderr_value());
    }
  return score;
}

// Fourth-moment identity: E{|h^H W h|^2} = |tr(W R)|^2 + tr(W R W^H R).
OracleScore fourth_moment_oracle(const CovarianceSet& covset, std::uint64_t seed) {
  const int m = covset.antennas();
  const CMatrix& r = covset.R(0, 0, 0);
  Rng rng = Rng::substream(seed, {kTagValidate, 30});
  CMatrix w = random_matrix(m, rng);
  double exact =
      std::norm((w * r).trace()) + (w * r * w.adjoint() * r).trace().real();

  GaussianSampler sample_h(r);
  Welford acc;
  for (long d = 0; d < kMomentDraws; ++d) {
    CVector h = sample_h.sample(rng);
    acc.add(std::norm(h.dot(w * h)));
  }
  OracleScore score;
  score.update(acc.mean, exact, acc.stderr_value());
  return score;
}

// SINR oracle: closed-form MRC SINR vs the Monte-Carlo bound.
OracleScore sinr_oracle(const CovarianceSet& covset, const ChannelSampler& sampler,
                            const SystemParams& params, std::uint64_t seed) {
  const int k = 0;
  Rng wrng = Rng::substream(seed, {kTagValidate, 40});
  CMatrix w = mmse_filter(covset.R(0, 0, k), covset.Q(0, k)).w +
              0.1 * random_matrix(covset.antennas(), wrng);
  double exact = mrc_sinr_closed_form(w, covset, 0, k, params.rho_ul).sinr();

  CombinerSpec spec{CombinerKind::Mrc, std::vector<CMatrix>(covset.ues(), w)};
  Rng rng = Rng::substream(seed, {kTagValidate, 41});
  double mc = uatf_sinr_monte_carlo(spec, sampler, params, k, kSinrBlocks, rng);
  OracleScore score;
  score.rel_err = std::abs(mc - exact) / std::abs(exact);
  return score;
}

// Empirical covariance of regular observations vs Q (Frobenius).
OracleScore q_consistency_oracle(const CovarianceSet& covset, const ChannelSampler& sampler,
                                 const SystemParams& params, std::uint64_t seed) {
  SampleCovariance sc = sample_covariance(observe_blocks(
      sampler, ObservationKind::Regular, 0, kQDraws,
      derive_seed(seed, {kTagValidate, 50}), params));
  OracleScore score;
  score.rel_err = (sc.s - covset.Q(0, 0)).norm() / covset.Q(0, 0).norm();
  return score;
}

// Exact assembly: Q(j,k) = sum_l R(j,l,k) + I/rho_tr.
OracleScore q_assembly_oracle(const CovarianceSet& covset, const SystemParams& params) {
  OracleScore score;
  const int m = covset.antennas();
  for (int j = 0; j < covset.cells(); ++j)
    for (int k = 0; k < covset.ues(); ++k) {
      CMatrix sum = (1.0 / params.rho_tr) * CMatrix::Identity(m, m);
      for (int l = 0; l < covset.cells(); ++l) sum += covset.R(j, l, k);
      score.rel_err =
          std::max(score.rel_err, max_abs(covset.Q(j, k) - sum) / max_abs(covset.Q(j, k)));
    }
  return score;
}

}  // namespace

std::vector<ResultRow> run_validation(const ExperimentConfig& config, bool& passed) {
  config.validate();
  const std::uint64_t seed = config.seed;
  SystemParams params = desk_params();
  NetworkGeometry geo = build_geometry(params);
  CovarianceSet covset = build_covariance_set(geo, params);
  ChannelSampler sampler(covset, 0);

  struct Entry {
    const char* name;
    OracleScore score;
    double rel_tol;    // 0 = sigma-score check instead
    double sigma_tol;
  };
  std::vector<Entry> entries;
  entries.push_back({"filter_mse", filter_mse_oracle(seed), 0.01, 0.0});
  entries.push_back(
      {"combining_moments", combining_moments_oracle(covset, sampler, params, seed), 0.0, 3.0});
  entries.push_back({"fourth_moment", fourth_moment_oracle(covset, seed), 0.0, 3.0});
  entries.push_back({"closed_form_sinr", sinr_oracle(covset, sampler, params, seed), 0.02, 0.0});
  entries.push_back(
      {"q_consistency", q_consistency_oracle(covset, sampler, params, seed), 0.05, 0.0});
  entries.push_back({"q_assembly", q_assembly_oracle(covset, params), 1e-12, 0.0});

  passed = true;
  std::vector<ResultRow> rows;
  for (const Entry& e : entries) {
    bool ok = e.rel_tol > 0.0 ? e.score.rel_err < e.rel_tol : e.score.sigma <= e.sigma_tol;
    passed = passed && ok;
    std::cerr << (ok ? "PASS" : "FAIL") << " " << e.name << ": rel_err=" << e.score.rel_err;
    if (e.rel_tol > 0.0)
      std::cerr << " (tol " << e.rel_tol << ")";
    else
      std::cerr << " sigma=" << e.score.sigma << " (tol " << e.sigma_tol << ")";
    std::cerr << "\n";
    rows.push_back(
        {"validate", e.name, "none", 0, 0.0, 0.0, e.score.rel_err, e.score.sigma, seed});
  }
  return rows;
}

}  // namespace mimo
