#include "mimocov/se.hpp"

#include <cmath>
#include <iostream>

#include <Eigen/Cholesky>

namespace mimo {

namespace {

// tr(A B) for same-size square matrices, O(M^2).
Complex trace_product(const CMatrix& a, const CMatrix& b) {
  return a.transpose().cwiseProduct(b).sum();
}

// tr(W^H R) = sum conj(W) .* R, O(M^2).
Complex trace_adjoint_product(const CMatrix& w, const CMatrix& r) {
  return w.conjugate().cwiseProduct(r).sum();
}

void check_combiner(const CombinerSpec& combiner, const ChannelSampler& sampler) {
  if (static_cast<int>(combiner.filters.size()) != sampler.ues())
    throw std::invalid_argument("CombinerSpec: expected one filter per intra-cell UE");
  for (const CMatrix& w : combiner.filters)
    if (w.rows() != sampler.dim() || w.cols() != sampler.dim())
      throw std::invalid_argument("CombinerSpec: filter dimension mismatch");
}

// Despread pilot observations for all K pilots of one block, fresh noise.
CMatrix pilot_observations(const ChannelDraw& draw, Rng& rng, const SystemParams& params) {
  const int m = static_cast<int>(draw.h.rows());
  CMatrix y = rng.cgauss_matrix(m, draw.ues) / std::sqrt(params.rho_tr);
  for (int i = 0; i < draw.ues; ++i)
    for (int l = 0; l < draw.cells; ++l) y.col(i) += draw.channel(l, i);
  return y;
}

}  // namespace

MrcMoments mrc_moments(const CMatrix& w, const CovarianceSet& covset, int j, int k,
                       int l, int i) {
  MrcMoments mom;
  mom.signal = trace_adjoint_product(w, covset.R(j, j, k));
  CMatrix wqw = w * covset.Q(j, k) * w.adjoint();
  mom.power = wqw.real().trace();
  mom.interference = trace_product(wqw, covset.R(j, l, i)).real();
  if (i == k) mom.interference += std::norm(trace_adjoint_product(w, covset.R(j, l, k)));
  return mom;
}

SinrTerms mrc_sinr_closed_form(const CMatrix& w, const CovarianceSet& covset, int j,
                               int k, double rho_ul) {
  SinrTerms terms;
  terms.signal = std::norm(trace_adjoint_product(w, covset.R(j, j, k)));
  CMatrix wqw = w * covset.Q(j, k) * w.adjoint();
  terms.noise_term = wqw.real().trace() / rho_ul;
  for (int l = 0; l < covset.cells(); ++l) {
    for (int i = 0; i < covset.ues(); ++i)
      terms.interference_sum += trace_product(wqw, covset.R(j, l, i)).real();
    if (l != j)
      terms.coherent_contamination += std::norm(trace_adjoint_product(w, covset.R(j, l, k)));
  }
  return terms;
}

CMatrix rzf_combiner(const CMatrix& estimated_channels, double rho_ul) {
  const int m = static_cast<int>(estimated_channels.rows());
  CMatrix gram = estimated_channels * estimated_channels.adjoint();
  gram += (1.0 / rho_ul) * CMatrix::Identity(m, m);
  return Eigen::LLT<CMatrix>(gram).solve(estimated_channels);
}

std::vector<double> uatf_sinr_monte_carlo(const CombinerSpec& combiner,
                                          const ChannelSampler& sampler,
                                          const SystemParams& params, int n_blocks,
                                          Rng& rng) {
  if (n_blocks < 100)
    throw std::invalid_argument("uatf_sinr_monte_carlo: n_blocks must be >= 100");
  check_combiner(combiner, sampler);
  const int k_ues = sampler.ues();
  const int n_src = sampler.cells() * k_ues;
  const int j = sampler.observing_bs();

  Eigen::VectorXcd signal_mean = Eigen::VectorXcd::Zero(k_ues);
  RVector power_mean = RVector::Zero(k_ues);
  Eigen::MatrixXd interf_mean = Eigen::MatrixXd::Zero(k_ues, n_src);

  CMatrix v(sampler.dim(), k_ues);
  for (int b = 0; b < n_blocks; ++b) {
    ChannelDraw draw = sampler.draw(rng);
    CMatrix y = pilot_observations(draw, rng, params);
    for (int i = 0; i < k_ues; ++i) v.col(i) = combiner.filters[i] * y.col(i);
    if (combiner.kind == CombinerKind::Rzf) v = rzf_combiner(v, params.rho_ul);

    CMatrix cross = v.adjoint() * draw.h;  // K x (L*K)
    for (int kk = 0; kk < k_ues; ++kk) {
      signal_mean(kk) += cross(kk, j * k_ues + kk);
      power_mean(kk) += v.col(kk).squaredNorm();
    }
    interf_mean += cross.cwiseAbs2();
  }
  signal_mean /= n_blocks;
  power_mean /= n_blocks;
  interf_mean /= n_blocks;

  std::vector<double> sinr(k_ues, 0.0);
  for (int kk = 0; kk < k_ues; ++kk) {
    double num = std::norm(signal_mean(kk));
    double den = 0.0;
    for (int src = 0; src < n_src; ++src) {
      if (src == j * k_ues + kk) {
        // Variance-like own term; clamp if Monte-Carlo noise drives it negative.
        den += std::max(0.0, interf_mean(kk, src) - num);
      } else {
        den += interf_mean(kk, src);
      }
    }
    den += power_mean(kk) / params.rho_ul;
    sinr[kk] = den > 0.0 ? num / den : 0.0;
  }
  return sinr;
}

double uatf_sinr_monte_carlo(const CombinerSpec& combiner, const ChannelSampler& sampler,
                             const SystemParams& params, int k, int n_blocks, Rng& rng) {
  if (k < 0 || k >= sampler.ues())
    throw std::out_of_range("uatf_sinr_monte_carlo: ue index out of range");
  return uatf_sinr_monte_carlo(combiner, sampler, params, n_blocks, rng)[k];
}

double covariance_pilot_overhead(const SystemParams& params, int n_r) {
  return static_cast<double>(n_r) * params.ues_per_cell * params.cells /
         (params.tau_s * params.tau_c);
}

double uatf_se(double sinr, const SystemParams& params, int n_r) {
  if (!(sinr >= 0.0)) throw std::invalid_argument("uatf_se: sinr must be nonnegative");
  double prelog =
      1.0 - params.ues_per_cell / params.tau_c - covariance_pilot_overhead(params, n_r);
  if (prelog < 0.0) {
    std::cerr << "warning: covariance pilot overhead exceeds the frame, clamping prelog to 0\n";
    prelog = 0.0;
  }
  return prelog * std::log2(1.0 + sinr);
}

std::vector<double> perfect_cov_se_baseline(const CovarianceSet& covset,
                                            const ChannelSampler& sampler, int j,
                                            CombinerKind kind,
                                            const SystemParams& params, int n_blocks,
                                            Rng& rng) {
  if (n_blocks < 100)
    throw std::invalid_argument("perfect_cov_se_baseline: n_blocks must be >= 100");
  if (j != sampler.observing_bs())
    throw std::invalid_argument("perfect_cov_se_baseline: sampler built for a different BS");
  const int m = covset.antennas();
  const int k_ues = covset.ues();
  const int cells = covset.cells();
  const int n_src = cells * k_ues;

  // MMSE filters for every channel the BS can estimate, W_li = R_jli Q_ji^{-1}.
  std::vector<CMatrix> filters(n_src);
  CMatrix z = CMatrix::Zero(m, m);
  for (int i = 0; i < k_ues; ++i) {
    Eigen::LDLT<CMatrix> ldlt(covset.Q(j, i));
    for (int l = 0; l < cells; ++l) {
      filters[l * k_ues + i] = ldlt.solve(covset.R(j, l, i)).adjoint();
      if (l != j) z += covset.R(j, l, i);
    }
    z += covset.R(j, j, i) - filters[j * k_ues + i] * covset.R(j, j, i);
  }
  z += (1.0 / params.rho_ul) * CMatrix::Identity(m, m);
  z = hermitize(z);

  RVector se_sum = RVector::Zero(k_ues);
  CMatrix est(m, n_src), v(m, k_ues);
  for (int b = 0; b < n_blocks; ++b) {
    ChannelDraw draw = sampler.draw(rng);
    CMatrix y = pilot_observations(draw, rng, params);
    for (int l = 0; l < cells; ++l)
      for (int i = 0; i < k_ues; ++i)
        est.col(l * k_ues + i) = filters[l * k_ues + i] * y.col(i);

    if (kind == CombinerKind::Mrc)
      v = est.middleCols(j * k_ues, k_ues);
    else
      v = rzf_combiner(est.middleCols(j * k_ues, k_ues), params.rho_ul);

    CMatrix cross = v.adjoint() * est;  // K x (L*K)
    CMatrix zv = z * v;
    for (int kk = 0; kk < k_ues; ++kk) {
      double num = std::norm(cross(kk, j * k_ues + kk));
      double den = v.col(kk).dot(zv.col(kk)).real();
      for (int src = 0; src < n_src; ++src)
        if (src != j * k_ues + kk) den += std::norm(cross(kk, src));
      se_sum(kk) += std::log2(1.0 + num / den);
    }
  }

  double prelog = 1.0 - params.ues_per_cell / params.tau_c;
  std::vector<double> se(k_ues);
  for (int kk = 0; kk < k_ues; ++kk) se[kk] = prelog * se_sum(kk) / n_blocks;
  return se;
}

}  // namespace mimo
