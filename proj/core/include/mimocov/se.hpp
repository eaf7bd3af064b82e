#pragma once

#include <vector>

#include "mimocov/chanest.hpp"
#include "mimocov/channels.hpp"
#include "mimocov/scenario.hpp"

namespace mimo {

enum class CombinerKind { Mrc, Rzf };

/// Receive-combining recipe for the serving cell. Each entry of
/// `filters` is the estimation filter of one intra-cell UE; MRC for UE k
/// uses only filters[k], RZF regenerates all K estimates per block and
/// applies the regularized inverse.
struct CombinerSpec {
  CombinerKind kind = CombinerKind::Mrc;
  std::vector<CMatrix> filters;  // exactly K entries
};

/// The deterministic-equivalent expectations for v = W y^p:
///   signal       = E{v^H h_jjk}            = tr(W^H R_jjk)
///   power        = E{||v||^2}              = tr(W Q_jk W^H)
///   interference = E{|v^H h_jli|^2}
///                = tr(W Q_jk W^H R_jli) + [i==k] |tr(W^H R_jlk)|^2
struct MrcMoments {
  Complex signal;
  double power = 0.0;
  double interference = 0.0;
};

MrcMoments mrc_moments(const CMatrix& w, const CovarianceSet& covset, int j, int k,
                       int l, int i);

/// Decomposed denominator/numerator of the closed-form effective SINR.
struct SinrTerms {
  double signal = 0.0;                  // |tr(W^H R_jjk)|^2
  double interference_sum = 0.0;        // sum_{l,i} tr(W Q W^H R_jli)
  double coherent_contamination = 0.0;  // sum_{l != j} |tr(W^H R_jlk)|^2
  double noise_term = 0.0;              // (1/rho_ul) tr(W Q W^H)

  double sinr() const {
    double den = interference_sum + coherent_contamination + noise_term;
    return den > 0.0 ? signal / den : 0.0;
  }
};

/// Closed-form effective SINR of MRC with a deterministic filter W.
SinrTerms mrc_sinr_closed_form(const CMatrix& w, const CovarianceSet& covset, int j,
                               int k, double rho_ul);

/// Monte-Carlo estimate of the use-and-then-forget effective SINR for an
/// arbitrary combiner. The combiner is regenerated every block from that
/// block's pilot observations; expectations are sample means over
/// n_blocks fresh blocks. Returns one SINR per intra-cell UE.
std::vector<double> uatf_sinr_monte_carlo(const CombinerSpec& combiner,
                                          const ChannelSampler& sampler,
                                          const SystemParams& params, int n_blocks,
                                          Rng& rng);

/// Single-UE convenience wrapper.
double uatf_sinr_monte_carlo(const CombinerSpec& combiner, const ChannelSampler& sampler,
                             const SystemParams& params, int k, int n_blocks, Rng& rng);

/// SE = (1 - K/tau_c - alpha) * log2(1 + sinr), where
/// alpha = n_r*K*L/(tau_s*tau_c) is the fraction of channel uses spent
/// on the extra covariance pilots. The prelog is clamped at zero.
double uatf_se(double sinr, const SystemParams& params, int n_r);

double covariance_pilot_overhead(const SystemParams& params, int n_r);

/// RZF combining vectors (sum_i h_hat_i h_hat_i^H + I/rho_ul)^{-1} h_hat_k
/// for all k, from the K estimated intra-cell channels (columns).
CMatrix rzf_combiner(const CMatrix& estimated_channels, double rho_ul);

/// Perfect-covariance SE baseline: Monte-Carlo average of
/// (1 - K/tau_c) log2(1 + gamma) with the instantaneous SINR computed
/// from MMSE estimates of every channel. Returns one SE per intra-cell UE.
std::vector<double> perfect_cov_se_baseline(const CovarianceSet& covset,
                                            const ChannelSampler& sampler, int j,
                                            CombinerKind kind,
                                            const SystemParams& params, int n_blocks,
                                            Rng& rng);

}  // namespace mimo
