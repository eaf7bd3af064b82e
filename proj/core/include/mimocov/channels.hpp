#pragma once

#include <vector>

#include "mimocov/rng.hpp"
#include "mimocov/scenario.hpp"
#include "mimocov/types.hpp"

namespace mimo {

/// Draws x ~ CN(0, R) via the eigen-factorization F = U*sqrt(lambda),
/// with numerically negative eigenvalues clamped to zero. Robust to the
/// rank-deficient one-ring matrices where a triangular factorization
/// can fail.
class GaussianSampler {
 public:
  explicit GaussianSampler(const CMatrix& covariance, double tol = 1e-9);

  CVector sample(Rng& rng) const { return factor_ * rng.cgauss_vector(dim_); }

  /// n independent draws as columns.
  CMatrix sample_block(int n, Rng& rng) const {
    return factor_ * rng.cgauss_matrix(dim_, n);
  }

  const CMatrix& factor() const { return factor_; }
  int dim() const { return dim_; }

 private:
  int dim_;
  CMatrix factor_;
};

enum class ObservationKind { Regular, Clean, Contaminants };

/// One coherence block's channels from every UE to one observing BS.
struct ChannelDraw {
  int observing_bs = 0;
  int cells = 0;
  int ues = 0;
  CMatrix h;  // antennas x (cells*ues); column l*ues+k is h(l,k)

  CVector channel(int l, int k) const { return h.col(l * ues + k); }
};

/// Holds per-(cell, ue) covariance factors for one observing BS so that
/// channel realizations can be drawn cheaply.
class ChannelSampler {
 public:
  ChannelSampler(const CovarianceSet& covset, int observing_bs);

  ChannelDraw draw(Rng& rng) const;

  const GaussianSampler& sampler(int l, int k) const {
    return samplers_[l * ues_ + k];
  }
  int observing_bs() const { return observing_bs_; }
  int cells() const { return cells_; }
  int ues() const { return ues_; }
  int dim() const { return dim_; }

 private:
  int observing_bs_;
  int cells_;
  int ues_;
  int dim_;
  std::vector<GaussianSampler> samplers_;
};

/// Despread pilot-phase observation for pilot k at the drawing BS:
///   Regular:      y = h(j,k) + sum_{l != j} h(l,k) + n/sqrt(rho_tr)
///   Clean:        y = h(j,k) + n/sqrt(rho_tr)
///   Contaminants: y = sum_{l != j} h(l,k) + n/sqrt(rho_tr)
/// Noise is drawn independently per observation.
CVector observe(ObservationKind kind, int k, const ChannelDraw& draw, Rng& rng,
                const SystemParams& params);

/// n observations of the given kind for pilot k, each in its own
/// coherence block (independent channels and noise), as columns.
/// Noise and each cell's channels come from fixed substreams of
/// `stream_seed`, so the first columns of a longer run coincide with a
/// shorter run (up to gemm roundoff). Sweeps over the observation count
/// therefore share randomness, which suppresses Monte-Carlo wiggle
/// between sweep points.
CMatrix observe_blocks(const ChannelSampler& sampler, ObservationKind kind, int k,
                       int n, std::uint64_t stream_seed, const SystemParams& params);

}  // namespace mimo
