#include "mimocov/channels.hpp"

#include <cmath>

namespace mimo {

GaussianSampler::GaussianSampler(const CMatrix& covariance, double tol)
    : dim_(static_cast<int>(covariance.rows())) {
  if (covariance.rows() != covariance.cols())
    throw std::invalid_argument("GaussianSampler: covariance must be square");
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(covariance);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("GaussianSampler: eigendecomposition failed");
  RVector lambda = eig.eigenvalues();
  double max_ev = lambda.size() > 0 ? lambda.maxCoeff() : 0.0;
  if (lambda.minCoeff() < -tol * std::max(max_ev, 1e-300))
    throw std::invalid_argument("GaussianSampler: covariance is indefinite beyond tolerance");
  RVector sqrt_lambda = lambda.cwiseMax(0.0).cwiseSqrt();
  factor_ = eig.eigenvectors() * sqrt_lambda.asDiagonal();
}

ChannelSampler::ChannelSampler(const CovarianceSet& covset, int observing_bs)
    : observing_bs_(observing_bs),
      cells_(covset.cells()),
      ues_(covset.ues()),
      dim_(covset.antennas()) {
  if (observing_bs < 0 || observing_bs >= cells_)
    throw std::out_of_range("ChannelSampler: observing_bs out of range");
  samplers_.reserve(static_cast<std::size_t>(cells_) * ues_);
  for (int l = 0; l < cells_; ++l)
    for (int k = 0; k < ues_; ++k)
      samplers_.emplace_back(covset.R(observing_bs, l, k));
}

ChannelDraw ChannelSampler::draw(Rng& rng) const {
  ChannelDraw d;
  d.observing_bs = observing_bs_;
  d.cells = cells_;
  d.ues = ues_;
  d.h.resize(dim_, cells_ * ues_);
  for (int l = 0; l < cells_; ++l)
    for (int k = 0; k < ues_; ++k)
      d.h.col(l * ues_ + k) = samplers_[l * ues_ + k].sample(rng);
  return d;
}

CVector observe(ObservationKind kind, int k, const ChannelDraw& draw, Rng& rng,
                const SystemParams& params) {
  if (k < 0 || k >= draw.ues) throw std::out_of_range("observe: ue index out of range");
  const int j = draw.observing_bs;
  const int m = static_cast<int>(draw.h.rows());
  CVector y = CVector::Zero(m);
  if (kind != ObservationKind::Contaminants) y += draw.channel(j, k);
  if (kind != ObservationKind::Clean)
    for (int l = 0; l < draw.cells; ++l)
      if (l != j) y += draw.channel(l, k);
  y += rng.cgauss_vector(m) / std::sqrt(params.rho_tr);
  return y;
}

CMatrix observe_blocks(const ChannelSampler& sampler, ObservationKind kind, int k,
                       int n, std::uint64_t stream_seed, const SystemParams& params) {
  if (n < 1) throw std::invalid_argument("observe_blocks: need at least one block");
  const int m = sampler.dim();
  const int j = sampler.observing_bs();
  constexpr std::uint64_t kNoiseStream = 0xffffffffULL;
  Rng noise_rng = Rng::substream(stream_seed, {kNoiseStream});
  CMatrix y = noise_rng.cgauss_matrix(m, n) / std::sqrt(params.rho_tr);
  for (int l = 0; l < sampler.cells(); ++l) {
    bool include = (l == j) ? (kind != ObservationKind::Contaminants)
                            : (kind != ObservationKind::Clean);
    if (!include) continue;
    Rng cell_rng = Rng::substream(stream_seed, {static_cast<std::uint64_t>(l)});
    y.noalias() += sampler.sampler(l, k).factor() * cell_rng.cgauss_matrix(m, n);
  }
  return y;
}

}  // namespace mimo
