#pragma once

#include <vector>

#include "mimocov/types.hpp"

namespace mimo {

struct SampleCovariance {
  CMatrix s;       // Hermitian; PSD when formed directly from observations
  int n_obs = 0;

  int dim() const { return static_cast<int>(s.rows()); }
};

enum class Scheme { RDirect, ViaQ };

struct RegularizationFactors {
  double eta = 1.0;  // for Q
  double mu = 1.0;   // for R
};

/// S = (1/N) * sum_n y[n] y[n]^H from observation columns.
SampleCovariance sample_covariance(const CMatrix& observations);
SampleCovariance sample_covariance(const std::vector<CVector>& observations);

/// Weighted merge of two sample covariances over disjoint observation sets.
SampleCovariance merge(const SampleCovariance& a, const SampleCovariance& b);

/// Convex combination factor*S + (1-factor)*diag(S). The diagonal is the
/// same for every factor; off-diagonals scale by factor.
CMatrix shrink(const CMatrix& s, double factor);
inline CMatrix shrink(const SampleCovariance& s, double factor) { return shrink(s.s, factor); }

/// "R direct": sample covariance of clean observations, with the known
/// noise variance 1/rho_tr subtracted from the diagonal, then shrunk.
CMatrix estimate_R_direct(const SampleCovariance& clean, double mu, double rho_tr);

/// "Via Q": difference of the regular-pilot and contaminants-only sample
/// covariances (the noise enters both and cancels in expectation), then
/// shrunk. The result may be indefinite; no PSD projection is applied.
CMatrix estimate_R_via_q(const SampleCovariance& q_sample,
                         const SampleCovariance& qminus_sample, double mu);

/// Shrunk sample covariance of regular observations.
CMatrix estimate_Q(const SampleCovariance& regular, double eta);

/// One independent covariance-estimation realization: the three sample
/// covariances a BS can form for one pilot.
struct CovSamples {
  SampleCovariance regular;       // N_Q regular-pilot observations
  SampleCovariance contaminants;  // N_R contaminants-only observations
  SampleCovariance clean;         // N_R clean observations
};

/// Builds the scheme's R estimate from one realization at the given mu.
CMatrix estimate_R(const CovSamples& samples, Scheme scheme, double mu, double rho_tr);

/// Genie-aided grid search: for every (eta, mu) pair on the grid the
/// exact MSE of the filter R_hat(mu) * Q_hat(eta)^{-1} against the true
/// (R, Q) is averaged over the provided realizations; returns the argmin
/// pair with ties broken toward smaller eta, then smaller mu.
///
/// Grid points whose Q_hat(eta) is numerically singular (condition above
/// ~1e12) are skipped. The scan is exact: for fixed eta the MSE is a
/// quadratic polynomial in mu, so each eta costs one factorization
/// regardless of the mu resolution.
RegularizationFactors optimize_factors(const CMatrix& r_true, const CMatrix& q_true,
                                       Scheme scheme, double rho_tr,
                                       const std::vector<CovSamples>& realizations,
                                       double grid_step);

}  // namespace mimo
