#pragma once

#include "mimocov/covest.hpp"
#include "mimocov/types.hpp"

namespace mimo {

enum class FilterKind { Mmse, ApproxMmse, Ls };

/// Deterministic M x M channel-estimation matrix, h_hat = W * y.
struct FilterMatrix {
  CMatrix w;
  FilterKind kind = FilterKind::Ls;
  // Populated for ApproxMmse filters only.
  Scheme scheme = Scheme::ViaQ;
  RegularizationFactors factors{};
};

FilterMatrix ls_filter(int dim);

/// W = R * Q^{-1}. Q must be positive definite.
FilterMatrix mmse_filter(const CMatrix& r_true, const CMatrix& q_true);

/// Covariance of the MMSE estimate, Phi = R Q^{-1} R.
CMatrix mmse_estimate_covariance(const CMatrix& r_true, const CMatrix& q_true);

/// W = R_hat * Q_hat^{-1} from (possibly indefinite) covariance
/// estimates. Rejects a Q_hat whose condition estimate exceeds 1e12.
FilterMatrix approx_mmse_filter(const CMatrix& r_hat, const CMatrix& q_hat);

CVector estimate_channel(const FilterMatrix& filter, const CVector& y);

/// Exact estimation MSE of a deterministic filter:
/// tr((I - W - W^H) R) + tr(W Q W^H).
double analytic_mse(const CMatrix& w, const CMatrix& r_true, const CMatrix& q_true);
inline double analytic_mse(const FilterMatrix& f, const CMatrix& r, const CMatrix& q) {
  return analytic_mse(f.w, r, q);
}

/// analytic_mse divided by tr(R).
double normalized_mse(const CMatrix& w, const CMatrix& r_true, const CMatrix& q_true);
inline double normalized_mse(const FilterMatrix& f, const CMatrix& r, const CMatrix& q) {
  return normalized_mse(f.w, r, q);
}

}  // namespace mimo
