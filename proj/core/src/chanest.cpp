#include "mimocov/chanest.hpp"

#include <cmath>

#include <Eigen/Cholesky>

namespace mimo {

namespace {

// Q^{-1} applied from the right: returns A * Q^{-1} for Hermitian Q.
// A Q^{-1} = (Q^{-1} A^H)^H since Q is Hermitian.
CMatrix right_solve(const Eigen::LDLT<CMatrix>& ldlt, const CMatrix& a) {
  return ldlt.solve(a.adjoint()).adjoint();
}

Eigen::LDLT<CMatrix> guarded_ldlt(const CMatrix& q, const char* who) {
  if (q.rows() != q.cols()) throw std::invalid_argument(std::string(who) + ": Q not square");
  Eigen::LDLT<CMatrix> ldlt(q);
  if (ldlt.info() != Eigen::Success)
    throw std::invalid_argument(std::string(who) + ": factorization of Q failed");
  RVector d = ldlt.vectorD().real();
  double dmin = d.minCoeff(), dmax = d.maxCoeff();
  if (!(dmin > 0.0) || dmax / dmin > 1e12)
    throw std::invalid_argument(std::string(who) + ": Q is numerically singular");
  return ldlt;
}

}  // namespace

FilterMatrix ls_filter(int dim) {
  FilterMatrix f;
  f.w = CMatrix::Identity(dim, dim);
  f.kind = FilterKind::Ls;
  return f;
}

FilterMatrix mmse_filter(const CMatrix& r_true, const CMatrix& q_true) {
  FilterMatrix f;
  f.w = right_solve(guarded_ldlt(q_true, "mmse_filter"), r_true);
  f.kind = FilterKind::Mmse;
  return f;
}

CMatrix mmse_estimate_covariance(const CMatrix& r_true, const CMatrix& q_true) {
  CMatrix w = right_solve(guarded_ldlt(q_true, "mmse_estimate_covariance"), r_true);
  return hermitize(w * r_true);
}

FilterMatrix approx_mmse_filter(const CMatrix& r_hat, const CMatrix& q_hat) {
  FilterMatrix f;
  f.w = right_solve(guarded_ldlt(q_hat, "approx_mmse_filter"), r_hat);
  f.kind = FilterKind::ApproxMmse;
  return f;
}

CVector estimate_channel(const FilterMatrix& filter, const CVector& y) {
  if (filter.w.cols() != y.size())
    throw std::invalid_argument("estimate_channel: dimension mismatch");
  return filter.w * y;
}

double analytic_mse(const CMatrix& w, const CMatrix& r_true, const CMatrix& q_true) {
  if (w.rows() != r_true.rows() || w.cols() != q_true.rows())
    throw std::invalid_argument("analytic_mse: dimension mismatch");
  Complex tr_wr = (w * r_true).trace();
  Complex tr_wqw = (w * q_true * w.adjoint()).trace();
  double mse = r_true.real().trace() - 2.0 * tr_wr.real() + tr_wqw.real();
  // Traces against Hermitian R, Q are real up to roundoff.
  double scale = std::max({1.0, std::abs(tr_wr), std::abs(tr_wqw)});
  if (std::abs(tr_wqw.imag()) > 1e-10 * scale)
    throw std::runtime_error("analytic_mse: non-negligible imaginary residue");
  return mse;
}

double normalized_mse(const CMatrix& w, const CMatrix& r_true, const CMatrix& q_true) {
  double tr_r = r_true.real().trace();
  if (!(tr_r > 0.0)) throw std::invalid_argument("normalized_mse: tr(R) must be positive");
  return analytic_mse(w, r_true, q_true) / tr_r;
}

}  // namespace mimo
