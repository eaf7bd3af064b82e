#include "mimocov/covest.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Cholesky>

namespace mimo {

SampleCovariance sample_covariance(const CMatrix& observations) {
  if (observations.cols() < 1)
    throw std::invalid_argument("sample_covariance: need at least one observation");
  const int n = static_cast<int>(observations.cols());
  SampleCovariance sc;
  sc.n_obs = n;
  sc.s = (observations * observations.adjoint()) / static_cast<double>(n);
  sc.s = hermitize(sc.s);
  return sc;
}

SampleCovariance sample_covariance(const std::vector<CVector>& observations) {
  if (observations.empty())
    throw std::invalid_argument("sample_covariance: need at least one observation");
  const int m = static_cast<int>(observations.front().size());
  CMatrix y(m, observations.size());
  for (std::size_t i = 0; i < observations.size(); ++i) y.col(i) = observations[i];
  return sample_covariance(y);
}

SampleCovariance merge(const SampleCovariance& a, const SampleCovariance& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("merge: dimension mismatch");
  SampleCovariance out;
  out.n_obs = a.n_obs + b.n_obs;
  out.s = (a.n_obs * a.s + b.n_obs * b.s) / static_cast<double>(out.n_obs);
  return out;
}

CMatrix shrink(const CMatrix& s, double factor) {
  if (!(factor >= 0.0 && factor <= 1.0))
    throw std::invalid_argument("shrink: factor must be in [0, 1]");
  CMatrix out = factor * s;
  out.diagonal() = s.diagonal();
  return out;
}

CMatrix estimate_R_direct(const SampleCovariance& clean, double mu, double rho_tr) {
  CMatrix debiased = clean.s;
  debiased.diagonal().array() -= 1.0 / rho_tr;
  return shrink(debiased, mu);
}

CMatrix estimate_R_via_q(const SampleCovariance& q_sample,
                         const SampleCovariance& qminus_sample, double mu) {
  if (q_sample.dim() != qminus_sample.dim())
    throw std::invalid_argument("estimate_R_via_q: dimension mismatch");
  return shrink(CMatrix(q_sample.s - qminus_sample.s), mu);
}

CMatrix estimate_Q(const SampleCovariance& regular, double eta) {
  return shrink(regular.s, eta);
}

CMatrix estimate_R(const CovSamples& samples, Scheme scheme, double mu, double rho_tr) {
  return scheme == Scheme::RDirect
             ? estimate_R_direct(samples.clean, mu, rho_tr)
             : estimate_R_via_q(samples.regular, samples.contaminants, mu);
}

namespace {

// Unshrunk R sample for the scheme; shrink(., mu) is linear in mu around it.
CMatrix base_r_sample(const CovSamples& samples, Scheme scheme, double rho_tr) {
  if (scheme == Scheme::RDirect) {
    CMatrix s = samples.clean.s;
    s.diagonal().array() -= 1.0 / rho_tr;
    return s;
  }
  return samples.regular.s - samples.contaminants.s;
}

}  // namespace

RegularizationFactors optimize_factors(const CMatrix& r_true, const CMatrix& q_true,
                                       Scheme scheme, double rho_tr,
                                       const std::vector<CovSamples>& realizations,
                                       double grid_step) {
  if (realizations.empty())
    throw std::invalid_argument("optimize_factors: need at least one realization");
  if (!(grid_step > 0.0 && grid_step <= 1.0))
    throw std::invalid_argument("optimize_factors: grid_step must be in (0, 1]");
  const int n_steps = static_cast<int>(std::lround(1.0 / grid_step));
  if (std::abs(n_steps * grid_step - 1.0) > 1e-9)
    throw std::invalid_argument("optimize_factors: grid_step must divide [0, 1]");

  const int m = static_cast<int>(r_true.rows());
  const double tr_r = r_true.real().trace();
  const int n_eta = n_steps + 1;

  // For fixed eta the analytic MSE of W(mu) = (D + mu*O) * Qhat(eta)^{-1}
  // is c0 + c1*mu + c2*mu^2; accumulate the averaged coefficients.
  std::vector<double> c0(n_eta, 0.0), c1(n_eta, 0.0), c2(n_eta, 0.0);
  std::vector<bool> valid(n_eta, true);

  for (const CovSamples& samples : realizations) {
    CMatrix rs = base_r_sample(samples, scheme, rho_tr);
    RVector d = rs.diagonal().real();
    CMatrix o = rs;
    o.diagonal().setZero();

    for (int ie = 0; ie < n_eta; ++ie) {
      if (!valid[ie]) continue;
      double eta = std::min(1.0, ie * grid_step);
      CMatrix q_hat = estimate_Q(samples.regular, eta);

      Eigen::LDLT<CMatrix> ldlt(q_hat);
      if (ldlt.info() != Eigen::Success) {
        valid[ie] = false;
        continue;
      }
      RVector dv = ldlt.vectorD().real();
      double dmin = dv.minCoeff(), dmax = dv.maxCoeff();
      if (!(dmin > 0.0) || dmax / dmin > 1e12) {
        valid[ie] = false;
        continue;
      }

      CMatrix g = ldlt.solve(CMatrix::Identity(m, m));
      CMatrix x = g * r_true;          // G R
      CMatrix t = (g * q_true) * g;    // G Q G  (G is Hermitian)
      CMatrix ot = o * t;

      double tr_dx = (d.array() * x.diagonal().real().array()).sum();
      double tr_ox = (o.transpose().cwiseProduct(x)).sum().real();
      double tr_dtd = (d.array().square() * t.diagonal().real().array()).sum();
      double tr_otd = (ot.diagonal().array() * d.array().cast<Complex>()).sum().real();
      double tr_oto = ot.cwiseProduct(o.conjugate()).sum().real();

      c0[ie] += tr_r - 2.0 * tr_dx + tr_dtd;
      c1[ie] += -2.0 * tr_ox + 2.0 * tr_otd;
      c2[ie] += tr_oto;
    }
  }

  double best = std::numeric_limits<double>::infinity();
  RegularizationFactors factors{0.0, 0.0};
  bool found = false;
  const double n_real = static_cast<double>(realizations.size());
  for (int ie = 0; ie < n_eta; ++ie) {
    if (!valid[ie]) continue;
    double eta = std::min(1.0, ie * grid_step);
    for (int im = 0; im <= n_steps; ++im) {
      double mu = std::min(1.0, im * grid_step);
      double mse = (c0[ie] + mu * c1[ie] + mu * mu * c2[ie]) / n_real;
      if (mse < best) {
        best = mse;
        factors = {eta, mu};
        found = true;
      }
    }
  }
  if (!found)
    throw std::runtime_error("optimize_factors: every grid point was numerically singular");
  return factors;
}

}  // namespace mimo
