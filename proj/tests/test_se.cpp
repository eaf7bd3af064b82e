#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mimocov/se.hpp"

using namespace mimo;

namespace {

SystemParams small_params(int m = 8, int k = 2, int l = 2) {
  SystemParams p;
  p.antennas = m;
  p.ues_per_cell = k;
  p.cells = l;
  p.tau_c = 20;
  return p;
}

std::vector<CMatrix> mmse_filters(const CovarianceSet& set, int j,
                                  const SystemParams& p) {
  std::vector<CMatrix> f;
  for (int k = 0; k < p.ues_per_cell; ++k)
    f.push_back(mmse_filter(set.R(j, j, k), set.Q(j, k)).w);
  return f;
}

}  // namespace

TEST_CASE("scalar single-cell closed form") {
  SystemParams p = small_params(1, 1, 1);
  p.rho_tr = 1e12;  // clean pilots: R = Q up to negligible noise
  p.rho_ul = 1.0;
  CovarianceSet set = build_covariance_set(build_geometry(p), p);
  double beta = set.R(0, 0, 0)(0, 0).real();

  CMatrix w = CMatrix::Identity(1, 1);
  SinrTerms terms = mrc_sinr_closed_form(w, set, 0, 0, p.rho_ul);
  // signal beta^2, self interference beta*Q ~ beta^2, noise Q/rho ~ beta.
  CHECK(terms.sinr() == doctest::Approx(beta * beta / (beta * beta + beta)).epsilon(1e-5));
}

TEST_CASE("closed-form SINR is invariant to filter scaling") {
  SystemParams p = small_params();
  CovarianceSet set = build_covariance_set(build_geometry(p), p);
  CMatrix w = mmse_filter(set.R(0, 0, 1), set.Q(0, 1)).w;
  SinrTerms a = mrc_sinr_closed_form(w, set, 0, 1, p.rho_ul);
  SinrTerms b = mrc_sinr_closed_form(CMatrix(3.7 * w), set, 0, 1, p.rho_ul);
  CHECK(a.sinr() == doctest::Approx(b.sinr()).epsilon(1e-10));
}

TEST_CASE("mrc_moments with the identity filter") {
  SystemParams p = small_params();
  CovarianceSet set = build_covariance_set(build_geometry(p), p);
  CMatrix w = CMatrix::Identity(p.antennas, p.antennas);

  MrcMoments own = mrc_moments(w, set, 0, 0, 0, 0);
  CHECK(own.signal.real() == doctest::Approx(set.R(0, 0, 0).real().trace()).epsilon(1e-12));
  CHECK(own.power == doctest::Approx(set.Q(0, 0).real().trace()).epsilon(1e-12));

  // Cross-UE term has no coherent part: tr(Q R) only.
  MrcMoments cross = mrc_moments(w, set, 0, 0, 0, 1);
  double expected = (set.Q(0, 0) * set.R(0, 0, 1)).real().trace();
  CHECK(cross.interference == doctest::Approx(expected).epsilon(1e-12));

  // Same-pilot other-cell term picks up the squared trace.
  MrcMoments contaminated = mrc_moments(w, set, 0, 0, 1, 0);
  double base = (set.Q(0, 0) * set.R(0, 1, 0)).real().trace();
  double coh = std::norm(set.R(0, 1, 0).trace());
  CHECK(contaminated.interference == doctest::Approx(base + coh).epsilon(1e-12));
}

TEST_CASE("the SINR terms reassemble from raw moments") {
  SystemParams p = small_params();
  CovarianceSet set = build_covariance_set(build_geometry(p), p);
  const int j = 0, k = 1;
  CMatrix w = mmse_filter(set.R(j, j, k), set.Q(j, k)).w;
  SinrTerms terms = mrc_sinr_closed_form(w, set, j, k, p.rho_ul);

  double interference = 0.0, contamination = 0.0;
  for (int l = 0; l < p.cells; ++l) {
    for (int i = 0; i < p.ues_per_cell; ++i) {
      MrcMoments m = mrc_moments(w, set, j, k, l, i);
      if (i == k) {
        // Strip the coherent part; it belongs to the numerator (l == j)
        // or the contamination bucket (l != j).
        double coh = std::norm(Complex(w.conjugate().cwiseProduct(set.R(j, l, k)).sum()));
        interference += m.interference - coh;
        if (l != j) contamination += coh;
      } else {
        interference += m.interference;
      }
    }
  }
  MrcMoments own = mrc_moments(w, set, j, k, j, k);
  CHECK(terms.signal == doctest::Approx(std::norm(own.signal)).epsilon(1e-12));
  CHECK(terms.interference_sum == doctest::Approx(interference).epsilon(1e-10));
  CHECK(terms.coherent_contamination == doctest::Approx(contamination).epsilon(1e-10));
  CHECK(terms.noise_term == doctest::Approx(own.power / p.rho_ul).epsilon(1e-12));
}

TEST_CASE("spectral-efficiency prelog accounting") {
  SystemParams p;  // defaults: M=100, K=10, L=7, tau_c=200, tau_s=25000
  CHECK(covariance_pilot_overhead(p, 0) == 0.0);
  CHECK(covariance_pilot_overhead(p, 100) == doctest::Approx(0.0014).epsilon(1e-12));

  CHECK(uatf_se(0.0, p, 0) == 0.0);
  CHECK(uatf_se(1.0, p, 0) == doctest::Approx(0.95).epsilon(1e-12));
  CHECK(uatf_se(1.0, p, 100) == doctest::Approx(0.95 - 0.0014).epsilon(1e-9));
  CHECK(uatf_se(3.0, p, 0) == doctest::Approx(0.95 * 2.0).epsilon(1e-12));
  // Absurd overhead clamps to zero rather than going negative.
  SystemParams tiny = p;
  tiny.tau_s = 1.0;
  tiny.tau_c = 11.0;
  CHECK(uatf_se(1.0, tiny, 500) == 0.0);
}

TEST_CASE("rzf_combiner limits") {
  // K = 1: w = (h h^H + I/rho)^{-1} h is parallel to h.
  CVector h = CVector::Zero(4);
  h(0) = Complex(2.0, 0.0);
  CMatrix est(4, 1);
  est.col(0) = h;
  CMatrix v = rzf_combiner(est, 1.0);
  CHECK(v.rows() == 4);
  CHECK(v.cols() == 1);
  // (h h^H + I)^{-1} h = h / (1 + ||h||^2)
  CHECK((v.col(0) - h / 5.0).norm() < 1e-12);

  // Orthogonal estimates decouple.
  CMatrix basis = CMatrix::Identity(4, 2);
  CMatrix v2 = rzf_combiner(basis, 2.0);
  CHECK(std::abs(v2(1, 0)) < 1e-14);
  CHECK(std::abs(v2(0, 1)) < 1e-14);

  // High power: RZF tends to zero-forcing, v_k^H h_i -> 0 for i != k.
  Rng rng(1);
  CMatrix hs = rng.cgauss_matrix(8, 3);
  CMatrix vzf = rzf_combiner(hs, 1e8);
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      if (i != k)
        CHECK(std::abs(vzf.col(k).dot(hs.col(i))) <
              1e-5 * std::abs(vzf.col(k).dot(hs.col(k))));
}

TEST_CASE("closed-form MRC SINR matches the Monte-Carlo bound") {
  SystemParams p = small_params();
  CovarianceSet set = build_covariance_set(build_geometry(p), p);
  ChannelSampler sampler(set, 0);

  CombinerSpec mrc{CombinerKind::Mrc, mmse_filters(set, 0, p)};
  Rng rng(2);
  std::vector<double> mc = uatf_sinr_monte_carlo(mrc, sampler, p, 50000, rng);
  for (int k = 0; k < p.ues_per_cell; ++k) {
    double exact = mrc_sinr_closed_form(mrc.filters[k], set, 0, k, p.rho_ul).sinr();
    CHECK(mc[k] == doctest::Approx(exact).epsilon(0.05));
  }
}

TEST_CASE("too few Monte-Carlo blocks are rejected") {
  SystemParams p = small_params();
  CovarianceSet set = build_covariance_set(build_geometry(p), p);
  ChannelSampler sampler(set, 0);
  CombinerSpec mrc{CombinerKind::Mrc, mmse_filters(set, 0, p)};
  Rng rng(3);
  CHECK_THROWS_AS(uatf_sinr_monte_carlo(mrc, sampler, p, 50, rng), std::invalid_argument);
}

TEST_CASE("RZF beats MRC at full load with MMSE estimation") {
  SystemParams p;
  p.antennas = 50;
  CovarianceSet set = build_covariance_set(build_geometry(p), p);
  ChannelSampler sampler(set, 0);
  std::vector<CMatrix> filters = mmse_filters(set, 0, p);

  Rng rng_mrc(4), rng_rzf(4);
  std::vector<double> mrc = uatf_sinr_monte_carlo({CombinerKind::Mrc, filters}, sampler,
                                                  p, 2000, rng_mrc);
  std::vector<double> rzf = uatf_sinr_monte_carlo({CombinerKind::Rzf, filters}, sampler,
                                                  p, 2000, rng_rzf);
  double sum_mrc = 0.0, sum_rzf = 0.0;
  for (int k = 0; k < p.ues_per_cell; ++k) {
    sum_mrc += mrc[k];
    sum_rzf += rzf[k];
  }
  CHECK(sum_rzf > sum_mrc);
}

TEST_CASE("perfect-covariance baseline grows with power and bounds the UatF rate") {
  SystemParams p = small_params(8, 2, 1);
  CovarianceSet set = build_covariance_set(build_geometry(p), p);
  ChannelSampler sampler(set, 0);

  std::vector<double> lo, hi;
  {
    SystemParams weak = p;
    weak.rho_ul = 0.1;
    Rng rng(5);
    lo = perfect_cov_se_baseline(set, sampler, 0, CombinerKind::Mrc, weak, 2000, rng);
  }
  {
    SystemParams strong = p;
    strong.rho_ul = 10.0;
    Rng rng(5);
    hi = perfect_cov_se_baseline(set, sampler, 0, CombinerKind::Mrc, strong, 2000, rng);
  }
  for (int k = 0; k < p.ues_per_cell; ++k) CHECK(hi[k] > lo[k]);

  // The instantaneous-SINR rate should not fall below the UatF bound;
  // Monte-Carlo noise makes this a soft check.
  Rng rng(6);
  std::vector<double> perfect =
      perfect_cov_se_baseline(set, sampler, 0, CombinerKind::Mrc, p, 2000, rng);
  std::vector<CMatrix> filters = mmse_filters(set, 0, p);
  for (int k = 0; k < p.ues_per_cell; ++k) {
    double uatf = uatf_se(mrc_sinr_closed_form(filters[k], set, 0, k, p.rho_ul).sinr(), p, 0);
    WARN(perfect[k] >= uatf - 0.05);
  }
}
