// Acceptance gate: one pass/fail line per criterion, nonzero exit if
// any fails. Criteria 1-4 are oracle checks at desk scale; 5 and 6
// reproduce the full-scale NMSE and sum-SE sweeps qualitatively; 7
// checks byte-level determinism across worker counts.
//
// Pass --quick to run the sweeps at reduced effort with widened
// tolerances.

#include <chrono>
#include <cmath>
#include <cstring>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "mimocov/chanest.hpp"
#include "mimocov/rng.hpp"
#include "mimocov/runner.hpp"
#include "mimocov/scenario.hpp"

using namespace mimo;

namespace {

int failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

void report(int criterion, bool ok, const Timer& timer, const std::string& detail) {
  if (!ok) ++failures;
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << criterion << " ("
            << static_cast<int>(timer.seconds()) << "s): " << detail << "\n";
  std::cout.flush();
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

// ---- criteria 1-3: brute-force oracles ------------------------------------

std::map<std::string, ResultRow> oracle_rows() {
  ExperimentConfig cfg;
  cfg.seed = 1;
  bool passed = false;
  std::map<std::string, ResultRow> out;
  for (const ResultRow& r : run_validation(cfg, passed)) out[r.estimator] = r;
  return out;
}

// ---- criterion 4: exact identities at full dimension ----------------------

bool mmse_identities(std::string& detail) {
  SystemParams p;  // M = 100 default scenario
  CovarianceSet set = build_covariance_set(build_geometry(p), p);
  double worst_mse = 0.0, worst_q = 0.0;
  for (int k = 0; k < p.ues_per_cell; ++k) {
    const CMatrix& r = set.R(0, 0, k);
    const CMatrix& q = set.Q(0, k);
    double mse = analytic_mse(mmse_filter(r, q), r, q);
    double expected = (r - mmse_estimate_covariance(r, q)).real().trace();
    worst_mse = std::max(worst_mse, std::abs(mse - expected) / std::abs(expected));

    CMatrix assembled = (1.0 / p.rho_tr) * CMatrix::Identity(p.antennas, p.antennas);
    for (int l = 0; l < p.cells; ++l) assembled += set.R(0, l, k);
    worst_q = std::max(worst_q, max_abs(q - assembled) / max_abs(q));
  }

  Rng rng(2);
  CMatrix a = rng.cgauss_matrix(16, 16);
  CMatrix s = hermitize(a * a.adjoint());
  double shrink_err = max_abs(shrink(s, 1.0) - s);
  CMatrix d = shrink(s, 0.0);
  for (int i = 0; i < 16; ++i) {
    shrink_err = std::max(shrink_err, std::abs(d(i, i) - s(i, i)));
    for (int j = 0; j < 16; ++j)
      if (i != j) shrink_err = std::max(shrink_err, std::abs(d(i, j)));
  }

  detail = "mse_rel=" + fmt(worst_mse) + " shrink_err=" + fmt(shrink_err) +
           " q_rel=" + fmt(worst_q);
  return worst_mse < 1e-10 && shrink_err == 0.0 && worst_q < 1e-12;
}

// ---- criterion 5: NMSE sweep shape ----------------------------------------

struct Curve {
  std::vector<int> n_r;
  std::vector<double> value;
  std::vector<double> se;
};

std::map<std::string, Curve> curves(const std::vector<ResultRow>& rows,
                                    const std::string& experiment,
                                    const std::string& combiner) {
  std::map<std::string, Curve> out;
  for (const ResultRow& r : rows) {
    if (r.experiment != experiment || r.combiner != combiner) continue;
    Curve& c = out[r.estimator];
    c.n_r.push_back(r.n_r);
    c.value.push_back(r.value);
    c.se.push_back(r.stderr_value);
  }
  return out;
}

bool nmse_shape(const ExperimentConfig& cfg, std::string& detail) {
  std::map<std::string, Curve> c = curves(run_mse_sweep(cfg), "nmse", "none");
  const Curve& mmse = c.at("mmse");
  const Curve& ls = c.at("ls");
  const Curve& viaq = c.at("approx_viaq");
  const Curve& rdir = c.at("approx_rdirect");
  const std::size_t n = mmse.n_r.size();

  bool below_ls_at_start = viaq.value[0] < ls.value[0] && rdir.value[0] < ls.value[0];
  bool viaq_wins = true, monotone = true, mmse_lowest = true;
  for (std::size_t i = 0; i < n; ++i) {
    double pooled = std::sqrt(viaq.se[i] * viaq.se[i] + rdir.se[i] * rdir.se[i]);
    if (viaq.value[i] > rdir.value[i] + 2.0 * pooled) viaq_wins = false;
    if (i > 0 && (viaq.value[i] > viaq.value[i - 1] || rdir.value[i] > rdir.value[i - 1]))
      monotone = false;
    if (mmse.value[i] >= viaq.value[i] || mmse.value[i] >= rdir.value[i] ||
        mmse.value[i] >= ls.value[i])
      mmse_lowest = false;
  }

  detail = std::string("below_ls=") + (below_ls_at_start ? "y" : "n") +
           " viaq<=rdirect=" + (viaq_wins ? "y" : "n") +
           " monotone=" + (monotone ? "y" : "n") +
           " mmse_lowest=" + (mmse_lowest ? "y" : "n") +
           " [nmse@10: mmse=" + fmt(mmse.value[0]) + " viaq=" + fmt(viaq.value[0]) +
           " rdirect=" + fmt(rdir.value[0]) + " ls=" + fmt(ls.value[0]) + "]";
  return below_ls_at_start && viaq_wins && monotone && mmse_lowest;
}

// ---- criterion 6: SE ratios and 95% crossings -----------------------------

double crossing(const Curve& c, double threshold) {
  if (c.value.empty()) return std::numeric_limits<double>::infinity();
  if (c.value[0] >= threshold) return c.n_r[0];
  for (std::size_t i = 1; i < c.value.size(); ++i) {
    if (c.value[i] >= threshold) {
      double t = (threshold - c.value[i - 1]) / (c.value[i] - c.value[i - 1]);
      return c.n_r[i - 1] + t * (c.n_r[i] - c.n_r[i - 1]);
    }
  }
  return std::numeric_limits<double>::infinity();
}

bool se_reproduction(const ExperimentConfig& cfg, double ratio_tol, std::string& detail) {
  std::vector<ResultRow> rows = run_se_sweep(cfg);
  std::map<std::string, Curve> mrc = curves(rows, "sum_se", "mrc");
  std::map<std::string, Curve> rzf = curves(rows, "sum_se", "rzf");

  double ratio_mrc = mrc.at("ls").value[0] / mrc.at("mmse").value[0];
  double ratio_rzf = rzf.at("ls").value[0] / rzf.at("mmse").value[0];
  bool ratios_ok = std::abs(ratio_mrc - 0.82) <= ratio_tol &&
                   std::abs(ratio_rzf - 0.70) <= ratio_tol;

  double cross_mrc = crossing(mrc.at("approx_viaq"), 0.95 * mrc.at("mmse").value[0]);
  double cross_rzf = crossing(rzf.at("approx_viaq"), 0.95 * rzf.at("mmse").value[0]);
  bool cross_ok = cross_mrc >= 50.0 && cross_mrc <= 200.0 && cross_rzf >= 150.0 &&
                  cross_rzf <= 400.0;

  detail = "ls/mmse mrc=" + fmt(ratio_mrc) + " rzf=" + fmt(ratio_rzf) +
           " cross95 mrc=" + fmt(cross_mrc) + " rzf=" + fmt(cross_rzf);
  return ratios_ok && cross_ok;
}

// ---- criterion 7: determinism ---------------------------------------------

std::string csv_string(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  write_csv(rows, out);
  return out.str();
}

bool determinism(std::string& detail) {
  ExperimentConfig cfg;
  cfg.scenario.antennas = 8;
  cfg.scenario.ues_per_cell = 2;
  cfg.scenario.cells = 2;
  cfg.scenario.tau_c = 20;
  cfg.scenario.tau_s = 100;
  cfg.sweep = {2, 4};
  cfg.nq_multiplier = 5;
  cfg.n_outer = 4;
  cfg.n_avg = 2;
  cfg.n_blocks = 150;
  cfg.grid_step = 0.25;
  cfg.seed = 11;
  cfg.workers = 1;

  std::string mse1 = csv_string(run_mse_sweep(cfg));
  std::string se1 = csv_string(run_se_sweep(cfg));
  ExperimentConfig par = cfg;
  par.workers = 4;
  bool ok = csv_string(run_mse_sweep(cfg)) == mse1 &&
            csv_string(run_mse_sweep(par)) == mse1 &&
            csv_string(run_se_sweep(cfg)) == se1 && csv_string(run_se_sweep(par)) == se1;
  detail = ok ? "byte-identical at workers 1 and 4"
              : "csv output differs between runs or worker counts";
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  bool quick = false;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--quick") == 0) quick = true;

  {
    Timer t;
    std::map<std::string, ResultRow> rows = oracle_rows();
    const ResultRow& fmse = rows.at("filter_mse");
    report(1, fmse.value < 0.01, t, "filter mse rel_err=" + fmt(fmse.value));

    const ResultRow& moments = rows.at("combining_moments");
    const ResultRow& fourth = rows.at("fourth_moment");
    report(2, moments.stderr_value <= 3.0 && fourth.stderr_value <= 3.0, t,
           "combining moments sigma=" + fmt(moments.stderr_value) +
               " fourth-moment sigma=" + fmt(fourth.stderr_value));

    const ResultRow& sinr = rows.at("closed_form_sinr");
    report(3, sinr.value < 0.02, t, "closed-form sinr rel_err=" + fmt(sinr.value));
  }

  {
    Timer t;
    std::string detail;
    bool ok = mmse_identities(detail);
    report(4, ok, t, detail);
  }

  ExperimentConfig full;  // defaults: M=100 scenario, sweep to 500, n_outer=20
  full.workers = 0;       // deterministic at any worker count
  if (quick) full = full.quick();

  {
    Timer t;
    std::string detail;
    bool ok = nmse_shape(full, detail);
    report(5, ok, t, detail);
  }
  {
    Timer t;
    std::string detail;
    bool ok = se_reproduction(full, quick ? 0.08 : 0.05, detail);
    report(6, ok, t, detail);
  }
  {
    Timer t;
    std::string detail;
    bool ok = determinism(detail);
    report(7, ok, t, detail);
  }

  std::cout << (failures == 0 ? "ACCEPTED" : "REJECTED") << " (" << failures
            << " criteria failed)\n";
  return failures == 0 ? 0 : 1;
}
