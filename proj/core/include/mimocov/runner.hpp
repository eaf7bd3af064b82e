#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mimocov/types.hpp"

namespace mimo {

/// Everything one experiment run needs. Mirrors the flat key-value
/// configuration file schema (see parse_config).
struct ExperimentConfig {
  SystemParams scenario{};
  std::vector<int> sweep = {10, 25, 50, 100, 250, 500};  // N_R values
  int nq_multiplier = 10;  // N_Q = nq_multiplier * N_R
  int n_outer = 20;        // covariance-estimation realizations per point
  int n_blocks = 500;      // Monte-Carlo blocks for SE expectations
  int n_avg = 10;          // realizations averaged inside the factor search
  double grid_step = 0.05;
  std::uint64_t seed = 1;
  std::string output_path = "results.csv";
  int workers = 1;  // 0 = hardware concurrency

  void validate() const;

  /// Reduced effort for smoke tests.
  ExperimentConfig quick() const {
    ExperimentConfig c = *this;
    c.n_outer = std::min(c.n_outer, 5);
    c.n_blocks = std::min(c.n_blocks, 200);
    c.n_avg = std::min(c.n_avg, 5);
    return c;
  }
};

/// Parses `key = value` lines ('#' starts a comment). Unknown keys are
/// rejected. `sweep` is a comma-separated integer list.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_file(const std::string& path);

struct ResultRow {
  std::string experiment;  // nmse | sum_se | sum_se_perfect | validate
  std::string estimator;   // mmse | ls | approx_viaq | approx_rdirect | oracle id
  std::string combiner;    // none | mrc | rzf
  int n_r = 0;
  double eta = 0.0;
  double mu = 0.0;
  double value = 0.0;
  double stderr_value = 0.0;
  std::uint64_t seed = 0;
};

/// Normalized-MSE sweep over N_R for the four estimators, averaged over
/// the center-cell UEs and n_outer realizations.
std::vector<ResultRow> run_mse_sweep(const ExperimentConfig& config);

/// Sum-SE sweep over N_R for MRC and RZF. MRC uses the closed form; RZF
/// is Monte Carlo. MMSE/LS carry no covariance-pilot overhead. The
/// perfect-covariance baseline is appended as `sum_se_perfect` rows.
std::vector<ResultRow> run_se_sweep(const ExperimentConfig& config);

/// Runs the small-scale brute-force oracles (estimation MSE, combining
/// moments, closed-form SINR, observation-covariance consistency) and
/// returns one row per oracle; `passed` reports the overall outcome.
std::vector<ResultRow> run_validation(const ExperimentConfig& config, bool& passed);

void write_csv(const std::vector<ResultRow>& rows, const std::string& path);
void write_csv(const std::vector<ResultRow>& rows, std::ostream& out);

}  // namespace mimo
