#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace mimo {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// All scalar model constants of the multicell uplink scenario.
/// Powers are linear and normalized to unit noise power, so the
/// large-scale gain of a link is directly its per-antenna SNR.
struct SystemParams {
  int antennas = 100;       // M
  int ues_per_cell = 10;    // K
  int cells = 7;            // L
  double tau_c = 200.0;     // channel uses per coherence block
  double tau_s = 25000.0;   // coherence blocks per statistics window
  double rho_ul = 1.0;      // normalized UL data power
  // Total pilot power per UE: the K-symbol pilot sequence is sent at the
  // data power, so the despread observation enjoys a processing gain of
  // K (= 10 in the default scenario).
  double rho_tr = 10.0;
  double spread_deg = 20.0; // angular interval; half-interval is spread_deg/2
  double antenna_spacing = 0.5;  // in wavelengths
  double pathloss_a = 78.7;      // SNR-model intercept [dB]
  double pathloss_b = 37.6;      // SNR-model slope [dB/decade]
  double inter_bs_distance = 300.0;  // m
  double ue_ring_radius = 120.0;     // m

  void validate() const {
    if (antennas < 1) throw std::invalid_argument("antennas must be >= 1");
    if (ues_per_cell < 1) throw std::invalid_argument("ues_per_cell must be >= 1");
    if (cells < 1) throw std::invalid_argument("cells must be >= 1");
    if (!(tau_c > ues_per_cell))
      throw std::invalid_argument("tau_c must exceed ues_per_cell");
    if (!(tau_s >= 1.0)) throw std::invalid_argument("tau_s must be >= 1");
    if (!(rho_ul > 0.0)) throw std::invalid_argument("rho_ul must be positive");
    if (!(rho_tr > 0.0)) throw std::invalid_argument("rho_tr must be positive");
    if (!(spread_deg > 0.0)) throw std::invalid_argument("spread_deg must be positive");
    if (!(antenna_spacing > 0.0))
      throw std::invalid_argument("antenna_spacing must be positive");
    if (!(inter_bs_distance > 0.0))
      throw std::invalid_argument("inter_bs_distance must be positive");
    if (!(ue_ring_radius > 0.0))
      throw std::invalid_argument("ue_ring_radius must be positive");
  }
};

inline double max_abs(const CMatrix& a) { return a.cwiseAbs().maxCoeff(); }

inline bool is_hermitian(const CMatrix& a, double tol = 0.0) {
  return max_abs(a - a.adjoint()) <= tol * std::max(1.0, max_abs(a));
}

/// Force exact Hermitian symmetry, (A + A^H)/2.
inline CMatrix hermitize(const CMatrix& a) { return 0.5 * (a + a.adjoint()); }

}  // namespace mimo
