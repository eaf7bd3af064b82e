#pragma once

#include <vector>

#include "mimocov/types.hpp"

namespace mimo {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

/// Planar positions of all base stations and UEs. The center BS sits at
/// the origin with its neighbors on a ring; UE k occupies the same
/// azimuth offset relative to its serving BS in every cell, so UEs at
/// matching positions share a pilot and cause maximal contamination.
struct NetworkGeometry {
  std::vector<Point> bs_positions;               // [cell]
  std::vector<std::vector<Point>> ue_positions;  // [cell][ue]
};

NetworkGeometry build_geometry(const SystemParams& params);

/// Linear large-scale channel gain at the given distance. With noise
/// power normalized to one this is the per-antenna SNR,
/// 10^((a - b*log10(d))/10).
double large_scale_gain(double distance_m, const SystemParams& params);

/// One-ring covariance for a uniform linear array: multipath arrives
/// uniformly over [azimuth - delta, azimuth + delta] with
/// delta = spread_deg/2. The result is Hermitian Toeplitz with diagonal
/// exactly beta. `quad_order` selects the Gauss-Legendre order used for
/// the angular integral.
CMatrix one_ring_covariance(double beta, double azimuth_rad, const SystemParams& params,
                            int quad_order = 200);

/// The full covariance family of a scenario: R(j,l,k) is the covariance
/// of the channel from UE k of cell l to BS j, and Q(j,k) is the
/// covariance of the pilot observation for pilot k at BS j,
/// Q(j,k) = sum_l R(j,l,k) + I/rho_tr.
class CovarianceSet {
 public:
  CovarianceSet(int cells, int ues, int antennas);

  const CMatrix& R(int j, int l, int k) const { return r_[index(j, l, k)]; }
  CMatrix& R(int j, int l, int k) { return r_[index(j, l, k)]; }
  const CMatrix& Q(int j, int k) const { return q_[j * ues_ + k]; }
  CMatrix& Q(int j, int k) { return q_[j * ues_ + k]; }

  int cells() const { return cells_; }
  int ues() const { return ues_; }
  int antennas() const { return antennas_; }

 private:
  int index(int j, int l, int k) const {
    if (j < 0 || j >= cells_ || l < 0 || l >= cells_ || k < 0 || k >= ues_)
      throw std::out_of_range("CovarianceSet index out of range");
    return (j * cells_ + l) * ues_ + k;
  }

  int cells_;
  int ues_;
  int antennas_;
  std::vector<CMatrix> r_;
  std::vector<CMatrix> q_;
};

CovarianceSet build_covariance_set(const NetworkGeometry& geometry,
                                   const SystemParams& params, int quad_order = 200);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace mimo
