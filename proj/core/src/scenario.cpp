#include "mimocov/scenario.hpp"

#include <cmath>

namespace mimo {

NetworkGeometry build_geometry(const SystemParams& params) {
  params.validate();
  NetworkGeometry geo;
  geo.bs_positions.resize(params.cells);
  geo.bs_positions[0] = {0.0, 0.0};
  for (int l = 1; l < params.cells; ++l) {
    // Neighbors at azimuths 0, 60, 120, ... degrees.
    double az = (l - 1) * M_PI / 3.0;
    geo.bs_positions[l] = {params.inter_bs_distance * std::cos(az),
                           params.inter_bs_distance * std::sin(az)};
  }
  geo.ue_positions.resize(params.cells);
  for (int l = 0; l < params.cells; ++l) {
    geo.ue_positions[l].resize(params.ues_per_cell);
    for (int k = 0; k < params.ues_per_cell; ++k) {
      double az = 2.0 * M_PI * k / params.ues_per_cell;
      geo.ue_positions[l][k] = {
          geo.bs_positions[l].x + params.ue_ring_radius * std::cos(az),
          geo.bs_positions[l].y + params.ue_ring_radius * std::sin(az)};
    }
  }
  return geo;
}

double large_scale_gain(double distance_m, const SystemParams& params) {
  if (!(distance_m > 0.0))
    throw std::invalid_argument("large_scale_gain: distance must be positive");
  double snr_db = params.pathloss_a - params.pathloss_b * std::log10(distance_m);
  return std::pow(10.0, snr_db / 10.0);
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  int mid = (n + 1) / 2;
  for (int i = 0; i < mid; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      // Legendre recurrence for P_n(x) and P'_n(x).
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
}

CMatrix one_ring_covariance(double beta, double azimuth_rad, const SystemParams& params,
                            int quad_order) {
  if (!(beta > 0.0)) throw std::invalid_argument("one_ring_covariance: beta must be positive");
  const int m = params.antennas;
  const double delta = 0.5 * params.spread_deg * M_PI / 180.0;

  std::vector<double> nodes, weights;
  gauss_legendre(quad_order, nodes, weights);

  // Toeplitz: only the first column is computed.
  // t(d) = beta/(2*delta) * integral exp(i*2*pi*spacing*d*sin(azimuth+x)) dx
  // over [-delta, delta]; GL weights already sum to 2 so the 1/(2*delta)
  // normalization cancels against the interval scaling delta.
  std::vector<Complex> t(m);
  for (int d = 0; d < m; ++d) t[d] = Complex(0.0, 0.0);
  for (int q = 0; q < quad_order; ++q) {
    double s = std::sin(azimuth_rad + delta * nodes[q]);
    double w = 0.5 * weights[q];
    double phase_step = 2.0 * M_PI * params.antenna_spacing * s;
    for (int d = 0; d < m; ++d) {
      double ph = phase_step * d;
      t[d] += w * Complex(std::cos(ph), std::sin(ph));
    }
  }

  CMatrix r(m, m);
  for (int col = 0; col < m; ++col) {
    for (int row = 0; row < m; ++row) {
      int d = row - col;
      r(row, col) = beta * (d >= 0 ? t[d] : std::conj(t[-d]));
    }
  }
  // Diagonal is exactly beta: the integrand has unit magnitude at d=0.
  for (int i = 0; i < m; ++i) r(i, i) = Complex(beta, 0.0);
  return r;
}

CovarianceSet::CovarianceSet(int cells, int ues, int antennas)
    : cells_(cells), ues_(ues), antennas_(antennas),
      r_(static_cast<std::size_t>(cells) * cells * ues),
      q_(static_cast<std::size_t>(cells) * ues) {}

CovarianceSet build_covariance_set(const NetworkGeometry& geometry,
                                   const SystemParams& params, int quad_order) {
  params.validate();
  const int cells = params.cells;
  const int ues = params.ues_per_cell;
  if (static_cast<int>(geometry.bs_positions.size()) != cells ||
      static_cast<int>(geometry.ue_positions.size()) != cells)
    throw std::invalid_argument("build_covariance_set: geometry does not match params");

  CovarianceSet set(cells, ues, params.antennas);
  for (int j = 0; j < cells; ++j) {
    const Point& bs = geometry.bs_positions[j];
    for (int k = 0; k < ues; ++k) {
      CMatrix q = CMatrix::Zero(params.antennas, params.antennas);
      for (int l = 0; l < cells; ++l) {
        const Point& ue = geometry.ue_positions[l][k];
        double d = distance(bs, ue);
        double beta = large_scale_gain(d, params);
        double az = std::atan2(ue.y - bs.y, ue.x - bs.x);
        set.R(j, l, k) = one_ring_covariance(beta, az, params, quad_order);
        q += set.R(j, l, k);
      }
      q += (1.0 / params.rho_tr) * CMatrix::Identity(params.antennas, params.antennas);
      set.Q(j, k) = q;
    }
  }
  return set;
}

}  // namespace mimo
