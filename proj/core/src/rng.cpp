#include "mimocov/rng.hpp"

#include <cmath>

namespace mimo {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = mix64(seed);
  for (std::uint64_t id : path) s = mix64(s ^ mix64(id + 0x632be59bd9b4e019ULL));
  return s;
}

double Rng::uniform() {
  // 53-bit mantissa from the top bits of one 64-bit word.
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

Complex Rng::cgauss() {
  // Magnitude^2 of CN(0,1) is Exp(1); the phase is uniform.
  double u = uniform();
  double v = uniform();
  double r = std::sqrt(-std::log1p(-u));
  double phi = 2.0 * M_PI * v;
  return {r * std::cos(phi), r * std::sin(phi)};
}

double Rng::gauss() {
  double u = uniform();
  double v = uniform();
  double r = std::sqrt(-2.0 * std::log1p(-u));
  return r * std::cos(2.0 * M_PI * v);
}

CVector Rng::cgauss_vector(int m) {
  CVector z(m);
  for (int i = 0; i < m; ++i) z(i) = cgauss();
  return z;
}

CMatrix Rng::cgauss_matrix(int m, int n) {
  CMatrix z(m, n);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < m; ++r) z(r, c) = cgauss();
  return z;
}

}  // namespace mimo
