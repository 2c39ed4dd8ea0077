// Independent reference computations used by the tests. Nothing here calls
// into the library's own propagation or matching code.
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "ksphoton/coincidence.hpp"

namespace oracle {

using C = std::complex<double>;
using Mat4 = std::array<std::array<C, 4>, 4>;

inline Mat4 kron(const std::array<std::array<C, 2>, 2>& a, const std::array<std::array<C, 2>, 2>& b) {
  Mat4 m{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) m[2 * i + k][2 * j + l] = a[i][j] * b[k][l];
  return m;
}

inline Mat4 mul(const Mat4& a, const Mat4& b) {
  Mat4 m{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) m[i][j] += a[i][k] * b[k][j];
  return m;
}

inline const std::array<std::array<C, 2>, 2> I2{{{1.0, 0.0}, {0.0, 1.0}}};
inline const std::array<std::array<C, 2>, 2> Z{{{1.0, 0.0}, {0.0, -1.0}}};
inline const std::array<std::array<C, 2>, 2> X{{{0.0, 1.0}, {1.0, 0.0}}};

/// Closed-form amplitude bookkeeping for the lossless two-interferometer
/// network, written out rail by rail. Returns P(D1)..P(D8).
inline std::array<double, 8> network_probabilities(const std::array<C, 4>& in, double hwp1_deg, double hwp2_deg,
                                                   double phi1, double phi2, double analyzer_deg = 22.5) {
  const double pi = std::acos(-1.0);
  const auto plate = [&](double deg, C v, C h) {
    const double t = 2.0 * deg * pi / 180.0;
    return std::array<C, 2>{std::cos(t) * v + std::sin(t) * h, std::sin(t) * v - std::cos(t) * h};
  };
  const auto u = plate(hwp1_deg, in[0], in[1]);
  const auto d = plate(hwp2_deg, in[2], in[3]);
  const C e1 = std::polar(1.0, phi1);
  const C e2 = std::polar(1.0, phi2);
  std::array<C, 2> a1{e1 * u[0], 0.0};
  std::array<C, 2> b1{0.0, d[1]};
  std::array<C, 2> a2{0.0, e2 * u[1]};
  std::array<C, 2> b2{d[0], 0.0};
  const double r = 1.0 / std::sqrt(2.0);
  const auto mix = [&](std::array<C, 2>& a, std::array<C, 2>& b) {
    for (int k = 0; k < 2; ++k) {
      const C x = a[k];
      const C y = b[k];
      a[k] = r * (x + y);
      b[k] = r * (x - y);
    }
  };
  mix(a1, b1);
  mix(a2, b2);
  const auto o1 = plate(analyzer_deg, a1[0], a1[1]);
  const auto o2 = plate(analyzer_deg, b1[0], b1[1]);
  const auto o3 = plate(analyzer_deg, a2[0], a2[1]);
  const auto o4 = plate(analyzer_deg, b2[0], b2[1]);
  return {std::norm(o1[1]), std::norm(o1[0]), std::norm(o2[0]), std::norm(o2[1]),
          std::norm(o3[1]), std::norm(o3[0]), std::norm(o4[0]), std::norm(o4[1])};
}

/// All-pairs coincidence matcher: triggers in time order, each takes the
/// earliest unclaimed in-window signal on every detector. Quadratic.
inline ksphoton::DetectorCounts brute_force_coincidences(const std::vector<ksphoton::DetectionEvent>& triggers,
                                                         const std::vector<ksphoton::DetectionEvent>& signals,
                                                         double window_ns) {
  ksphoton::DetectorCounts counts{};
  std::vector<bool> used(signals.size(), false);
  for (const auto& t : triggers) {
    std::array<bool, 8> matched{};
    for (std::size_t s = 0; s < signals.size(); ++s) {
      const int ch = signals[s].channel;
      if (used[s] || matched[ch - 1]) continue;
      if (std::abs(signals[s].time_ns - t.time_ns) <= window_ns / 2) {
        used[s] = true;
        matched[ch - 1] = true;
        ++counts[ch - 1];
      }
    }
  }
  return counts;
}

}  // namespace oracle
