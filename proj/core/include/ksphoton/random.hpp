// Seeded random substreams. Every stream is identified by the run seed plus a
// short path of integers (domain, stage, bin, ...) so that streams can be
// regenerated independently and in any order.
#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace ksphoton {

enum class StreamDomain : std::uint64_t {
  HwpAngles = 1,
  PhaseDrift = 2,
  Photons = 3,
  DarkCounts = 4,
};

/// Variates are produced with hand-written transforms on top of
/// std::mt19937_64 so sequences are identical across standard libraries.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, StreamDomain domain, std::initializer_list<std::uint64_t> path = {});

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double normal();
  double normal(double sigma) { return sigma * normal(); }
  double exponential(double rate);
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ksphoton
