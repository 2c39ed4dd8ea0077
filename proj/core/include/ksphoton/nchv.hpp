// Noncontextual hidden-variable bookkeeping: brute-force +/-1 valuations of
// Z1, X1, Z2, X2 and the error-fraction criterion for finite-precision runs.
#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "ksphoton/optics.hpp"
#include "ksphoton/state.hpp"

namespace ksphoton {

/// Predetermined values of the four base observables. Product observables
/// are always derived, v(AB) = v(A) v(B).
class Assignment {
 public:
  Assignment(Sign z1, Sign x1, Sign z2, Sign x2) : values_{z1, x1, z2, x2} {}

  Sign operator[](Observable o) const;
  std::string to_string() const;

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::array<Sign, 4> values_;  // Z1, X1, Z2, X2
};

/// v(first) * v(second) == required. `second` empty means v(first) == required.
struct Constraint {
  Observable first;
  std::optional<Observable> second;
  Sign required;

  bool satisfied_by(const Assignment& a) const;
  std::string to_string() const;
};

/// A co-measurable pair together with the product value quantum mechanics
/// assigns to it on the prepared state.
struct KSPair {
  Observable first;
  Observable second;
  Sign product;
};

struct KSSet {
  std::vector<KSPair> pairs;

  std::vector<Constraint> constraints() const;
};

/// {{Z1,Z2}, {X1,X2}, {Z1X2, X1Z2}} with products +1, +1, -1.
KSSet ks_set();

/// Z1Z2 = +1 and X1X2 = +1: what the preparation stage establishes.
std::vector<Constraint> preparation_premises();

/// All 16 valuations, Z1 varying slowest, +1 before -1.
std::vector<Assignment> enumerate_assignments();

std::vector<Assignment> consistent_assignments(const std::vector<Constraint>& constraints);

/// Detectors whose registered outcome is reachable by at least one assignment
/// satisfying `premises`. Throws std::invalid_argument for custom setups.
std::vector<Detector> nchv_allowed_detectors(const SetupId& setup, const OutcomeMap& map,
                                             const std::vector<Constraint>& premises);

class EpsilonBound {
 public:
  explicit EpsilonBound(int n_measurements);

  int n_measurements() const { return n_; }
  /// 1 / n_measurements
  double bound() const { return 1.0 / n_; }

 private:
  int n_;
};

/// Throws std::invalid_argument on an empty set.
EpsilonBound epsilon_bound(const KSSet& ks);

enum class Verdict { DisproofOfNCHV, Inconclusive };
std::string to_string(Verdict v);

/// Disproof iff epsilon < bound. Throws std::invalid_argument unless epsilon in [0, 1].
Verdict verdict(double epsilon, const EpsilonBound& bound);

}  // namespace ksphoton
