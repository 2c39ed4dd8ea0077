#include "ksphoton/nchv.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace ksphoton {

namespace {

std::string sign_string(Sign s) { return s == Sign::Plus ? "+1" : "-1"; }

}  // namespace

Sign Assignment::operator[](Observable o) const {
  switch (o) {
    case Observable::Z1: return values_[0];
    case Observable::X1: return values_[1];
    case Observable::Z2: return values_[2];
    case Observable::X2: return values_[3];
    default: break;
  }
  const auto f = factors(o);
  return (*this)[f.first] * (*this)[f.second];
}

std::string Assignment::to_string() const {
  return fmt::format("Z1={} X1={} Z2={} X2={}", sign_string(values_[0]), sign_string(values_[1]),
                     sign_string(values_[2]), sign_string(values_[3]));
}

bool Constraint::satisfied_by(const Assignment& a) const {
  Sign v = a[first];
  if (second) v = v * a[*second];
  return v == required;
}

std::string Constraint::to_string() const {
  if (!second) return fmt::format("{} = {}", ksphoton::to_string(first), sign_string(required));
  const auto f = factors(first);
  const auto s = factors(*second);
  if (f.is_product || s.is_product) {
    return fmt::format("({})({}) = {}", ksphoton::to_string(first), ksphoton::to_string(*second), sign_string(required));
  }
  return fmt::format("{}{} = {}", ksphoton::to_string(first), ksphoton::to_string(*second), sign_string(required));
}

std::vector<Constraint> KSSet::constraints() const {
  std::vector<Constraint> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back(Constraint{p.first, p.second, p.product});
  return out;
}

KSSet ks_set() {
  return KSSet{{
      KSPair{Observable::Z1, Observable::Z2, Sign::Plus},
      KSPair{Observable::X1, Observable::X2, Sign::Plus},
      KSPair{Observable::Z1X2, Observable::X1Z2, Sign::Minus},
  }};
}

std::vector<Constraint> preparation_premises() {
  return {Constraint{Observable::Z1Z2, std::nullopt, Sign::Plus}, Constraint{Observable::X1X2, std::nullopt, Sign::Plus}};
}

std::vector<Assignment> enumerate_assignments() {
  std::vector<Assignment> out;
  out.reserve(16);
  for (Sign z1 : kSigns)
    for (Sign x1 : kSigns)
      for (Sign z2 : kSigns)
        for (Sign x2 : kSigns) out.emplace_back(z1, x1, z2, x2);
  return out;
}

std::vector<Assignment> consistent_assignments(const std::vector<Constraint>& constraints) {
  std::vector<Assignment> out;
  for (const Assignment& a : enumerate_assignments()) {
    bool ok = true;
    for (const Constraint& c : constraints) ok = ok && c.satisfied_by(a);
    if (ok) out.push_back(a);
  }
  return out;
}

std::vector<Detector> nchv_allowed_detectors(const SetupId& setup, const OutcomeMap& map,
                                             const std::vector<Constraint>& premises) {
  if (setup.is_custom()) {
    throw std::invalid_argument("custom setups have no hidden-variable prediction: " + setup.name());
  }
  const auto survivors = consistent_assignments(premises);
  std::vector<Detector> out;
  for (Detector d : kDetectors) {
    const auto& outcome = map[d];
    if (!outcome) continue;
    for (const Assignment& a : survivors) {
      if (a[map.first] == outcome->first && a[map.second] == outcome->second) {
        out.push_back(d);
        break;
      }
    }
  }
  return out;
}

EpsilonBound::EpsilonBound(int n_measurements) : n_(n_measurements) {
  if (n_ <= 0) throw std::invalid_argument("epsilon bound needs a positive number of measurements");
}

EpsilonBound epsilon_bound(const KSSet& ks) {
  if (ks.pairs.empty()) throw std::invalid_argument("empty Kochen-Specker set");
  return EpsilonBound(static_cast<int>(ks.pairs.size()));
}

std::string to_string(Verdict v) { return v == Verdict::DisproofOfNCHV ? "DisproofOfNCHV" : "Inconclusive"; }

Verdict verdict(double epsilon, const EpsilonBound& bound) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw std::invalid_argument(fmt::format("error fraction {} outside [0, 1]", epsilon));
  }
  return epsilon < bound.bound() ? Verdict::DisproofOfNCHV : Verdict::Inconclusive;
}

}  // namespace ksphoton
