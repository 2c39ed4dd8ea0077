#include "ksphoton/optics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/tools/minima.hpp>
#include <fmt/format.h>

namespace ksphoton {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kTuningGridPoints = 721;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_leakage(double leakage) {
  if (!(leakage >= 0.0 && leakage <= 1.0)) {
    throw std::invalid_argument(fmt::format("PBS leakage {} outside [0, 1]", leakage));
  }
}

// Half-wave plates are periodic in 180 degrees up to a global sign; fold
// perturbed angles back into [-90, 90].
Degrees fold_angle(Degrees a) {
  double v = std::fmod(a.value, 180.0);
  if (v > 90.0) v -= 180.0;
  if (v < -90.0) v += 180.0;
  return Degrees{v};
}

}  // namespace

double to_radians(Degrees d) { return d.value * std::numbers::pi / 180.0; }

double ModeState::rail_probability(RailId rail) const {
  return std::norm(at(rail, Polarization::Vertical)) + std::norm(at(rail, Polarization::Horizontal));
}

double ModeState::norm() const {
  double n = 0.0;
  for (const auto& a : amplitudes_) n += std::norm(a);
  return n;
}

Matrix2 hwp_jones(Degrees angle) {
  const double t = 2.0 * to_radians(angle);
  const double c = std::cos(t);
  const double s = std::sin(t);
  Matrix2 m;
  m << c, s, s, -c;
  return m;
}

ModeState pbs_transform(ModeState state, const PolarizingBeamsplitter& pbs) {
  check_leakage(pbs.leakage);
  const Complex v = state.at(pbs.input, Polarization::Vertical);
  const Complex h = state.at(pbs.input, Polarization::Horizontal);
  const double keep = std::sqrt(1.0 - pbs.leakage);
  const double leak = std::sqrt(pbs.leakage);
  state.at(pbs.input, Polarization::Vertical) = 0.0;
  state.at(pbs.input, Polarization::Horizontal) = 0.0;
  state.at(pbs.reflected, Polarization::Vertical) += keep * v;
  state.at(pbs.transmitted, Polarization::Vertical) += leak * v;
  state.at(pbs.transmitted, Polarization::Horizontal) += keep * h;
  state.at(pbs.reflected, Polarization::Horizontal) -= leak * h;
  return state;
}

ModeState bs_transform(ModeState state, const Beamsplitter& bs) {
  const double r = 1.0 / std::sqrt(2.0);
  for (Polarization pol : {Polarization::Vertical, Polarization::Horizontal}) {
    const Complex a = state.at(bs.first, pol);
    const Complex b = state.at(bs.second, pol);
    state.at(bs.first, pol) = r * (a + b);
    state.at(bs.second, pol) = r * (a - b);
  }
  return state;
}

void apply(const OpticalElement& element, ModeState& state) {
  std::visit(Overloaded{
                 [&](const HalfWavePlate& hwp) {
                   const Matrix2 j = hwp_jones(hwp.angle);
                   const Complex v = state.at(hwp.rail, Polarization::Vertical);
                   const Complex h = state.at(hwp.rail, Polarization::Horizontal);
                   state.at(hwp.rail, Polarization::Vertical) = j(0, 0) * v + j(0, 1) * h;
                   state.at(hwp.rail, Polarization::Horizontal) = j(1, 0) * v + j(1, 1) * h;
                 },
                 [&](const PolarizingBeamsplitter& pbs) { state = pbs_transform(std::move(state), pbs); },
                 [&](const Beamsplitter& bs) { state = bs_transform(std::move(state), bs); },
                 [&](const PhaseShift& ps) {
                   const Complex f = std::polar(1.0, ps.phase.value);
                   state.at(ps.rail, Polarization::Vertical) *= f;
                   state.at(ps.rail, Polarization::Horizontal) *= f;
                 },
             },
             element);
}

std::string to_string(Detector d) { return fmt::format("D{}", number(d)); }

double DetectorDistribution::total() const {
  double t = 0.0;
  for (double p : p_) t += p;
  return t;
}

double DetectorDistribution::sum(std::initializer_list<Detector> detectors) const {
  double t = 0.0;
  for (Detector d : detectors) t += (*this)[d];
  return t;
}

RailId OpticalNetwork::rail(const std::string& name) const {
  const auto it = std::find(rail_names_.begin(), rail_names_.end(), name);
  if (it == rail_names_.end()) throw std::out_of_range("no rail named " + name);
  return RailId{static_cast<int>(it - rail_names_.begin())};
}

std::size_t OpticalNetwork::checkpoint(const std::string& name) const {
  for (const auto& [n, pos] : checkpoints_) {
    if (n == name) return pos;
  }
  throw std::out_of_range("no checkpoint named " + name);
}

ModeState OpticalNetwork::inject(const StateVector& input) const {
  ModeState state(rail_count());
  state.at(up_, Polarization::Vertical) = input[basis_index(Path::Up, Polarization::Vertical)];
  state.at(up_, Polarization::Horizontal) = input[basis_index(Path::Up, Polarization::Horizontal)];
  state.at(down_, Polarization::Vertical) = input[basis_index(Path::Down, Polarization::Vertical)];
  state.at(down_, Polarization::Horizontal) = input[basis_index(Path::Down, Polarization::Horizontal)];
  return state;
}

ModeState OpticalNetwork::run(const StateVector& input, std::size_t element_count) const {
  ModeState state = inject(input);
  const std::size_t n = std::min(element_count, elements_.size());
  for (std::size_t i = 0; i < n; ++i) apply(elements_[i], state);
  return state;
}

NetworkBuilder::NetworkBuilder(const std::string& up_name, const std::string& down_name) {
  network_.up_ = add_rail(up_name);
  network_.down_ = add_rail(down_name);
  status_[0] = status_[1] = 1;
}

RailId NetworkBuilder::add_rail(const std::string& name) {
  if (std::find(network_.rail_names_.begin(), network_.rail_names_.end(), name) != network_.rail_names_.end()) {
    throw std::invalid_argument("duplicate rail name " + name);
  }
  network_.rail_names_.push_back(name);
  status_.push_back(0);
  return RailId{static_cast<int>(network_.rail_names_.size()) - 1};
}

void NetworkBuilder::require_live(RailId rail, const char* what) const {
  if (rail.index < 0 || rail.index >= static_cast<int>(status_.size())) {
    throw std::invalid_argument(fmt::format("{}: unknown rail {}", what, rail.index));
  }
  if (status_[static_cast<std::size_t>(rail.index)] != 1) {
    throw std::invalid_argument(
        fmt::format("{}: rail '{}' carries no light", what, network_.rail_names_[static_cast<std::size_t>(rail.index)]));
  }
}

void NetworkBuilder::require_fresh(RailId rail, const char* what) const {
  if (rail.index < 0 || rail.index >= static_cast<int>(status_.size())) {
    throw std::invalid_argument(fmt::format("{}: unknown rail {}", what, rail.index));
  }
  if (status_[static_cast<std::size_t>(rail.index)] != 0) {
    throw std::invalid_argument(
        fmt::format("{}: rail '{}' already in use", what, network_.rail_names_[static_cast<std::size_t>(rail.index)]));
  }
}

NetworkBuilder& NetworkBuilder::add(const OpticalElement& element) {
  std::visit(Overloaded{
                 [&](const HalfWavePlate& hwp) {
                   require_live(hwp.rail, "half-wave plate");
                   if (!std::isfinite(hwp.angle.value) || hwp.angle.value < -90.0 || hwp.angle.value > 90.0) {
                     throw std::invalid_argument(fmt::format("half-wave plate angle {} outside [-90, 90]",
                                                             hwp.angle.value));
                   }
                 },
                 [&](const PolarizingBeamsplitter& pbs) {
                   require_live(pbs.input, "PBS input");
                   check_leakage(pbs.leakage);
                   require_fresh(pbs.reflected, "PBS reflected port");
                   if (!(pbs.transmitted == pbs.input)) require_fresh(pbs.transmitted, "PBS transmitted port");
                   if (pbs.reflected == pbs.transmitted) throw std::invalid_argument("PBS ports must differ");
                   status_[static_cast<std::size_t>(pbs.input.index)] = 2;
                   status_[static_cast<std::size_t>(pbs.reflected.index)] = 1;
                   status_[static_cast<std::size_t>(pbs.transmitted.index)] = 1;
                 },
                 [&](const Beamsplitter& bs) {
                   require_live(bs.first, "beamsplitter");
                   require_live(bs.second, "beamsplitter");
                   if (bs.first == bs.second) throw std::invalid_argument("beamsplitter rails must differ");
                 },
                 [&](const PhaseShift& ps) {
                   require_live(ps.rail, "phase shift");
                   if (!std::isfinite(ps.phase.value)) throw std::invalid_argument("phase must be finite");
                 },
             },
             element);
  network_.elements_.push_back(element);
  return *this;
}

NetworkBuilder& NetworkBuilder::checkpoint(const std::string& name) {
  network_.checkpoints_.emplace_back(name, network_.elements_.size());
  return *this;
}

OpticalNetwork NetworkBuilder::finish(const std::array<RailId, kDetectorCount>& detectors) {
  std::vector<int> hits(status_.size(), 0);
  for (std::size_t k = 0; k < detectors.size(); ++k) {
    const RailId r = detectors[k];
    require_live(r, "detector");
    if (++hits[static_cast<std::size_t>(r.index)] > 1) {
      throw std::invalid_argument("two detectors on rail " + network_.rail_names_[static_cast<std::size_t>(r.index)]);
    }
  }
  for (std::size_t i = 0; i < status_.size(); ++i) {
    if (status_[i] == 1 && hits[i] == 0) {
      throw std::invalid_argument("dangling rail '" + network_.rail_names_[i] + "' has no detector");
    }
  }
  network_.detectors_ = detectors;
  return network_;
}

SetupId SetupId::custom(Degrees hwp1, Degrees hwp2) {
  for (Degrees a : {hwp1, hwp2}) {
    if (!std::isfinite(a.value) || a.value < -90.0 || a.value > 90.0) {
      throw std::invalid_argument(fmt::format("half-wave plate angle {} outside [-90, 90]", a.value));
    }
  }
  return SetupId(Kind::Custom, hwp1, hwp2);
}

std::string SetupId::name() const {
  switch (kind_) {
    case Kind::Setup1: return "setup1";
    case Kind::Setup1Prime: return "setup1p";
    case Kind::Setup2: return "setup2";
    case Kind::Custom: break;
  }
  return fmt::format("custom({},{})", hwp1_.value, hwp2_.value);
}

NetworkParameters NetworkParameters::for_setup(const SetupId& setup, InterferometerPhases phases) {
  NetworkParameters p;
  p.hwp1 = setup.hwp1();
  p.hwp2 = setup.hwp2();
  p.phases = phases;
  return p;
}

OpticalNetwork build_network(const NetworkParameters& params) {
  NetworkBuilder b("u", "d");
  const RailId bs1a = b.add_rail("bs1.a");
  const RailId bs1b = b.add_rail("bs1.b");
  const RailId bs2a = b.add_rail("bs2.a");
  const RailId bs2b = b.add_rail("bs2.b");
  std::array<RailId, kDetectorCount> det{};
  for (Detector d : kDetectors) det[index(d)] = b.add_rail(to_string(d));
  const auto D = [&](Detector d) { return det[index(d)]; };
  const double leak = params.pbs_leakage;

  b.add(HalfWavePlate{b.up(), fold_angle(params.hwp1)})
      .add(HalfWavePlate{b.down(), fold_angle(params.hwp2)})
      .add(PolarizingBeamsplitter{b.up(), bs1a, bs2a, leak})
      .add(PolarizingBeamsplitter{b.down(), bs2b, bs1b, leak})
      .checkpoint("routed")
      .add(PhaseShift{bs1a, params.phases.bs1})
      .add(PhaseShift{bs2a, params.phases.bs2})
      .add(Beamsplitter{bs1a, bs1b})
      .add(Beamsplitter{bs2a, bs2b})
      .checkpoint("interfered")
      .add(HalfWavePlate{bs1a, fold_angle(params.analyzers[0])})
      .add(HalfWavePlate{bs1b, fold_angle(params.analyzers[1])})
      .add(HalfWavePlate{bs2a, fold_angle(params.analyzers[2])})
      .add(HalfWavePlate{bs2b, fold_angle(params.analyzers[3])})
      .add(PolarizingBeamsplitter{bs1a, D(Detector::D2), D(Detector::D1), leak})
      .add(PolarizingBeamsplitter{bs1b, D(Detector::D3), D(Detector::D4), leak})
      .add(PolarizingBeamsplitter{bs2a, D(Detector::D6), D(Detector::D5), leak})
      .add(PolarizingBeamsplitter{bs2b, D(Detector::D7), D(Detector::D8), leak});
  return b.finish(det);
}

OpticalNetwork build_setup(const SetupId& setup, Radians phase1, Radians phase2) {
  return build_network(NetworkParameters::for_setup(setup, InterferometerPhases{phase1, phase2}));
}

DetectorDistribution propagate(const OpticalNetwork& network, const StateVector& input) {
  const ModeState out = network.run(input);
  DetectorDistribution dist;
  for (Detector d : kDetectors) dist[d] = out.rail_probability(network.detector_rail(d));
  return dist;
}

StateVector prepare_state(Degrees hwp0, double pbs0_leakage) {
  check_leakage(pbs0_leakage);
  // HWP0 acting on a vertical source photon gives cos2t |z+> + sin2t |z-> ...
  const Matrix2 j = hwp_jones(hwp0);
  const Complex v = j(0, 0);
  const Complex h = j(1, 0);
  // ... which PBS0 splits onto the up (reflected) and down (transmitted) paths.
  const double keep = std::sqrt(1.0 - pbs0_leakage);
  const double leak = std::sqrt(pbs0_leakage);
  Vector4 a = Vector4::Zero();
  a[basis_index(Path::Up, Polarization::Vertical)] = keep * v;
  a[basis_index(Path::Down, Polarization::Vertical)] = leak * v;
  a[basis_index(Path::Down, Polarization::Horizontal)] = keep * h;
  a[basis_index(Path::Up, Polarization::Horizontal)] = -leak * h;
  return StateVector::normalized(a);
}

InterferometerPhases tune_phases(const SetupId& setup) {
  const bool first = setup.kind() == SetupId::Kind::Setup1;
  if (!first && setup.kind() != SetupId::Kind::Setup1Prime) {
    throw std::invalid_argument("phase tuning needs Setup1 or Setup1Prime, got " + setup.name());
  }
  const StateVector psi = bell_state();
  const auto objective = [&](double phase) {
    const InterferometerPhases ph = first ? InterferometerPhases{Radians{phase}, Radians{0.0}}
                                          : InterferometerPhases{Radians{0.0}, Radians{phase}};
    const DetectorDistribution p = propagate(build_network(NetworkParameters::for_setup(setup, ph)), psi);
    return first ? p.sum({Detector::D1, Detector::D3}) : p.sum({Detector::D5, Detector::D7});
  };

  const double step = kTwoPi / kTuningGridPoints;
  int best = 0;
  double best_value = objective(0.0);
  for (int i = 1; i < kTuningGridPoints; ++i) {
    const double v = objective(i * step);
    if (v < best_value) {
      best = i;
      best_value = v;
    }
  }
  const double centre = best * step;
  const auto [phase, value] =
      boost::math::tools::brent_find_minima(objective, centre - step, centre + step, std::numeric_limits<double>::digits);
  double result = value <= best_value ? phase : centre;
  result = std::fmod(result, kTwoPi);
  if (result < 0.0) result += kTwoPi;
  return first ? InterferometerPhases{Radians{result}, Radians{0.0}} : InterferometerPhases{Radians{0.0}, Radians{result}};
}

const InterferometerPhases& tuned_phases() {
  static const InterferometerPhases phases{tune_phases(SetupId::setup1()).bs1,
                                           tune_phases(SetupId::setup1_prime()).bs2};
  return phases;
}

OutcomeMap outcome_map(const SetupId& setup) {
  constexpr Sign P = Sign::Plus;
  constexpr Sign M = Sign::Minus;
  OutcomeMap map{};
  switch (setup.kind()) {
    case SetupId::Kind::Setup1:
    case SetupId::Kind::Setup1Prime: {
      // BS output a is X1 = +1, output b is X1 = -1; the analyzer's reflected
      // port is X2 = +1 (+45 degrees), transmitted is X2 = -1.
      map.first = Observable::X1;
      map.second = Observable::X2;
      const std::size_t off = setup.kind() == SetupId::Kind::Setup1 ? 0 : 4;
      map.outcomes[off + 0] = JointOutcome{P, M};
      map.outcomes[off + 1] = JointOutcome{P, P};
      map.outcomes[off + 2] = JointOutcome{M, P};
      map.outcomes[off + 3] = JointOutcome{M, M};
      return map;
    }
    case SetupId::Kind::Setup2:
      // HWP1 at +22.5 and HWP2 at -67.5 turn PBS1/PBS2 into X2 analyzers, so
      // BS1 collects photons with Z1X2 = +1 and BS2 those with Z1X2 = -1.
      // Behind each BS, the analyzer ports read X1Z2.
      map.first = Observable::Z1X2;
      map.second = Observable::X1Z2;
      map.outcomes = {JointOutcome{P, M}, JointOutcome{P, P}, JointOutcome{P, M}, JointOutcome{P, P},
                      JointOutcome{M, P}, JointOutcome{M, M}, JointOutcome{M, P}, JointOutcome{M, M}};
      return map;
    case SetupId::Kind::Custom: break;
  }
  throw std::invalid_argument("custom setups have no observable interpretation: " + setup.name());
}

}  // namespace ksphoton
