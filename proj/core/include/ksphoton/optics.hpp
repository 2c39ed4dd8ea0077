// Linear-optics model of the two-interferometer Kochen-Specker setup.
//
// The photon lives on a set of spatial rails, each carrying two polarization
// modes (z+ vertical, z- horizontal). Wiring:
//
//   u : HWP1 -> PBS1 -> reflected   -> BS1 arm a (phase1)
//                    -> transmitted -> BS2 arm a (phase2)
//   d : HWP2 -> PBS2 -> transmitted -> BS1 arm b
//                    -> reflected   -> BS2 arm b
//   BS1 a : HWP3 -> PBS3 -> D2 (reflected), D1 (transmitted)
//   BS1 b : HWP4 -> PBS4 -> D3 (reflected), D4 (transmitted)
//   BS2 a : HWP5 -> PBS5 -> D6 (reflected), D5 (transmitted)
//   BS2 b : HWP6 -> PBS6 -> D7 (reflected), D8 (transmitted)
//
// HWP3..HWP6 sit at +22.5 degrees, so each analyzer PBS reflects +45 and
// transmits -45 polarization.
#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ksphoton/state.hpp"

namespace ksphoton {

struct Degrees {
  double value = 0.0;
};
struct Radians {
  double value = 0.0;
};

double to_radians(Degrees d);

struct RailId {
  int index = -1;
  friend bool operator==(RailId, RailId) = default;
};

struct HalfWavePlate {
  RailId rail;
  Degrees angle;
};

/// Reflects z+ and transmits z-. `leakage` is the probability that a photon
/// exits through the wrong port (finite extinction ratio).
struct PolarizingBeamsplitter {
  RailId input;
  RailId reflected;
  RailId transmitted;
  double leakage = 0.0;
};

/// 50/50 splitter acting as a real Hadamard on the rail pair:
/// first <- (first + second)/sqrt2, second <- (first - second)/sqrt2.
struct Beamsplitter {
  RailId first;
  RailId second;
};

struct PhaseShift {
  RailId rail;
  Radians phase;
};

using OpticalElement = std::variant<HalfWavePlate, PolarizingBeamsplitter, Beamsplitter, PhaseShift>;

/// Complex amplitudes over (rail, polarization).
class ModeState {
 public:
  explicit ModeState(int rail_count) : amplitudes_(2 * static_cast<std::size_t>(rail_count), Complex{0.0, 0.0}) {}

  int rail_count() const { return static_cast<int>(amplitudes_.size() / 2); }
  Complex& at(RailId rail, Polarization pol) { return amplitudes_.at(slot(rail, pol)); }
  Complex at(RailId rail, Polarization pol) const { return amplitudes_.at(slot(rail, pol)); }

  double rail_probability(RailId rail) const;
  double norm() const;

 private:
  static std::size_t slot(RailId rail, Polarization pol) {
    return 2 * static_cast<std::size_t>(rail.index) + static_cast<std::size_t>(pol);
  }
  std::vector<Complex> amplitudes_;
};

/// Half-wave plate Jones matrix in the (z+, z-) ordering:
/// [[cos 2t, sin 2t], [sin 2t, -cos 2t]].
Matrix2 hwp_jones(Degrees angle);

ModeState pbs_transform(ModeState state, const PolarizingBeamsplitter& pbs);
ModeState bs_transform(ModeState state, const Beamsplitter& bs);
void apply(const OpticalElement& element, ModeState& state);

enum class Detector : int { D1 = 1, D2, D3, D4, D5, D6, D7, D8 };
inline constexpr int kDetectorCount = 8;
inline constexpr std::array<Detector, kDetectorCount> kDetectors{Detector::D1, Detector::D2, Detector::D3,
                                                                 Detector::D4, Detector::D5, Detector::D6,
                                                                 Detector::D7, Detector::D8};
constexpr std::size_t index(Detector d) { return static_cast<std::size_t>(static_cast<int>(d) - 1); }
constexpr int number(Detector d) { return static_cast<int>(d); }
std::string to_string(Detector d);

/// Per-heralded-photon click probabilities for D1..D8.
class DetectorDistribution {
 public:
  DetectorDistribution() = default;
  explicit DetectorDistribution(const std::array<double, kDetectorCount>& p) : p_(p) {}

  double operator[](Detector d) const { return p_[index(d)]; }
  double& operator[](Detector d) { return p_[index(d)]; }
  const std::array<double, kDetectorCount>& values() const { return p_; }
  double total() const;
  double sum(std::initializer_list<Detector> detectors) const;

 private:
  std::array<double, kDetectorCount> p_{};
};

class OpticalNetwork {
 public:
  int rail_count() const { return static_cast<int>(rail_names_.size()); }
  const std::vector<OpticalElement>& elements() const { return elements_; }
  const std::string& rail_name(RailId rail) const { return rail_names_.at(static_cast<std::size_t>(rail.index)); }
  RailId rail(const std::string& name) const;
  RailId detector_rail(Detector d) const { return detectors_[index(d)]; }

  /// Number of elements applied before the named checkpoint.
  std::size_t checkpoint(const std::string& name) const;

  /// Loads the two-qubit state onto the (up, down) input rails.
  ModeState inject(const StateVector& input) const;
  /// Applies the first `element_count` elements (all by default).
  ModeState run(const StateVector& input, std::size_t element_count = static_cast<std::size_t>(-1)) const;

 private:
  friend class NetworkBuilder;
  std::vector<std::string> rail_names_;
  std::vector<OpticalElement> elements_;
  std::vector<std::pair<std::string, std::size_t>> checkpoints_;
  RailId up_;
  RailId down_;
  std::array<RailId, kDetectorCount> detectors_{};
};

/// Assembles an OpticalNetwork while tracking which rails carry light. Every
/// element must act on live rails, PBS reflected outputs must be fresh rails,
/// and at `finish` every live rail must end in exactly one detector.
class NetworkBuilder {
 public:
  NetworkBuilder(const std::string& up_name, const std::string& down_name);

  RailId up() const { return network_.up_; }
  RailId down() const { return network_.down_; }
  RailId add_rail(const std::string& name);
  NetworkBuilder& add(const OpticalElement& element);
  NetworkBuilder& checkpoint(const std::string& name);
  OpticalNetwork finish(const std::array<RailId, kDetectorCount>& detectors);

 private:
  void require_live(RailId rail, const char* what) const;
  void require_fresh(RailId rail, const char* what) const;

  OpticalNetwork network_;
  std::vector<int> status_;  // 0 fresh, 1 live, 2 consumed
};

class SetupId {
 public:
  enum class Kind { Setup1, Setup1Prime, Setup2, Custom };

  static SetupId setup1() { return SetupId(Kind::Setup1, Degrees{0.0}, Degrees{0.0}); }
  static SetupId setup1_prime() { return SetupId(Kind::Setup1Prime, Degrees{45.0}, Degrees{45.0}); }
  static SetupId setup2() { return SetupId(Kind::Setup2, Degrees{22.5}, Degrees{-67.5}); }
  /// Rejects angles outside [-90, 90] degrees or non-finite values.
  static SetupId custom(Degrees hwp1, Degrees hwp2);

  Kind kind() const { return kind_; }
  bool is_custom() const { return kind_ == Kind::Custom; }
  Degrees hwp1() const { return hwp1_; }
  Degrees hwp2() const { return hwp2_; }
  /// setup1 | setup1p | setup2 | custom(a,b)
  std::string name() const;

  friend bool operator==(const SetupId& a, const SetupId& b) {
    return a.kind_ == b.kind_ && a.hwp1_.value == b.hwp1_.value && a.hwp2_.value == b.hwp2_.value;
  }

 private:
  SetupId(Kind k, Degrees a, Degrees b) : kind_(k), hwp1_(a), hwp2_(b) {}
  Kind kind_;
  Degrees hwp1_;
  Degrees hwp2_;
};

struct InterferometerPhases {
  Radians bs1;
  Radians bs2;
};

/// Every adjustable knob of the network. Defaults give the ideal Setup1.
struct NetworkParameters {
  Degrees hwp1{0.0};
  Degrees hwp2{0.0};
  std::array<Degrees, 4> analyzers{Degrees{22.5}, Degrees{22.5}, Degrees{22.5}, Degrees{22.5}};  // HWP3..HWP6
  InterferometerPhases phases{};
  double pbs_leakage = 0.0;  // PBS1..PBS6

  static NetworkParameters for_setup(const SetupId& setup, InterferometerPhases phases);
};

OpticalNetwork build_network(const NetworkParameters& params);
OpticalNetwork build_setup(const SetupId& setup, Radians phase1, Radians phase2);

DetectorDistribution propagate(const OpticalNetwork& network, const StateVector& input);

/// Source photon (vertical) through HWP0 and PBS0. At 22.5 degrees with no
/// leakage this is exactly bell_state().
StateVector prepare_state(Degrees hwp0, double pbs0_leakage = 0.0);

/// Tunes the interferometer exercised by `setup` (BS1 for Setup1, BS2 for
/// Setup1Prime) so its odd-numbered ports are dark. The other phase is 0.
/// Throws std::invalid_argument for Setup2 and custom setups.
InterferometerPhases tune_phases(const SetupId& setup);

/// BS1 phase from Setup1 tuning combined with BS2 phase from Setup1Prime tuning.
/// Computed once and cached.
const InterferometerPhases& tuned_phases();

struct JointOutcome {
  Sign first;
  Sign second;
  Sign product() const { return first * second; }
  friend bool operator==(const JointOutcome&, const JointOutcome&) = default;
};

/// What each live detector registers. Setup1/Setup1Prime read (X1, X2),
/// Setup2 reads (Z1X2, X1Z2). Detectors that receive no light in a setup
/// carry no outcome.
struct OutcomeMap {
  Observable first;
  Observable second;
  std::array<std::optional<JointOutcome>, kDetectorCount> outcomes;

  const std::optional<JointOutcome>& operator[](Detector d) const { return outcomes[index(d)]; }
};

/// Throws std::invalid_argument for custom setups.
OutcomeMap outcome_map(const SetupId& setup);

}  // namespace ksphoton
