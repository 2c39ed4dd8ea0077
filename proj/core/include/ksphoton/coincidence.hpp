// Time-tagged detection events and the trigger/signal coincidence matcher.
#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "ksphoton/optics.hpp"

namespace ksphoton {

/// Channel 0 is the trigger detector D0; 1..8 are D1..D8.
struct DetectionEvent {
  double time_ns = 0.0;
  int channel = 0;

  friend bool operator==(const DetectionEvent&, const DetectionEvent&) = default;
};

/// Timestamp order, ties broken by channel.
bool event_before(const DetectionEvent& a, const DetectionEvent& b);
bool is_sorted(std::span<const DetectionEvent> events);

using DetectorCounts = std::array<std::uint64_t, kDetectorCount>;

struct CoincidenceCounts {
  DetectorCounts total{};
  /// Indexed like the bin edges passed to count_coincidences; empty otherwise.
  std::vector<DetectorCounts> per_bin;
};

/// A signal on Di coincides with a trigger when |t_signal - t_trigger| <= window/2.
/// Triggers are visited in time order; each claims the earliest still
/// unmatched signal per detector inside its window, so every trigger matches
/// at most one signal per detector and every signal at most one trigger.
/// Linear time. Coincidences are binned by trigger time against
/// `bin_starts_ns` (ascending; the last bin is open-ended).
///
/// Throws std::invalid_argument if either stream is unsorted, if the trigger
/// stream holds non-D0 events, or the signal stream holds D0 events.
CoincidenceCounts count_coincidences(std::span<const DetectionEvent> triggers, std::span<const DetectionEvent> signals,
                                     double window_ns, std::span<const double> bin_starts_ns = {});

}  // namespace ksphoton
