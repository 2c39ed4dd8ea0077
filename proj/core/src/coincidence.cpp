#include "ksphoton/coincidence.hpp"

#include <algorithm>
#include <stdexcept>

namespace ksphoton {

bool event_before(const DetectionEvent& a, const DetectionEvent& b) {
  if (a.time_ns != b.time_ns) return a.time_ns < b.time_ns;
  return a.channel < b.channel;
}

bool is_sorted(std::span<const DetectionEvent> events) {
  return std::is_sorted(events.begin(), events.end(), event_before);
}

CoincidenceCounts count_coincidences(std::span<const DetectionEvent> triggers, std::span<const DetectionEvent> signals,
                                     double window_ns, std::span<const double> bin_starts_ns) {
  if (!(window_ns > 0.0)) throw std::invalid_argument("coincidence window must be positive");
  if (!is_sorted(triggers) || !is_sorted(signals)) throw std::invalid_argument("event streams must be time-sorted");
  for (const auto& e : triggers) {
    if (e.channel != 0) throw std::invalid_argument("trigger stream may only hold D0 events");
  }
  std::array<std::vector<double>, kDetectorCount> by_detector;
  for (const auto& e : signals) {
    if (e.channel < 1 || e.channel > kDetectorCount) throw std::invalid_argument("signal events must be on D1..D8");
    by_detector[static_cast<std::size_t>(e.channel - 1)].push_back(e.time_ns);
  }

  CoincidenceCounts out;
  out.per_bin.assign(bin_starts_ns.size(), DetectorCounts{});
  const double half = 0.5 * window_ns;
  std::array<std::size_t, kDetectorCount> next{};
  std::size_t bin = 0;

  for (const auto& trig : triggers) {
    const double t = trig.time_ns;
    while (bin + 1 < bin_starts_ns.size() && bin_starts_ns[bin + 1] <= t) ++bin;
    for (std::size_t d = 0; d < kDetectorCount; ++d) {
      const auto& times = by_detector[d];
      std::size_t& j = next[d];
      while (j < times.size() && t - times[j] > half) ++j;
      if (j < times.size() && times[j] - t <= half) {
        ++j;
        ++out.total[d];
        if (!out.per_bin.empty()) ++out.per_bin[bin][d];
      }
    }
  }
  return out;
}

}  // namespace ksphoton
