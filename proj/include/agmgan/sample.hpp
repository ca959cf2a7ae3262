#pragma once

#include <vector>

namespace agmgan {

// Placeholder id for the virtual walk root (it is not a graph vertex).
inline constexpr int kVirtualRoot = -1;

// One random walk from the virtual root. `path` lists the visited real
// vertices in order; the virtual root is implicit before path.front() and
// the selected vertex is path.back(). A forced stop means the walk reached a
// vertex with an empty candidate set, so no stop-move factor enters log_prob
// (the only available action was returning to the root).
struct WalkRecord {
  std::vector<int> path;
  bool forced_stop = false;
  double log_prob = 0.0;

  int chosen() const { return path.back(); }
};

enum class SampleOrigin { observed, generated };

// Ordered vertex subset. Observed samples come from the clique index;
// generated samples come from the generator's walks, with one WalkRecord per
// vertex added after the root and log_prob the sum of the walk log-probs.
struct MotifSample {
  std::vector<int> vertices;
  SampleOrigin origin = SampleOrigin::observed;
  double log_prob = 0.0;
  std::vector<WalkRecord> walks;
};

}  // namespace agmgan
