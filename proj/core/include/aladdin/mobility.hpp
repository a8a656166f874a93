#pragma once

#include <stdexcept>
#include <vector>

#include "aladdin/sim_time.hpp"

namespace aladdin {

// Planar position in metres.
struct Position {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Position&) const = default;
};

double distance(const Position& a, const Position& b);

struct Waypoint {
  SimTime t;
  Position position;
  bool operator==(const Waypoint&) const = default;
};

// Piecewise-linear path. At least one waypoint, times strictly increasing;
// positions clamp to the first/last waypoint outside the covered span.
class MobilityTrace {
 public:
  // Throws std::invalid_argument naming the offending row (1-based).
  explicit MobilityTrace(std::vector<Waypoint> waypoints);

  static MobilityTrace stationary(Position p) { return MobilityTrace({Waypoint{SimTime::zero(), p}}); }

  const std::vector<Waypoint>& waypoints() const noexcept { return waypoints_; }

 private:
  std::vector<Waypoint> waypoints_;
};

Position position_at(const MobilityTrace& trace, SimTime t);

}  // namespace aladdin
