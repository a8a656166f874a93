#include "aladdin/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace aladdin {

double distance(const Position& a, const Position& b) { return std::hypot(a.x - b.x, a.y - b.y); }

MobilityTrace::MobilityTrace(std::vector<Waypoint> waypoints) : waypoints_(std::move(waypoints)) {
  if (waypoints_.empty()) throw std::invalid_argument("mobility trace needs at least one waypoint");
  for (std::size_t i = 1; i < waypoints_.size(); ++i) {
    if (waypoints_[i].t <= waypoints_[i - 1].t) {
      throw std::invalid_argument("waypoint " + std::to_string(i + 1) + " does not advance in time");
    }
  }
}

Position position_at(const MobilityTrace& trace, SimTime t) {
  const auto& w = trace.waypoints();
  if (t <= w.front().t) return w.front().position;
  if (t >= w.back().t) return w.back().position;
  auto hi = std::upper_bound(w.begin(), w.end(), t, [](SimTime v, const Waypoint& p) { return v < p.t; });
  auto lo = hi - 1;
  const double span = static_cast<double>((hi->t - lo->t).count());
  const double f = static_cast<double>((t - lo->t).count()) / span;
  return Position{lo->position.x + f * (hi->position.x - lo->position.x),
                  lo->position.y + f * (hi->position.y - lo->position.y)};
}

}  // namespace aladdin
