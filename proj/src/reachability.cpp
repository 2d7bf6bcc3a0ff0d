#include "reachability.hpp"

namespace hamflow::detail {

TimeGrid forward_reachable(const Instance& instance, std::size_t commodity) {
  const int horizon = instance.horizon();
  const std::size_t n = instance.depots().size();
  TimeGrid grid(n, std::vector<char>(horizon + 2, 0));
  for (int t = 1; t <= horizon; ++t) {
    for (std::size_t d = 0; d < n; ++d) {
      if (instance.net_supply(d, commodity, t) > 0) grid[d][t] = 1;
    }
    for (std::size_t a = 0; a < instance.arcs().size(); ++a) {
      const int depart = t - instance.arcs()[a].travel_time;
      if (depart >= 1 && grid[instance.arc_tail(a)][depart]) {
        grid[instance.arc_head(a)][t] = 1;
      }
    }
  }
  return grid;
}

TimeGrid backward_reachable(const Instance& instance, std::size_t commodity) {
  const int horizon = instance.horizon();
  const std::size_t n = instance.depots().size();
  TimeGrid grid(n, std::vector<char>(horizon + 2, 0));
  for (int t = horizon; t >= 1; --t) {
    for (std::size_t d = 0; d < n; ++d) {
      if (instance.net_supply(d, commodity, t) < 0) grid[d][t] = 1;
    }
    for (std::size_t a = 0; a < instance.arcs().size(); ++a) {
      const int arrive = t + instance.arcs()[a].travel_time;
      if (arrive <= horizon && grid[instance.arc_head(a)][arrive]) {
        grid[instance.arc_tail(a)][t] = 1;
      }
    }
  }
  return grid;
}

}  // namespace hamflow::detail
