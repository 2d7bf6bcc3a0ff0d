#pragma once

#include <cstddef>
#include <vector>

#include "hamflow/instance.hpp"

namespace hamflow::detail {

// grid[depot][t] for t in 0..horizon + 1; entries 0 and horizon + 1 are
// always false.
using TimeGrid = std::vector<std::vector<char>>;

// Depot-times where mass of `commodity` can be present: a supply event, or
// the arrival end of an arc departing from a reachable depot-time. Mass never
// waits at a depot, so this is reachability in the time-expanded graph.
TimeGrid forward_reachable(const Instance& instance, std::size_t commodity);

// Depot-times from which some demand event of `commodity` can be reached,
// the demand depot-time itself included.
TimeGrid backward_reachable(const Instance& instance, std::size_t commodity);

}  // namespace hamflow::detail
