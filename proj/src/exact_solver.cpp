#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "hamflow/error.hpp"
#include "hamflow/solvers.hpp"
#include "routing_network.hpp"

namespace hamflow {

namespace {

using Clock = std::chrono::steady_clock;

enum class Verdict { yes, no, unknown };

// Exact search for per-commodity integral flows that fit fixed vehicle
// capacities. Depot-times are settled in time order; at each one the units
// of every commodity on hand are split across the departing slots.
class JointRouter {
 public:
  JointRouter(const detail::RoutingNetwork& net, std::vector<std::int64_t> cap_mass,
              Clock::time_point deadline)
      : net_(net), cap_(std::move(cap_mass)), deadline_(deadline) {
    const std::size_t commodities = net.commodity_count();
    arrivals_.assign(commodities, std::vector<std::int64_t>(net.node_count(), 0));
    flows_.assign(net.slots().size() * commodities, 0);
    outgoing_.assign(net.node_count(), {});
    for (std::size_t s = 0; s < net.slots().size(); ++s) {
      const detail::Slot& slot = net.slots()[s];
      // Arrivals after the horizon carry nothing in a balanced instance.
      if (slot.arrive <= net.horizon()) outgoing_[net.node(slot.tail, slot.time)].push_back(s);
    }
    for (int t = 1; t <= net.horizon(); ++t) {
      for (std::size_t d = 0; d < net.depot_count(); ++d) events_.emplace_back(d, t);
    }
  }

  Verdict solve() {
    const bool found = place(0, 0);
    if (timed_out_) return Verdict::unknown;
    return found ? Verdict::yes : Verdict::no;
  }

  // Units of commodity k on slot s.
  std::int64_t units(std::size_t s, std::size_t k) const {
    return flows_[s * net_.commodity_count() + k];
  }

 private:
  bool expired() {
    if (++steps_ % 1024 == 0 && Clock::now() > deadline_) timed_out_ = true;
    return timed_out_;
  }

  bool place(std::size_t event, std::size_t k) {
    if (expired()) return false;
    if (k == net_.commodity_count()) {
      ++event;
      k = 0;
      if (event < events_.size() && events_[event].second != events_[event - 1].second) {
        // Layer boundary: whatever is in transit must still be routable.
        if (!net_.relaxation_feasible(cap_, events_[event].second, &arrivals_)) return false;
      }
    }
    if (event == events_.size()) return true;
    const auto [depot, time] = events_[event];
    const std::size_t here = net_.node(depot, time);
    const std::int64_t on_hand = arrivals_[k][here] + net_.supply_units(depot, k, time) -
                                 net_.demand_units(depot, k, time);
    if (on_hand < 0) return false;
    candidates_.clear();
    for (std::size_t s : outgoing_[here]) {
      if (net_.slots()[s].flow[k] != kNoIndex) candidates_.push_back(s);
    }
    std::vector<std::size_t> slots = candidates_;
    std::int64_t room = 0;
    for (std::size_t s : slots) room += limit(s, k);
    if (room < on_hand) return false;
    return distribute(event, k, slots, 0, on_hand);
  }

  std::int64_t limit(std::size_t s, std::size_t k) const {
    const std::size_t var = net_.slots()[s].flow[k];
    return std::min(net_.model().variables()[var].upper_bound, cap_[s] / net_.load(k));
  }

  bool distribute(std::size_t event, std::size_t k, const std::vector<std::size_t>& slots,
                  std::size_t pos, std::int64_t remaining) {
    if (pos == slots.size()) return remaining == 0 && place(event, k + 1);
    const std::size_t s = slots[pos];
    const detail::Slot& slot = net_.slots()[s];
    const std::size_t head = net_.node(slot.head, slot.arrive);
    std::int64_t rest_room = 0;
    for (std::size_t q = pos + 1; q < slots.size(); ++q) rest_room += limit(slots[q], k);
    const std::int64_t most = std::min(remaining, limit(s, k));
    const std::int64_t least = std::max<std::int64_t>(0, remaining - rest_room);
    for (std::int64_t u = most; u >= least; --u) {
      cap_[s] -= u * net_.load(k);
      arrivals_[k][head] += u;
      flows_[s * net_.commodity_count() + k] = u;
      if (distribute(event, k, slots, pos + 1, remaining - u)) return true;
      cap_[s] += u * net_.load(k);
      arrivals_[k][head] -= u;
      flows_[s * net_.commodity_count() + k] = 0;
      if (timed_out_) return false;
    }
    return false;
  }

  const detail::RoutingNetwork& net_;
  std::vector<std::int64_t> cap_;
  Clock::time_point deadline_;
  std::vector<std::vector<std::int64_t>> arrivals_;
  std::vector<std::int64_t> flows_;
  std::vector<std::vector<std::size_t>> outgoing_;
  std::vector<std::pair<std::size_t, int>> events_;
  std::vector<std::size_t> candidates_;
  std::uint64_t steps_ = 0;
  bool timed_out_ = false;
};

class BranchAndBound {
 public:
  BranchAndBound(const Model& model, double time_limit)
      : model_(model), net_(model), start_(Clock::now()) {
    deadline_ = start_ + std::chrono::duration_cast<Clock::duration>(
                             std::chrono::duration<double>(time_limit));
    const auto& slots = net_.slots();
    order_.resize(slots.size());
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
      if (slots[a].cost != slots[b].cost) return slots[a].cost > slots[b].cost;
      return slots[a].time < slots[b].time;
    });
    vehicles_.assign(slots.size(), 0);
    fixed_.assign(slots.size(), 0);
  }

  SolveResult run() {
    search(0, 0.0);
    SolveResult result;
    result.nodes = nodes_;
    if (timed_out_) {
      result.status = SolveStatus::time_limit;
    } else {
      result.status = best_ ? SolveStatus::optimal : SolveStatus::infeasible;
    }
    if (best_) {
      best_->wall_time = std::chrono::duration<double>(Clock::now() - start_).count();
      result.best = std::move(best_);
    }
    return result;
  }

 private:
  std::vector<std::int64_t> capacities() const {
    std::vector<std::int64_t> cap(vehicles_.size());
    for (std::size_t s = 0; s < cap.size(); ++s) {
      const std::int64_t v = fixed_[s] ? vehicles_[s] : net_.slots()[s].vehicle_ub;
      cap[s] = v * net_.capacity();
    }
    return cap;
  }

  bool worse_than_incumbent(double bound) const {
    if (!best_) return false;
    return bound >= best_->objective - 1e-9 * std::max(1.0, std::abs(best_->objective));
  }

  void search(std::size_t depth, double fixed_cost) {
    if (timed_out_) return;
    ++nodes_;
    if (Clock::now() > deadline_) {
      timed_out_ = true;
      return;
    }
    const std::vector<std::int64_t> cap = capacities();
    if (!net_.relaxation_feasible(cap, 1, nullptr)) return;
    const auto rest = net_.fractional_cost(vehicles_, fixed_);
    if (!rest || worse_than_incumbent(fixed_cost + *rest)) return;

    if (depth == order_.size()) {
      JointRouter router(net_, cap, deadline_);
      const Verdict verdict = router.solve();
      if (verdict == Verdict::unknown) timed_out_ = true;
      if (verdict == Verdict::yes) record(router);
      return;
    }
    const std::size_t s = order_[depth];
    const detail::Slot& slot = net_.slots()[s];
    fixed_[s] = 1;
    for (std::int64_t v = 0; v <= slot.vehicle_ub && !timed_out_; ++v) {
      const double cost = fixed_cost + slot.cost * static_cast<double>(v);
      if (v > 0 && worse_than_incumbent(cost)) break;
      vehicles_[s] = v;
      search(depth + 1, cost);
    }
    fixed_[s] = 0;
    vehicles_[s] = 0;
  }

  void record(const JointRouter& router) {
    Assignment assignment = zero_assignment(model_);
    for (std::size_t s = 0; s < net_.slots().size(); ++s) {
      const detail::Slot& slot = net_.slots()[s];
      assignment.values[slot.vehicle] = vehicles_[s];
      for (std::size_t k = 0; k < net_.commodity_count(); ++k) {
        if (slot.flow[k] != kNoIndex) assignment.values[slot.flow[k]] = router.units(s, k);
      }
    }
    Sample sample;
    sample.objective = evaluate_objective(model_, assignment);
    sample.energy = sample.objective;
    sample.feasible = verify_assignment(model_, assignment).feasible;
    sample.assignment = std::move(assignment);
    if (!sample.feasible) throw Error("internal: routed schedule failed verification");
    if (!best_ || sample.objective < best_->objective) best_ = std::move(sample);
  }

  const Model& model_;
  detail::RoutingNetwork net_;
  Clock::time_point start_;
  Clock::time_point deadline_;
  std::vector<std::size_t> order_;
  std::vector<std::int64_t> vehicles_;
  std::vector<char> fixed_;
  std::optional<Sample> best_;
  std::uint64_t nodes_ = 0;
  bool timed_out_ = false;
};

}  // namespace

SolveResult solve_exact(const Model& model, double time_limit_seconds) {
  BranchAndBound search(model, time_limit_seconds);
  return search.run();
}

SolveResult brute_force_oracle(const Model& model, std::uint64_t max_space) {
  const auto start = Clock::now();
  const auto& variables = model.variables();
  const std::size_t n = variables.size();

  std::uint64_t space = 1;
  for (const Variable& v : variables) {
    const auto options = static_cast<std::uint64_t>(v.upper_bound) + 1;
    if (space > max_space / options) {
      throw SearchSpaceTooLarge("brute force over " + std::to_string(n) +
                                " variables exceeds the limit of " + std::to_string(max_space));
    }
    space *= options;
  }

  // Column view and running row activities (lhs - rhs).
  const auto& rows = model.constraints();
  std::vector<std::vector<std::pair<std::size_t, std::int64_t>>> columns(n);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (const Term& t : rows[r].terms) columns[t.variable].emplace_back(r, t.coefficient);
  }
  std::vector<std::int64_t> activity(rows.size());
  std::size_t violated = 0;
  auto is_violated = [&](std::size_t r) {
    return rows[r].relation == Relation::equal ? activity[r] != 0 : activity[r] > 0;
  };
  for (std::size_t r = 0; r < rows.size(); ++r) {
    activity[r] = -rows[r].rhs;
    if (is_violated(r)) ++violated;
  }
  auto shift = [&](std::size_t v, std::int64_t delta) {
    for (const auto& [r, a] : columns[v]) {
      const bool before = is_violated(r);
      activity[r] += a * delta;
      const bool after = is_violated(r);
      if (before != after) after ? ++violated : --violated;
    }
  };

  SolveResult result;
  Assignment current = zero_assignment(model);
  while (true) {
    ++result.nodes;
    if (violated == 0) {
      const double objective = evaluate_objective(model, current);
      if (!result.best || objective < result.best->objective) {
        Sample sample;
        sample.assignment = current;
        sample.objective = objective;
        sample.energy = objective;
        sample.feasible = true;
        result.best = std::move(sample);
      }
    }
    std::size_t v = 0;
    for (; v < n; ++v) {
      if (current.values[v] < variables[v].upper_bound) {
        ++current.values[v];
        shift(v, 1);
        break;
      }
      shift(v, -current.values[v]);
      current.values[v] = 0;
    }
    if (v == n) break;
  }
  result.status = result.best ? SolveStatus::optimal : SolveStatus::infeasible;
  if (result.best) {
    result.best->wall_time = std::chrono::duration<double>(Clock::now() - start).count();
  }
  return result;
}

}  // namespace hamflow
