#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hamflow/expansion.hpp"

namespace hamflow {

// Degree-2 polynomial over nonnegative variables in the device file form:
//   E(p) = offset + sum_i linear[i] p_i + sum_{i<=j} quadratic[i,j] p_i p_j
// Each unordered pair is stored once, keyed with i <= j.
struct Polynomial {
  std::vector<std::int64_t> levels;
  std::map<std::size_t, double> linear;
  std::map<std::pair<std::size_t, std::size_t>, double> quadratic;
  double offset = 0.0;
  double alpha = 1.0;
  // Sum constraint sum_i p_i = R targeted by photonic solvers. Metadata only.
  double sum_constraint = 0.0;

  std::size_t size() const { return levels.size(); }
  bool operator==(const Polynomial&) const = default;
};

struct Point {
  std::vector<double> values;
};

enum class VariableOrigin { decision, slack };

struct HamiltonianVariable {
  VariableOrigin origin = VariableOrigin::decision;
  // Model variable index for decisions, constraint index for slacks.
  std::size_t source = 0;
  // The variable ranges over {0, ..., levels}.
  std::int64_t levels = 0;
};

// H = P1 + alpha * P2 where P1 is the vehicle cost and P2 the sum of squared
// equality residuals. Capacity rows become equalities through one integer
// slack each. P2 is kept in exact integer form alongside the combined
// real-valued polynomial.
class Hamiltonian {
 public:
  const std::vector<HamiltonianVariable>& variables() const { return variables_; }
  const Polynomial& polynomial() const { return polynomial_; }
  double alpha() const { return polynomial_.alpha; }
  std::size_t decision_count() const { return decision_count_; }
  std::size_t slack_count() const { return variables_.size() - decision_count_; }
  std::int64_t total_levels() const;

  // Slack variable attached to a model constraint, if any.
  std::optional<std::size_t> slack_for(std::size_t constraint) const;

  // Objective part and exact penalty part evaluated separately.
  double objective_part(const Point& point) const;
  double penalty_part(const Point& point) const;

  // P1 + alpha * P2 with P2 summed in integer arithmetic. Every value of
  // `point` must be integral; a point with zero residuals yields exactly P1.
  double integer_energy(const Point& point) const;

 private:
  friend Hamiltonian compile_hamiltonian(const Model&, std::optional<double>);

  std::vector<HamiltonianVariable> variables_;
  std::size_t decision_count_ = 0;
  Polynomial polynomial_;
  std::map<std::size_t, double> objective_linear_;
  std::map<std::size_t, std::int64_t> penalty_linear_;
  std::map<std::pair<std::size_t, std::size_t>, std::int64_t> penalty_quadratic_;
  std::int64_t penalty_offset_ = 0;
  std::map<std::size_t, std::size_t> slack_of_constraint_;
};

// One more than the largest objective value reachable inside the variable
// bounds, so any integer constraint violation outweighs every cost.
double choose_alpha(const Model& model);

// Throws ValidationError on a non-positive alpha.
Hamiltonian compile_hamiltonian(const Model& model, std::optional<double> alpha = std::nullopt);

double evaluate_energy(const Polynomial& polynomial, const Point& point);
double evaluate_energy(const Hamiltonian& hamiltonian, const Point& point);

// 10 * log10(max |coefficient| / min nonzero |coefficient|) over linear and
// quadratic terms. Throws Error when every coefficient is zero.
double dynamic_range_db(const Polynomial& polynomial);

// Writes the line-oriented polynomial file. `comments` become "# key=value"
// lines after the LEVELS line.
void export_polynomial(const Polynomial& polynomial, std::ostream& out,
                       const std::vector<std::pair<std::string, std::string>>& comments = {});
std::string export_polynomial(const Polynomial& polynomial,
                              const std::vector<std::pair<std::string, std::string>>& comments = {});

Polynomial import_polynomial(std::string_view text);

// Rounds decision values half away from zero, clamps to [0, upper bound] and
// drops slacks.
Assignment decode_point(const Hamiltonian& hamiltonian, const Model& model, const Point& point);

// Decision values copied, each slack set to the value in [0, levels] that
// minimises its row's squared residual.
Point encode_assignment(const Hamiltonian& hamiltonian, const Model& model,
                        const Assignment& assignment);

}  // namespace hamflow
