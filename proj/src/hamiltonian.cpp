#include "hamflow/hamiltonian.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "hamflow/error.hpp"
#include "hamflow/format.hpp"

namespace hamflow {

std::int64_t Hamiltonian::total_levels() const {
  std::int64_t total = 0;
  for (const HamiltonianVariable& v : variables_) total += v.levels;
  return total;
}

std::optional<std::size_t> Hamiltonian::slack_for(std::size_t constraint) const {
  const auto it = slack_of_constraint_.find(constraint);
  if (it == slack_of_constraint_.end()) return std::nullopt;
  return it->second;
}

double Hamiltonian::objective_part(const Point& point) const {
  double total = 0.0;
  for (const auto& [i, c] : objective_linear_) total += c * point.values.at(i);
  return total;
}

double Hamiltonian::penalty_part(const Point& point) const {
  double total = static_cast<double>(penalty_offset_);
  for (const auto& [i, c] : penalty_linear_) total += static_cast<double>(c) * point.values.at(i);
  for (const auto& [ij, c] : penalty_quadratic_) {
    total += static_cast<double>(c) * point.values.at(ij.first) * point.values.at(ij.second);
  }
  return total;
}

double Hamiltonian::integer_energy(const Point& point) const {
  std::vector<std::int64_t> x(point.values.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double v = point.values[i];
    if (v != std::floor(v)) throw ValidationError("integer_energy needs an integral point");
    x[i] = static_cast<std::int64_t>(v);
  }
  __int128 penalty = penalty_offset_;
  for (const auto& [i, c] : penalty_linear_) penalty += static_cast<__int128>(c) * x.at(i);
  for (const auto& [ij, c] : penalty_quadratic_) {
    penalty += static_cast<__int128>(c) * x.at(ij.first) * x.at(ij.second);
  }
  return objective_part(point) + polynomial_.alpha * static_cast<double>(penalty);
}

double choose_alpha(const Model& model) {
  double bound = 0.0;
  for (const ObjectiveTerm& term : model.objective()) {
    bound += term.cost * static_cast<double>(model.variables()[term.variable].upper_bound);
  }
  return 1.0 + bound;
}

Hamiltonian compile_hamiltonian(const Model& model, std::optional<double> alpha) {
  Hamiltonian h;
  const double weight = alpha.value_or(choose_alpha(model));
  if (!(weight > 0.0) || !std::isfinite(weight)) {
    throw ValidationError("penalty weight alpha must be positive and finite");
  }

  for (std::size_t i = 0; i < model.variables().size(); ++i) {
    h.variables_.push_back({VariableOrigin::decision, i, model.variables()[i].upper_bound});
  }
  h.decision_count_ = h.variables_.size();

  for (std::size_t c = 0; c < model.constraints().size(); ++c) {
    const LinearConstraint& row = model.constraints()[c];
    std::vector<Term> terms = row.terms;
    if (row.relation == Relation::less_equal) {
      // Largest gap rhs - lhs inside the bound box; the slack must span it.
      std::int64_t levels = row.rhs;
      for (const Term& t : row.terms) {
        if (t.coefficient < 0) levels -= t.coefficient * model.variables()[t.variable].upper_bound;
      }
      levels = std::max<std::int64_t>(levels, 0);
      const std::size_t slack = h.variables_.size();
      h.variables_.push_back({VariableOrigin::slack, c, levels});
      h.slack_of_constraint_[c] = slack;
      terms.push_back({slack, 1});
    }
    // (sum a_v x_v - b)^2
    for (std::size_t p = 0; p < terms.size(); ++p) {
      const Term& u = terms[p];
      h.penalty_quadratic_[{u.variable, u.variable}] += u.coefficient * u.coefficient;
      for (std::size_t q = p + 1; q < terms.size(); ++q) {
        const Term& v = terms[q];
        const auto key = std::minmax(u.variable, v.variable);
        h.penalty_quadratic_[{key.first, key.second}] += 2 * u.coefficient * v.coefficient;
      }
      if (row.rhs != 0) h.penalty_linear_[u.variable] += -2 * row.rhs * u.coefficient;
    }
    h.penalty_offset_ += row.rhs * row.rhs;
  }
  for (const ObjectiveTerm& term : model.objective()) {
    h.objective_linear_[term.variable] += term.cost;
  }

  Polynomial& poly = h.polynomial_;
  poly.alpha = weight;
  for (const HamiltonianVariable& v : h.variables_) poly.levels.push_back(v.levels);
  for (const auto& [i, c] : h.objective_linear_) poly.linear[i] += c;
  for (const auto& [i, c] : h.penalty_linear_) poly.linear[i] += weight * static_cast<double>(c);
  for (const auto& [ij, c] : h.penalty_quadratic_) {
    if (c != 0) poly.quadratic[ij] = weight * static_cast<double>(c);
  }
  std::erase_if(poly.linear, [](const auto& entry) { return entry.second == 0.0; });
  poly.offset = weight * static_cast<double>(h.penalty_offset_);
  poly.sum_constraint = static_cast<double>(h.total_levels());
  return h;
}

double evaluate_energy(const Polynomial& polynomial, const Point& point) {
  if (point.values.size() != polynomial.size()) {
    throw ValidationError("point has " + std::to_string(point.values.size()) +
                          " values for " + std::to_string(polynomial.size()) + " variables");
  }
  double energy = polynomial.offset;
  for (const auto& [i, c] : polynomial.linear) energy += c * point.values[i];
  for (const auto& [ij, c] : polynomial.quadratic) {
    energy += c * point.values[ij.first] * point.values[ij.second];
  }
  return energy;
}

double evaluate_energy(const Hamiltonian& hamiltonian, const Point& point) {
  return evaluate_energy(hamiltonian.polynomial(), point);
}

double dynamic_range_db(const Polynomial& polynomial) {
  double largest = 0.0;
  double smallest = std::numeric_limits<double>::infinity();
  auto visit = [&](double c) {
    const double magnitude = std::abs(c);
    if (magnitude == 0.0) return;
    largest = std::max(largest, magnitude);
    smallest = std::min(smallest, magnitude);
  };
  for (const auto& [_, c] : polynomial.linear) visit(c);
  for (const auto& [_, c] : polynomial.quadratic) visit(c);
  if (largest == 0.0) throw Error("dynamic range is undefined for an all-zero polynomial");
  return 10.0 * std::log10(largest / smallest);
}

void export_polynomial(const Polynomial& polynomial, std::ostream& out,
                       const std::vector<std::pair<std::string, std::string>>& comments) {
  out << "HAMILTONIAN v1 vars=" << polynomial.size()
      << " alpha=" << format_real(polynomial.alpha, 17)
      << " offset=" << format_real(polynomial.offset, 17)
      << " R=" << format_real(polynomial.sum_constraint, 17) << '\n';
  out << "LEVELS";
  for (std::int64_t l : polynomial.levels) out << ' ' << l;
  out << '\n';
  for (const auto& [key, value] : comments) out << "# " << key << '=' << value << '\n';
  for (const auto& [i, c] : polynomial.linear) {
    if (c != 0.0) out << "1 " << i << ' ' << format_real(c, 17) << '\n';
  }
  for (const auto& [ij, c] : polynomial.quadratic) {
    if (c != 0.0) out << "2 " << ij.first << ' ' << ij.second << ' ' << format_real(c, 17) << '\n';
  }
  if (!out) throw Error("failed to write polynomial file");
}

std::string export_polynomial(const Polynomial& polynomial,
                              const std::vector<std::pair<std::string, std::string>>& comments) {
  std::ostringstream out;
  export_polynomial(polynomial, out, comments);
  return out.str();
}

namespace {

template <typename T>
T parse_number(std::string_view token, std::size_t line) {
  T value{};
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError("line " + std::to_string(line) + ": bad number '" + std::string(token) + "'",
                     line);
  }
  return value;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) ++pos;
    std::size_t end = pos;
    while (end < line.size() && line[end] != ' ' && line[end] != '\t' && line[end] != '\r') ++end;
    if (end > pos) tokens.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return tokens;
}

std::string_view field(std::string_view token, std::string_view name, std::size_t line) {
  if (token.substr(0, name.size()) != name || token.size() <= name.size() ||
      token[name.size()] != '=') {
    throw ParseError("line " + std::to_string(line) + ": expected " + std::string(name) + "=",
                     line);
  }
  return token.substr(name.size() + 1);
}

}  // namespace

Polynomial import_polynomial(std::string_view text) {
  Polynomial poly;
  std::size_t line_no = 0;
  std::size_t vars = 0;
  bool have_header = false;
  bool have_levels = false;
  while (!text.empty()) {
    const std::size_t end = text.find('\n');
    const std::string_view line = text.substr(0, end);
    text = end == std::string_view::npos ? std::string_view{} : text.substr(end + 1);
    ++line_no;
    const auto tokens = split(line);
    if (tokens.empty() || tokens[0].front() == '#') continue;
    if (!have_header) {
      if (tokens.size() != 6 || tokens[0] != "HAMILTONIAN" || tokens[1] != "v1") {
        throw ParseError("line 1: expected 'HAMILTONIAN v1' header", line_no);
      }
      vars = parse_number<std::size_t>(field(tokens[2], "vars", line_no), line_no);
      poly.alpha = parse_number<double>(field(tokens[3], "alpha", line_no), line_no);
      poly.offset = parse_number<double>(field(tokens[4], "offset", line_no), line_no);
      poly.sum_constraint = parse_number<double>(field(tokens[5], "R", line_no), line_no);
      have_header = true;
    } else if (!have_levels) {
      if (tokens[0] != "LEVELS" || tokens.size() != vars + 1) {
        throw ParseError("line " + std::to_string(line_no) + ": expected LEVELS with " +
                             std::to_string(vars) + " entries",
                         line_no);
      }
      for (std::size_t i = 1; i < tokens.size(); ++i) {
        poly.levels.push_back(parse_number<std::int64_t>(tokens[i], line_no));
      }
      have_levels = true;
    } else {
      const int degree = parse_number<int>(tokens[0], line_no);
      if (degree == 1 && tokens.size() == 3) {
        const auto i = parse_number<std::size_t>(tokens[1], line_no);
        if (i >= vars || poly.linear.count(i)) {
          throw ParseError("line " + std::to_string(line_no) + ": bad or repeated index", line_no);
        }
        poly.linear[i] = parse_number<double>(tokens[2], line_no);
      } else if (degree == 2 && tokens.size() == 4) {
        const auto i = parse_number<std::size_t>(tokens[1], line_no);
        const auto j = parse_number<std::size_t>(tokens[2], line_no);
        if (i > j || j >= vars || poly.quadratic.count({i, j})) {
          throw ParseError("line " + std::to_string(line_no) + ": bad or repeated index pair",
                           line_no);
        }
        poly.quadratic[{i, j}] = parse_number<double>(tokens[3], line_no);
      } else {
        throw ParseError("line " + std::to_string(line_no) + ": unsupported term", line_no);
      }
    }
  }
  if (!have_header || !have_levels) throw ParseError("truncated polynomial file", line_no);
  return poly;
}

Assignment decode_point(const Hamiltonian& hamiltonian, const Model& model, const Point& point) {
  if (point.values.size() != hamiltonian.variables().size()) {
    throw ValidationError("point length does not match the Hamiltonian");
  }
  Assignment assignment = zero_assignment(model);
  for (std::size_t i = 0; i < hamiltonian.decision_count(); ++i) {
    const std::size_t v = hamiltonian.variables()[i].source;
    const auto rounded = static_cast<std::int64_t>(std::round(point.values[i]));
    assignment.values[v] = std::clamp<std::int64_t>(rounded, 0, model.variables()[v].upper_bound);
  }
  return assignment;
}

Point encode_assignment(const Hamiltonian& hamiltonian, const Model& model,
                        const Assignment& assignment) {
  Point point{std::vector<double>(hamiltonian.variables().size(), 0.0)};
  for (std::size_t i = 0; i < hamiltonian.variables().size(); ++i) {
    const HamiltonianVariable& v = hamiltonian.variables()[i];
    if (v.origin == VariableOrigin::decision) {
      point.values[i] = static_cast<double>(assignment.values.at(v.source));
      continue;
    }
    const LinearConstraint& row = model.constraints()[v.source];
    std::int64_t gap = row.rhs;
    for (const Term& t : row.terms) gap -= t.coefficient * assignment.values.at(t.variable);
    point.values[i] = static_cast<double>(std::clamp<std::int64_t>(gap, 0, v.levels));
  }
  return point;
}

}  // namespace hamflow
