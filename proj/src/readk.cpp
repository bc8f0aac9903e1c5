#include "smplab/readk.hpp"

#include "smplab/error.hpp"

#include <algorithm>
#include <cmath>

namespace smplab {

namespace {

std::size_t table_size(const ReadKFamily& f, const std::vector<std::size_t>& support) {
  std::size_t size = 1;
  for (auto v : support) size *= f.domains[v].values.size();
  return size;
}

// Dense index into a support table for the full assignment `pos`
// (pos[i] = position of X_i's value in its domain).
std::size_t table_index(const ReadKFamily& f, const std::vector<std::size_t>& support,
                        const std::vector<std::size_t>& pos) {
  std::size_t index = 0;
  for (auto v : support) index = index * f.domains[v].values.size() + pos[v];
  return index;
}

Rational rational_from_json(const nlohmann::json& v) {
  if (v.is_number_integer()) return Rational(v.get<long long>());
  if (v.is_string()) return parse_rational(v.get<std::string>());
  throw ConfigError("rational values must be integers or \"p/q\" strings");
}

}  // namespace

void ReadKFamily::validate() const {
  for (const auto& d : domains) {
    if (d.values.empty() || d.values.size() != d.weights.size()) {
      throw ConfigError("each domain needs one weight per value and at least one value");
    }
    Rational total = 0;
    for (const auto& w : d.weights) {
      if (w < 0) throw ConfigError("domain weights must be non-negative");
      total += w;
    }
    if (total != 1) throw ConfigError("domain weights must sum to 1, got " + to_string(total));
  }
  if (supports.size() != tables.size()) throw ConfigError("need one table per support");
  for (std::size_t j = 0; j < supports.size(); ++j) {
    const auto& s = supports[j];
    if (!std::is_sorted(s.begin(), s.end()) || std::adjacent_find(s.begin(), s.end()) != s.end()) {
      throw ConfigError("supports must be strictly increasing variable lists");
    }
    if (!s.empty() && s.back() >= domains.size()) {
      throw ConfigError("support refers to a variable that does not exist");
    }
    if (tables[j].size() != table_size(*this, s)) {
      throw ConfigError("function table " + std::to_string(j) + " has the wrong size");
    }
    for (const auto& v : tables[j]) {
      if (v < 0) throw ConfigError("function values must be non-negative");
    }
  }
}

std::size_t read_multiplicity(const ReadKFamily& family) {
  std::vector<std::size_t> count(family.variables(), 0);
  for (const auto& s : family.supports) {
    for (auto v : s) {
      if (v >= count.size()) throw ConfigError("support refers to a variable that does not exist");
      ++count[v];
    }
  }
  return count.empty() ? 0 : *std::max_element(count.begin(), count.end());
}

FinnerResult finner_check(const ReadKFamily& family, std::optional<std::size_t> k,
                          std::uint64_t budget) {
  family.validate();
  std::uint64_t assignments = 1;
  for (const auto& d : family.domains) {
    assignments *= d.values.size();
    if (assignments > budget) {
      throw CapacityError("read-k enumeration exceeds the budget of " + std::to_string(budget));
    }
  }
  FinnerResult out;
  out.k = k.value_or(std::max<std::size_t>(1, read_multiplicity(family)));
  if (out.k < 1) throw ConfigError("Finner exponent k must be at least 1");

  const std::size_t m = family.variables();
  std::vector<std::size_t> pos(m, 0);
  out.lhs = 0;
  for (std::uint64_t a = 0; a < assignments; ++a) {
    Rational term = 1;
    for (std::size_t i = 0; i < m && term != 0; ++i) term *= family.domains[i].weights[pos[i]];
    for (std::size_t j = 0; j < family.functions() && term != 0; ++j) {
      term *= family.tables[j][table_index(family, family.supports[j], pos)];
    }
    out.lhs += term;
    for (std::size_t i = m; i-- > 0;) {
      if (++pos[i] < family.domains[i].values.size()) break;
      pos[i] = 0;
    }
  }

  long double rhs = 1.0L;
  for (std::size_t j = 0; j < family.functions(); ++j) {
    const auto& support = family.supports[j];
    Rational moment = 0;
    std::vector<std::size_t> local(m, 0);
    for (std::size_t cell = 0; cell < family.tables[j].size(); ++cell) {
      std::size_t rest = cell;
      Rational weight = 1;
      for (std::size_t t = support.size(); t-- > 0;) {
        const auto& d = family.domains[support[t]];
        local[support[t]] = rest % d.values.size();
        rest /= d.values.size();
        weight *= d.weights[local[support[t]]];
      }
      moment += weight * pow(family.tables[j][cell], static_cast<unsigned>(out.k));
    }
    out.moments.push_back(moment);
    rhs *= std::pow(moment.convert_to<long double>(), 1.0L / static_cast<long double>(out.k));
  }
  out.rhs = static_cast<double>(rhs);
  out.holds = out.lhs.convert_to<long double>() <= rhs + 1e-12L;
  return out;
}

ReadKFamily random_binary_family(Rng& rng, std::size_t max_variables, std::size_t max_functions) {
  if (max_variables < 1 || max_variables > 20 || max_functions < 1) {
    throw ConfigError("random family needs 1 <= max_variables <= 20 and max_functions >= 1");
  }
  ReadKFamily f;
  const std::size_t m = 1 + rng.uniform(max_variables);
  const std::size_t r = 1 + rng.uniform(max_functions);
  for (std::size_t i = 0; i < m; ++i) {
    const Rational p(static_cast<long long>(1 + rng.uniform(7)), 8);
    f.domains.push_back({{0, 1}, {Rational(1) - p, p}});
  }
  for (std::size_t j = 0; j < r; ++j) {
    const std::uint64_t mask = 1 + rng.uniform((std::uint64_t{1} << m) - 1);
    std::vector<std::size_t> support;
    for (std::size_t i = 0; i < m; ++i) {
      if ((mask >> i) & 1u) support.push_back(i);
    }
    std::vector<Rational> table(std::size_t{1} << support.size());
    for (auto& v : table) v = Rational(static_cast<long long>(rng.uniform(9)), 4);
    f.supports.push_back(std::move(support));
    f.tables.push_back(std::move(table));
  }
  return f;
}

ReadKFamily triangle_or_family() {
  ReadKFamily f;
  for (int i = 0; i < 3; ++i) f.domains.push_back({{0, 1}, {Rational(1, 2), Rational(1, 2)}});
  const std::vector<Rational> or_table{0, 1, 1, 1};
  f.supports = {{0, 1}, {1, 2}, {0, 2}};
  f.tables = {or_table, or_table, or_table};
  return f;
}

nlohmann::json to_json(const ReadKFamily& family) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["index_base"] = 0;
  j["domains"] = nlohmann::json::array();
  for (const auto& d : family.domains) {
    nlohmann::json weights = nlohmann::json::array();
    for (const auto& w : d.weights) weights.push_back(to_string(w));
    j["domains"].push_back({{"values", d.values}, {"weights", std::move(weights)}});
  }
  j["supports"] = family.supports;
  j["functions"] = nlohmann::json::array();
  for (const auto& t : family.tables) {
    nlohmann::json values = nlohmann::json::array();
    for (const auto& v : t) values.push_back(to_string(v));
    j["functions"].push_back(std::move(values));
  }
  return j;
}

ReadKFamily family_from_json(const nlohmann::json& j) {
  try {
    ReadKFamily f;
    for (const auto& d : j.at("domains")) {
      FiniteDomain domain;
      domain.values = d.at("values").get<std::vector<long long>>();
      for (const auto& w : d.at("weights")) domain.weights.push_back(rational_from_json(w));
      f.domains.push_back(std::move(domain));
    }
    f.supports = j.at("supports").get<std::vector<std::vector<std::size_t>>>();
    for (const auto& t : j.at("functions")) {
      std::vector<Rational> table;
      for (const auto& v : t) table.push_back(rational_from_json(v));
      f.tables.push_back(std::move(table));
    }
    f.validate();
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed read-k family JSON: ") + e.what());
  }
}

}  // namespace smplab
