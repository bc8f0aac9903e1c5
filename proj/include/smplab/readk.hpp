#pragma once

// Read-k families: independent finite random variables X_0..X_{m-1} and
// non-negative functions Y_j = f_j(X restricted to P_j). Finner's inequality
// E[prod Y_j] <= prod E[Y_j^k]^{1/k} is checked by exact enumeration.

#include "smplab/rational.hpp"
#include "smplab/rng.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <vector>

namespace smplab {

struct FiniteDomain {
  std::vector<long long> values;
  std::vector<Rational> weights;  // non-negative, summing to 1
};

/// Function tables are dense over the support in the listed (ascending)
/// order, first support variable most significant:
/// index = sum_t pos(x_{P[t]}) * prod_{u > t} |D_{P[u]}|.
struct ReadKFamily {
  std::vector<FiniteDomain> domains;
  std::vector<std::vector<std::size_t>> supports;
  std::vector<std::vector<Rational>> tables;

  std::size_t variables() const { return domains.size(); }
  std::size_t functions() const { return supports.size(); }
  /// Throws ConfigError on malformed supports, tables, weights or negative values.
  void validate() const;
};

/// Largest number of supports any variable belongs to (0 for no supports).
std::size_t read_multiplicity(const ReadKFamily& family);

struct FinnerResult {
  Rational lhs;                  // E[prod Y_j]
  std::vector<Rational> moments; // E[Y_j^k]
  std::size_t k = 0;
  double rhs = 0;                // prod moments^{1/k}
  bool holds = false;            // lhs <= rhs + 1e-12
};

inline constexpr std::uint64_t kFinnerBudget = 1'000'000;

/// `k` defaults to the family's read multiplicity; larger values give the
/// weaker (Hoelder-side) bound.
FinnerResult finner_check(const ReadKFamily& family, std::optional<std::size_t> k = std::nullopt,
                          std::uint64_t budget = kFinnerBudget);

/// Binary variables with random rational weights, random non-empty supports
/// and random non-negative rational tables (values a/4, a in [0, 8]).
ReadKFamily random_binary_family(Rng& rng, std::size_t max_variables = 6,
                                 std::size_t max_functions = 6);

/// Fair bits X_0, X_1, X_2 and the ORs of the three cyclic pairs (read-2).
ReadKFamily triangle_or_family();

nlohmann::json to_json(const ReadKFamily& family);
ReadKFamily family_from_json(const nlohmann::json& j);

}  // namespace smplab
