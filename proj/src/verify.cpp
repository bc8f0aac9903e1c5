#include "smplab/verify.hpp"

#include "smplab/quantum.hpp"
#include "smplab/readk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace smplab {

namespace q = quantum;

namespace {

q::DensityMatrix<double> random_qubit_state(Rng& rng) {
  return rng.bit() ? q::random_density_matrix(2, rng) : q::random_pure_state(2, rng);
}

}  // namespace

XorMixtureSweep sweep_xor_mixture(std::size_t configurations, std::uint64_t seed) {
  XorMixtureSweep out;
  for (std::size_t c = 0; c < configurations; ++c) {
    Rng rng(derive_seed(seed, c));
    const std::size_t m = 1 + c % 3;
    std::vector<std::pair<q::DensityMatrix<double>, q::DensityMatrix<double>>> pairs;
    for (std::size_t i = 0; i < m; ++i) {
      auto a = random_qubit_state(rng);
      auto b = random_qubit_state(rng);
      pairs.emplace_back(std::move(a), std::move(b));
    }
    const auto r = q::xor_mixture_distance<double>(pairs);
    out.max_abs_difference = std::max(out.max_abs_difference, std::abs(r.lhs - r.rhs));
    ++out.configurations;
  }
  out.passed = out.max_abs_difference <= q::kEqualityTolerance;
  return out;
}

RacSweep sweep_rac(std::size_t encodings, std::uint64_t seed) {
  RacSweep out;
  out.max_excess = -std::numeric_limits<double>::infinity();
  out.max_squared_excess = -std::numeric_limits<double>::infinity();
  bool ok = true;
  for (std::size_t e = 0; e < encodings; ++e) {
    Rng rng(derive_seed(seed, e));
    q::StateEncoding<double> enc;
    enc.n = 1 + static_cast<int>(rng.uniform(6));
    enc.q = 1 + static_cast<int>(rng.uniform(3));
    const bool pure = rng.bit();
    for (std::size_t x = 0; x < (std::size_t{1} << enc.n); ++x) {
      enc.states.push_back(pure ? q::random_pure_state(Eigen::Index{1} << enc.q, rng)
                                : q::random_density_matrix(Eigen::Index{1} << enc.q, rng));
    }
    const auto report = q::rac_bound_check(enc);
    out.max_excess = std::max(out.max_excess, report.entropy_sum - enc.q);
    out.max_squared_excess =
        std::max(out.max_squared_excess, report.squared_sum - report.squared_bound());
    ok = ok && report.entropy_bound_holds() && report.squared_bound_holds();
    ++out.encodings;
  }
  for (int n = 1; n <= 5; ++n) {
    q::StateEncoding<double> enc;
    enc.n = n;
    enc.q = n;
    for (std::size_t x = 0; x < (std::size_t{1} << n); ++x) {
      enc.states.push_back(q::DensityMatrix<double>::basis(Eigen::Index{1} << n,
                                                           static_cast<Eigen::Index>(x)));
    }
    const auto report = q::rac_bound_check(enc);
    out.identity_deviation =
        std::max(out.identity_deviation, std::abs(report.entropy_sum - static_cast<double>(n)));
  }
  out.passed = ok && out.identity_deviation <= q::kEqualityTolerance;
  return out;
}

EntropyGrid check_entropy_grid(std::size_t points) {
  EntropyGrid out;
  out.points = points;
  out.min_slack = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points; ++i) {
    const double x = points == 1 ? 0.0 : 2.0 * static_cast<double>(i) / static_cast<double>(points - 1);
    out.min_slack = std::min(out.min_slack, q::rac_entropy_term(x) - q::rac_quadratic_floor(x));
  }
  // Both sides vanish at x = 0; allow rounding there.
  out.passed = out.min_slack >= -1e-15;
  return out;
}

FinnerSweep sweep_finner(std::size_t families, std::uint64_t seed) {
  FinnerSweep out;
  out.min_slack = std::numeric_limits<double>::infinity();
  for (std::size_t f = 0; f < families; ++f) {
    Rng rng(derive_seed(seed, f));
    const auto family = random_binary_family(rng);
    const auto result = finner_check(family);
    out.min_slack = std::min(out.min_slack, result.rhs - result.lhs.convert_to<double>());
    if (!result.holds) ++out.failures;
    ++out.families;
  }
  out.passed = out.failures == 0;
  return out;
}

}  // namespace smplab
