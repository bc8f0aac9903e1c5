#include "smplab/quantum.hpp"
#include "smplab/verify.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace smplab::quantum {
namespace {

using M = CMatrix<double>;
using DM = DensityMatrix<double>;
using Pair = std::pair<DM, DM>;

M random_matrix(Eigen::Index dim, Rng& rng) {
  M m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) m(i, j) = {rng.normal(), rng.normal()};
  }
  return m;
}

M random_hermitian(Eigen::Index dim, Rng& rng) {
  const M m = random_matrix(dim, rng);
  return (m + m.adjoint()) / 2.0;
}

TEST(TraceNorm, BasicValues) {
  EXPECT_EQ(trace_norm(M::Zero(3, 3)), 0.0);
  Rng rng(1);
  for (int i = 0; i < 10; ++i) {
    EXPECT_NEAR(trace_norm(random_density_matrix(4, rng).matrix()), 1.0, 1e-12);
  }
  const M z = DM::basis(2, 0).matrix() - DM::basis(2, 1).matrix();
  EXPECT_NEAR(trace_norm(z), 2.0, 1e-15);
  EXPECT_THROW(trace_norm(M::Zero(2, 3)), ShapeError);
}

TEST(TraceNorm, EigenAndSvdPathsAgree) {
  Rng rng(2);
  for (int i = 0; i < 20; ++i) {
    const M h = random_hermitian(1 + static_cast<Eigen::Index>(rng.uniform(6)), rng);
    EXPECT_NEAR(trace_norm(h), trace_norm_svd(h), 1e-9);
  }
}

TEST(TraceNorm, IsANorm) {
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    const Eigen::Index d = 1 + static_cast<Eigen::Index>(rng.uniform(5));
    const M a = random_matrix(d, rng);
    const M b = random_matrix(d, rng);
    const std::complex<double> s(rng.normal(), rng.normal());
    EXPECT_NEAR(trace_norm((s * a).eval()), std::abs(s) * trace_norm(a), 1e-9);
    EXPECT_LE(trace_norm((a + b).eval()), trace_norm(a) + trace_norm(b) + 1e-9);
  }
}

TEST(TraceNorm, MultiplicativeUnderKron) {
  Rng rng(4);
  for (int i = 0; i < 50; ++i) {
    const M a = random_hermitian(1 + static_cast<Eigen::Index>(rng.uniform(4)), rng);
    const M b = random_hermitian(1 + static_cast<Eigen::Index>(rng.uniform(4)), rng);
    EXPECT_NEAR(trace_norm(kron(a, b)), trace_norm(a) * trace_norm(b), 1e-9);
  }
}

TEST(Kron, MatchesDefinition) {
  M a(2, 2), b(2, 1);
  a << 1.0, 2.0, 3.0, 4.0;
  b << 5.0, 6.0;
  const M k = kron(a, b);
  ASSERT_EQ(k.rows(), 4);
  ASSERT_EQ(k.cols(), 2);
  EXPECT_EQ(k(0, 0), std::complex<double>(5));
  EXPECT_EQ(k(1, 1), std::complex<double>(12));
  EXPECT_EQ(k(3, 0), std::complex<double>(18));
}

TEST(DensityMatrix, Validation) {
  M bad = M::Identity(2, 2);
  EXPECT_THROW(DM{bad}, ConfigError);  // trace 2
  M neg(2, 2);
  neg << 1.5, 0.0, 0.0, -0.5;
  EXPECT_THROW(DM{neg}, ConfigError);
  M nonh(2, 2);
  nonh << 0.5, 0.1, 0.0, 0.5;
  EXPECT_THROW(DM{nonh}, ConfigError);
  EXPECT_THROW(DM{M::Zero(2, 3)}, ShapeError);
  EXPECT_THROW(DM::pure(CVector<double>::Zero(2)), DomainError);
  EXPECT_EQ(DM::basis(8, 3).qubits(), 3);
  EXPECT_EQ(DM::basis(3, 0).qubits(), std::nullopt);
}

TEST(DensityMatrix, WorksInLongDouble) {
  using DL = DensityMatrix<long double>;
  const auto a = DL::basis(2, 0);
  const auto b = DL::basis(2, 1);
  EXPECT_NEAR(static_cast<double>(distinguish_prob(a, b)), 1.0, 1e-15);
}

TEST(Distinguish, EdgeValues) {
  Rng rng(5);
  const auto s = random_density_matrix(2, rng);
  EXPECT_NEAR(distinguish_prob(s, s), 0.5, 1e-15);
  EXPECT_NEAR(distinguish_prob(DM::basis(2, 0), DM::basis(2, 1)), 1.0, 1e-15);
  CVector<double> plus(2), minus(2);
  plus << 1.0, 1.0;
  minus << 1.0, -1.0;
  EXPECT_NEAR(distinguish_prob(DM::pure(plus), DM::pure(minus)), 1.0, 1e-12);
  EXPECT_THROW(distinguish_prob(DM::basis(2, 0), DM::basis(4, 0)), ShapeError);
}

// Success of the projective measurement {P, I - P} with P = |v><v|, guessing
// state 0 on outcome P: (tr(P s0) + tr((I - P) s1)) / 2.
double measurement_success(const M& p, const DM& s0, const DM& s1) {
  const M rest = M::Identity(p.rows(), p.cols()) - p;
  return 0.5 * ((p * s0.matrix()).trace().real() + (rest * s1.matrix()).trace().real());
}

TEST(Distinguish, MatchesBestRandomProjectiveMeasurement) {
  Rng rng(6);
  for (int pair = 0; pair < 5; ++pair) {
    const auto s0 = random_density_matrix(2, rng);
    const auto s1 = random_density_matrix(2, rng);
    const double formula = distinguish_prob(s0, s1);
    double best = 0.5;
    for (int i = 0; i < 10'000; ++i) {
      const auto v = random_state_vector(2, rng);
      const M p = v * v.adjoint();
      best = std::max({best, measurement_success(p, s0, s1),
                       measurement_success(M::Identity(2, 2) - p, s0, s1)});
    }
    EXPECT_LE(best, formula + 1e-6);
    EXPECT_GE(best, formula - 1e-3);
  }
}

TEST(XorMixture, EqualPairGivesZero) {
  Rng rng(7);
  const auto a = random_density_matrix(2, rng);
  std::vector<Pair> pairs{{a, a}, {random_density_matrix(2, rng), random_density_matrix(2, rng)}};
  const auto r = xor_mixture_distance<double>(pairs);
  EXPECT_NEAR(r.lhs, 0.0, 1e-12);
  EXPECT_NEAR(r.rhs, 0.0, 1e-12);
}

TEST(XorMixture, OrthogonalPairs) {
  std::vector<Pair> pairs{{DM::basis(2, 0), DM::basis(2, 1)}, {DM::basis(2, 0), DM::basis(2, 1)}};
  const auto r = xor_mixture_distance<double>(pairs);
  EXPECT_NEAR(r.lhs, 2.0, 1e-12);
  EXPECT_NEAR(r.rhs, 2.0, 1e-12);
}

TEST(XorMixture, RandomTriplesOfQubitPairs) {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Pair> pairs;
    for (int i = 0; i < 3; ++i) pairs.emplace_back(random_density_matrix(2, rng), random_pure_state(2, rng));
    const auto r = xor_mixture_distance<double>(pairs);
    EXPECT_NEAR(r.lhs, r.rhs, 1e-9);
  }
}

TEST(XorMixture, MixedDimensions) {
  Rng rng(9);
  std::vector<Pair> pairs{{random_density_matrix(3, rng), random_density_matrix(3, rng)},
                          {random_density_matrix(2, rng), random_density_matrix(2, rng)}};
  const auto r = xor_mixture_distance<double>(pairs);
  EXPECT_NEAR(r.lhs, r.rhs, 1e-9);
}

TEST(XorMixture, Errors) {
  std::vector<Pair> none;
  EXPECT_THROW(xor_mixture_distance<double>(none), ConfigError);
  std::vector<Pair> big(7, Pair{DM::basis(2, 0), DM::basis(2, 1)});
  EXPECT_THROW(xor_mixture_distance<double>(big), CapacityError);
  EXPECT_NO_THROW(xor_mixture_distance<double>(big, 128));
  std::vector<Pair> ragged{{DM::basis(2, 0), DM::basis(4, 1)}};
  EXPECT_THROW(xor_mixture_distance<double>(ragged), ShapeError);
}

TEST(Entropy, Values) {
  EXPECT_DOUBLE_EQ(binary_entropy(0.5), 1.0);
  EXPECT_DOUBLE_EQ(binary_entropy(0.0), 0.0);
  EXPECT_DOUBLE_EQ(binary_entropy(1.0), 0.0);
  EXPECT_NEAR(binary_entropy(0.25), 0.8112781244591328, 1e-15);
  EXPECT_THROW(binary_entropy(-0.1), DomainError);
  EXPECT_THROW(binary_entropy(1.1), DomainError);
  EXPECT_THROW(binary_entropy(std::nan("")), DomainError);
}

TEST(Entropy, QuadraticFloor) {
  EXPECT_DOUBLE_EQ(rac_entropy_term(2.0), 1.0);
  EXPECT_NEAR(rac_quadratic_floor(2.0), 0.7213475204444817, 1e-15);
  EXPECT_GE(rac_entropy_term(2.0), rac_quadratic_floor(2.0));
  EXPECT_DOUBLE_EQ(rac_entropy_term(0.0), 0.0);
  EXPECT_THROW(rac_entropy_term(2.1), DomainError);
  const auto grid = check_entropy_grid(2001);
  EXPECT_TRUE(grid.passed);
  EXPECT_EQ(grid.points, 2001u);
  EXPECT_GE(grid.min_slack, -1e-15);
}

StateEncoding<double> basis_encoding(int n) {
  StateEncoding<double> enc;
  enc.n = n;
  enc.q = n;
  for (Eigen::Index x = 0; x < (Eigen::Index{1} << n); ++x) {
    enc.states.push_back(DM::basis(Eigen::Index{1} << n, x));
  }
  return enc;
}

TEST(Rac, ConstantEncodingHasZeroSum) {
  Rng rng(10);
  StateEncoding<double> enc;
  enc.n = 4;
  enc.q = 2;
  const auto s = random_density_matrix(4, rng);
  enc.states.assign(16, s);
  const auto report = rac_bound_check(enc);
  EXPECT_NEAR(report.entropy_sum, 0.0, 1e-12);
  EXPECT_NEAR(report.squared_sum, 0.0, 1e-12);
}

TEST(Rac, BasisEncodingIsTight) {
  for (int n = 1; n <= 4; ++n) {
    const auto report = rac_bound_check(basis_encoding(n));
    ASSERT_EQ(report.rows.size(), static_cast<std::size_t>(n));
    for (const auto& row : report.rows) EXPECT_NEAR(row.trace_distance, 2.0, 1e-12);
    EXPECT_NEAR(report.entropy_sum, n, 1e-9);
    EXPECT_TRUE(report.entropy_bound_holds());
  }
}

TEST(Rac, RandomPureEncodingsRespectTheBound) {
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    StateEncoding<double> enc;
    enc.n = 6;
    enc.q = 2;
    for (int x = 0; x < 64; ++x) enc.states.push_back(random_pure_state(4, rng));
    const auto report = rac_bound_check(enc);
    EXPECT_TRUE(report.entropy_bound_holds());
    EXPECT_TRUE(report.squared_bound_holds());
  }
}

TEST(Rac, ValidationAndCsv) {
  StateEncoding<double> enc = basis_encoding(2);
  enc.states.pop_back();
  EXPECT_THROW(rac_bound_check(enc), ConfigError);
  auto wrong_dim = basis_encoding(2);
  wrong_dim.q = 1;
  EXPECT_THROW(rac_bound_check(wrong_dim), ConfigError);
  const auto csv = rac_bound_check(basis_encoding(1)).to_csv();
  EXPECT_EQ(csv, "j,trace_distance,entropy_term\n0,2,1\n");
}

TEST(Rac, SweepPasses) {
  const auto sweep = sweep_rac(50, 3);
  EXPECT_TRUE(sweep.passed);
  EXPECT_LE(sweep.max_excess, 1e-9);
  EXPECT_LE(sweep.identity_deviation, 1e-9);
}

TEST(Serialization, MatrixRoundTrip) {
  Rng rng(12);
  const M m = random_matrix(3, rng);
  const auto back = matrix_from_json(nlohmann::json::parse(matrix_to_json(m).dump()));
  EXPECT_EQ(back, m);
  EXPECT_THROW(matrix_from_json(nlohmann::json::parse("[[[1,0]],[[1,0],[2,0]]]")), ShapeError);
  EXPECT_THROW(matrix_from_json(nlohmann::json::parse("[[[1]]]")), ConfigError);
}

}  // namespace
}  // namespace smplab::quantum
