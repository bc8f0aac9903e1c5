#pragma once

// Small-dimension quantum state utilities: trace norm, optimal two-state
// discrimination, parity mixtures of tensor products and the random access
// code entropy bound.

#include "smplab/error.hpp"
#include "smplab/rng.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <complex>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace smplab::quantum {

template <typename Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

inline constexpr double kStateTolerance = 1e-10;
inline constexpr double kEqualityTolerance = 1e-9;
inline constexpr Eigen::Index kDefaultDimensionCap = 64;

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m, typename Derived::RealScalar tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

/// Sum of singular values, via singular value decomposition.
template <typename Derived>
typename Derived::RealScalar trace_norm_svd(const Eigen::MatrixBase<Derived>& m) {
  if (m.rows() != m.cols()) throw ShapeError("trace norm needs a square matrix");
  if (m.size() == 0) return 0;
  using Plain = typename Derived::PlainObject;
  Eigen::JacobiSVD<Plain> svd(m.eval());
  return svd.singularValues().sum();
}

/// Trace norm. Hermitian inputs take the eigenvalue path, sum of |lambda|.
template <typename Derived>
typename Derived::RealScalar trace_norm(const Eigen::MatrixBase<Derived>& m) {
  using Real = typename Derived::RealScalar;
  if (m.rows() != m.cols()) throw ShapeError("trace norm needs a square matrix");
  if (m.size() == 0) return 0;
  const typename Derived::PlainObject plain = m;
  const Real scale = std::max<Real>(Real(1), plain.cwiseAbs().maxCoeff());
  if (!is_hermitian(plain, Real(1e-12) * scale)) return trace_norm_svd(plain);
  Eigen::SelfAdjointEigenSolver<typename Derived::PlainObject> eig(plain, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().cwiseAbs().sum();
}

/// Kronecker product a (x) b.
template <typename DerivedA, typename DerivedB>
typename DerivedA::PlainObject kron(const Eigen::MatrixBase<DerivedA>& a,
                                    const Eigen::MatrixBase<DerivedB>& b) {
  typename DerivedA::PlainObject out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// Hermitian, positive semidefinite, unit trace (checked on construction).
template <typename Real>
class DensityMatrix {
 public:
  using Matrix = CMatrix<Real>;

  explicit DensityMatrix(Matrix m, Real tol = Real(kStateTolerance)) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() < 1) {
      throw ShapeError("density matrix must be square with dim >= 1");
    }
    if (!is_hermitian(m_, tol)) throw ConfigError("density matrix is not Hermitian");
    if (std::abs(m_.trace().real() - Real(1)) > tol || std::abs(m_.trace().imag()) > tol) {
      throw ConfigError("density matrix trace is not 1");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(m_, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -tol) {
      throw ConfigError("density matrix is not positive semidefinite");
    }
  }

  /// |psi><psi| / <psi|psi>.
  static DensityMatrix pure(const CVector<Real>& psi) {
    const Real norm = psi.norm();
    if (norm == Real(0)) throw DomainError("pure state from the zero vector");
    const CVector<Real> unit = psi / norm;
    Matrix m = unit * unit.adjoint();
    m = (m + m.adjoint()) / Real(2);
    return DensityMatrix(std::move(m));
  }

  /// Computational basis state |index><index|.
  static DensityMatrix basis(Eigen::Index dim, Eigen::Index index) {
    Matrix m = Matrix::Zero(dim, dim);
    m(index, index) = Real(1);
    return DensityMatrix(std::move(m));
  }

  Eigen::Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  /// log2(dim) for power-of-two dimensions.
  std::optional<int> qubits() const {
    const auto d = static_cast<unsigned long long>(dim());
    if ((d & (d - 1)) != 0) return std::nullopt;
    return std::countr_zero(d);
  }

 private:
  Matrix m_;
};

/// Optimal probability of telling s0 from s1 with one measurement:
/// 1/2 + ||s0 - s1||_1 / 4.
template <typename Real>
Real distinguish_prob(const DensityMatrix<Real>& s0, const DensityMatrix<Real>& s1) {
  if (s0.dim() != s1.dim()) throw ShapeError("states have different dimensions");
  return Real(0.5) + trace_norm(s0.matrix() - s1.matrix()) / Real(4);
}

template <typename Real>
struct XorMixture {
  Real lhs;  // ||rho_0 - rho_1||_1 from the explicit mixtures
  Real rhs;  // 2^{1-m} * prod_i ||s0^i - s1^i||_1
};

/// rho_a is the uniform mixture over bit tuples of parity a of
/// s^1_{a_1} (x) ... (x) s^m_{a_m}.
template <typename Real>
std::pair<CMatrix<Real>, CMatrix<Real>> parity_mixtures(
    std::span<const std::pair<DensityMatrix<Real>, DensityMatrix<Real>>> pairs,
    Eigen::Index dim_cap = kDefaultDimensionCap) {
  if (pairs.empty()) throw ConfigError("parity mixture needs at least one pair");
  Eigen::Index total = 1;
  for (const auto& [a, b] : pairs) {
    if (a.dim() != b.dim()) throw ShapeError("pair states have different dimensions");
    total *= a.dim();
    if (total > dim_cap) {
      throw CapacityError("tensor dimension exceeds the cap of " + std::to_string(dim_cap));
    }
  }
  const std::size_t m = pairs.size();
  const Real weight = std::ldexp(Real(1), -static_cast<int>(m - 1));
  CMatrix<Real> rho[2] = {CMatrix<Real>::Zero(total, total), CMatrix<Real>::Zero(total, total)};
  for (unsigned long long bits = 0; bits < (1ull << m); ++bits) {
    CMatrix<Real> product = CMatrix<Real>::Identity(1, 1);
    for (std::size_t i = 0; i < m; ++i) {
      const bool a = (bits >> i) & 1u;
      product = kron(product, a ? pairs[i].second.matrix() : pairs[i].first.matrix());
    }
    rho[std::popcount(bits) & 1] += weight * product;
  }
  return {std::move(rho[0]), std::move(rho[1])};
}

template <typename Real>
XorMixture<Real> xor_mixture_distance(
    std::span<const std::pair<DensityMatrix<Real>, DensityMatrix<Real>>> pairs,
    Eigen::Index dim_cap = kDefaultDimensionCap) {
  const auto [rho0, rho1] = parity_mixtures(pairs, dim_cap);
  Real rhs = std::ldexp(Real(1), -static_cast<int>(pairs.size() - 1));
  for (const auto& [a, b] : pairs) rhs *= trace_norm(a.matrix() - b.matrix());
  return {trace_norm(rho0 - rho1), rhs};
}

/// Binary entropy in bits, h(0) = h(1) = 0.
template <typename Real>
Real binary_entropy(Real p) {
  if (!(p >= Real(0) && p <= Real(1))) throw DomainError("binary entropy needs p in [0, 1]");
  auto term = [](Real x) { return x <= Real(0) ? Real(0) : -x * std::log2(x); };
  return term(p) + term(Real(1) - p);
}

/// 1 - h(1/2 - x/4) for a trace distance x in [0, 2]. Values within 1e-9 of
/// the interval are clamped.
template <typename Real>
Real rac_entropy_term(Real x) {
  if (x < Real(-1e-9) || x > Real(2) + Real(1e-9)) {
    throw DomainError("trace distance must lie in [0, 2]");
  }
  x = std::clamp(x, Real(0), Real(2));
  return Real(1) - binary_entropy(Real(0.5) - x / Real(4));
}

/// x^2 / (8 ln 2), the quadratic lower bound on `rac_entropy_term`.
template <typename Real>
Real rac_quadratic_floor(Real x) {
  return x * x / (Real(8) * std::numbers::ln2_v<Real>);
}

/// rho_x for every x in {0,1}^n; states[x] with bit j of x at position j
/// counted from the most significant end.
template <typename Real>
struct StateEncoding {
  int n = 0;
  int q = 0;
  std::vector<DensityMatrix<Real>> states;

  bool bit(std::size_t x, int j) const { return (x >> (n - 1 - j)) & 1u; }

  void validate() const {
    if (n < 1 || q < 0) throw ConfigError("encoding needs n >= 1 and q >= 0");
    if (states.size() != (std::size_t{1} << n)) {
      throw ConfigError("encoding must define a state for all 2^n inputs");
    }
    for (const auto& s : states) {
      if (s.dim() != (Eigen::Index{1} << q)) throw ConfigError("encoding states must have dim 2^q");
    }
  }
};

template <typename Real>
struct RacRow {
  int j;
  Real trace_distance;
  Real entropy_term;
};

template <typename Real>
struct RacReport {
  int n = 0;
  int q = 0;
  std::vector<RacRow<Real>> rows;
  Real entropy_sum = 0;
  Real squared_sum = 0;

  Real squared_bound() const { return Real(8) * std::numbers::ln2_v<Real> * Real(q); }
  bool entropy_bound_holds(Real tol = Real(kEqualityTolerance)) const {
    return entropy_sum <= Real(q) + tol;
  }
  bool squared_bound_holds(Real tol = Real(kEqualityTolerance)) const {
    return squared_sum <= squared_bound() + tol;
  }

  /// Columns j, trace_distance, entropy_term; j is 0-based.
  std::string to_csv() const {
    std::string out = "j,trace_distance,entropy_term\n";
    char buf[96];
    for (const auto& r : rows) {
      std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", r.j, static_cast<double>(r.trace_distance),
                    static_cast<double>(r.entropy_term));
      out += buf;
    }
    return out;
  }
};

/// Conditional mixtures sigma_a^j = E[rho_X | X(j) = a] under uniform X, the
/// per-bit trace distances, and both sums that the entropy bound controls.
template <typename Real>
RacReport<Real> rac_bound_check(const StateEncoding<Real>& enc) {
  enc.validate();
  if (enc.n > 10 || enc.q > 5) throw CapacityError("RAC check supports n <= 10 and q <= 5");
  RacReport<Real> report;
  report.n = enc.n;
  report.q = enc.q;
  const Eigen::Index dim = Eigen::Index{1} << enc.q;
  const Real half = std::ldexp(Real(1), -(enc.n - 1));
  for (int j = 0; j < enc.n; ++j) {
    CMatrix<Real> sigma[2] = {CMatrix<Real>::Zero(dim, dim), CMatrix<Real>::Zero(dim, dim)};
    for (std::size_t x = 0; x < enc.states.size(); ++x) {
      sigma[enc.bit(x, j)] += half * enc.states[x].matrix();
    }
    const Real distance = trace_norm(sigma[0] - sigma[1]);
    const Real term = rac_entropy_term(distance);
    report.rows.push_back({j, distance, term});
    report.entropy_sum += term;
    report.squared_sum += distance * distance;
  }
  return report;
}

/// Normalized G G^dagger for complex Gaussian G.
template <typename Real = double>
DensityMatrix<Real> random_density_matrix(Eigen::Index dim, Rng& rng) {
  CMatrix<Real> g(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      g(i, j) = std::complex<Real>(Real(rng.normal()), Real(rng.normal()));
    }
  }
  CMatrix<Real> m = g * g.adjoint();
  m /= m.trace().real();
  m = (m + m.adjoint()) / Real(2);
  return DensityMatrix<Real>(std::move(m));
}

/// Normalized complex Gaussian vector.
template <typename Real = double>
CVector<Real> random_state_vector(Eigen::Index dim, Rng& rng) {
  CVector<Real> v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    v(i) = std::complex<Real>(Real(rng.normal()), Real(rng.normal()));
  }
  return v / v.norm();
}

template <typename Real = double>
DensityMatrix<Real> random_pure_state(Eigen::Index dim, Rng& rng) {
  return DensityMatrix<Real>::pure(random_state_vector<Real>(dim, rng));
}

/// Row-major array of rows of [re, im] pairs.
nlohmann::json matrix_to_json(const CMatrix<double>& m);
CMatrix<double> matrix_from_json(const nlohmann::json& j);

}  // namespace smplab::quantum
