#include "dwpf/numerics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "dwpf/errors.hpp"

namespace dwpf {

CScalar RootOfUnity::pow(int k) const {
  const int r = ((k % N) + N) % N;
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(n) * r / N);
}

RootOfUnity root_of_unity(int n, int N) {
  if (N < 2) throw PreconditionError("root of unity order must be >= 2, got " + std::to_string(N));
  if (n < 1 || n >= N) {
    throw PreconditionError("root of unity index must lie in [1, N), got n=" + std::to_string(n) +
                            " N=" + std::to_string(N));
  }
  if (std::gcd(n, N) != 1) {
    throw CoprimalityError("n=" + std::to_string(n) + " and N=" + std::to_string(N) +
                           " are not coprime");
  }
  RootOfUnity rho{n, N, {}};
  rho.value = rho.pow(1);
  return rho;
}

CScalar principal_sqrt(CScalar z) {
  // std::sqrt honours the sign of a zero imaginary part; pin the cut to the upper side.
  if (z.imag() == 0.0) {
    if (z.real() < 0.0) return {0.0, std::sqrt(-z.real())};
    return {std::sqrt(z.real()), 0.0};
  }
  return std::sqrt(z);
}

double TolerancePolicy::threshold(double scale) const {
  return std::max(rel_tol * scale, abs_floor);
}

bool approx_eq(CScalar a, CScalar b, double scale, const TolerancePolicy& policy) {
  return std::abs(a - b) <= policy.threshold(scale);
}

double relative_difference(CScalar a, CScalar b) {
  const double denom = std::max(std::abs(a), std::abs(b));
  if (denom == 0.0) return 0.0;
  return std::abs(a - b) / denom;
}

std::vector<CScalar> interpolate_coefficients(std::span<const Sample> samples) {
  const auto m = static_cast<Eigen::Index>(samples.size());
  if (m == 0) return {};
  const double spread = std::transform_reduce(
      samples.begin(), samples.end(), 0.0, [](double a, double b) { return std::max(a, b); },
      [](const Sample& s) { return std::abs(s.point); });
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) {
      if (std::abs(samples[i].point - samples[j].point) <= 1e-14 * std::max(spread, 1.0)) {
        throw PreconditionError("interpolation sample points must be distinct");
      }
    }
  }

  Eigen::MatrixXcd vandermonde(m, m);
  Eigen::VectorXcd rhs(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    CScalar power{1.0, 0.0};
    for (Eigen::Index k = 0; k < m; ++k) {
      vandermonde(i, k) = power;
      power *= samples[i].point;
    }
    rhs(i) = samples[i].value;
  }
  const Eigen::VectorXcd coeffs = vandermonde.colPivHouseholderQr().solve(rhs);
  return {coeffs.data(), coeffs.data() + coeffs.size()};
}

int interpolate_degree(std::span<const Sample> samples, int max_degree,
                       const TolerancePolicy& policy) {
  if (max_degree < 0) throw PreconditionError("max_degree must be non-negative");
  if (samples.size() < static_cast<std::size_t>(max_degree) + 2) {
    throw PreconditionError("interpolate_degree needs at least max_degree + 2 samples, got " +
                            std::to_string(samples.size()));
  }
  const auto coeffs = interpolate_coefficients(samples);
  double largest = 0.0;
  for (const auto& c : coeffs) largest = std::max(largest, std::abs(c));
  if (largest == 0.0) return 0;
  for (int k = static_cast<int>(coeffs.size()) - 1; k > 0; --k) {
    if (std::abs(coeffs[k]) > policy.rel_tol * largest) return k;
  }
  return 0;
}

std::vector<CScalar> ring_nodes(int count, double radius, double phase) {
  std::vector<CScalar> nodes;
  nodes.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int k = 0; k < count; ++k) {
    nodes.push_back(std::polar(radius, phase + 2.0 * std::numbers::pi * k / count));
  }
  return nodes;
}

double distance_to_branch_cut(CScalar z) {
  if (z.real() <= 0.0) return std::abs(z.imag());
  return std::abs(z);
}

}  // namespace dwpf
