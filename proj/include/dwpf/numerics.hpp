#pragma once

#include <complex>
#include <span>
#include <vector>

namespace dwpf {

using CScalar = std::complex<double>;

/// A primitive N-th root of unity e^{2 pi i n / N}.
struct RootOfUnity {
  int n = 1;
  int N = 2;
  CScalar value{1.0, 0.0};

  /// value^k, with the exponent reduced mod N.
  [[nodiscard]] CScalar pow(int k) const;
};

/// Throws CoprimalityError if gcd(n, N) != 1, PreconditionError if N < 2 or n not in [1, N).
RootOfUnity root_of_unity(int n, int N);

/// Square root with argument in (-pi/2, pi/2]. The negative real axis maps to +i.
CScalar principal_sqrt(CScalar z);

struct TolerancePolicy {
  double rel_tol = 1e-9;
  double abs_floor = 1e-12;

  [[nodiscard]] double threshold(double scale) const;
};

/// |a - b| <= max(rel_tol * scale, abs_floor).
bool approx_eq(CScalar a, CScalar b, double scale, const TolerancePolicy& policy = {});

/// Relative difference |a - b| / max(|a|, |b|), 0 when both vanish.
double relative_difference(CScalar a, CScalar b);

struct Sample {
  CScalar point;
  CScalar value;
};

/// Coefficients c_0..c_{m-1} of the unique polynomial through m samples.
std::vector<CScalar> interpolate_coefficients(std::span<const Sample> samples);

/// Effective degree of the polynomial through the samples: the largest index whose
/// coefficient exceeds rel_tol times the largest coefficient magnitude.
///
/// Requires at least max_degree + 2 distinct points; the returned degree may exceed
/// max_degree when the data is not a polynomial of that degree.
int interpolate_degree(std::span<const Sample> samples, int max_degree,
                       const TolerancePolicy& policy = {});

/// count points radius * e^{i (phase + 2 pi k / count)}.
std::vector<CScalar> ring_nodes(int count, double radius, double phase);

/// Distance from z to the closed negative real axis (the principal branch cut).
double distance_to_branch_cut(CScalar z);

}  // namespace dwpf
