#include "dwpf/closed_form.hpp"

#include <algorithm>
#include <cmath>

#include "dwpf/errors.hpp"
#include "dwpf/ps_weights.hpp"

namespace dwpf {

void FactorizedValue::multiply(std::string label, CScalar factor) {
  value *= factor;
  factor_log.emplace_back(std::move(label), factor);
}

namespace {

CScalar field_at(const std::vector<CScalar>& fields, std::size_t i) {
  return fields.empty() ? CScalar{} : fields[i];
}

std::string idx(std::size_t i) { return std::to_string(i + 1); }

}  // namespace

FactorizedValue dwpf_factorized_da(const ModelParams& params, const RootOfUnity& rho) {
  params.validate();
  const int N = rho.N;
  if (N < 2) throw PreconditionError("DA models need N >= 2");
  const auto L = params.u.size();
  FactorizedValue out;
  for (std::size_t j = 0; j < L; ++j) {
    const CScalar a = field_at(params.alpha, j);
    const CScalar b = field_at(params.beta, j);
    const double power = static_cast<double>((N - 1) * static_cast<int>(j + 1));
    out.multiply("exp((N-1)*" + idx(j) + "*(u" + idx(j) + "-v" + idx(j) + "))",
                 std::exp(power * (params.u[j] - params.v[j])));
    for (int k = 0; k <= N - 2; ++k) {
      out.multiply("sqrt(1-rho^" + std::to_string(k) + "*alpha" + idx(j) + "^2)",
                   principal_sqrt(1.0 - rho.pow(k) * a * a));
      out.multiply("sqrt(1-rho^" + std::to_string(k) + "*beta" + idx(j) + "^2)",
                   principal_sqrt(1.0 - rho.pow(k) * b * b));
    }
  }
  for (std::size_t i = 0; i < L; ++i) {
    for (std::size_t j = i + 1; j < L; ++j) {
      const CScalar aa = field_at(params.alpha, i) * field_at(params.alpha, j);
      const CScalar bb = field_at(params.beta, j) * field_at(params.beta, i);
      const CScalar eu = std::exp(params.u[i] - params.u[j]);
      const CScalar ev = std::exp(params.v[j] - params.v[i]);
      for (int k = 0; k <= N - 2; ++k) {
        const std::string r = "rho^" + std::to_string(k);
        out.multiply("1-" + r + "*alpha" + idx(i) + "*alpha" + idx(j) + "*e^(u" + idx(i) + "-u" +
                         idx(j) + ")",
                     1.0 - rho.pow(k) * aa * eu);
        out.multiply("1-" + r + "*beta" + idx(j) + "*beta" + idx(i) + "*e^(v" + idx(j) + "-v" +
                         idx(i) + ")",
                     1.0 - rho.pow(k) * bb * ev);
      }
    }
  }
  return out;
}

FactorizedValue dwpf_factorized_ps(const ModelParams& params, CScalar eta) {
  params.validate();
  const PSWeightTable table({0, 0}, eta);
  const int N = table.N();
  const auto L = params.u.size();
  FactorizedValue out;
  for (std::size_t k = 0; k < L; ++k) {
    out.multiply("R1N(u" + idx(k) + "-v" + idx(k) + ")",
                 table.weight(c_plus_index(N), params.u[k] - params.v[k]));
  }
  for (std::size_t i = 0; i < L; ++i) {
    for (std::size_t j = i + 1; j < L; ++j) {
      out.multiply("R11(u" + idx(i) + "-u" + idx(j) + ")",
                   table.weight(a_plus_index(), params.u[i] - params.u[j]));
      out.multiply("R11(v" + idx(j) + "-v" + idx(i) + ")",
                   table.weight(a_plus_index(), params.v[j] - params.v[i]));
    }
  }
  return out;
}

CScalar da_recursion_rhs(const ModelParams& params, const RootOfUnity& rho, CScalar reduced_Z,
                         const TolerancePolicy& policy) {
  params.validate();
  const auto L = params.u.size();
  const int N = rho.N;
  const CScalar a1 = field_at(params.alpha, 0);
  const CScalar bL = field_at(params.beta, L - 1);
  if (a1 == CScalar{}) throw PreconditionError("DA recursion needs alpha_1 != 0");
  const CScalar ratio = bL / a1;
  const CScalar lhs = std::exp(params.u[0]);
  const CScalar target = ratio * std::exp(params.v[L - 1]);
  if (!approx_eq(lhs, target, std::max(std::abs(lhs), std::abs(target)), policy)) {
    throw PreconditionError("parameters are not at e^{u_1} = (beta_L/alpha_1) e^{v_L}");
  }
  const CScalar vL = params.v[L - 1];
  CScalar rhs = std::pow(ratio, N - 1);
  for (int j = 0; j <= N - 2; ++j) {
    const CScalar r = rho.pow(j);
    rhs *= principal_sqrt(1.0 - r * a1 * a1) * principal_sqrt(1.0 - r * bL * bL);
    for (std::size_t k = 0; k + 1 < L; ++k) {
      rhs *= 1.0 - r * bL * field_at(params.beta, k) * std::exp(vL - params.v[k]);
    }
    for (std::size_t k = 1; k < L; ++k) {
      rhs *= std::exp(params.u[k] - vL) - r * field_at(params.alpha, k) * bL;
    }
  }
  return rhs * reduced_Z;
}

CScalar ps_recursion_rhs(const ModelParams& params, CScalar eta, CScalar reduced_Z,
                         const TolerancePolicy& policy) {
  params.validate();
  const PSWeightTable table({0, 0}, eta);
  const int N = table.N();
  const auto L = params.u.size();
  const CScalar vL = params.v[L - 1];
  if (!approx_eq(params.u[0], vL, std::max({std::abs(params.u[0]), std::abs(vL), 1.0}), policy)) {
    throw PreconditionError("parameters are not at u_1 = v_L");
  }
  CScalar rhs = table.weight(c_plus_index(N), 0.0);
  for (std::size_t j = 0; j + 1 < L; ++j) rhs *= table.weight(a_plus_index(), vL - params.v[j]);
  for (std::size_t j = 1; j < L; ++j) rhs *= table.weight(a_minus_index(N), params.u[j] - vL);
  return rhs * reduced_Z;
}

ModelParams at_da_recursion_point(ModelParams params) {
  params.validate();
  const auto L = params.u.size();
  const CScalar a1 = field_at(params.alpha, 0);
  const CScalar bL = field_at(params.beta, L - 1);
  if (a1 == CScalar{} || bL == CScalar{}) {
    throw PreconditionError("DA recursion point needs alpha_1 and beta_L nonzero");
  }
  params.u[0] = std::log(bL / a1) + params.v[L - 1];
  return params;
}

ModelParams at_ps_recursion_point(ModelParams params) {
  params.validate();
  params.u[0] = params.v.back();
  return params;
}

}  // namespace dwpf
