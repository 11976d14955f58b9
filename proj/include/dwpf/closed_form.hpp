#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dwpf/lattice_engine.hpp"
#include "dwpf/numerics.hpp"

namespace dwpf {

struct FactorizedValue {
  CScalar value{1.0, 0.0};
  /// Every factor multiplied into `value`, in order.
  std::vector<std::pair<std::string, CScalar>> factor_log;

  void multiply(std::string label, CScalar factor);
};

/// Product formula for the Deguchi-Akutsu DWPF with N = rho.N states:
///
///   prod_j [ e^{(N-1) j (u_j - v_j)} prod_{k=0}^{N-2} sqrt(1 - rho^k alpha_j^2) sqrt(1 - rho^k beta_j^2) ]
///   * prod_{i<j} prod_{k=0}^{N-2} (1 - rho^k alpha_i alpha_j e^{u_i - u_j})(1 - rho^k beta_j beta_i e^{v_j - v_i})
///
/// with j running 1..L.
FactorizedValue dwpf_factorized_da(const ModelParams& params, const RootOfUnity& rho);

/// prod_k R^{1,N}_{1,N}(u_k - v_k) * prod_{i<j} R^{1,1}_{1,1}(u_i - u_j) R^{1,1}_{1,1}(v_j - v_i).
/// Independent of (r, s). Throws PreconditionError when sinh(eta) = 0.
FactorizedValue dwpf_factorized_ps(const ModelParams& params, CScalar eta);

/// Right-hand side of the DA recursion at e^{u_1} = (beta_L / alpha_1) e^{v_L}, given the DWPF of
/// reduce_params(params). Throws PreconditionError when the parameters are off that point.
CScalar da_recursion_rhs(const ModelParams& params, const RootOfUnity& rho, CScalar reduced_Z,
                         const TolerancePolicy& policy = {});

/// Right-hand side of the PS recursion at u_1 = v_L:
/// R^{1,N}_{1,N}(0) prod_{j<L} R^{1,1}_{1,1}(v_L - v_j) prod_{j>1} R^{N,N}_{N,N}(u_j - v_L) * reduced_Z.
CScalar ps_recursion_rhs(const ModelParams& params, CScalar eta, CScalar reduced_Z,
                         const TolerancePolicy& policy = {});

/// Sets u_1 so that e^{u_1} = (beta_L / alpha_1) e^{v_L}, principal log.
ModelParams at_da_recursion_point(ModelParams params);

/// Sets u_1 = v_L.
ModelParams at_ps_recursion_point(ModelParams params);

}  // namespace dwpf
