#pragma once

#include <memory>
#include <string>

#include "dwpf/da_weights.hpp"
#include "dwpf/numerics.hpp"
#include "dwpf/vertex_model.hpp"

namespace dwpf {

/// States {1..N}, N = r + s + 2, split into B- = {1..s+1} and B+ = {s+2..N}.
struct GradedStateSpace {
  int r = 0;
  int s = 0;

  [[nodiscard]] int N() const { return r + s + 2; }
  [[nodiscard]] bool in_minus(int sigma) const { return sigma >= 1 && sigma <= s + 1; }
  [[nodiscard]] bool in_plus(int sigma) const { return sigma >= s + 2 && sigma <= N(); }
};

/// Perk-Schultz weights for sl(r+1|s+1) with crossing parameter eta.
class PSWeightTable {
 public:
  /// Throws PreconditionError for negative r, s or |sinh(eta)| below 1e-12.
  PSWeightTable(GradedStateSpace space, CScalar eta);

  [[nodiscard]] const GradedStateSpace& space() const { return space_; }
  [[nodiscard]] int N() const { return space_.N(); }
  [[nodiscard]] CScalar eta() const { return eta_; }

  [[nodiscard]] CScalar weight(const VertexIndex& idx, CScalar u) const;

 private:
  GradedStateSpace space_;
  CScalar eta_;
  CScalar sinh_eta_;
};

/// Nonzero weights, with a = iota1 (top), b = iota2 (right):
///   R^{a,a}_{a,a}(u) = sinh(eta(1 - u))/sinh(eta) for a in B-, sinh(eta(1 + u))/sinh(eta) in B+
///   R^{a,b}_{b,a}(u) = -sinh(eta u)/sinh(eta) if a, b share a grading, +sinh(eta u)/sinh(eta) else
///   R^{a,b}_{a,b}(u) = e^{eta u} for a < b, e^{-eta u} for a > b
/// The last two apply only to a != b. Throws IndexRangeError when idx is outside [1, N]^4.
CScalar ps_weight(const PSWeightTable& table, const VertexIndex& idx, CScalar u);

/// R^{1,N}_{1,N}(u) = e^{eta u}.
CScalar ps_c_plus(const PSWeightTable& table, CScalar u);

/// (R^{1,1}_{1,1}(u), R^{N,N}_{N,N}(u)).
LinePermuters ps_line_permuters(const PSWeightTable& table, CScalar u);

class PSModel final : public VertexModel {
 public:
  explicit PSModel(PSWeightTable table) : table_(std::move(table)) {}

  [[nodiscard]] int states() const override { return table_.N(); }
  [[nodiscard]] CScalar weight(const VertexIndex& idx, const LineParams& vertical,
                               const LineParams& horizontal) const override {
    return table_.weight(idx, vertical.rapidity - horizontal.rapidity);
  }
  [[nodiscard]] std::string describe() const override;
  [[nodiscard]] bool has_entry(const VertexIndex& idx) const override;

  [[nodiscard]] const PSWeightTable& table() const { return table_; }

 private:
  PSWeightTable table_;
};

ModelPtr make_ps_model(int r, int s, CScalar eta);

}  // namespace dwpf
