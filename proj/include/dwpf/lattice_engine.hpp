#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "dwpf/numerics.hpp"
#include "dwpf/vertex_model.hpp"

namespace dwpf {

/// Line parameters of an L x L lattice. Vertical lines i = 0..L-1 run left to right and carry
/// (u_i, alpha_i); horizontal lines j = 0..L-1 run top to bottom and carry (v_j, beta_j).
/// Field arrays may be left empty for models without external fields.
struct ModelParams {
  std::vector<CScalar> u;
  std::vector<CScalar> v;
  std::vector<CScalar> alpha;
  std::vector<CScalar> beta;

  [[nodiscard]] int L() const { return static_cast<int>(u.size()); }
  /// Throws PreconditionError on mismatched array lengths or an empty lattice.
  void validate() const;

  [[nodiscard]] LineParams vertical(int i) const;
  [[nodiscard]] LineParams horizontal(int j) const;
};

/// Removes vertical line 0 and horizontal line L-1; the remaining lines keep their order.
ModelParams reduce_params(const ModelParams& params);

struct LatticeSpec {
  ModelPtr model;
  ModelParams params;

  [[nodiscard]] int L() const { return params.L(); }
  [[nodiscard]] int N() const { return model->states(); }
};

/// State variables on the 4L boundary bonds, listed top to bottom (left, right) and left to
/// right (top, bottom).
struct BoundaryCondition {
  std::vector<int> left;
  std::vector<int> top;
  std::vector<int> right;
  std::vector<int> bottom;

  /// `low` on the left and top, `high` on the right and bottom.
  static BoundaryCondition uniform(int L, int low, int high);
  /// Domain wall boundary: minimal (1) left/top, maximal (N) right/bottom.
  static BoundaryCondition domain_wall(int L, int N) { return uniform(L, 1, N); }
};

struct EngineOptions {
  /// Upper bound on N^{2L(L-1)} interior assignments for brute-force enumeration.
  double enumeration_cap = 1e8;
  /// Upper bound on the two cut vectors held during contraction.
  std::size_t memory_cap_bytes = std::size_t{1} << 30;
  /// Worker threads for contraction; results are identical to the sequential sweep.
  int threads = 1;
};

/// Restricts which vertex configurations are allowed at a given site (column, row).
using SiteMask = std::function<bool(int column, int row, const VertexIndex& idx)>;

struct EnumerationResult {
  CScalar value{};
  double max_term = 0.0;
  std::uint64_t nonzero_configurations = 0;
};

/// Direct sum over every interior bond assignment. Throws CapacityError above the cap.
EnumerationResult enumerate_configurations(const LatticeSpec& spec, const BoundaryCondition& bc,
                                           const EngineOptions& options = {});

CScalar dwpf_enumerate(const LatticeSpec& spec, const BoundaryCondition& bc,
                       const EngineOptions& options = {});

/// Left-to-right column sweep of a dense cut vector over the N^L horizontal-bond states.
/// Throws CapacityError when the cut vectors would exceed the memory cap.
CScalar dwpf_contract(const LatticeSpec& spec, const BoundaryCondition& bc,
                      const EngineOptions& options = {}, const SiteMask& mask = {});

/// Largest |product of vertex weights| over all configurations, by the same sweep in the
/// (max, *) semiring.
double max_configuration_term(const LatticeSpec& spec, const BoundaryCondition& bc,
                              const EngineOptions& options = {}, const SiteMask& mask = {});

/// Column k of the result carries vertical line permutation[k] of the input (0-based).
LatticeSpec permute_columns(const LatticeSpec& spec, std::span<const int> permutation);

/// DWPF (domain wall boundary) of the spec with its vertical lines permuted.
CScalar dwpf_with_permuted_columns(const LatticeSpec& spec, std::span<const int> permutation,
                                   const EngineOptions& options = {});

/// Number of interior assignments N^{2L(L-1)}, as a double.
double interior_assignment_count(int N, int L);

/// Bytes used by the contraction cut vectors.
double contraction_memory_bytes(int N, int L);

}  // namespace dwpf
