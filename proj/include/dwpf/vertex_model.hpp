#pragma once

#include <compare>
#include <memory>
#include <string>

#include "dwpf/numerics.hpp"

namespace dwpf {

/// State variables on the four bonds of a vertex, written X^{iota1, iota2}_{kappa2, kappa1}.
///
/// iota1 leaves through the top, iota2 through the right, kappa2 enters from the left and
/// kappa1 from the bottom. Vertical lines run bottom to top, horizontal lines left to right.
struct VertexIndex {
  int iota1 = 1;   // top
  int iota2 = 1;   // right
  int kappa2 = 1;  // left
  int kappa1 = 1;  // bottom

  auto operator<=>(const VertexIndex&) const = default;

  [[nodiscard]] bool in_range(int N) const;
  /// Each state sigma replaced by N - sigma + 1.
  [[nodiscard]] VertexIndex conjugated(int N) const;
  [[nodiscard]] std::string str() const;
};

/// Rapidity and external field carried by one lattice line. Models without fields ignore `field`.
struct LineParams {
  CScalar rapidity{};
  CScalar field{};
};

/// A vertex model: N states per bond and a weight for each vertex given its two lines.
class VertexModel {
 public:
  virtual ~VertexModel() = default;

  [[nodiscard]] virtual int states() const = 0;

  /// Weight of the vertex where the vertical line `vertical` crosses `horizontal`.
  [[nodiscard]] virtual CScalar weight(const VertexIndex& idx, const LineParams& vertical,
                                       const LineParams& horizontal) const = 0;

  [[nodiscard]] virtual std::string describe() const = 0;

  /// True when the entry can be nonzero for some parameters. Used to skip structural zeros.
  [[nodiscard]] virtual bool has_entry(const VertexIndex& idx) const = 0;
};

using ModelPtr = std::shared_ptr<const VertexModel>;

/// The c+ vertex X^{1,N}_{1,N}.
inline VertexIndex c_plus_index(int N) { return {1, N, 1, N}; }
/// Line-permuting vertices a+ = X^{1,1}_{1,1} and a- = X^{N,N}_{N,N}.
inline VertexIndex a_plus_index() { return {1, 1, 1, 1}; }
inline VertexIndex a_minus_index(int N) { return {N, N, N, N}; }

}  // namespace dwpf
