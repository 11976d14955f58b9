#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <utility>

#include "dwpf/numerics.hpp"
#include "dwpf/vertex_model.hpp"

namespace dwpf {

/// External fields of the two lines meeting at a vertex.
struct ExternalFieldPair {
  CScalar alpha{};  // vertical line
  CScalar beta{};   // horizontal line
};

/// Inputs available to a Deguchi-Akutsu weight formula. x = e^{u - v}.
struct DAWeightContext {
  CScalar alpha;
  CScalar beta;
  CScalar x;
  const RootOfUnity* rho;

  [[nodiscard]] CScalar r(int k) const { return rho->pow(k); }
  /// sqrt(1 - rho^k alpha^2), one principal root per factor.
  [[nodiscard]] CScalar sa(int k) const;
  /// sqrt(1 - rho^k beta^2).
  [[nodiscard]] CScalar sb(int k) const;
};

using DAWeightFormula = std::function<CScalar(const DAWeightContext&)>;

/// Sparse table of N-state Deguchi-Akutsu weights. Unlisted index tuples are exactly zero.
/// Immutable once built.
class DAWeightTable {
 public:
  DAWeightTable(RootOfUnity rho, std::map<VertexIndex, DAWeightFormula> entries,
                std::string origin);

  [[nodiscard]] int N() const { return rho_.N; }
  [[nodiscard]] const RootOfUnity& rho() const { return rho_; }
  [[nodiscard]] std::size_t size() const { return entries_.size(); }
  [[nodiscard]] bool has(const VertexIndex& idx) const { return entries_.contains(idx); }
  [[nodiscard]] const std::string& origin() const { return origin_; }
  [[nodiscard]] const std::map<VertexIndex, DAWeightFormula>& entries() const { return entries_; }

  /// Throws IndexRangeError when idx is outside [1, N]^4.
  [[nodiscard]] CScalar weight(const VertexIndex& idx, const ExternalFieldPair& fields,
                               CScalar w) const;

 private:
  RootOfUnity rho_;
  std::map<VertexIndex, DAWeightFormula> entries_;
  std::string origin_;
};

/// The built-in tables for N in {2, 3, 4}; rho = e^{2 pi i n / N}.
DAWeightTable da_builtin_table(int N, int n = 1);

CScalar da_weight(const DAWeightTable& table, const VertexIndex& idx,
                  const ExternalFieldPair& fields, CScalar w);

/// X^{1,N}_{1,N}.
CScalar da_c_plus(const DAWeightTable& table, const ExternalFieldPair& fields, CScalar w);

struct LinePermuters {
  CScalar a_plus;
  CScalar a_minus;
};

/// (X^{1,1}_{1,1}, X^{N,N}_{N,N}).
LinePermuters da_line_permuters(const DAWeightTable& table, const ExternalFieldPair& fields,
                                CScalar w);

/// Builds a table from a plugin document:
///
///     {"N": 5, "n": 1, "entries": [{"iota1": 1, "iota2": 5, "kappa2": 1, "kappa1": 5,
///                                   "formula": "x^4 * sqrt(1 - alpha^2) * ..."}, ...]}
///
/// `n` defaults to 1. Throws ParseError, IndexRangeError or CoprimalityError.
DAWeightTable register_plugin_table(std::string_view json_text);
DAWeightTable load_plugin_table(const std::filesystem::path& path);

/// Adapts a DA table to the generic vertex-model interface.
class DAModel final : public VertexModel {
 public:
  explicit DAModel(std::shared_ptr<const DAWeightTable> table) : table_(std::move(table)) {}

  [[nodiscard]] int states() const override { return table_->N(); }
  [[nodiscard]] CScalar weight(const VertexIndex& idx, const LineParams& vertical,
                               const LineParams& horizontal) const override;
  [[nodiscard]] std::string describe() const override;
  [[nodiscard]] bool has_entry(const VertexIndex& idx) const override { return table_->has(idx); }

  [[nodiscard]] const DAWeightTable& table() const { return *table_; }

 private:
  std::shared_ptr<const DAWeightTable> table_;
};

ModelPtr make_da_model(int N, int n = 1);
ModelPtr make_da_model(DAWeightTable table);

}  // namespace dwpf
