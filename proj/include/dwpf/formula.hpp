#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "dwpf/numerics.hpp"

namespace dwpf {

/// Values bound to the symbols a weight formula may reference.
struct FormulaSymbols {
  CScalar alpha{};
  CScalar beta{};
  CScalar x{};
  CScalar rho{};
};

/// A compiled weight formula.
///
/// Grammar (usual precedence, `^` right-associative and binding tighter than unary minus):
///
///     expr    := term (('+' | '-') term)*
///     term    := unary (('*' | '/') unary)*
///     unary   := '-' unary | power
///     power   := primary ('^' unary)?
///     primary := number | symbol | 'sqrt' '(' expr ')' | '(' expr ')'
///     symbol  := 'alpha' | 'beta' | 'x' | 'rho'
///
/// `sqrt` is the principal square root. Integer-valued exponents are applied by repeated
/// multiplication so that, e.g., `rho^3` stays exact.
class Formula {
 public:
  struct Node;

  static Formula parse(std::string_view text);

  [[nodiscard]] CScalar evaluate(const FormulaSymbols& symbols) const;
  [[nodiscard]] const std::string& source() const { return source_; }

 private:
  std::shared_ptr<const Node> root_;
  std::string source_;
};

}  // namespace dwpf
