#include "dwpf/ps_weights.hpp"

#include <sstream>

#include "dwpf/errors.hpp"

namespace dwpf {

PSWeightTable::PSWeightTable(GradedStateSpace space, CScalar eta)
    : space_(space), eta_(eta), sinh_eta_(std::sinh(eta)) {
  if (space_.r < 0 || space_.s < 0) {
    throw PreconditionError("Perk-Schultz ranks must be non-negative");
  }
  if (std::abs(sinh_eta_) < 1e-12) {
    throw PreconditionError("crossing parameter has sinh(eta) = 0");
  }
}

CScalar PSWeightTable::weight(const VertexIndex& idx, CScalar u) const {
  if (!idx.in_range(N())) {
    throw IndexRangeError("vertex index " + idx.str() + " out of range for N=" +
                          std::to_string(N()));
  }
  const int a = idx.iota1;
  const int b = idx.iota2;
  if (a == b) {
    if (idx.kappa2 != a || idx.kappa1 != a) return {};
    const CScalar arg = space_.in_minus(a) ? 1.0 - u : 1.0 + u;
    return std::sinh(eta_ * arg) / sinh_eta_;
  }
  if (idx.kappa2 == b && idx.kappa1 == a) {
    const bool same_grading = space_.in_minus(a) == space_.in_minus(b);
    const CScalar value = std::sinh(eta_ * u) / sinh_eta_;
    return same_grading ? -value : value;
  }
  if (idx.kappa2 == a && idx.kappa1 == b) {
    return a < b ? std::exp(eta_ * u) : std::exp(-eta_ * u);
  }
  return {};
}

CScalar ps_weight(const PSWeightTable& table, const VertexIndex& idx, CScalar u) {
  return table.weight(idx, u);
}

CScalar ps_c_plus(const PSWeightTable& table, CScalar u) {
  return table.weight(c_plus_index(table.N()), u);
}

LinePermuters ps_line_permuters(const PSWeightTable& table, CScalar u) {
  return {table.weight(a_plus_index(), u), table.weight(a_minus_index(table.N()), u)};
}

std::string PSModel::describe() const {
  std::ostringstream os;
  os << "ps(r=" << table_.space().r << ",s=" << table_.space().s << ",eta=" << table_.eta().real();
  if (table_.eta().imag() != 0.0) os << (table_.eta().imag() < 0 ? "" : "+") << table_.eta().imag() << "i";
  os << ")";
  return os.str();
}

bool PSModel::has_entry(const VertexIndex& idx) const {
  if (!idx.in_range(states())) return false;
  if (idx.iota1 == idx.iota2) return idx.kappa2 == idx.iota1 && idx.kappa1 == idx.iota1;
  return (idx.kappa2 == idx.iota2 && idx.kappa1 == idx.iota1) ||
         (idx.kappa2 == idx.iota1 && idx.kappa1 == idx.iota2);
}

ModelPtr make_ps_model(int r, int s, CScalar eta) {
  return std::make_shared<PSModel>(PSWeightTable({r, s}, eta));
}

}  // namespace dwpf
