#include "dwpf/da_weights.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dwpf/errors.hpp"
#include "dwpf/formula.hpp"

namespace dwpf {

bool VertexIndex::in_range(int N) const {
  auto ok = [N](int s) { return s >= 1 && s <= N; };
  return ok(iota1) && ok(iota2) && ok(kappa2) && ok(kappa1);
}

VertexIndex VertexIndex::conjugated(int N) const {
  return {N + 1 - iota1, N + 1 - iota2, N + 1 - kappa2, N + 1 - kappa1};
}

std::string VertexIndex::str() const {
  std::ostringstream os;
  os << "X^{" << iota1 << "," << iota2 << "}_{" << kappa2 << "," << kappa1 << "}";
  return os.str();
}

CScalar DAWeightContext::sa(int k) const { return principal_sqrt(1.0 - r(k) * alpha * alpha); }
CScalar DAWeightContext::sb(int k) const { return principal_sqrt(1.0 - r(k) * beta * beta); }

DAWeightTable::DAWeightTable(RootOfUnity rho, std::map<VertexIndex, DAWeightFormula> entries,
                             std::string origin)
    : rho_(rho), entries_(std::move(entries)), origin_(std::move(origin)) {
  for (const auto& [idx, formula] : entries_) {
    if (!idx.in_range(rho_.N)) {
      throw IndexRangeError("entry " + idx.str() + " out of range for N=" +
                            std::to_string(rho_.N));
    }
  }
}

CScalar DAWeightTable::weight(const VertexIndex& idx, const ExternalFieldPair& fields,
                              CScalar w) const {
  if (!idx.in_range(N())) {
    throw IndexRangeError("vertex index " + idx.str() + " out of range for N=" +
                          std::to_string(N()));
  }
  const auto it = entries_.find(idx);
  if (it == entries_.end()) return {};
  const DAWeightContext ctx{fields.alpha, fields.beta, std::exp(w), &rho_};
  return it->second(ctx);
}

namespace {

// Shorthand used by the built-in tables: x, fields, and the recurring constant factors.
struct Terms {
  CScalar a, b, x, r, r2;
  const DAWeightContext& ctx;

  explicit Terms(const DAWeightContext& c)
      : a(c.alpha), b(c.beta), x(c.x), r(c.r(1)), r2(c.r(2)), ctx(c) {}

  [[nodiscard]] CScalar A(int k) const { return ctx.sa(k); }
  [[nodiscard]] CScalar B(int k) const { return ctx.sb(k); }
  // sqrt(1 - rho^k) / sqrt(1 - rho)
  [[nodiscard]] CScalar root_ratio(int k) const {
    return principal_sqrt(1.0 - ctx.r(k)) / principal_sqrt(1.0 - r);
  }
  // sqrt((1 - rho^2)(1 - rho^3)) / (1 - rho)
  [[nodiscard]] CScalar root_ratio23() const {
    return principal_sqrt((1.0 - ctx.r(2)) * (1.0 - ctx.r(3))) / (1.0 - r);
  }
  // (1 - rho^3) / (1 - rho)
  [[nodiscard]] CScalar ratio3() const { return (1.0 - ctx.r(3)) / (1.0 - r); }
};

using Table = std::map<VertexIndex, DAWeightFormula>;

template <typename F>
void add(Table& t, int iota1, int iota2, int kappa2, int kappa1, F f) {
  t.emplace(VertexIndex{iota1, iota2, kappa2, kappa1},
            [f](const DAWeightContext& c) { return f(Terms(c)); });
}

Table table_n2() {
  Table t;
  add(t, 1, 1, 1, 1, [](const Terms& s) { return 1.0 - s.a * s.b * s.x; });
  add(t, 1, 2, 1, 2, [](const Terms& s) { return s.x * s.A(0) * s.B(0); });
  add(t, 1, 2, 2, 1, [](const Terms& s) { return s.a - s.b * s.x; });
  add(t, 2, 1, 1, 2, [](const Terms& s) { return s.b - s.a * s.x; });
  add(t, 2, 1, 2, 1, [](const Terms& s) { return s.A(0) * s.B(0); });
  add(t, 2, 2, 2, 2, [](const Terms& s) { return s.x - s.a * s.b; });
  return t;
}

Table table_n3() {
  Table t;
  add(t, 1, 1, 1, 1, [](const Terms& s) {
    return (1.0 - s.a * s.b * s.x) * (1.0 - s.a * s.b * s.r * s.x);
  });
  add(t, 1, 2, 1, 2, [](const Terms& s) {
    return s.x * s.A(0) * s.B(0) * (1.0 - s.a * s.b * s.r * s.x);
  });
  add(t, 1, 2, 2, 1, [](const Terms& s) {
    return (s.a - s.b * s.x) * (1.0 - s.a * s.b * s.r * s.x);
  });
  add(t, 1, 3, 1, 3, [](const Terms& s) {
    return s.x * s.x * s.A(0) * s.A(1) * s.B(0) * s.B(1);
  });
  add(t, 1, 3, 2, 2, [](const Terms& s) {
    return s.A(0) * s.B(1) * s.root_ratio(2) * s.x * (s.a - s.b * s.x);
  });
  add(t, 1, 3, 3, 1, [](const Terms& s) { return (s.a - s.b * s.x) * (s.a - s.b * s.r * s.x); });
  add(t, 2, 1, 1, 2, [](const Terms& s) {
    return (s.b - s.a * s.x) * (1.0 - s.a * s.b * s.r * s.x);
  });
  add(t, 2, 1, 2, 1, [](const Terms& s) {
    return s.A(0) * s.B(0) * (1.0 - s.a * s.b * s.r * s.x);
  });
  add(t, 2, 2, 1, 3, [](const Terms& s) {
    return s.A(1) * s.B(0) * s.root_ratio(2) * s.x * (s.b - s.a * s.x);
  });
  add(t, 2, 2, 2, 2, [](const Terms& s) {
    return (1.0 - s.a * s.a) * (1.0 - s.b * s.b * s.r) * s.x -
           (s.b - s.a * s.x) * (s.b * s.x - s.a * s.r);
  });
  add(t, 2, 2, 3, 1, [](const Terms& s) {
    return s.A(0) * s.B(1) * s.root_ratio(2) * (s.a - s.b * s.x);
  });
  add(t, 2, 3, 2, 3, [](const Terms& s) {
    return s.x * (s.x - s.a * s.b) * s.A(1) * s.B(1);
  });
  add(t, 2, 3, 3, 2, [](const Terms& s) {
    return (1.0 + s.r) * (s.a - s.b * s.x) * (s.x - s.a * s.b);
  });
  add(t, 3, 1, 1, 3, [](const Terms& s) { return (s.b - s.a * s.x) * (s.b - s.a * s.r * s.x); });
  add(t, 3, 1, 2, 2, [](const Terms& s) {
    return s.B(0) * s.A(1) * s.root_ratio(2) * (s.b - s.a * s.x);
  });
  add(t, 3, 1, 3, 1, [](const Terms& s) { return s.A(0) * s.A(1) * s.B(0) * s.B(1); });
  add(t, 3, 2, 2, 3, [](const Terms& s) {
    return (1.0 + s.r) * (s.b - s.x * s.a) * (s.x - s.a * s.b);
  });
  add(t, 3, 2, 3, 2, [](const Terms& s) { return s.A(1) * s.B(1) * (s.x - s.a * s.b); });
  add(t, 3, 3, 3, 3, [](const Terms& s) {
    return (s.x - s.a * s.b) * (s.x - s.a * s.b * s.r);
  });
  return t;
}

// Every entry obeys the transpose symmetry
//   X^{i1,i2}_{k2,k1}(a,b,x) = x^{((i2-i1)+(k1-k2))/2} X^{i2,i1}_{k1,k2}(b,a,x)
// and carries sqrt(1 - rho^k a^2) for k in [min-1, max-2] of its vertical leg pair (same for b
// on the horizontal pair), as in N = 2, 3. The entries 1423, 4132, 2314, 4242, 3324, 3342,
// 2323 and 4123 are pinned by these two rules; tests check the Yang-Baxter equation for all.
Table table_n4() {
  Table t;
  auto p1 = [](const Terms& s) { return 1.0 - s.a * s.b * s.r * s.x; };
  auto p2 = [](const Terms& s) { return 1.0 - s.a * s.b * s.r2 * s.x; };

  add(t, 1, 1, 1, 1, [=](const Terms& s) { return (1.0 - s.a * s.b * s.x) * p1(s) * p2(s); });
  add(t, 1, 2, 1, 2, [=](const Terms& s) { return s.x * s.A(0) * s.B(0) * p1(s) * p2(s); });
  add(t, 1, 2, 2, 1, [=](const Terms& s) { return (s.a - s.b * s.x) * p1(s) * p2(s); });
  add(t, 1, 3, 1, 3, [=](const Terms& s) {
    return s.x * s.x * s.A(0) * s.A(1) * s.B(0) * s.B(1) * p2(s);
  });
  add(t, 1, 3, 2, 2, [=](const Terms& s) {
    return s.A(0) * s.B(1) * s.root_ratio(2) * s.x * (s.a - s.b * s.x) * p2(s);
  });
  add(t, 1, 3, 3, 1, [=](const Terms& s) {
    return (s.a - s.b * s.x) * (s.a - s.b * s.r * s.x) * p2(s);
  });
  add(t, 1, 4, 1, 4, [](const Terms& s) {
    return s.x * s.x * s.x * s.A(0) * s.A(1) * s.A(2) * s.B(0) * s.B(1) * s.B(2);
  });
  add(t, 1, 4, 2, 3, [](const Terms& s) {
    return s.A(0) * s.A(1) * s.B(1) * s.B(2) * s.root_ratio(3) * s.x * s.x * (s.a - s.b * s.x);
  });
  add(t, 1, 4, 3, 2, [](const Terms& s) {
    return s.A(0) * s.B(2) * s.root_ratio(3) * s.x * (s.a - s.b * s.x) *
           (s.a - s.b * s.r * s.x);
  });
  add(t, 1, 4, 4, 1, [](const Terms& s) {
    return (s.a - s.b * s.x) * (s.a - s.b * s.r * s.x) * (s.a - s.b * s.r2 * s.x);
  });
  add(t, 2, 1, 1, 2, [=](const Terms& s) { return (s.b - s.a * s.x) * p1(s) * p2(s); });
  add(t, 2, 1, 2, 1, [=](const Terms& s) { return s.A(0) * s.B(0) * p1(s) * p2(s); });
  add(t, 2, 2, 1, 3, [=](const Terms& s) {
    return s.A(1) * s.B(0) * s.root_ratio(2) * s.x * (s.b - s.a * s.x) * p2(s);
  });
  add(t, 2, 2, 2, 2, [=](const Terms& s) {
    return ((1.0 - s.a * s.a) * (1.0 - s.b * s.b * s.r) * s.x -
            (s.b - s.a * s.x) * (s.b * s.x - s.a * s.r)) *
           p2(s);
  });
  add(t, 2, 2, 3, 1, [=](const Terms& s) {
    return s.A(0) * s.B(1) * s.root_ratio(2) * (s.a - s.b * s.x) * p2(s);
  });
  add(t, 2, 3, 1, 4, [](const Terms& s) {
    return s.x * s.x * s.A(1) * s.A(2) * s.B(0) * s.B(1) * s.root_ratio(3) * (s.b - s.a * s.x);
  });
  add(t, 2, 3, 2, 3, [](const Terms& s) {
    return s.A(1) * s.B(1) * s.x *
           ((1.0 - s.b * s.b) * (1.0 - s.a * s.a * s.r2) * s.x -
            (1.0 + s.r) * (s.a - s.b * s.x) * (s.a * s.x - s.b * s.r));
  });
  add(t, 2, 3, 3, 2, [](const Terms& s) {
    return (s.a - s.b * s.x) *
           ((1.0 - s.a * s.a * s.b * s.b) * (1.0 - s.r * s.r2) * s.x -
            s.r * (s.a * s.x - s.b * s.r) * (s.a - s.b * s.x));
  });
  add(t, 2, 3, 4, 1, [](const Terms& s) {
    return s.root_ratio(3) * s.A(0) * s.B(2) * (s.a - s.b * s.x) * (s.a - s.b * s.r * s.x);
  });
  add(t, 2, 4, 2, 4, [](const Terms& s) {
    return s.x * s.x * s.A(1) * s.A(2) * s.B(1) * s.B(2) * (s.x - s.a * s.b);
  });
  add(t, 2, 4, 3, 3, [](const Terms& s) {
    return s.x * s.root_ratio23() * s.A(1) * s.B(2) * (s.x - s.a * s.b) * (s.a - s.b * s.x);
  });
  add(t, 2, 4, 4, 2, [](const Terms& s) {
    return s.ratio3() * (s.x - s.a * s.b) * (s.a - s.b * s.x) * (s.a - s.b * s.r * s.x);
  });
  add(t, 3, 1, 1, 3, [=](const Terms& s) {
    return (s.b - s.a * s.x) * (s.b - s.a * s.r * s.x) * p2(s);
  });
  add(t, 3, 1, 2, 2, [=](const Terms& s) {
    return s.B(0) * s.A(1) * s.root_ratio(2) * (s.b - s.a * s.x) * p2(s);
  });
  add(t, 3, 1, 3, 1, [=](const Terms& s) {
    return s.A(0) * s.A(1) * s.B(0) * s.B(1) * p2(s);
  });
  add(t, 3, 2, 1, 4, [](const Terms& s) {
    return s.A(2) * s.B(0) * s.root_ratio(3) * s.x * (s.b - s.a * s.x) *
           (s.b - s.a * s.r * s.x);
  });
  add(t, 3, 2, 2, 3, [](const Terms& s) {
    return (s.b - s.a * s.x) *
           ((1.0 - s.a * s.a * s.b * s.b) * (1.0 - s.r * s.r2) * s.x -
            s.r * (s.b - s.a * s.x) * (s.b * s.x - s.a * s.r));
  });
  add(t, 3, 2, 3, 2, [](const Terms& s) {
    return s.A(1) * s.B(1) *
           ((1.0 - s.a * s.a) * (1.0 - s.b * s.b * s.r2) * s.x -
            (1.0 + s.r) * (s.b - s.a * s.x) * (s.b * s.x - s.a * s.r));
  });
  add(t, 3, 2, 4, 1, [](const Terms& s) {
    return s.A(0) * s.A(1) * s.B(1) * s.B(2) * s.root_ratio(3) * (s.a - s.b * s.x);
  });
  add(t, 3, 3, 2, 4, [](const Terms& s) {
    return s.x * s.root_ratio23() * s.A(2) * s.B(1) * (s.x - s.a * s.b) * (s.b - s.a * s.x);
  });
  add(t, 3, 3, 3, 3, [](const Terms& s) {
    return ((1.0 - s.a * s.a * s.r) * (1.0 - s.b * s.b * s.r2) * s.x -
            (1.0 + s.r + s.r2) * (s.b - s.a * s.x) * (s.b * s.x - s.a * s.r)) *
           (s.x - s.a * s.b);
  });
  add(t, 3, 3, 4, 2, [](const Terms& s) {
    return s.A(1) * s.B(2) * s.root_ratio23() * (s.x - s.a * s.b) * (s.a - s.b * s.x);
  });
  add(t, 3, 4, 3, 4, [](const Terms& s) {
    return s.x * s.A(2) * s.B(2) * (s.x - s.a * s.b) * (s.x - s.a * s.b * s.r);
  });
  add(t, 3, 4, 4, 3, [](const Terms& s) {
    return s.ratio3() * (s.x - s.a * s.b) * (s.x - s.a * s.b * s.r) * (s.a - s.b * s.x);
  });
  add(t, 4, 1, 1, 4, [](const Terms& s) {
    return (s.b - s.a * s.x) * (s.b - s.a * s.r * s.x) * (s.b - s.a * s.r2 * s.x);
  });
  add(t, 4, 1, 2, 3, [](const Terms& s) {
    return s.A(2) * s.B(0) * s.root_ratio(3) * (s.b - s.a * s.x) * (s.b - s.a * s.r * s.x);
  });
  add(t, 4, 1, 3, 2, [](const Terms& s) {
    return s.A(1) * s.A(2) * s.B(0) * s.B(1) * s.root_ratio(3) * (s.b - s.a * s.x);
  });
  add(t, 4, 1, 4, 1, [](const Terms& s) {
    return s.A(0) * s.A(1) * s.A(2) * s.B(0) * s.B(1) * s.B(2);
  });
  add(t, 4, 2, 2, 4, [](const Terms& s) {
    return s.ratio3() * (s.x - s.a * s.b) * (s.b - s.a * s.x) * (s.b - s.a * s.r * s.x);
  });
  add(t, 4, 2, 3, 3, [](const Terms& s) {
    return s.A(2) * s.B(1) * s.root_ratio23() * (s.x - s.a * s.b) * (s.b - s.a * s.x);
  });
  add(t, 4, 2, 4, 2, [](const Terms& s) {
    return s.A(1) * s.A(2) * s.B(1) * s.B(2) * (s.x - s.a * s.b);
  });
  add(t, 4, 3, 3, 4, [](const Terms& s) {
    return s.ratio3() * (s.x - s.a * s.b) * (s.x - s.a * s.b * s.r) * (s.b - s.a * s.x);
  });
  add(t, 4, 3, 4, 3, [](const Terms& s) {
    return s.A(2) * s.B(2) * (s.x - s.a * s.b) * (s.x - s.a * s.b * s.r);
  });
  add(t, 4, 4, 4, 4, [](const Terms& s) {
    return (s.x - s.a * s.b) * (s.x - s.a * s.b * s.r) * (s.x - s.a * s.b * s.r2);
  });
  return t;
}

}  // namespace

DAWeightTable da_builtin_table(int N, int n) {
  const RootOfUnity rho = root_of_unity(n, N);
  switch (N) {
    case 2: return {rho, table_n2(), "builtin"};
    case 3: return {rho, table_n3(), "builtin"};
    case 4: return {rho, table_n4(), "builtin"};
    default:
      throw PreconditionError("no built-in Deguchi-Akutsu table for N=" + std::to_string(N) +
                              "; load one with register_plugin_table");
  }
}

CScalar da_weight(const DAWeightTable& table, const VertexIndex& idx,
                  const ExternalFieldPair& fields, CScalar w) {
  return table.weight(idx, fields, w);
}

CScalar da_c_plus(const DAWeightTable& table, const ExternalFieldPair& fields, CScalar w) {
  return table.weight(c_plus_index(table.N()), fields, w);
}

LinePermuters da_line_permuters(const DAWeightTable& table, const ExternalFieldPair& fields,
                                CScalar w) {
  return {table.weight(a_plus_index(), fields, w), table.weight(a_minus_index(table.N()), fields, w)};
}

DAWeightTable register_plugin_table(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("plugin table is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("plugin table must be a JSON object");
  auto int_field = [](const nlohmann::json& obj, const char* key) -> int {
    const auto it = obj.find(key);
    if (it == obj.end() || !it->is_number_integer()) {
      throw ParseError(std::string("plugin table: missing or non-integer field '") + key + "'");
    }
    return it->get<int>();
  };

  const int N = int_field(doc, "N");
  const int n = doc.contains("n") ? int_field(doc, "n") : 1;
  const RootOfUnity rho = root_of_unity(n, N);

  const auto entries_it = doc.find("entries");
  if (entries_it == doc.end() || !entries_it->is_array()) {
    throw ParseError("plugin table: 'entries' must be an array");
  }
  std::map<VertexIndex, DAWeightFormula> entries;
  for (const auto& e : *entries_it) {
    if (!e.is_object()) throw ParseError("plugin table: each entry must be an object");
    const VertexIndex idx{int_field(e, "iota1"), int_field(e, "iota2"), int_field(e, "kappa2"),
                          int_field(e, "kappa1")};
    if (!idx.in_range(N)) {
      throw IndexRangeError("plugin entry " + idx.str() + " out of range for N=" +
                            std::to_string(N));
    }
    const auto f = e.find("formula");
    if (f == e.end() || !f->is_string()) {
      throw ParseError("plugin entry " + idx.str() + " lacks a string 'formula'");
    }
    Formula formula = Formula::parse(f->get<std::string>());
    const auto [_, inserted] = entries.emplace(idx, [formula](const DAWeightContext& c) {
      return formula.evaluate({c.alpha, c.beta, c.x, c.rho->value});
    });
    if (!inserted) throw ParseError("plugin entry " + idx.str() + " listed twice");
  }
  return {rho, std::move(entries), "plugin"};
}

DAWeightTable load_plugin_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open plugin table '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return register_plugin_table(buffer.str());
}

CScalar DAModel::weight(const VertexIndex& idx, const LineParams& vertical,
                        const LineParams& horizontal) const {
  return table_->weight(idx, {vertical.field, horizontal.field},
                        vertical.rapidity - horizontal.rapidity);
}

std::string DAModel::describe() const {
  return "da(N=" + std::to_string(table_->N()) + ",n=" + std::to_string(table_->rho().n) + "," +
         table_->origin() + ")";
}

ModelPtr make_da_model(int N, int n) {
  return std::make_shared<DAModel>(std::make_shared<const DAWeightTable>(da_builtin_table(N, n)));
}

ModelPtr make_da_model(DAWeightTable table) {
  return std::make_shared<DAModel>(std::make_shared<const DAWeightTable>(std::move(table)));
}

}  // namespace dwpf
