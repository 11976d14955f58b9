#include <gtest/gtest.h>

#include <fstream>

#include "dwpf/da_weights.hpp"
#include "dwpf/errors.hpp"
#include "dwpf/ps_weights.hpp"
#include "oracle_values.hpp"

using namespace dwpf;

TEST(DAWeights, MatchIndependentOracle) {
  const ExternalFieldPair fields{{0.3, 0.2}, {-0.4, 0.1}};
  const CScalar w{0.2, -0.3};
  std::size_t counted[5] = {};
  for (const auto& entry : oracle::kWeights) {
    const auto table = da_builtin_table(entry.N);
    ASSERT_TRUE(table.has(entry.idx)) << entry.idx.str();
    const CScalar got = table.weight(entry.idx, fields, w);
    EXPECT_LE(relative_difference(got, entry.value), 1e-13) << "N=" << entry.N << " " << entry.idx.str();
    ++counted[entry.N];
  }
  for (int N = 2; N <= 4; ++N) EXPECT_EQ(da_builtin_table(N).size(), counted[N]);
}

TEST(DAWeights, TableSizes) {
  EXPECT_EQ(da_builtin_table(2).size(), 6u);
  EXPECT_EQ(da_builtin_table(3).size(), 19u);
  EXPECT_EQ(da_builtin_table(4).size(), 44u);
  EXPECT_THROW(da_builtin_table(5), PreconditionError);
  EXPECT_THROW(da_builtin_table(4, 2), CoprimalityError);
}

TEST(DAWeights, FreeFermionAtTwoStates) {
  const auto table = da_builtin_table(2);
  for (const CScalar w : {CScalar{0.1, 0.2}, CScalar{-0.4, 0.3}}) {
    const ExternalFieldPair f{{0.2, 0.5}, {-0.6, 0.1}};
    auto X = [&](int a, int b, int c, int d) { return table.weight({a, b, c, d}, f, w); };
    const CScalar lhs = X(1, 1, 1, 1) * X(2, 2, 2, 2) + X(1, 2, 2, 1) * X(2, 1, 1, 2);
    const CScalar rhs = X(1, 2, 1, 2) * X(2, 1, 2, 1);
    EXPECT_LE(relative_difference(lhs, rhs), 1e-14);
  }
  // alpha = beta = i: a+ = a- = 1 + x, c+ = 2x, c- = 2.
  const ExternalFieldPair f{{0, 1}, {0, 1}};
  const CScalar w{0.3, 0.1};
  const CScalar x = std::exp(w);
  EXPECT_LE(relative_difference(table.weight({1, 1, 1, 1}, f, w), 1.0 + x), 1e-15);
  EXPECT_LE(relative_difference(table.weight({2, 2, 2, 2}, f, w), 1.0 + x), 1e-15);
  EXPECT_LE(relative_difference(da_c_plus(table, f, w), 2.0 * x), 1e-15);
  EXPECT_LE(relative_difference(table.weight({2, 1, 2, 1}, f, w), 2.0), 1e-15);
}

TEST(DAWeights, MissingEntriesAreZeroAndRangeChecked) {
  const auto table = da_builtin_table(3);
  EXPECT_EQ(table.weight({1, 1, 2, 2}, {}, 0.0), CScalar{});
  EXPECT_THROW((void)table.weight({0, 1, 1, 1}, {}, 0.0), IndexRangeError);
  EXPECT_THROW((void)table.weight({1, 4, 1, 1}, {}, 0.0), IndexRangeError);
}

TEST(DAWeights, CPlusAndPermuters) {
  const auto table = da_builtin_table(3);
  const ExternalFieldPair f{{0.4, 0.1}, {-0.2, 0.3}};
  const CScalar w{0.1, -0.2};
  const CScalar x = std::exp(w);
  const auto& rho = table.rho();
  CScalar expect = x * x;
  for (int k = 0; k < 2; ++k) {
    expect *= principal_sqrt(1.0 - rho.pow(k) * f.alpha * f.alpha) *
              principal_sqrt(1.0 - rho.pow(k) * f.beta * f.beta);
  }
  EXPECT_LE(relative_difference(da_c_plus(table, f, w), expect), 1e-14);
  const auto p = da_line_permuters(table, f, w);
  const CScalar ab = f.alpha * f.beta;
  EXPECT_LE(relative_difference(p.a_plus, (1.0 - ab * x) * (1.0 - ab * rho.value * x)), 1e-14);
  EXPECT_LE(relative_difference(p.a_minus, (x - ab) * (x - ab * rho.value)), 1e-14);
}

TEST(DAWeights, TransposeSymmetry) {
  // X^{i1,i2}_{k2,k1}(a,b,x) = x^{((i2-i1)+(k1-k2))/2} X^{i2,i1}_{k1,k2}(b,a,x)
  for (int N = 2; N <= 4; ++N) {
    const auto table = da_builtin_table(N);
    const CScalar a{0.35, -0.2}, b{-0.1, 0.55}, w{0.15, 0.25};
    for (const auto& [idx, f] : table.entries()) {
      const VertexIndex t{idx.iota2, idx.iota1, idx.kappa1, idx.kappa2};
      const int twice = (idx.iota2 - idx.iota1) + (idx.kappa1 - idx.kappa2);
      ASSERT_EQ(twice % 2, 0);
      const CScalar lhs = table.weight(idx, {a, b}, w);
      const CScalar rhs = std::exp(0.5 * twice * w) * table.weight(t, {b, a}, w);
      EXPECT_LE(relative_difference(lhs, rhs), 1e-13) << "N=" << N << " " << idx.str();
    }
  }
}

TEST(Plugin, RoundTripsBuiltinTables) {
  for (int N = 2; N <= 4; ++N) {
    const auto plugin =
        load_plugin_table(std::string(DWPF_DATA_DIR) + "/plugins/da_n" + std::to_string(N) + ".json");
    const auto builtin = da_builtin_table(N);
    ASSERT_EQ(plugin.size(), builtin.size());
    EXPECT_EQ(plugin.origin(), "plugin");
    const ExternalFieldPair f{{0.25, 0.3}, {-0.5, 0.2}};
    for (const auto& [idx, formula] : builtin.entries()) {
      EXPECT_LE(relative_difference(plugin.weight(idx, f, {0.1, 0.4}),
                                    builtin.weight(idx, f, {0.1, 0.4})),
                1e-13)
          << idx.str();
    }
  }
}

TEST(Plugin, Validation) {
  EXPECT_THROW(register_plugin_table("not json"), ParseError);
  EXPECT_THROW(register_plugin_table(R"({"N": 3, "entries": 5})"), ParseError);
  EXPECT_THROW(register_plugin_table(R"({"N": 4, "n": 2, "entries": []})"), CoprimalityError);
  EXPECT_THROW(register_plugin_table(
                   R"({"N": 2, "entries": [{"iota1": 3, "iota2": 1, "kappa2": 1, "kappa1": 1, "formula": "1"}]})"),
               IndexRangeError);
  EXPECT_THROW(register_plugin_table(
                   R"({"N": 2, "entries": [{"iota1": 1, "iota2": 1, "kappa2": 1, "kappa1": 1, "formula": "1"},
                                           {"iota1": 1, "iota2": 1, "kappa2": 1, "kappa1": 1, "formula": "2"}]})"),
               ParseError);
  EXPECT_THROW(register_plugin_table(
                   R"({"N": 2, "entries": [{"iota1": 1, "iota2": 1, "kappa2": 1, "kappa1": 1, "formula": "y"}]})"),
               ParseError);
  const auto t = register_plugin_table(
      R"({"N": 5, "n": 2, "entries": [{"iota1": 1, "iota2": 5, "kappa2": 1, "kappa1": 5, "formula": "x^4"}]})");
  EXPECT_EQ(t.N(), 5);
  EXPECT_EQ(t.rho().n, 2);
  EXPECT_LE(relative_difference(t.weight({1, 5, 1, 5}, {}, {0.5, 0.0}), std::exp(2.0)), 1e-14);
}

TEST(PSWeights, Formulas) {
  const CScalar eta{0.6, 0.3}, u{0.2, -0.1};
  const PSWeightTable t({1, 1}, eta);  // B- = {1, 2}, B+ = {3, 4}
  const CScalar sh = std::sinh(eta);
  EXPECT_LE(relative_difference(t.weight({1, 1, 1, 1}, u), std::sinh(eta * (1.0 - u)) / sh), 1e-15);
  EXPECT_LE(relative_difference(t.weight({4, 4, 4, 4}, u), std::sinh(eta * (1.0 + u)) / sh), 1e-15);
  EXPECT_LE(relative_difference(t.weight({1, 2, 2, 1}, u), -std::sinh(eta * u) / sh), 1e-15);
  EXPECT_LE(relative_difference(t.weight({1, 3, 3, 1}, u), std::sinh(eta * u) / sh), 1e-15);
  EXPECT_LE(relative_difference(t.weight({1, 4, 1, 4}, u), std::exp(eta * u)), 1e-15);
  EXPECT_LE(relative_difference(t.weight({4, 1, 4, 1}, u), std::exp(-eta * u)), 1e-15);
  EXPECT_EQ(t.weight({1, 2, 1, 1}, u), CScalar{});
  EXPECT_THROW((void)t.weight({5, 1, 1, 1}, u), IndexRangeError);
  EXPECT_LE(relative_difference(ps_c_plus(t, u), std::exp(eta * u)), 1e-15);
}

TEST(PSWeights, Preconditions) {
  EXPECT_THROW(PSWeightTable({-1, 0}, 0.5), PreconditionError);
  EXPECT_THROW(PSWeightTable({0, 0}, 0.0), PreconditionError);
  EXPECT_NO_THROW(PSWeightTable({0, 0}, CScalar(0.0, 1.0)));
}
