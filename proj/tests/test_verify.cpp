#include <gtest/gtest.h>

#include "dwpf/errors.hpp"
#include "dwpf/verify.hpp"

using namespace dwpf;

namespace {
CheckOptions quick(int trials = 5) {
  CheckOptions o;
  o.trials = trials;
  return o;
}
}  // namespace

TEST(Report, PassFlagFollowsMaxResidual) {
  VerificationReport r;
  r.tolerance = 1e-9;
  r.record(1e-12);
  r.record(5e-10);
  r.finalize();
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.samples, 2);
  EXPECT_DOUBLE_EQ(r.max_residual, 5e-10);
  r.record(std::nan(""));
  r.record(0.0);
  r.finalize();
  EXPECT_FALSE(r.pass);
}

TEST(YBE, SingleInstances) {
  const auto m = make_da_model(2);
  YBEInstance all_ones{{0.1, 0.3}, {{-0.2, 0.1}, {0.5, 0.0}}, {{0.3, -0.4}, {0.0, 0.6}}};
  EXPECT_LE(ybe_residual(*m, all_ones), 1e-15);
  YBEInstance mixed = all_ones;
  mixed.iota1 = 2;
  mixed.kappa3 = 2;
  EXPECT_LE(ybe_residual(*m, mixed), 1e-14);
  mixed.iota2 = 3;
  EXPECT_THROW(ybe_residual(*m, mixed), IndexRangeError);

  const auto ps = make_ps_model(1, 1, {0.5, 0.3});
  YBEInstance p{{{0.1, 0.2}, {}}, {{-0.3, 0.1}, {}}, {{0.2, -0.2}, {}}, 1, 3, 2, 2, 3, 1};
  EXPECT_LE(ybe_residual(*ps, p), 1e-14);
}

TEST(YBE, BuiltinModelsPass) {
  for (int N = 2; N <= 4; ++N) {
    const auto r = check_ybe(ModelUnderTest::da(N), quick(3));
    EXPECT_TRUE(r.pass) << r.model << " " << r.max_residual;
  }
  const auto r = check_ybe(ModelUnderTest::ps(2, 1, {0.7, 0.2}), quick(3));
  EXPECT_TRUE(r.pass) << r.max_residual;
  EXPECT_EQ(r.samples, 3);
}

TEST(Properties, DegreesZerosRecursionInitialCondition) {
  for (const auto& m : {ModelUnderTest::da(3), ModelUnderTest::ps(1, 0, {0.5, -0.1})}) {
    for (int L = 1; L <= 3; ++L) {
      const auto p1 = check_property1(m, L, quick());
      EXPECT_TRUE(p1.pass) << m.describe() << " L=" << L << " " << p1.max_residual;
      if (L < 2) continue;
      EXPECT_TRUE(check_property2_zeros(m, L, quick()).pass) << m.describe() << " L=" << L;
      EXPECT_TRUE(check_property2_permutation(m, L, quick()).pass) << m.describe() << " L=" << L;
      EXPECT_TRUE(check_property3_recursion(m, L, quick()).pass) << m.describe() << " L=" << L;
    }
    EXPECT_TRUE(check_property4(m, quick()).pass);
  }
  EXPECT_THROW(check_property3_recursion(ModelUnderTest::da(2), 1), PreconditionError);
}

TEST(Properties, WrongDegreeIsCaught) {
  // X^{1,2}_{1,2} carries the only factor of x that survives on the first row.
  auto table = std::make_shared<const DAWeightTable>(
      perturbed_table(da_builtin_table(2), VertexIndex{1, 2, 1, 2}, 0.0, 1.0));
  const auto r = check_property1(ModelUnderTest::da(table), 2, quick());
  EXPECT_FALSE(r.pass);
}

TEST(Factorization, AndEngines) {
  const auto m = ModelUnderTest::da(4);
  EXPECT_TRUE(check_factorization(m, 2, quick()).pass);
  EXPECT_TRUE(check_engines(m, 2, quick()).pass);
  EXPECT_THROW(check_engines(ModelUnderTest::ps(2, 1, 0.5), 3, quick(1)), CapacityError);
}

TEST(RsIndependence, GradingsAndBoundaries) {
  const auto r = check_rs_independence({{0, 0}, {1, 1}, {0, 1}, {2, 1}}, 2, {0.6, 0.2}, quick(3));
  EXPECT_TRUE(r.pass) << r.max_residual;
  // (0,0) once, (1,1): 2 x 2, (0,1): 2 x 1, (2,1): 2 x 3
  EXPECT_EQ(r.notes.front(), "13 (grading, boundary) pairs per draw");
}

TEST(Determinism, SameSeedSameReport) {
  const auto m = ModelUnderTest::da(3);
  const auto a = check_factorization(m, 2, quick());
  const auto b = check_factorization(m, 2, quick());
  EXPECT_EQ(a.max_residual, b.max_residual);
  EXPECT_EQ(a.mean_residual, b.mean_residual);
  CheckOptions other = quick();
  other.seed = 7;
  EXPECT_NE(check_factorization(m, 2, other).mean_residual, a.mean_residual);
}

TEST(Sampler, BranchSafeFields) {
  ParameterSampler s(123, "fields");
  for (int i = 0; i < 1000; ++i) {
    const CScalar a = s.field();
    EXPECT_GE(std::abs(a), 0.3);
    EXPECT_LE(std::abs(a), 0.9);
    for (int k = 0; k < 4; ++k) {
      EXPECT_GT((1.0 - root_of_unity(1, 4).pow(k) * a * a).real(), 0.18);
    }
  }
}

TEST(Probe, BuiltinTableAsPlugin) {
  const auto native = std::make_shared<const DAWeightTable>(da_builtin_table(3));
  const auto result = run_conjecture_probe(native, 2, quick(3));
  EXPECT_TRUE(result.summary.pass);
  EXPECT_EQ(result.summary.samples, static_cast<int>(result.checks.size()));
}

TEST(Probe, PerturbedTableFailsYBE) {
  const auto base = da_builtin_table(3);
  const auto bad = std::make_shared<const DAWeightTable>(
      perturbed_table(base, {2, 2, 2, 2}, 1.0 + 1e-3, 0.0));
  const auto result = run_conjecture_probe(bad, 2, quick(3));
  EXPECT_FALSE(result.summary.pass);
  EXPECT_FALSE(result.checks.front().pass);
  EXPECT_EQ(result.checks.front().name, "ybe");
}

TEST(Probe, ZeroTableFailsFactorization) {
  const auto zero = std::make_shared<const DAWeightTable>(load_plugin_table(
      std::string(DWPF_DATA_DIR) + "/plugins/da_n5_zero.json"));
  const auto result = run_conjecture_probe(zero, 1, quick(2));
  bool factorization_failed = false;
  for (const auto& c : result.checks) {
    if (c.name == "factorization") factorization_failed = !c.pass;
  }
  EXPECT_TRUE(factorization_failed);
  EXPECT_FALSE(result.summary.pass);
}

TEST(Probe, RequiresLinePermuters) {
  const auto table = std::make_shared<const DAWeightTable>(register_plugin_table(
      R"({"N": 5, "entries": [{"iota1": 1, "iota2": 5, "kappa2": 1, "kappa1": 5, "formula": "x"}]})"));
  EXPECT_THROW(run_conjecture_probe(table, 1), PreconditionError);
}

TEST(Mutation, SinglePerturbationBreaksUniqueness) {
  // Any perturbed N = 2 entry that keeps Properties 1, 2 and 4 but moves Z must break
  // the recursion.
  const auto base = da_builtin_table(2);
  const CheckOptions o = quick(4);
  for (const auto& [idx, formula] : base.entries()) {
    const auto m = ModelUnderTest::da(
        std::make_shared<const DAWeightTable>(perturbed_table(base, idx, 1.0, {0.0, 1e-3})));
    const bool keeps = check_property1(m, 2, o).pass && check_property2_zeros(m, 2, o).pass &&
                       check_property4(m, o).pass;
    const bool moved = !check_factorization(m, 2, o).pass;
    if (keeps && moved) {
      EXPECT_FALSE(check_property3_recursion(m, 2, o).pass) << idx.str();
    }
    EXPECT_FALSE(check_ybe(m, o).pass) << idx.str();
  }
}
