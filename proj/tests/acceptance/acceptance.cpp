// Acceptance criteria 1-10. One PASS/FAIL line per criterion; exit status 0 iff all pass.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "dwpf/errors.hpp"
#include "dwpf/verify.hpp"

using namespace dwpf;

namespace {

constexpr CScalar kEta{0.7, 0.2};

const std::vector<std::pair<int, int>> kGradings = {{0, 0}, {0, 1}, {1, 0}, {1, 1}, {2, 1}};

struct Tally {
  bool pass = true;
  int reports = 0;
  double worst = 0.0;  // largest max_residual / tolerance
  std::string first_failure;

  void add(const VerificationReport& r) {
    ++reports;
    const double ratio = r.tolerance > 0.0 ? r.max_residual / r.tolerance : r.max_residual;
    worst = std::max(worst, ratio);
    if (!r.pass) {
      pass = false;
      if (first_failure.empty()) {
        first_failure = r.name + " " + r.model + " L=" + std::to_string(r.L) +
                        " residual=" + std::to_string(r.max_residual);
      }
    }
  }
};

std::vector<ModelUnderTest> da_models() {
  return {ModelUnderTest::da(2), ModelUnderTest::da(3), ModelUnderTest::da(4)};
}

std::vector<ModelUnderTest> ps_models(const std::vector<std::pair<int, int>>& list) {
  std::vector<ModelUnderTest> out;
  for (const auto& [r, s] : list) out.push_back(ModelUnderTest::ps(r, s, kEta));
  return out;
}

bool report(int id, const char* title, const std::function<Tally()>& body, double budget_s) {
  const auto t0 = std::chrono::steady_clock::now();
  Tally t;
  std::string error;
  try {
    t = body();
  } catch (const std::exception& e) {
    t.pass = false;
    error = e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = budget_s <= 0.0 || secs <= budget_s;
  const bool ok = t.pass && in_time && error.empty();
  std::printf("CRITERION %2d %s: %s | reports=%d worst_residual/tol=%.3g time=%.2fs", id,
              ok ? "PASS" : "FAIL", title, t.reports, t.worst, secs);
  if (budget_s > 0.0) std::printf(" budget=%.0fs", budget_s);
  if (!t.first_failure.empty()) std::printf(" first_failure=[%s]", t.first_failure.c_str());
  if (!error.empty()) std::printf(" error=[%s]", error.c_str());
  if (!in_time) std::printf(" over_budget");
  std::printf("\n");
  std::fflush(stdout);
  return ok;
}

}  // namespace

int main() {
  CheckOptions base;  // seed kDefaultSeed, default sample counts and tolerances
  bool all = true;

  all &= report(1, "Yang-Baxter equation, DA N=2,3,4 and PS gradings", [&] {
    Tally t;
    for (const auto& m : da_models()) t.add(check_ybe(m, base));
    for (const auto& m : ps_models(kGradings)) t.add(check_ybe(m, base));
    return t;
  }, 30.0);

  all &= report(2, "DA product formula against enumeration and contraction", [&] {
    Tally t;
    CheckOptions enumerate = base;
    enumerate.method = LatticeMethod::enumerate;
    for (const auto& m : da_models()) {
      for (int L = 1; L <= 3; ++L) t.add(check_factorization(m, L, enumerate));
    }
    CheckOptions contract = base;
    contract.method = LatticeMethod::contract;
    for (int L = 4; L <= 6; ++L) t.add(check_factorization(ModelUnderTest::da(2), L, contract));
    return t;
  }, 120.0);

  all &= report(3, "PS product formula against contraction", [&] {
    Tally t;
    CheckOptions contract = base;
    contract.method = LatticeMethod::contract;
    for (const auto& m : ps_models({{0, 0}, {0, 1}, {1, 0}, {1, 1}})) {
      for (int L = 1; L <= 4; ++L) t.add(check_factorization(m, L, contract));
    }
    return t;
  }, 120.0);

  all &= report(4, "Property 1 degrees", [&] {
    Tally t;
    CheckOptions contract = base;
    contract.method = LatticeMethod::contract;
    for (const auto& m : da_models()) {
      const int L_max = m.N() == 2 ? 4 : 3;
      for (int L = 1; L <= L_max; ++L) t.add(check_property1(m, L, contract));
    }
    for (const auto& m : ps_models(kGradings)) {
      for (int L = 1; L <= 3; ++L) t.add(check_property1(m, L, contract));
    }
    return t;
  }, 0.0);

  all &= report(5, "Property 2 zeros", [&] {
    Tally t;
    for (const auto& m : da_models()) {
      for (int L = 2; L <= 3; ++L) t.add(check_property2_zeros(m, L, base));
    }
    for (const auto& m : ps_models(kGradings)) {
      for (int L = 2; L <= 3; ++L) t.add(check_property2_zeros(m, L, base));
    }
    return t;
  }, 0.0);

  all &= report(6, "Property 3 recursions from the lattice engine", [&] {
    Tally t;
    CheckOptions contract = base;
    contract.method = LatticeMethod::contract;
    for (const auto& m : da_models()) {
      for (int L = 2; L <= 3; ++L) t.add(check_property3_recursion(m, L, contract));
    }
    for (const auto& m : ps_models(kGradings)) {
      for (int L = 2; L <= 3; ++L) t.add(check_property3_recursion(m, L, contract));
    }
    return t;
  }, 0.0);

  all &= report(7, "(r,s)-independence and boundary choice", [&] {
    Tally t;
    for (int L = 2; L <= 3; ++L) t.add(check_rs_independence(kGradings, L, kEta, base));
    return t;
  }, 0.0);

  all &= report(8, "contraction against enumeration", [&] {
    Tally t;
    std::vector<ModelUnderTest> models = da_models();
    for (auto& m : ps_models(kGradings)) models.push_back(m);
    for (const auto& m : models) {
      for (int L = 1; L <= 3; ++L) {
        // Only combinations within the enumeration cap are feasible.
        if (interior_assignment_count(m.N(), L) > base.engine.enumeration_cap) continue;
        t.add(check_engines(m, L, base));
      }
    }
    return t;
  }, 0.0);

  all &= report(9, "single-weight perturbations of N=2 are detected", [&] {
    Tally t;
    const auto table = da_builtin_table(2);
    std::vector<VertexIndex> entries;
    for (const auto& [idx, f] : table.entries()) entries.push_back(idx);
    ParameterSampler pick(base.seed, "mutation-targets");
    CheckOptions quick = base;
    quick.trials = 10;
    for (int target = 0; target < 10; ++target) {
      const VertexIndex idx = entries[static_cast<std::size_t>(
          pick.integer(0, static_cast<int>(entries.size()) - 1))];
      const int kind = pick.integer(0, 2);
      const CScalar scale = kind == 0 ? CScalar{1.0 + 1e-3} : CScalar{1.0};
      const CScalar shift = kind == 1 ? CScalar{1e-3} : kind == 2 ? CScalar{0.0, 1e-3} : CScalar{};
      const auto m = ModelUnderTest::da(
          std::make_shared<const DAWeightTable>(perturbed_table(table, idx, scale, shift)));
      const bool detected = !check_ybe(m, quick).pass || !check_factorization(m, 2, quick).pass ||
                            !check_property3_recursion(m, 2, quick).pass;
      VerificationReport r;
      r.name = "mutation";
      r.model = idx.str() + " kind=" + std::to_string(kind);
      r.tolerance = 0.0;
      r.record(detected ? 0.0 : 1.0);
      r.finalize();
      t.add(r);
    }
    return t;
  }, 0.0);

  all &= report(10, "N=3 table through the plugin path matches the native path", [&] {
    Tally t;
    const auto native = ModelUnderTest::da(3);
    const auto plugin = ModelUnderTest::da(std::make_shared<const DAWeightTable>(
        load_plugin_table(std::string(DWPF_DATA_DIR) + "/plugins/da_n3.json")));
    auto suite = [&](const ModelUnderTest& m) {
      std::vector<VerificationReport> out;
      out.push_back(check_ybe(m, base));
      out.push_back(check_property4(m, base));
      for (int L = 1; L <= 3; ++L) {
        out.push_back(check_property1(m, L, base));
        out.push_back(check_factorization(m, L, base));
        out.push_back(check_engines(m, L, base));
        if (L >= 2) {
          out.push_back(check_property2_zeros(m, L, base));
          out.push_back(check_property2_permutation(m, L, base));
          out.push_back(check_property3_recursion(m, L, base));
        }
      }
      return out;
    };
    const auto a = suite(native);
    const auto b = suite(plugin);
    for (std::size_t i = 0; i < a.size(); ++i) {
      t.add(a[i]);
      t.add(b[i]);
      // Same draws, so the two residuals differ only by rounding.
      VerificationReport same;
      same.name = "native-vs-plugin " + a[i].name;
      same.model = b[i].model;
      same.L = a[i].L;
      same.tolerance = std::max(a[i].tolerance, 1e-12);
      same.record(a[i].pass == b[i].pass && a[i].samples == b[i].samples
                      ? std::abs(a[i].max_residual - b[i].max_residual)
                      : 1.0);
      same.finalize();
      t.add(same);
    }
    return t;
  }, 0.0);

  std::printf("ACCEPTANCE %s\n", all ? "PASS" : "FAIL");
  return all ? 0 : 1;
}
