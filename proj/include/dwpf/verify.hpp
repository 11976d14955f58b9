#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "dwpf/closed_form.hpp"
#include "dwpf/da_weights.hpp"
#include "dwpf/lattice_engine.hpp"
#include "dwpf/ps_weights.hpp"

namespace dwpf {

inline constexpr std::uint64_t kDefaultSeed = 20240531;
inline constexpr int kYbeSamples = 100;
inline constexpr int kDwpfSamples = 25;

struct VerificationReport {
  std::string name;
  std::string model;
  int L = 0;
  int samples = 0;
  std::uint64_t seed = 0;
  double max_residual = 0.0;
  double mean_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::vector<std::string> notes;

  void record(double residual);
  /// Sets the mean and the pass flag; call once all residuals are recorded.
  void finalize();

 private:
  double residual_sum_ = 0.0;
};

/// A DA table (built-in or plugin) or a PS model, with what each check needs from it.
class ModelUnderTest {
 public:
  static ModelUnderTest da(std::shared_ptr<const DAWeightTable> table);
  static ModelUnderTest da(int N, int n = 1);
  static ModelUnderTest ps(int r, int s, CScalar eta);

  [[nodiscard]] bool is_da() const { return table_ != nullptr; }
  [[nodiscard]] int N() const { return model_->states(); }
  [[nodiscard]] const ModelPtr& model() const { return model_; }
  [[nodiscard]] std::string describe() const { return model_->describe(); }

  /// Throws PreconditionError on a PS model.
  [[nodiscard]] const DAWeightTable& da_table() const;
  /// Throws PreconditionError on a DA model.
  [[nodiscard]] const PSWeightTable& ps_table() const;

  [[nodiscard]] LatticeSpec lattice(ModelParams params) const { return {model_, std::move(params)}; }
  [[nodiscard]] FactorizedValue factorized(const ModelParams& params) const;
  [[nodiscard]] ModelParams at_recursion_point(const ModelParams& params) const;
  [[nodiscard]] CScalar recursion_rhs(const ModelParams& params, CScalar reduced_Z) const;
  /// Z for L = 1 as given by the c+ vertex.
  [[nodiscard]] CScalar c_plus(const LineParams& vertical, const LineParams& horizontal) const;

 private:
  std::shared_ptr<const DAWeightTable> table_;
  std::shared_ptr<const PSWeightTable> ps_;
  ModelPtr model_;
};

/// Draws rapidities with real and imaginary parts in [-0.5, 0.5] and external fields with
/// modulus in [0.3, 0.9]. Every radicand 1 - rho^k field^2 then has real part >= 0.19, so
/// no square root comes near its branch cut.
class ParameterSampler {
 public:
  explicit ParameterSampler(std::uint64_t seed) : engine_(seed) {}
  ParameterSampler(std::uint64_t seed, std::string_view stream);

  CScalar rapidity();
  CScalar field();
  LineParams line(bool with_field);
  ModelParams draw(int L, bool with_fields);
  int state(int N);
  int integer(int lo, int hi);

 private:
  double uniform(double lo, double hi);
  std::mt19937_64 engine_;
};

enum class LatticeMethod { automatic, enumerate, contract };

struct CheckOptions {
  std::uint64_t seed = kDefaultSeed;
  /// Random draws per check; 0 selects the check's default.
  int trials = 0;
  TolerancePolicy policy{};
  double ybe_tolerance = 1e-10;
  double zero_tolerance = 1e-8;
  EngineOptions engine{};
  LatticeMethod method = LatticeMethod::automatic;
};

/// DWPF with domain wall boundary, by the requested method. `automatic` enumerates when the
/// configuration count is within the cap and contracts otherwise.
CScalar lattice_dwpf(const LatticeSpec& spec, const CheckOptions& options);

struct YBEInstance {
  LineParams first;   // (u, alpha)
  LineParams second;  // (v, beta)
  LineParams third;   // (w, gamma)
  int iota1 = 1, iota2 = 1, iota3 = 1;
  int kappa1 = 1, kappa2 = 1, kappa3 = 1;
};

/// |LHS - RHS| / (largest single term), 0 when every term vanishes. Throws IndexRangeError.
double ybe_residual(const VertexModel& model, const YBEInstance& instance);

/// Each draw samples three lines and tests every one of the N^6 external index tuples.
VerificationReport check_ybe(const ModelUnderTest& m, const CheckOptions& options = {});

/// Z e^{-(N-1) u_1} has degree (L-1)(N-1) in e^{u_1} (DA), Z U_1^{L-2} is even in U_1 = e^{eta u_1}
/// and of degree L-1 in U_1^2 (PS). Residual: the largest coefficient beyond the bound relative to
/// the largest coefficient, or 1 when the top coefficient vanishes.
VerificationReport check_property1(const ModelUnderTest& m, int L, const CheckOptions& options = {});

/// |Z| / (largest configuration term) at each zero: e^{u_1} = e^{u_k} / (rho^j alpha_1 alpha_k)
/// for DA, u_1 = u_k + 1 for PS.
VerificationReport check_property2_zeros(const ModelUnderTest& m, int L,
                                         const CheckOptions& options = {});

/// Z(u_1, ..., u_L) prod_k a-(1, k) = prod_k a+(1, k) Z(u_2, ..., u_L, u_1), relative.
VerificationReport check_property2_permutation(const ModelUnderTest& m, int L,
                                               const CheckOptions& options = {});

/// Lattice Z at the recursion point against the recursion applied to the lattice reduced Z.
VerificationReport check_property3_recursion(const ModelUnderTest& m, int L,
                                             const CheckOptions& options = {});

/// Z for L = 1 from the engine against the c+ formula.
VerificationReport check_property4(const ModelUnderTest& m, const CheckOptions& options = {});

/// Product formula against the lattice engine.
VerificationReport check_factorization(const ModelUnderTest& m, int L,
                                       const CheckOptions& options = {});

/// Contraction against enumeration. Throws CapacityError when enumeration is out of reach.
VerificationReport check_engines(const ModelUnderTest& m, int L, const CheckOptions& options = {});

/// PS DWPF across the listed gradings and across boundaries (sigma-, sigma+) in B- x B+, all
/// compared with the first grading's DWBC value.
VerificationReport check_rs_independence(const std::vector<std::pair<int, int>>& rs_list, int L,
                                         CScalar eta, const CheckOptions& options = {});

struct ProbeResult {
  std::vector<VerificationReport> checks;
  /// Residual is the worst max_residual / tolerance over `checks`; tolerance 1.
  VerificationReport summary;
};

/// YBE, Properties 1 to 4 and the product formula with the table's N, for L = 1..L_max.
/// Passing checks are evidence for the product formula at this N, not a proof.
/// Throws PreconditionError when the c+, a+ or a- entry is missing.
ProbeResult run_conjecture_probe(std::shared_ptr<const DAWeightTable> table, int L_max,
                                 const CheckOptions& options = {});

/// Copy of `table` with entry `target` replaced by scale * X + shift. Missing entries count as 0.
DAWeightTable perturbed_table(const DAWeightTable& table, const VertexIndex& target, CScalar scale,
                              CScalar shift);

}  // namespace dwpf
