#include "dwpf/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dwpf/errors.hpp"

namespace dwpf {

void VerificationReport::record(double residual) {
  ++samples;
  residual_sum_ += residual;
  // a NaN sticks
  if (!std::isnan(max_residual) && (std::isnan(residual) || residual > max_residual)) {
    max_residual = residual;
  }
}

void VerificationReport::finalize() {
  mean_residual = samples > 0 ? residual_sum_ / samples : 0.0;
  pass = !std::isnan(max_residual) && max_residual <= tolerance;
}

ModelUnderTest ModelUnderTest::da(std::shared_ptr<const DAWeightTable> table) {
  if (!table) throw PreconditionError("null DA table");
  ModelUnderTest m;
  m.model_ = std::make_shared<DAModel>(table);
  m.table_ = std::move(table);
  return m;
}

ModelUnderTest ModelUnderTest::da(int N, int n) {
  return da(std::make_shared<const DAWeightTable>(da_builtin_table(N, n)));
}

ModelUnderTest ModelUnderTest::ps(int r, int s, CScalar eta) {
  ModelUnderTest m;
  m.ps_ = std::make_shared<const PSWeightTable>(GradedStateSpace{r, s}, eta);
  m.model_ = std::make_shared<PSModel>(*m.ps_);
  return m;
}

const DAWeightTable& ModelUnderTest::da_table() const {
  if (!table_) throw PreconditionError("not a DA model: " + describe());
  return *table_;
}

const PSWeightTable& ModelUnderTest::ps_table() const {
  if (!ps_) throw PreconditionError("not a PS model: " + describe());
  return *ps_;
}

FactorizedValue ModelUnderTest::factorized(const ModelParams& params) const {
  if (is_da()) return dwpf_factorized_da(params, table_->rho());
  return dwpf_factorized_ps(params, ps_->eta());
}

ModelParams ModelUnderTest::at_recursion_point(const ModelParams& params) const {
  return is_da() ? at_da_recursion_point(params) : at_ps_recursion_point(params);
}

CScalar ModelUnderTest::recursion_rhs(const ModelParams& params, CScalar reduced_Z) const {
  if (is_da()) return da_recursion_rhs(params, table_->rho(), reduced_Z);
  return ps_recursion_rhs(params, ps_->eta(), reduced_Z);
}

CScalar ModelUnderTest::c_plus(const LineParams& vertical, const LineParams& horizontal) const {
  ModelParams p{{vertical.rapidity}, {horizontal.rapidity}, {vertical.field}, {horizontal.field}};
  return factorized(p).value;
}

namespace {

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

ParameterSampler::ParameterSampler(std::uint64_t seed, std::string_view stream) {
  const std::uint64_t tag = fnv1a(stream);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(tag >> 32)};
  engine_.seed(seq);
}

double ParameterSampler::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

CScalar ParameterSampler::rapidity() { return {uniform(-0.5, 0.5), uniform(-0.5, 0.5)}; }

CScalar ParameterSampler::field() {
  return std::polar(uniform(0.3, 0.9), uniform(-std::numbers::pi, std::numbers::pi));
}

LineParams ParameterSampler::line(bool with_field) {
  const CScalar u = rapidity();
  return {u, with_field ? field() : CScalar{}};
}

ModelParams ParameterSampler::draw(int L, bool with_fields) {
  ModelParams p;
  for (int i = 0; i < L; ++i) p.u.push_back(rapidity());
  for (int j = 0; j < L; ++j) p.v.push_back(rapidity());
  if (with_fields) {
    for (int i = 0; i < L; ++i) p.alpha.push_back(field());
    for (int j = 0; j < L; ++j) p.beta.push_back(field());
  }
  return p;
}

int ParameterSampler::state(int N) { return integer(1, N); }

int ParameterSampler::integer(int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(engine_);
}

CScalar lattice_dwpf(const LatticeSpec& spec, const CheckOptions& options) {
  const auto bc = BoundaryCondition::domain_wall(spec.L(), spec.N());
  switch (options.method) {
    case LatticeMethod::enumerate:
      return dwpf_enumerate(spec, bc, options.engine);
    case LatticeMethod::contract:
      return dwpf_contract(spec, bc, options.engine);
    case LatticeMethod::automatic:
      break;
  }
  if (interior_assignment_count(spec.N(), spec.L()) <= options.engine.enumeration_cap) {
    return dwpf_enumerate(spec, bc, options.engine);
  }
  return dwpf_contract(spec, bc, options.engine);
}

namespace {

// Dense vertex tensor, index ((iota1 * N + iota2) * N + kappa2) * N + kappa1, 0-based.
std::vector<CScalar> vertex_tensor(const VertexModel& model, const LineParams& vertical,
                                   const LineParams& horizontal) {
  const int N = model.states();
  std::vector<CScalar> t(static_cast<std::size_t>(N * N * N * N));
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b)
      for (int c = 0; c < N; ++c)
        for (int d = 0; d < N; ++d) {
          const VertexIndex idx{a + 1, b + 1, c + 1, d + 1};
          if (model.has_entry(idx)) {
            t[static_cast<std::size_t>(((a * N + b) * N + c) * N + d)] =
                model.weight(idx, vertical, horizontal);
          }
        }
  return t;
}

struct YBETensors {
  int N;
  std::vector<CScalar> uv, uw, vw;

  [[nodiscard]] CScalar at(const std::vector<CScalar>& t, int i1, int i2, int k2, int k1) const {
    return t[static_cast<std::size_t>(((i1 * N + i2) * N + k2) * N + k1)];
  }

  // All indices 0-based.
  [[nodiscard]] double residual(int i1, int i2, int i3, int k1, int k2, int k3) const {
    CScalar lhs{}, rhs{};
    double largest = 0.0;
    for (int l1 = 0; l1 < N; ++l1)
      for (int l2 = 0; l2 < N; ++l2)
        for (int l3 = 0; l3 < N; ++l3) {
          const CScalar left = at(uv, i1, i2, l2, l1) * at(uw, l1, i3, l3, k1) *
                               at(vw, l2, l3, k3, k2);
          const CScalar right = at(vw, i2, i3, l3, l2) * at(uw, i1, l3, k3, l1) *
                                at(uv, l1, l2, k2, k1);
          lhs += left;
          rhs += right;
          largest = std::max({largest, std::abs(left), std::abs(right)});
        }
    return largest == 0.0 ? 0.0 : std::abs(lhs - rhs) / largest;
  }
};

YBETensors ybe_tensors(const VertexModel& model, const LineParams& a, const LineParams& b,
                       const LineParams& c) {
  return {model.states(), vertex_tensor(model, a, b), vertex_tensor(model, a, c),
          vertex_tensor(model, b, c)};
}

VerificationReport start(std::string name, const ModelUnderTest& m, int L, double tolerance,
                         const CheckOptions& options) {
  VerificationReport r;
  r.name = std::move(name);
  r.model = m.describe();
  r.L = L;
  r.seed = options.seed;
  r.tolerance = tolerance;
  return r;
}

// Keyed on the model's states rather than its origin, so a plugin copy of a built-in table
// sees the same draws.
ParameterSampler sampler_for(const VerificationReport& r, const ModelUnderTest& m,
                             const CheckOptions& options) {
  std::string key = r.name + "|L=" + std::to_string(r.L) + "|";
  if (m.is_da()) {
    key += "da:" + std::to_string(m.N()) + ":" + std::to_string(m.da_table().rho().n);
  } else {
    key += m.describe();
  }
  return ParameterSampler(options.seed, key);
}

int trials_or(const CheckOptions& options, int fallback) {
  return options.trials > 0 ? options.trials : fallback;
}

void require_L(int L, int min_L) {
  if (L < min_L) throw PreconditionError("check needs L >= " + std::to_string(min_L));
}

// Geometric mean of the moduli, 1 for an empty list.
double geometric_mean(const std::vector<double>& moduli) {
  if (moduli.empty()) return 1.0;
  double log_sum = 0.0;
  for (double m : moduli) log_sum += std::log(m);
  return std::exp(log_sum / static_cast<double>(moduli.size()));
}

}  // namespace

double ybe_residual(const VertexModel& model, const YBEInstance& in) {
  const int N = model.states();
  for (int s : {in.iota1, in.iota2, in.iota3, in.kappa1, in.kappa2, in.kappa3}) {
    if (s < 1 || s > N) throw IndexRangeError("YBE external index out of range");
  }
  const auto t = ybe_tensors(model, in.first, in.second, in.third);
  return t.residual(in.iota1 - 1, in.iota2 - 1, in.iota3 - 1, in.kappa1 - 1, in.kappa2 - 1,
                    in.kappa3 - 1);
}

VerificationReport check_ybe(const ModelUnderTest& m, const CheckOptions& options) {
  auto report = start("ybe", m, 0, options.ybe_tolerance, options);
  auto sampler = sampler_for(report, m, options);
  const int N = m.N();
  const int trials = trials_or(options, kYbeSamples);
  for (int t = 0; t < trials; ++t) {
    const auto a = sampler.line(m.is_da());
    const auto b = sampler.line(m.is_da());
    const auto c = sampler.line(m.is_da());
    const auto tensors = ybe_tensors(*m.model(), a, b, c);
    double worst = 0.0;
    for (int i1 = 0; i1 < N; ++i1)
      for (int i2 = 0; i2 < N; ++i2)
        for (int i3 = 0; i3 < N; ++i3)
          for (int k1 = 0; k1 < N; ++k1)
            for (int k2 = 0; k2 < N; ++k2)
              for (int k3 = 0; k3 < N; ++k3) {
                worst = std::max(worst, tensors.residual(i1, i2, i3, k1, k2, k3));
              }
    report.record(worst);
  }
  report.notes.push_back("every external index tuple tested per draw");
  report.finalize();
  return report;
}

VerificationReport check_property1(const ModelUnderTest& m, int L, const CheckOptions& options) {
  require_L(L, 1);
  auto report = start("prop1", m, L, options.policy.rel_tol, options);
  auto sampler = sampler_for(report, m, options);
  const int N = m.N();
  const int bound = m.is_da() ? (L - 1) * (N - 1) : L - 1;
  const int count = bound + 4;
  const int trials = trials_or(options, kDwpfSamples);
  double weakest_top = 1.0;
  for (int t = 0; t < trials; ++t) {
    ModelParams p = sampler.draw(L, m.is_da());
    // Ring through the typical modulus of the zeros keeps the coefficients balanced.
    std::vector<double> moduli;
    for (int k = 1; k < L; ++k) {
      if (m.is_da()) {
        moduli.push_back(std::exp(p.u[k].real()) / std::abs(p.alpha[0] * p.alpha[k]));
      } else {
        moduli.push_back(std::abs(std::exp(2.0 * m.ps_table().eta() * (p.u[k] + 1.0))));
      }
    }
    const double radius = geometric_mean(moduli);
    const double phase = sampler.integer(0, 1 << 20) * 1e-6;
    std::vector<Sample> samples;
    double odd_part = 0.0;
    for (const CScalar node : ring_nodes(count, 1.0, phase)) {
      const CScalar z = node * radius;
      if (m.is_da()) {
        p.u[0] = std::log(z);
        const CScalar value = lattice_dwpf(m.lattice(p), options) * std::pow(z, -(N - 1));
        samples.push_back({node, value});
      } else {
        const CScalar eta = m.ps_table().eta();
        const CScalar U = principal_sqrt(z);
        p.u[0] = std::log(U) / eta;
        const CScalar plus = lattice_dwpf(m.lattice(p), options) * std::pow(U, L - 2);
        p.u[0] = std::log(-U) / eta;
        const CScalar minus = lattice_dwpf(m.lattice(p), options) * std::pow(-U, L - 2);
        odd_part = std::max(odd_part, std::abs(plus - minus) / std::max(std::abs(plus), 1e-300));
        samples.push_back({node, plus});
      }
    }
    const auto coeffs = interpolate_coefficients(samples);
    double largest = 0.0;
    for (const auto& c : coeffs) largest = std::max(largest, std::abs(c));
    double tail = 0.0;
    for (std::size_t k = static_cast<std::size_t>(bound) + 1; k < coeffs.size(); ++k) {
      tail = std::max(tail, std::abs(coeffs[k]));
    }
    const double top = largest > 0.0 ? std::abs(coeffs[static_cast<std::size_t>(bound)]) / largest
                                     : 0.0;
    weakest_top = std::min(weakest_top, top);
    double residual = largest > 0.0 ? tail / largest : 0.0;
    if (top <= options.policy.rel_tol) residual = std::max(residual, 1.0);
    report.record(std::max(residual, odd_part));
  }
  report.notes.push_back("expected degree " + std::to_string(bound) +
                         (m.is_da() ? " in e^{u_1}" : " in U_1^2"));
  if (weakest_top < 1e-6) {
    report.notes.push_back("ill-conditioned: leading coefficient ratio " +
                           std::to_string(weakest_top));
  }
  report.finalize();
  return report;
}

VerificationReport check_property2_zeros(const ModelUnderTest& m, int L,
                                         const CheckOptions& options) {
  require_L(L, 2);
  auto report = start("prop2-zeros", m, L, options.zero_tolerance, options);
  auto sampler = sampler_for(report, m, options);
  const int N = m.N();
  const auto bc = BoundaryCondition::domain_wall(L, N);
  const int trials = trials_or(options, kDwpfSamples);
  for (int t = 0; t < trials; ++t) {
    const ModelParams base = sampler.draw(L, m.is_da());
    std::vector<CScalar> points;
    for (int k = 1; k < L; ++k) {
      if (m.is_da()) {
        const RootOfUnity& rho = m.da_table().rho();
        for (int j = 0; j <= N - 2; ++j) {
          points.push_back(base.u[k] - std::log(rho.pow(j) * base.alpha[0] * base.alpha[k]));
        }
      } else {
        points.push_back(base.u[k] + 1.0);
      }
    }
    double worst = 0.0;
    for (const CScalar u1 : points) {
      ModelParams p = base;
      p.u[0] = u1;
      const auto spec = m.lattice(p);
      const CScalar z = dwpf_contract(spec, bc, options.engine);
      const double scale = max_configuration_term(spec, bc, options.engine);
      worst = std::max(worst, scale == 0.0 ? 0.0 : std::abs(z) / scale);
    }
    report.record(worst);
  }
  report.notes.push_back(std::to_string(m.is_da() ? (L - 1) * (N - 1) : L - 1) +
                         " zeros per draw, scaled by the largest configuration term");
  report.finalize();
  return report;
}

VerificationReport check_property2_permutation(const ModelUnderTest& m, int L,
                                               const CheckOptions& options) {
  require_L(L, 2);
  auto report = start("prop2-permutation", m, L, options.policy.rel_tol, options);
  auto sampler = sampler_for(report, m, options);
  const int N = m.N();
  std::vector<int> rotation(static_cast<std::size_t>(L));
  for (int k = 0; k < L; ++k) rotation[static_cast<std::size_t>(k)] = (k + 1) % L;
  const int trials = trials_or(options, kDwpfSamples);
  for (int t = 0; t < trials; ++t) {
    const ModelParams p = sampler.draw(L, m.is_da());
    const auto spec = m.lattice(p);
    CScalar lhs = dwpf_contract(spec, BoundaryCondition::domain_wall(L, N), options.engine);
    CScalar rhs = dwpf_with_permuted_columns(spec, rotation, options.engine);
    for (int k = 1; k < L; ++k) {
      lhs *= m.model()->weight(a_minus_index(N), p.vertical(0), p.vertical(k));
      rhs *= m.model()->weight(a_plus_index(), p.vertical(0), p.vertical(k));
    }
    report.record(relative_difference(lhs, rhs));
  }
  report.notes.push_back("first vertical line moved to the right edge");
  report.finalize();
  return report;
}

VerificationReport check_property3_recursion(const ModelUnderTest& m, int L,
                                             const CheckOptions& options) {
  require_L(L, 2);
  auto report = start("prop3", m, L, options.policy.rel_tol, options);
  auto sampler = sampler_for(report, m, options);
  const int trials = trials_or(options, kDwpfSamples);
  for (int t = 0; t < trials; ++t) {
    const ModelParams p = m.at_recursion_point(sampler.draw(L, m.is_da()));
    const CScalar z = lattice_dwpf(m.lattice(p), options);
    const CScalar reduced = lattice_dwpf(m.lattice(reduce_params(p)), options);
    report.record(relative_difference(z, m.recursion_rhs(p, reduced)));
  }
  report.finalize();
  return report;
}

VerificationReport check_property4(const ModelUnderTest& m, const CheckOptions& options) {
  auto report = start("prop4", m, 1, options.policy.rel_tol, options);
  auto sampler = sampler_for(report, m, options);
  const int N = m.N();
  const int trials = trials_or(options, kDwpfSamples);
  for (int t = 0; t < trials; ++t) {
    const ModelParams p = sampler.draw(1, m.is_da());
    const CScalar z = lattice_dwpf(m.lattice(p), options);
    const CScalar formula = m.c_plus(p.vertical(0), p.horizontal(0));
    const CScalar entry = m.model()->weight(c_plus_index(N), p.vertical(0), p.horizontal(0));
    report.record(std::max(relative_difference(z, formula), relative_difference(z, entry)));
  }
  report.finalize();
  return report;
}

VerificationReport check_factorization(const ModelUnderTest& m, int L,
                                       const CheckOptions& options) {
  require_L(L, 1);
  auto report = start("factorization", m, L, options.policy.rel_tol, options);
  auto sampler = sampler_for(report, m, options);
  const int trials = trials_or(options, kDwpfSamples);
  for (int t = 0; t < trials; ++t) {
    const ModelParams p = sampler.draw(L, m.is_da());
    report.record(relative_difference(lattice_dwpf(m.lattice(p), options), m.factorized(p).value));
  }
  report.finalize();
  return report;
}

VerificationReport check_engines(const ModelUnderTest& m, int L, const CheckOptions& options) {
  require_L(L, 1);
  auto report = start("engines", m, L, options.policy.rel_tol, options);
  auto sampler = sampler_for(report, m, options);
  const auto bc = BoundaryCondition::domain_wall(L, m.N());
  const int trials = trials_or(options, kDwpfSamples);
  for (int t = 0; t < trials; ++t) {
    const auto spec = m.lattice(sampler.draw(L, m.is_da()));
    report.record(relative_difference(dwpf_enumerate(spec, bc, options.engine),
                                      dwpf_contract(spec, bc, options.engine)));
  }
  report.finalize();
  return report;
}

VerificationReport check_rs_independence(const std::vector<std::pair<int, int>>& rs_list, int L,
                                         CScalar eta, const CheckOptions& options) {
  require_L(L, 1);
  if (rs_list.empty()) throw PreconditionError("empty (r, s) list");
  std::vector<ModelUnderTest> models;
  std::string label = "ps{";
  for (const auto& [r, s] : rs_list) {
    models.push_back(ModelUnderTest::ps(r, s, eta));
    label += "(" + std::to_string(r) + "," + std::to_string(s) + ")";
  }
  label += "}";
  VerificationReport report;
  report.name = "rs-independence";
  report.model = label;
  report.L = L;
  report.seed = options.seed;
  report.tolerance = options.policy.rel_tol;
  ParameterSampler sampler(options.seed, report.name + "|" + label + "|L=" + std::to_string(L));
  const int trials = trials_or(options, kDwpfSamples);
  int boundaries = 0;
  for (int t = 0; t < trials; ++t) {
    const ModelParams p = sampler.draw(L, false);
    const CScalar reference = dwpf_contract(models.front().lattice(p),
                                            BoundaryCondition::domain_wall(L, models.front().N()),
                                            options.engine);
    double worst = 0.0;
    boundaries = 0;
    for (const auto& m : models) {
      const auto& space = m.ps_table().space();
      for (int low = 1; low <= space.s + 1; ++low) {
        for (int high = space.s + 2; high <= space.N(); ++high) {
          const CScalar z = dwpf_contract(m.lattice(p), BoundaryCondition::uniform(L, low, high),
                                          options.engine);
          worst = std::max(worst, relative_difference(reference, z));
          ++boundaries;
        }
      }
    }
    report.record(worst);
  }
  report.notes.push_back(std::to_string(boundaries) + " (grading, boundary) pairs per draw");
  report.finalize();
  return report;
}

ProbeResult run_conjecture_probe(std::shared_ptr<const DAWeightTable> table, int L_max,
                                 const CheckOptions& options) {
  if (!table) throw PreconditionError("null table");
  const int N = table->N();
  for (const auto& idx : {c_plus_index(N), a_plus_index(), a_minus_index(N)}) {
    if (!table->has(idx)) {
      throw PreconditionError("plugin table lacks required entry " + idx.str());
    }
  }
  require_L(L_max, 1);
  const auto m = ModelUnderTest::da(table);
  ProbeResult out;
  out.checks.push_back(check_ybe(m, options));
  out.checks.push_back(check_property4(m, options));
  for (int L = 1; L <= L_max; ++L) {
    out.checks.push_back(check_property1(m, L, options));
    if (L >= 2) {
      out.checks.push_back(check_property2_zeros(m, L, options));
      out.checks.push_back(check_property2_permutation(m, L, options));
      out.checks.push_back(check_property3_recursion(m, L, options));
    }
    out.checks.push_back(check_factorization(m, L, options));
  }

  auto& s = out.summary;
  s.name = "conjecture-probe";
  s.model = m.describe();
  s.L = L_max;
  s.seed = options.seed;
  s.tolerance = 1.0;
  for (const auto& c : out.checks) {
    s.record(c.tolerance > 0.0 ? c.max_residual / c.tolerance : c.max_residual);
    if (!c.pass) s.notes.push_back("failed: " + c.name + " L=" + std::to_string(c.L));
  }
  s.notes.push_back("evidence for the product formula at N=" + std::to_string(N) +
                    ", not a proof");
  s.finalize();
  return out;
}

DAWeightTable perturbed_table(const DAWeightTable& table, const VertexIndex& target, CScalar scale,
                              CScalar shift) {
  if (!target.in_range(table.N())) throw IndexRangeError("perturbation target out of range");
  auto entries = table.entries();
  DAWeightFormula original;
  if (auto it = entries.find(target); it != entries.end()) original = it->second;
  entries[target] = [original, scale, shift](const DAWeightContext& ctx) {
    return (original ? scale * original(ctx) : CScalar{}) + shift;
  };
  return DAWeightTable(table.rho(), std::move(entries), "perturbed");
}

}  // namespace dwpf
