#include "dwpf/lattice_engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "dwpf/errors.hpp"

namespace dwpf {

void ModelParams::validate() const {
  const auto L = u.size();
  if (L == 0) throw PreconditionError("lattice must have at least one line");
  if (v.size() != L) throw PreconditionError("u and v must have the same length");
  if (!alpha.empty() && alpha.size() != L) throw PreconditionError("alpha must have length L");
  if (!beta.empty() && beta.size() != L) throw PreconditionError("beta must have length L");
}

LineParams ModelParams::vertical(int i) const {
  return {u[static_cast<std::size_t>(i)],
          alpha.empty() ? CScalar{} : alpha[static_cast<std::size_t>(i)]};
}

LineParams ModelParams::horizontal(int j) const {
  return {v[static_cast<std::size_t>(j)],
          beta.empty() ? CScalar{} : beta[static_cast<std::size_t>(j)]};
}

ModelParams reduce_params(const ModelParams& params) {
  params.validate();
  ModelParams out;
  out.u.assign(params.u.begin() + 1, params.u.end());
  out.v.assign(params.v.begin(), params.v.end() - 1);
  if (!params.alpha.empty()) out.alpha.assign(params.alpha.begin() + 1, params.alpha.end());
  if (!params.beta.empty()) out.beta.assign(params.beta.begin(), params.beta.end() - 1);
  return out;
}

BoundaryCondition BoundaryCondition::uniform(int L, int low, int high) {
  const auto n = static_cast<std::size_t>(L);
  return {std::vector<int>(n, low), std::vector<int>(n, low), std::vector<int>(n, high),
          std::vector<int>(n, high)};
}

double interior_assignment_count(int N, int L) {
  return std::pow(static_cast<double>(N), 2.0 * L * (L - 1));
}

double contraction_memory_bytes(int N, int L) {
  return 2.0 * std::pow(static_cast<double>(N), L + 1) * sizeof(CScalar);
}

namespace {

// Nonzero vertex weights of one site, 0-based states.
struct SiteWeights {
  struct Out {
    int right, bottom;
    CScalar w;
  };
  struct In {
    int top, left;
    CScalar w;
  };
  // Indexed by top * N + left: the (right, bottom) continuations.
  std::vector<std::vector<Out>> by_input;
  // Indexed by right * N + bottom: the (top, left) sources.
  std::vector<std::vector<In>> by_output;
};

class SiteCache {
 public:
  SiteCache(const LatticeSpec& spec, const SiteMask& mask) : L_(spec.L()), N_(spec.N()) {
    spec.params.validate();
    sites_.resize(static_cast<std::size_t>(L_ * L_));
    const auto nn = static_cast<std::size_t>(N_ * N_);
    for (int col = 0; col < L_; ++col) {
      const LineParams vertical = spec.params.vertical(col);
      for (int row = 0; row < L_; ++row) {
        const LineParams horizontal = spec.params.horizontal(row);
        SiteWeights& site = sites_[index(col, row)];
        site.by_input.assign(nn, {});
        site.by_output.assign(nn, {});
        for (int t = 0; t < N_; ++t) {
          for (int r = 0; r < N_; ++r) {
            for (int l = 0; l < N_; ++l) {
              for (int b = 0; b < N_; ++b) {
                const VertexIndex idx{t + 1, r + 1, l + 1, b + 1};
                if (!spec.model->has_entry(idx)) continue;
                if (mask && !mask(col, row, idx)) continue;
                const CScalar w = spec.model->weight(idx, vertical, horizontal);
                if (w == CScalar{}) continue;
                site.by_input[static_cast<std::size_t>(t * N_ + l)].push_back({r, b, w});
                site.by_output[static_cast<std::size_t>(r * N_ + b)].push_back({t, l, w});
              }
            }
          }
        }
      }
    }
  }

  [[nodiscard]] const SiteWeights& at(int col, int row) const { return sites_[index(col, row)]; }

 private:
  [[nodiscard]] std::size_t index(int col, int row) const {
    return static_cast<std::size_t>(row * L_ + col);
  }

  int L_;
  int N_;
  std::vector<SiteWeights> sites_;
};

void validate_boundary(const BoundaryCondition& bc, int L, int N) {
  auto check = [&](const std::vector<int>& side, const char* name) {
    if (side.size() != static_cast<std::size_t>(L)) {
      throw PreconditionError(std::string("boundary side '") + name + "' must have length L");
    }
    for (int s : side) {
      if (s < 1 || s > N) {
        throw IndexRangeError(std::string("boundary state on '") + name + "' out of range");
      }
    }
  };
  check(bc.left, "left");
  check(bc.top, "top");
  check(bc.right, "right");
  check(bc.bottom, "bottom");
}

class Enumerator {
 public:
  Enumerator(const SiteCache& cache, const BoundaryCondition& bc, int L, int N)
      : cache_(cache), bc_(bc), L_(L), N_(N) {
    const auto n = static_cast<std::size_t>(L);
    // horizontal_[row][c]: bond left of column c; vertical_[row][col]: bond above row.
    horizontal_.assign(n, std::vector<int>(n + 1, 0));
    vertical_.assign(n + 1, std::vector<int>(n, 0));
    for (int j = 0; j < L; ++j) {
      horizontal_[j][0] = bc.left[j] - 1;
      horizontal_[j][n] = bc.right[j] - 1;
    }
    for (int i = 0; i < L; ++i) {
      vertical_[0][i] = bc.top[i] - 1;
      vertical_[n][i] = bc.bottom[i] - 1;
    }
  }

  EnumerationResult run() {
    visit(0, CScalar{1.0, 0.0});
    return result_;
  }

 private:
  void visit(int site, CScalar product) {
    if (site == L_ * L_) {
      result_.value += product;
      result_.max_term = std::max(result_.max_term, std::abs(product));
      ++result_.nonzero_configurations;
      return;
    }
    const int row = site / L_;
    const int col = site % L_;
    const int top = vertical_[row][col];
    const int left = horizontal_[row][col];
    const auto& outs = cache_.at(col, row).by_input[static_cast<std::size_t>(top * N_ + left)];
    const bool right_fixed = col == L_ - 1;
    const bool bottom_fixed = row == L_ - 1;
    for (const auto& o : outs) {
      if (right_fixed && o.right != horizontal_[row][col + 1]) continue;
      if (bottom_fixed && o.bottom != vertical_[row + 1][col]) continue;
      if (!right_fixed) horizontal_[row][col + 1] = o.right;
      if (!bottom_fixed) vertical_[row + 1][col] = o.bottom;
      visit(site + 1, product * o.w);
    }
  }

  const SiteCache& cache_;
  const BoundaryCondition& bc_;
  int L_;
  int N_;
  std::vector<std::vector<int>> horizontal_;
  std::vector<std::vector<int>> vertical_;
  EnumerationResult result_;
};

struct ComplexSemiring {
  using Value = CScalar;
  static Value zero() { return {}; }
  static Value one() { return {1.0, 0.0}; }
  static Value lift(CScalar w) { return w; }
  static void accumulate(Value& acc, Value term) { acc += term; }
};

struct MaxTimesSemiring {
  using Value = double;
  static Value zero() { return 0.0; }
  static Value one() { return 1.0; }
  static Value lift(CScalar w) { return std::abs(w); }
  static void accumulate(Value& acc, Value term) { acc = std::max(acc, term); }
};

template <typename Fn>
void parallel_blocks(std::size_t count, int threads, Fn&& fn) {
  const auto workers = static_cast<std::size_t>(std::max(threads, 1));
  if (workers == 1 || count < 4096) {
    fn(std::size_t{0}, count);
    return;
  }
  const std::size_t block = (count + workers - 1) / workers;
  std::vector<std::jthread> pool;
  for (std::size_t begin = 0; begin < count; begin += block) {
    pool.emplace_back([&fn, begin, end = std::min(count, begin + block)] { fn(begin, end); });
  }
}

template <typename S>
typename S::Value sweep(const LatticeSpec& spec, const BoundaryCondition& bc,
                        const EngineOptions& options, const SiteMask& mask) {
  using V = typename S::Value;
  const int L = spec.L();
  const int N = spec.N();
  validate_boundary(bc, L, N);
  if (contraction_memory_bytes(N, L) > static_cast<double>(options.memory_cap_bytes)) {
    throw CapacityError("contraction of an L=" + std::to_string(L) + ", N=" + std::to_string(N) +
                        " lattice exceeds the memory cap");
  }
  const SiteCache cache(spec, mask);

  std::vector<std::size_t> stride(static_cast<std::size_t>(L) + 1, 1);
  for (int j = 0; j < L; ++j) stride[j + 1] = stride[j] * static_cast<std::size_t>(N);
  const std::size_t cut_size = stride[L];
  auto encode = [&](const std::vector<int>& states) {
    std::size_t h = 0;
    for (int j = 0; j < L; ++j) h += static_cast<std::size_t>(states[j] - 1) * stride[j];
    return h;
  };

  // Extended vectors hold (vertical bond state, cut state) as vertical * cut_size + cut.
  std::vector<V> current(cut_size * static_cast<std::size_t>(N), S::zero());
  std::vector<V> next(current.size(), S::zero());
  std::vector<V> cut(cut_size, S::zero());
  cut[encode(bc.left)] = S::one();

  for (int col = 0; col < L; ++col) {
    std::fill(current.begin(), current.end(), S::zero());
    const auto top = static_cast<std::size_t>(bc.top[col] - 1);
    std::copy(cut.begin(), cut.end(), current.begin() + static_cast<std::ptrdiff_t>(top * cut_size));

    for (int row = 0; row < L; ++row) {
      const SiteWeights& site = cache.at(col, row);
      const std::size_t s = stride[row];
      parallel_blocks(current.size(), options.threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t out = begin; out < end; ++out) {
          const std::size_t bottom = out / cut_size;
          const std::size_t h = out % cut_size;
          const std::size_t right = (h / s) % static_cast<std::size_t>(N);
          const std::size_t base = h - right * s;
          V acc = S::zero();
          for (const auto& in : site.by_output[right * static_cast<std::size_t>(N) + bottom]) {
            const V& src = current[static_cast<std::size_t>(in.top) * cut_size + base +
                                   static_cast<std::size_t>(in.left) * s];
            if (src == S::zero()) continue;
            S::accumulate(acc, src * S::lift(in.w));
          }
          next[out] = acc;
        }
      });
      current.swap(next);
    }

    const auto bottom = static_cast<std::size_t>(bc.bottom[col] - 1);
    std::copy(current.begin() + static_cast<std::ptrdiff_t>(bottom * cut_size),
              current.begin() + static_cast<std::ptrdiff_t>((bottom + 1) * cut_size), cut.begin());
  }
  return cut[encode(bc.right)];
}

}  // namespace

EnumerationResult enumerate_configurations(const LatticeSpec& spec, const BoundaryCondition& bc,
                                           const EngineOptions& options) {
  const int L = spec.L();
  const int N = spec.N();
  validate_boundary(bc, L, N);
  if (interior_assignment_count(N, L) > options.enumeration_cap) {
    throw CapacityError("enumeration of an L=" + std::to_string(L) + ", N=" + std::to_string(N) +
                        " lattice exceeds the cap; use dwpf_contract");
  }
  const SiteCache cache(spec, {});
  return Enumerator(cache, bc, L, N).run();
}

CScalar dwpf_enumerate(const LatticeSpec& spec, const BoundaryCondition& bc,
                       const EngineOptions& options) {
  return enumerate_configurations(spec, bc, options).value;
}

CScalar dwpf_contract(const LatticeSpec& spec, const BoundaryCondition& bc,
                      const EngineOptions& options, const SiteMask& mask) {
  return sweep<ComplexSemiring>(spec, bc, options, mask);
}

double max_configuration_term(const LatticeSpec& spec, const BoundaryCondition& bc,
                              const EngineOptions& options, const SiteMask& mask) {
  return sweep<MaxTimesSemiring>(spec, bc, options, mask);
}

LatticeSpec permute_columns(const LatticeSpec& spec, std::span<const int> permutation) {
  const int L = spec.L();
  if (permutation.size() != static_cast<std::size_t>(L)) {
    throw PreconditionError("permutation length must equal L");
  }
  std::vector<bool> seen(static_cast<std::size_t>(L), false);
  for (int p : permutation) {
    if (p < 0 || p >= L || seen[static_cast<std::size_t>(p)]) {
      throw PreconditionError("invalid column permutation");
    }
    seen[static_cast<std::size_t>(p)] = true;
  }
  LatticeSpec out = spec;
  for (int k = 0; k < L; ++k) {
    const auto src = static_cast<std::size_t>(permutation[k]);
    out.params.u[k] = spec.params.u[src];
    if (!spec.params.alpha.empty()) out.params.alpha[k] = spec.params.alpha[src];
  }
  return out;
}

CScalar dwpf_with_permuted_columns(const LatticeSpec& spec, std::span<const int> permutation,
                                   const EngineOptions& options) {
  const LatticeSpec permuted = permute_columns(spec, permutation);
  return dwpf_contract(permuted, BoundaryCondition::domain_wall(spec.L(), spec.N()), options);
}

}  // namespace dwpf
