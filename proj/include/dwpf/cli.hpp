#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dwpf/numerics.hpp"

namespace dwpf::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailure = 1;
inline constexpr int kExitUsage = 2;

struct RunConfig {
  std::string model = "da";  // da | ps | plugin
  int N = 2;
  int n = 1;
  int r = 0;
  int s = 0;
  CScalar eta{0.7, 0.2};
  int L_min = 2;
  int L_max = 2;
  std::uint64_t seed = 0;
  int trials = 0;
  std::optional<double> tol;
  std::string params_path;
  std::string plugin_path;
  std::vector<std::string> checks;
  std::vector<std::string> methods;
  std::string out_path;
  std::string format = "json";
  int threads = 1;
  double enumeration_cap = 1e8;
};

/// Parses "a" or "a:b" as a + b i.
CScalar parse_complex(const std::string& text);

/// Parses "3" or "1..4".
std::pair<int, int> parse_range(const std::string& text);

/// Entry point behind the dwpf executable. Returns the process exit status.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dwpf::cli
