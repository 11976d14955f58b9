#include "dwpf/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "dwpf/closed_form.hpp"
#include "dwpf/errors.hpp"
#include "dwpf/verify.hpp"

namespace dwpf::cli {

using json = nlohmann::ordered_json;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double parse_double(std::string_view text) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) throw UsageError("not a number: '" + std::string(text) + "'");
  return value;
}

}  // namespace

CScalar parse_complex(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) return {parse_double(text), 0.0};
  return {parse_double(std::string_view(text).substr(0, colon)),
          parse_double(std::string_view(text).substr(colon + 1))};
}

std::pair<int, int> parse_range(const std::string& text) {
  auto to_int = [&](std::string_view part) {
    int value = 0;
    const auto* end = part.data() + part.size();
    auto [ptr, ec] = std::from_chars(part.data(), end, value);
    if (ec != std::errc{} || ptr != end || value < 1) {
      throw UsageError("bad L value '" + text + "'");
    }
    return value;
  };
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    const int L = to_int(text);
    return {L, L};
  }
  const int lo = to_int(std::string_view(text).substr(0, dots));
  const int hi = to_int(std::string_view(text).substr(dots + 2));
  if (lo > hi) throw UsageError("empty L range '" + text + "'");
  return {lo, hi};
}

namespace {

struct Given {
  bool N = false, n = false, r = false, s = false, eta = false, L = false;
};

json complex_json(CScalar z) { return json::array({z.real(), z.imag()}); }

CScalar complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw UsageError("complex values must be numbers or [re, im] pairs");
}

std::vector<CScalar> complex_list(const json& doc, const char* key) {
  std::vector<CScalar> out;
  if (!doc.contains(key)) return out;
  if (!doc[key].is_array()) throw UsageError(std::string("'") + key + "' must be an array");
  for (const auto& item : doc[key]) out.push_back(complex_from_json(item));
  return out;
}

ModelParams load_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open parameter file " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError("parameter file " + path + ": " + e.what());
  }
  ModelParams p{complex_list(doc, "u"), complex_list(doc, "v"), complex_list(doc, "alpha"),
                complex_list(doc, "beta")};
  try {
    p.validate();
  } catch (const PreconditionError& e) {
    throw UsageError("parameter file " + path + ": " + e.what());
  }
  return p;
}

json params_json(const ModelParams& p) {
  json j;
  for (const auto* key : {"u", "v", "alpha", "beta"}) {
    const auto& list = std::string_view(key) == "u"       ? p.u
                       : std::string_view(key) == "v"     ? p.v
                       : std::string_view(key) == "alpha" ? p.alpha
                                                          : p.beta;
    json arr = json::array();
    for (const auto& z : list) arr.push_back(complex_json(z));
    j[key] = arr;
  }
  return j;
}

ModelUnderTest build_model(const RunConfig& c, const Given& given) {
  if (c.model != "da" && c.model != "ps" && c.model != "plugin") {
    throw UsageError("unknown model '" + c.model + "' (expected da, ps or plugin)");
  }
  if (c.model == "ps") {
    if (given.N || given.n) throw UsageError("--N and --n apply to DA models only");
    if (!c.plugin_path.empty()) throw UsageError("--plugin applies to DA models only");
    if (c.r < 0 || c.s < 0) throw UsageError("--r and --s must be non-negative");
    return ModelUnderTest::ps(c.r, c.s, c.eta);
  }
  if (given.eta || given.r || given.s) throw UsageError("--eta, --r and --s apply to ps only");
  if (!c.plugin_path.empty()) {
    auto table = std::make_shared<const DAWeightTable>(load_plugin_table(c.plugin_path));
    if (given.N && table->N() != c.N) {
      throw UsageError("plugin table has N=" + std::to_string(table->N()) + ", not " +
                       std::to_string(c.N));
    }
    return ModelUnderTest::da(table);
  }
  if (c.model == "plugin") throw UsageError("--model plugin needs --plugin <file>");
  if (c.N < 2 || c.N > 4) {
    throw UsageError("no built-in table for N=" + std::to_string(c.N) +
                     "; supply one with --plugin <file>");
  }
  return ModelUnderTest::da(c.N, c.n);
}

CheckOptions check_options(const RunConfig& c) {
  CheckOptions o;
  o.seed = c.seed;
  o.trials = c.trials;
  if (c.tol) o.policy.rel_tol = *c.tol;
  o.engine.threads = c.threads;
  o.engine.enumeration_cap = c.enumeration_cap;
  return o;
}

json config_json(const RunConfig& c, const ModelUnderTest& m) {
  json j;
  j["model"] = m.describe();
  if (m.is_da()) {
    j["N"] = m.N();
    j["n"] = m.da_table().rho().n;
    if (!c.plugin_path.empty()) j["plugin"] = c.plugin_path;
  } else {
    j["r"] = c.r;
    j["s"] = c.s;
    j["eta"] = complex_json(c.eta);
  }
  j["L"] = json::array({c.L_min, c.L_max});
  j["seed"] = c.seed;
  j["trials"] = c.trials;
  if (c.tol) j["tol"] = *c.tol;
  j["threads"] = c.threads;
  return j;
}

json report_json(const VerificationReport& r) {
  json j;
  j["name"] = r.name;
  j["model"] = r.model;
  j["L"] = r.L;
  j["samples"] = r.samples;
  j["seed"] = r.seed;
  j["max_residual"] = r.max_residual;
  j["mean_residual"] = r.mean_residual;
  j["tolerance"] = r.tolerance;
  j["pass"] = r.pass;
  j["notes"] = r.notes;
  return j;
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char ch : text) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  return quoted + "\"";
}

std::string format_double(double value) {
  std::ostringstream os;
  os.precision(17);
  os << value;
  return os.str();
}

void emit(const RunConfig& c, const std::string& text, std::ostream& out) {
  if (c.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(c.out_path);
  if (!file) throw UsageError("cannot write " + c.out_path);
  file << text;
}

const std::vector<std::string> kAllChecks = {"ybe",         "prop1",   "prop2",
                                             "prop3",       "prop4",   "factorization",
                                             "engines",     "rs-independence",
                                             "conjecture-probe"};

std::vector<std::string> resolve_checks(const RunConfig& c, const ModelUnderTest& m) {
  std::vector<std::string> requested = c.checks.empty() ? std::vector<std::string>{"all"} : c.checks;
  std::set<std::string> chosen;
  for (const auto& name : requested) {
    if (name == "all") {
      for (const auto& check : kAllChecks) {
        if (check == "rs-independence" && m.is_da()) continue;
        if (check == "conjecture-probe" && (!m.is_da() || c.plugin_path.empty())) continue;
        chosen.insert(check);
      }
      continue;
    }
    if (std::find(kAllChecks.begin(), kAllChecks.end(), name) == kAllChecks.end()) {
      throw UsageError("unknown check '" + name + "'");
    }
    if (name == "rs-independence" && m.is_da()) throw UsageError("rs-independence needs --model ps");
    if (name == "conjecture-probe" && !m.is_da()) throw UsageError("conjecture-probe needs a DA table");
    chosen.insert(name);
  }
  std::vector<std::string> ordered;
  for (const auto& check : kAllChecks) {
    if (chosen.contains(check)) ordered.push_back(check);
  }
  return ordered;
}

std::vector<std::pair<int, int>> rs_family(int r, int s) {
  std::vector<std::pair<int, int>> list = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  if (std::find(list.begin(), list.end(), std::pair{r, s}) == list.end()) list.emplace_back(r, s);
  return list;
}

int cmd_verify(const RunConfig& c, const Given& given, std::ostream& out, std::ostream& err) {
  const auto m = build_model(c, given);
  const auto checks = resolve_checks(c, m);
  const auto options = check_options(c);
  std::vector<VerificationReport> reports;
  json skipped = json::array();

  auto attempt = [&](const std::string& label, int L, auto&& run) {
    try {
      reports.push_back(run());
    } catch (const CapacityError& e) {
      skipped.push_back({{"name", label}, {"L", L}, {"reason", e.what()}});
    }
  };

  for (const auto& check : checks) {
    if (check == "ybe") attempt(check, 0, [&] { return check_ybe(m, options); });
    if (check == "prop4") attempt(check, 1, [&] { return check_property4(m, options); });
    if (check == "conjecture-probe") {
      auto probe = run_conjecture_probe(
          std::make_shared<const DAWeightTable>(m.da_table()), c.L_max, options);
      reports.push_back(probe.summary);
      continue;
    }
    for (int L = c.L_min; L <= c.L_max; ++L) {
      if (check == "prop1") attempt(check, L, [&] { return check_property1(m, L, options); });
      if (check == "factorization") {
        attempt(check, L, [&] { return check_factorization(m, L, options); });
      }
      if (check == "engines") attempt(check, L, [&] { return check_engines(m, L, options); });
      if (check == "rs-independence") {
        attempt(check, L, [&] {
          return check_rs_independence(rs_family(c.r, c.s), L, c.eta, options);
        });
      }
      if (L < 2) continue;
      if (check == "prop2") {
        attempt(check, L, [&] { return check_property2_zeros(m, L, options); });
        attempt(check, L, [&] { return check_property2_permutation(m, L, options); });
      }
      if (check == "prop3") {
        attempt(check, L, [&] { return check_property3_recursion(m, L, options); });
      }
    }
  }

  bool all_pass = true;
  for (const auto& r : reports) {
    all_pass = all_pass && r.pass;
    err << (r.pass ? "PASS " : "FAIL ") << r.name << " " << r.model << " L=" << r.L
        << " max_residual=" << r.max_residual << " tol=" << r.tolerance << "\n";
  }
  for (const auto& s : skipped) {
    err << "SKIP " << s["name"].get<std::string>() << " L=" << s["L"].get<int>() << ": "
        << s["reason"].get<std::string>() << "\n";
  }

  if (c.format == "csv") {
    std::ostringstream os;
    os << "name,model,L,samples,seed,max_residual,mean_residual,tolerance,pass,notes\n";
    for (const auto& r : reports) {
      std::string notes;
      for (const auto& n : r.notes) notes += (notes.empty() ? "" : "; ") + n;
      os << csv_field(r.name) << "," << csv_field(r.model) << "," << r.L << "," << r.samples
         << "," << r.seed << "," << format_double(r.max_residual) << ","
         << format_double(r.mean_residual) << "," << format_double(r.tolerance) << ","
         << (r.pass ? "true" : "false") << "," << csv_field(notes) << "\n";
    }
    emit(c, os.str(), out);
  } else {
    json doc;
    doc["config"] = config_json(c, m);
    doc["checks"] = json::array();
    for (const auto& r : reports) doc["checks"].push_back(report_json(r));
    doc["skipped"] = skipped;
    doc["pass"] = all_pass;
    emit(c, doc.dump(2) + "\n", out);
  }
  return all_pass ? kExitPass : kExitCheckFailure;
}

std::vector<std::string> resolve_methods(const RunConfig& c) {
  static const std::vector<std::string> known = {"enumerate", "contract", "factorized"};
  if (c.methods.empty()) return known;
  for (const auto& method : c.methods) {
    if (std::find(known.begin(), known.end(), method) == known.end()) {
      throw UsageError("unknown method '" + method + "'");
    }
  }
  return c.methods;
}

// Evaluates Z by one method; nullopt with a reason when the method is out of reach.
std::optional<CScalar> evaluate(const std::string& method, const ModelUnderTest& m,
                                const ModelParams& p, const EngineOptions& engine,
                                std::string& reason) {
  const auto spec = m.lattice(p);
  const auto bc = BoundaryCondition::domain_wall(p.L(), m.N());
  try {
    if (method == "enumerate") return dwpf_enumerate(spec, bc, engine);
    if (method == "contract") return dwpf_contract(spec, bc, engine);
    return m.factorized(p).value;
  } catch (const CapacityError& e) {
    reason = e.what();
    return std::nullopt;
  }
}

int cmd_compute(const RunConfig& c, const Given& given, std::ostream& out, std::ostream& err) {
  const auto m = build_model(c, given);
  const auto methods = resolve_methods(c);
  const auto options = check_options(c);
  ModelParams p;
  if (!c.params_path.empty()) {
    p = load_params(c.params_path);
    if (given.L && (c.L_min != c.L_max || c.L_min != p.L())) {
      throw UsageError("--L disagrees with the parameter file");
    }
    if (m.is_da() && (p.alpha.empty() || p.beta.empty())) {
      p.alpha.assign(p.u.size(), CScalar{});
      p.beta.assign(p.v.size(), CScalar{});
    }
  } else {
    if (c.L_min != c.L_max) throw UsageError("compute takes a single --L");
    ParameterSampler sampler(c.seed, "compute");
    p = sampler.draw(c.L_min, m.is_da());
    err << "random parameters drawn with seed " << c.seed << "\n";
  }

  json results = json::array();
  std::vector<std::pair<std::string, CScalar>> values;
  for (const auto& method : methods) {
    std::string reason;
    const auto value = evaluate(method, m, p, options.engine, reason);
    if (value) {
      values.emplace_back(method, *value);
      results.push_back({{"method", method}, {"status", "ok"}, {"value", complex_json(*value)}});
      err << method << ": " << value->real() << (value->imag() < 0 ? " - " : " + ")
          << std::abs(value->imag()) << "i\n";
    } else {
      results.push_back({{"method", method}, {"status", "infeasible"}, {"reason", reason}});
      err << method << ": infeasible (" << reason << ")\n";
    }
  }
  json diffs = json::array();
  bool agree = true;
  for (std::size_t a = 0; a < values.size(); ++a) {
    for (std::size_t b = a + 1; b < values.size(); ++b) {
      const double d = relative_difference(values[a].second, values[b].second);
      agree = agree && d <= options.policy.rel_tol;
      diffs.push_back({{"a", values[a].first}, {"b", values[b].first}, {"relative_difference", d}});
    }
  }

  if (c.format == "csv") {
    std::ostringstream os;
    os << "method,status,re,im\n";
    for (const auto& r : results) {
      os << r["method"].get<std::string>() << "," << r["status"].get<std::string>() << ",";
      if (r.contains("value")) {
        os << format_double(r["value"][0].get<double>()) << ","
           << format_double(r["value"][1].get<double>());
      } else {
        os << ",";
      }
      os << "\n";
    }
    emit(c, os.str(), out);
  } else {
    json doc;
    doc["config"] = config_json(c, m);
    doc["params"] = params_json(p);
    doc["results"] = results;
    doc["relative_differences"] = diffs;
    doc["pass"] = agree;
    emit(c, doc.dump(2) + "\n", out);
  }
  return agree ? kExitPass : kExitCheckFailure;
}

int cmd_bench(const RunConfig& c, const Given& given, std::ostream& out) {
  const auto m = build_model(c, given);
  const auto methods = resolve_methods(c);
  const auto options = check_options(c);
  using clock = std::chrono::steady_clock;
  std::ostringstream os;
  os << "model,N,L,method,status,seconds_per_call,calls\n";
  for (int L = c.L_min; L <= c.L_max; ++L) {
    ParameterSampler sampler(c.seed, "bench|L=" + std::to_string(L));
    const ModelParams p = sampler.draw(L, m.is_da());
    for (const auto& method : methods) {
      std::string reason;
      int calls = 0;
      const auto t0 = clock::now();
      std::optional<CScalar> value;
      // Cheap methods are repeated until the interval is long enough to time.
      do {
        value = evaluate(method, m, p, options.engine, reason);
        ++calls;
      } while (value && clock::now() - t0 < std::chrono::milliseconds(20) && calls < 100000);
      const double seconds = std::chrono::duration<double>(clock::now() - t0).count() / calls;
      os << csv_field(m.describe()) << "," << m.N() << "," << L << "," << method << ","
         << (value ? "ok" : "infeasible") << "," << (value ? format_double(seconds) : "") << ","
         << (value ? calls : 0) << "\n";
    }
  }
  emit(c, os.str(), out);
  return kExitPass;
}

int cmd_plugin_load(const RunConfig& c, std::ostream& out) {
  if (c.plugin_path.empty()) throw UsageError("plugin-load needs --plugin <file>");
  const auto table = load_plugin_table(c.plugin_path);
  const int N = table.N();
  json doc;
  doc["path"] = c.plugin_path;
  doc["N"] = N;
  doc["n"] = table.rho().n;
  doc["entries"] = table.size();
  doc["c_plus"] = table.has(c_plus_index(N));
  doc["a_plus"] = table.has(a_plus_index());
  doc["a_minus"] = table.has(a_minus_index(N));
  doc["probe_ready"] = table.has(c_plus_index(N)) && table.has(a_plus_index()) &&
                       table.has(a_minus_index(N));
  emit(c, doc.dump(2) + "\n", out);
  return kExitPass;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  c.seed = kDefaultSeed;
  std::string eta_text, L_text = "2";
  CLI::App app{"Domain wall partition functions of Deguchi-Akutsu and Perk-Schultz models"};
  app.require_subcommand(1);
  app.fallthrough();
  auto* opt_model = app.add_option("--model", c.model, "da, ps or plugin");
  auto* opt_N = app.add_option("--N", c.N, "DA states per bond");
  auto* opt_n = app.add_option("--n", c.n, "rho = exp(2 pi i n / N)");
  auto* opt_r = app.add_option("--r", c.r, "PS rank r");
  auto* opt_s = app.add_option("--s", c.s, "PS rank s");
  auto* opt_eta = app.add_option("--eta", eta_text, "PS crossing parameter, re or re:im");
  auto* opt_L = app.add_option("--L", L_text, "lattice size, L or Lmin..Lmax");
  app.add_option("--seed", c.seed, "random seed (DWPF_SEED overrides)");
  app.add_option("--trials", c.trials, "random draws per check");
  app.add_option("--tol", c.tol, "relative tolerance");
  app.add_option("--params", c.params_path, "JSON parameter file");
  app.add_option("--plugin", c.plugin_path, "JSON plugin weight table");
  app.add_option("--checks", c.checks, "comma separated checks, or all")->delimiter(',');
  app.add_option("--methods", c.methods, "enumerate,contract,factorized")->delimiter(',');
  app.add_option("--out", c.out_path, "output file (default stdout)");
  auto* opt_format = app.add_option("--format", c.format, "json or csv")
                         ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--threads", c.threads, "contraction threads")->check(CLI::Range(1, 256));
  app.add_option("--enum-cap", c.enumeration_cap, "largest enumerated assignment count");
  (void)opt_model;

  auto* verify = app.add_subcommand("verify", "run property checks");
  auto* compute = app.add_subcommand("compute", "evaluate Z by several methods");
  auto* bench = app.add_subcommand("bench", "time the evaluation methods");
  auto* plugin = app.add_subcommand("plugin-load", "validate a plugin weight table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    Given given{opt_N->count() > 0, opt_n->count() > 0, opt_r->count() > 0,
                opt_s->count() > 0, opt_eta->count() > 0, opt_L->count() > 0};
    if (given.eta) c.eta = parse_complex(eta_text);
    std::tie(c.L_min, c.L_max) = parse_range(L_text);
    if (const char* env = std::getenv("DWPF_SEED"); env != nullptr && *env != '\0') {
      std::uint64_t seed = 0;
      const char* end = env + std::char_traits<char>::length(env);
      auto [ptr, ec] = std::from_chars(env, end, seed);
      if (ec != std::errc{} || ptr != end) throw UsageError("DWPF_SEED is not an integer");
      c.seed = seed;
    }
    if (bench->parsed() && opt_format->count() == 0) c.format = "csv";
    if (verify->parsed()) return cmd_verify(c, given, out, err);
    if (compute->parsed()) return cmd_compute(c, given, out, err);
    if (bench->parsed()) return cmd_bench(c, given, out);
    if (plugin->parsed()) return cmd_plugin_load(c, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    // Bad plugin files, parameters off their domain and similar input faults.
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace dwpf::cli
