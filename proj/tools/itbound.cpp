#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "itbound/certificate.hpp"
#include "itbound/digest.hpp"
#include "itbound/regen.hpp"
#include "itbound/search.hpp"
#include "itbound/verify.hpp"

namespace fs = std::filesystem;
using namespace itbound;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

/// Temp file plus rename, so readers never observe a partial file.
void write_atomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw std::runtime_error("cannot write " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

std::string decimal(const Rational& v) {
  std::ostringstream s;
  s << std::setprecision(12) << to_double(v);
  return s.str();
}

/// Structured text manifest: one "key: value" per line.
class Manifest {
 public:
  explicit Manifest(std::string command) { add("command", std::move(command)); add("version", kVersion); add("started", utc_now()); }
  void add(const std::string& key, const std::string& value) { lines_.push_back(key + ": " + value); }
  void write(const std::string& path) {
    add("finished", utc_now());
    std::string text;
    for (const auto& l : lines_) text += l + "\n";
    write_atomic(path, text);
  }

 private:
  std::vector<std::string> lines_;
};

struct ProblemFlags {
  std::string kind = "regen";
  std::string file;
  int n = 3;
  std::string repr = "reduced";
  bool symmetry = false;

  void attach(CLI::App* app) {
    app->add_option("--problem", kind, "Problem family (regen)")->check(CLI::IsMember({"regen"}));
    app->add_option("--problem-file", file, "Generic problem file (overrides --problem)");
    app->add_option("--n", n, "Number of storage nodes");
    app->add_option("--repr", repr, "reduced or full")->check(CLI::IsMember({"reduced", "full"}));
    app->add_flag("--symmetry", symmetry, "Collapse terms under the problem's symmetry group");
  }

  bool is_regen() const { return file.empty(); }

  Problem load() const {
    if (!file.empty()) return parse_problem(read_file(file));
    return regen::build_regen(n, regen::parse_representation(repr)).to_problem(symmetry);
  }

  std::string describe() const {
    if (!file.empty()) return "file " + file;
    return "regen n=" + std::to_string(n) + " repr=" + repr;
  }
};

std::vector<Rational> parse_eta_list(const std::string& text) {
  std::vector<Rational> out;
  if (text.find(':') != std::string::npos) {
    // start:stop:step, inclusive
    std::vector<std::string> parts;
    std::stringstream s(text);
    for (std::string p; std::getline(s, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw std::invalid_argument("eta range must be start:stop:step");
    const Rational start = parse_rational(parts[0]), stop = parse_rational(parts[1]), step = parse_rational(parts[2]);
    if (step <= 0) throw std::invalid_argument("eta step must be positive");
    for (Rational e = start; e <= stop; e += step) out.push_back(e);
  } else {
    std::stringstream s(text);
    for (std::string p; std::getline(s, p, ',');)
      if (!p.empty()) out.push_back(parse_rational(p));
  }
  if (out.empty()) throw std::invalid_argument("empty eta list");
  return out;
}

/// Layered-code parameters whose inner point minimizes alpha + eta * beta.
std::vector<int> optimal_layers(int n, const Rational& eta) {
  const auto points = regen::inner_bound_points(n);
  Rational best = points[0].alpha + eta * points[0].beta;
  for (const auto& p : points) best = std::min<Rational>(best, p.alpha + eta * p.beta);
  std::vector<int> out;
  for (std::size_t i = 0; i < points.size(); ++i)
    if (points[i].alpha + eta * points[i].beta == best) out.push_back(static_cast<int>(i) + 2);
  return out;
}

struct SearchFlags {
  std::vector<std::string> filter_r;
  SearchConfig config;
  bool no_stop = false;

  void attach(CLI::App* app) {
    app->add_option("--filter-r", filter_r,
                    "Layered-code parameter(s) for the equality filter, or 'auto' for the codes optimal at eta");
    app->add_option("--kappa", config.kappa_init, "Initial number of sampled inequalities per episode");
    app->add_option("--kappa-max", config.kappa_max, "Cap for kappa doubling");
    app->add_option("--episodes", config.max_episodes, "Maximum number of episodes");
    app->add_option("--time-limit", config.time_limit_seconds, "Stop starting new episodes after this many seconds (0 = none)");
    app->add_option("--rounds", config.growth_rounds, "Pool growth rounds per episode");
    app->add_option("--pairs", config.pairs_per_round, "Term pairs drawn per growth round");
    app->add_option("--max-pool", config.max_pool, "Term pool cap");
    app->add_option("--window", config.stagnation_window, "Stagnation window");
    app->add_option("--seed", config.seed, "Master seed");
    app->add_option("--guided", config.guided_fraction, "Share of each sample taken from violated candidates");
    app->add_flag("--reseed-each-episode,!--keep-pool", config.reseed_each_episode,
                 "Rebuild the pool from evidence every episode (default) or only when kappa grows");
    app->add_flag("--no-stop", no_stop, "Keep searching after the filtering code's value is reached");
  }

  /// Fills filters and the early-stop value for one eta.
  SearchConfig resolve(const ProblemFlags& pf, const Problem& problem, const Rational& eta) const {
    SearchConfig c = config;
    c.symmetry = !problem.symmetry_generators.empty();
    if (filter_r.empty()) return c;
    if (!pf.is_regen() || pf.repr != "reduced") throw std::invalid_argument("--filter-r needs the reduced regen problem");
    std::vector<int> layers;
    for (const auto& f : filter_r) {
      if (f == "auto") {
        for (int r : optimal_layers(pf.n, eta)) layers.push_back(r);
      } else {
        layers.push_back(std::stoi(f));
      }
    }
    const auto points = regen::inner_bound_points(pf.n);
    std::optional<Rational> cap;
    for (int r : layers) {
      auto oracle = regen::LayeredOracle(pf.n, r).as_oracle();
      oracle.universe = problem.universe;
      c.filters.push_back(std::move(oracle));
      const Rational v = points.at(r - 2).alpha + eta * points.at(r - 2).beta;
      if (!cap || v < *cap) cap = v;
    }
    if (!no_stop) c.stop_at = cap;
    return c;
  }

  std::string describe() const {
    std::ostringstream s;
    s << "kappa=" << config.kappa_init << " kappa_max=" << config.kappa_max << " episodes=" << config.max_episodes
      << " rounds=" << config.growth_rounds << " pairs=" << config.pairs_per_round << " max_pool=" << config.max_pool
      << " window=" << config.stagnation_window << " time_limit=" << config.time_limit_seconds << " guided=" << config.guided_fraction
      << " reseed_each_episode=" << config.reseed_each_episode << " no_stop=" << no_stop << " filter_r=";
    for (std::size_t i = 0; i < filter_r.size(); ++i) s << (i ? "," : "") << filter_r[i];
    return s.str();
  }
};

void print_bound(const Rational& eta, const Rational& bound) {
  std::cout << "bound: " << to_string(bound) << " (" << decimal(bound) << ")\n";
  std::cout << "proven: " << integer_form(eta, bound) << "\n";
  std::cout << "objective form: " << objective_form(eta, bound) << "\n";
}

std::string default_problem_path(const std::string& cert) { return cert + ".problem.txt"; }

int cmd_bound(const ProblemFlags& pf, const SearchFlags& sf, const std::string& eta_text, const std::string& cert_path,
              std::string problem_path, const std::string& stats_path, std::string manifest_path, bool quiet) {
  const Problem problem = pf.load();
  const Rational eta = parse_rational(eta_text);
  const SearchConfig config = sf.resolve(pf, problem, eta);
  Manifest manifest("bound");
  const auto result = run_search(problem, eta, config, nullptr, [&](const EpisodeStats& s) {
    if (!quiet)
      std::cerr << "episode " << std::setw(4) << s.episode << "  value " << std::setw(14) << to_string(s.value) << "  |I_p| "
                << std::setw(6) << s.selected << "  effective " << std::setw(5) << s.effective << "  kappa " << std::setw(5)
                << s.kappa << "  " << std::fixed << std::setprecision(2) << s.seconds << "s" << std::defaultfloat << "\n";
  });
  if (!result.certified) {
    std::cerr << "error: no certifiable bound found\n";
    return 2;
  }
  if (problem_path.empty()) problem_path = default_problem_path(cert_path);
  if (manifest_path.empty()) manifest_path = cert_path + ".manifest";
  write_atomic(problem_path, result.problem_text);
  write_atomic(cert_path, write_certificate(result.certificate));
  if (!stats_path.empty()) write_atomic(stats_path, stats_csv(result.stats));
  print_bound(eta, result.bound);
  std::cout << "certificate: " << cert_path << " (" << result.certificate.lines.size() << " lines)\n";

  manifest.add("problem", pf.describe());
  manifest.add("symmetry", pf.symmetry ? "on" : "off");
  manifest.add("eta", to_string(eta));
  manifest.add("seed", std::to_string(sf.config.seed));
  manifest.add("config", sf.describe());
  manifest.add("problem-digest", problem_digest(result.problem_text));
  manifest.add("episodes-run", std::to_string(result.stats.size()));
  manifest.add("bound", to_string(result.bound));
  manifest.add("output-certificate", cert_path);
  manifest.add("output-problem", problem_path);
  if (!stats_path.empty()) manifest.add("output-stats", stats_path);
  manifest.write(manifest_path);
  return 0;
}

int cmd_full_lp(const ProblemFlags& pf, const std::string& eta_text, bool force, const std::string& cert_path,
                std::string problem_path) {
  const Problem problem = pf.load();
  const int size = problem.universe.size();
  const int cap = force ? kMaxVariables : kDefaultMaterializationCap;
  std::vector<InequalitySpec> specs;
  try {
    specs = materialize_elemental(size, cap);
  } catch (const std::length_error& e) {
    std::cerr << "error: " << e.what() << "; pass --force to override\n";
    return 3;
  }
  const Rational eta = parse_rational(eta_text);
  const SymmetryGroup group = problem.symmetry_group();
  if (pf.symmetry && group.is_trivial()) throw std::invalid_argument("--symmetry needs a problem with symmetry generators");
  const AssembledLP lp = assemble(specs, problem, eta, pf.symmetry ? &group : nullptr);
  const SolveResult r = solve(lp);
  if (r.status != LpStatus::optimal) {
    std::cerr << "error: the LP is infeasible\n";
    return 2;
  }
  const ProofCertificate cert = make_certificate(r, lp);
  std::cout << "elemental inequalities: " << specs.size() << "\n";
  std::cout << "LP rows: " << lp.rows().size() << "  columns: " << lp.num_columns() << "\n";
  print_bound(eta, r.value);
  if (!cert_path.empty()) {
    if (problem_path.empty()) problem_path = default_problem_path(cert_path);
    write_atomic(problem_path, lp.problem_text());
    write_atomic(cert_path, write_certificate(cert));
    std::cout << "certificate: " << cert_path << " (" << cert.lines.size() << " lines)\n";
  }
  return 0;
}

int cmd_oracle(int n, int r, const std::string& term, bool inner_points) {
  if (inner_points) {
    int layer = 2;
    for (const auto& p : regen::inner_bound_points(n))
      std::cout << "r=" << layer++ << "  alpha=" << to_string(p.alpha) << "  beta=" << to_string(p.beta) << "\n";
    return 0;
  }
  if (term.empty()) throw std::invalid_argument("oracle needs --term or --inner-points");
  const auto spec = regen::build_regen(n, regen::Representation::reduced);
  const regen::LayeredOracle oracle(n, r);
  const TermSet t = parse_term_set(term, spec.universe);
  std::cout << oracle.count(t) << "/" << oracle.normalizer().get_str() << " = " << to_string(oracle(t)) << "\n";
  return 0;
}

int cmd_verify(const std::string& cert_path, const std::string& problem_path) {
  const auto report = verify_certificate(read_file(cert_path), read_file(problem_path));
  if (!report.ok) {
    std::cerr << "REJECTED: " << report.diagnostic << "\n";
    return 1;
  }
  std::cout << "VERIFIED (" << report.lines << " lines)\n";
  std::cout << "proven: " << integer_form(report.eta, report.bound) << "\n";
  std::cout << "objective form: " << objective_form(report.eta, report.bound) << "\n";
  return 0;
}

int cmd_sweep(const ProblemFlags& pf, const SearchFlags& sf, const std::string& etas_text, const std::string& csv_path,
              const std::string& cert_dir, bool no_warm_start) {
  const Problem problem = pf.load();
  const auto etas = parse_eta_list(etas_text);
  unsigned threads = 1;
  if (const char* env = std::getenv("ITBOUND_THREADS")) threads = std::max(1, std::atoi(env));

  std::vector<SweepPoint> points;
  if (sf.filter_r.empty()) {
    points = sweep_eta(problem, etas, sf.resolve(pf, problem, etas.front()), !no_warm_start, threads);
  } else {
    // Filters depend on eta, so every point gets its own resolved config.
    for (std::size_t i = 0; i < etas.size(); ++i) {
      SweepPoint p;
      p.eta = etas[i];
      try {
        SearchConfig c = sf.resolve(pf, problem, etas[i]);
        c.seed = derive_seed(sf.config.seed, i);
        p.result = run_search(problem, etas[i], c);
        p.ok = p.result.certified;
        if (!p.ok) p.error = "no certifiable bound found";
      } catch (const std::exception& e) {
        p.error = e.what();
      }
      points.push_back(std::move(p));
    }
  }

  std::string csv = "eta,bound,bound_decimal\n";
  int failures = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    if (!p.ok) {
      std::cerr << "eta " << to_string(p.eta) << ": " << p.error << "\n";
      ++failures;
      continue;
    }
    csv += to_string(p.eta) + "," + to_string(p.result.bound) + "," + decimal(p.result.bound) + "\n";
    std::cout << "eta " << to_string(p.eta) << "  bound " << to_string(p.result.bound) << "  " << integer_form(p.eta, p.result.bound)
              << "\n";
    if (!cert_dir.empty()) {
      const std::string base = cert_dir + "/eta-" + std::to_string(i);
      write_atomic(base + ".problem.txt", p.result.problem_text);
      write_atomic(base + ".cert", write_certificate(p.result.certificate));
    }
  }
  if (pf.is_regen()) {
    csv += "\n# inner bound points (layered code)\nr,alpha,beta\n";
    int r = 2;
    for (const auto& q : regen::inner_bound_points(pf.n)) csv += std::to_string(r++) + "," + to_string(q.alpha) + "," + to_string(q.beta) + "\n";
  }
  write_atomic(csv_path, csv);
  return failures == 0 ? 0 : 4;
}

int cmd_emit_problem(const ProblemFlags& pf, const std::string& out) {
  const std::string text = emit_problem(pf.load());
  if (out.empty() || out == "-") std::cout << text;
  else write_atomic(out, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Computational converse bounds for entropy linear programs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  ProblemFlags pf;
  SearchFlags sf;
  std::string eta = "1", cert_path, problem_path, stats_path, manifest_path, etas, csv_path, cert_dir, term, out;
  bool force = false, inner = false, quiet = false, no_warm_start = false;
  int r = 2;

  auto* bound = app.add_subcommand("bound", "Search for a certified bound at one eta");
  pf.attach(bound);
  sf.attach(bound);
  bound->add_option("--eta", eta, "Objective alpha + eta*beta, eta as p/q")->required();
  bound->add_option("--out-cert", cert_path, "Certificate output path")->required();
  bound->add_option("--out-problem", problem_path, "Problem file output (default <cert>.problem.txt)");
  bound->add_option("--stats-csv", stats_path, "Per-episode statistics");
  bound->add_option("--manifest", manifest_path, "Run manifest (default <cert>.manifest)");
  bound->add_flag("--quiet", quiet, "No per-episode progress");

  auto* full = app.add_subcommand("full-lp", "Solve the LP over all elemental inequalities");
  pf.attach(full);
  full->add_option("--eta", eta, "Objective alpha + eta*beta")->required();
  full->add_flag("--force", force, "Allow more than 16 variables");
  full->add_option("--out-cert", cert_path, "Certificate output path");
  full->add_option("--out-problem", problem_path, "Problem file output (default <cert>.problem.txt)");

  auto* oracle = app.add_subcommand("oracle", "Entropy of the canonical layered code");
  int oracle_n = 3;
  oracle->add_option("--n", oracle_n, "Number of nodes")->required();
  oracle->add_option("--r", r, "Parity group size");
  oracle->add_option("--term", term, "Term set, e.g. {S_1_2,S_2_1}");
  oracle->add_flag("--inner-points", inner, "List the layered inner bound points");

  auto* verify = app.add_subcommand("verify", "Check a certificate against a problem file");
  verify->add_option("--cert", cert_path, "Certificate")->required()->check(CLI::ExistingFile);
  verify->add_option("--problem", problem_path, "Problem file")->required()->check(CLI::ExistingFile);

  auto* sweep = app.add_subcommand("sweep", "Bounds for a list of eta values");
  pf.attach(sweep);
  sf.attach(sweep);
  sweep->add_option("--etas", etas, "Comma list or start:stop:step")->required();
  sweep->add_option("--out-csv", csv_path, "CSV output")->required();
  sweep->add_option("--cert-dir", cert_dir, "Directory for per-eta certificates");
  sweep->add_flag("--no-warm-start", no_warm_start, "Independent points (may run on ITBOUND_THREADS threads)");

  auto* emit = app.add_subcommand("emit-problem", "Write the problem file");
  pf.attach(emit);
  emit->add_option("--out", out, "Output path (default stdout)");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*bound) return cmd_bound(pf, sf, eta, cert_path, problem_path, stats_path, manifest_path, quiet);
    if (*full) return cmd_full_lp(pf, eta, force, cert_path, problem_path);
    if (*oracle) return cmd_oracle(oracle_n, r, term, inner);
    if (*verify) return cmd_verify(cert_path, problem_path);
    if (*sweep) return cmd_sweep(pf, sf, etas, csv_path, cert_dir, no_warm_start);
    if (*emit) return cmd_emit_problem(pf, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
