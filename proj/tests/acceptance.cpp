// End-to-end checks, one PASS/FAIL line per criterion.
//
//   acceptance            criteria 1-6, 8, 9
//   acceptance 7          the (6,5,5) headline bounds, through the CLI
//   acceptance 2 5 ...    any subset
//
// Artifacts (certificates, problem files, logs) go to ./acceptance-artifacts.
// Criterion 8 also verifies every headline certificate found there.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "itbound/certificate.hpp"
#include "itbound/regen.hpp"
#include "itbound/search.hpp"
#include "itbound/verify.hpp"

#ifndef ITBOUND_CLI
#error "ITBOUND_CLI must name the itbound executable"
#endif
#ifndef ITBOUND_VERIFY
#error "ITBOUND_VERIFY must name the itbound-verify executable"
#endif

namespace fs = std::filesystem;
using namespace itbound;
using regen::Representation;

namespace {

// Pinned settings. Every comparison below is exact; there are no numeric
// tolerances anywhere in this file.
constexpr int kCountMaxN = 10;
const BigInt kCount30("116769423390");
constexpr int kSmallSeeds = 5;
constexpr int kSmallEpisodes = 50;
constexpr int kSandwichPairs = 100;
constexpr double kHeadlineBudgetMinutes = 30;
constexpr double kHeadlinePerSeedMinutes = 10;
constexpr int kHeadlineMaxSeeds = 10;
constexpr int kDeterminismEpisodes = 40;
constexpr int kBinaryMutationSample = 200;
constexpr std::size_t kSampledAbove = 4000;  // bytes

const fs::path kArtifacts = "acceptance-artifacts";

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << text;
}

struct Command {
  int status = -1;
  std::string output;
};

Command run(const std::string& cmd) {
  Command c;
  FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
  if (!pipe) return c;
  std::array<char, 4096> buf{};
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) c.output.append(buf.data(), n);
  const int raw = pclose(pipe);
  c.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return c;
}

std::string slug(const Rational& r) {
  auto s = to_string(r);
  std::replace(s.begin(), s.end(), '/', '_');
  return s;
}

std::string quote(const fs::path& p) { return "'" + p.string() + "'"; }

Problem regen_problem(int n) { return regen::build_regen(n, Representation::reduced).to_problem(true); }

Rational full_value(int n, const Rational& eta) {
  const auto problem = regen_problem(n);
  const auto g = problem.symmetry_group();
  const auto r = solve(assemble(materialize_elemental(n * (n - 1)), problem, eta, &g));
  if (r.status != LpStatus::optimal) throw std::runtime_error("full LP not optimal");
  return r.value;
}

/// Certificates produced along the way, for criteria 8 and 9.
struct Artifact {
  std::string label;
  std::string certificate;
  std::string problem;
};
std::vector<Artifact> artifacts;

void keep(const std::string& label, const std::string& cert, const std::string& problem) {
  write_file(kArtifacts / (label + ".cert"), cert);
  write_file(kArtifacts / (label + ".problem"), problem);
  artifacts.push_back({label, cert, problem});
}

// ---------------------------------------------------------------------------

Outcome elemental_counting() {
  for (int n = 1; n <= kCountMaxN; ++n) {
    ElementalEnumerator e(n);
    std::set<InequalitySpec> seen;
    while (auto q = e.next())
      if (!is_elemental(*q, n) || !seen.insert(*q).second) return {false, "bad or repeated spec at N=" + std::to_string(n)};
    // N single-variable rows plus C(N,2) 2^(N-2) pair rows.
    const BigInt formula = n < 2 ? BigInt(n) : BigInt(n) + BigInt(n * (n - 1) / 2) * (BigInt(1) << (n - 2));
    if (BigInt(seen.size()) != formula || count_elemental(n) != formula)
      return {false, "count mismatch at N=" + std::to_string(n)};
  }
  if (count_elemental(30) != kCount30) return {false, "count_elemental(30) = " + count_elemental(30).get_str()};
  return {true, "N=1..10 enumerated; count_elemental(30) = 116769423390"};
}

Outcome oracle_fidelity() {
  const auto five = regen::build_regen(5, Representation::reduced);
  const TermSet pair = TermSet::singleton(five.message(1, 2)) | TermSet::singleton(five.message(2, 1));
  const Rational v = regen::LayeredOracle(5, 3)(pair);
  if (v != ratio(6, 20)) return {false, "H(S_1_2,S_2_1) at n=5, r=3 is " + to_string(v)};
  int checked = 0;
  for (int n = 3; n <= 6; ++n) {
    const auto spec = regen::build_regen(n, Representation::reduced);
    for (int r = 2; r <= n; ++r) {
      const regen::LayeredOracle o(n, r);
      if (o(spec.universe.all()) != 1) return {false, "eval(all) != 1 at n=" + std::to_string(n)};
      const Rational beta = ratio(r, n * (n - 1));
      for (int i = 0; i < spec.universe.size(); ++i)
        if (o(TermSet::singleton(i)) != beta) return {false, "single message differs from beta"};
      ++checked;
    }
  }
  return {true, "H(S_1_2,S_2_1) = 3/10; eval(all) = 1 and H(S_i_j) = beta for " + std::to_string(checked) + " (n, r) pairs"};
}

Outcome oracle_validity() {
  long rows = 0;
  for (int n = 3; n <= 4; ++n)
    for (int r = 2; r <= n; ++r) {
      const auto oracle = regen::LayeredOracle(n, r).as_oracle();
      ElementalEnumerator e(n * (n - 1));
      while (auto q = e.next()) {
        if (slack(*q, oracle) < 0)
          return {false, "violated at n=" + std::to_string(n) + " r=" + std::to_string(r) + ": " + encode(*q, oracle.universe)};
        ++rows;
      }
    }
  return {true, std::to_string(rows) + " elemental rows checked, all slacks >= 0"};
}

const std::vector<Rational> kSmallEtas = {0, Rational(1, 2), 1, 2};

std::map<std::string, std::string> small_certificates() {
  std::map<std::string, std::string> out;
  const auto problem = regen_problem(3);
  for (const auto& eta : kSmallEtas)
    for (int seed = 1; seed <= kSmallSeeds; ++seed) {
      SearchConfig c;
      c.seed = static_cast<std::uint64_t>(seed);
      c.max_episodes = kSmallEpisodes;
      c.symmetry = true;
      const auto r = run_search(problem, eta, c);
      const std::string label = "n3-eta" + to_string(eta) + "-seed" + std::to_string(seed);
      out[label] = r.certified ? write_certificate(r.certificate) + "\n" + r.problem_text : "";
    }
  return out;
}

Outcome brute_force_equivalence() {
  const auto problem = regen_problem(3);
  std::ostringstream detail;
  for (const auto& eta : kSmallEtas) {
    const Rational full = full_value(3, eta);
    for (int seed = 1; seed <= kSmallSeeds; ++seed) {
      SearchConfig c;
      c.seed = static_cast<std::uint64_t>(seed);
      c.max_episodes = kSmallEpisodes;
      c.symmetry = true;
      const auto r = run_search(problem, eta, c);
      if (!r.certified) return {false, "no certificate at eta=" + to_string(eta)};
      const std::string cert = write_certificate(r.certificate);
      if (!verify_certificate(cert, r.problem_text).ok) return {false, "certificate rejected at eta=" + to_string(eta)};
      if (r.bound != full)
        return {false, "eta=" + to_string(eta) + " seed " + std::to_string(seed) + ": " + to_string(r.bound) + " vs full " +
                           to_string(full)};
      keep("n3-eta" + slug(eta) + "-seed" + std::to_string(seed), cert, r.problem_text);
    }
    detail << "eta=" << to_string(eta) << " -> " << to_string(full) << "  ";
  }
  return {true, detail.str() + "(5 seeds each, all certificates verify)"};
}

Outcome sandwich() {
  const auto problem = regen_problem(3);
  const auto all = materialize_elemental(6);
  std::map<Rational, Rational> full;
  for (const auto& eta : kSmallEtas) full[eta] = solve(assemble(all, problem, eta)).value;
  std::mt19937_64 rng(2024);
  for (int k = 0; k < kSandwichPairs; ++k) {
    const Rational eta = kSmallEtas[rng() % kSmallEtas.size()];
    const unsigned keep_b = 1 + rng() % 4, keep_a = 1 + rng() % 4;
    std::vector<InequalitySpec> b, a;
    for (const auto& q : all)
      if (rng() % 4 < keep_b) b.push_back(q);
    for (const auto& q : b)
      if (rng() % 4 < keep_a) a.push_back(q);
    const Rational va = solve(assemble(a, problem, eta)).value;
    const Rational vb = solve(assemble(b, problem, eta)).value;
    if (!(va <= vb && vb <= full[eta]))
      return {false, "pair " + std::to_string(k) + ": " + to_string(va) + ", " + to_string(vb) + ", " + to_string(full[eta])};
  }
  return {true, std::to_string(kSandwichPairs) + " nested pairs satisfy value(A) <= value(B) <= full"};
}

Outcome tightness_433() {
  struct Case {
    Rational eta;
    std::vector<int> layers;
  };
  const std::vector<Case> cases = {{Rational(3, 2), {2, 3}}, {Rational(1, 2), {3, 4}}};
  const auto points = regen::inner_bound_points(4);
  const auto problem = regen_problem(4);
  std::set<int> touched;
  std::ostringstream detail;
  for (const auto& c : cases) {
    const Rational full = full_value(4, c.eta);
    SearchConfig config;
    config.symmetry = true;
    config.seed = 1;
    for (int r : c.layers) config.filters.push_back(regen::LayeredOracle(4, r).as_oracle());
    Rational cap = -1;
    for (int r : c.layers) {
      const Rational v = points[r - 2].alpha + c.eta * points[r - 2].beta;
      if (cap < 0 || v < cap) cap = v;
    }
    config.stop_at = cap;
    const auto result = run_search(problem, c.eta, config);
    if (!result.certified) return {false, "no certificate at eta=" + to_string(c.eta)};
    const std::string cert = write_certificate(result.certificate);
    if (!verify_certificate(cert, result.problem_text).ok) return {false, "certificate rejected"};
    if (result.bound != full)
      return {false, "eta=" + to_string(c.eta) + ": search " + to_string(result.bound) + ", full LP " + to_string(full)};
    for (int r : c.layers) {
      if (points[r - 2].alpha + c.eta * points[r - 2].beta != result.bound)
        return {false, "line at eta=" + to_string(c.eta) + " not tight at r=" + std::to_string(r)};
      touched.insert(r);
    }
    keep("n4-eta" + slug(c.eta), cert, result.problem_text);
    detail << integer_form(c.eta, result.bound) << " (" << result.stats.size() << " episodes)  ";
  }
  if (touched != std::set<int>{2, 3, 4}) return {false, "not every inner point is supported"};
  return {true, detail.str() + "tight at (1/2,1/6), (3/8,1/4), (1/3,1/3); equal to the full LP"};
}

struct Headline {
  Rational eta;
  int layer;
  Rational target;
  std::string tag;
};
const std::vector<Headline> kHeadlines = {{Rational(5, 9), 4, Rational(8, 27), "n6-eta5_9"},
                                          {Rational(25, 26), 3, Rational(9, 26), "n6-eta25_26"}};

std::string bound_command(const Headline& h, int seed, const fs::path& cert, const std::string& extra) {
  std::ostringstream s;
  s << ITBOUND_CLI << " bound --n 6 --symmetry --eta " << to_string(h.eta) << " --filter-r " << h.layer << " --seed " << seed
    << " --out-cert " << quote(cert) << " --quiet " << extra;
  return s.str();
}

std::optional<Rational> printed_bound(const std::string& output) {
  const auto at = output.find("bound: ");
  if (at == std::string::npos) return std::nullopt;
  const auto end = output.find_first_of(" \n", at + 7);
  return parse_rational(output.substr(at + 7, end - at - 7));
}

Outcome headline() {
  const auto problem = regen_problem(6);
  const auto g = problem.symmetry_group();
  std::ostringstream detail;
  bool all_targets = true;
  for (const auto& h : kHeadlines) {
    const Rational floor = solve(assemble({}, problem, h.eta, &g)).value;
    const auto start = std::chrono::steady_clock::now();
    std::optional<Rational> best;
    int seeds = 0;
    double minutes = 0;
    for (int seed = 1; seed <= kHeadlineMaxSeeds; ++seed) {
      minutes = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() / 60;
      const double left = kHeadlineBudgetMinutes - minutes;
      if (left < 0.5) break;
      const double limit = std::min(left, kHeadlinePerSeedMinutes) * 60;
      const fs::path cert = kArtifacts / (h.tag + "-seed" + std::to_string(seed) + ".cert");
      fs::create_directories(kArtifacts);
      const auto out = run(bound_command(h, seed, cert, "--episodes 1000000 --time-limit " + std::to_string(static_cast<int>(limit))));
      write_file(kArtifacts / (h.tag + "-seed" + std::to_string(seed) + ".log"), out.output);
      ++seeds;
      const auto bound = printed_bound(out.output);
      if (out.status != 0 || !bound) return {false, h.tag + " seed " + std::to_string(seed) + " failed: " + out.output};
      const fs::path problem_file = cert.string() + ".problem.txt";
      const auto check = run(std::string(ITBOUND_VERIFY) + " " + quote(cert) + " " + quote(problem_file));
      if (check.status != 0) return {false, h.tag + " certificate rejected: " + check.output};
      if (*bound < floor) return {false, h.tag + " bound below the constraints-only value"};
      if (!best || *bound > *best) best = bound;
      if (*bound >= h.target) break;
    }
    minutes = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() / 60;
    const bool reached = best && *best == h.target;
    all_targets = all_targets && reached;
    std::ostringstream m;
    m.precision(3);
    m << minutes;
    detail << "eta=" << to_string(h.eta) << ": best " << (best ? to_string(*best) : "none") << " (target " << to_string(h.target)
           << ", floor " << to_string(floor) << ", " << seeds << " seeds, " << m.str() << " min, certificates verify)  ";
  }
  return {all_targets, detail.str() + (all_targets ? "" : "target not reached within the budget")};
}

/// Lines after the header are the weight/constraint lines.
std::vector<std::pair<std::size_t, std::size_t>> body_lines(const std::string& cert) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t pos = 0;
  while (pos < cert.size()) {
    const auto end = cert.find('\n', pos);
    const std::size_t stop = end == std::string::npos ? cert.size() : end;
    if (cert.compare(pos, 7, "weight ") == 0) out.emplace_back(pos, stop);
    pos = stop + 1;
  }
  return out;
}

Outcome independence() {
  for (const auto& entry : fs::directory_iterator(kArtifacts)) {
    const auto p = entry.path();
    if (p.extension() != ".cert" || p.filename().string().rfind("n6-", 0) != 0) continue;
    const fs::path problem = p.string() + ".problem.txt";
    if (fs::exists(problem)) artifacts.push_back({p.stem().string(), read_file(p), read_file(problem)});
  }
  if (artifacts.empty()) return {false, "no certificates to check"};
  int headline_certs = 0;
  for (const auto& a : artifacts) {
    const fs::path cert = kArtifacts / ("check-" + a.label + ".cert"), prob = kArtifacts / ("check-" + a.label + ".problem");
    write_file(cert, a.certificate);
    write_file(prob, a.problem);
    const auto r = run(std::string(ITBOUND_VERIFY) + " " + quote(cert) + " " + quote(prob));
    if (r.status != 0) return {false, a.label + " rejected by the standalone verifier: " + r.output};
    if (a.label.rfind("n6-", 0) == 0) ++headline_certs;
  }

  // Single-byte mutations of weight and constraint lines. Exhaustive (all 255
  // replacement bytes) on the seed-1 (3,2,2) certificates, three replacements
  // per byte on the other small ones, and two random bytes of every line on
  // the large headline certificates, where one verification costs ~0.1 s.
  long mutations = 0;
  std::mt19937_64 rng(99);
  std::vector<std::tuple<std::string, std::string, std::string>> sample;
  for (const auto& a : artifacts) {
    const bool exhaustive = a.label.starts_with("n3-") && a.label.ends_with("-seed1");
    const bool sampled = a.certificate.size() > kSampledAbove;
    for (const auto& [from, to] : body_lines(a.certificate))
      for (std::size_t i = from; i < to; ++i) {
        if (sampled && rng() % (to - from) >= 2) continue;
        const unsigned char original = static_cast<unsigned char>(a.certificate[i]);
        std::vector<unsigned char> replacements;
        if (exhaustive) {
          for (int b = 0; b < 256; ++b)
            if (b != original) replacements.push_back(static_cast<unsigned char>(b));
        } else {
          replacements = {static_cast<unsigned char>(original ^ 1), static_cast<unsigned char>(original + 1),
                          static_cast<unsigned char>(rng() % 256)};
          if (replacements.back() == original) replacements.pop_back();
        }
        for (unsigned char b : replacements) {
          std::string mutated = a.certificate;
          mutated[i] = static_cast<char>(b);
          ++mutations;
          if (verify_certificate(mutated, a.problem).ok)
            return {false, a.label + ": mutation at byte " + std::to_string(i) + " accepted"};
          if (rng() % 50 == 0) sample.emplace_back(a.label, mutated, a.problem);
        }
      }
  }
  // The same through the standalone binary, on a sample.
  std::shuffle(sample.begin(), sample.end(), rng);
  if (sample.size() > static_cast<std::size_t>(kBinaryMutationSample)) sample.resize(kBinaryMutationSample);
  for (const auto& [label, cert, prob] : sample) {
    write_file(kArtifacts / "mutated.cert", cert);
    write_file(kArtifacts / "mutated.problem", prob);
    const auto r = run(std::string(ITBOUND_VERIFY) + " " + quote(kArtifacts / "mutated.cert") + " " + quote(kArtifacts / "mutated.problem"));
    if (r.status == 0) return {false, label + ": mutated certificate accepted by the binary"};
  }
  return {true, std::to_string(artifacts.size()) + " certificates verify standalone (" + std::to_string(headline_certs) +
                    " headline); " + std::to_string(mutations) + " single-byte mutations rejected (" + std::to_string(sample.size()) +
                    " also through the binary)"};
}

Outcome determinism() {
  const auto first = small_certificates();
  const auto second = small_certificates();
  if (first != second) return {false, "(3,2,2) certificates differ between runs"};
  for (const auto& [label, text] : first)
    if (text.empty()) return {false, label + " uncertified"};

  const auto& h = kHeadlines.front();
  std::string bytes[2];
  for (int k = 0; k < 2; ++k) {
    const fs::path cert = kArtifacts / ("rerun" + std::to_string(k) + ".cert");
    const auto out = run(bound_command(h, 1, cert, "--no-stop --episodes " + std::to_string(kDeterminismEpisodes)));
    if (out.status != 0) return {false, "headline rerun failed: " + out.output};
    bytes[k] = read_file(cert) + read_file(cert.string() + ".problem.txt");
  }
  if (bytes[0] != bytes[1]) return {false, "headline certificates differ between identical runs"};
  return {true, std::to_string(first.size()) + " (3,2,2) certificates and a " + std::to_string(kDeterminismEpisodes) +
                    "-episode (6,5,5) run are byte-identical on rerun"};
}

const std::map<int, std::pair<const char*, std::function<Outcome()>>> kCriteria = {
    {1, {"elemental counting", elemental_counting}},
    {2, {"layered oracle fidelity", oracle_fidelity}},
    {3, {"oracle validity at n <= 4", oracle_validity}},
    {4, {"(3,2,2) search equals the full LP", brute_force_equivalence}},
    {5, {"subset sandwich at n = 3", sandwich}},
    {6, {"(4,3,3) tightness", tightness_433}},
    {7, {"(6,5,5) headline bounds", headline}},
    {8, {"standalone certificate verification", independence}},
    {9, {"determinism", determinism}},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> chosen;
  for (int i = 1; i < argc; ++i) chosen.push_back(std::stoi(argv[i]));
  if (chosen.empty()) chosen = {1, 2, 3, 4, 5, 6, 8, 9};
  fs::create_directories(kArtifacts);
  int failures = 0;
  for (int id : chosen) {
    const auto it = kCriteria.find(id);
    if (it == kCriteria.end()) {
      std::cerr << "unknown criterion " << id << "\n";
      return 2;
    }
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = it->second.second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << id << "  " << it->second.first << "  [" << static_cast<long>(secs)
              << "s]  " << o.detail << std::endl;
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
