#include "itbound/certificate.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "itbound/digest.hpp"
#include "itbound/verify.hpp"

namespace itbound {

std::string write_certificate(const ProofCertificate& c) {
  std::string out;
  out += "problem-digest: " + c.problem_digest + "\n";
  out += "eta: " + to_string(c.eta) + "\n";
  out += "bound: " + to_string(c.bound) + "\n";
  for (const auto& l : c.lines) out += "weight " + to_string(l.weight) + " | " + l.origin + " | " + l.constraint + "\n";
  return out;
}

ProofCertificate parse_certificate(std::string_view text) {
  ProofCertificate c;
  std::istringstream in{std::string(text)};
  std::string line;
  auto header = [&](const std::string& key) {
    if (!std::getline(in, line) || !line.starts_with(key)) throw std::invalid_argument("certificate: missing '" + key + "' line");
    return line.substr(key.size());
  };
  c.problem_digest = header("problem-digest: ");
  c.eta = parse_rational(header("eta: "));
  c.bound = parse_rational(header("bound: "));
  while (std::getline(in, line)) {
    const auto bar1 = line.find(" | ");
    const auto bar2 = bar1 == std::string::npos ? bar1 : line.find(" | ", bar1 + 3);
    if (!line.starts_with("weight ") || bar2 == std::string::npos) throw std::invalid_argument("certificate: malformed line '" + line + "'");
    c.lines.push_back({parse_rational(line.substr(7, bar1 - 7)), line.substr(bar1 + 3, bar2 - bar1 - 3), line.substr(bar2 + 3)});
  }
  return c;
}

namespace {

// The verifier accepts only the textually smallest member of each orbit.
std::string smallest_image(const InequalitySpec& q, const SymmetryGroup& g, const VariableUniverse& u) {
  std::string best = encode(q, u);
  for (const auto& p : g.elements()) {
    const auto image = q.kind == InequalitySpec::Kind::monotonicity
                           ? InequalitySpec::monotonicity(p(q.variable), apply_permutation(q.given, p))
                           : InequalitySpec::cmi(apply_permutation(q.left, p), apply_permutation(q.right, p),
                                                 apply_permutation(q.given, p));
    best = std::min(best, encode(image, u));
  }
  return best;
}

std::string smallest_image(const LinearForm& f, const SymmetryGroup& g, const VariableUniverse& u) {
  std::string best = encode(f, u);
  for (const auto& p : g.elements()) {
    LinearForm image(f.relation());
    for (const auto& [t, v] : f.entropy()) image.add_entropy(apply_permutation(t, p), v);
    image.add_alpha(f.alpha()).add_beta(f.beta()).add_constant(f.constant());
    best = std::min(best, encode(image, u));
  }
  return best;
}

ProofCertificate build(const SolveResult& r, const AssembledLP& lp) {
  ProofCertificate c;
  c.problem_digest = problem_digest(lp.problem_text());
  c.eta = lp.eta();
  c.bound = r.value;
  const auto& u = lp.problem().universe;
  const SymmetryGroup group = lp.problem().symmetry_group();
  for (std::size_t k = 0; k < lp.rows().size(); ++k) {
    if (r.duals[k] == 0) continue;
    const RowOrigin& o = lp.rows()[k].origin;
    ProofCertificate::Line line;
    line.weight = r.duals[k];
    switch (o.kind) {
      case RowOrigin::Kind::problem:
        line.origin = "problem:" + o.name;
        line.constraint = encode(o.declared, u);
        break;
      case RowOrigin::Kind::shannon:
        line.origin = "shannon";
        line.constraint = smallest_image(o.spec, group, u);
        break;
      case RowOrigin::Kind::baseline:
        line.origin = "baseline";
        line.constraint = smallest_image(o.declared, group, u);
        break;
    }
    c.lines.push_back(std::move(line));
  }
  return c;
}

bool checks(const ProofCertificate& c, const AssembledLP& lp) {
  return verify_certificate(write_certificate(c), lp.problem_text()).ok;
}

}  // namespace

ProofCertificate make_certificate(const SolveResult& r, const AssembledLP& lp) {
  if (r.status != LpStatus::optimal) throw std::invalid_argument("make_certificate needs an optimal solve");
  ProofCertificate c = build(r, lp);
  if (checks(c, lp)) return c;

  std::vector<InequalitySpec> used;
  for (std::size_t k = 0; k < lp.first_baseline(); ++k)
    if (r.duals[k] != 0 && lp.rows()[k].origin.kind == RowOrigin::Kind::shannon) used.push_back(lp.rows()[k].origin.spec);
  const SymmetryGroup group = lp.problem().symmetry_group();
  const AssembledLP restricted = assemble(used, lp.problem(), lp.eta(), lp.symmetric() ? &group : nullptr);
  SimplexOptions exact;
  exact.use_float_presolve = false;
  const SolveResult again = solve(restricted, exact);
  if (again.status == LpStatus::optimal) {
    c = build(again, restricted);
    if (checks(c, restricted)) return c;
  }
  throw std::runtime_error("uncertifiable");
}

namespace {

std::string scaled_term(const BigInt& k, const char* symbol, bool first) {
  std::string s;
  if (first) s += k < 0 ? "-" : "";
  else s += k < 0 ? " - " : " + ";
  const BigInt mag = abs(k);
  if (mag != 1) s += mag.get_str();
  return s + symbol;
}

}  // namespace

std::string integer_form(const Rational& eta, const Rational& bound) {
  // alpha + eta*beta >= bound, times the lcm of the denominators, divided by the gcd.
  BigInt l;
  mpz_lcm(l.get_mpz_t(), eta.get_den_mpz_t(), bound.get_den_mpz_t());
  BigInt a = l;
  BigInt b = BigInt(eta * l);
  BigInt c = BigInt(bound * l);
  BigInt g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  a /= g;
  b /= g;
  c /= g;
  std::string s = scaled_term(a, "α", true);
  if (b != 0) s += scaled_term(b, "β", false);
  return s + " ≥ " + c.get_str();
}

std::string objective_form(const Rational& eta, const Rational& bound) {
  std::string s = "α";
  if (eta != 0) s += " + " + (eta == 1 ? std::string() : to_string(eta)) + "β";
  return s + " ≥ " + to_string(bound);
}

}  // namespace itbound
