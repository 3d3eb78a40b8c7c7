#include "itbound/verify.hpp"

#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "itbound/digest.hpp"

namespace itbound {

namespace {

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

[[noreturn]] void fail(const std::string& what) { throw Failure(what); }

using Bits = std::uint64_t;

/// sum h[T] H(T) + a alpha + b beta + c, with rel 0 (>=) or 1 (=).
struct Form {
  std::map<Bits, Rational> h;
  Rational a = 0, b = 0, c = 0;
  int rel = 0;

  void add_h(Bits t, const Rational& v) {
    if (t == 0 || v == 0) return;
    Rational& slot = h[t];
    slot += v;
    if (slot == 0) h.erase(t);
  }
  bool operator==(const Form& o) const { return h == o.h && a == o.a && b == o.b && c == o.c && rel == o.rel; }
  bool operator<(const Form& o) const {
    if (rel != o.rel) return rel < o.rel;
    if (a != o.a) return a < o.a;
    if (b != o.b) return b < o.b;
    if (c != o.c) return c < o.c;
    return h < o.h;
  }
};

struct Universe {
  std::vector<std::string> names;
  std::unordered_map<std::string, int> index;
};

Rational strict_rational(const std::string& s) {
  std::size_t i = s.empty() ? 0 : (s[0] == '-' ? 1 : 0);
  if (i >= s.size()) fail("malformed rational '" + s + "'");
  bool slash = false;
  for (std::size_t k = i; k < s.size(); ++k) {
    if (s[k] == '/') {
      if (slash || k == i || k + 1 == s.size()) fail("malformed rational '" + s + "'");
      slash = true;
    } else if (s[k] < '0' || s[k] > '9') {
      fail("malformed rational '" + s + "'");
    }
  }
  Rational r;
  if (r.set_str(s, 10) != 0 || r.get_den() == 0) fail("malformed rational '" + s + "'");
  r.canonicalize();
  if (r.get_str() != s) fail("rational not in canonical form: '" + s + "'");
  return r;
}

std::string term_text(Bits t, const Universe& u) {
  std::string s = "{";
  bool first = true;
  for (int i = 0; i < 64; ++i)
    if ((t >> i) & 1U) {
      if (!first) s += ',';
      s += u.names.at(i);
      first = false;
    }
  return s + "}";
}

Bits parse_terms(const std::string& text, const Universe& u) {
  if (text.size() < 2 || text.front() != '{' || text.back() != '}') fail("bad term set '" + text + "'");
  const std::string body = text.substr(1, text.size() - 2);
  Bits bits = 0;
  if (body.empty()) return 0;
  std::size_t start = 0;
  while (start <= body.size()) {
    std::size_t comma = body.find(',', start);
    if (comma == std::string::npos) comma = body.size();
    const std::string label = body.substr(start, comma - start);
    auto it = u.index.find(label);
    if (it == u.index.end()) fail("unknown variable '" + label + "'");
    bits |= Bits{1} << it->second;
    start = comma + 1;
  }
  if (term_text(bits, u) != text) fail("term set not in canonical form: '" + text + "'");
  return bits;
}

std::string form_text(const Form& f, const Universe& u) {
  std::string out;
  bool first = true;
  auto put = [&](const Rational& coeff, const std::string& atom) {
    const Rational mag = abs(coeff);
    if (first) {
      if (coeff < 0) out += "-";
    } else {
      out += coeff < 0 ? " - " : " + ";
    }
    first = false;
    if (atom.empty()) {
      out += mag.get_str();
    } else {
      if (mag != 1) out += mag.get_str() + "*";
      out += atom;
    }
  };
  for (const auto& [t, v] : f.h) put(v, "H" + term_text(t, u));
  if (f.a != 0) put(f.a, "alpha");
  if (f.b != 0) put(f.b, "beta");
  if (f.c != 0 || first) put(f.c, "");
  out += f.rel == 0 ? " >= 0" : " = 0";
  return out;
}

/// Parses the canonical textual form and insists that it round-trips.
Form parse_form(const std::string& text, const Universe& u) {
  Form f;
  std::string body;
  if (text.size() > 5 && text.ends_with(" >= 0")) {
    f.rel = 0;
    body = text.substr(0, text.size() - 5);
  } else if (text.size() > 4 && text.ends_with(" = 0")) {
    f.rel = 1;
    body = text.substr(0, text.size() - 4);
  } else {
    fail("constraint lacks '>= 0' or '= 0': '" + text + "'");
  }
  std::size_t pos = 0;
  bool first = true;
  while (pos < body.size()) {
    Rational sign = 1;
    if (first) {
      if (body[pos] == '-') {
        sign = -1;
        ++pos;
      }
    } else {
      if (body.compare(pos, 3, " + ") == 0) sign = 1;
      else if (body.compare(pos, 3, " - ") == 0) sign = -1;
      else fail("malformed constraint '" + text + "'");
      pos += 3;
    }
    first = false;
    std::size_t end = pos;
    int depth = 0;
    while (end < body.size() && (depth > 0 || body[end] != ' ')) {
      if (body[end] == '{') ++depth;
      if (body[end] == '}') --depth;
      ++end;
    }
    std::string token = body.substr(pos, end - pos);
    pos = end;
    Rational coeff = sign;
    std::string atom = token;
    const auto star = token.find('*');
    if (star != std::string::npos) {
      coeff *= strict_rational(token.substr(0, star));
      atom = token.substr(star + 1);
    }
    if (atom == "alpha") f.a += coeff;
    else if (atom == "beta") f.b += coeff;
    else if (atom.starts_with("H{")) f.add_h(parse_terms(atom.substr(1), u), coeff);
    else if (star == std::string::npos) f.c += sign * strict_rational(token);
    else fail("malformed term '" + token + "'");
  }
  if (form_text(f, u) != text) fail("constraint not in canonical form: '" + text + "'");
  return f;
}

struct Declared {
  std::string text;
  Form form;
};

struct ProblemData {
  Universe u;
  std::vector<std::vector<int>> generators;
  std::map<std::string, Declared> constraints;
};

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

ProblemData read_problem(std::string_view text) {
  ProblemData p;
  std::istringstream in{std::string(text)};
  std::string line;
  bool header = false, vars = false, objective = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != "itbound-problem 1") fail("problem file: bad header");
      header = true;
      continue;
    }
    const auto sp = line.find(' ');
    const std::string key = line.substr(0, sp);
    const std::string rest = sp == std::string::npos ? "" : line.substr(sp + 1);
    if (key == "name") continue;
    if (key == "variables") {
      for (const auto& w : words(rest)) {
        if (!p.u.index.emplace(w, static_cast<int>(p.u.names.size())).second) fail("problem file: duplicate variable");
        p.u.names.push_back(w);
      }
      if (p.u.names.empty() || p.u.names.size() > 64) fail("problem file: bad variable count");
      vars = true;
    } else if (key == "objective") {
      if (rest != "alpha + eta*beta") fail("problem file: unsupported objective");
      objective = true;
    } else if (key == "symmetry") {
      if (!vars) fail("problem file: symmetry before variables");
      std::vector<int> image;
      std::vector<bool> hit(p.u.names.size(), false);
      for (const auto& w : words(rest)) {
        auto it = p.u.index.find(w);
        if (it == p.u.index.end() || hit[it->second]) fail("problem file: symmetry is not a permutation");
        hit[it->second] = true;
        image.push_back(it->second);
      }
      if (image.size() != p.u.names.size()) fail("problem file: symmetry has wrong length");
      p.generators.push_back(std::move(image));
    } else if (key == "constraint") {
      if (!vars) fail("problem file: constraint before variables");
      const auto colon = rest.find(": ");
      if (colon == std::string::npos) fail("problem file: constraint lacks ': '");
      const std::string name = rest.substr(0, colon);
      Declared d{rest.substr(colon + 2), {}};
      d.form = parse_form(d.text, p.u);
      if (!p.constraints.emplace(name, std::move(d)).second) fail("problem file: duplicate constraint " + name);
    } else {
      fail("problem file: unknown keyword '" + key + "'");
    }
  }
  if (!header || !vars || !objective) fail("problem file: incomplete");
  return p;
}

Bits permute(Bits t, const std::vector<int>& g) {
  Bits out = 0;
  for (std::size_t i = 0; i < g.size(); ++i)
    if ((t >> i) & 1U) out |= Bits{1} << g[i];
  return out;
}

Form permute(const Form& f, const std::vector<int>& g) {
  Form out;
  out.a = f.a;
  out.b = f.b;
  out.c = f.c;
  out.rel = f.rel;
  for (const auto& [t, v] : f.h) out.add_h(permute(t, g), v);
  return out;
}

std::string mono_text(int v, Bits given, const Universe& u) { return "MONO " + u.names.at(v) + " | " + term_text(given, u); }

std::string cmi_text(Bits left, Bits right, Bits given, const Universe& u) {
  if (right < left) std::swap(left, right);
  return "CMI " + term_text(left, u) + " ; " + term_text(right, u) + " | " + term_text(given, u);
}

std::vector<std::vector<int>> close_group(const std::vector<std::vector<int>>& gens, std::size_t n) {
  std::vector<int> id(n);
  for (std::size_t i = 0; i < n; ++i) id[i] = static_cast<int>(i);
  std::set<std::vector<int>> seen{id};
  std::vector<std::vector<int>> frontier{id};
  while (!frontier.empty()) {
    std::vector<std::vector<int>> next;
    for (const auto& e : frontier)
      for (const auto& g : gens) {
        std::vector<int> p(n);
        for (std::size_t i = 0; i < n; ++i) p[i] = g[e[i]];
        if (seen.insert(p).second) next.push_back(std::move(p));
      }
    frontier = std::move(next);
    if (seen.size() > 1'000'000) fail("symmetry group too large");
  }
  return {seen.begin(), seen.end()};
}

}  // namespace

VerifyReport verify_certificate(std::string_view certificate, std::string_view problem) {
  VerifyReport report;
  try {
    const ProblemData p = read_problem(problem);
    const auto& u = p.u;

    // The declared symmetry must be an automorphism of the constraint system.
    std::set<Form> declared;
    for (const auto& [name, d] : p.constraints) declared.insert(d.form);
    for (const auto& g : p.generators)
      for (const auto& [name, d] : p.constraints)
        if (!declared.count(permute(d.form, g))) fail("declared symmetry does not preserve constraint " + name);
    const auto group = close_group(p.generators, u.names.size());
    // Under symmetry, orbit-equivalent lines prove the same thing. Only the
    // textually smallest member of each orbit is accepted, so a certificate
    // has exactly one spelling.
    const bool symmetric = group.size() > 1;
    const std::string not_minimal = "line is not the smallest image of its orbit";
    std::unordered_map<Bits, Bits> rep_cache;
    auto rep = [&](Bits t) {
      auto it = rep_cache.find(t);
      if (it != rep_cache.end()) return it->second;
      Bits best = t;
      for (const auto& g : group) best = std::min(best, permute(t, g));
      rep_cache.emplace(t, best);
      return best;
    };

    std::istringstream in{std::string(certificate)};
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line)) lines.push_back(line);
    if (lines.size() < 3) fail("certificate too short");
    if (!lines[0].starts_with("problem-digest: ")) fail("missing problem-digest header");
    if (lines[0].substr(16) != problem_digest(problem)) fail("problem digest mismatch");
    if (!lines[1].starts_with("eta: ")) fail("missing eta header");
    report.eta = strict_rational(lines[1].substr(5));
    if (report.eta < 0) fail("eta must be nonnegative");
    if (!lines[2].starts_with("bound: ")) fail("missing bound header");
    report.bound = strict_rational(lines[2].substr(7));

    std::map<Bits, Rational> h;
    Rational a = 0, b = 0, c = 0;
    for (std::size_t k = 3; k < lines.size(); ++k) {
      const std::string& l = lines[k];
      const std::string where = "line " + std::to_string(k + 1) + ": ";
      if (!l.starts_with("weight ")) fail(where + "expected 'weight'");
      const auto bar1 = l.find(" | ");
      if (bar1 == std::string::npos) fail(where + "missing origin");
      const auto bar2 = l.find(" | ", bar1 + 3);
      if (bar2 == std::string::npos) fail(where + "missing constraint");
      const Rational w = strict_rational(l.substr(7, bar1 - 7));
      const std::string origin = l.substr(bar1 + 3, bar2 - bar1 - 3);
      const std::string constraint = l.substr(bar2 + 3);

      Form f;
      if (origin == "shannon") {
        const auto bar = constraint.rfind(" | ");
        if (bar == std::string::npos) fail(where + "inequality lacks ' | '");
        const std::string head = constraint.substr(0, bar);
        const Bits given = parse_terms(constraint.substr(bar + 3), u);
        if (head.starts_with("MONO ")) {
          auto it = u.index.find(head.substr(5));
          if (it == u.index.end()) fail(where + "unknown variable in MONO");
          const Bits v = Bits{1} << it->second;
          if (given & v) fail(where + "MONO variable inside conditioning set");
          if (symmetric)
            for (const auto& g : group)
              if (mono_text(g[it->second], permute(given, g), u) < constraint) fail(where + not_minimal);
          f.add_h(given | v, 1);
          f.add_h(given, -1);
        } else if (head.starts_with("CMI ")) {
          const std::string sides = head.substr(4);
          const auto semi = sides.find(" ; ");
          if (semi == std::string::npos) fail(where + "CMI lacks ' ; '");
          const Bits left = parse_terms(sides.substr(0, semi), u);
          const Bits right = parse_terms(sides.substr(semi + 3), u);
          if (left == 0 || right == 0) fail(where + "CMI side is empty");
          if ((left & right) || (left & given) || (right & given)) fail(where + "CMI sets overlap");
          if (!(left < right)) fail(where + "CMI sides not in canonical order");
          if (symmetric)
            for (const auto& g : group)
              if (cmi_text(permute(left, g), permute(right, g), permute(given, g), u) < constraint) fail(where + not_minimal);
          f.add_h(given | left, 1);
          f.add_h(given | right, 1);
          f.add_h(given | left | right, -1);
          f.add_h(given, -1);
        } else {
          fail(where + "unknown inequality kind");
        }
      } else if (origin.starts_with("problem:")) {
        auto it = p.constraints.find(origin.substr(8));
        if (it == p.constraints.end()) fail(where + "unknown problem constraint " + origin.substr(8));
        if (it->second.text != constraint) fail(where + "constraint text differs from the problem file");
        f = it->second.form;
      } else if (origin == "baseline") {
        f = parse_form(constraint, u);
        const bool single_h = f.h.size() == 1 && f.h.begin()->second == 1 && f.a == 0 && f.b == 0;
        const bool single_rate = f.h.empty() && ((f.a == 1 && f.b == 0) || (f.a == 0 && f.b == 1));
        if (f.rel != 0 || f.c != 0 || !(single_h || single_rate)) fail(where + "not a nonnegativity constraint");
        if (symmetric && single_h)
          for (const auto& g : group)
            if (form_text(permute(f, g), u) < constraint) fail(where + not_minimal);
      } else {
        fail(where + "unknown origin tag '" + origin + "'");
      }
      if (f.rel == 0 && w < 0) fail(where + "negative weight on an inequality");
      for (const auto& [t, v] : f.h) {
        Rational& slot = h[rep(t)];
        slot += w * v;
      }
      a += w * f.a;
      b += w * f.b;
      c += w * f.c;
      ++report.lines;
    }
    for (const auto& [t, v] : h)
      if (v != 0) fail("entropy term H" + term_text(t, u) + " does not cancel (residual " + v.get_str() + ")");
    if (a != 1) fail("alpha coefficient is " + a.get_str() + ", expected 1");
    if (b != report.eta) fail("beta coefficient is " + b.get_str() + ", expected eta = " + report.eta.get_str());
    if (-c != report.bound) fail("weighted constants give " + Rational(-c).get_str() + ", certificate claims " + report.bound.get_str());
    report.ok = true;
  } catch (const Failure& e) {
    report.ok = false;
    report.diagnostic = e.what();
  }
  return report;
}

}  // namespace itbound
