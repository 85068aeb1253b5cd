// SPDX-License-Identifier: Apache-2.0
#include "qatp/poly.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <optional>

#include "qatp/errors.hpp"

namespace qatp {

bool GradedLex::operator()(const Exponent& a, const Exponent& b) const {
  const unsigned da = std::accumulate(a.begin(), a.end(), 0u);
  const unsigned db = std::accumulate(b.begin(), b.end(), 0u);
  if (da != db) return da < db;
  return a < b;
}

Polynomial::Polynomial(std::vector<std::string> vars)
    : vars_(std::make_shared<std::vector<std::string>>(std::move(vars))) {
  for (std::size_t i = 0; i < vars_->size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if ((*vars_)[i] == (*vars_)[j]) throw PreconditionError("duplicate variable " + (*vars_)[i]);
}

Polynomial Polynomial::constant(std::vector<std::string> vars, BigInt c) {
  Polynomial p(std::move(vars));
  p.add_term(Exponent(p.vars().size(), 0), c);
  return p;
}

Polynomial Polynomial::variable(std::vector<std::string> vars, const std::string& name) {
  Polynomial p(std::move(vars));
  Exponent e(p.vars().size(), 0);
  e[p.var_index(name)] = 1;
  p.add_term(e, 1);
  return p;
}

std::size_t Polynomial::var_index(const std::string& name) const {
  auto it = std::find(vars_->begin(), vars_->end(), name);
  if (it == vars_->end()) throw PreconditionError("unknown variable " + name);
  return static_cast<std::size_t>(it - vars_->begin());
}

bool Polynomial::has_var(const std::string& name) const {
  return std::find(vars_->begin(), vars_->end(), name) != vars_->end();
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && std::all_of(terms_.begin()->first.begin(),
                                                              terms_.begin()->first.end(),
                                                              [](unsigned e) { return e == 0; }));
}

void Polynomial::add_term(const Exponent& e, const BigInt& c) {
  if (e.size() != vars_->size()) throw PreconditionError("exponent length does not match variable list");
  if (c == 0) return;
  auto [it, fresh] = terms_.try_emplace(e, c);
  if (fresh) return;
  it->second += c;
  if (it->second == 0) terms_.erase(it);
}

int Polynomial::degree(std::size_t var) const {
  if (var >= vars_->size()) throw PreconditionError("variable index out of range");
  if (terms_.empty()) return -1;
  unsigned d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e[var]);
  return static_cast<int>(d);
}

int Polynomial::total_degree() const {
  if (terms_.empty()) return -1;
  const Exponent& e = terms_.rbegin()->first;
  return static_cast<int>(std::accumulate(e.begin(), e.end(), 0u));
}

Polynomial Polynomial::coeff(std::size_t var, unsigned d) const {
  if (var >= vars_->size()) throw PreconditionError("variable index out of range");
  Polynomial r;
  r.vars_ = vars_;
  for (const auto& [e, c] : terms_)
    if (e[var] == d) {
      Exponent f = e;
      f[var] = 0;
      r.terms_.emplace(std::move(f), c);
    }
  return r;
}

Polynomial Polynomial::lc(std::size_t var) const {
  const int d = degree(var);
  if (d < 0) return Polynomial(*this);
  return coeff(var, static_cast<unsigned>(d));
}

std::vector<std::size_t> Polynomial::support() const {
  std::vector<std::size_t> s;
  for (std::size_t v = 0; v < vars_->size(); ++v)
    for (const auto& [e, c] : terms_)
      if (e[v] > 0) {
        s.push_back(v);
        break;
      }
  return s;
}

void Polynomial::check_ring(const Polynomial& o) const {
  if (vars_ != o.vars_ && *vars_ != *o.vars_) throw PreconditionError("polynomials over different variable lists");
}

Polynomial Polynomial::operator-() const {
  Polynomial r(*this);
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (vars_->empty() && terms_.empty()) vars_ = o.vars_;
  check_ring(o);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  if (vars_->empty() && terms_.empty()) vars_ = o.vars_;
  check_ring(o);
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  a.check_ring(b);
  Polynomial r;
  r.vars_ = a.vars_;
  const std::size_t n = a.vars_->size();
  Exponent e(n);
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t i = 0; i < n; ++i) e[i] = ea[i] + eb[i];
      r.add_term(e, ca * cb);
    }
  return r;
}

Polynomial Polynomial::scaled(const BigInt& k) const {
  Polynomial r;
  r.vars_ = vars_;
  if (k == 0) return r;
  for (const auto& [e, c] : terms_) r.terms_.emplace(e, c * k);
  return r;
}

Polynomial Polynomial::shifted(std::size_t var, unsigned k) const {
  if (var >= vars_->size()) throw PreconditionError("variable index out of range");
  Polynomial r;
  r.vars_ = vars_;
  for (const auto& [e, c] : terms_) {
    Exponent f = e;
    f[var] += k;
    r.terms_.emplace(std::move(f), c);
  }
  return r;
}

Polynomial Polynomial::pow(unsigned k) const {
  Polynomial r = constant(*vars_, 1);
  r.vars_ = vars_;
  Polynomial base = *this;
  while (k) {
    if (k & 1) r = r * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return r;
}

BigInt Polynomial::evaluate(const std::map<std::string, BigInt>& point) const {
  std::vector<BigInt> v(vars_->size());
  for (std::size_t i : support()) {
    auto it = point.find((*vars_)[i]);
    if (it == point.end()) throw PreconditionError("no value for variable " + (*vars_)[i]);
    v[i] = it->second;
  }
  return evaluate(v);
}

BigInt Polynomial::evaluate(const std::vector<BigInt>& point) const {
  if (point.size() != vars_->size()) throw PreconditionError("point has the wrong number of coordinates");
  BigInt sum = 0;
  for (const auto& [e, c] : terms_) {
    BigInt t = c;
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i]) t *= boost::multiprecision::pow(point[i], e[i]);
    sum += t;
  }
  return sum;
}

Polynomial Polynomial::rebased(const std::vector<std::string>& vars) const {
  Polynomial r(vars);
  std::vector<std::size_t> map(vars_->size());
  for (std::size_t i = 0; i < vars_->size(); ++i) map[i] = r.var_index((*vars_)[i]);
  for (const auto& [e, c] : terms_) {
    Exponent f(vars.size(), 0);
    for (std::size_t i = 0; i < e.size(); ++i) f[map[i]] = e[i];
    r.terms_.emplace(std::move(f), c);
  }
  return r;
}

bool Polynomial::operator==(const Polynomial& o) const {
  return (vars_ == o.vars_ || *vars_ == *o.vars_) && terms_ == o.terms_;
}

std::string to_string(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    const auto& [e, c] = *it;
    const bool neg = c < 0;
    const BigInt mag = neg ? BigInt(-c) : c;
    if (first)
      out += neg ? "-" : "";
    else
      out += neg ? " - " : " + ";
    first = false;
    std::string mono;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (!e[i]) continue;
      if (!mono.empty()) mono += "*";
      mono += p.vars()[i];
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    if (mono.empty())
      out += mag.str();
    else if (mag == 1)
      out += mono;
    else
      out += mag.str() + "*" + mono;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t off) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < off && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

struct Token {
  enum Kind { Int, Ident, Op, End } kind = End;
  std::string text;
  std::size_t off = 0;
};

std::vector<Token> tokenize(std::string_view src, std::size_t begin, std::size_t end) {
  std::vector<Token> out;
  std::size_t i = begin;
  while (i < end) {
    char ch = src[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++i;
    } else if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::size_t j = i;
      while (j < end && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Token::Int, std::string(src.substr(i, j - i)), i});
      i = j;
    } else if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t j = i;
      while (j < end && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      out.push_back({Token::Ident, std::string(src.substr(i, j - i)), i});
      i = j;
    } else if (std::string_view("+-*^()").find(ch) != std::string_view::npos) {
      out.push_back({Token::Op, std::string(1, ch), i});
      ++i;
    } else {
      auto [l, c] = line_col(src, i);
      throw ParseError(std::string("unexpected character '") + ch + "'", l, c);
    }
  }
  out.push_back({Token::End, "", end});
  return out;
}

class ExprParser {
 public:
  ExprParser(std::string_view src, std::vector<Token> toks, const std::vector<std::string>& vars)
      : src_(src), toks_(std::move(toks)), vars_(vars) {}

  Polynomial parse() {
    Polynomial p = expr();
    if (peek().kind != Token::End) fail("unexpected '" + peek().text + "'");
    return p;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  bool accept(const char* op) {
    if (peek().kind == Token::Op && peek().text == op) {
      ++pos_;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    auto [l, c] = line_col(src_, peek().off);
    throw ParseError(msg, l, c);
  }

  Polynomial expr() {
    Polynomial p = term();
    for (;;) {
      if (accept("+"))
        p += term();
      else if (accept("-"))
        p -= term();
      else
        return p;
    }
  }

  Polynomial term() {
    Polynomial p = unary();
    while (accept("*")) p = p * unary();
    return p;
  }

  Polynomial unary() {
    if (accept("-")) return -unary();
    if (accept("+")) return unary();
    return power();
  }

  Polynomial power() {
    Polynomial base = atom();
    if (!accept("^")) return base;
    if (peek().kind != Token::Int) fail("expected a non-negative integer exponent");
    const std::string& t = peek().text;
    if (t.size() > 4) fail("exponent too large");
    ++pos_;
    return base.pow(static_cast<unsigned>(std::stoul(t)));
  }

  Polynomial atom() {
    const Token t = peek();
    switch (t.kind) {
      case Token::Int:
        ++pos_;
        return Polynomial::constant(vars_, BigInt(t.text));
      case Token::Ident:
        if (std::find(vars_.begin(), vars_.end(), t.text) == vars_.end()) fail("undeclared variable " + t.text);
        ++pos_;
        return Polynomial::variable(vars_, t.text);
      case Token::Op:
        if (accept("(")) {
          Polynomial p = expr();
          if (!accept(")")) fail("expected ')'");
          return p;
        }
        fail("unexpected '" + t.text + "'");
      case Token::End:
        fail("unexpected end of expression");
    }
    fail("unexpected token");
  }

  std::string_view src_;
  std::vector<Token> toks_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

std::vector<std::string> identifiers(const std::vector<Token>& toks) {
  std::vector<std::string> v;
  for (const auto& t : toks)
    if (t.kind == Token::Ident && std::find(v.begin(), v.end(), t.text) == v.end()) v.push_back(t.text);
  return v;
}

// Blanks out `#` comments so offsets stay valid for diagnostics.
std::string strip_comments(std::string_view text) {
  std::string s(text);
  bool in_comment = false;
  for (char& ch : s) {
    if (ch == '\n') in_comment = false;
    else if (ch == '#') in_comment = true;
    if (in_comment) ch = ' ';
  }
  return s;
}

struct Statement {
  std::size_t begin, end;  // offsets, end excludes ';'
};

std::vector<Statement> split_statements(const std::string& s) {
  std::vector<Statement> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == ';') {
      std::size_t b = start;
      while (b < i && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
      if (b < i) out.push_back({b, i});
      start = i + 1;
    }
  }
  return out;
}

std::string leading_word(const std::string& s, Statement st, std::size_t& after) {
  std::size_t j = st.begin;
  while (j < st.end && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
  after = j;
  return s.substr(st.begin, j - st.begin);
}

}  // namespace

Polynomial parse_polynomial(std::string_view text, const std::vector<std::string>& vars) {
  return ExprParser(text, tokenize(text, 0, text.size()), vars).parse();
}

Polynomial parse_polynomial(std::string_view text) {
  auto toks = tokenize(text, 0, text.size());
  auto vars = identifiers(toks);
  return ExprParser(text, std::move(toks), vars).parse();
}

Polynomial parse_poly_file(std::string_view text) {
  const std::string s = strip_comments(text);
  auto stmts = split_statements(s);
  if (stmts.empty()) throw ParseError("empty polynomial file");
  std::optional<std::vector<std::string>> vars;
  std::size_t k = 0;
  std::size_t after = 0;
  if (leading_word(s, stmts[0], after) == "vars" && stmts.size() > 1) {
    auto toks = tokenize(s, after, stmts[0].end);
    for (const auto& t : toks) {
      if (t.kind == Token::End) break;
      if (t.kind != Token::Ident) {
        auto [l, c] = line_col(s, t.off);
        throw ParseError("expected a variable name", l, c);
      }
    }
    vars = identifiers(toks);
    k = 1;
  }
  if (stmts.size() != k + 1) {
    auto [l, c] = line_col(s, stmts.back().begin);
    throw ParseError("expected a single polynomial", l, c);
  }
  auto toks = tokenize(s, stmts[k].begin, stmts[k].end);
  if (!vars) vars = identifiers(toks);
  return ExprParser(s, std::move(toks), *vars).parse();
}

std::vector<std::string> GeoProblem::vars() const {
  std::vector<std::string> v = indep;
  v.insert(v.end(), dep.begin(), dep.end());
  return v;
}

GeoProblem parse_geo(std::string_view text) {
  const std::string s = strip_comments(text);
  GeoProblem g;
  struct Pending {
    bool concl;
    std::string name;
    Statement body;
  };
  std::vector<Pending> pending;
  for (const Statement& st : split_statements(s)) {
    std::size_t after = 0;
    const std::string kw = leading_word(s, st, after);
    auto err = [&](const std::string& msg, std::size_t off) {
      auto [l, c] = line_col(s, off);
      throw ParseError(msg, l, c);
    };
    if (kw == "indep" || kw == "dep") {
      auto toks = tokenize(s, after, st.end);
      auto& list = kw == "indep" ? g.indep : g.dep;
      for (const auto& t : toks) {
        if (t.kind == Token::End) break;
        if (t.kind != Token::Ident) err("expected a variable name", t.off);
        list.push_back(t.text);
      }
    } else if (kw == "hyp" || kw == "concl") {
      std::size_t eq = s.find('=', after);
      if (eq == std::string::npos || eq >= st.end) err("expected '<name> = <polynomial>'", st.begin);
      std::string name(s.substr(after, eq - after));
      name.erase(std::remove_if(name.begin(), name.end(), [](char ch) { return std::isspace(static_cast<unsigned char>(ch)); }),
                 name.end());
      if (name.empty()) err("missing name", after);
      pending.push_back({kw == "concl", name, {eq + 1, st.end}});
    } else {
      err("unknown statement '" + kw + "'", st.begin);
    }
  }
  const auto vars = g.vars();
  try {
    Polynomial probe(vars);
  } catch (const PreconditionError& e) {
    throw ParseError(e.what());
  }
  for (const auto& p : pending) {
    Polynomial poly = ExprParser(s, tokenize(s, p.body.begin, p.body.end), vars).parse();
    (p.concl ? g.concls : g.hyps).emplace_back(p.name, std::move(poly));
  }
  if (g.dep.empty()) throw ParseError("no dependent variables declared");
  if (g.concls.empty()) throw ParseError("no conclusion declared");
  return g;
}

// ---------------------------------------------------------------------------
// Pseudo-division

Polynomial pseudo_step(const Polynomial& s, const Polynomial& t, std::size_t y) {
  const int ds = s.degree(y), dt = t.degree(y);
  if (dt < 1 || ds < dt)
    throw PreconditionError("pseudo_step needs deg(S) >= deg(T) >= 1 in " + s.vars().at(y));
  Polynomial r = t.lc(y) * s - (s.lc(y) * t).shifted(y, static_cast<unsigned>(ds - dt));
  if (r.degree(y) >= ds) throw std::logic_error("pseudo_step failed to cancel the leading term");
  return r;
}

Polynomial pseudo_step(const Polynomial& s, const Polynomial& t, const std::string& y) {
  return pseudo_step(s, t, s.var_index(y));
}

PremResult prem(const Polynomial& s, const Polynomial& t, std::size_t y) {
  const int dt = t.degree(y);
  if (dt < 1) throw PreconditionError("prem divisor has no positive degree in " + t.vars().at(y));
  PremResult r;
  r.multiplier = t.lc(y);
  r.remainder = s;
  r.quotient = Polynomial(s.vars());
  while (r.remainder.degree(y) >= dt) {
    const unsigned shift = static_cast<unsigned>(r.remainder.degree(y) - dt);
    Polynomial c = r.remainder.lc(y).shifted(y, shift);
    r.remainder = pseudo_step(r.remainder, t, y);
    r.quotient = r.multiplier * r.quotient + c;
    r.intermediates.push_back(r.remainder);
    ++r.steps;
  }
  return r;
}

PremResult prem(const Polynomial& s, const Polynomial& t, const std::string& y) {
  return prem(s, t, s.var_index(y));
}

TriangularSystem triangulate(const std::vector<Polynomial>& hyps, const std::vector<std::string>& dep_order) {
  std::vector<Polynomial> rest;
  for (const auto& h : hyps)
    if (!h.is_zero()) rest.push_back(h);
  TriangularSystem sys;
  for (std::size_t k = dep_order.size(); k-- > 0;) {
    const std::string& v = dep_order[k];
    std::vector<Polynomial> cand, others;
    for (auto& p : rest) (p.has_var(v) && p.degree(v) > 0 ? cand : others).push_back(std::move(p));
    if (cand.empty()) throw DegenerateSystemError("no hypothesis can serve as pivot for " + v);
    while (cand.size() > 1) {
      auto better = [&](const Polynomial& a, const Polynomial& b) {
        if (a.degree(v) != b.degree(v)) return a.degree(v) < b.degree(v);
        return a.num_terms() < b.num_terms();
      };
      auto pit = std::min_element(cand.begin(), cand.end(), better);
      Polynomial pivot = *pit;
      cand.erase(pit);
      std::vector<Polynomial> next{pivot};
      for (const auto& q : cand) {
        Polynomial r = prem(q, pivot, v).remainder;
        if (r.is_zero()) continue;
        (r.degree(v) > 0 ? next : others).push_back(std::move(r));
      }
      cand = std::move(next);
    }
    sys.chain.push_back({cand.front(), v});
    rest = std::move(others);
  }
  std::reverse(sys.chain.begin(), sys.chain.end());
  return sys;
}

std::string to_string(WuVerdict v) { return v == WuVerdict::Proved ? "Proved" : "NotReduced"; }

WuProof wu_prove(const std::vector<Polynomial>& hyps, const std::vector<std::string>& dep_order,
                 const Polynomial& conclusion) {
  WuProof w;
  w.system = triangulate(hyps, dep_order);
  Polynomial r = conclusion;
  w.max_monomials = r.num_terms();
  for (std::size_t k = w.system.chain.size(); k-- > 0;) {
    const ChainEntry& e = w.system.chain[k];
    const std::size_t y = r.var_index(e.lead_var);
    if (r.degree(y) < e.poly.degree(y)) continue;
    PremResult p = prem(r, e.poly, y);
    for (auto& x : p.intermediates) {
      w.max_monomials = std::max(w.max_monomials, x.num_terms());
      w.steps.push_back({std::move(x), e.lead_var, k});
    }
    if (!p.multiplier.is_constant() &&
        std::find(w.side_conditions.begin(), w.side_conditions.end(), p.multiplier) == w.side_conditions.end())
      w.side_conditions.push_back(p.multiplier);
    r = std::move(p.remainder);
  }
  w.final_remainder = r;
  w.verdict = r.is_zero() ? WuVerdict::Proved : WuVerdict::NotReduced;
  return w;
}

WuProof wu_prove(const GeoProblem& g, std::size_t concl_index) {
  if (concl_index >= g.concls.size()) throw PreconditionError("conclusion index out of range");
  std::vector<Polynomial> hyps;
  for (const auto& [name, p] : g.hyps) hyps.push_back(p);
  return wu_prove(hyps, g.dep, g.concls[concl_index].second);
}

}  // namespace qatp
