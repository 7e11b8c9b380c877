#include "painleve/odemodel.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>

#include "painleve/upoly.hpp"

namespace painleve {

namespace {

JetPolynomial::Monomial merge(const JetPolynomial::Monomial& a, const JetPolynomial::Monomial& b) {
  JetPolynomial::Monomial out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.push_back(b[j++]);
    } else {
      out.emplace_back(a[i].first, a[i].second + b[j].second);
      ++i;
      ++j;
    }
  }
  return out;
}

void accumulate(JetPolynomial::Terms& t, const JetPolynomial::Monomial& m, const QuadExt& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = t.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) t.erase(it);
  }
}

}  // namespace

JetPolynomial::JetPolynomial(const QuadExt& c) {
  if (!c.is_zero()) terms_.emplace(Monomial{}, c);
}

JetPolynomial JetPolynomial::jet(JetVar v, int exponent) {
  JetPolynomial p;
  if (exponent == 0)
    p.terms_.emplace(Monomial{}, QuadExt(1));
  else
    p.terms_.emplace(Monomial{{v, exponent}}, QuadExt(1));
  return p;
}

JetPolynomial JetPolynomial::term(Monomial m, const QuadExt& c) {
  JetPolynomial p;
  if (!c.is_zero()) p.terms_.emplace(std::move(m), c);
  return p;
}

QuadExt JetPolynomial::constant_value() const {
  if (!is_constant()) throw std::logic_error("jet polynomial is not constant");
  return terms_.empty() ? QuadExt(0) : terms_.begin()->second;
}

int JetPolynomial::max_order(int var) const {
  int best = -1;
  for (const auto& [m, c] : terms_)
    for (const auto& [v, e] : m)
      if (v.var == var) best = std::max(best, v.order);
  return best;
}

int JetPolynomial::degree_in(JetVar v) const {
  int best = 0;
  for (const auto& [m, c] : terms_) best = std::max(best, exponent_of(m, v));
  return best;
}

bool JetPolynomial::contains(int var) const { return max_order(var) >= 0; }

JetPolynomial JetPolynomial::operator-() const {
  JetPolynomial r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

JetPolynomial& JetPolynomial::operator+=(const JetPolynomial& o) {
  for (const auto& [m, c] : o.terms_) accumulate(terms_, m, c);
  return *this;
}

JetPolynomial& JetPolynomial::operator-=(const JetPolynomial& o) {
  for (const auto& [m, c] : o.terms_) accumulate(terms_, m, -c);
  return *this;
}

JetPolynomial operator*(const JetPolynomial& a, const JetPolynomial& b) {
  JetPolynomial r;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) accumulate(r.terms_, merge(ma, mb), ca * cb);
  return r;
}

JetPolynomial JetPolynomial::pow(int e) const {
  if (e < 0) throw std::invalid_argument("negative power of a jet polynomial");
  JetPolynomial r(QuadExt(1)), base = *this;
  while (e > 0) {
    if (e & 1) r = r * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return r;
}

JetPolynomial JetPolynomial::scaled(const QuadExt& s) const {
  JetPolynomial r;
  for (const auto& [m, c] : terms_) accumulate(r.terms_, m, c * s);
  return r;
}

JetPolynomial JetPolynomial::time_derivative() const {
  JetPolynomial r;
  for (const auto& [m, c] : terms_) {
    for (std::size_t i = 0; i < m.size(); ++i) {
      Monomial rest = m;
      const int e = rest[i].second;
      JetVar up{rest[i].first.var, rest[i].first.order + 1};
      if (e == 1)
        rest.erase(rest.begin() + static_cast<long>(i));
      else
        rest[i].second = e - 1;
      accumulate(r.terms_, merge(rest, Monomial{{up, 1}}), c * QuadExt(e));
    }
  }
  return r;
}

std::string jet_name(const std::string& var, int order) { return var + std::string(static_cast<std::size_t>(order), '\''); }

int exponent_of(const JetPolynomial::Monomial& m, JetVar v) {
  for (const auto& [w, e] : m)
    if (w == v) return e;
  return 0;
}

std::string JetPolynomial::str(const std::vector<std::string>& names) const {
  // Higher total degree first, then by monomial, for a stable readable layout.
  std::vector<std::pair<const Monomial*, const QuadExt*>> order;
  for (const auto& [m, c] : terms_) order.emplace_back(&m, &c);
  auto deg = [](const Monomial& m) {
    int d = 0;
    for (const auto& [v, e] : m) d += e;
    return d;
  };
  std::stable_sort(order.begin(), order.end(), [&](const auto& x, const auto& y) {
    int dx = 0, dy = 0;
    for (const auto& [v, e] : *x.first) dx = std::max(dx, v.order);
    for (const auto& [v, e] : *y.first) dy = std::max(dy, v.order);
    if (dx != dy) return dx > dy;
    return deg(*x.first) > deg(*y.first);
  });
  std::vector<std::pair<QuadExt, std::string>> pieces;
  for (const auto& [m, c] : order) {
    std::string mono;
    for (const auto& [v, e] : *m) {
      if (!mono.empty()) mono += "*";
      mono += jet_name(names.at(static_cast<std::size_t>(v.var)), v.order);
      if (e != 1) mono += "^" + std::to_string(e);
    }
    pieces.emplace_back(*c, mono);
  }
  return format_sum(pieces);
}

int PolyODESystem::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < vars.size(); ++i)
    if (vars[i] == name) return static_cast<int>(i);
  return -1;
}

int PolyODESystem::max_order(int i) const {
  int best = -1;
  for (const auto& eq : equations) best = std::max(best, eq.max_order(i));
  return best;
}

std::string PolyODESystem::str() const {
  std::ostringstream os;
  os << "vars ";
  for (std::size_t i = 0; i < vars.size(); ++i) os << (i ? ", " : "") << vars[i];
  os << ";\n";
  for (std::size_t i = 0; i < equations.size(); ++i) {
    const JetPolynomial& eq = equations[i];
    const int k = max_order(static_cast<int>(i));
    JetVar top{static_cast<int>(i), k};
    auto it = eq.terms().find(JetPolynomial::Monomial{{top, 1}});
    bool solved = k >= 0 && it != eq.terms().end() && it->second.is_one();
    if (solved) {
      for (const auto& [m, c] : eq.terms())
        if (&m != &it->first && exponent_of(m, top) > 0) solved = false;
    }
    if (solved) {
      JetPolynomial rhs = JetPolynomial::jet(top) - eq;
      os << jet_name(vars[i], k) << " = " << (rhs.is_zero() ? "0" : rhs.str(vars)) << ";\n";
    } else {
      os << (eq.is_zero() ? "0" : eq.str(vars)) << " = 0;\n";
    }
  }
  return os.str();
}

ParseError::ParseError(const std::string& msg, int line, int column)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
      message_(msg),
      line_(line),
      column_(column) {}

// ---------------------------------------------------------------------------
// Parser

namespace {

enum class Tok { Ident, Number, Prime, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, Semi, Equals, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < s.size()) {
    const char ch = s[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      advance(1);
      continue;
    }
    if (ch == '#') {
      while (i < s.size() && s[i] != '\n') advance(1);
      continue;
    }
    const int l = line, c = col;
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      out.push_back({Tok::Ident, std::string(s.substr(i, j - i)), l, c});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      if (j < s.size() && s[j] == '.') throw ParseError("floating-point literals are not allowed; use a rational such as 1/2", l, c);
      out.push_back({Tok::Number, std::string(s.substr(i, j - i)), l, c});
      advance(j - i);
      continue;
    }
    Tok k;
    switch (ch) {
      case '\'': k = Tok::Prime; break;
      case '+': k = Tok::Plus; break;
      case '-': k = Tok::Minus; break;
      case '*': k = Tok::Star; break;
      case '/': k = Tok::Slash; break;
      case '^': k = Tok::Caret; break;
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      case ',': k = Tok::Comma; break;
      case ';': k = Tok::Semi; break;
      case '=': k = Tok::Equals; break;
      default: throw ParseError(std::string("unexpected character '") + ch + "'", l, c);
    }
    out.push_back({k, std::string(1, ch), l, c});
    advance(1);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : t_(std::move(toks)) {}

  PolyODESystem parse() {
    PolyODESystem sys;
    const Token& kw = peek();
    if (kw.kind != Tok::Ident || kw.text != "vars") fail("expected 'vars'", kw);
    ++p_;
    for (;;) {
      const Token& id = expect(Tok::Ident, "variable name");
      if (id.text == "sqrt" || id.text == "vars") fail("reserved word used as variable name", id);
      if (sys.index_of(id.text) >= 0) fail("variable '" + id.text + "' declared twice", id);
      sys.vars.push_back(id.text);
      if (peek().kind == Tok::Comma) {
        ++p_;
        continue;
      }
      break;
    }
    expect(Tok::Semi, "';' after variable list");
    vars_ = &sys.vars;

    struct RawEq {
      JetPolynomial poly;
      int lhs_var;  // -1 unless "jetvar = expr"
      Token where;
    };
    std::vector<RawEq> raw;
    while (peek().kind != Tok::End) {
      const Token start = peek();
      int lhs_var = -1;
      if (start.kind == Tok::Ident) {
        // Detect "jetvar =" without consuming.
        std::size_t q = p_ + 1;
        while (t_[q].kind == Tok::Prime) ++q;
        if (t_[q].kind == Tok::Equals) lhs_var = sys.index_of(start.text);
      }
      JetPolynomial lhs = expr();
      expect(Tok::Equals, "'='");
      JetPolynomial rhs = expr();
      expect(Tok::Semi, "';' after equation");
      raw.push_back({lhs - rhs, lhs_var, start});
    }
    if (raw.empty()) fail("expected at least one equation", peek());
    if (raw.size() != sys.vars.size())
      fail("expected " + std::to_string(sys.vars.size()) + " equations, found " + std::to_string(raw.size()), t_.back());

    // Assign each equation to the variable whose highest derivative it holds.
    const int n = sys.size();
    std::vector<int> top(static_cast<std::size_t>(n), -1);
    for (const auto& r : raw)
      for (int v = 0; v < n; ++v) top[v] = std::max(top[v], r.poly.max_order(v));
    for (int v = 0; v < n; ++v)
      if (top[v] < 0) fail("variable '" + sys.vars[v] + "' does not occur in any equation", t_.back());
    std::vector<std::vector<int>> cand(raw.size());
    for (std::size_t e = 0; e < raw.size(); ++e) {
      if (raw[e].lhs_var >= 0 && raw[e].poly.max_order(raw[e].lhs_var) == top[raw[e].lhs_var]) {
        cand[e].push_back(raw[e].lhs_var);
        continue;
      }
      for (int v = 0; v < n; ++v)
        if (raw[e].poly.max_order(v) == top[v]) cand[e].push_back(v);
    }
    std::vector<int> owner_of_var(static_cast<std::size_t>(n), -1);
    std::function<bool(std::size_t, std::vector<bool>&)> augment = [&](std::size_t e, std::vector<bool>& seen) {
      for (int v : cand[e]) {
        if (seen[v]) continue;
        seen[v] = true;
        if (owner_of_var[v] < 0 || augment(static_cast<std::size_t>(owner_of_var[v]), seen)) {
          owner_of_var[v] = static_cast<int>(e);
          return true;
        }
      }
      return false;
    };
    for (std::size_t e = 0; e < raw.size(); ++e) {
      std::vector<bool> seen(static_cast<std::size_t>(n), false);
      if (!augment(e, seen)) fail("equation does not contain the highest derivative of any unassigned variable", raw[e].where);
    }
    for (int v = 0; v < n; ++v) sys.equations.push_back(raw[static_cast<std::size_t>(owner_of_var[v])].poly);
    return sys;
  }

 private:
  const Token& peek() const { return t_[p_]; }
  [[noreturn]] void fail(const std::string& msg, const Token& at) const { throw ParseError(msg, at.line, at.col); }
  const Token& expect(Tok k, const std::string& what) {
    if (peek().kind != k) fail("expected " + what + (peek().kind == Tok::End ? " before end of input" : ", found '" + peek().text + "'"), peek());
    return t_[p_++];
  }

  JetPolynomial expr() {
    JetPolynomial acc;
    bool neg = false;
    if (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      neg = peek().kind == Tok::Minus;
      ++p_;
    }
    acc = term();
    if (neg) acc = -acc;
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      const bool minus = peek().kind == Tok::Minus;
      ++p_;
      JetPolynomial t = term();
      if (minus)
        acc -= t;
      else
        acc += t;
    }
    return acc;
  }

  JetPolynomial term() {
    JetPolynomial acc = factor();
    for (;;) {
      if (peek().kind == Tok::Star) {
        ++p_;
        acc = acc * factor();
      } else if (peek().kind == Tok::Slash) {
        const Token at = t_[p_++];
        JetPolynomial d = factor();
        if (!d.is_constant()) fail("non-polynomial expression: division by a variable", at);
        if (d.is_zero()) fail("division by zero", at);
        acc = acc.scaled(d.constant_value().inverse());
      } else {
        return acc;
      }
    }
  }

  JetPolynomial factor() {
    JetPolynomial base = primary();
    if (peek().kind == Tok::Caret) {
      const Token at = t_[p_++];
      if (peek().kind == Tok::Minus) fail("non-polynomial expression: negative power", at);
      if (peek().kind == Tok::LParen) fail("non-polynomial expression: fractional power", at);
      const Token& num = expect(Tok::Number, "integer exponent");
      if (peek().kind == Tok::Slash) fail("non-polynomial expression: fractional power", at);
      if (num.text.size() > 6) fail("exponent too large", num);
      base = base.pow(std::stoi(num.text));
    }
    return base;
  }

  JetPolynomial primary() {
    const Token& tk = peek();
    switch (tk.kind) {
      case Tok::Number: {
        ++p_;
        return JetPolynomial(QuadExt(BigRational(BigInt(tk.text))));
      }
      case Tok::LParen: {
        ++p_;
        JetPolynomial e = expr();
        expect(Tok::RParen, "')'");
        return e;
      }
      case Tok::Ident: {
        ++p_;
        if (tk.text == "sqrt") {
          expect(Tok::LParen, "'(' after sqrt");
          const Token& arg_at = peek();
          JetPolynomial arg = expr();
          expect(Tok::RParen, "')'");
          if (!arg.is_constant() || !arg.constant_value().is_rational())
            fail("sqrt() takes a rational constant argument", arg_at);
          try {
            return JetPolynomial(rational_sqrt(arg.constant_value().rational_part()));
          } catch (const FieldTowerError& e) {
            fail(e.what(), arg_at);
          }
        }
        const int v = index_of(tk.text);
        if (v < 0) fail("undeclared variable '" + tk.text + "'", tk);
        int order = 0;
        while (peek().kind == Tok::Prime) {
          ++p_;
          ++order;
        }
        return JetPolynomial::jet({v, order});
      }
      default:
        fail(tk.kind == Tok::End ? "unexpected end of input" : "unexpected '" + tk.text + "'", tk);
    }
  }

  int index_of(const std::string& name) const {
    for (std::size_t i = 0; i < vars_->size(); ++i)
      if ((*vars_)[i] == name) return static_cast<int>(i);
    return -1;
  }

  std::vector<Token> t_;
  std::size_t p_ = 0;
  const std::vector<std::string>* vars_ = nullptr;
};

}  // namespace

PolyODESystem parse_system(std::string_view text) {
  Parser p(tokenize(text));
  return p.parse();
}

PolyODESystem henon_heiles(const QuadExt& lambda, const QuadExt& C) {
  PolyODESystem s;
  s.vars = {"x", "y"};
  const auto x = JetPolynomial::jet({0, 0}), y = JetPolynomial::jet({1, 0});
  s.equations.push_back(JetPolynomial::jet({0, 2}) + x.scaled(lambda) + (x * y).scaled(2));
  s.equations.push_back(JetPolynomial::jet({1, 2}) + y + x * x - (y * y).scaled(C));
  s.hh = HHParams{lambda, C, false};
  return s;
}

PolyODESystem square_substitute(const PolyODESystem& system, std::string_view var, std::string_view new_name) {
  const int xi = system.index_of(var);
  if (xi < 0) throw PreconditionError("unknown variable '" + std::string(var) + "'");
  const std::string nn(new_name);
  if (nn != var && system.index_of(nn) >= 0) throw PreconditionError("variable '" + nn + "' already exists");
  const JetVar x0{xi, 0}, x2{xi, 2};

  // Maps a monomial with an even power of x (and no x', x'') to z-form.
  auto to_z = [&](const JetPolynomial::Monomial& m, int extra_x, const char* where) {
    JetPolynomial::Monomial out;
    for (const auto& [v, e] : m) {
      if (v.var != xi) {
        out.emplace_back(v, e);
        continue;
      }
      if (v.order != 0) throw PreconditionError(std::string(where) + " contains a derivative of '" + std::string(var) + "'");
      const int total = e + extra_x;
      if (total % 2 != 0) throw PreconditionError(std::string(where) + " contains an odd power of '" + std::string(var) + "'");
      if (total > 0) out.emplace_back(v, total / 2);
    }
    if (extra_x != 0 && exponent_of(m, x0) == 0) {
      if (extra_x % 2 != 0) throw PreconditionError(std::string(where) + " contains an odd power of '" + std::string(var) + "'");
      out.emplace_back(x0, extra_x / 2);
    }
    std::sort(out.begin(), out.end());
    return out;
  };

  PolyODESystem out;
  out.vars = system.vars;
  out.vars[static_cast<std::size_t>(xi)] = nn;
  out.hh = system.hh;
  if (out.hh) out.hh->squared = true;

  for (int i = 0; i < system.size(); ++i) {
    const JetPolynomial& eq = system.equations[static_cast<std::size_t>(i)];
    if (i != xi) {
      JetPolynomial r;
      for (const auto& [m, c] : eq.terms()) r += JetPolynomial::term(to_z(m, 0, "another equation"), c);
      out.equations.push_back(r);
      continue;
    }
    // Owner: c*x'' + x*Q = 0.
    QuadExt c(0);
    JetPolynomial Q;  // in z
    for (const auto& [m, coeff] : eq.terms()) {
      if (m == JetPolynomial::Monomial{{x2, 1}}) {
        c = coeff;
        continue;
      }
      for (const auto& [v, e] : m)
        if (v.var == xi && v.order > 0)
          throw PreconditionError("owner equation of '" + std::string(var) + "' is not of the form c*" + std::string(var) + "'' = " + std::string(var) + "*Q");
      if (exponent_of(m, x0) == 0)
        throw PreconditionError("owner equation of '" + std::string(var) + "' has a term not divisible by " + std::string(var));
      Q += JetPolynomial::term(to_z(m, -1, "owner equation"), coeff);
    }
    if (c.is_zero()) throw PreconditionError("owner equation of '" + std::string(var) + "' is not linear in " + std::string(var) + "''");
    // x'' = P x with P = -Q/c  =>  z z'' - z'^2/2 - 2 z^2 P = 0.
    const auto z = JetPolynomial::jet({xi, 0});
    JetPolynomial eqz = z * JetPolynomial::jet({xi, 2}) - JetPolynomial::jet({xi, 1}, 2).scaled(BigRational(1, 2)) +
                        (z * z * Q).scaled(QuadExt(2) / c);
    out.equations.push_back(eqz);
  }
  return out;
}

}  // namespace painleve
