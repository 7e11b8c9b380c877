#include "painleve/parampoly.hpp"

#include <algorithm>
#include <stdexcept>

namespace painleve {

namespace {

ParamPoly::Monomial merge(const ParamPoly::Monomial& a, const ParamPoly::Monomial& b, int sign_b = 1) {
  ParamPoly::Monomial out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.emplace_back(b[j].first, sign_b * b[j].second);
      ++j;
    } else {
      int e = a[i].second + sign_b * b[j].second;
      if (e != 0) out.emplace_back(a[i].first, e);
      ++i;
      ++j;
    }
  }
  return out;
}

void accumulate(ParamPoly::Terms& terms, const ParamPoly::Monomial& m, const QuadExt& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms.erase(it);
  }
}

}  // namespace

ParamPoly::ParamPoly(const QuadExt& c) {
  if (!c.is_zero()) terms_.emplace(Monomial{}, c);
}
ParamPoly::ParamPoly(const BigRational& c) : ParamPoly(QuadExt(c)) {}
ParamPoly::ParamPoly(long c) : ParamPoly(QuadExt(c)) {}

ParamPoly ParamPoly::variable(ParamId id, int exponent) {
  ParamPoly p;
  if (exponent == 0)
    p.terms_.emplace(Monomial{}, QuadExt(1));
  else
    p.terms_.emplace(Monomial{{id, exponent}}, QuadExt(1));
  return p;
}

ParamPoly ParamPoly::term(Monomial m, const QuadExt& coeff) {
  ParamPoly p;
  if (!coeff.is_zero()) p.terms_.emplace(std::move(m), coeff);
  return p;
}

QuadExt ParamPoly::as_constant() const {
  if (!is_constant()) throw std::logic_error("parameter polynomial is not constant");
  return terms_.empty() ? QuadExt(0) : terms_.begin()->second;
}

QuadExt ParamPoly::constant_term() const {
  auto it = terms_.find(Monomial{});
  return it == terms_.end() ? QuadExt(0) : it->second;
}

std::set<ParamId> ParamPoly::variables() const {
  std::set<ParamId> out;
  for (const auto& [m, c] : terms_)
    for (const auto& [id, e] : m) out.insert(id);
  return out;
}

int ParamPoly::max_exponent(ParamId id) const {
  int best = 0;
  bool any = false;
  for (const auto& [m, c] : terms_) {
    int e = 0;
    for (const auto& [v, k] : m)
      if (v == id) e = k;
    best = any ? std::max(best, e) : e;
    any = true;
  }
  return best;
}

int ParamPoly::min_exponent(ParamId id) const {
  int best = 0;
  bool any = false;
  for (const auto& [m, c] : terms_) {
    int e = 0;
    for (const auto& [v, k] : m)
      if (v == id) e = k;
    best = any ? std::min(best, e) : e;
    any = true;
  }
  return best;
}

ParamPoly ParamPoly::operator-() const {
  ParamPoly r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

ParamPoly& ParamPoly::operator+=(const ParamPoly& o) {
  for (const auto& [m, c] : o.terms_) accumulate(terms_, m, c);
  return *this;
}

ParamPoly& ParamPoly::operator-=(const ParamPoly& o) {
  for (const auto& [m, c] : o.terms_) accumulate(terms_, m, -c);
  return *this;
}

ParamPoly operator*(const ParamPoly& a, const ParamPoly& b) {
  ParamPoly r;
  if (a.is_zero() || b.is_zero()) return r;
  if (a.terms_.size() == 1 && a.terms_.begin()->first.empty()) return ParamPoly(b) *= a.terms_.begin()->second;
  if (b.terms_.size() == 1 && b.terms_.begin()->first.empty()) return ParamPoly(a) *= b.terms_.begin()->second;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) accumulate(r.terms_, merge(ma, mb), ca * cb);
  return r;
}

ParamPoly& ParamPoly::operator*=(const ParamPoly& o) { return *this = *this * o; }

ParamPoly& ParamPoly::operator*=(const QuadExt& s) {
  if (s.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, c] : terms_) c *= s;
  return *this;
}

ParamPoly ParamPoly::divided_by_term(const ParamPoly& divisor) const {
  if (divisor.terms_.size() != 1) throw std::domain_error("divisor is not a single term");
  const auto& [dm, dc] = *divisor.terms_.begin();
  const QuadExt inv = dc.inverse();
  ParamPoly r;
  for (const auto& [m, c] : terms_) accumulate(r.terms_, merge(m, dm, -1), c * inv);
  return r;
}

ParamPoly ParamPoly::substitute(ParamId id, const QuadExt& value) const {
  ParamPoly r;
  for (const auto& [m, c] : terms_) {
    Monomial rest;
    int e = 0;
    for (const auto& [v, k] : m) {
      if (v == id)
        e = k;
      else
        rest.emplace_back(v, k);
    }
    accumulate(r.terms_, rest, e == 0 ? c : c * value.pow(e));
  }
  return r;
}

ParamPoly ParamPoly::substitute(const std::map<ParamId, QuadExt>& values) const {
  ParamPoly r;
  for (const auto& [m, c] : terms_) {
    Monomial rest;
    QuadExt coeff = c;
    for (const auto& [v, k] : m) {
      auto it = values.find(v);
      if (it == values.end())
        rest.emplace_back(v, k);
      else
        coeff *= it->second.pow(k);
    }
    accumulate(r.terms_, rest, coeff);
  }
  return r;
}

QuadExt ParamPoly::evaluate(const std::map<ParamId, QuadExt>& values) const {
  QuadExt acc(0);
  for (const auto& [m, c] : terms_) {
    QuadExt t = c;
    for (const auto& [v, k] : m) {
      auto it = values.find(v);
      if (it == values.end()) throw std::invalid_argument("missing value for parameter #" + std::to_string(v));
      t *= it->second.pow(k);
    }
    acc += t;
  }
  return acc;
}

std::pair<QPoly, int> ParamPoly::to_univariate(ParamId id) const {
  for (ParamId v : variables())
    if (v != id) throw std::domain_error("polynomial involves more than one parameter");
  const int shift = -min_exponent(id);
  const int top = max_exponent(id) + shift;
  std::vector<QuadExt> c(static_cast<std::size_t>(std::max(top, 0)) + 1, QuadExt(0));
  for (const auto& [m, coeff] : terms_) {
    int e = m.empty() ? 0 : m.front().second;
    c[static_cast<std::size_t>(e + shift)] += coeff;
  }
  return {QPoly(std::move(c)), shift};
}

std::string ParamPoly::str(const Namer& name) const {
  std::vector<std::pair<QuadExt, std::string>> pieces;
  for (const auto& [m, c] : terms_) {
    std::string mono;
    for (const auto& [v, k] : m) {
      if (!mono.empty()) mono += "*";
      mono += name(v);
      if (k != 1) mono += "^" + std::to_string(k);
    }
    pieces.emplace_back(c, mono);
  }
  return format_sum(pieces);
}

}  // namespace painleve
