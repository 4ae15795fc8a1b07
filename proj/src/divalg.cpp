#include "mbar/divalg.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

#include "mbar/errors.hpp"

namespace mbar {

void DivSymbol::validate(const SpaceId& s) const {
  switch (kind) {
    case Kind::H:
      return;
    case Kind::L:
      if (marking < 1 || marking > s.n)
        throw DomainError("L" + std::to_string(marking) + " is not a marking of " + s.str());
      return;
    case Kind::B:
      if (!BoundarySym::is_stable(s, bdry.side, bdry.deg) || BoundarySym::make(s, bdry.side, bdry.deg) != bdry)
        throw DomainError("not a canonical boundary component of " + s.str());
      return;
  }
}

std::string DivSymbol::str(const SpaceId& s) const {
  switch (kind) {
    case Kind::H:
      return "H";
    case Kind::L:
      return "L" + std::to_string(marking);
    case Kind::B:
      return bdry.str(s);
  }
  return {};
}

void DivClass::add(const DivSymbol& sym, const Rational& coeff) {
  if (coeff.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(sym, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Rational DivClass::coeff(const DivSymbol& sym) const {
  auto it = terms_.find(sym);
  return it == terms_.end() ? Rational(0) : it->second;
}

DivClass& DivClass::operator+=(const DivClass& o) {
  for (const auto& [sym, c] : o.terms_) add(sym, c);
  return *this;
}

DivClass& DivClass::operator-=(const DivClass& o) {
  for (const auto& [sym, c] : o.terms_) add(sym, -c);
  return *this;
}

DivClass& DivClass::operator*=(const Rational& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [sym, v] : terms_) v *= c;
  return *this;
}

std::string DivClass::str(const SpaceId& s) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [sym, c] : terms_) {
    if (!first) os << ' ';
    if (c.sign() > 0 && !first) os << '+';
    os << c.str() << '*' << sym.str(s);
    first = false;
  }
  return os.str();
}

// ---------------------------------------------------------------- Monomial

Monomial::Monomial(std::vector<Factor> factors) {
  std::sort(factors.begin(), factors.end(), [](const Factor& a, const Factor& b) { return a.first < b.first; });
  for (auto& f : factors) {
    if (f.second < 0) throw DomainError("negative exponent in monomial");
    if (f.second == 0) continue;
    if (!factors_.empty() && factors_.back().first == f.first)
      factors_.back().second += f.second;
    else
      factors_.push_back(f);
  }
}

int Monomial::degree() const {
  int deg = 0;
  for (const auto& f : factors_) deg += f.second;
  return deg;
}

int Monomial::exponent(const DivSymbol& sym) const {
  auto it = std::lower_bound(factors_.begin(), factors_.end(), sym,
                             [](const Factor& f, const DivSymbol& s) { return f.first < s; });
  return (it != factors_.end() && it->first == sym) ? it->second : 0;
}

void Monomial::multiply(const DivSymbol& sym, int exp) {
  if (exp == 0) return;
  auto it = std::lower_bound(factors_.begin(), factors_.end(), sym,
                             [](const Factor& f, const DivSymbol& s) { return f.first < s; });
  if (it != factors_.end() && it->first == sym)
    it->second += exp;
  else
    factors_.insert(it, {sym, exp});
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial out = a;
  for (const auto& [sym, e] : b.factors_) out.multiply(sym, e);
  return out;
}

void Monomial::validate(const SpaceId& s) const {
  for (const auto& f : factors_) f.first.validate(s);
}

std::string Monomial::str(const SpaceId& s) const {
  if (factors_.empty()) return "1";
  std::string out;
  for (const auto& [sym, e] : factors_) {
    if (!out.empty()) out += ' ';
    out += sym.str(s);
    if (e != 1) out += '^' + std::to_string(e);
  }
  return out;
}

std::size_t Monomial::hash() const {
  std::size_t h = 1469598103934665603ULL;
  auto mix = [&h](std::size_t v) { h = (h ^ v) * 1099511628211ULL; };
  for (const auto& [sym, e] : factors_) {
    mix(static_cast<std::size_t>(sym.kind));
    mix(static_cast<std::size_t>(sym.marking));
    mix(sym.bdry.side);
    mix(static_cast<std::size_t>(sym.bdry.deg));
    mix(static_cast<std::size_t>(e));
  }
  return h;
}

namespace {

int parse_int(std::string_view text, std::string_view context) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
    throw ParseError("bad integer '" + std::string(text) + "' in '" + std::string(context) + "'");
  return v;
}

BoundarySym parse_boundary(const SpaceId& s, std::string_view body, std::string_view context) {
  MarkSet side = 0;
  int deg = -1;
  std::size_t pos = 0;
  while (pos <= body.size()) {
    std::size_t semi = body.find(';', pos);
    if (semi == std::string_view::npos) semi = body.size();
    std::string_view item = body.substr(pos, semi - pos);
    pos = semi + 1;
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string_view::npos) throw ParseError("bad boundary item in '" + std::string(context) + "'");
    std::string_view key = item.substr(0, eq);
    std::string_view val = item.substr(eq + 1);
    if (key == "dA") {
      deg = parse_int(val, context);
    } else if (key == "A") {
      std::size_t p = 0;
      while (p < val.size()) {
        std::size_t comma = val.find(',', p);
        if (comma == std::string_view::npos) comma = val.size();
        int m = parse_int(val.substr(p, comma - p), context);
        if (m < 1 || m > s.n) throw DomainError("marking " + std::to_string(m) + " not in " + s.str());
        side |= MarkSet{1} << (m - 1);
        p = comma + 1;
      }
    } else {
      throw ParseError("unknown boundary key '" + std::string(key) + "'");
    }
  }
  if (deg < 0) throw ParseError("boundary symbol needs dA= in '" + std::string(context) + "'");
  if (!BoundarySym::is_stable(s, side, deg))
    throw DomainError("'" + std::string(context) + "' is not a stable boundary component of " + s.str());
  return BoundarySym::make(s, side, deg);
}

}  // namespace

Monomial Monomial::parse(const SpaceId& s, std::string_view text) {
  std::vector<Factor> factors;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip_ws();
  if (text.substr(i) == "1") return Monomial();
  while (i < text.size()) {
    std::size_t start = i;
    DivSymbol sym;
    if (text[i] == 'H') {
      ++i;
      sym = DivSymbol::h();
    } else if (text[i] == 'L') {
      ++i;
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      int m = parse_int(text.substr(i, j - i), text);
      i = j;
      sym = DivSymbol::l(m);
    } else if (text[i] == 'K' && i + 1 < text.size() && text[i + 1] == '{') {
      std::size_t close = text.find('}', i);
      if (close == std::string_view::npos) throw ParseError("unterminated boundary symbol in '" + std::string(text) + "'");
      sym = DivSymbol::boundary(parse_boundary(s, text.substr(i + 2, close - i - 2), text.substr(start, close + 1 - start)));
      i = close + 1;
    } else {
      throw ParseError("unexpected character '" + std::string(1, text[i]) + "' in monomial '" + std::string(text) + "'");
    }
    int exp = 1;
    if (i < text.size() && text[i] == '^') {
      ++i;
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      exp = parse_int(text.substr(i, j - i), text);
      i = j;
    }
    if (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])))
      throw ParseError("factors must be separated by whitespace in '" + std::string(text) + "'");
    sym.validate(s);
    factors.emplace_back(sym, exp);
    skip_ws();
  }
  return Monomial(std::move(factors));
}

// -------------------------------------------------------------- Polynomial

void Polynomial::add(const Monomial& m, const Rational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  for (const auto& [m, c] : o.terms_) add(m, c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= c;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial out;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) out.add(ma * mb, ca * cb);
  return out;
}

Polynomial operator*(const Polynomial& a, const DivClass& c) {
  Polynomial out;
  for (const auto& [m, cm] : a.terms_)
    for (const auto& [sym, cs] : c.terms()) {
      Monomial prod = m;
      prod.multiply(sym);
      out.add(prod, cm * cs);
    }
  return out;
}

std::string Polynomial::str(const SpaceId& s) const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [m, c] : terms_) {
    if (!out.empty()) out += " + ";
    out += "(" + c.str() + ")*" + m.str(s);
  }
  return out;
}

Polynomial power(const DivClass& c, int e) {
  Polynomial out = Polynomial::one();
  for (int k = 0; k < e; ++k) out = out * c;
  return out;
}

// ------------------------------------------------------------- relabeling

DivSymbol relabel(const SpaceId& s, const DivSymbol& sym, std::span<const int> perm) {
  switch (sym.kind) {
    case DivSymbol::Kind::H:
      return sym;
    case DivSymbol::Kind::L:
      return DivSymbol::l(perm[static_cast<std::size_t>(sym.marking)]);
    case DivSymbol::Kind::B: {
      MarkSet side = 0;
      for (int m : members(sym.bdry.side)) side |= MarkSet{1} << (perm[static_cast<std::size_t>(m)] - 1);
      return DivSymbol::boundary(BoundarySym::make(s, side, sym.bdry.deg));
    }
  }
  return sym;
}

DivClass relabel(const SpaceId& s, const DivClass& c, std::span<const int> perm) {
  DivClass out;
  for (const auto& [sym, v] : c.terms()) out.add(relabel(s, sym, perm), v);
  return out;
}

Monomial relabel(const SpaceId& s, const Monomial& m, std::span<const int> perm) {
  std::vector<Monomial::Factor> f;
  f.reserve(m.factors().size());
  for (const auto& [sym, e] : m.factors()) f.emplace_back(relabel(s, sym, perm), e);
  return Monomial(std::move(f));
}

// ---------------------------------------------------------- named classes

DivClass boundary_sum(std::span<const BoundarySym> components) {
  DivClass out;
  for (const auto& b : components) out.add(DivSymbol::boundary(b), Rational(1));
  return out;
}

namespace {

bool is_conic_space_without_markings(const SpaceId& s) { return s.r == 2 && s.d == 2 && s.n == 0; }

void require_marking(const SpaceId& s, int i) {
  if (i < 1 || i > s.n) throw DomainError("marking " + std::to_string(i) + " not in " + s.str());
}

}  // namespace

DivClass omega_squared_class(const SpaceId& s) {
  s.validate();
  if (is_conic_space_without_markings(s))
    throw DomainError("omega_squared_class is undefined on r=2,d=2,n=0 (generic automorphisms in codimension 1)");
  auto all = enumerate_boundary(s);
  return boundary_sum(all) * Rational(-1);
}

DivClass section_self_class(const SpaceId& s, int i) {
  s.validate();
  require_marking(s, i);
  DivClass out;
  if (s.d == 0) {
    // Degree 0: only the side sizes of the bubble containing i matter.
    const int n = s.n;
    Rational scale = Rational(-1) / binomial(n - 1, 2);
    for (int j = 2; j <= n - 2; ++j) {
      Rational c = scale * binomial(n - j, 2);
      for (const auto& b : marked_size_class(s, i, j)) out.add(DivSymbol::boundary(b), c);
    }
    return out;
  }
  const Rational d(s.d);
  const Rational d2 = d * d;
  out.add(DivSymbol::h(), Rational(-1) / d2);
  out.add(DivSymbol::l(i), Rational(2) / d);
  for (const auto& b : enumerate_boundary(s)) {
    Rational other(s.d - b.deg_of_side_with(s, i));
    out.add(DivSymbol::boundary(b), -(other * other) / d2);
  }
  return out;
}

DivClass tangency_class(const SpaceId& s) {
  s.validate();
  if (s.d < 2) throw DomainError("tangency class needs d >= 2");
  const Rational d(s.d);
  DivClass out(DivSymbol::h(), Rational(s.d - 1) / d);
  for (const auto& b : enumerate_boundary(s)) {
    int j = std::min(b.deg, s.d - b.deg);
    out.add(DivSymbol::boundary(b), Rational(j * (s.d - j)) / d);
  }
  return out;
}

DivClass cuspidal_class(const SpaceId& s) {
  s.validate();
  if (s.r != 2 || s.n != 0 || s.d < 3) throw DomainError("cuspidal class is defined on r=2,n=0 with d >= 3");
  const Rational d(s.d);
  DivClass out(DivSymbol::h(), Rational(3 * s.d - 3) / d);
  for (const auto& b : enumerate_boundary(s)) {
    int i = std::min(b.deg, s.d - b.deg);
    out.add(DivSymbol::boundary(b), Rational(3 * i * (s.d - i) - 2 * s.d) / d);
  }
  return out;
}

DivClass conic_tangency_class(const SpaceId& s) {
  s.validate();
  if (s.r != 2 || s.d != 2) throw DomainError("conic tangency class is only available for plane conics (r=2,d=2)");
  DivClass out(DivSymbol::h(), Rational(3));
  for (const auto& b : degree_partition_class(s, 1)) out.add(DivSymbol::boundary(b), Rational(1));
  return out;
}

SpaceId forgetful_target(const SpaceId& s) { return SpaceId{s.r, s.d, s.n + 1}; }

DivClass forgetful_pullback(const SpaceId& s, const DivClass& c) {
  s.validate();
  if (s.d < 1) throw DomainError("forgetful_pullback needs d >= 1");
  const SpaceId t = forgetful_target(s);
  const MarkSet extra = MarkSet{1} << s.n;
  DivClass out;
  for (const auto& [sym, v] : c.terms()) {
    if (!sym.is_boundary()) {
      out.add(sym, v);
      continue;
    }
    BoundarySym lift_a = BoundarySym::make(t, sym.bdry.side | extra, sym.bdry.deg);
    BoundarySym lift_b = BoundarySym::make(t, sym.bdry.side, sym.bdry.deg);
    out.add(DivSymbol::boundary(lift_a), v);
    // A symmetric n=0 split has a single lift.
    if (lift_b != lift_a) out.add(DivSymbol::boundary(lift_b), v);
  }
  return out;
}

Polynomial forgetful_pullback(const SpaceId& s, const Monomial& m) {
  Polynomial out = Polynomial::one();
  for (const auto& [sym, e] : m.factors()) {
    DivClass pulled = forgetful_pullback(s, DivClass(sym));
    for (int k = 0; k < e; ++k) out = out * pulled;
  }
  return out;
}

Polynomial forgetful_pullback(const SpaceId& s, const Polynomial& p) {
  Polynomial out;
  for (const auto& [m, c] : p.terms()) {
    Polynomial q = forgetful_pullback(s, m);
    q *= c;
    out += q;
  }
  return out;
}

}  // namespace mbar
