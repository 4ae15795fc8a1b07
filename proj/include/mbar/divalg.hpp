#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mbar/exactnum.hpp"
#include "mbar/moduli.hpp"

namespace mbar {

/// One generator of Pic(M) (x) Q: L_i, H, or a boundary divisor.
struct DivSymbol {
  enum class Kind : std::uint8_t { H = 0, L = 1, B = 2 };

  Kind kind = Kind::H;
  int marking = 0;    // Kind::L only
  BoundarySym bdry{};  // Kind::B only

  static DivSymbol h() { return {}; }
  static DivSymbol l(int i) { return {Kind::L, i, {}}; }
  static DivSymbol boundary(BoundarySym b) { return {Kind::B, 0, b}; }

  bool is_h() const { return kind == Kind::H; }
  bool is_l() const { return kind == Kind::L; }
  bool is_boundary() const { return kind == Kind::B; }

  /// Throws DomainError when the symbol does not live on `s`.
  void validate(const SpaceId& s) const;
  std::string str(const SpaceId& s) const;

  friend bool operator==(const DivSymbol&, const DivSymbol&) = default;
  friend std::strong_ordering operator<=>(const DivSymbol& a, const DivSymbol& b) {
    if (auto c = a.kind <=> b.kind; c != 0) return c;
    if (auto c = a.marking <=> b.marking; c != 0) return c;
    return a.bdry <=> b.bdry;
  }
};

/// A formal Q-linear combination of symbols. Zero coefficients are never stored.
class DivClass {
 public:
  using Terms = std::map<DivSymbol, Rational>;

  DivClass() = default;
  explicit DivClass(const DivSymbol& sym, Rational coeff = Rational(1)) { add(sym, std::move(coeff)); }

  void add(const DivSymbol& sym, const Rational& coeff);
  Rational coeff(const DivSymbol& sym) const;
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  DivClass& operator+=(const DivClass& o);
  DivClass& operator-=(const DivClass& o);
  DivClass& operator*=(const Rational& c);
  friend DivClass operator+(DivClass a, const DivClass& b) { return a += b; }
  friend DivClass operator-(DivClass a, const DivClass& b) { return a -= b; }
  friend DivClass operator*(DivClass a, const Rational& c) { return a *= c; }
  friend DivClass operator*(const Rational& c, DivClass a) { return a *= c; }
  friend bool operator==(const DivClass&, const DivClass&) = default;

  std::string str(const SpaceId& s) const;

 private:
  Terms terms_;
};

/// Exponent vector over symbols, kept sorted by symbol with positive exponents.
class Monomial {
 public:
  using Factor = std::pair<DivSymbol, int>;

  Monomial() = default;
  explicit Monomial(std::vector<Factor> factors);

  static Monomial of(const DivSymbol& sym, int exp = 1) { return Monomial({{sym, exp}}); }

  /// Parses the factor grammar `H^3 L1^2 K{dA=1}^5` against ambient `s`.
  static Monomial parse(const SpaceId& s, std::string_view text);

  const std::vector<Factor>& factors() const { return factors_; }
  int degree() const;
  int exponent(const DivSymbol& sym) const;
  bool empty() const { return factors_.empty(); }
  bool has_boundary() const { return !factors_.empty() && factors_.back().first.is_boundary(); }

  void multiply(const DivSymbol& sym, int exp = 1);
  friend Monomial operator*(const Monomial& a, const Monomial& b);

  void validate(const SpaceId& s) const;
  /// Empty monomial prints as "1".
  std::string str(const SpaceId& s) const;

  friend bool operator==(const Monomial&, const Monomial&) = default;
  friend auto operator<=>(const Monomial& a, const Monomial& b) { return a.factors_ <=> b.factors_; }

  std::size_t hash() const;

 private:
  std::vector<Factor> factors_;
};

/// Formal Q-linear combination of monomials.
class Polynomial {
 public:
  using Terms = std::map<Monomial, Rational>;

  Polynomial() = default;
  explicit Polynomial(const Monomial& m, Rational c = Rational(1)) { add(m, std::move(c)); }
  static Polynomial one() { return Polynomial(Monomial()); }

  void add(const Monomial& m, const Rational& c);
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator*=(const Rational& c);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const DivClass& c);

  std::string str(const SpaceId& s) const;

 private:
  Terms terms_;
};

/// c^e as a polynomial.
Polynomial power(const DivClass& c, int e);

/// Apply a marking relabeling on the same space: `perm[i]` is the new label of
/// marking i (index 0 unused).
DivSymbol relabel(const SpaceId& s, const DivSymbol& sym, std::span<const int> perm);
DivClass relabel(const SpaceId& s, const DivClass& c, std::span<const int> perm);
Monomial relabel(const SpaceId& s, const Monomial& m, std::span<const int> perm);

/// Sum of the given boundary symbols.
DivClass boundary_sum(std::span<const BoundarySym> components);

// Named classes.

/// Pushforward of the squared relative dualizing class of the universal curve:
/// minus the total boundary. Refused on M_{0,0}(2,2).
DivClass omega_squared_class(const SpaceId& s);

/// Pushforward of the self-intersection of the section of marking i.
DivClass section_self_class(const SpaceId& s, int i);

/// Hyperplane tangency divisor, d >= 2.
DivClass tangency_class(const SpaceId& s);

/// Closure of the non-immersive locus in M_{0,0}(2,d), d >= 3.
DivClass cuspidal_class(const SpaceId& s);

/// Tangency to a fixed conic, plane conics only.
DivClass conic_tangency_class(const SpaceId& s);

/// The space with one more marking.
SpaceId forgetful_target(const SpaceId& s);

/// Pull back along the map forgetting the last marking of M_{0,n+1}(r,d).
DivClass forgetful_pullback(const SpaceId& s, const DivClass& c);
Polynomial forgetful_pullback(const SpaceId& s, const Monomial& m);
Polynomial forgetful_pullback(const SpaceId& s, const Polynomial& p);

}  // namespace mbar

template <>
struct std::hash<mbar::Monomial> {
  std::size_t operator()(const mbar::Monomial& m) const noexcept { return m.hash(); }
};
