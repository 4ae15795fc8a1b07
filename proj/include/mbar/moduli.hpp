#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mbar {

/// Marking subsets are bitmasks: marking i (1-based) is bit i-1.
using MarkSet = std::uint32_t;
inline constexpr int kMaxMarkings = 30;

inline int popcount(MarkSet s) { return __builtin_popcount(s); }
inline MarkSet full_set(int n) { return n == 0 ? 0u : ((MarkSet{1} << n) - 1u); }
inline bool contains(MarkSet s, int marking) { return (s >> (marking - 1)) & 1u; }
std::vector<int> members(MarkSet s);

/// Lexicographic order on the sorted element lists of two marking sets.
std::strong_ordering lex_compare(MarkSet a, MarkSet b);

/// The space of genus-0 stable maps to P^r of degree d with markings {1..n}.
struct SpaceId {
  int r = 2;
  int d = 0;
  int n = 0;

  /// Throws DomainError when r < 2, d < 0, n out of range, or d == 0 with n < 3.
  void validate() const;
  int dim() const { return r * d + d + r + n - 3; }
  MarkSet markings() const { return full_set(n); }

  /// "r=2,d=3,n=0"
  std::string str() const;
  static SpaceId parse(std::string_view text);

  friend bool operator==(const SpaceId&, const SpaceId&) = default;
  friend auto operator<=>(const SpaceId&, const SpaceId&) = default;
};

int dim_space(const SpaceId& s);

/// A boundary divisor (A u B, d_A, d_B). Stored in canonical presentation:
/// the one of (A, d_A) and (B, d_B) that is smaller in (degree, sorted set)
/// order. The complementary side is implied by the ambient space.
struct BoundarySym {
  MarkSet side = 0;
  int deg = 0;

  /// Canonical presentation of the weighted partition with side `a` of
  /// degree `deg_a`. Throws DomainError when the partition is unstable.
  static BoundarySym make(const SpaceId& s, MarkSet a, int deg_a);
  static bool is_stable(const SpaceId& s, MarkSet a, int deg_a);

  MarkSet other_side(const SpaceId& s) const { return s.markings() & ~side; }
  int other_deg(const SpaceId& s) const { return s.d - deg; }

  /// Degree of the side containing `marking`.
  int deg_of_side_with(const SpaceId& s, int marking) const {
    return contains(side, marking) ? deg : other_deg(s);
  }
  MarkSet side_with(const SpaceId& s, int marking) const {
    return contains(side, marking) ? side : other_side(s);
  }

  /// "K{A=1,3;dA=2}", or "K{dA=1}" when n == 0.
  std::string str(const SpaceId& s) const;

  friend bool operator==(const BoundarySym&, const BoundarySym&) = default;
  friend std::strong_ordering operator<=>(const BoundarySym& a, const BoundarySym& b) {
    if (auto c = a.deg <=> b.deg; c != 0) return c;
    return lex_compare(a.side, b.side);
  }
};

/// Every boundary divisor of `s`, sorted by canonical key.
std::vector<BoundarySym> enumerate_boundary(const SpaceId& s);

/// Rank of Pic(s) (x) Q. Requires d >= 1.
int picard_rank(const SpaceId& s);

/// Components whose unordered degree split is {j, d-j}.
std::vector<BoundarySym> degree_partition_class(const SpaceId& s, int j);

/// Components on which marking `i` lies on the side of degree j.
std::vector<BoundarySym> marked_degree_class(const SpaceId& s, int i, int j);

/// For d == 0: components on which marking `i` lies on a side with j markings.
std::vector<BoundarySym> marked_size_class(const SpaceId& s, int i, int j);

}  // namespace mbar
