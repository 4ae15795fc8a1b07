#include "mbar/moduli.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "mbar/errors.hpp"

namespace mbar {

std::vector<int> members(MarkSet s) {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(popcount(s)));
  for (int i = 1; s != 0; ++i, s >>= 1)
    if (s & 1u) out.push_back(i);
  return out;
}

std::strong_ordering lex_compare(MarkSet a, MarkSet b) {
  if (a == b) return std::strong_ordering::equal;
  MarkSet diff = a ^ b;
  MarkSet low = diff & (~diff + 1u);
  MarkSet at_or_above = ~(low - 1u);
  // The first differing position holds `low` in one list; the other list
  // either continues with a larger element or has ended.
  if (a & low) return (b & at_or_above) ? std::strong_ordering::less : std::strong_ordering::greater;
  return (a & at_or_above) ? std::strong_ordering::greater : std::strong_ordering::less;
}

void SpaceId::validate() const {
  if (r < 2) throw DomainError("target dimension r must be >= 2 (got " + std::to_string(r) + ")");
  if (d < 0) throw DomainError("degree d must be >= 0");
  if (n < 0 || n > kMaxMarkings) throw DomainError("marking count out of range");
  if (d == 0 && n < 3) throw DomainError("degree-0 space needs at least 3 markings");
}

std::string SpaceId::str() const {
  return "r=" + std::to_string(r) + ",d=" + std::to_string(d) + ",n=" + std::to_string(n);
}

namespace {

int parse_int(std::string_view text, const char* what) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
    throw ParseError(std::string("bad integer for ") + what + ": '" + std::string(text) + "'");
  return v;
}

}  // namespace

SpaceId SpaceId::parse(std::string_view text) {
  SpaceId s;
  bool have_r = false, have_d = false;
  s.n = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    std::string_view item = text.substr(pos, comma - pos);
    auto eq = item.find('=');
    if (eq == std::string_view::npos) throw ParseError("bad space item '" + std::string(item) + "', expected key=value");
    std::string_view key = item.substr(0, eq);
    std::string_view val = item.substr(eq + 1);
    if (key == "r") {
      s.r = parse_int(val, "r");
      have_r = true;
    } else if (key == "d") {
      s.d = parse_int(val, "d");
      have_d = true;
    } else if (key == "n") {
      s.n = parse_int(val, "n");
    } else {
      throw ParseError("unknown space key '" + std::string(key) + "'");
    }
    pos = comma + 1;
  }
  if (!have_r || !have_d) throw ParseError("space needs r= and d= (e.g. r=2,d=3,n=0)");
  s.validate();
  return s;
}

int dim_space(const SpaceId& s) { return s.dim(); }

bool BoundarySym::is_stable(const SpaceId& s, MarkSet a, int deg_a) {
  MarkSet all = s.markings();
  if ((a & ~all) != 0) return false;
  if (deg_a < 0 || deg_a > s.d) return false;
  MarkSet b = all & ~a;
  int deg_b = s.d - deg_a;
  if (deg_a == 0 && popcount(a) < 2) return false;
  if (deg_b == 0 && popcount(b) < 2) return false;
  return true;
}

BoundarySym BoundarySym::make(const SpaceId& s, MarkSet a, int deg_a) {
  if (!is_stable(s, a, deg_a)) throw DomainError("unstable weighted partition for " + s.str());
  MarkSet b = s.markings() & ~a;
  BoundarySym x{a, deg_a};
  BoundarySym y{b, s.d - deg_a};
  return (y < x) ? y : x;
}

std::string BoundarySym::str(const SpaceId& s) const {
  std::ostringstream os;
  os << "K{";
  if (s.n > 0) {
    os << "A=";
    bool first = true;
    for (int m : members(side)) {
      if (!first) os << ',';
      os << m;
      first = false;
    }
    os << ';';
  }
  os << "dA=" << deg << '}';
  return os.str();
}

std::vector<BoundarySym> enumerate_boundary(const SpaceId& s) {
  std::vector<BoundarySym> out;
  MarkSet all = s.markings();
  for (MarkSet a = 0;; ++a) {
    for (int da = 0; da <= s.d; ++da) {
      if (!BoundarySym::is_stable(s, a, da)) continue;
      BoundarySym self{a, da};
      if (BoundarySym::make(s, a, da) == self) out.push_back(self);
    }
    if (a == all) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

int picard_rank(const SpaceId& s) {
  s.validate();
  if (s.d < 1) throw DomainError("picard_rank: degree 0 is out of scope");
  if (s.n == 0) return s.d / 2 + 1;
  long rank = static_cast<long>(s.d + 1) * (1L << (s.n - 1)) - static_cast<long>(s.n) * (s.n - 1) / 2;
  return static_cast<int>(rank);
}

std::vector<BoundarySym> degree_partition_class(const SpaceId& s, int j) {
  if (s.d < 1) throw DomainError("degree_partition_class needs d >= 1");
  if (j < 0 || j > s.d / 2) throw DomainError("degree split index out of range");
  std::vector<BoundarySym> out;
  for (const auto& b : enumerate_boundary(s))
    if (std::min(b.deg, s.d - b.deg) == j) out.push_back(b);
  return out;
}

std::vector<BoundarySym> marked_degree_class(const SpaceId& s, int i, int j) {
  if (i < 1 || i > s.n) throw DomainError("marking " + std::to_string(i) + " not in " + s.str());
  if (j < 0 || j > s.d) throw DomainError("degree out of range");
  std::vector<BoundarySym> out;
  for (const auto& b : enumerate_boundary(s))
    if (b.deg_of_side_with(s, i) == j) out.push_back(b);
  return out;
}

std::vector<BoundarySym> marked_size_class(const SpaceId& s, int i, int j) {
  if (s.d != 0) throw DomainError("marked_size_class applies to degree-0 spaces");
  if (i < 1 || i > s.n) throw DomainError("marking " + std::to_string(i) + " not in " + s.str());
  if (j < 0 || j > s.n) throw DomainError("side size out of range");
  std::vector<BoundarySym> out;
  for (const auto& b : enumerate_boundary(s))
    if (popcount(b.side_with(s, i)) == j) out.push_back(b);
  return out;
}

}  // namespace mbar
