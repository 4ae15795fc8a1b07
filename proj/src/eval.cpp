#include "mbar/eval.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

#include "mbar/errors.hpp"

namespace mbar {

// ----------------------------------------------------------------- BiClass

void BiClass::add(const Monomial& l, const Monomial& r, const Rational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms.try_emplace({l, r}, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms.erase(it);
  }
}

BiClass BiClass::from_sides(const SpaceId& left, const SpaceId& right, const DivClass& a, const DivClass& b) {
  BiClass out{left, right, {}};
  for (const auto& [sym, c] : a.terms()) out.add(Monomial::of(sym), Monomial(), c);
  for (const auto& [sym, c] : b.terms()) out.add(Monomial(), Monomial::of(sym), c);
  return out;
}

std::string BiClass::str() const {
  if (terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [lr, c] : terms) {
    if (!first) os << " + ";
    os << '(' << c << ")*[" << lr.first.str(left) << " | " << lr.second.str(right) << ']';
    first = false;
  }
  return os.str();
}

// ---------------------------------------------------------- BoundarySplit

BoundarySplit BoundarySplit::make(const SpaceId& s, const BoundarySym& k) {
  DivSymbol::boundary(k).validate(s);
  BoundarySplit out;
  out.space = s;
  out.k = k;
  const MarkSet a = k.side;
  const MarkSet b = k.other_side(s);
  out.left = SpaceId{s.r, k.deg, popcount(a) + 1};
  out.right = SpaceId{s.r, k.other_deg(s), popcount(b) + 1};
  out.left_of.assign(static_cast<std::size_t>(s.n) + 1, 0);
  out.right_of.assign(static_cast<std::size_t>(s.n) + 1, 0);
  out.left_orig.assign(static_cast<std::size_t>(out.left.n) + 1, 0);
  out.right_orig.assign(static_cast<std::size_t>(out.right.n) + 1, 0);
  int li = 0, ri = 0;
  for (int m = 1; m <= s.n; ++m) {
    if (contains(a, m)) {
      out.left_of[static_cast<std::size_t>(m)] = ++li;
      out.left_orig[static_cast<std::size_t>(li)] = m;
    } else {
      out.right_of[static_cast<std::size_t>(m)] = ++ri;
      out.right_orig[static_cast<std::size_t>(ri)] = m;
    }
  }
  return out;
}

int psi_degree(const SpaceId& s, const BoundarySym& k) {
  DivSymbol::boundary(k).validate(s);
  return (s.n == 0 && 2 * k.deg == s.d) ? 2 : 1;
}

// ------------------------------------------------------------ pullbacks

struct Evaluator::SplitContext {
  BoundarySplit geom;
  std::map<BoundarySym, std::pair<DivClass, DivClass>> attached;  // includes k itself
  std::pair<DivClass, DivClass> self;                             // psi^*(k)
  std::pair<DivClass, DivClass> self_simplified;
  std::pair<DivClass, DivClass> h;
};

namespace {

/// Boundary component of `s` obtained by gluing the side of `d` that does not
/// contain the attach point onto the other factor.
BoundarySym glue_into(const BoundarySplit& g, const SpaceId& factor, const std::vector<int>& orig,
                      const BoundarySym& d) {
  const int attach = factor.n;
  MarkSet far_side = d.side;
  int far_deg = d.deg;
  if (contains(far_side, attach)) {
    far_side = d.other_side(factor);
    far_deg = d.other_deg(factor);
  }
  MarkSet mapped = 0;
  for (int m : members(far_side)) mapped |= MarkSet{1} << (orig[static_cast<std::size_t>(m)] - 1);
  return BoundarySym::make(g.space, mapped, far_deg);
}

DivClass h_class(const SpaceId& s) { return s.d == 0 ? DivClass() : DivClass(DivSymbol::h()); }

std::shared_ptr<Evaluator::SplitContext> build_context(const SpaceId& s, const BoundarySym& k) {
  auto ctx = std::make_shared<Evaluator::SplitContext>();
  ctx->geom = BoundarySplit::make(s, k);
  const auto& g = ctx->geom;

  for (const auto& d : enumerate_boundary(g.left))
    ctx->attached[glue_into(g, g.left, g.left_orig, d)].first.add(DivSymbol::boundary(d), Rational(1));
  for (const auto& d : enumerate_boundary(g.right))
    ctx->attached[glue_into(g, g.right, g.right_orig, d)].second.add(DivSymbol::boundary(d), Rational(1));

  // -psi^*(k) = sum_{T != k} psi^*(T) + tau_A^*(w_A^2 - s_A^2) + tau_B^*(w_B^2 - s_B^2)
  DivClass a = section_self_class(g.left, g.left_attach()) - omega_squared_class(g.left);
  DivClass b = section_self_class(g.right, g.right_attach()) - omega_squared_class(g.right);
  for (const auto& [t, ab] : ctx->attached) {
    if (t == k) continue;
    a -= ab.first;
    b -= ab.second;
  }
  ctx->self = {std::move(a), std::move(b)};

  DivClass sa = section_self_class(g.left, g.left_attach());
  DivClass sb = section_self_class(g.right, g.right_attach());
  if (auto it = ctx->attached.find(k); it != ctx->attached.end()) {
    sa += it->second.first;
    sb += it->second.second;
  }
  ctx->self_simplified = {std::move(sa), std::move(sb)};
  ctx->h = {h_class(g.left), h_class(g.right)};
  return ctx;
}

std::pair<DivClass, DivClass> pullback_pair(const Evaluator::SplitContext& ctx, const DivSymbol& sym) {
  const auto& g = ctx.geom;
  switch (sym.kind) {
    case DivSymbol::Kind::H:
      return ctx.h;
    case DivSymbol::Kind::L: {
      const auto i = static_cast<std::size_t>(sym.marking);
      if (g.left_of[i] != 0) return {DivClass(DivSymbol::l(g.left_of[i])), DivClass()};
      return {DivClass(), DivClass(DivSymbol::l(g.right_of[i]))};
    }
    case DivSymbol::Kind::B: {
      if (sym.bdry == g.k) return ctx.self;
      auto it = ctx.attached.find(sym.bdry);
      if (it == ctx.attached.end()) return {};
      return it->second;
    }
  }
  return {};
}

}  // namespace

BiClass psi_pullback(const SpaceId& s, const BoundarySym& k, const DivSymbol& sym) {
  sym.validate(s);
  auto ctx = build_context(s, k);
  auto [a, b] = pullback_pair(*ctx, sym);
  return BiClass::from_sides(ctx->geom.left, ctx->geom.right, a, b);
}

BiClass attached_boundary(const SpaceId& s, const BoundarySym& k, const BoundarySym& t) {
  DivSymbol::boundary(t).validate(s);
  auto ctx = build_context(s, k);
  auto it = ctx->attached.find(t);
  if (it == ctx->attached.end()) return BiClass{ctx->geom.left, ctx->geom.right, {}};
  return BiClass::from_sides(ctx->geom.left, ctx->geom.right, it->second.first, it->second.second);
}

BiClass psi_self_simplified(const SpaceId& s, const BoundarySym& k) {
  auto ctx = build_context(s, k);
  return BiClass::from_sides(ctx->geom.left, ctx->geom.right, ctx->self_simplified.first, ctx->self_simplified.second);
}

// ---------------------------------------------------------------- Evaluator

Evaluator::Evaluator(MemoStore& store, GWOptions gw_opts, bool canonical_keys)
    : store_(store), gw_(store, gw_opts), canonical_keys_(canonical_keys) {}

std::shared_ptr<const Evaluator::SplitContext> Evaluator::context(const SpaceId& s, const BoundarySym& k) {
  {
    std::lock_guard lock(ctx_mu_);
    auto it = contexts_.find({s, k});
    if (it != contexts_.end()) return it->second;
  }
  std::shared_ptr<const SplitContext> ctx = build_context(s, k);
  std::lock_guard lock(ctx_mu_);
  return contexts_.try_emplace({s, k}, std::move(ctx)).first->second;
}

namespace {

/// Products that vanish for a reason visible from the exponents alone:
/// L_i^{r+1} = 0, and on degree-0 spaces H = 0 and all L_i coincide.
bool trivially_zero(const SpaceId& s, const Monomial& m) {
  int l_total = 0;
  for (const auto& [sym, e] : m.factors()) {
    if (sym.is_l()) {
      if (e > s.r) return true;
      l_total += e;
    } else if (sym.is_h() && s.d == 0) {
      return true;
    }
  }
  return s.d == 0 && l_total > s.r;
}

/// Per-marking invariant used to order markings before breaking ties.
std::vector<int> marking_signature(const SpaceId& s, const Monomial& m, int i) {
  std::vector<int> sig{m.exponent(DivSymbol::l(i))};
  std::vector<int> incid;
  for (const auto& [sym, e] : m.factors()) {
    if (!sym.is_boundary()) continue;
    const MarkSet side = sym.bdry.side_with(s, i);
    incid.push_back((e * 64 + sym.bdry.deg_of_side_with(s, i)) * 64 + popcount(side));
  }
  std::sort(incid.begin(), incid.end());
  sig.insert(sig.end(), incid.begin(), incid.end());
  return sig;
}

constexpr long kMaxTieBreakPermutations = 720;

}  // namespace

Monomial Evaluator::canonicalize(const SpaceId& s, const Monomial& m) {
  if (s.n <= 1 || m.empty()) return m;
  std::vector<std::pair<std::vector<int>, int>> sigs;
  sigs.reserve(static_cast<std::size_t>(s.n));
  for (int i = 1; i <= s.n; ++i) sigs.emplace_back(marking_signature(s, m, i), i);
  std::sort(sigs.begin(), sigs.end());

  std::vector<int> order;  // order[pos] = original marking getting label pos+1
  std::vector<std::pair<std::size_t, std::size_t>> groups;
  long perms = 1;
  for (std::size_t i = 0; i < sigs.size();) {
    std::size_t j = i;
    while (j < sigs.size() && sigs[j].first == sigs[i].first) ++j;
    if (j - i > 1) {
      groups.emplace_back(i, j);
      for (std::size_t t = 2; t <= j - i && perms <= kMaxTieBreakPermutations; ++t) perms *= static_cast<long>(t);
    }
    for (std::size_t t = i; t < j; ++t) order.push_back(sigs[t].second);
    i = j;
  }

  auto apply = [&](const std::vector<int>& ord) {
    std::vector<int> perm(static_cast<std::size_t>(s.n) + 1, 0);
    for (std::size_t pos = 0; pos < ord.size(); ++pos) perm[static_cast<std::size_t>(ord[pos])] = static_cast<int>(pos) + 1;
    return relabel(s, m, perm);
  };

  if (groups.empty() || perms > kMaxTieBreakPermutations) return apply(order);

  // Exhaust the permutations inside each tie group, keeping the smallest image.
  Monomial best = apply(order);
  std::function<void(std::size_t)> rec = [&](std::size_t gi) {
    if (gi == groups.size()) {
      Monomial cand = apply(order);
      if (cand < best) best = std::move(cand);
      return;
    }
    auto [lo, hi] = groups[gi];
    auto first = order.begin() + static_cast<std::ptrdiff_t>(lo);
    auto last = order.begin() + static_cast<std::ptrdiff_t>(hi);
    std::sort(first, last);
    do {
      rec(gi + 1);
    } while (std::next_permutation(first, last));
  };
  rec(0);
  return best;
}

std::string Evaluator::memo_key(const SpaceId& s, const Monomial& m) { return s.str() + " " + m.str(s); }

Rational Evaluator::eval_top(const SpaceId& s, const Monomial& m) {
  s.validate();
  m.validate(s);
  if (m.degree() != s.dim())
    throw DomainError("not a top product: degree " + std::to_string(m.degree()) + " on " + s.str() + " of dimension " +
                      std::to_string(s.dim()));
  if (s.r == 2 && s.d == 2 && s.n == 0) {
    // Pull back to the one-pointed space and cap with L_1, which has degree d over the base.
    const SpaceId up = forgetful_target(s);
    Polynomial lifted = forgetful_pullback(s, m) * DivClass(DivSymbol::l(1));
    Rational total(0);
    for (const auto& [mono, c] : lifted.terms()) total += c * integrate(up, mono);
    return total / Rational(s.d);
  }
  return integrate(s, m);
}

Rational Evaluator::eval_top(const SpaceId& s, const Polynomial& p) {
  Rational total(0);
  for (const auto& [m, c] : p.terms()) total += c * eval_top(s, m);
  return total;
}

Rational Evaluator::integrate(const SpaceId& s, const Monomial& m) {
  if (m.degree() != s.dim()) return Rational(0);
  if (trivially_zero(s, m)) return Rational(0);

  const Monomial canon = canonical_keys_ ? canonicalize(s, m) : m;
  const std::string key = memo_key(s, canon);
  if (auto hit = store_.find_eval(key)) return *hit;

  Rational value(0);
  if (canon.has_boundary()) {
    value = split_and_integrate(s, canon);
  } else if (s.d == 0) {
    value = Rational(s.n == 3 ? 1 : 0);
  } else {
    std::vector<int> insertions(static_cast<std::size_t>(s.n), 0);
    int h_count = 0;
    for (const auto& [sym, e] : canon.factors()) {
      if (sym.is_l()) insertions[static_cast<std::size_t>(sym.marking - 1)] = e;
      if (sym.is_h()) h_count = e;
    }
    insertions.insert(insertions.end(), static_cast<std::size_t>(h_count), 2);
    value = gw_.invariant(s.r, s.d, std::move(insertions));
  }
  store_.put_eval(key, value);
  return value;
}

Rational Evaluator::integrate_product(const SpaceId& space,
                                      const std::vector<std::pair<const DivClass*, int>>& factors,
                                      const Monomial& extra) {
  Polynomial poly(extra);
  for (const auto& [cls, e] : factors) {
    for (int t = 0; t < e; ++t) {
      Polynomial next;
      for (const auto& [mono, c] : poly.terms())
        for (const auto& [sym, v] : cls->terms()) {
          Monomial prod = mono;
          prod.multiply(sym);
          if (trivially_zero(space, prod)) continue;
          next.add(prod, c * v);
        }
      poly = std::move(next);
      if (poly.is_zero()) return Rational(0);
    }
  }
  Rational total(0);
  for (const auto& [mono, c] : poly.terms()) {
    Rational v = integrate(space, mono);
    if (!v.is_zero()) total += c * v;
  }
  return total;
}

Rational Evaluator::split_and_integrate(const SpaceId& s, const Monomial& m) {
  BoundarySym k{};
  for (const auto& [sym, e] : m.factors())
    if (sym.is_boundary()) {
      k = sym.bdry;
      break;
    }
  auto ctx = context(s, k);
  const auto& g = ctx->geom;
  const int dim_a = g.left.dim();
  const int dim_b = g.right.dim();

  struct Factor {
    std::pair<DivClass, DivClass> ab;
    int exp;
  };
  std::vector<Factor> factors;
  for (const auto& [sym, e] : m.factors()) {
    int exp = (sym.is_boundary() && sym.bdry == k) ? e - 1 : e;
    if (exp == 0) continue;
    factors.push_back({pullback_pair(*ctx, sym), exp});
  }

  Rational total(0);
  std::vector<int> split(factors.size(), 0);
  // Distribute each factor's exponent between the two sides, then cap with the
  // diagonal class sum_e L_{p_A}^e x L_{p_B}^{r-e}.
  std::function<void(std::size_t, int, int)> rec = [&](std::size_t idx, int deg_a, int deg_b) {
    if (deg_a > dim_a || deg_b > dim_b) return;
    if (idx == factors.size()) {
      const int e_a = dim_a - deg_a;
      const int e_b = dim_b - deg_b;
      if (e_a < 0 || e_a > s.r || e_a + e_b != s.r) return;
      Rational coeff(1);
      std::vector<std::pair<const DivClass*, int>> left, right;
      for (std::size_t i = 0; i < factors.size(); ++i) {
        coeff *= binomial(factors[i].exp, split[i]);
        if (split[i] > 0) left.emplace_back(&factors[i].ab.first, split[i]);
        if (factors[i].exp - split[i] > 0) right.emplace_back(&factors[i].ab.second, factors[i].exp - split[i]);
      }
      Rational fa = integrate_product(g.left, left, Monomial::of(DivSymbol::l(g.left_attach()), e_a));
      if (fa.is_zero()) return;
      Rational fb = integrate_product(g.right, right, Monomial::of(DivSymbol::l(g.right_attach()), e_b));
      total += coeff * fa * fb;
      return;
    }
    const auto& f = factors[idx];
    int lo = f.ab.second.is_zero() ? f.exp : 0;
    int hi = f.ab.first.is_zero() ? 0 : f.exp;
    for (int j = lo; j <= hi; ++j) {
      split[idx] = j;
      rec(idx + 1, deg_a + j, deg_b + f.exp - j);
    }
  };
  rec(0, 0, 0);
  return total / Rational(psi_degree(s, k));
}

}  // namespace mbar
