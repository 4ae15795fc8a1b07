#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "mbar/divalg.hpp"
#include "mbar/exactnum.hpp"
#include "mbar/gw.hpp"
#include "mbar/memo.hpp"
#include "mbar/moduli.hpp"

namespace mbar {

/// A class on M_A x M_B, as a combination of (left monomial, right monomial).
struct BiClass {
  SpaceId left;
  SpaceId right;
  std::map<std::pair<Monomial, Monomial>, Rational> terms;

  void add(const Monomial& l, const Monomial& r, const Rational& c);
  /// tau_A^*(a) + tau_B^*(b).
  static BiClass from_sides(const SpaceId& left, const SpaceId& right, const DivClass& a, const DivClass& b);

  friend bool operator==(const BiClass& x, const BiClass& y) { return x.terms == y.terms; }
  std::string str() const;
};

/// The two factor spaces of a boundary component K = (A u B, d_A, d_B):
/// M_A = M_{0, A u {p_A}}(r, d_A) and M_B likewise. Markings of A keep their
/// relative order and become 1..|A|; p_A is |A|+1.
struct BoundarySplit {
  SpaceId space;
  BoundarySym k;
  SpaceId left;
  SpaceId right;
  std::vector<int> left_of;    // original marking -> label on M_A, 0 if on B
  std::vector<int> right_of;   // original marking -> label on M_B, 0 if on A
  std::vector<int> left_orig;  // label on M_A -> original marking (attach point maps to 0)
  std::vector<int> right_orig;

  int left_attach() const { return left.n; }
  int right_attach() const { return right.n; }

  static BoundarySplit make(const SpaceId& s, const BoundarySym& k);
};

/// 2 when the gluing map onto K is generically 2-1 (n = 0, d_A = d_B), else 1.
int psi_degree(const SpaceId& s, const BoundarySym& k);

/// Pullback to M_A x M_B of one generator of Pic(s), restricted to K~.
BiClass psi_pullback(const SpaceId& s, const BoundarySym& k, const DivSymbol& sym);

/// The boundary divisors of M_A and M_B that glue into boundary component `t`
/// of `s` (attach-side reconstruction). For t == k these are the divisors
/// along which K meets itself.
BiClass attached_boundary(const SpaceId& s, const BoundarySym& k, const BoundarySym& t);

/// psi^*(k) as the self-meeting divisors plus the pulled-back section
/// self-intersections at the attach points. Equal to psi_pullback(s, k, k).
BiClass psi_self_simplified(const SpaceId& s, const BoundarySym& k);

/// Top intersection products on M_{0,n}(r,d).
///
/// Monomials containing a boundary component are evaluated on the glued
/// product M_A x M_B; pure {L_i, H} monomials are GW invariants. Results are
/// memoized in the store under a marking-relabeling canonical key.
class Evaluator {
 public:
  /// `canonical_keys = false` evaluates monomials exactly as given, without
  /// relabeling to the canonical representative (used to test relabeling invariance).
  explicit Evaluator(MemoStore& store, GWOptions gw_opts = {}, bool canonical_keys = true);

  /// Throws DomainError unless deg(m) == dim(s). On r=2,d=2,n=0 the product
  /// is computed as (1/2) of the pulled-back product times L_1 on n=1.
  Rational eval_top(const SpaceId& s, const Monomial& m);
  Rational eval_top(const SpaceId& s, const Polynomial& p);

  /// Internal integration convention: zero when deg(m) != dim(s).
  Rational integrate(const SpaceId& s, const Monomial& m);

  GWEngine& gw() { return gw_; }
  MemoStore& store() { return store_; }

  struct SplitContext;

  /// Relabels markings to the canonical representative used for memo keys.
  static Monomial canonicalize(const SpaceId& s, const Monomial& m);
  static std::string memo_key(const SpaceId& s, const Monomial& m);

 private:
  std::shared_ptr<const SplitContext> context(const SpaceId& s, const BoundarySym& k);
  Rational split_and_integrate(const SpaceId& s, const Monomial& m);
  Rational integrate_product(const SpaceId& space, const std::vector<std::pair<const DivClass*, int>>& factors,
                             const Monomial& extra);

  MemoStore& store_;
  GWEngine gw_;
  bool canonical_keys_ = true;
  std::mutex ctx_mu_;
  std::map<std::pair<SpaceId, BoundarySym>, std::shared_ptr<const SplitContext>> contexts_;
};

}  // namespace mbar
