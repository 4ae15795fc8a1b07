#pragma once

#include <span>
#include <string>
#include <vector>

#include "mbar/exactnum.hpp"
#include "mbar/memo.hpp"

namespace mbar {

/// Genus-0 invariant I_d(h^{a_1}, ..., h^{a_m}) of P^r. Insertions are kept
/// sorted in descending order.
struct GWKey {
  int r = 2;
  int d = 0;
  std::vector<int> insertions;

  static GWKey make(int r, int d, std::vector<int> insertions);

  int expected_sum() const { return r * d + r + d + static_cast<int>(insertions.size()) - 3; }
  /// "r d a1,a2,..." ("-" for no insertions); also the cache key.
  std::string str() const;
  /// Parses the `str()` form.
  static GWKey parse(const std::string& text);

  friend bool operator==(const GWKey&, const GWKey&) = default;
};

/// Number of rational plane curves of degree d through 3d-1 general points.
Rational nd(int d);

struct GWOptions {
  /// Use nd() for plane point-insertion invariants instead of the WDVV solver.
  bool plane_fast_path = true;
};

/// Computes GW invariants of P^r by the reduction rules (degree mismatch,
/// fundamental class, degree 0, divisor, lines through two points) and, for
/// the remaining invariants, by harvesting WDVV relations level by level and
/// eliminating exactly.
class GWEngine {
 public:
  explicit GWEngine(MemoStore& store, GWOptions opts = {}) : store_(store), opts_(opts) {}

  Rational invariant(const GWKey& key);
  Rational invariant(int r, int d, std::vector<int> insertions) {
    return invariant(GWKey::make(r, d, std::move(insertions)));
  }

  /// Both sides of the WDVV identity for an insertion list with distinguished
  /// entries at positions 0..3: the (01|23) split and the (02|13) split.
  struct WdvvSides {
    Rational split_12_34;
    Rational split_13_24;
  };
  WdvvSides wdvv_sides(int r, int d, std::span<const int> list);

  MemoStore& store() { return store_; }

 private:
  void solve_level(int r, int d, int m);

  MemoStore& store_;
  GWOptions opts_;
};

}  // namespace mbar
