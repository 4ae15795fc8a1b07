#include "mbar/gw.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>

#include "mbar/errors.hpp"

namespace mbar {

GWKey GWKey::make(int r, int d, std::vector<int> insertions) {
  if (r < 2) throw DomainError("GW invariants need r >= 2");
  if (d < 0) throw DomainError("GW invariants need d >= 0");
  for (int a : insertions)
    if (a < 0 || a > r)
      throw DomainError("insertion h^" + std::to_string(a) + " outside [0, " + std::to_string(r) + "]");
  std::sort(insertions.begin(), insertions.end(), std::greater<>());
  return GWKey{r, d, std::move(insertions)};
}

std::string GWKey::str() const {
  std::string out = std::to_string(r) + " " + std::to_string(d) + " ";
  if (insertions.empty()) return out + "-";
  for (std::size_t i = 0; i < insertions.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(insertions[i]);
  }
  return out;
}

GWKey GWKey::parse(const std::string& text) {
  std::istringstream is(text);
  int r = 0, d = 0;
  std::string list;
  if (!(is >> r >> d >> list)) throw ParseError("bad GW key '" + text + "'");
  std::vector<int> ins;
  if (list != "-") {
    std::stringstream ls(list);
    std::string item;
    while (std::getline(ls, item, ',')) {
      try {
        ins.push_back(std::stoi(item));
      } catch (const std::exception&) {
        throw ParseError("bad insertion '" + item + "' in GW key '" + text + "'");
      }
    }
  }
  return make(r, d, std::move(ins));
}

Rational nd(int d) {
  if (d < 1) throw DomainError("N_d needs d >= 1");
  std::vector<Rational> n(static_cast<std::size_t>(d) + 1, Rational(0));
  n[1] = Rational(1);
  for (int k = 2; k <= d; ++k) {
    Rational sum(0);
    for (int i = 1; i < k; ++i) {
      int j = k - i;
      Rational bracket = Rational(j) * binomial(3 * k - 4, 3 * i - 2) - Rational(i) * binomial(3 * k - 4, 3 * i - 1);
      sum += n[static_cast<std::size_t>(i)] * n[static_cast<std::size_t>(j)] * Rational(i * i * j) * bracket;
    }
    n[static_cast<std::size_t>(k)] = sum;
  }
  return n[static_cast<std::size_t>(d)];
}

namespace {

/// Result of the closed-form reduction rules: either a value, or a residual
/// key (all insertions in [2, r], d >= 1) times a scale.
struct Reduction {
  Rational scale{1};
  std::optional<Rational> value;
  GWKey key;
};

Reduction reduce(GWKey key, bool plane_fast_path) {
  Reduction out;
  auto done = [&out](Rational v) {
    out.value = out.scale * v;
    return out;
  };
  for (;;) {
    const auto& ins = key.insertions;
    const int m = static_cast<int>(ins.size());
    if (std::any_of(ins.begin(), ins.end(), [&](int a) { return a < 0 || a > key.r; })) return done(Rational(0));
    if (std::accumulate(ins.begin(), ins.end(), 0) != key.expected_sum()) return done(Rational(0));
    bool has_zero = !ins.empty() && ins.back() == 0;
    if (has_zero && (key.d >= 1 || m >= 4)) return done(Rational(0));
    if (key.d == 0) return done(Rational(m == 3 ? 1 : 0));
    auto one = std::find(ins.begin(), ins.end(), 1);
    if (one != ins.end()) {
      key.insertions.erase(one);
      out.scale *= Rational(key.d);
      continue;
    }
    if (key.d == 1 && m == 2 && ins[0] == key.r && ins[1] == key.r) return done(Rational(1));
    if (plane_fast_path && key.r == 2 && std::all_of(ins.begin(), ins.end(), [](int a) { return a == 2; }))
      return done(nd(key.d));
    out.key = std::move(key);
    return out;
  }
}

using Counts = std::map<int, int>;  // insertion value -> multiplicity

/// Enumerates the nonzero-by-dimension terms of one side of the WDVV identity
///   sum_{d1+d2=d} sum_{S1 u S2 = rest} sum_e I_{d1}(a1,a2,S1,e) I_{d2}(r-e,a3,a4,S2)
/// calling visit(weight, key1, key2). The sum over ordered splits of the rest is
/// grouped by multiset, with `weight` counting the splits in each group.
void wdvv_terms(int r, int d, int a1, int a2, int a3, int a4, const Counts& rest,
                const std::function<void(const Rational&, const GWKey&, const GWKey&)>& visit) {
  std::vector<std::pair<int, int>> items(rest.begin(), rest.end());
  std::vector<int> pick(items.size(), 0);
  int rest_size = 0, rest_sum = 0;
  for (const auto& [v, k] : items) {
    rest_size += k;
    rest_sum += v * k;
  }

  std::function<void(std::size_t)> rec = [&](std::size_t idx) {
    if (idx < items.size()) {
      for (int c = 0; c <= items[idx].second; ++c) {
        pick[idx] = c;
        rec(idx + 1);
      }
      return;
    }
    Rational weight(1);
    int s1_size = 0, s1_sum = 0;
    std::vector<int> s1, s2;
    for (std::size_t i = 0; i < items.size(); ++i) {
      weight *= binomial(items[i].second, pick[i]);
      s1_size += pick[i];
      s1_sum += pick[i] * items[i].first;
      s1.insert(s1.end(), static_cast<std::size_t>(pick[i]), items[i].first);
      s2.insert(s2.end(), static_cast<std::size_t>(items[i].second - pick[i]), items[i].first);
    }
    const int s2_size = rest_size - s1_size;
    const int s2_sum = rest_sum - s1_sum;
    for (int d1 = 0; d1 <= d; ++d1) {
      const int d2 = d - d1;
      // The dimension constraint on the first factor fixes e.
      const int e = r * d1 + r + d1 + s1_size - (a1 + a2 + s1_sum);
      if (e < 0 || e > r) continue;
      if ((r - e) + a3 + a4 + s2_sum != r * d2 + r + d2 + s2_size) continue;
      if (d1 == 0 && s1_size != 0) continue;
      if (d2 == 0 && s2_size != 0) continue;
      std::vector<int> k1 = s1;
      k1.insert(k1.end(), {a1, a2, e});
      std::vector<int> k2 = s2;
      k2.insert(k2.end(), {r - e, a3, a4});
      visit(weight, GWKey::make(r, d1, std::move(k1)), GWKey::make(r, d2, std::move(k2)));
    }
  };
  rec(0);
}

/// Sparse linear system over Q solved incrementally in echelon form.
class ExactSystem {
 public:
  using Row = std::map<int, Rational>;

  explicit ExactSystem(int unknowns) : n_(unknowns) {}

  bool full_rank() const { return static_cast<int>(pivots_.size()) == n_; }

  /// Adds sum(row) = rhs. Returns false when the relation contradicts the
  /// rows already present.
  bool add(Row row, Rational rhs) {
    for (const auto& [col, prow] : pivots_) {
      auto it = row.find(col);
      if (it == row.end()) continue;
      Rational f = it->second;
      for (const auto& [c, v] : prow.first) {
        auto& slot = row[c];
        slot -= f * v;
      }
      rhs -= f * prow.second;
      for (auto jt = row.begin(); jt != row.end();) jt = jt->second.is_zero() ? row.erase(jt) : std::next(jt);
    }
    if (row.empty()) return rhs.is_zero();
    auto [col, lead] = *row.begin();
    for (auto& [c, v] : row) v /= lead;
    rhs /= lead;
    pivots_.emplace(col, std::make_pair(std::move(row), std::move(rhs)));
    return true;
  }

  /// Values of the unknowns that the current rows pin down.
  std::map<int, Rational> determined() const {
    auto rows = pivots_;
    for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
      const int col = it->first;
      const auto& [prow, prhs] = it->second;
      for (auto& [other_col, other] : rows) {
        if (other_col == col) continue;
        auto jt = other.first.find(col);
        if (jt == other.first.end()) continue;
        Rational f = jt->second;
        for (const auto& [c, v] : prow) other.first[c] -= f * v;
        other.second -= f * prhs;
        for (auto kt = other.first.begin(); kt != other.first.end();)
          kt = kt->second.is_zero() ? other.first.erase(kt) : std::next(kt);
      }
    }
    std::map<int, Rational> out;
    for (const auto& [col, row] : rows)
      if (row.first.size() == 1) out.emplace(col, row.second);
    return out;
  }

 private:
  int n_;
  std::map<int, std::pair<Row, Rational>> pivots_;
};

void enumerate_level(int r, int m, int remaining_sum, int max_entry, std::vector<int>& cur,
                     std::vector<std::vector<int>>& out, int min_entry) {
  if (static_cast<int>(cur.size()) == m) {
    if (remaining_sum == 0) out.push_back(cur);
    return;
  }
  const int slots = m - static_cast<int>(cur.size());
  for (int a = std::min(max_entry, r); a >= min_entry; --a) {
    if (a * slots < remaining_sum) break;
    if (min_entry * (slots - 1) > remaining_sum - a) continue;
    cur.push_back(a);
    enumerate_level(r, m, remaining_sum - a, a, cur, out, min_entry);
    cur.pop_back();
  }
}

}  // namespace

Rational GWEngine::invariant(const GWKey& key) {
  Reduction red = reduce(key, opts_.plane_fast_path);
  if (red.value) return *red.value;
  const std::string k = red.key.str();
  if (auto hit = store_.find_gw(k)) return red.scale * *hit;
  solve_level(red.key.r, red.key.d, static_cast<int>(red.key.insertions.size()));
  if (auto hit = store_.find_gw(k)) return red.scale * *hit;
  throw DomainError("WDVV relations do not determine GW invariant " + k);
}

void GWEngine::solve_level(int r, int d, int m) {
  const int target_sum = r * d + r + d + m - 3;
  std::vector<std::vector<int>> unknowns;
  {
    std::vector<int> cur;
    enumerate_level(r, m, target_sum, r, cur, unknowns, 2);
  }
  std::map<std::vector<int>, int> index;
  for (std::size_t i = 0; i < unknowns.size(); ++i) index.emplace(unknowns[i], static_cast<int>(i));

  ExactSystem system(static_cast<int>(unknowns.size()));

  // One relation: (a1 a2 | a3 a4) minus (a1 a3 | a2 a4) = 0.
  auto add_relation = [&](int a1, int a2, int a3, int a4, const Counts& rest) {
    ExactSystem::Row row;
    Rational constant(0);
    auto accumulate = [&](const Rational& sign) {
      return [&, sign](const Rational& weight, const GWKey& k1, const GWKey& k2) {
        const GWKey* level_key = nullptr;
        const GWKey* other = nullptr;
        if (k1.d == d) {
          level_key = &k1;
          other = &k2;
        } else if (k2.d == d) {
          level_key = &k2;
          other = &k1;
        }
        if (level_key != nullptr) {
          Rational other_value = invariant(*other);
          if (other_value.is_zero()) return;
          Reduction red = reduce(*level_key, opts_.plane_fast_path);
          if (red.value) {
            constant += sign * weight * other_value * *red.value;
          } else if (static_cast<int>(red.key.insertions.size()) == m) {
            auto hit = store_.find_gw(red.key.str());
            if (hit) {
              constant += sign * weight * other_value * red.scale * *hit;
            } else {
              row[index.at(red.key.insertions)] += sign * weight * other_value * red.scale;
            }
          } else {
            constant += sign * weight * other_value * red.scale * invariant(red.key);
          }
          return;
        }
        Rational v1 = invariant(k1);
        if (v1.is_zero()) return;
        constant += sign * weight * v1 * invariant(k2);
      };
    };
    wdvv_terms(r, d, a1, a2, a3, a4, rest, accumulate(Rational(1)));
    wdvv_terms(r, d, a1, a3, a2, a4, rest, accumulate(Rational(-1)));
    for (auto it = row.begin(); it != row.end();) it = it->second.is_zero() ? row.erase(it) : std::next(it);
    if (row.empty()) {
      if (!constant.is_zero())
        throw DomainError("inconsistent WDVV relation at level r=" + std::to_string(r) + " d=" + std::to_string(d));
      return;
    }
    if (!system.add(std::move(row), -constant))
      throw DomainError("inconsistent WDVV relations at level r=" + std::to_string(r) + " d=" + std::to_string(d));
  };

  // Tries every ordered choice of four distinguished entries from `list`.
  auto harvest_list = [&](const std::vector<int>& list, std::optional<std::pair<int, int>> fixed_front) {
    Counts all;
    for (int a : list) ++all[a];
    auto take = [](Counts& c, int v) {
      if (c[v] == 0) return false;
      if (--c[v] == 0) c.erase(v);
      return true;
    };
    std::vector<int> values;
    for (const auto& [v, k] : all) values.push_back(v);
    for (int a1 : values)
      for (int a2 : values) {
        if (fixed_front && (a1 != fixed_front->first || a2 != fixed_front->second)) continue;
        for (int a3 : values)
          for (int a4 : values) {
            if (system.full_rank()) return;
            Counts rest = all;
            if (!take(rest, a1) || !take(rest, a2) || !take(rest, a3) || !take(rest, a4)) continue;
            add_relation(a1, a2, a3, a4, rest);
          }
      }
  };

  // Splitting one entry u of an unknown into (u-1, 1) puts that unknown in
  // the (12|34) side; this alone usually reaches full rank.
  for (const auto& u : unknowns) {
    std::vector<int> seen;
    for (int v : u) {
      if (system.full_rank()) break;
      if (std::find(seen.begin(), seen.end(), v) != seen.end()) continue;
      seen.push_back(v);
      std::vector<int> list = u;
      list.erase(std::find(list.begin(), list.end(), v));
      list.push_back(v - 1);
      list.push_back(1);
      harvest_list(list, std::make_pair(v - 1, 1));
    }
  }
  if (!system.full_rank()) {
    std::vector<std::vector<int>> lists;
    std::vector<int> cur;
    enumerate_level(r, m + 1, target_sum, r, cur, lists, 1);
    for (const auto& list : lists) {
      if (system.full_rank()) break;
      harvest_list(list, std::nullopt);
    }
  }

  for (const auto& [idx, value] : system.determined())
    store_.put_gw(GWKey{r, d, unknowns[static_cast<std::size_t>(idx)]}.str(), value);
}

GWEngine::WdvvSides GWEngine::wdvv_sides(int r, int d, std::span<const int> list) {
  if (list.size() < 4) throw DomainError("WDVV needs at least four insertions");
  Counts rest;
  for (std::size_t i = 4; i < list.size(); ++i) ++rest[list[i]];
  auto side = [&](int a1, int a2, int a3, int a4) {
    Rational total(0);
    wdvv_terms(r, d, a1, a2, a3, a4, rest, [&](const Rational& w, const GWKey& k1, const GWKey& k2) {
      Rational v1 = invariant(k1);
      if (!v1.is_zero()) total += w * v1 * invariant(k2);
    });
    return total;
  };
  return {side(list[0], list[1], list[2], list[3]), side(list[0], list[2], list[1], list[3])};
}

}  // namespace mbar
