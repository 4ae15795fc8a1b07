#include "mbar/charnum.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <thread>

#include "mbar/errors.hpp"
#include "mbar/gw.hpp"

namespace mbar {

void CharNumQuery::validate() const {
  if (r < 2) throw DomainError("characteristic numbers need r >= 2");
  if (d < 1) throw DomainError("characteristic numbers need d >= 1");
  if (beta < 0) throw DomainError("tangency count must be >= 0");
  if (beta > 0 && d < 2) throw DomainError("tangency conditions need d >= 2");
  int weight = beta;
  for (const auto& [codim, count] : alpha) {
    if (codim < 2 || codim > r)
      throw DomainError("incidence codimension " + std::to_string(codim) + " outside [2, " + std::to_string(r) + "]");
    if (count < 0) throw DomainError("incidence counts must be >= 0");
    weight += (codim - 1) * count;
  }
  const int expected = r * d + r + d - 3;
  if (weight != expected)
    throw DomainError("conditions impose " + std::to_string(weight) + " but rational curves of degree " +
                      std::to_string(d) + " in P^" + std::to_string(r) + " move in dimension " +
                      std::to_string(expected));
}

std::string CharNumQuery::str() const {
  std::string out = "r=" + std::to_string(r) + ",d=" + std::to_string(d);
  for (const auto& [codim, count] : alpha)
    if (count > 0) out += ",alpha" + std::to_string(codim) + "=" + std::to_string(count);
  out += ",beta=" + std::to_string(beta);
  return out;
}

std::pair<SpaceId, Polynomial> charnum_product(const CharNumQuery& q, bool all_markings) {
  q.validate();
  int n = 0;
  for (const auto& [codim, count] : q.alpha)
    if (codim >= 3 || all_markings) n += count;
  SpaceId s{q.r, q.d, n};
  s.validate();

  std::vector<Monomial::Factor> factors;
  int next = 1;
  int h_count = 0;
  // Highest codimension first, so the point conditions get the lowest labels.
  for (auto it = q.alpha.rbegin(); it != q.alpha.rend(); ++it) {
    const auto [codim, count] = *it;
    if (codim == 2 && !all_markings) {
      h_count += count;
      continue;
    }
    for (int c = 0; c < count; ++c) factors.emplace_back(DivSymbol::l(next++), codim);
  }
  if (h_count > 0) factors.emplace_back(DivSymbol::h(), h_count);
  Polynomial p(Monomial(std::move(factors)));
  if (q.beta > 0) p = p * power(tangency_class(s), q.beta);
  return {s, std::move(p)};
}

Rational characteristic_number(Evaluator& ev, const CharNumQuery& q, bool all_markings) {
  auto [s, p] = charnum_product(q, all_markings);
  return ev.eval_top(s, p);
}

Rational boundary_point_oracle(int d, int i) {
  if (d < 2) throw DomainError("boundary_point_oracle needs d >= 2");
  if (i < 1 || i > d / 2) throw DomainError("boundary_point_oracle: i must lie in [1, d/2]");
  if (2 * i != d)
    return binomial(3 * d - 2, 3 * i - 1) * Rational(i * (d - i)) * nd(i) * nd(d - i);
  const int h = d / 2;
  return binomial(3 * d - 2, 3 * h - 1) * Rational(h * h) * nd(h) * nd(h) / Rational(2);
}

Rational cuspidal_closed_form(int d) {
  if (d < 3) throw DomainError("cuspidal counts need d >= 3");
  Rational sum(0);
  for (int i = 1; i <= d - 1; ++i) {
    const int j = d - i;
    sum += binomial(3 * d - 2, 3 * i - 1) * nd(i) * nd(j) * Rational(3 * i * i * j * j - 2 * d * i * j);
  }
  return Rational(3 * d - 3) / Rational(d) * nd(d) + sum / Rational(2 * d);
}

Rational cuspidal_count(Evaluator& ev, int d) {
  Rational closed = cuspidal_closed_form(d);
  SpaceId s{2, d, 0};
  Polynomial p = Polynomial(Monomial::of(DivSymbol::h(), 3 * d - 2)) * cuspidal_class(s);
  Rational direct = ev.eval_top(s, p);
  if (closed != direct)
    throw DomainError("cuspidal count routes disagree for d=" + std::to_string(d) + ": closed form " + closed.str() +
                      ", Z.H^" + std::to_string(3 * d - 2) + " = " + direct.str());
  return closed;
}

// ------------------------------------------------------------------ tables

namespace {

struct RowSpec {
  std::string label;
  std::function<Rational(Evaluator&)> compute;
};

struct TableSpec {
  std::string title;
  SpaceId space;
  bool labels_are_monomials;
  std::vector<RowSpec> rows;
};

std::string power_label(const std::string& sym, int e) {
  if (e == 0) return {};
  return e == 1 ? sym : sym + "^" + std::to_string(e);
}

std::string join_label(std::initializer_list<std::string> parts) {
  std::string out;
  for (const auto& p : parts) {
    if (p.empty()) continue;
    if (!out.empty()) out += ' ';
    out += p;
  }
  return out.empty() ? "1" : out;
}

/// Rows H^a T^b with a + b = total: the codim-2 incidence / tangency family.
TableSpec tangency_family(const std::string& title, int r, int d) {
  TableSpec t{title, SpaceId{r, d, 0}, false, {}};
  const int total = r * d + r + d - 3;
  for (int b = 0; b <= total; ++b) {
    const int a = total - b;
    CharNumQuery q{r, d, {{2, a}}, b};
    t.rows.push_back({join_label({power_label("H", a), power_label("T", b)}),
                      [q](Evaluator& ev) { return characteristic_number(ev, q); }});
  }
  return t;
}

RowSpec product_row(const SpaceId& s, const Monomial& m) {
  return {m.str(s), [s, m](Evaluator& ev) { return ev.eval_top(s, m); }};
}

/// All monomials H^a * prod(boundary^e) of top degree with no L factors.
TableSpec hk_products(const std::string& title, int r, int d) {
  SpaceId s{r, d, 0};
  TableSpec t{title, s, true, {}};
  // Highest-degree components vary slowest.
  auto bdry = enumerate_boundary(s);
  std::reverse(bdry.begin(), bdry.end());
  const int dim = s.dim();
  std::vector<int> exps(bdry.size(), 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t idx, int left) {
    if (idx == bdry.size()) {
      std::vector<Monomial::Factor> f;
      f.emplace_back(DivSymbol::h(), left);
      for (std::size_t i = 0; i < bdry.size(); ++i) f.emplace_back(DivSymbol::boundary(bdry[i]), exps[i]);
      t.rows.push_back(product_row(s, Monomial(std::move(f))));
      return;
    }
    for (int e = 0; e <= left; ++e) {
      exps[idx] = e;
      rec(idx + 1, left - e);
    }
  };
  rec(0, dim);
  return t;
}

TableSpec pointed_conic_products() {
  SpaceId s{2, 2, 1};
  TableSpec t{"top products on M_{0,1}(2,2)", s, true, {}};
  const DivSymbol k = DivSymbol::boundary(enumerate_boundary(s).front());
  for (int c = 0; c <= 2; ++c)
    for (int b = 0; b <= s.dim() - c; ++b) {
      const int a = s.dim() - c - b;
      t.rows.push_back(product_row(s, Monomial({{DivSymbol::h(), a}, {k, b}, {DivSymbol::l(1), c}})));
    }
  return t;
}

TableSpec make_spec(const std::string& id) {
  if (id == "conics-p2") return tangency_family("plane conics through a points tangent to b lines", 2, 2);
  if (id == "conics-p3") return tangency_family("space conics meeting a lines tangent to b planes", 3, 2);
  if (id == "cubics-p2") return tangency_family("rational plane cubics through a points tangent to b lines", 2, 3);
  if (id == "cubics-p3") return tangency_family("twisted cubics meeting a lines tangent to b planes", 3, 3);
  if (id == "quartics-p2") return tangency_family("rational plane quartics through a points tangent to b lines", 2, 4);
  if (id == "cuspidal") {
    TableSpec t{"one-cuspidal rational plane curves through 3d-2 points", SpaceId{2, 3, 0}, false, {}};
    for (int d = 3; d <= 6; ++d)
      t.rows.push_back({"C_" + std::to_string(d), [d](Evaluator& ev) { return cuspidal_count(ev, d); }});
    return t;
  }
  if (id == "conic-tangency") {
    SpaceId s{2, 2, 1};
    TableSpec t{"plane conics tangent to five conics", s, false, {}};
    t.rows.push_back({"(1/2) C^5 L1", [s](Evaluator& ev) {
                        Polynomial p = power(conic_tangency_class(s), 5) * DivClass(DivSymbol::l(1));
                        return ev.eval_top(s, p) / Rational(2);
                      }});
    return t;
  }
  if (id == "products-conics-p2") return pointed_conic_products();
  if (id == "products-conics-p3") return hk_products("top products on M_{0,0}(3,2)", 3, 2);
  if (id == "products-cubics-p2") return hk_products("top products on M_{0,0}(2,3)", 2, 3);
  if (id == "products-cubics-p3") return hk_products("top products on M_{0,0}(3,3)", 3, 3);
  if (id == "products-quartics-p2") return hk_products("top products on M_{0,0}(2,4)", 2, 4);
  throw DomainError("unknown table id '" + id + "'");
}

}  // namespace

std::vector<std::string> table_ids() {
  return {"conics-p2",          "conics-p3",          "cubics-p2",          "cubics-p3",
          "quartics-p2",        "cuspidal",           "conic-tangency",     "products-conics-p2",
          "products-conics-p3", "products-cubics-p2", "products-cubics-p3", "products-quartics-p2"};
}

std::string reproduce_table_title(const std::string& id) { return make_spec(id).title; }

Table reproduce_table(Evaluator& ev, const std::string& id, int jobs) {
  TableSpec spec = make_spec(id);
  Table out{id, spec.title, spec.space, spec.labels_are_monomials, {}};
  std::vector<std::optional<Rational>> values(spec.rows.size());

  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(spec.rows.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < spec.rows.size(); ++i) values[i] = spec.rows[i].compute(ev);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = next++; i < spec.rows.size(); i = next++) values[i] = spec.rows[i].compute(ev);
        } catch (...) {
          errors[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  for (std::size_t i = 0; i < spec.rows.size(); ++i) out.rows.push_back({spec.rows[i].label, *values[i]});
  return out;
}

}  // namespace mbar
