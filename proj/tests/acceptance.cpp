// Acceptance gate: one PASS/FAIL line per criterion, exact equality throughout.
#include <chrono>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mbar/charnum.hpp"
#include "mbar/eval.hpp"
#include "mbar/gw.hpp"

using namespace mbar;

namespace {

struct Criterion {
  int id;
  std::string what;
  int checks = 0;
  std::vector<std::string> failures;

  void expect(bool ok, const std::string& detail) {
    ++checks;
    if (!ok) failures.push_back(detail);
  }
  void equal(const Rational& got, const Rational& want, const std::string& label) {
    expect(got == want, label + ": got " + got.str() + ", want " + want.str());
  }
  void equal(const Rational& got, const std::string& want, const std::string& label) {
    equal(got, Rational::parse(want), label);
  }
};

Rational eval_text(Evaluator& ev, const SpaceId& s, const std::string& mono) {
  return ev.eval_top(s, Monomial::parse(s, mono));
}

std::string hk(int h, int k, const std::string& ksym) {
  std::string out;
  auto put = [&](const std::string& sym, int e) {
    if (e == 0) return;
    if (!out.empty()) out += ' ';
    out += e == 1 ? sym : sym + "^" + std::to_string(e);
  };
  put("H", h);
  put(ksym, k);
  return out;
}

/// Rows H^a T^b, a from total down to 0, against the expected column.
void charnum_column(Criterion& c, Evaluator& ev, int r, int d, const std::vector<std::string>& want,
                    std::vector<Rational>* produced) {
  const int total = r * d + r + d - 3;
  c.expect(static_cast<int>(want.size()) == total + 1, "expected column has the wrong length");
  for (int b = 0; b <= total; ++b) {
    CharNumQuery q{r, d, {{2, total - b}}, b};
    Rational v = characteristic_number(ev, q);
    if (produced) produced->push_back(v);
    c.equal(v, want[static_cast<std::size_t>(b)], q.str());
  }
}

/// H^{dim-b} K^b on M_{0,0}(r,d) for b = 0..dim.
void hk_column(Criterion& c, Evaluator& ev, int r, int d, const std::vector<std::string>& want) {
  SpaceId s{r, d, 0};
  for (int b = 0; b <= s.dim(); ++b) {
    std::string m = hk(s.dim() - b, b, "K{dA=1}");
    c.equal(eval_text(ev, s, m), want[static_cast<std::size_t>(b)], s.str() + " " + m);
  }
}

BiClass add(const BiClass& a, const BiClass& b) {
  BiClass out = a;
  for (const auto& [lr, v] : b.terms) out.add(lr.first, lr.second, v);
  return out;
}

struct QuarticEntry {
  int h, j, k;
  const char* value;
};

const QuarticEntry kQuarticProducts[] = {
    {11, 0, 0, "620"}, {10, 0, 1, "1620"}, {10, 1, 0, "504"}, {9, 0, 2, "3564"}, {9, 1, 1, "1512"}, {9, 2, 0, "0"},
    {8, 0, 3, "4052"}, {8, 1, 2, "4536"}, {8, 2, 1, "0"}, {7, 0, 4, "-8340"}, {7, 1, 3, "10920"}, {7, 2, 2, "672"},
    {6, 0, 5, "-48300"}, {6, 1, 4, "15480"}, {6, 2, 3, "4320"}, {5, 0, 6, "1260"}, {5, 1, 5, "-22296"},
    {5, 2, 4, "17184"}, {4, 0, 7, "153300"}, {4, 1, 6, "-22728"}, {4, 2, 5, "-11040"}, {3, 0, 8, "-338620/3"},
    {3, 1, 7, "70056"}, {3, 2, 6, "-34560"}, {2, 0, 9, "-13690660/27"}, {2, 1, 8, "5880"}, {2, 2, 7, "51072"},
    {1, 0, 10, "147582380/81"}, {1, 1, 9, "-385560"}, {1, 2, 8, "100800"}, {0, 0, 11, "-278947820/81"},
    {0, 1, 10, "1310904"}, {0, 2, 9, "-616896"}, {8, 3, 0, "-364"}, {7, 3, 1, "-1260"}, {7, 4, 0, "630"},
    {6, 3, 2, "-3852"}, {6, 4, 1, "1782"}, {6, 5, 0, "-645"}, {5, 3, 3, "-8836"}, {5, 4, 2, "3588"},
    {5, 5, 1, "-2385/2"}, {4, 3, 4, "4980"}, {4, 4, 3, "-1788"}, {4, 5, 2, "906"}, {3, 3, 5, "16356"},
    {3, 4, 4, "-7830"}, {3, 5, 3, "8241/2"}, {2, 3, 6, "-22060"}, {2, 4, 5, "7770"}, {2, 5, 4, "-1815"},
    {1, 3, 7, "-46452"}, {1, 4, 6, "22632"}, {1, 5, 5, "-22125/2"}, {0, 3, 8, "255444"}, {0, 4, 7, "-92232"},
    {0, 5, 6, "28920"}, {5, 6, 0, "2419/8"}, {4, 6, 1, "-4743/8"}, {4, 7, 0, "765/2"}, {3, 6, 2, "-18549/8"},
    {3, 7, 1, "1305"}, {3, 8, 0, "-5649/8"}, {2, 6, 3, "-3455/8"}, {2, 7, 2, "1923/2"}, {2, 8, 1, "-6615/8"},
    {1, 6, 4, "39075/8"}, {1, 7, 3, "-1680"}, {1, 8, 2, "2163/8"}, {0, 6, 5, "-56631/8"}, {0, 7, 4, "1701/2"},
    {0, 8, 3, "2289/8"}, {2, 9, 0, "4375/8"}, {1, 9, 1, "189"}, {1, 10, 0, "-7875/32"}, {0, 9, 2, "-189"},
    {0, 10, 1, "0"}, {0, 11, 0, "10143/128"}
};

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  MemoStore store;
  Evaluator ev(store);
  std::vector<Criterion> crit;
  std::vector<Rational> enumerative;  // characteristic numbers from criteria 2-7

  {
    Criterion c{1, "N_d sequence for d = 1..6"};
    const char* want[] = {"1", "1", "12", "620", "87304", "26312976"};
    for (int d = 1; d <= 6; ++d) c.equal(nd(d), want[d - 1], "N_" + std::to_string(d));
    // Also through the solver without the plane shortcut, d <= 5.
    MemoStore slow_store;
    GWEngine slow(slow_store, GWOptions{.plane_fast_path = false});
    for (int d = 1; d <= 5; ++d)
      c.equal(slow.invariant(2, d, std::vector<int>(static_cast<std::size_t>(3 * d - 1), 2)), want[d - 1],
              "WDVV N_" + std::to_string(d));
    crit.push_back(std::move(c));
  }

  {
    Criterion c{2, "plane conic characteristic numbers and the conics tangent to five conics"};
    charnum_column(c, ev, 2, 2, {"1", "2", "4", "4", "2", "1"}, &enumerative);
    // Directly on the pointed space: (1/2) H^a T^b L1.
    SpaceId s{2, 2, 1};
    const char* want[] = {"1", "2", "4", "4", "2", "1"};
    for (int b = 0; b <= 5; ++b) {
      Polynomial p = Polynomial(Monomial({{DivSymbol::h(), 5 - b}, {DivSymbol::l(1), 1}})) * Polynomial::one();
      if (b > 0) p = p * power(tangency_class(s), b);
      c.equal(ev.eval_top(s, p) / Rational(2), want[b], "(1/2) H^" + std::to_string(5 - b) + " T^" + std::to_string(b) + " L1");
    }
    Rational conics = ev.eval_top(s, power(conic_tangency_class(s), 5) * DivClass(DivSymbol::l(1))) / Rational(2);
    c.equal(conics, "3264", "(1/2) C^5 L1");
    enumerative.push_back(conics);
    crit.push_back(std::move(c));
  }

  {
    Criterion c{3, "full top-product table on M_{0,1}(2,2)"};
    SpaceId s{2, 2, 1};
    const std::pair<const char*, const char*> rows[] = {
        {"H^6", "0"},          {"H^5 K", "0"},        {"H^4 K^2", "0"},     {"H^3 K^3", "0"},      {"H^2 K^4", "0"},
        {"H K^5", "0"},        {"K^6", "0"},          {"H^5 L1", "2"},      {"H^4 K L1", "6"},     {"H^3 K^2 L1", "18"},
        {"H^2 K^3 L1", "-10"}, {"H K^4 L1", "-30"},   {"K^5 L1", "102"},    {"H^4 L1^2", "1"},     {"H^3 K L1^2", "3"},
        {"H^2 K^2 L1^2", "9"}, {"H K^3 L1^2", "-5"},  {"K^4 L1^2", "-15"},  {"H^3 L1^3", "0"},     {"H^2 K L1^3", "0"},
        {"H K^2 L1^3", "0"},   {"K^3 L1^3", "0"},
    };
    for (const auto& [label, want] : rows) {
      std::string text = label;
      for (std::size_t p = text.find('K'); p != std::string::npos; p = text.find('K', p + 1)) {
        text.replace(p, 1, "K{A=;dA=1}");
        p += 9;
      }
      c.equal(eval_text(ev, s, text), want, label);
    }
    crit.push_back(std::move(c));
  }

  {
    Criterion c{4, "space conics: H/K products and characteristic numbers"};
    hk_column(c, ev, 3, 2, {"92", "140", "140", "-100", "-68", "172", "-20", "-580", "1820"});
    charnum_column(c, ev, 3, 2, {"92", "116", "128", "104", "64", "32", "16", "8", "4"}, &enumerative);
    crit.push_back(std::move(c));
  }

  {
    Criterion c{5, "plane cubics: H/K products and characteristic numbers"};
    hk_column(c, ev, 2, 3, {"12", "42", "129", "285", "336", "-2541/4", "-8259/16", "19641/8", "-44835/16"});
    charnum_column(c, ev, 2, 3, {"12", "36", "100", "240", "480", "712", "756", "600", "400"}, &enumerative);
    crit.push_back(std::move(c));
  }

  {
    Criterion c{6, "twisted cubics: H/K products and characteristic numbers"};
    hk_column(c, ev, 3, 3,
              {"80160", "121440", "148920", "112080", "-7824", "-104100", "35880", "190095/2", "-222855/2",
               "-674007/16", "10112745/32", "-5995065/8", "58086435/32"});
    charnum_column(c, ev, 3, 3,
                   {"80160", "134400", "209760", "297280", "375296", "415360", "401920", "343360", "264320", "188256",
                    "128160", "85440", "56960"},
                   &enumerative);
    crit.push_back(std::move(c));
  }

  {
    Criterion c{7, "plane quartics: all 78 H/J/K products and characteristic numbers"};
    SpaceId s{2, 4, 0};
    for (const auto& e : kQuarticProducts) {
      std::string m = hk(e.h, 0, "");
      auto put = [&](const std::string& sym, int x) {
        if (x == 0) return;
        if (!m.empty()) m += ' ';
        m += x == 1 ? sym : sym + "^" + std::to_string(x);
      };
      put("K{dA=1}", e.k);
      put("K{dA=2}", e.j);
      c.equal(eval_text(ev, s, m), e.value, m);
    }
    charnum_column(c, ev, 2, 4,
                   {"620", "2184", "7200", "21776", "59424", "143040", "295544", "505320", "699216", "783584",
                    "728160", "581904"},
                   &enumerative);
    crit.push_back(std::move(c));
  }

  {
    Criterion c{8, "cuspidal counts, closed form against Z.H^{3d-2}"};
    const char* want[] = {"24", "2304", "435168", "156153600"};
    for (int d = 3; d <= 6; ++d) {
      Rational closed = cuspidal_closed_form(d);
      SpaceId s{2, d, 0};
      Rational direct = ev.eval_top(s, Polynomial(Monomial::of(DivSymbol::h(), 3 * d - 2)) * cuspidal_class(s));
      c.equal(closed, want[d - 3], "closed form C_" + std::to_string(d));
      c.equal(direct, want[d - 3], "Z.H^" + std::to_string(3 * d - 2) + " for d=" + std::to_string(d));
    }
    crit.push_back(std::move(c));
  }

  {
    Criterion c{9, "boundary point oracle against K^i.H^{3d-2}, d = 2..5"};
    for (int d = 2; d <= 5; ++d) {
      SpaceId s{2, d, 0};
      for (int i = 1; i <= d / 2; ++i) {
        Monomial m({{DivSymbol::h(), 3 * d - 2}, {DivSymbol::boundary(degree_partition_class(s, i).at(0)), 1}});
        c.equal(ev.eval_top(s, m), boundary_point_oracle(d, i), "d=" + std::to_string(d) + " i=" + std::to_string(i));
      }
    }
    c.equal(boundary_point_oracle(4, 1), "1620", "oracle(4,1)");
    c.equal(boundary_point_oracle(4, 2), "504", "oracle(4,2)");
    crit.push_back(std::move(c));
  }

  {
    Criterion c{10, "property suites"};
    std::mt19937 rng(2024);

    // Relabeling invariance, memo canonicalization off.
    {
      MemoStore sa, sb;
      Evaluator a(sa, {}, false), b(sb, {}, false);
      for (const SpaceId s : {SpaceId{2, 1, 3}, SpaceId{2, 2, 2}, SpaceId{2, 2, 3}, SpaceId{3, 1, 3}, SpaceId{2, 0, 5}}) {
        std::vector<DivSymbol> syms{DivSymbol::h()};
        for (int i = 1; i <= s.n; ++i) syms.push_back(DivSymbol::l(i));
        for (const auto& k : enumerate_boundary(s)) syms.push_back(DivSymbol::boundary(k));
        for (int it = 0; it < 10; ++it) {
          std::vector<Monomial::Factor> f;
          for (int x = 0; x < s.dim(); ++x) f.emplace_back(syms[rng() % syms.size()], 1);
          Monomial m(std::move(f));
          std::vector<int> perm(static_cast<std::size_t>(s.n + 1));
          std::iota(perm.begin(), perm.end(), 0);
          std::shuffle(perm.begin() + 1, perm.end(), rng);
          Monomial pm = relabel(s, m, perm);
          c.equal(b.eval_top(s, pm), a.eval_top(s, m), "relabel " + s.str() + " " + m.str(s));
        }
      }
    }

    // Forgetful/divisor identity on 20 random pure monomials, d <= 3.
    for (int it = 0; it < 20; ++it) {
      const int r = 2 + static_cast<int>(rng() % 2), d = 1 + static_cast<int>(rng() % 3), n = static_cast<int>(rng() % 3);
      SpaceId s{r, d, n};
      std::vector<int> l(static_cast<std::size_t>(n), 0);
      int h = 0;
      for (int left = s.dim(); left > 0; --left) {
        std::vector<int> open;
        for (int i = 0; i < n; ++i)
          if (l[static_cast<std::size_t>(i)] < r) open.push_back(i);
        const auto slot = rng() % (open.size() + 1);
        if (slot == open.size())
          ++h;
        else
          ++l[static_cast<std::size_t>(open[slot])];
      }
      std::vector<Monomial::Factor> f{{DivSymbol::h(), h}};
      for (int i = 1; i <= n; ++i) f.emplace_back(DivSymbol::l(i), l[static_cast<std::size_t>(i - 1)]);
      Monomial m(std::move(f));
      SpaceId t = forgetful_target(s);
      Rational lifted = ev.eval_top(t, forgetful_pullback(s, m) * DivClass(DivSymbol::l(t.n)));
      c.equal(lifted, Rational(d) * ev.eval_top(s, m), "forgetful " + s.str() + " " + m.str(s));
    }

    // Boundary identities for every component of every space with n <= 3, d <= 4.
    for (int r : {2, 3})
      for (int d = 0; d <= 4; ++d)
        for (int n = 0; n <= 3; ++n) {
          SpaceId s{r, d, n};
          if ((d == 0 && n < 3) || s == SpaceId{2, 2, 0}) continue;
          for (const auto& k : enumerate_boundary(s)) {
            auto sp = BoundarySplit::make(s, k);
            BiClass total{sp.left, sp.right, {}};
            for (const auto& t : enumerate_boundary(s)) total = add(total, attached_boundary(s, k, t));
            auto da = enumerate_boundary(sp.left);
            auto db = enumerate_boundary(sp.right);
            c.expect(total == BiClass::from_sides(sp.left, sp.right, boundary_sum(da), boundary_sum(db)),
                     "total boundary " + s.str() + " " + k.str(s));
            c.expect(psi_pullback(s, k, DivSymbol::boundary(k)) == psi_self_simplified(s, k),
                     "two routes " + s.str() + " " + k.str(s));
          }
        }

    // WDVV residual on random computable instances.
    int wdvv = 0;
    for (int attempt = 0; attempt < 5000 && wdvv < 40; ++attempt) {
      const int r = 2 + static_cast<int>(rng() % 2), d = 1 + static_cast<int>(rng() % 3);
      const int m = 4 + static_cast<int>(rng() % 4);
      std::vector<int> list(static_cast<std::size_t>(m));
      int sum = 0;
      for (auto& a : list) sum += (a = 1 + static_cast<int>(rng() % static_cast<unsigned>(r)));
      if (sum != r * d + r + d + m - 3) continue;
      auto sides = ev.gw().wdvv_sides(r, d, list);
      std::ostringstream label;
      label << "WDVV r=" << r << " d=" << d;
      for (int a : list) label << ' ' << a;
      c.equal(sides.split_12_34, sides.split_13_24, label.str());
      ++wdvv;
    }
    c.expect(wdvv >= 20, "too few WDVV instances");

    // Integrality of every characteristic number from criteria 2-7.
    c.expect(enumerative.size() == 6 + 1 + 9 + 9 + 13 + 12, "unexpected number of characteristic numbers");
    for (const auto& v : enumerative) c.expect(v.is_integer() && v.sign() >= 0, "non-integral count " + v.str());
    crit.push_back(std::move(c));
  }

  bool all = true;
  for (const auto& c : crit) {
    const bool ok = c.failures.empty();
    all = all && ok;
    std::cout << (ok ? "PASS" : "FAIL") << "  criterion " << c.id << ": " << c.what << " (" << c.checks << " checks)\n";
    for (const auto& f : c.failures) std::cout << "      " << f << "\n";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << (all ? "ALL PASS" : "SOME CRITERIA FAILED") << " in " << secs << " s\n";
  return all ? 0 : 1;
}
