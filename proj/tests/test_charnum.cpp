#include <doctest.h>

#include "mbar/charnum.hpp"
#include "mbar/errors.hpp"

using namespace mbar;

namespace {

CharNumQuery query(int r, int d, std::map<int, int> alpha, int beta) { return CharNumQuery{r, d, std::move(alpha), beta}; }

}  // namespace

TEST_CASE("characteristic number examples") {
  MemoStore store;
  Evaluator ev(store);
  CHECK(characteristic_number(ev, query(2, 3, {{2, 8}}, 0)) == 12);
  CHECK(characteristic_number(ev, query(2, 3, {}, 8)) == 400);
  CHECK(characteristic_number(ev, query(2, 2, {{2, 3}}, 2)) == 4);
  CHECK(characteristic_number(ev, query(3, 3, {{2, 5}}, 7)) == 343360);
  CHECK(characteristic_number(ev, query(2, 4, {{2, 6}}, 5)) == 143040);
}

TEST_CASE("query validation") {
  CHECK_THROWS_AS(query(2, 3, {{2, 7}}, 0).validate(), DomainError);
  CHECK_THROWS_AS(query(2, 1, {{2, 1}}, 1).validate(), DomainError);
  CHECK_THROWS_AS(query(2, 3, {{3, 4}}, 0).validate(), DomainError);
  CHECK_THROWS_AS(query(2, 0, {}, 0).validate(), DomainError);
  CHECK_NOTHROW(query(2, 1, {{2, 2}}, 0).validate());
  CHECK(query(3, 3, {{3, 2}, {2, 6}}, 2).str() == "r=3,d=3,alpha2=6,alpha3=2,beta=2");
}

TEST_CASE("product built for a query") {
  auto [s, p] = charnum_product(query(3, 3, {{3, 2}, {2, 6}}, 2));
  CHECK(s == SpaceId{3, 3, 2});
  auto [s8, p8] = charnum_product(query(3, 3, {{3, 2}, {2, 6}}, 2), true);
  CHECK(s8 == SpaceId{3, 3, 8});
  for (const auto& [m, c] : p8.terms()) {
    CHECK(m.exponent(DivSymbol::l(1)) == 3);
    CHECK(m.exponent(DivSymbol::l(2)) == 3);
    for (int i = 3; i <= 8; ++i) CHECK(m.exponent(DivSymbol::l(i)) == 2);
    // What is left comes from T^2.
    CHECK(m.degree() - 6 - 12 == 2);
  }
}

TEST_CASE("the two formulations agree") {
  MemoStore store;
  Evaluator ev(store);
  auto both = [&](const CharNumQuery& q) {
    Rational a = characteristic_number(ev, q, false);
    Rational b = characteristic_number(ev, q, true);
    CHECK_MESSAGE(a == b, q.str());
    return a;
  };
  CHECK(both(query(3, 3, {{3, 2}, {2, 6}}, 2)) == 3920);
  both(query(2, 2, {{2, 3}}, 2));
  both(query(2, 3, {{2, 4}}, 4));
  both(query(3, 2, {{3, 1}, {2, 4}}, 2));
  both(query(3, 2, {{2, 6}}, 2));
  CHECK(both(query(2, 4, {{2, 1}}, 10)) == 728160);
}

TEST_CASE("boundary point oracle") {
  CHECK(boundary_point_oracle(4, 1) == 1620);
  CHECK(boundary_point_oracle(4, 2) == 504);
  CHECK(boundary_point_oracle(3, 1) == 42);
  CHECK_THROWS_AS(boundary_point_oracle(4, 3), DomainError);
  CHECK_THROWS_AS(boundary_point_oracle(1, 1), DomainError);

  MemoStore store;
  Evaluator ev(store);
  for (int d = 2; d <= 5; ++d) {
    SpaceId s{2, d, 0};
    for (int i = 1; i <= d / 2; ++i) {
      Monomial m({{DivSymbol::h(), 3 * d - 2}, {DivSymbol::boundary(degree_partition_class(s, i).at(0)), 1}});
      CHECK_MESSAGE(ev.eval_top(s, m) == boundary_point_oracle(d, i), "d=" << d << " i=" << i);
    }
  }
}

TEST_CASE("cuspidal counts") {
  MemoStore store;
  Evaluator ev(store);
  CHECK(cuspidal_closed_form(3) == 24);
  CHECK(cuspidal_count(ev, 3) == 24);
  CHECK(cuspidal_count(ev, 4) == 2304);
  CHECK(cuspidal_count(ev, 5) == 435168);
  CHECK(cuspidal_count(ev, 6) == 156153600);
  CHECK_THROWS_AS(cuspidal_count(ev, 2), DomainError);
}

TEST_CASE("table rows") {
  MemoStore store;
  Evaluator ev(store);
  auto values = [&](const std::string& id) {
    std::vector<std::string> out;
    for (const auto& row : reproduce_table(ev, id).rows) out.push_back(row.value.str());
    return out;
  };
  CHECK(values("conics-p2") == std::vector<std::string>{"1", "2", "4", "4", "2", "1"});
  CHECK(values("conics-p3") == std::vector<std::string>{"92", "116", "128", "104", "64", "32", "16", "8", "4"});
  CHECK(values("cubics-p3") == std::vector<std::string>{"80160", "134400", "209760", "297280", "375296", "415360",
                                                        "401920", "343360", "264320", "188256", "128160", "85440",
                                                        "56960"});
  CHECK(values("conic-tangency") == std::vector<std::string>{"3264"});
  CHECK_THROWS_AS(reproduce_table(ev, "sextics"), DomainError);
  CHECK(table_ids().size() == 12);
}

TEST_CASE("characteristic numbers are nonnegative integers") {
  MemoStore store;
  Evaluator ev(store);
  for (const char* id : {"conics-p2", "conics-p3", "cubics-p2", "cubics-p3", "quartics-p2", "cuspidal", "conic-tangency"})
    for (const auto& row : reproduce_table(ev, id).rows) {
      CHECK_MESSAGE(row.value.is_integer(), id << " " << row.label);
      CHECK_MESSAGE(row.value.sign() >= 0, id << " " << row.label);
    }
}

TEST_CASE("product table labels parse back") {
  MemoStore store;
  Evaluator ev(store);
  for (const auto& id : table_ids()) {
    Table t = reproduce_table(ev, id);
    if (!t.labels_are_monomials) continue;
    for (const auto& row : t.rows) {
      Monomial m = Monomial::parse(t.space, row.label);
      CHECK(m.str(t.space) == row.label);
      CHECK(ev.eval_top(t.space, m) == row.value);
    }
  }
}

TEST_CASE("parallel tables match serial") {
  MemoStore a, b;
  Evaluator serial(a), parallel(b);
  for (const char* id : {"products-quartics-p2", "cubics-p3", "cuspidal"}) {
    Table x = reproduce_table(serial, id, 1);
    Table y = reproduce_table(parallel, id, 4);
    REQUIRE(x.rows.size() == y.rows.size());
    for (std::size_t i = 0; i < x.rows.size(); ++i) {
      CHECK(x.rows[i].label == y.rows[i].label);
      CHECK(x.rows[i].value == y.rows[i].value);
    }
  }
}
