#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "mbar/charnum.hpp"
#include "mbar/errors.hpp"
#include "mbar/eval.hpp"
#include "mbar/gw.hpp"
#include "mbar/memo.hpp"

namespace py = pybind11;
using namespace mbar;

namespace {

py::object to_fraction(const Rational& v) {
  static py::object fraction = py::module_::import("fractions").attr("Fraction");
  return fraction(v.str());
}

// Store and evaluator bundled so Python can hold one object.
struct Session {
  MemoStore store;
  Evaluator ev{store};

  Rational eval_top(const std::string& space, const std::string& monomial) {
    SpaceId s = SpaceId::parse(space);
    return ev.eval_top(s, Monomial::parse(s, monomial));
  }
};

Session& default_session() {
  static Session s;
  return s;
}

py::list table_rows(const Table& t) {
  py::list rows;
  for (const auto& row : t.rows) rows.append(py::make_tuple(row.label, to_fraction(row.value)));
  return rows;
}

CharNumQuery make_query(int r, int d, const std::map<int, int>& alpha, int beta) { return {r, d, alpha, beta}; }

}  // namespace

PYBIND11_MODULE(mbar, m) {
  m.doc() = "Exact top intersection products on M_{0,n}(P^r, d).";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<CacheError>(m, "CacheError", PyExc_OSError);

  py::class_<Session>(m, "Session", "Independent memo store and evaluator.")
      .def(py::init<>())
      .def("eval_top", [](Session& s, const std::string& space, const std::string& mono) {
        Rational v;
        {
          py::gil_scoped_release nogil;
          v = s.eval_top(space, mono);
        }
        return to_fraction(v);
      }, py::arg("space"), py::arg("monomial"))
      .def("characteristic_number", [](Session& s, int r, int d, std::map<int, int> alpha, int beta, bool all_markings) {
        Rational v;
        {
          py::gil_scoped_release nogil;
          v = characteristic_number(s.ev, make_query(r, d, alpha, beta), all_markings);
        }
        return to_fraction(v);
      }, py::arg("r"), py::arg("d"), py::arg("alpha") = std::map<int, int>{}, py::arg("beta") = 0,
         py::arg("all_markings") = false)
      .def("cuspidal_count", [](Session& s, int d) { return to_fraction(cuspidal_count(s.ev, d)); }, py::arg("d"))
      .def("gw_invariant", [](Session& s, int r, int d, std::vector<int> insertions) {
        return to_fraction(s.ev.gw().invariant(r, d, std::move(insertions)));
      }, py::arg("r"), py::arg("d"), py::arg("insertions"))
      .def("reproduce_table", [](Session& s, const std::string& id, int jobs) {
        Table t;
        {
          py::gil_scoped_release nogil;
          t = reproduce_table(s.ev, id, jobs);
        }
        return table_rows(t);
      }, py::arg("id"), py::arg("jobs") = 1)
      .def("load_cache", [](Session& s, const std::string& path) { cache_load(s.store, path); }, py::arg("path"))
      .def("save_cache", [](Session& s, const std::string& path) { cache_save(s.store, path); }, py::arg("path"))
      .def_property_readonly("cached_entries", [](Session& s) { return s.store.gw_size() + s.store.eval_size(); });

  // Module-level shortcuts share one process-wide session.
  m.def("nd", [](int d) { return to_fraction(nd(d)); }, py::arg("d"),
        "Rational plane curves of degree d through 3d-1 points.");
  m.def("gw_invariant", [](int r, int d, std::vector<int> insertions) {
    return to_fraction(default_session().ev.gw().invariant(r, d, std::move(insertions)));
  }, py::arg("r"), py::arg("d"), py::arg("insertions"));
  m.def("eval_top", [](const std::string& space, const std::string& mono) {
    return to_fraction(default_session().eval_top(space, mono));
  }, py::arg("space"), py::arg("monomial"));
  m.def("characteristic_number", [](int r, int d, std::map<int, int> alpha, int beta, bool all_markings) {
    return to_fraction(characteristic_number(default_session().ev, make_query(r, d, alpha, beta), all_markings));
  }, py::arg("r"), py::arg("d"), py::arg("alpha") = std::map<int, int>{}, py::arg("beta") = 0,
     py::arg("all_markings") = false);
  m.def("cuspidal_count", [](int d) { return to_fraction(cuspidal_count(default_session().ev, d)); }, py::arg("d"));
  m.def("boundary_point_oracle", [](int d, int i) { return to_fraction(boundary_point_oracle(d, i)); },
        py::arg("d"), py::arg("i"));
  m.def("picard_rank", [](const std::string& space) { return picard_rank(SpaceId::parse(space)); }, py::arg("space"));
  m.def("enumerate_boundary", [](const std::string& space) {
    SpaceId s = SpaceId::parse(space);
    std::vector<std::string> out;
    for (const auto& k : enumerate_boundary(s)) out.push_back(k.str(s));
    return out;
  }, py::arg("space"));
  m.def("space_dim", [](const std::string& space) {
    SpaceId s = SpaceId::parse(space);
    s.validate();
    return s.dim();
  }, py::arg("space"));
  m.def("table_ids", &table_ids);
  m.def("table_title", &reproduce_table_title, py::arg("id"));
  m.def("reproduce_table", [](const std::string& id, int jobs) {
    return table_rows(reproduce_table(default_session().ev, id, jobs));
  }, py::arg("id"), py::arg("jobs") = 1);
}
