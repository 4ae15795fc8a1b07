#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mbar/divalg.hpp"
#include "mbar/eval.hpp"
#include "mbar/exactnum.hpp"

namespace mbar {

/// Degree-d rational curves in P^r meeting alpha[i] general codimension-i
/// linear spaces and tangent to beta general hyperplanes.
struct CharNumQuery {
  int r = 2;
  int d = 1;
  std::map<int, int> alpha;  // codimension -> count
  int beta = 0;

  /// Throws DomainError when the conditions do not cut a finite set.
  void validate() const;
  std::string str() const;
};

/// The top product whose value is the characteristic number. Codimension-2
/// conditions become H factors unless `all_markings`, in which case every
/// condition is a marking carrying L^codim.
std::pair<SpaceId, Polynomial> charnum_product(const CharNumQuery& q, bool all_markings = false);

Rational characteristic_number(Evaluator& ev, const CharNumQuery& q, bool all_markings = false);

/// K^i . H^{3d-2} on M_{0,0}(2,d) from N_i, N_{d-i}.
Rational boundary_point_oracle(int d, int i);

/// One-cuspidal rational plane curves of degree d through 3d-2 points,
/// from the N_d closed form.
Rational cuspidal_closed_form(int d);

/// Closed form, checked against Z . H^{3d-2}. Throws DomainError if the two disagree.
Rational cuspidal_count(Evaluator& ev, int d);

struct TableRow {
  std::string label;
  Rational value;
};

struct Table {
  std::string id;
  std::string title;
  SpaceId space;
  /// Row labels are monomials in the factor grammar of `space`.
  bool labels_are_monomials = false;
  std::vector<TableRow> rows;
};

std::vector<std::string> table_ids();
std::string reproduce_table_title(const std::string& id);

/// Computes every row of a named table. `jobs` > 1 evaluates rows in parallel.
Table reproduce_table(Evaluator& ev, const std::string& id, int jobs = 1);

}  // namespace mbar
