#include "mbar/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <json.hpp>
#include <ostream>

#include "mbar/charnum.hpp"
#include "mbar/errors.hpp"
#include "mbar/eval.hpp"
#include "mbar/gw.hpp"
#include "mbar/memo.hpp"

namespace mbar::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

struct Globals {
  std::string format = "text";
  std::string cache;
  bool check_integer = false;
  int jobs = 1;
};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void check_integral(const Globals& g, const std::string& what, const Rational& v) {
  if (g.check_integer && !v.is_integer())
    throw DomainError("--check-integer: " + what + " = " + v.str() + " is not an integer");
}

/// A labelled list of values, printed in the selected format.
struct Result {
  std::string id;
  std::string title;
  std::vector<std::pair<std::string, std::string>> rows;
  bool single = false;  // one bare value

  void print(const Globals& g, std::ostream& out) const {
    if (g.format == "json") {
      if (single) {
        ordered_json j;
        j[rows.front().first] = rows.front().second;
        out << j.dump(2) << "\n";
        return;
      }
      ordered_json j;
      if (!id.empty()) j["id"] = id;
      if (!title.empty()) j["title"] = title;
      ordered_json r = ordered_json::object();
      for (const auto& [k, v] : rows) r[k] = v;
      j["rows"] = std::move(r);
      out << j.dump(2) << "\n";
    } else if (g.format == "csv") {
      out << "label,value\n";
      for (const auto& [k, v] : rows) out << csv_field(k) << "," << csv_field(v) << "\n";
    } else if (single) {
      out << rows.front().second << "\n";
    } else {
      std::size_t w = 0;
      for (const auto& row : rows) w = std::max(w, row.first.size());
      for (const auto& [k, v] : rows) out << k << std::string(w - k.size() + 2, ' ') << v << "\n";
    }
  }
};

Result single(const std::string& label, const std::string& value) {
  Result r;
  r.rows.emplace_back(label, value);
  r.single = true;
  return r;
}

}  // namespace

int parse_and_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact top intersection products on M_{0,n}(P^r, d)", "mbar"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"text", "csv", "json"}))
      ->capture_default_str();
  app.add_option("--cache", g.cache, "Cache file (default: $MBAR_CACHE)");
  app.add_flag("--check-integer", g.check_integer, "Fail unless every printed value is an integer");
  app.add_option("--jobs", g.jobs, "Worker threads for table rows")->check(CLI::PositiveNumber)->capture_default_str();

  std::function<Result(Evaluator&)> action;

  // eval
  std::string space_text, mono_text;
  auto* eval_cmd = app.add_subcommand("eval", "Top intersection product of a monomial");
  eval_cmd->add_option("--space", space_text, "e.g. r=2,d=3,n=0")->required();
  eval_cmd->add_option("--monomial", mono_text, "e.g. \"H^3 K{dA=1}^5\"")->required();
  eval_cmd->callback([&] {
    action = [&](Evaluator& ev) {
      SpaceId s = SpaceId::parse(space_text);
      Monomial m = Monomial::parse(s, mono_text);
      Rational v = ev.eval_top(s, m);
      check_integral(g, m.str(s), v);
      return single(m.str(s), v.str());
    };
  });

  // gw
  int gw_r = 0, gw_d = 0;
  std::vector<int> gw_ins;
  auto* gw_cmd = app.add_subcommand("gw", "Genus-0 GW invariant I_d(h^a1, ..., h^an) of P^r");
  gw_cmd->add_option("r", gw_r, "Target dimension")->required();
  gw_cmd->add_option("d", gw_d, "Degree")->required();
  gw_cmd->add_option("insertions", gw_ins, "Codimensions a_i");
  gw_cmd->callback([&] {
    action = [&](Evaluator& ev) {
      GWKey key = GWKey::make(gw_r, gw_d, gw_ins);
      Rational v = ev.gw().invariant(key);
      check_integral(g, key.str(), v);
      return single(key.str(), v.str());
    };
  });

  // nd
  int nd_d = 0;
  auto* nd_cmd = app.add_subcommand("nd", "Rational plane curves of degree d through 3d-1 points");
  nd_cmd->add_option("d", nd_d, "Degree")->required();
  nd_cmd->callback([&] {
    action = [&](Evaluator&) { return single("N_" + std::to_string(nd_d), nd(nd_d).str()); };
  });

  // charnum
  CharNumQuery q;
  std::vector<std::string> alpha_items;
  bool all_markings = false;
  auto* cn_cmd = app.add_subcommand("charnum", "Characteristic number with incidence and tangency conditions");
  cn_cmd->add_option("-r", q.r, "Target dimension")->required();
  cn_cmd->add_option("-d", q.d, "Degree")->required();
  cn_cmd->add_option("--alpha", alpha_items, "codim=count, repeatable (e.g. --alpha 2=8)");
  cn_cmd->add_option("--beta", q.beta, "Number of tangent hyperplanes");
  cn_cmd->add_flag("--all-markings", all_markings, "Represent codim-2 conditions by markings too");
  cn_cmd->callback([&] {
    action = [&](Evaluator& ev) {
      for (const auto& item : alpha_items) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw ParseError("--alpha expects codim=count, got '" + item + "'");
        try {
          q.alpha[std::stoi(item.substr(0, eq))] += std::stoi(item.substr(eq + 1));
        } catch (const std::logic_error&) {
          throw ParseError("--alpha expects codim=count, got '" + item + "'");
        }
      }
      Rational v = characteristic_number(ev, q, all_markings);
      check_integral(g, q.str(), v);
      return single(q.str(), v.str());
    };
  });

  // cuspidal
  int cusp_d = 0;
  auto* cusp_cmd = app.add_subcommand("cuspidal", "One-cuspidal rational plane curves through 3d-2 points");
  cusp_cmd->add_option("d", cusp_d, "Degree")->required();
  cusp_cmd->callback([&] {
    action = [&](Evaluator& ev) {
      Rational v = cuspidal_count(ev, cusp_d);
      check_integral(g, "C_" + std::to_string(cusp_d), v);
      return single("C_" + std::to_string(cusp_d), v.str());
    };
  });

  // table
  std::string table_id;
  bool list_tables = false;
  auto* table_cmd = app.add_subcommand("table", "Reproduce a table of products or characteristic numbers");
  table_cmd->add_option("id", table_id, "Table id");
  table_cmd->add_flag("--list", list_tables, "List table ids");
  table_cmd->callback([&] {
    action = [&](Evaluator& ev) {
      Result r;
      if (list_tables) {
        r.id = "tables";
        for (const auto& id : table_ids()) r.rows.emplace_back(id, reproduce_table_title(id));
        return r;
      }
      if (table_id.empty()) throw ParseError("table needs an id (see table --list)");
      Table t = reproduce_table(ev, table_id, g.jobs);
      r.id = t.id;
      r.title = t.labels_are_monomials ? t.title + " (" + t.space.str() + ")" : t.title;
      for (const auto& row : t.rows) {
        check_integral(g, row.label, row.value);
        r.rows.emplace_back(row.label, row.value.str());
      }
      return r;
    };
  });

  // picard
  std::string pic_space;
  auto* pic_cmd = app.add_subcommand("picard", "Rank of Pic(M) tensor Q");
  pic_cmd->add_option("--space", pic_space)->required();
  pic_cmd->callback([&] {
    action = [&](Evaluator&) {
      SpaceId s = SpaceId::parse(pic_space);
      return single(s.str(), std::to_string(picard_rank(s)));
    };
  });

  // boundary
  std::string bd_space;
  auto* bd_cmd = app.add_subcommand("boundary", "Boundary components in canonical order");
  bd_cmd->add_option("--space", bd_space)->required();
  bd_cmd->callback([&] {
    action = [&](Evaluator&) {
      SpaceId s = SpaceId::parse(bd_space);
      s.validate();
      Result r;
      r.id = "boundary";
      r.title = s.str();
      for (const auto& b : enumerate_boundary(s)) r.rows.emplace_back(b.str(s), std::to_string(b.deg) + "+" + std::to_string(b.other_deg(s)));
      return r;
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kUsage;
  }

  if (g.cache.empty())
    if (const char* env = std::getenv("MBAR_CACHE")) g.cache = env;

  MemoStore store;
  try {
    if (!g.cache.empty() && std::filesystem::exists(g.cache)) cache_load(store, g.cache);
    Evaluator ev(store);
    Result r = action(ev);
    if (!g.cache.empty()) cache_save(store, g.cache);
    r.print(g, out);
    return kOk;
  } catch (const CacheError& e) {
    err << "cache error: " << e.what() << "\n";
    return kCache;
  } catch (const ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const CLI::Error& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kDomain;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDomain;
  }
}

}  // namespace mbar::cli
