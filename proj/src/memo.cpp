#include "mbar/memo.hpp"

#include <algorithm>
#include <fstream>
#include <mutex>
#include <utility>

#include "mbar/errors.hpp"

namespace mbar {

std::optional<Rational> MemoStore::find_gw(const std::string& key) const {
  std::shared_lock lock(mu_);
  auto it = gw_.find(key);
  if (it == gw_.end()) return std::nullopt;
  return it->second;
}

void MemoStore::put_gw(const std::string& key, const Rational& value) {
  std::unique_lock lock(mu_);
  gw_.insert_or_assign(key, value);
}

std::optional<Rational> MemoStore::find_eval(const std::string& key) const {
  std::shared_lock lock(mu_);
  auto it = eval_.find(key);
  if (it == eval_.end()) return std::nullopt;
  return it->second;
}

void MemoStore::put_eval(const std::string& key, const Rational& value) {
  std::unique_lock lock(mu_);
  eval_.insert_or_assign(key, value);
}

std::size_t MemoStore::gw_size() const {
  std::shared_lock lock(mu_);
  return gw_.size();
}

std::size_t MemoStore::eval_size() const {
  std::shared_lock lock(mu_);
  return eval_.size();
}

void MemoStore::clear() {
  std::unique_lock lock(mu_);
  gw_.clear();
  eval_.clear();
}

std::vector<std::string> MemoStore::lines() const {
  std::vector<std::string> out;
  {
    std::shared_lock lock(mu_);
    out.reserve(gw_.size() + eval_.size());
    for (const auto& [k, v] : gw_) out.push_back("GW " + k + " = " + v.str());
    for (const auto& [k, v] : eval_) out.push_back("EV " + k + "\t" + v.str());
  }
  std::sort(out.begin(), out.end());
  return out;
}

void cache_save(const MemoStore& store, const std::filesystem::path& path) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::trunc);
    if (!os) throw CacheError("cannot write cache file " + tmp.string());
    os << MemoStore::kHeader << '\n';
    for (const auto& line : store.lines()) os << line << '\n';
    if (!os) throw CacheError("error writing cache file " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw CacheError("cannot move cache file into place: " + ec.message());
}

void cache_load(MemoStore& store, const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw CacheError("cannot read cache file " + path.string());
  std::string line;
  if (!std::getline(is, line)) throw CacheError("empty cache file " + path.string());
  if (line != MemoStore::kHeader)
    throw CacheError("cache version mismatch in " + path.string() + ": expected '" +
                     std::string(MemoStore::kHeader) + "', found '" + line + "'");

  std::vector<std::pair<std::string, Rational>> gw, ev;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto bad = [&] { return CacheError("malformed cache entry at " + path.string() + ":" + std::to_string(lineno)); };
    try {
      if (line.rfind("GW ", 0) == 0) {
        auto eq = line.rfind(" = ");
        if (eq == std::string::npos) throw bad();
        gw.emplace_back(line.substr(3, eq - 3), Rational::parse(line.substr(eq + 3)));
      } else if (line.rfind("EV ", 0) == 0) {
        auto tab = line.rfind('\t');
        if (tab == std::string::npos) throw bad();
        ev.emplace_back(line.substr(3, tab - 3), Rational::parse(line.substr(tab + 1)));
      } else {
        throw bad();
      }
    } catch (const std::invalid_argument&) {
      throw bad();
    }
  }
  for (auto& [k, v] : gw) store.put_gw(k, v);
  for (auto& [k, v] : ev) store.put_eval(k, v);
}

}  // namespace mbar
