#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mbar/exactnum.hpp"

namespace mbar {

/// Memoized intersection numbers and GW invariants, keyed by canonical text.
///
/// Lookups and inserts are individually atomic. Two threads racing on the
/// same key compute the same value, so last-write-wins is harmless.
class MemoStore {
 public:
  static constexpr std::string_view kHeader = "MBAR-CACHE v1";

  MemoStore() = default;
  MemoStore(const MemoStore&) = delete;
  MemoStore& operator=(const MemoStore&) = delete;

  std::optional<Rational> find_gw(const std::string& key) const;
  void put_gw(const std::string& key, const Rational& value);
  std::optional<Rational> find_eval(const std::string& key) const;
  void put_eval(const std::string& key, const Rational& value);

  std::size_t gw_size() const;
  std::size_t eval_size() const;
  void clear();

  /// Sorted cache-file body lines, without the header.
  std::vector<std::string> lines() const;

 private:
  mutable std::shared_mutex mu_;
  std::unordered_map<std::string, Rational> gw_;
  std::unordered_map<std::string, Rational> eval_;
};

/// Writes the versioned text format (header line, then one sorted entry per line).
void cache_save(const MemoStore& store, const std::filesystem::path& path);

/// Merges a cache file into `store`. Throws CacheError on a missing header,
/// a version mismatch or a malformed entry; the store is untouched in that case.
void cache_load(MemoStore& store, const std::filesystem::path& path);

}  // namespace mbar
