#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>

#include "hbgw/partitions.hpp"
#include "hbgw/rational.hpp"

namespace hbgw {

// Persistent store for exact correlator values. One record per line,
// fields separated by a single semicolon:
//   kind;genus;space-separated indices;numerator[/denominator]
// preceded by a header line carrying a format-version integer. A file
// that fails the version check or any per-line parse is rejected as a
// whole; loading never leaves partial state behind.
class CorrelatorCache {
 public:
  enum class Kind { Wk, Hodge, GbgwC };

  static constexpr int kFormatVersion = 1;

  std::size_t size() const { return entries_.size(); }

  /// Returns false when the key was already present (value left untouched).
  bool insert(Kind kind, int g, const Partition& idx, const Rational& value);

  std::optional<Rational> lookup(Kind kind, int g, const Partition& idx) const;

  /// Adds every entry of `other` not already present.
  void merge(const CorrelatorCache& other);

  const std::map<std::tuple<int, int, Partition>, Rational>& entries() const {
    return entries_;
  }

 private:
  std::map<std::tuple<int, int, Partition>, Rational> entries_;
};

/// Parses a cache file. Throws std::runtime_error on a missing file, a
/// version mismatch or a malformed record.
CorrelatorCache cache_load(const std::string& path);

/// Writes the cache through a temporary file renamed into place, so a
/// failed store leaves any existing file untouched. Throws
/// std::runtime_error on I/O errors.
void cache_store(const std::string& path, const CorrelatorCache& cache);

std::string cache_kind_name(CorrelatorCache::Kind kind);

}  // namespace hbgw
