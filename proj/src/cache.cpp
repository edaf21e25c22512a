#include "hbgw/cache.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace hbgw {

namespace {

constexpr const char* kHeaderTag = "hbgw-cache";

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(';', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

bool parse_int(const std::string& s, int& out) {
  if (s.empty()) return false;
  std::size_t i = s[0] == '-' ? 1 : 0;
  if (i == s.size()) return false;
  for (std::size_t k = i; k < s.size(); ++k)
    if (!std::isdigit(static_cast<unsigned char>(s[k]))) return false;
  try {
    out = std::stoi(s);
  } catch (const std::exception&) {
    return false;
  }
  return true;
}

bool parse_rational(const std::string& s, Rational& out) {
  if (s.empty()) return false;
  std::size_t slash = s.find('/');
  auto digits = [](const std::string& t, bool sign_ok) {
    if (t.empty()) return false;
    std::size_t i = sign_ok && t[0] == '-' ? 1 : 0;
    if (i == t.size()) return false;
    for (std::size_t k = i; k < t.size(); ++k)
      if (!std::isdigit(static_cast<unsigned char>(t[k]))) return false;
    return true;
  };
  if (slash == std::string::npos) {
    if (!digits(s, true)) return false;
  } else {
    if (!digits(s.substr(0, slash), true)) return false;
    if (!digits(s.substr(slash + 1), false)) return false;
  }
  if (out.set_str(s, 10) != 0) return false;
  if (out.get_den() == 0) return false;
  out.canonicalize();
  return true;
}

bool parse_partition(const std::string& s, Partition& out) {
  out.clear();
  if (s.empty()) return true;
  std::istringstream in(s);
  int v;
  while (in >> v) out.push_back(v);
  if (!in.eof()) return false;
  return true;
}

std::optional<CorrelatorCache::Kind> kind_from_name(const std::string& s) {
  if (s == "wk") return CorrelatorCache::Kind::Wk;
  if (s == "hodge") return CorrelatorCache::Kind::Hodge;
  if (s == "gbgw-c") return CorrelatorCache::Kind::GbgwC;
  return std::nullopt;
}

}  // namespace

std::string cache_kind_name(CorrelatorCache::Kind kind) {
  switch (kind) {
    case CorrelatorCache::Kind::Wk: return "wk";
    case CorrelatorCache::Kind::Hodge: return "hodge";
    case CorrelatorCache::Kind::GbgwC: return "gbgw-c";
  }
  throw std::logic_error("cache_kind_name: bad kind");
}

bool CorrelatorCache::insert(Kind kind, int g, const Partition& idx,
                             const Rational& value) {
  Partition key = idx;
  std::sort(key.begin(), key.end());
  return entries_
      .emplace(std::make_tuple(static_cast<int>(kind), g, std::move(key)), value)
      .second;
}

std::optional<Rational> CorrelatorCache::lookup(Kind kind, int g,
                                                const Partition& idx) const {
  Partition key = idx;
  std::sort(key.begin(), key.end());
  auto it = entries_.find(std::make_tuple(static_cast<int>(kind), g, key));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void CorrelatorCache::merge(const CorrelatorCache& other) {
  for (const auto& [key, value] : other.entries_) entries_.emplace(key, value);
}

CorrelatorCache cache_load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cache: cannot open " + path);
  auto bad = [&](long lineno, const std::string& why) {
    throw std::runtime_error("cache: " + path + ":" + std::to_string(lineno) +
                             ": " + why);
  };
  std::string line;
  if (!std::getline(in, line)) bad(1, "missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = split_fields(line);
  int version = 0;
  if (header.size() != 2 || header[0] != kHeaderTag ||
      !parse_int(header[1], version))
    bad(1, "malformed header");
  if (version != CorrelatorCache::kFormatVersion)
    bad(1, "format version " + std::to_string(version) + ", expected " +
               std::to_string(CorrelatorCache::kFormatVersion));
  CorrelatorCache cache;
  long lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto fields = split_fields(line);
    if (fields.size() != 4) bad(lineno, "expected 4 fields");
    auto kind = kind_from_name(fields[0]);
    if (!kind) bad(lineno, "unknown kind " + fields[0]);
    int g = 0;
    if (!parse_int(fields[1], g) || g < 0) bad(lineno, "bad genus");
    Partition idx;
    if (!parse_partition(fields[2], idx)) bad(lineno, "bad index list");
    Rational value;
    if (!parse_rational(fields[3], value)) bad(lineno, "bad value");
    if (!cache.insert(*kind, g, idx, value)) bad(lineno, "duplicate key");
  }
  return cache;
}

void cache_store(const std::string& path, const CorrelatorCache& cache) {
  std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp~";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cache: cannot write " + tmp.string());
    out << kHeaderTag << ';' << CorrelatorCache::kFormatVersion << '\n';
    for (const auto& [key, value] : cache.entries()) {
      const auto& [kind, g, idx] = key;
      out << cache_kind_name(static_cast<CorrelatorCache::Kind>(kind)) << ';'
          << g << ';';
      for (std::size_t i = 0; i < idx.size(); ++i) {
        if (i) out << ' ';
        out << idx[i];
      }
      out << ';' << value.get_str() << '\n';
    }
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw std::runtime_error("cache: write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw std::runtime_error("cache: rename failed for " + path);
  }
}

}  // namespace hbgw
