#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>

#include "json.hpp"

namespace qplab {

/// Content-addressed store for derived mathematical results, keyed by group
/// hash, computation id and library version. Without a directory it passes
/// straight through to the producer.
class ResultCache {
 public:
  explicit ResultCache(std::optional<std::filesystem::path> dir, std::string version = QPLAB_VERSION);

  nlohmann::json get_or_compute(std::uint64_t group_hash, const std::string& computation,
                                const std::function<nlohmann::json()>& producer);

  std::filesystem::path path_for(std::uint64_t group_hash, const std::string& computation) const;
  bool enabled() const { return dir_.has_value(); }
  std::size_t hits() const { return hits_; }
  std::size_t misses() const { return misses_; }

 private:
  std::optional<std::filesystem::path> dir_;
  std::string version_;
  std::size_t hits_ = 0;
  std::size_t misses_ = 0;
};

/// QPLAB_CACHE, when set, takes precedence over the command-line directory.
std::optional<std::filesystem::path> resolve_cache_dir(const std::optional<std::string>& flag);

}  // namespace qplab
