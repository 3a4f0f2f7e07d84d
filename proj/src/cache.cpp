#include "qplab/cache.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>

namespace qplab {

ResultCache::ResultCache(std::optional<std::filesystem::path> dir, std::string version)
    : dir_(std::move(dir)), version_(std::move(version)) {
  if (!dir_) return;
  std::error_code ec;
  std::filesystem::create_directories(*dir_, ec);
  if (ec || !std::filesystem::is_directory(*dir_)) {
    std::cerr << "qplab: warning: cache directory " << dir_->string() << " unusable, caching disabled\n";
    dir_.reset();
  }
}

std::filesystem::path ResultCache::path_for(std::uint64_t group_hash, const std::string& computation) const {
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(group_hash));
  return *dir_ / (std::string(hex) + "-" + computation + "-v" + version_ + ".json");
}

nlohmann::json ResultCache::get_or_compute(std::uint64_t group_hash, const std::string& computation,
                                           const std::function<nlohmann::json()>& producer) {
  if (!dir_) {
    ++misses_;
    return producer();
  }
  const auto path = path_for(group_hash, computation);
  if (std::ifstream in(path); in) {
    try {
      auto value = nlohmann::json::parse(in);
      ++hits_;
      return value;
    } catch (const nlohmann::json::exception&) {
      std::cerr << "qplab: warning: corrupt cache entry " << path.string() << ", recomputing\n";
    }
  }
  ++misses_;
  auto value = producer();
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) return value;
    out << value.dump();
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) std::filesystem::remove(tmp, ec);
  return value;
}

std::optional<std::filesystem::path> resolve_cache_dir(const std::optional<std::string>& flag) {
  if (const char* env = std::getenv("QPLAB_CACHE"); env && *env) return std::filesystem::path(env);
  if (flag && !flag->empty()) return std::filesystem::path(*flag);
  return std::nullopt;
}

}  // namespace qplab
