#include <fstream>

#include "json.hpp"
#include "qplab/error.hpp"
#include "qplab/io.hpp"

namespace qplab {

namespace {

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot read " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::parse, path.string() + ": " + e.what());
  }
}

std::filesystem::path relative_to(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : base.parent_path() / path;
}

}  // namespace

DensitySystem read_density_system(const std::filesystem::path& path, const GroupLimits& limits) {
  const auto doc = read_json(path);
  auto fail = [&](const std::string& msg) -> Error { return Error(ErrorCode::parse, path.string() + ": " + msg); };
  if (!doc.is_object() || !doc.contains("group") || !doc["group"].is_string()) throw fail("missing \"group\"");
  if (!doc.contains("m") || !doc["m"].is_number_integer()) throw fail("missing integer \"m\"");
  if (!doc.contains("constraints") || !doc["constraints"].is_array()) throw fail("missing \"constraints\" array");

  const std::string group_ref = doc["group"].get<std::string>();
  const auto group_path = relative_to(path, group_ref);
  auto group = std::make_shared<const FiniteGroup>(
      load_group(std::filesystem::exists(group_path) ? group_path.string() : group_ref, limits));
  DensitySystem sys(group, doc["m"].get<int>());
  std::size_t idx = 0;
  for (const auto& c : doc["constraints"]) {
    const std::string where = "constraint #" + std::to_string(idx++);
    if (!c.contains("F") || !c["F"].is_array() || c["F"].empty()) throw fail(where + ": \"F\" must be a nonempty array");
    IndexMask f = 0;
    for (const auto& i : c["F"]) {
      if (!i.is_number_integer() || i.get<int>() < 1 || i.get<int>() > sys.m())
        throw fail(where + ": index out of range 1..m");
      f |= IndexMask{1} << (i.get<int>() - 1);
    }
    if (!c.contains("set")) throw fail(where + ": missing \"set\"");
    const auto& s = c["set"];
    Subset set(group->order());
    if (s.is_string() && s.get<std::string>() == "FULL") {
      set = Subset::full(group->order());
    } else if (s.is_string()) {
      set = read_subset(relative_to(path, s.get<std::string>()), group->order());
    } else if (s.is_array()) {
      for (const auto& e : s) {
        if (!e.is_number_integer() || e.get<std::int64_t>() < 0 || e.get<std::uint64_t>() >= group->order())
          throw fail(where + ": set element out of range");
        set.set(e.get<Element>());
      }
    } else {
      throw fail(where + ": \"set\" must be a path, \"FULL\" or an array");
    }
    sys.add(f, std::move(set));
  }
  return sys;
}

FTable read_f_table(const std::filesystem::path& path) {
  const auto doc = read_json(path);
  if (!doc.is_object() || !doc.contains("f")) throw Error(ErrorCode::parse, path.string() + ": missing \"f\"");
  FTable t;
  t.origin = FOrigin::user;
  const auto& f = doc["f"];
  if (f.is_array()) {
    int m = 2;
    for (const auto& v : f) {
      if (!v.is_number()) throw Error(ErrorCode::parse, path.string() + ": f values must be numbers");
      t.f[m++] = v.get<double>();
    }
  } else if (f.is_object()) {
    for (const auto& [key, v] : f.items()) {
      if (!v.is_number()) throw Error(ErrorCode::parse, path.string() + ": f values must be numbers");
      try {
        t.f[std::stoi(key)] = v.get<double>();
      } catch (const std::exception&) {
        throw Error(ErrorCode::parse, path.string() + ": bad key '" + key + "'");
      }
    }
  } else {
    throw Error(ErrorCode::parse, path.string() + ": \"f\" must be an array or object");
  }
  if (!t.f.contains(2)) throw Error(ErrorCode::parse, path.string() + ": f-table must define f(2)");
  return t;
}

}  // namespace qplab
