#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "doctest.h"
#include "qplab/cache.hpp"
#include "qplab/error.hpp"
#include "qplab/io.hpp"
#include "qplab/report.hpp"

using namespace qplab;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("qplab_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

void write_file(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(QPLAB_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

RunOutcome run(json request) { return run_request(request); }

}  // namespace

TEST_CASE("report documents serialise with sorted keys") {
  ReportDocument doc;
  doc.command = "delta";
  doc.seed = 1;
  doc.outputs["zeta"] = 1;
  doc.outputs["alpha"] = 2;
  doc.check("a", 1.0, "<=", 2.0);
  doc.check("b", 3.0, "=", 3.0 + 1e-12);
  doc.check("c", 5.0, ">=", 6.0);
  CHECK(doc.checks[0].holds);
  CHECK(doc.checks[1].holds);
  CHECK_FALSE(doc.checks[2].holds);
  CHECK_FALSE(doc.all_hold());
  const auto text = doc.to_json().dump();
  CHECK(text.find("\"alpha\"") < text.find("\"zeta\""));
  const auto j = doc.to_json();
  for (const char* key : {"tool", "version", "group", "command", "inputs", "outputs", "checks", "seed", "timing_ms"})
    CHECK(j.contains(key));
  CHECK_THROWS_AS(doc.check("bad", 0, "<", 1), Error);
}

TEST_CASE("delta command and cache hits") {
  TempDir dir;
  ::unsetenv("QPLAB_CACHE");
  json req = {{"command", "delta"}, {"group", "psl2:7"}, {"cache_dir", dir / "cache"}};
  const auto a = run(req);
  const auto b = run(req);
  CHECK(a.status == RunStatus::ok);
  CHECK(a.report["outputs"]["delta"] == 3);
  CHECK(a.text == b.text);
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(dir.path / "cache")) {
    ++files;
    CHECK(e.path().filename().string().find("-degrees-v" QPLAB_VERSION ".json") != std::string::npos);
  }
  CHECK(files == 1);
}

TEST_CASE("result cache semantics") {
  TempDir dir;
  ResultCache cache(dir.path);
  int calls = 0;
  auto producer = [&] {
    ++calls;
    return json{{"value", 42}};
  };
  CHECK(cache.get_or_compute(7, "thing", producer)["value"] == 42);
  CHECK(cache.get_or_compute(7, "thing", producer)["value"] == 42);
  CHECK(calls == 1);
  CHECK(cache.hits() == 1);
  // Corrupt entry: recomputed and overwritten.
  write_file(cache.path_for(7, "thing").string(), "{not json");
  CHECK(cache.get_or_compute(7, "thing", producer)["value"] == 42);
  CHECK(calls == 2);
  CHECK(json::parse(read_file(cache.path_for(7, "thing").string()))["value"] == 42);
  // Version bump: different file, recomputed.
  ResultCache bumped(dir.path, "9.9.9");
  bumped.get_or_compute(7, "thing", producer);
  CHECK(calls == 3);
  // Pass-through without a directory.
  ResultCache none(std::nullopt);
  none.get_or_compute(7, "thing", producer);
  none.get_or_compute(7, "thing", producer);
  CHECK(calls == 5);
  CHECK_FALSE(none.enabled());
}

TEST_CASE("cache directory resolution prefers the environment") {
  ::setenv("QPLAB_CACHE", "/tmp/from-env", 1);
  CHECK(resolve_cache_dir(std::string("/tmp/from-flag")).value() == fs::path("/tmp/from-env"));
  ::unsetenv("QPLAB_CACHE");
  CHECK(resolve_cache_dir(std::string("/tmp/from-flag")).value() == fs::path("/tmp/from-flag"));
  CHECK_FALSE(resolve_cache_dir(std::nullopt).has_value());
}

TEST_CASE("equal tables share a cache entry") {
  TempDir dir;
  const auto g = build_named("symmetric:3");
  write_cayley_table(fs::path(dir / "s3.cay"), g);
  write_file(dir / "s3.gens", "3\n1 0 2\n1 2 0\n");
  const auto from_gens = load_group(dir / "s3.gens");
  // Generator order differs from the family enumeration, so only the
  // family and the .cay copy share a hash.
  CHECK(load_group(dir / "s3.cay").hash() == g.hash());
  CHECK(from_gens.order() == 6);
  json req = {{"command", "delta"}, {"group", dir / "s3.cay"}, {"cache_dir", dir / "cache"}};
  run(req);
  req["group"] = "symmetric:3";
  run(req);
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(dir.path / "cache")) files += e.is_regular_file();
  CHECK(files == 1);
}

TEST_CASE("alpha and poor commands") {
  const auto a = run({{"command", "alpha"}, {"group", "cyclic:5"}, {"options", {{"exact", true}}}});
  CHECK(a.report["outputs"]["alpha"] == 2);
  CHECK(a.report["checks"][0]["name"] == "witness product-free");
  CHECK(a.report["checks"][0]["holds"] == true);
  const auto p = run({{"command", "poor"}, {"group", "cyclic:6"}, {"options", {{"set", {1, 3, 5}}, {"p", "0"}}}});
  CHECK(p.status == RunStatus::ok);
  CHECK(p.report["outputs"]["pair_count"] == 0);
  const auto q = run({{"command", "poor"}, {"group", "cyclic:6"}, {"options", {{"set", {0, 1}}, {"p", "1/10"}}}});
  CHECK(q.status == RunStatus::check_failed);
}

TEST_CASE("spectral and triple commands") {
  const auto s = run({{"command", "spectral"}, {"group", "alternating:5"}, {"options", {{"samples", 4}}}});
  CHECK(s.status == RunStatus::ok);
  CHECK(s.report["outputs"]["samples"].size() == 4);
  const auto one = run({{"command", "spectral"}, {"group", "alternating:5"}, {"options", {{"set", {1, 2, 3}}}}});
  CHECK(one.report["outputs"]["set_size"] == 3);
  CHECK_FALSE(one.report["outputs"].contains("eigenvalues"));
  const auto dbg = run({{"command", "spectral"}, {"group", "cyclic:4"}, {"debug", true}, {"options", {{"set", {1}}}}});
  CHECK(dbg.report["outputs"]["gram_matrix"].size() == 16);
  const auto t = run({{"command", "triple"},
                      {"group", "cyclic:6"},
                      {"options", {{"a", {1, 3, 5}}, {"b", {1, 3, 5}}, {"c", {1, 3, 5}}}}});
  CHECK(t.status == RunStatus::ok);
  CHECK(t.report["outputs"]["solution_free"] == true);
  CHECK(t.report["checks"].size() == 3);
}

TEST_CASE("construction commands") {
  const auto c = run({{"command", "construct coset-union"}, {"group", "alternating:5"}});
  CHECK(c.status == RunStatus::ok);
  CHECK(c.report["outputs"]["index"] == 5);
  const auto t = run({{"command", "construct theorem25"}, {"group", "cyclic:12"}, {"options", {{"k", 4}}}});
  CHECK(t.status == RunStatus::ok);
  CHECK(t.report["outputs"]["candidates"] == 330);
  CHECK_THROWS_AS(run({{"command", "construct theorem25"}, {"group", "cyclic:12"}}), Error);
}

TEST_CASE("multi commands read system files") {
  TempDir dir;
  write_cayley_table(fs::path(dir / "g.cay"), build_named("cyclic:7"));
  write_file(dir / "a1.set", "# A1\n0\n1\n2\n3\n4\n5\n");
  write_file(dir / "sys.json", R"({"group": "g.cay", "m": 3, "constraints": [
      {"F": [1], "set": "a1.set"}, {"F": [2], "set": "FULL"}, {"F": [3], "set": [0, 1, 2, 3, 4]},
      {"F": [1, 2], "set": "FULL"}, {"F": [1, 3], "set": "FULL"}, {"F": [2, 3], "set": [0, 1, 2]}]})");
  const auto sys = read_density_system(dir / "sys.json");
  CHECK(sys.m() == 3);
  CHECK(sys.is_all_pairs());
  const auto h = run({{"command", "multi hypotheses"}, {"group", dir / "sys.json"}});
  CHECK(h.report["outputs"]["form"] == "m3");
  const auto w = run({{"command", "multi witness"}, {"group", dir / "sys.json"}});
  CHECK(w.report["outputs"]["found"] == true);
  CHECK(w.status == RunStatus::ok);
  const auto wg = run({{"command", "multi witness"}, {"group", dir / "sys.json"}, {"options", {{"gamma", true}}}});
  CHECK(wg.report["outputs"]["assignment"] == w.report["outputs"]["assignment"]);

  write_file(dir / "bad.json", R"({"group": "g.cay", "m": 3, "constraints": [{"F": [4], "set": "FULL"}]})");
  CHECK_THROWS_AS(read_density_system(dir / "bad.json"), Error);
}

TEST_CASE("fbound command and user tables") {
  TempDir dir;
  const auto ok = run({{"command", "multi fbound"}, {"options", {{"m", 6}}}});
  CHECK(ok.status == RunStatus::ok);
  CHECK(ok.report["outputs"]["f"]["2"] == 2.0);
  const auto cf = run({{"command", "multi fbound"}, {"options", {{"m", 6}, {"closed_form", true}}}});
  CHECK(cf.status == RunStatus::check_failed);
  write_file(dir / "f.json", R"({"f": {"2": 2.0, "3": 3.0}})");
  const auto user = run({{"command", "multi fbound"}, {"options", {{"m", 3}, {"f_table", dir / "f.json"}}}});
  CHECK(user.status == RunStatus::check_failed);
  CHECK(read_f_table(dir / "f.json").at(3) == 3.0);
}

TEST_CASE("group commands") {
  TempDir dir;
  const auto b = run({{"command", "group build"}, {"options", {{"family", "psl2"}, {"q", 7}, {"path", dir / "g.cay"}}}});
  CHECK(b.status == RunStatus::ok);
  CHECK(fs::exists(dir / "g.cay"));
  const auto i = run({{"command", "group info"}, {"group", dir / "g.cay"}});
  CHECK(i.report["outputs"]["class_count"] == 6);
  CHECK(i.report["outputs"]["min_index"] == 7);
  const auto v = run({{"command", "group validate"}, {"group", dir / "g.cay"}});
  CHECK(v.status == RunStatus::ok);
  write_file(dir / "loop.cay", "5\n0 1 2 3 4\n1 0 3 4 2\n2 4 0 1 3\n3 2 4 0 1\n4 3 1 2 0\n");
  const auto bad = run({{"command", "group validate"}, {"group", dir / "loop.cay"}});
  CHECK(bad.status == RunStatus::check_failed);
  CHECK(bad.report["outputs"]["ok"] == false);
}

TEST_CASE("csv projection") {
  std::vector<json> reports;
  for (const char* g : {"cyclic:5", "alternating:5"})
    reports.push_back(run({{"command", "spectral"}, {"group", g}, {"options", {{"set", {1, 2}}}}}).report);
  const auto csv = emit_table(reports);
  std::istringstream in(csv);
  std::string header, row1, row2, extra;
  std::getline(in, header);
  std::getline(in, row1);
  std::getline(in, row2);
  CHECK_FALSE(std::getline(in, extra));
  CHECK(header.rfind("command,group,n,", 0) == 0);
  CHECK(header.find("lambda2 <= n|A|/delta.lhs") != std::string::npos);
  CHECK(row1.find("spectral,C5,5,") == 0);
  CHECK(emit_table({}) == "command,group,n\n");
  reports.push_back(run({{"command", "delta"}, {"group", "cyclic:5"}}).report);
  CHECK_THROWS_AS(emit_table(reports), Error);
}

TEST_CASE("request errors") {
  CHECK_THROWS_AS(run({{"command", "bogus"}}), Error);
  CHECK_THROWS_AS(run({{"command", "delta"}}), Error);
  CHECK_THROWS_AS(run({{"command", "delta"}, {"group", "cyclic:5"}, {"format", "xml"}}), Error);
  CHECK_THROWS_AS(run({{"command", "delta"}, {"group", "/nonexistent/file.cay"}}), Error);
  CHECK_THROWS_AS(run({{"command", "poor"}, {"group", "cyclic:5"}, {"options", {{"set", {9}}}}}), Error);
}

TEST_CASE("command line exit codes") {
  TempDir dir;
  CHECK(run_cli("group build --family psl2 --q 7 --out " + (dir / "g.cay")) == 0);
  CHECK(run_cli("delta " + (dir / "g.cay") + " --out " + (dir / "d1.json")) == 0);
  CHECK(run_cli("--out " + (dir / "d2.json") + " delta " + (dir / "g.cay")) == 0);
  CHECK(read_file(dir / "d1.json") == read_file(dir / "d2.json"));
  CHECK(json::parse(read_file(dir / "d1.json"))["outputs"]["delta"] == 3);
  CHECK(run_cli("multi fbound --m 6 --closed-form") == 1);
  CHECK(run_cli("frobnicate") == 2);
  CHECK(run_cli("delta") == 2);
  CHECK(run_cli("delta /nonexistent.cay") == 2);
  CHECK(run_cli("delta cyclic:5 --format xml") == 2);
  write_file(dir / "bad.set", "1\nfoo\n");
  CHECK(run_cli("poor cyclic:5 --set " + (dir / "bad.set") + " --p 0") == 2);
  CHECK(run_cli("report " + (dir / "d1.json") + " " + (dir / "d2.json") + " --format csv --out " + (dir / "t.csv")) == 0);
  const auto csv = read_file(dir / "t.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}
