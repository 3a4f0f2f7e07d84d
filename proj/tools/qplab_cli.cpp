#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <list>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qplab/qplab.h"

namespace {

using nlohmann::json;

enum class Kind { text, integer, real, flag };

struct Binding {
  std::string key;
  Kind kind;
  std::string value;
  bool flag = false;
  CLI::Option* opt = nullptr;
};

/// Collects subcommand options and turns the ones given into request JSON.
class Options {
 public:
  explicit Options(CLI::App* app) : app_(app) {}

  Options& text(const std::string& flag, const std::string& key, const std::string& help) { return add(flag, key, Kind::text, help); }
  Options& integer(const std::string& flag, const std::string& key, const std::string& help) { return add(flag, key, Kind::integer, help); }
  Options& real(const std::string& flag, const std::string& key, const std::string& help) { return add(flag, key, Kind::real, help); }
  Options& flag(const std::string& flag, const std::string& key, const std::string& help) {
    auto& b = bindings_.emplace_back(Binding{key, Kind::flag, {}});
    b.opt = app_->add_flag(flag, b.flag, help);
    return *this;
  }

  json collect() const {
    json j = json::object();
    for (const auto& b : bindings_) {
      if (b.opt->count() == 0) continue;
      switch (b.kind) {
        case Kind::text: j[b.key] = b.value; break;
        case Kind::integer: j[b.key] = std::stoll(b.value); break;
        case Kind::real: j[b.key] = std::stod(b.value); break;
        case Kind::flag: j[b.key] = b.flag; break;
      }
    }
    return j;
  }

 private:
  Options& add(const std::string& flag, const std::string& key, Kind kind, const std::string& help) {
    auto& b = bindings_.emplace_back(Binding{key, kind, {}});
    b.opt = app_->add_option(flag, b.value, help);
    if (kind == Kind::integer) b.opt->check(CLI::NonNegativeNumber);
    if (kind == Kind::real) b.opt->check(CLI::Number);
    return *this;
  }

  CLI::App* app_;
  std::list<Binding> bindings_;  // stable addresses
};

struct Command {
  std::string name;
  CLI::App* app;
  Options options;
  std::string positional;
  std::vector<std::string> inputs;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qplab: product-free sets, character degrees and density witnesses in finite groups"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(qplab_version()));

  std::uint64_t seed = 3405691582ULL;
  unsigned threads = 1;
  std::string format = "json";
  std::string out_path;
  std::string cache_dir;
  bool timing = false;
  bool debug = false;
  app.add_option("--seed", seed, "Random seed (default 3405691582)");
  app.add_option("--threads", threads, "Worker threads inside library calls")->check(CLI::PositiveNumber);
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", out_path, "Write the report to this file instead of stdout");
  app.add_option("--cache-dir", cache_dir, "Result cache directory (QPLAB_CACHE overrides)");
  app.add_flag("--timing", timing, "Record wall-clock timing_ms in the report");
  app.add_flag("--debug", debug, "Include matrices and eigenvalue lists in spectral output");

  std::list<Command> commands;
  auto command = [&](CLI::App* parent, const std::string& name, const std::string& full, const std::string& help,
                     const char* positional) -> Command& {
    auto* sub = parent->add_subcommand(name, help);
    auto& c = commands.emplace_back(Command{full, sub, Options(sub), {}, {}});
    if (positional) sub->add_option(positional, c.positional,
                                    std::string(positional) == "system" ? "System file (.sys.json)"
                                                                        : "Group file (.cay/.gens) or family descriptor")->required();
    return c;
  };

  auto* group = app.add_subcommand("group", "Build, describe or validate a group")->require_subcommand(1);
  group->fallthrough();
  auto& build = command(group, "build", "group build", "Build a family member and optionally save it", nullptr);
  build.options.text("--family", "family", "cyclic|dihedral|symmetric|alternating|sl2|psl2")
      .integer("--k", "k", "Family parameter k")
      .integer("--q", "q", "Field size q (odd prime <= 13)")
      .text("--spec", "spec", "Full descriptor, e.g. product(cyclic:2,psl2:5)")
      .text("--generators", "generators", "Generator file (.gens)")
      .text("--out", "path", "Write the Cayley table (.cay) here")
      .integer("--order-cap", "order_cap", "Largest accepted order");
  auto& info = command(group, "info", "group info", "Order, classes, element orders, minimal index", "group");
  info.options.integer("--enumeration-cap", "enumeration_cap", "Largest order for subgroup enumeration");
  command(group, "validate", "group validate", "Check a Cayley table for the group axioms", "group");

  auto& delta = command(&app, "delta", "delta", "Irreducible character degrees and delta", "group");
  delta.options.integer("--order-cap", "order_cap", "Largest accepted order");

  auto& spectral = command(&app, "spectral", "spectral", "Bipartite Cayley graph spectrum of a subset", "group");
  spectral.options.text("--set", "set", "Subset file (.set)")
      .integer("--samples", "samples", "Number of random subsets when --set is absent")
      .real("--density", "density", "Random subset density (default: uniform size)")
      .text("--method", "method", "jacobi|ql|auto")
      .integer("--spectral-cap", "spectral_cap", "Largest order for dense spectra");

  auto& triple = command(&app, "triple", "triple", "Solutions of ab = c and the density bounds", "group");
  triple.options.text("--a", "a", "Subset A").text("--b", "b", "Subset B").text("--c", "c", "Subset C");
  triple.app->get_option("--a")->required();
  triple.app->get_option("--b")->required();
  triple.app->get_option("--c")->required();

  auto& alpha = command(&app, "alpha", "alpha", "Largest product-free subset", "group");
  alpha.options.flag("--exact", "exact", "Force exhaustive search")
      .flag("--heuristic", "heuristic", "Greedy search with swaps")
      .integer("--node-cap", "node_cap", "Search node budget")
      .real("--time-cap", "time_cap", "Search time budget in seconds")
      .integer("--exact-cap", "exact_cap", "Largest order searched exactly by default")
      .integer("--restarts", "restarts", "Random restarts in heuristic mode");

  auto& poor = command(&app, "poor", "poor", "Product-poor certificate for a subset", "group");
  poor.options.text("--set", "set", "Subset file (.set)").text("--p", "p", "Claimed p as a fraction or decimal");
  poor.app->get_option("--set")->required();

  auto* construct = app.add_subcommand("construct", "Product-free constructions")->require_subcommand(1);
  construct->fallthrough();
  auto& coset = command(construct, "coset-union", "construct coset-union", "Union of cosets of a small-index subgroup", "group");
  coset.options.text("--subgroup", "subgroup", "Subgroup as a subset file (default: minimal index)")
      .integer("--exact-cap", "exact_cap", "Largest index searched exactly")
      .integer("--restarts", "restarts", "Greedy passes above the exact cap")
      .integer("--node-cap", "node_cap", "Search node budget");
  auto& t25 = command(construct, "theorem25", "construct theorem25", "Point-action sets S(T) with few solutions", "group");
  t25.options.integer("--k", "k", "|T|")
      .text("--action", "action", "regular|natural|coset")
      .text("--subgroup", "subgroup", "Stabiliser for the coset action")
      .flag("--sampled", "sampled", "Sample T instead of enumerating")
      .integer("--trials", "trials", "Number of sampled T")
      .integer("--exhaustive-cap", "exhaustive_cap", "Largest C(m-1,k) enumerated");
  t25.app->get_option("--k")->required();

  auto* multi = app.add_subcommand("multi", "Density-product witness systems")->require_subcommand(1);
  multi->fallthrough();
  auto& hyp = command(multi, "hypotheses", "multi hypotheses", "Check the density hypotheses of a system", "system");
  hyp.options.real("--M", "M", "Constant M for m = 3 (default 6)")
      .text("--f-table", "f_table", "Threshold table (.json)")
      .flag("--closed-form", "closed_form", "Use the closed-form threshold table")
      .flag("--gamma", "gamma", "Use the general form even for m = 3");
  auto& wit = command(multi, "witness", "multi witness", "Search for x_1..x_m with x_F in A_F", "system");
  wit.options.flag("--staged", "staged", "Follow the staged m = 3 argument")
      .real("--M", "M", "Constant M for the staged search")
      .real("--lambda", "lambda", "Override lambda")
      .real("--mu", "mu", "Override mu")
      .flag("--gamma", "gamma", "Use the general search even for m = 3")
      .integer("--space-cap", "space_cap", "Largest search space for m > 6");
  auto& fb = command(multi, "fbound", "multi fbound", "Threshold table f(m) and its validation", nullptr);
  fb.options.integer("--m", "m", "Largest m (default 6)")
      .text("--f-table", "f_table", "User threshold table (.json)")
      .flag("--closed-form", "closed_form", "Validate the closed-form table")
      .real("--width", "width", "Constant width in place of m");

  auto& rep = command(&app, "report", "report", "Combine report files; --format csv tabulates them", nullptr);
  rep.app->add_option("reports", rep.inputs, "Report JSON files")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  const Command* chosen = nullptr;
  for (const auto& c : commands)
    if (c.app->parsed()) chosen = &c;
  if (!chosen) {
    std::cerr << "qplab: no command given\n";
    return 2;
  }

  json request = {{"command", chosen->name},
                  {"options", chosen->options.collect()},
                  {"seed", seed},
                  {"threads", threads},
                  {"format", format},
                  {"timing", timing},
                  {"debug", debug}};
  if (!chosen->positional.empty()) request["group"] = chosen->positional;
  if (!chosen->inputs.empty()) request["options"]["inputs"] = chosen->inputs;
  if (!cache_dir.empty()) request["cache_dir"] = cache_dir;

  char* text = nullptr;
  char* summary = nullptr;
  const qplab_status st = qplab_run_ex(request.dump().c_str(), &text, &summary);
  if (st != QPLAB_OK && st != QPLAB_CHECK_FAILED) {
    std::cerr << "qplab: error: " << qplab_last_error() << '\n';
    return 2;
  }
  int rc = st == QPLAB_OK ? 0 : 1;
  if (out_path.empty()) {
    std::fputs(text, stdout);
  } else {
    std::ofstream out(out_path, std::ios::binary);
    out << text;
    if (!out) {
      std::cerr << "qplab: error: cannot write " << out_path << '\n';
      rc = 2;
    }
  }
  if (summary && *summary) std::cerr << summary << (rc == 1 ? " [some checks FAILED]" : "") << '\n';
  qplab_string_free(text);
  qplab_string_free(summary);
  return rc;
}
