#include "qplab/report.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "qplab/cache.hpp"
#include "qplab/constructions.hpp"
#include "qplab/error.hpp"
#include "qplab/freeness.hpp"
#include "qplab/io.hpp"
#include "qplab/multiparty.hpp"
#include "qplab/repr.hpp"
#include "qplab/rng.hpp"
#include "qplab/spectral.hpp"

namespace qplab {

using nlohmann::json;

namespace {

constexpr double kCheckTolerance = 1e-9;  // relative, for derived holds

bool relation_holds(double lhs, const std::string& rel, double rhs) {
  const double tol = kCheckTolerance * std::max(1.0, std::fabs(rhs));
  if (rel == "<=") return lhs <= rhs + tol;
  if (rel == ">=") return lhs >= rhs - tol;
  if (rel == "=") return std::fabs(lhs - rhs) <= tol;
  throw Error(ErrorCode::invalid_argument, "unknown relation '" + rel + "'");
}

json rational_json(const Rational& q) { return {{"exact", to_string(q)}, {"value", to_double(q)}}; }

std::string hex16(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

json group_json(const FiniteGroup& g) {
  return {{"name", g.name()},
          {"n", g.order()},
          {"hash", g.hash_hex()},
          {"validation", g.validation() == Validation::full ? "full" : "sampled"}};
}

json subset_json(const Subset& s) { return s.elements(); }

// Request accessors -----------------------------------------------------------

struct Context {
  const json& request;
  json options;
  std::uint64_t seed;
  unsigned threads;
  ResultCache cache;
  bool timing;
  bool debug;

  template <typename T>
  T opt(const std::string& key, T fallback) const {
    if (!options.contains(key) || options[key].is_null()) return fallback;
    try {
      return options[key].get<T>();
    } catch (const json::exception&) {
      throw Error(ErrorCode::invalid_argument, "option '" + key + "' has the wrong type");
    }
  }
  bool has(const std::string& key) const { return options.contains(key) && !options[key].is_null(); }

  std::string require_string(const std::string& key) const {
    if (!has(key) || !options[key].is_string()) throw Error(ErrorCode::invalid_argument, "missing option '" + key + "'");
    return options[key].get<std::string>();
  }

  GroupLimits limits() const {
    GroupLimits l;
    l.order_cap = opt<std::size_t>("order_cap", l.order_cap);
    return l;
  }

  std::string group_source() const {
    if (!request.contains("group") || !request["group"].is_string())
      throw Error(ErrorCode::invalid_argument, "command needs a group argument");
    return request["group"].get<std::string>();
  }

  FiniteGroup group() const { return load_group(group_source(), limits()); }

  SearchBudget budget(SearchMode mode) const {
    SearchBudget b;
    b.mode = mode;
    b.node_cap = opt<std::uint64_t>("node_cap", b.node_cap);
    b.time_cap_s = opt<double>("time_cap", b.time_cap_s);
    return b;
  }

  Subset subset(const std::string& key, std::size_t n) const {
    if (!has(key)) throw Error(ErrorCode::invalid_argument, "missing set option '" + key + "'");
    const auto& v = options[key];
    if (v.is_string()) {
      const auto s = v.get<std::string>();
      if (s == "FULL") return Subset::full(n);
      return read_subset(s, n);
    }
    if (v.is_array()) {
      Subset out(n);
      for (const auto& e : v) {
        if (!e.is_number_integer() || e.get<std::int64_t>() < 0 || e.get<std::uint64_t>() >= n)
          throw Error(ErrorCode::invalid_argument, "set '" + key + "' has an element outside 0.." + std::to_string(n - 1));
        out.set(e.get<Element>());
      }
      return out;
    }
    throw Error(ErrorCode::invalid_argument, "set option '" + key + "' must be a path or an array");
  }
};

// Cached derived results ----------------------------------------------------

CharacterDegreeTable cached_degrees(Context& ctx, const FiniteGroup& g) {
  const json j = ctx.cache.get_or_compute(g.hash(), "degrees", [&] {
    const auto t = character_degrees(g);
    return json{{"degrees", t.degrees},
                {"delta", t.delta},
                {"residual", t.residual},
                {"eigen_residual", t.eigen_residual},
                {"seed_used", t.seed_used}};
  });
  CharacterDegreeTable t;
  t.degrees = j.at("degrees").get<std::vector<std::size_t>>();
  t.delta = j.at("delta").get<std::size_t>();
  t.residual = j.at("residual").get<double>();
  t.eigen_residual = j.at("eigen_residual").get<double>();
  t.seed_used = j.at("seed_used").get<std::uint64_t>();
  return t;
}

std::size_t cached_delta(Context& ctx, const FiniteGroup& g) {
  if (g.order() < 2) return 1;
  return cached_degrees(ctx, g).delta;
}

SpectralOptions spectral_options(const Context& ctx) {
  SpectralOptions o;
  o.cap = ctx.opt<std::size_t>("spectral_cap", o.cap);
  const auto method = ctx.opt<std::string>("method", "auto");
  if (method == "jacobi") o.eigen.method = EigenMethod::jacobi;
  else if (method == "ql") o.eigen.method = EigenMethod::householder_ql;
  else if (method == "auto") o.eigen.method = EigenMethod::automatic;
  else throw Error(ErrorCode::invalid_argument, "method must be jacobi, ql or auto");
  return o;
}

SpectralReport cached_spectrum(Context& ctx, const FiniteGroup& g, const Subset& a) {
  const auto opts = spectral_options(ctx);
  if (g.order() > opts.cap)
    throw Error(ErrorCode::cap_exceeded,
                "group order " + std::to_string(g.order()) + " exceeds spectral cap " + std::to_string(opts.cap));
  const std::size_t d = cached_delta(ctx, g);
  const std::string id = "spectrum-" + std::string(to_string(opts.eigen.method)) + "-" + hex16(a.digest());
  const json j = ctx.cache.get_or_compute(g.hash(), id, [&] {
    auto m = gram_matrix(g, a);
    const double trace = m.trace();
    const auto eig = symmetric_eigenvalues(std::move(m), opts.eigen);
    return json{{"eigenvalues", eig.values}, {"trace", trace}, {"method", to_string(eig.method)}};
  });
  SpectralReport r;
  r.n = g.order();
  r.set_size = a.count();
  r.delta = d;
  r.eigenvalues = j.at("eigenvalues").get<std::vector<double>>();
  r.trace = j.at("trace").get<double>();
  r.method = j.at("method").get<std::string>() == "jacobi" ? EigenMethod::jacobi : EigenMethod::householder_ql;
  r.sigma_max = std::sqrt(std::max(0.0, r.eigenvalues.front()));
  r.lambda2 = r.eigenvalues.size() > 1 ? r.eigenvalues[1] : 0.0;
  r.bound = static_cast<double>(r.n) * static_cast<double>(r.set_size) / static_cast<double>(r.delta);
  r.bound_holds = r.lambda2 <= r.bound + 1e-6;
  return r;
}

// Commands ---------------------------------------------------------------------

FiniteGroup build_from_options(const Context& ctx) {
  if (ctx.has("generators")) {
    const auto gens = read_generators(ctx.require_string("generators"));
    return from_generators(gens, ctx.limits()).first;
  }
  if (ctx.has("spec")) return build_named(ctx.require_string("spec"), ctx.limits());
  const auto family = ctx.require_string("family");
  std::string spec = family;
  if (ctx.has("q")) spec += ":" + std::to_string(ctx.opt<int>("q", 0));
  else if (ctx.has("k")) spec += ":" + std::to_string(ctx.opt<int>("k", 0));
  else throw Error(ErrorCode::invalid_argument, "family '" + family + "' needs --k or --q");
  return build_named(spec, ctx.limits());
}

void cmd_group_build(Context& ctx, ReportDocument& doc, RunOutcome& out) {
  const auto g = build_from_options(ctx);
  doc.group = group_json(g);
  doc.inputs = ctx.options;
  if (ctx.has("path")) {
    const auto path = ctx.require_string("path");
    write_cayley_table(std::filesystem::path(path), g);
    const auto back = read_cayley_table(path, ctx.limits());
    doc.outputs["path"] = path;
    doc.check("round-trip hash", static_cast<double>(back.hash() == g.hash()), "=", 1.0);
  }
  doc.outputs["order"] = g.order();
  doc.outputs["abelian"] = g.is_abelian();
  out.summary = g.name() + ": order " + std::to_string(g.order()) + ", hash " + g.hash_hex();
}

void cmd_group_info(Context& ctx, ReportDocument& doc, RunOutcome& out) {
  const auto g = ctx.group();
  doc.group = group_json(g);
  doc.inputs = ctx.options;
  const auto cls = conjugacy_classes(g);
  std::map<std::size_t, std::size_t> orders;
  for (Element x = 0; x < g.order(); ++x) ++orders[g.element_order(x)];
  json order_hist = json::object();
  for (auto [o, c] : orders) order_hist[std::to_string(o)] = c;
  doc.outputs["order"] = g.order();
  doc.outputs["abelian"] = g.is_abelian();
  doc.outputs["class_count"] = cls.sizes.size();
  doc.outputs["class_sizes"] = cls.sizes;
  doc.outputs["element_orders"] = order_hist;
  std::size_t sum = 0;
  for (auto s : cls.sizes) sum += s;
  doc.check("class sizes sum to n", static_cast<double>(sum), "=", static_cast<double>(g.order()));
  SubgroupOptions so;
  so.enumeration_cap = ctx.opt<std::size_t>("enumeration_cap", so.enumeration_cap);
  so.budget = ctx.budget(SearchMode::exact);
  if (g.order() <= so.enumeration_cap) {
    const auto lat = subgroups_and_min_index(g, so);
    doc.outputs["subgroup_count"] = lat.subgroups.size();
    doc.outputs["subgroups_exact"] = lat.exact;
    doc.outputs["min_index"] = lat.min_index ? json(*lat.min_index) : json(nullptr);
  } else {
    doc.outputs["min_index"] = nullptr;
    doc.outputs["subgroups_exact"] = false;
  }
  out.summary = g.name() + ": order " + std::to_string(g.order()) + ", " + std::to_string(cls.sizes.size()) +
                " classes";
}

void cmd_group_validate(Context& ctx, ReportDocument& doc, RunOutcome& out) {
  const auto path = ctx.group_source();
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot read " + path);
  const auto [n, table] = parse_raw_table(in);
  const auto chk = FiniteGroup::check_table(n, table, ctx.limits());
  doc.inputs["path"] = path;
  doc.group = {{"name", std::filesystem::path(path).stem().string()}, {"n", n}, {"hash", nullptr},
               {"validation", chk.validation == Validation::full ? "full" : "sampled"}};
  if (chk.ok) doc.group = group_json(FiniteGroup::from_table(n, table, doc.group["name"], ctx.limits()));
  doc.outputs["ok"] = chk.ok;
  doc.outputs["failure"] = chk.failure;
  if (chk.associativity_witness) doc.outputs["associativity_witness"] = *chk.associativity_witness;
  doc.check("identity at 0", chk.identity_ok, "=", 1.0);
  doc.check("latin square", chk.latin_ok, "=", 1.0);
  doc.check("inverses", chk.inverses_ok, "=", 1.0);
  doc.check("associative", chk.associative_ok, "=", 1.0);
  out.summary = chk.ok ? path + ": valid group of order " + std::to_string(n) : path + ": " + chk.failure;
}

void cmd_delta(Context& ctx, ReportDocument& doc, RunOutcome& out) {
  const auto g = ctx.group();
  doc.group = group_json(g);
  doc.inputs = ctx.options;
  if (g.order() < 2) throw Error(ErrorCode::not_applicable, "delta is undefined for the trivial group");
  const auto t = cached_degrees(ctx, g);
  std::size_t sq = 0;
  for (auto d : t.degrees) sq += d * d;
  doc.outputs["degrees"] = t.degrees;
  doc.outputs["delta"] = t.delta;
  doc.outputs["class_count"] = t.degrees.size();
  doc.outputs["residual"] = t.residual;
  doc.outputs["eigen_residual"] = t.eigen_residual;
  doc.outputs["seed_used"] = t.seed_used;
  doc.check("sum of squared degrees", static_cast<double>(sq), "=", static_cast<double>(g.order()));
  doc.check("degree residual", t.residual, "<=", 1e-6, t.residual < 1e-6);
  out.summary = g.name() + ": delta = " + std::to_string(t.delta);
}

json spectral_json(const SpectralReport& r, bool with_eigenvalues) {
  json j = {{"n", r.n},
            {"set_size", r.set_size},
            {"delta", r.delta},
            {"sigma_max", r.sigma_max},
            {"lambda2", r.lambda2},
            {"trace", r.trace},
            {"bound", r.bound},
            {"method", to_string(r.method)}};
  if (with_eigenvalues) j["eigenvalues"] = r.eigenvalues;
  return j;
}

void cmd_spectral(Context& ctx, ReportDocument& doc, RunOutcome& out) {
  const auto g = ctx.group();
  const std::size_t n = g.order();
  doc.group = group_json(g);
  doc.inputs = ctx.options;
  std::vector<Subset> sets;
  if (ctx.has("set")) {
    sets.push_back(ctx.subset("set", n));
  } else {
    const auto samples = ctx.opt<std::size_t>("samples", 1);
    const double density = ctx.opt<double>("density", 0.0);
    Rng rng(ctx.seed);
    for (std::size_t i = 0; i < samples; ++i) {
      std::size_t size = density > 0 ? static_cast<std::size_t>(std::llround(density * static_cast<double>(n)))
                                     : 1 + rng.below(n);
      size = std::clamp<std::size_t>(size, 1, n);
      const auto pick = rng.sample(static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(size));
      sets.push_back(Subset::of(n, pick));
    }
  }
  json rows = json::array();
  double worst_sigma = 0, worst_trace = 0, worst_gap = -1e300;
  std::size_t violations = 0;
  std::string method;
  for (const auto& a : sets) {
    if (a.empty()) throw Error(ErrorCode::invalid_argument, "spectral analysis needs a nonempty set");
    const auto r = cached_spectrum(ctx, g, a);
    const double sz = static_cast<double>(r.set_size);
    worst_sigma = std::max(worst_sigma, std::fabs(r.sigma_max - sz) / sz);
    worst_trace = std::max(worst_trace, std::fabs(r.trace - static_cast<double>(n) * sz) / (static_cast<double>(n) * sz));
    worst_gap = std::max(worst_gap, r.lambda2 - r.bound);
    violations += r.bound_holds ? 0 : 1;
    method = to_string(r.method);
    json row = spectral_json(r, ctx.debug);
    if (sets.size() > 1 || ctx.debug) row["set"] = subset_json(a);
    if (ctx.debug) {
      const auto m = gram_matrix(g, a);
      row["gram_matrix"] = m.a;
    }
    rows.push_back(std::move(row));
  }
  if (sets.size() == 1) {
    doc.outputs = rows[0];
    const auto& r = rows[0];
    doc.check("sigma_max = |A|", r["sigma_max"].get<double>(), "=", static_cast<double>(sets[0].count()),
              worst_sigma <= 1e-8);
    doc.check("trace = n|A|", r["trace"].get<double>(), "=", static_cast<double>(n * sets[0].count()),
              worst_trace <= 1e-8);
    doc.check("lambda2 <= n|A|/delta", r["lambda2"].get<double>(), "<=", r["bound"].get<double>(), violations == 0);
    out.summary = g.name() + ": lambda2 = " + std::to_string(r["lambda2"].get<double>()) +
                  ", bound = " + std::to_string(r["bound"].get<double>());
  } else {
    doc.outputs["samples"] = rows;
    doc.outputs["method"] = method;
    doc.outputs["max_sigma_rel_error"] = worst_sigma;
    doc.outputs["max_trace_rel_error"] = worst_trace;
    doc.outputs["max_lambda2_minus_bound"] = worst_gap;
    doc.check("sigma_max = |A| (max rel. error)", worst_sigma, "<=", 1e-8, worst_sigma <= 1e-8);
    doc.check("trace = n|A| (max rel. error)", worst_trace, "<=", 1e-8, worst_trace <= 1e-8);
    doc.check("lambda2 <= n|A|/delta (violations)", static_cast<double>(violations), "=", 0.0);
    out.summary = g.name() + ": " + std::to_string(sets.size()) + " samples, " + std::to_string(violations) +
                  " violations";
  }
}

void cmd_triple(Context& ctx, ReportDocument& doc, RunOutcome& out) {
  const auto g = ctx.group();
  const std::size_t n = g.order();
  doc.group = group_json(g);
  doc.inputs = ctx.options;
  const auto a = ctx.subset("a", n), b = ctx.subset("b", n), c = ctx.subset("c", n);
  const std::size_t d = cached_delta(ctx, g);
  const auto density = check_density_bound(g, d, a, b, c);
  doc.outputs["count"] = density.triple.count;
  doc.outputs["r"] = rational_json(density.triple.r);
  doc.outputs["s"] = rational_json(density.triple.s);
  doc.outputs["t"] = rational_json(density.triple.t);
  doc.outputs["p"] = density.triple.p ? rational_json(*density.triple.p) : json(nullptr);
  doc.outputs["delta"] = d;
  doc.outputs["density_bound_lhs"] = rational_json(density.lhs);
  if (density.triple.p) doc.check("r s t (1-p)^2 delta <= 1", to_double(density.lhs), "<=", 1.0, density.holds);
  doc.outputs["solution_free"] = density.triple.count == 0;
  if (density.triple.count == 0 && !a.empty() && ctx.opt<bool>("spectral", true) && n <= spectral_options(ctx).cap) {
    const auto spec = cached_spectrum(ctx, g, a);
    const auto tb = check_triple_bound(g, spec, a, b, c);
    doc.outputs["lambda2"] = tb.lambda2;
    doc.outputs["product"] = tb.product;
    doc.check("|A||B||C| <= n^2 lambda2/|A|", tb.product, "<=", tb.spectral_rhs, tb.spectral_holds);
    doc.check("|A||B||C| <= n^3/delta", tb.product, "<=", tb.delta_rhs, tb.delta_holds);
  } else if (density.triple.count == 0) {
    const double prod = static_cast<double>(a.count()) * static_cast<double>(b.count()) * static_cast<double>(c.count());
    const double rhs = std::pow(static_cast<double>(n), 3) / static_cast<double>(d);
    doc.outputs["product"] = prod;
    doc.check("|A||B||C| <= n^3/delta", prod, "<=", rhs, prod <= rhs * (1 + 1e-12));
  }
  out.summary = g.name() + ": " + std::to_string(density.triple.count) + " solutions";
}

void cmd_alpha(Context& ctx, ReportDocument& doc, RunOutcome& out) {
  const auto g = ctx.group();
  doc.group = group_json(g);
  doc.inputs = ctx.options;
  AlphaOptions o;
  o.exact_order_cap = ctx.opt<std::size_t>("exact_cap", o.exact_order_cap);
  const bool force_exact = ctx.opt<bool>("exact", false);
  if (force_exact) o.exact_order_cap = std::max(o.exact_order_cap, g.order());
  const bool heuristic = ctx.opt<bool>("heuristic", false) || (!force_exact && g.order() > o.exact_order_cap);
  o.budget = ctx.budget(heuristic ? SearchMode::heuristic : SearchMode::exact);
  o.seed = ctx.seed;
  o.restarts = ctx.opt<std::uint64_t>("restarts", o.restarts);
  const auto r = max_product_free(g, o);
  doc.outputs["alpha"] = r.alpha;
  doc.outputs["witness"] = subset_json(r.witness);
  doc.outputs["exact"] = r.exact;
  doc.outputs["nodes_explored"] = r.nodes_explored;
  doc.outputs["density"] = static_cast<double>(r.alpha) / static_cast<double>(g.order());
  doc.check("witness product-free", is_product_free(g, r.witness), "=", 1.0);
  doc.check("witness size", static_cast<double>(r.witness.count()), "=", static_cast<double>(r.alpha));
  out.summary = g.name() + ": alpha " + (r.exact ? "= " : ">= ") + std::to_string(r.alpha);
}

void cmd_poor(Context& ctx, ReportDocument& doc, RunOutcome& out) {
  const auto g = ctx.group();
  doc.group = group_json(g);
  doc.inputs = ctx.options;
  const auto s = ctx.subset("set", g.order());
  const Rational p = parse_rational(ctx.opt<std::string>("p", "0"));
  if (p < 0 || p > 1) throw Error(ErrorCode::invalid_argument, "p must lie in [0, 1]");
  const auto cert = poor_certificate(g, s, p);
  doc.outputs["pair_count"] = cert.pair_count;
  doc.outputs["p_achieved"] = rational_json(cert.p_achieved);
  doc.outputs["p"] = rational_json(p);
  doc.outputs["is_poor"] = cert.is_poor;
  doc.outputs["set_size"] = s.count();
  doc.check("pairs with product in S <= p|S|^2", to_double(cert.p_achieved), "<=", to_double(p), cert.is_poor);
  if (g.order() >= 2) {
    const auto size_bound = poor_set_size(g, s, p);
    doc.outputs["delta"] = size_bound.delta;
    doc.outputs["p_limit"] = size_bound.p_limit;
    doc.outputs["applicable"] = size_bound.applicable;
    doc.outputs["empirical_c"] = size_bound.empirical_c;
    if (size_bound.applicable && cert.is_poor) {
      // A p-poor set with p <= delta^(-1/3) has rst(1-p)^2 delta <= 1 for A = B = C = S.
      const auto density = check_density_bound(g, size_bound.delta, s, s, s);
      doc.check("r^3 (1-p)^2 delta <= 1 for S", to_double(density.lhs), "<=", 1.0, density.holds);
    }
  }
  out.summary = g.name() + ": p_achieved = " + to_string(cert.p_achieved);
}

SubgroupRecord chosen_subgroup(Context& ctx, const FiniteGroup& g, json& inputs_used) {
  if (ctx.has("subgroup")) {
    const auto h = make_subgroup(g, ctx.subset("subgroup", g.order()));
    inputs_used["subgroup_source"] = "user";
    return h;
  }
  SubgroupOptions so;
  so.enumeration_cap = ctx.opt<std::size_t>("enumeration_cap", so.enumeration_cap);
  so.budget = ctx.budget(SearchMode::exact);
  const auto lat = subgroups_and_min_index(g, so);
  if (!lat.min_index) throw Error(ErrorCode::not_applicable, "group has no proper subgroup");
  for (const auto& h : lat.subgroups)
    if (h.index == *lat.min_index) {
      inputs_used["subgroup_source"] = "minimal index";
      return h;
    }
  throw Error(ErrorCode::numeric, "minimal-index subgroup not found");
}

void cmd_coset_union(Context& ctx, ReportDocument& doc, RunOutcome& out) {
  const auto g = ctx.group();
  doc.group = group_json(g);
  doc.inputs = ctx.options;
  const auto h = chosen_subgroup(ctx, g, doc.outputs);
  const auto rel = coset_relation(g, h);
  RelationFreeOptions ro;
  ro.exact_cap = ctx.opt<std::size_t>("exact_cap", ro.exact_cap);
  ro.budget = ctx.budget(SearchMode::exact);
  ro.seed = ctx.seed;
  ro.restarts = ctx.opt<std::uint64_t>("restarts", ro.restarts);
  const auto best = max_relation_free(rel, ro);
  const auto s = coset_union(h, best.cosets);
  doc.outputs["subgroup_order"] = h.order;
  doc.outputs["index"] = h.index;
  doc.outputs["cosets"] = subset_json(best.cosets);
  doc.outputs["relation_free_size"] = best.size;
  doc.outputs["relation_free_exact"] = best.exact;
  doc.outputs["set"] = subset_json(s);
  doc.outputs["set_size"] = s.count();
  doc.outputs["density"] = static_cast<double>(s.count()) / static_cast<double>(g.order());
  doc.outputs["empirical_c"] = best.empirical_c;
  doc.check("union product-free", is_product_free(g, s), "=", 1.0);
  doc.check("union size = |U| n/m", static_cast<double>(s.count()), "=",
            static_cast<double>(best.size * h.order));
  out.summary = g.name() + ": " + std::to_string(best.size) + " of " + std::to_string(h.index) +
                " cosets, density " + std::to_string(doc.outputs["density"].get<double>());
}

PermutationAction chosen_action(Context& ctx, const FiniteGroup& g, json& outputs) {
  const auto kind = ctx.opt<std::string>("action", "regular");
  outputs["action"] = kind;
  if (kind == "regular") return regular_action(g);
  if (kind == "natural") return natural_action(g);
  if (kind == "coset") return coset_action(g, chosen_subgroup(ctx, g, outputs));
  throw Error(ErrorCode::invalid_argument, "action must be regular, natural or coset");
}

void cmd_point_action(Context& ctx, ReportDocument& doc, RunOutcome& out) {
  const auto g = ctx.group();
  doc.group = group_json(g);
  doc.inputs = ctx.options;
  const auto act = chosen_action(ctx, g, doc.outputs);
  PointActionOptions o;
  o.kind = ctx.opt<bool>("sampled", false) ? SearchKind::sampled : SearchKind::exhaustive;
  o.trials = ctx.opt<std::uint64_t>("trials", o.trials);
  o.exhaustive_cap = ctx.opt<std::uint64_t>("exhaustive_cap", o.exhaustive_cap);
  o.seed = ctx.seed;
  o.threads = ctx.threads;
  if (!ctx.has("k")) throw Error(ErrorCode::invalid_argument, "missing option 'k'");
  const auto k = ctx.opt<std::size_t>("k", 0);
  const auto r = point_action_search(g, act, k, o);
  doc.outputs["degree"] = r.m;
  doc.outputs["k"] = r.k;
  doc.outputs["t_best"] = r.t_best;
  doc.outputs["count_best"] = r.count_best;
  doc.outputs["set_size"] = r.set_size;
  doc.outputs["bound"] = r.bound;
  doc.outputs["exhaustive"] = r.exhaustive;
  doc.outputs["candidates"] = r.candidates;
  doc.check("min count <= 4 n^2 k^3/(m-3)^3", static_cast<double>(r.count_best), "<=", r.bound);
  if (r.exhaustive) {
    doc.outputs["average_lhs"] = r.average_lhs->str();
    doc.outputs["average_middle"] = r.average_middle->str();
    doc.outputs["average_rhs"] = r.average_rhs->str();
    doc.outputs["mean_count"] = rational_json(*r.mean_count);
    doc.outputs["mean_bound"] = rational_json(*r.mean_bound);
    doc.check("sum of counts <= middle term", to_double(*r.average_lhs), "<=", to_double(*r.average_middle),
              *r.average_lhs <= *r.average_middle);
    doc.check("middle term <= 4 n^2 C(m-4,k-3)", to_double(*r.average_middle), "<=", to_double(*r.average_rhs),
              *r.average_middle <= *r.average_rhs);
    doc.check("mean bound simplification", static_cast<double>(r.simplification_identity), "=", 1.0);
  }
  out.summary = g.name() + ": k=" + std::to_string(k) + " best count " + std::to_string(r.count_best) +
                " (bound " + std::to_string(r.bound) + ")";
}

// Multi-subset systems ---------------------------------------------------------

DensitySystem load_system(const Context& ctx) {
  return read_density_system(ctx.group_source(), ctx.limits());
}

/// f(2) = 2, f(k) = (sqrt(w) + sqrt(f(k-1)))^2 for a constant width w.
FTable width_minimal_table(int m_max, double width) {
  FTable t = minimal_f_table(2);
  t.origin = FOrigin::minimal;
  for (int k = 3; k <= m_max; ++k) {
    const double prev = t.f.at(k - 1);
    t.f[k] = (std::sqrt(width) + std::sqrt(prev)) * (std::sqrt(width) + std::sqrt(prev));
  }
  return t;
}

json constraints_json(const DensitySystem& sys) {
  json arr = json::array();
  for (const auto& c : sys.constraints())
    arr.push_back({{"F", indices_of(c.f)}, {"size", c.set.count()}, {"density", rational_json(c.density)}});
  return arr;
}

json validation_json(const FValidation& v) {
  json rows = json::array();
  for (const auto& r : v.rows)
    rows.push_back({{"m", r.m},
                    {"f", r.f},
                    {"width", r.width},
                    {"lhs", r.lhs},
                    {"rhs", r.rhs},
                    {"slack", r.slack},
                    {"inequality_ok", r.inequality_ok},
                    {"above_width", r.above_width}});
  return {{"f2_ok", v.f2_ok}, {"rows", rows}, {"all_pass", v.all_pass}};
}

void add_validation_checks(ReportDocument& doc, const FTable& f, const FValidation& v) {
  doc.check("f(2) >= 2", f.at(2), ">=", 2.0, v.f2_ok);
  for (const auto& r : v.rows) {
    doc.check("f-recurrence m=" + std::to_string(r.m), r.lhs, ">=", r.rhs, r.inequality_ok);
    doc.check("f(m) > width m=" + std::to_string(r.m), r.f, ">=", r.width, r.above_width);
  }
}

FTable f_table_option(const Context& ctx, int m_max, std::optional<double> width) {
  if (ctx.has("f_table")) return read_f_table(ctx.require_string("f_table"));
  if (ctx.opt<bool>("closed_form", false)) return closed_form_f_table(m_max);
  if (width) return width_minimal_table(m_max, *width);
  return minimal_f_table(m_max);
}

void cmd_multi_hypotheses(Context& ctx, ReportDocument& doc, RunOutcome& out) {
  const auto sys = load_system(ctx);
  doc.group = group_json(sys.group());
  doc.inputs = ctx.options;
  doc.inputs["system"] = ctx.group_source();
  doc.outputs["m"] = sys.m();
  doc.outputs["constraints"] = constraints_json(sys);
  const bool use_m3 = sys.m() == 3 && sys.is_all_pairs() && !ctx.has("f_table") && !ctx.opt<bool>("gamma", false);
  if (use_m3) {
    const double m_const = ctx.opt<double>("M", 6.0);
    const auto h = check_m3_hypotheses(sys, m_const);
    doc.outputs["form"] = "m3";
    doc.outputs["delta"] = h.delta;
    doc.outputs["M"] = h.m_const;
    doc.outputs["threshold"] = h.threshold;
    doc.outputs["p12"] = rational_json(h.p12);
    doc.outputs["p13"] = rational_json(h.p13);
    doc.outputs["p23_full"] = rational_json(h.p23full);
    doc.outputs["hypotheses_hold"] = h.all_hold;
    doc.outputs["lambda"] = h.lambda;
    doc.outputs["mu"] = h.mu;
    doc.outputs["mu_range"] = {h.mu_low, h.mu_high};
    doc.outputs["below_minimum_constant"] = h.below_minimum_constant;
    doc.outputs["hypotheses"] = {{"p1p2p12", h.h12}, {"p1p3p13", h.h13}, {"p2p3p23p12p13", h.h23}};
    doc.check("M >= 1/(mu lambda^2)", h.m_const, ">=", 1.0 / (h.mu * h.lambda * h.lambda), h.mu_condition);
    doc.check("M > 1/(1-lambda)^2", h.m_const, ">=", 1.0 / ((1 - h.lambda) * (1 - h.lambda)), h.lambda_condition);
    out.summary = std::string("m=3 hypotheses ") + (h.all_hold ? "hold" : "do not hold");
  } else {
    const int m = sys.m();
    int width = 0;
    for (int k = 1; k <= m; ++k) {
      int c = 0;
      for (const auto& con : sys.constraints()) c += (con.f >> (k - 1)) & 1u;
      width = std::max(width, c);
    }
    const auto f = f_table_option(ctx, std::max(m, 2), static_cast<double>(width));
    const auto h = check_gamma_hypotheses(sys, f);
    doc.outputs["form"] = "gamma";
    doc.outputs["delta"] = h.delta;
    doc.outputs["width"] = h.width;
    doc.outputs["threshold"] = h.threshold;
    doc.outputs["f_origin"] = to_string(f.origin);
    json entries = json::array();
    for (const auto& e : h.entries) {
      json coll = json::array();
      for (auto fm : e.collection) coll.push_back(indices_of(fm));
      entries.push_back({{"h", e.h}, {"E", indices_of(e.e)}, {"collection", coll},
                         {"product", rational_json(e.product)}, {"holds", e.holds}});
    }
    doc.outputs["entries"] = entries;
    doc.outputs["products_hold"] = h.products_hold;
    doc.outputs["hypotheses_hold"] = h.all_hold;
    doc.outputs["f_validation"] = validation_json(h.f_check);
    add_validation_checks(doc, f, h.f_check);
    out.summary = std::string("general hypotheses ") + (h.all_hold ? "hold" : "do not hold");
  }
}

json assignment_json(const WitnessResult& w) {
  return w.assignment ? json(*w.assignment) : json(nullptr);
}

void cmd_multi_witness(Context& ctx, ReportDocument& doc, RunOutcome& out) {
  const auto sys = load_system(ctx);
  doc.group = group_json(sys.group());
  doc.inputs = ctx.options;
  doc.inputs["system"] = ctx.group_source();
  doc.outputs["m"] = sys.m();
  const bool staged = ctx.opt<bool>("staged", false);
  WitnessResult w;
  if (staged) {
    if (sys.m() != 3 || !sys.is_all_pairs())
      throw Error(ErrorCode::not_applicable, "staged search needs an m=3 all-pairs system");
    const double m_const = ctx.opt<double>("M", 6.0);
    std::optional<double> lambda, mu;
    if (ctx.has("lambda")) lambda = ctx.opt<double>("lambda", 0);
    if (ctx.has("mu")) mu = ctx.opt<double>("mu", 0);
    const auto sw = staged_witness_m3(sys, m_const, lambda, mu);
    const auto& log = sw.log;
    doc.outputs["stage"] = {{"refused", log.refused},
                            {"reason", log.reason},
                            {"lambda", log.lambda},
                            {"mu", log.mu},
                            {"x1", log.x1 ? json(*log.x1) : json(nullptr)},
                            {"b2_size", log.b2_size},
                            {"b3_size", log.b3_size},
                            {"q2", log.q2},
                            {"q3", log.q3},
                            {"final_product", log.final_product},
                            {"x1_candidates_scanned", log.x1_candidates_scanned}};
    w = sw.witness;
    if (!log.refused) doc.check("staged search found a witness", w.assignment.has_value(), "=", 1.0);
  } else if (sys.m() == 3 && sys.is_all_pairs() && !ctx.opt<bool>("gamma", false)) {
    w = find_witness_m3(sys);
  } else {
    GammaSearchOptions go;
    go.space_cap = ctx.opt<std::uint64_t>("space_cap", go.space_cap);
    w = find_witness_gamma(sys, go);
  }
  doc.outputs["found"] = w.assignment.has_value();
  doc.outputs["assignment"] = assignment_json(w);
  doc.outputs["nodes"] = w.nodes;
  json sat = json::array();
  for (auto f : w.satisfied) sat.push_back(indices_of(f));
  doc.outputs["satisfied"] = sat;
  if (w.assignment) doc.check("witness satisfies every constraint", witness_valid(sys, *w.assignment), "=", 1.0);
  out.summary = w.assignment ? "witness found" : "no witness";
}

void cmd_multi_fbound(Context& ctx, ReportDocument& doc, RunOutcome& out) {
  const int m = ctx.opt<int>("m", 6);
  if (m < 2 || m > 64) throw Error(ErrorCode::invalid_argument, "m must lie in 2..64");
  std::optional<double> width;
  if (ctx.has("width")) width = ctx.opt<double>("width", 0);
  const auto f = ctx.has("f_table") ? read_f_table(ctx.require_string("f_table"))
                 : ctx.opt<bool>("closed_form", false) ? closed_form_f_table(m)
                 : width ? width_minimal_table(m, *width)
                         : minimal_f_table(m);
  for (int k = 2; k <= m; ++k)
    if (!f.f.contains(k))
      throw Error(ErrorCode::invalid_argument, "f-table does not define f(" + std::to_string(k) + ")");
  const auto v = validate_f_table(f, m, width);
  doc.inputs = ctx.options;
  json table = json::object();
  for (int k = 2; k <= m; ++k) table[std::to_string(k)] = f.at(k);
  doc.outputs["f"] = table;
  doc.outputs["origin"] = to_string(f.origin);
  doc.outputs["validation"] = validation_json(v);
  add_validation_checks(doc, f, v);
  for (int k = 3; k <= m; ++k)
    doc.check("f monotone m=" + std::to_string(k), f.at(k), ">=", f.at(k - 1), f.at(k) >= f.at(k - 1));
  out.summary = std::string("f-table ") + to_string(f.origin) + (v.all_pass ? " passes" : " FAILS") +
                " for m <= " + std::to_string(m);
}

void cmd_report(Context& ctx, ReportDocument&, RunOutcome& out, std::vector<json>& collected) {
  if (!ctx.has("inputs") || !ctx.options["inputs"].is_array() || ctx.options["inputs"].empty())
    throw Error(ErrorCode::invalid_argument, "report needs one or more report files");
  for (const auto& p : ctx.options["inputs"]) {
    const auto path = p.get<std::string>();
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io, "cannot read " + path);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::parse, path + ": " + e.what());
    }
    if (j.is_array()) {
      for (auto& r : j) collected.push_back(r);
    } else {
      collected.push_back(std::move(j));
    }
  }
  out.summary = std::to_string(collected.size()) + " reports";
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string number_text(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

// ReportDocument -----------------------------------------------------------------

void ReportDocument::check(std::string name, double lhs, std::string relation, double rhs, bool holds) {
  checks.push_back({std::move(name), lhs, std::move(relation), rhs, holds});
}

void ReportDocument::check(std::string name, double lhs, std::string relation, double rhs) {
  const bool holds = relation_holds(lhs, relation, rhs);
  check(std::move(name), lhs, std::move(relation), rhs, holds);
}

bool ReportDocument::all_hold() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.holds; });
}

json ReportDocument::to_json() const {
  json cs = json::array();
  for (const auto& c : checks)
    cs.push_back({{"name", c.name}, {"lhs", c.lhs}, {"relation", c.relation}, {"rhs", c.rhs}, {"holds", c.holds}});
  return {{"tool", "qplab"},
          {"version", QPLAB_VERSION},
          {"command", command},
          {"group", group},
          {"inputs", inputs},
          {"outputs", outputs},
          {"checks", cs},
          {"seed", seed},
          {"timing_ms", timing_ms}};
}

// Dispatch -----------------------------------------------------------------------

RunOutcome run_request(const json& request) {
  if (!request.is_object() || !request.contains("command") || !request["command"].is_string())
    throw Error(ErrorCode::invalid_argument, "request needs a \"command\" string");
  const auto command = request["command"].get<std::string>();
  std::optional<std::string> cache_flag;
  if (request.contains("cache_dir") && request["cache_dir"].is_string()) cache_flag = request["cache_dir"].get<std::string>();
  Context ctx{request,
              request.value("options", json::object()),
              request.value("seed", kDefaultSeed),
              std::max(1u, request.value("threads", 1u)),
              ResultCache(resolve_cache_dir(cache_flag)),
              request.value("timing", false),
              request.value("debug", false)};
  if (!ctx.options.is_object()) throw Error(ErrorCode::invalid_argument, "\"options\" must be an object");
  const auto format = request.value("format", std::string("json"));
  if (format != "json" && format != "csv") throw Error(ErrorCode::invalid_argument, "format must be json or csv");

  ReportDocument doc;
  doc.command = command;
  doc.seed = ctx.seed;
  RunOutcome out;
  const auto start = std::chrono::steady_clock::now();

  std::vector<json> collected;
  if (command == "group build") cmd_group_build(ctx, doc, out);
  else if (command == "group info") cmd_group_info(ctx, doc, out);
  else if (command == "group validate") cmd_group_validate(ctx, doc, out);
  else if (command == "delta") cmd_delta(ctx, doc, out);
  else if (command == "spectral") cmd_spectral(ctx, doc, out);
  else if (command == "triple") cmd_triple(ctx, doc, out);
  else if (command == "alpha") cmd_alpha(ctx, doc, out);
  else if (command == "poor") cmd_poor(ctx, doc, out);
  else if (command == "construct coset-union") cmd_coset_union(ctx, doc, out);
  else if (command == "construct theorem25") cmd_point_action(ctx, doc, out);
  else if (command == "multi hypotheses") cmd_multi_hypotheses(ctx, doc, out);
  else if (command == "multi witness") cmd_multi_witness(ctx, doc, out);
  else if (command == "multi fbound") cmd_multi_fbound(ctx, doc, out);
  else if (command == "report") cmd_report(ctx, doc, out, collected);
  else throw Error(ErrorCode::invalid_argument, "unknown command '" + command + "'");

  if (command == "report") {
    bool ok = true;
    for (const auto& r : collected)
      for (const auto& c : r.value("checks", json::array())) ok = ok && c.value("holds", false);
    out.status = ok ? RunStatus::ok : RunStatus::check_failed;
    out.report = collected;
    out.text = format == "csv" ? emit_table(collected) : out.report.dump(2) + "\n";
    return out;
  }

  if (ctx.timing)
    doc.timing_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  out.status = doc.all_hold() ? RunStatus::ok : RunStatus::check_failed;
  out.report = doc.to_json();
  out.text = format == "csv" ? emit_table({out.report}) : out.report.dump(2) + "\n";
  return out;
}

std::string emit_table(const std::vector<json>& reports) {
  std::vector<std::string> names;
  std::string kind;
  for (const auto& r : reports) {
    const auto cmd = r.value("command", std::string());
    if (kind.empty()) kind = cmd;
    else if (cmd != kind) throw Error(ErrorCode::invalid_argument, "cannot tabulate mixed commands '" + kind + "' and '" + cmd + "'");
    for (const auto& c : r.value("checks", json::array())) {
      const auto name = c.value("name", std::string());
      if (std::find(names.begin(), names.end(), name) == names.end()) names.push_back(name);
    }
  }
  std::ostringstream os;
  os << "command,group,n";
  for (const auto& name : names) os << ',' << csv_field(name + ".lhs") << ',' << csv_field(name + ".rhs") << ','
                                    << csv_field(name + ".holds");
  os << '\n';
  for (const auto& r : reports) {
    const auto& g = r.contains("group") ? r["group"] : json();
    const std::string gname = g.is_object() ? g.value("name", std::string()) : std::string();
    const std::string gn = g.is_object() && g.contains("n") ? g["n"].dump() : std::string();
    os << csv_field(r.value("command", std::string())) << ',' << csv_field(gname) << ',' << gn;
    const auto checks = r.value("checks", json::array());
    for (const auto& name : names) {
      const json* hit = nullptr;
      for (const auto& c : checks)
        if (c.value("name", std::string()) == name) {
          hit = &c;
          break;
        }
      if (hit) {
        os << ',' << number_text((*hit)["lhs"].get<double>()) << ',' << number_text((*hit)["rhs"].get<double>()) << ','
           << ((*hit)["holds"].get<bool>() ? "true" : "false");
      } else {
        os << ",,,";
      }
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace qplab
