#include "qplab/spectral.hpp"

#include <cmath>

#include "qplab/error.hpp"
#include "qplab/repr.hpp"

namespace qplab {

IncidenceMatrix incidence(const FiniteGroup& g, const Subset& a) {
  if (a.empty()) throw Error(ErrorCode::invalid_argument, "incidence matrix needs a nonempty set");
  IncidenceMatrix m;
  m.set = a;
  m.n = g.order();
  m.entries.assign(m.n * m.n, 0);
  for (Element x = 0; x < m.n; ++x)
    for (Element y = 0; y < m.n; ++y) m.entries[x * m.n + y] = a.test(g.mul(y, g.inv(x))) ? 1 : 0;
  return m;
}

SymmetricMatrix gram_matrix(const FiniteGroup& g, const Subset& a) {
  const std::size_t n = g.order();
  // overlap[h] = #{a in A : a h in A}
  std::vector<double> overlap(n, 0.0);
  const auto members = a.elements();
  for (Element h = 0; h < n; ++h) {
    std::size_t c = 0;
    for (Element x : members) c += a.test(g.mul(x, h));
    overlap[h] = static_cast<double>(c);
  }
  SymmetricMatrix m(n);
  for (Element x = 0; x < n; ++x)
    for (Element y = 0; y < n; ++y) m(x, y) = overlap[g.mul(x, g.inv(y))];
  return m;
}

SpectralReport spectral_report(const FiniteGroup& g, const Subset& a, const SpectralOptions& opts) {
  if (a.empty()) throw Error(ErrorCode::invalid_argument, "spectral report needs a nonempty set");
  if (g.order() > opts.cap)
    throw Error(ErrorCode::cap_exceeded,
                "group order " + std::to_string(g.order()) + " exceeds spectral cap " + std::to_string(opts.cap));
  SpectralReport r;
  r.n = g.order();
  r.set_size = a.count();
  r.delta = g.order() >= 2 ? delta(g) : 1;
  auto m = gram_matrix(g, a);
  r.trace = m.trace();
  auto eig = symmetric_eigenvalues(std::move(m), opts.eigen);
  r.method = eig.method;
  r.eigenvalues = std::move(eig.values);
  r.sigma_max = std::sqrt(std::max(0.0, r.eigenvalues.front()));
  r.lambda2 = r.eigenvalues.size() > 1 ? r.eigenvalues[1] : 0.0;
  r.bound = static_cast<double>(r.n) * static_cast<double>(r.set_size) / static_cast<double>(r.delta);
  r.bound_holds = r.lambda2 <= r.bound + 1e-6;
  return r;
}

namespace {

std::uint64_t solution_count(const FiniteGroup& g, const Subset& a, const Subset& b, const Subset& c) {
  std::uint64_t count = 0;
  const auto bs = b.elements();
  a.for_each([&](Element x) {
    for (Element y : bs) count += c.test(g.mul(x, y));
  });
  return count;
}

}  // namespace

TripleBoundReport check_triple_bound(const FiniteGroup& g, const SpectralReport& spec_a, const Subset& a,
                                     const Subset& b, const Subset& c) {
  TripleBoundReport r;
  const double n = static_cast<double>(g.order());
  r.solutions = solution_count(g, a, b, c);
  r.applicable = r.solutions == 0;
  r.product = static_cast<double>(a.count()) * static_cast<double>(b.count()) * static_cast<double>(c.count());
  r.lambda2 = spec_a.lambda2;
  r.spectral_rhs = a.empty() ? 0.0 : n * n * r.lambda2 / static_cast<double>(a.count());
  r.delta_rhs = n * n * n / static_cast<double>(spec_a.delta);
  const double slack = 1e-6 * n * n * n;
  r.spectral_holds = r.product <= r.spectral_rhs + slack;
  r.delta_holds = r.product <= r.delta_rhs;
  return r;
}

TripleBoundReport check_triple_bound(const FiniteGroup& g, const Subset& a, const Subset& b, const Subset& c,
                                     const SpectralOptions& opts) {
  if (a.empty()) {
    // |A||B||C| = 0; nothing to bound and no spectrum to compute.
    TripleBoundReport r;
    r.applicable = true;
    r.delta_rhs = std::pow(static_cast<double>(g.order()), 3) / static_cast<double>(delta(g));
    r.spectral_holds = r.delta_holds = true;
    return r;
  }
  return check_triple_bound(g, spectral_report(g, a, opts), a, b, c);
}

IntersectionProfile intersection_profile(const FiniteGroup& g, const Subset& a, const Subset& b) {
  IntersectionProfile p;
  const std::size_t n = g.order();
  const auto bs = b.elements();
  p.values.resize(n);
  for (Element x = 0; x < n; ++x) {
    std::size_t c = 0;
    for (Element y : bs) c += a.test(g.mul(x, y));
    p.values[x] = c;
    p.histogram[c] += 1;
    p.total += c;
  }
  p.mean = static_cast<double>(p.total) / static_cast<double>(n);
  p.identity_holds = p.total == static_cast<std::uint64_t>(a.count()) * b.count();
  return p;
}

TranslateReport check_bad_translates(const FiniteGroup& g, const Subset& a, const Subset& b, double gamma, double t) {
  if (!(gamma > 0 && gamma < 1)) throw Error(ErrorCode::invalid_argument, "gamma must lie in (0, 1)");
  if (!(t > 0)) throw Error(ErrorCode::invalid_argument, "t must be positive");
  TranslateReport r;
  const double n = static_cast<double>(g.order());
  r.delta = delta(g);
  r.r = static_cast<double>(a.count()) / n;
  r.s = static_cast<double>(b.count()) / n;
  r.gamma = gamma;
  r.t = t;
  r.hypothesis_lhs = r.r * r.s * t;
  r.hypothesis_rhs = 1.0 / (gamma * gamma * static_cast<double>(r.delta));
  r.hypothesis_holds = r.hypothesis_lhs >= r.hypothesis_rhs;
  r.threshold = (1.0 - gamma) * r.r * r.s * n;
  const auto profile = intersection_profile(g, a, b);
  for (auto v : profile.values)
    if (static_cast<double>(v) <= r.threshold + 1e-9) ++r.bad_count;
  r.allowed = t * n;
  r.conclusion_holds = static_cast<double>(r.bad_count) <= r.allowed;
  return r;
}

}  // namespace qplab
