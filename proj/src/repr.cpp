#include "qplab/repr.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "qplab/error.hpp"
#include "qplab/rng.hpp"

namespace qplab {

std::vector<ClassMatrix> class_matrices(const FiniteGroup& g, const ConjugacyPartition& p) {
  const std::size_t k = p.classes.size();
  std::vector<ClassMatrix> out(k);
  for (auto& m : out) {
    m.k = k;
    m.a.assign(k * k, 0);
  }
  for (std::size_t l = 0; l < k; ++l) {
    const Element c = p.classes[l].front();
    for (Element a = 0; a < g.order(); ++a) {
      const Element b = g.mul(g.inv(a), c);
      out[p.class_of[a]].a[p.class_of[b] * k + l] += 1;
    }
  }
  return out;
}

namespace {

struct Attempt {
  bool ok = false;
  CharacterDegreeTable table;
  std::string why;
};

Attempt try_seed(const FiniteGroup& g, const ConjugacyPartition& p, const std::vector<ClassMatrix>& mats,
                 std::uint64_t seed, double tol) {
  using Eigen::MatrixXd;
  using CVec = Eigen::VectorXcd;
  const auto k = static_cast<Eigen::Index>(mats.size());
  Attempt at;
  at.table.seed_used = seed;

  std::vector<MatrixXd> dense;
  dense.reserve(mats.size());
  for (const auto& m : mats) {
    MatrixXd d(k, k);
    for (Eigen::Index r = 0; r < k; ++r)
      for (Eigen::Index c = 0; c < k; ++c) d(r, c) = static_cast<double>(m(r, c));
    dense.push_back(std::move(d));
  }
  Rng rng(seed);
  MatrixXd combo = MatrixXd::Zero(k, k);
  for (const auto& d : dense) combo += (2.0 * rng.unit() - 1.0) * d;

  Eigen::EigenSolver<MatrixXd> solver(combo, true);
  if (solver.info() != Eigen::Success) {
    at.why = "eigensolver failed";
    return at;
  }
  const auto vectors = solver.eigenvectors();
  const double n = static_cast<double>(g.order());
  std::vector<double> raw;
  double eig_res = 0;
  for (Eigen::Index col = 0; col < k; ++col) {
    CVec w = vectors.col(col);
    if (std::abs(w(0)) < 1e-8 * w.norm()) {
      at.why = "eigenvector vanishes on the identity class";
      return at;
    }
    w /= w(0);
    double denom = 0;
    for (Eigen::Index i = 0; i < k; ++i) {
      // Refine omega_i against M_i itself rather than trusting the entry.
      const CVec mw = dense[static_cast<std::size_t>(i)].cast<std::complex<double>>() * w;
      const std::complex<double> omega = w.dot(mw) / w.squaredNorm();
      eig_res = std::max(eig_res, (mw - omega * w).norm() / w.norm());
      denom += std::norm(omega) / static_cast<double>(p.sizes[static_cast<std::size_t>(i)]);
    }
    raw.push_back(std::sqrt(n / denom));
  }
  double residual = 0;
  std::vector<std::size_t> degrees;
  std::size_t sum_sq = 0;
  for (double d : raw) {
    const double r = std::round(d);
    residual = std::max(residual, std::abs(d - r));
    const auto di = static_cast<std::size_t>(std::max(r, 0.0));
    degrees.push_back(di);
    sum_sq += di * di;
  }
  std::sort(degrees.begin(), degrees.end());
  at.table.degrees = degrees;
  at.table.residual = residual;
  at.table.eigen_residual = eig_res;
  if (residual >= tol || eig_res >= tol) {
    at.why = "residual " + std::to_string(std::max(residual, eig_res)) + " above tolerance";
    return at;
  }
  if (sum_sq != g.order() || degrees.empty() || degrees.front() != 1) {
    at.why = "sum of squared degrees " + std::to_string(sum_sq) + " != group order";
    return at;
  }
  at.table.delta = degrees.size() > 1 ? *std::min_element(degrees.begin() + 1, degrees.end()) : 0;
  at.ok = true;
  return at;
}

}  // namespace

CharacterDegreeTable character_degrees(const FiniteGroup& g, const DegreeOptions& opts) {
  if (g.order() < 2) throw Error(ErrorCode::invalid_argument, "character degrees need a group of order >= 2");
  const auto partition = conjugacy_classes(g);
  const auto mats = class_matrices(g, partition);
  std::string last;
  for (auto seed : opts.seeds) {
    auto at = try_seed(g, partition, mats, seed, opts.tolerance);
    if (at.ok) return at.table;
    last = at.why;
  }
  throw Error(ErrorCode::numeric, "degenerate diagonalization (" + last + "); retry with a different seed schedule");
}

std::size_t delta(const FiniteGroup& g) {
  static std::mutex mu;
  static std::map<std::uint64_t, std::size_t> cache;
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(g.hash()); it != cache.end()) return it->second;
  }
  const std::size_t d = character_degrees(g).delta;
  std::lock_guard lock(mu);
  cache.emplace(g.hash(), d);
  return d;
}

}  // namespace qplab
