#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "catalog.hpp"
#include "doctest.h"
#include "qplab/error.hpp"
#include "qplab/repr.hpp"
#include "qplab/rng.hpp"
#include "qplab/spectral.hpp"

using namespace qplab;

namespace {

SymmetricMatrix random_symmetric(std::size_t n, Rng& rng) {
  SymmetricMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) m(i, j) = m(j, i) = rng.unit() * 2 - 1;
  return m;
}

std::vector<double> reference_eigenvalues(const SymmetricMatrix& m) {
  Eigen::MatrixXd a(m.n, m.n);
  for (std::size_t i = 0; i < m.n; ++i)
    for (std::size_t j = 0; j < m.n; ++j) a(i, j) = m(i, j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
  std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + m.n);
  std::sort(v.rbegin(), v.rend());
  return v;
}

Subset random_subset(std::size_t n, Rng& rng) {
  const auto k = static_cast<std::uint32_t>(1 + rng.below(n));
  return Subset::of(n, rng.sample(static_cast<std::uint32_t>(n), k));
}

}  // namespace

TEST_CASE("eigensolvers agree with a reference decomposition") {
  Rng rng(11);
  for (std::size_t n : {1u, 2u, 3u, 8u, 40u, 150u}) {
    CAPTURE(n);
    const auto m = random_symmetric(n, rng);
    const auto ref = reference_eigenvalues(m);
    for (auto method : {EigenMethod::jacobi, EigenMethod::householder_ql}) {
      EigenOptions o;
      o.method = method;
      const auto r = symmetric_eigenvalues(m, o);
      REQUIRE(r.values.size() == n);
      CHECK(r.method == method);
      for (std::size_t i = 0; i < n; ++i) CHECK(r.values[i] == doctest::Approx(ref[i]).epsilon(1e-9).scale(10));
    }
  }
}

TEST_CASE("automatic method switches at the documented size") {
  Rng rng(3);
  CHECK(symmetric_eigenvalues(random_symmetric(kJacobiAutoLimit, rng)).method == EigenMethod::jacobi);
  CHECK(symmetric_eigenvalues(random_symmetric(kJacobiAutoLimit + 1, rng)).method == EigenMethod::householder_ql);
}

TEST_CASE("degenerate spectra") {
  SymmetricMatrix zero(5);
  for (auto method : {EigenMethod::jacobi, EigenMethod::householder_ql}) {
    EigenOptions o;
    o.method = method;
    for (double v : symmetric_eigenvalues(zero, o).values) CHECK(v == 0.0);
    SymmetricMatrix ones(6);
    for (auto& x : ones.a) x = 1.0;
    const auto r = symmetric_eigenvalues(ones, o);
    CHECK(r.values[0] == doctest::Approx(6.0));
    for (std::size_t i = 1; i < 6; ++i) CHECK(std::fabs(r.values[i]) < 1e-12);
  }
}

TEST_CASE("gram matrix equals N N^T") {
  Rng rng(5);
  const auto g = build_named("symmetric:4");
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = random_subset(g.order(), rng);
    const auto inc = incidence(g, a);
    const auto m = gram_matrix(g, a);
    for (Element x = 0; x < g.order(); ++x) {
      std::size_t row = 0;
      for (Element y = 0; y < g.order(); ++y) row += inc(x, y);
      CHECK(row == a.count());
      for (Element z = 0; z < g.order(); ++z) {
        double s = 0;
        for (Element y = 0; y < g.order(); ++y) s += inc(x, y) * inc(z, y);
        CHECK(m(x, z) == s);
      }
    }
  }
}

TEST_CASE("cyclic spectra are squared Fourier coefficients") {
  Rng rng(9);
  const std::size_t n = 15;
  const auto g = build_named("cyclic:15");
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = random_subset(n, rng);
    std::vector<double> expect;
    for (std::size_t k = 0; k < n; ++k) {
      std::complex<double> s = 0;
      a.for_each([&](Element x) { s += std::polar(1.0, 2 * std::numbers::pi * double(x * k) / double(n)); });
      expect.push_back(std::norm(s));
    }
    std::sort(expect.rbegin(), expect.rend());
    const auto r = spectral_report(g, a);
    for (std::size_t i = 0; i < n; ++i) CHECK(r.eigenvalues[i] == doctest::Approx(expect[i]).scale(1));
  }
}

TEST_CASE("spectral invariants on catalog groups up to 200") {
  Rng rng(kDefaultSeed);
  for (const auto& e : testing::catalog()) {
    if (e.order > 200) continue;
    CAPTURE(e.label);
    const auto g = testing::catalog_group(e);
    for (int trial = 0; trial < 5; ++trial) {
      const auto a = random_subset(g.order(), rng);
      const auto r = spectral_report(g, a);
      const double sz = static_cast<double>(a.count());
      CHECK(r.sigma_max == doctest::Approx(sz).epsilon(1e-8));
      CHECK(r.trace == doctest::Approx(g.order() * sz).epsilon(1e-8));
      CHECK(r.bound_holds);
      CHECK(r.delta == e.delta);
    }
  }
}

TEST_CASE("full set has a rank-one gram matrix") {
  const auto g = build_named("psl2:7");
  const auto r = spectral_report(g, Subset::full(g.order()));
  CHECK(r.eigenvalues[0] == doctest::Approx(168.0 * 168.0));
  CHECK(std::fabs(r.lambda2) < 1e-6);
}

TEST_CASE("spectral errors") {
  const auto g = build_named("cyclic:5");
  CHECK_THROWS_AS(spectral_report(g, Subset(5)), Error);
  SpectralOptions o;
  o.cap = 4;
  try {
    spectral_report(g, Subset::full(5), o);
    FAIL("expected cap error");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::cap_exceeded);
  }
}

TEST_CASE("triple bounds on solution-free triples") {
  const auto g = build_named("psl2:7");
  Rng rng(21);
  int tested = 0;
  for (int trial = 0; trial < 30; ++trial) {
    auto a = random_subset(g.order(), rng), b = random_subset(g.order(), rng), c = random_subset(g.order(), rng);
    // Trim C until no ab lands in it.
    a.for_each([&](Element x) { b.for_each([&](Element y) { c.reset(g.mul(x, y)); }); });
    const auto r = check_triple_bound(g, a, b, c);
    CHECK(r.applicable);
    CHECK(r.solutions == 0);
    CHECK(r.spectral_holds);
    CHECK(r.delta_holds);
    ++tested;
  }
  CHECK(tested == 30);
  const auto s = Subset::full(g.order());
  CHECK_FALSE(check_triple_bound(g, s, s, s).applicable);
}

TEST_CASE("intersection profile") {
  const auto g = build_named("alternating:4");
  Rng rng(4);
  const auto a = random_subset(12, rng), b = random_subset(12, rng);
  const auto p = intersection_profile(g, a, b);
  CHECK(p.total == a.count() * b.count());
  CHECK(p.identity_holds);
  for (Element x = 0; x < 12; ++x) {
    std::size_t c = 0;
    b.for_each([&](Element y) { c += a.test(g.mul(x, y)); });
    CHECK(p.values[x] == c);
  }
}

TEST_CASE("few bad translates") {
  const auto g = build_named("psl2:7");
  const auto full = Subset::full(g.order());
  const auto r = check_bad_translates(g, full, full, 0.9, 0.5);  // r s t = 1/2 >= 1/(0.81 * 3)
  CHECK(r.hypothesis_holds);
  CHECK(r.bad_count == 0);
  CHECK(r.conclusion_holds);
}
