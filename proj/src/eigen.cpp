#include "qplab/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "qplab/error.hpp"

namespace qplab {

double SymmetricMatrix::frobenius() const {
  double s = 0;
  for (double v : a) s += v * v;
  return std::sqrt(s);
}

double SymmetricMatrix::trace() const {
  double s = 0;
  for (std::size_t i = 0; i < n; ++i) s += a[i * n + i];
  return s;
}

const char* to_string(EigenMethod m) noexcept {
  switch (m) {
    case EigenMethod::jacobi: return "jacobi";
    case EigenMethod::householder_ql: return "householder_ql";
    case EigenMethod::automatic: return "automatic";
  }
  return "unknown";
}

namespace {

double off_diagonal_mass(const SymmetricMatrix& m) {
  double s = 0;
  for (std::size_t i = 0; i < m.n; ++i)
    for (std::size_t j = 0; j < m.n; ++j)
      if (i != j) s += m.a[i * m.n + j] * m.a[i * m.n + j];
  return std::sqrt(s);
}

EigenResult jacobi(SymmetricMatrix m, const EigenOptions& opts) {
  const std::size_t n = m.n;
  const double target = opts.relative_tolerance * m.frobenius();
  EigenResult res;
  res.method = EigenMethod::jacobi;
  double* a = m.a.data();
  for (int sweep = 0;; ++sweep) {
    if (off_diagonal_mass(m) <= target) {
      res.sweeps = sweep;
      break;
    }
    if (sweep >= opts.max_sweeps)
      throw Error(ErrorCode::numeric, "Jacobi iteration did not converge in " + std::to_string(opts.max_sweeps) + " sweeps");
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k * n + p], akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p * n + k], aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
        a[p * n + q] = a[q * n + p] = 0.0;
      }
    }
  }
  res.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) res.values[i] = a[i * n + i];
  return res;
}

// Reduces m to tridiagonal form in place: diag[k], sub[k] couples k and k+1.
void tridiagonalize(SymmetricMatrix& m, std::vector<double>& diag, std::vector<double>& sub) {
  const std::size_t n = m.n;
  double* a = m.a.data();
  diag.assign(n, 0.0);
  sub.assign(n, 0.0);
  std::vector<double> v(n), w(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t lo = k + 1;
    double norm2 = 0;
    for (std::size_t i = lo; i < n; ++i) norm2 += a[i * n + k] * a[i * n + k];
    const double x0 = a[lo * n + k];
    const double norm = std::sqrt(norm2);
    const double tail2 = norm2 - x0 * x0;
    diag[k] = a[k * n + k];
    if (tail2 <= 1e-300 * (1.0 + norm2)) {
      sub[k] = x0;
      continue;
    }
    const double alpha = x0 > 0 ? -norm : norm;
    for (std::size_t i = lo; i < n; ++i) v[i] = a[i * n + k];
    v[lo] -= alpha;
    double vnorm2 = 0;
    for (std::size_t i = lo; i < n; ++i) vnorm2 += v[i] * v[i];
    const double inv = 1.0 / std::sqrt(vnorm2);
    for (std::size_t i = lo; i < n; ++i) v[i] *= inv;
    // p = A v on the trailing block, K = v.p, w = p - K v.
    double kdot = 0;
    for (std::size_t i = lo; i < n; ++i) {
      const double* row = a + i * n;
      double s = 0;
      for (std::size_t j = lo; j < n; ++j) s += row[j] * v[j];
      w[i] = s;
      kdot += v[i] * s;
    }
    for (std::size_t i = lo; i < n; ++i) w[i] -= kdot * v[i];
    for (std::size_t i = lo; i < n; ++i) {
      double* row = a + i * n;
      const double vi = 2.0 * v[i], wi = 2.0 * w[i];
      for (std::size_t j = lo; j < n; ++j) row[j] -= vi * w[j] + wi * v[j];
    }
    sub[k] = alpha;
  }
  if (n >= 2) {
    diag[n - 2] = a[(n - 2) * n + n - 2];
    sub[n - 2] = a[(n - 1) * n + n - 2];
  }
  if (n >= 1) diag[n - 1] = a[(n - 1) * n + n - 1];
  if (n >= 1) sub[n - 1] = 0.0;
}

// Implicit QL with Wilkinson-style shifts on a symmetric tridiagonal matrix.
int tridiagonal_ql(std::vector<double>& d, std::vector<double>& e) {
  const std::size_t n = d.size();
  constexpr int kMaxIter = 60;
  int worst = 0;
  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
      }
      if (m != l) {
        if (++iter > kMaxIter) throw Error(ErrorCode::numeric, "tridiagonal QL did not converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        bool underflow = false;
        for (std::size_t i = m; i-- > l;) {
          const double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
    worst = std::max(worst, iter);
  }
  return worst;
}

}  // namespace

EigenResult symmetric_eigenvalues(SymmetricMatrix m, const EigenOptions& opts) {
  EigenMethod method = opts.method;
  if (method == EigenMethod::automatic)
    method = m.n <= kJacobiAutoLimit ? EigenMethod::jacobi : EigenMethod::householder_ql;
  EigenResult res;
  if (method == EigenMethod::jacobi) {
    res = jacobi(std::move(m), opts);
  } else {
    std::vector<double> d, e;
    tridiagonalize(m, d, e);
    res.sweeps = tridiagonal_ql(d, e);
    res.values = std::move(d);
    res.method = EigenMethod::householder_ql;
  }
  std::sort(res.values.begin(), res.values.end(), std::greater<>());
  return res;
}

}  // namespace qplab
