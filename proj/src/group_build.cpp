#include <algorithm>
#include <cctype>
#include <charconv>
#include <unordered_map>

#include "qplab/error.hpp"
#include "qplab/group.hpp"

namespace qplab {

namespace {

struct PermHash {
  std::size_t operator()(const Permutation& p) const noexcept {
    std::size_t h = 1469598103934665603ULL;
    for (auto v : p) h = (h ^ v) * 1099511628211ULL;
    return h;
  }
};

void check_order(std::size_t n, const GroupLimits& limits) {
  if (n > limits.order_cap)
    throw Error(ErrorCode::cap_exceeded,
                "group order " + std::to_string(n) + " exceeds cap " + std::to_string(limits.order_cap));
}

// Builds the table of a permutation group whose elements are listed with the
// identity first.
FiniteGroup from_element_list(std::vector<Permutation> elems, std::string name, const GroupLimits& limits) {
  const std::size_t n = elems.size();
  check_order(n, limits);
  std::unordered_map<Permutation, Element, PermHash> index;
  index.reserve(n * 2);
  for (Element i = 0; i < n; ++i) index.emplace(elems[i], i);
  std::vector<Element> table(n * n);
  for (Element a = 0; a < n; ++a)
    for (Element b = 0; b < n; ++b) {
      auto it = index.find(compose(elems[a], elems[b]));
      if (it == index.end()) throw Error(ErrorCode::not_a_group, "element list not closed under composition");
      table[a * n + b] = it->second;
    }
  auto g = FiniteGroup::from_table(n, std::move(table), std::move(name), limits);
  g.attach_permutations(std::move(elems));
  return g;
}

std::size_t factorial(unsigned k) {
  std::size_t f = 1;
  for (unsigned i = 2; i <= k; ++i) f *= i;
  return f;
}

bool is_even(const Permutation& p) {
  std::size_t inversions = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j) inversions += p[i] > p[j];
  return inversions % 2 == 0;
}

FiniteGroup cyclic(unsigned k, const GroupLimits& limits) {
  if (k == 0) throw Error(ErrorCode::invalid_argument, "cyclic order must be positive");
  check_order(k, limits);
  std::vector<Element> t(std::size_t{k} * k);
  for (Element a = 0; a < k; ++a)
    for (Element b = 0; b < k; ++b) t[a * k + b] = (a + b) % k;
  return FiniteGroup::from_table(k, std::move(t), "C" + std::to_string(k), limits);
}

// r^i s^j stored at index i + k*j; (r^a s^b)(r^c s^d) = r^(a + (-1)^b c) s^(b+d).
FiniteGroup dihedral(unsigned k, const GroupLimits& limits) {
  if (k == 0) throw Error(ErrorCode::invalid_argument, "dihedral parameter must be positive");
  const std::size_t n = 2 * std::size_t{k};
  check_order(n, limits);
  std::vector<Element> t(n * n);
  for (Element x = 0; x < n; ++x)
    for (Element y = 0; y < n; ++y) {
      const unsigned a = x % k, b = x / k, c = y % k, d = y / k;
      const unsigned rot = b == 0 ? (a + c) % k : (a + k - c) % k;
      t[x * n + y] = rot + k * ((b + d) % 2);
    }
  return FiniteGroup::from_table(n, std::move(t), "D" + std::to_string(k), limits);
}

FiniteGroup symmetric(unsigned k, bool even_only, const GroupLimits& limits) {
  if (k == 0 || k > 12) throw Error(ErrorCode::invalid_argument, "symmetric/alternating degree must be in 1..12");
  std::size_t n = factorial(k);
  if (even_only && k >= 2) n /= 2;
  check_order(n, limits);
  Permutation p(k);
  for (unsigned i = 0; i < k; ++i) p[i] = i;
  std::vector<Permutation> elems;
  do {
    if (!even_only || is_even(p)) elems.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return from_element_list(std::move(elems), (even_only ? "A" : "S") + std::to_string(k), limits);
}

bool is_odd_prime(unsigned q) {
  if (q < 3 || q % 2 == 0) return false;
  for (unsigned d = 3; d * d <= q; d += 2)
    if (q % d == 0) return false;
  return true;
}

using Mat2 = std::array<unsigned, 4>;  // row-major a b / c d over F_q

// Canonical representative of {M, -M}: first nonzero entry <= (q-1)/2.
Mat2 projective_rep(Mat2 m, unsigned q) {
  for (unsigned v : m) {
    if (v == 0) continue;
    if (v > (q - 1) / 2)
      for (auto& e : m) e = (q - e) % q;
    break;
  }
  return m;
}

FiniteGroup special_linear(unsigned q, bool projective, const GroupLimits& limits) {
  if (!is_odd_prime(q) || q > 13) throw Error(ErrorCode::invalid_argument, "q must be an odd prime <= 13");
  const std::size_t sl_order = std::size_t{q} * (q * q - 1);
  check_order(projective ? sl_order / 2 : sl_order, limits);

  auto code = [q](const Mat2& m) { return ((m[0] * q + m[1]) * q + m[2]) * q + m[3]; };
  const Mat2 ident{1, 0, 0, 1};
  std::vector<Mat2> elems{ident};
  for (unsigned a = 0; a < q; ++a)
    for (unsigned b = 0; b < q; ++b)
      for (unsigned c = 0; c < q; ++c)
        for (unsigned d = 0; d < q; ++d) {
          if ((a * d + q * q - b * c) % q != 1) continue;
          Mat2 m{a, b, c, d};
          if (projective && projective_rep(m, q) != m) continue;
          if (m == ident) continue;
          elems.push_back(m);
        }
  const std::size_t n = elems.size();
  std::vector<Element> index(std::size_t{q} * q * q * q, UINT32_MAX);
  for (Element i = 0; i < n; ++i) index[code(elems[i])] = i;
  std::vector<Element> t(n * n);
  for (Element x = 0; x < n; ++x)
    for (Element y = 0; y < n; ++y) {
      const Mat2& u = elems[x];
      const Mat2& v = elems[y];
      Mat2 w{(u[0] * v[0] + u[1] * v[2]) % q, (u[0] * v[1] + u[1] * v[3]) % q, (u[2] * v[0] + u[3] * v[2]) % q,
             (u[2] * v[1] + u[3] * v[3]) % q};
      if (projective) w = projective_rep(w, q);
      t[x * n + y] = index[code(w)];
    }
  const std::string name = (projective ? "PSL(2," : "SL(2,") + std::to_string(q) + ")";
  return FiniteGroup::from_table(n, std::move(t), name, limits);
}

FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b, const GroupLimits& limits) {
  const std::size_t na = a.order(), nb = b.order(), n = na * nb;
  check_order(n, limits);
  std::vector<Element> t(n * n);
  for (Element x = 0; x < n; ++x)
    for (Element y = 0; y < n; ++y)
      t[x * n + y] = static_cast<Element>(a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb));
  return FiniteGroup::from_table(n, std::move(t), a.name() + " x " + b.name(), limits);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

unsigned parse_param(std::string_view s, std::string_view family) {
  s = trim(s);
  unsigned v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw Error(ErrorCode::invalid_argument, "bad parameter '" + std::string(s) + "' for family " + std::string(family));
  return v;
}

}  // namespace

FiniteGroup build_named(std::string_view spec, const GroupLimits& limits) {
  spec = trim(spec);
  if (spec.starts_with("product(")) {
    if (!spec.ends_with(")")) throw Error(ErrorCode::invalid_argument, "unterminated product(...)");
    const std::string_view inner = spec.substr(8, spec.size() - 9);
    int depth = 0;
    for (std::size_t i = 0; i < inner.size(); ++i) {
      if (inner[i] == '(') ++depth;
      if (inner[i] == ')') --depth;
      if (inner[i] == ',' && depth == 0) {
        // Factors are built with a generous cap; the product is checked below.
        GroupLimits factor_limits = limits;
        auto a = build_named(inner.substr(0, i), factor_limits);
        auto b = build_named(inner.substr(i + 1), factor_limits);
        return direct_product(a, b, limits);
      }
    }
    throw Error(ErrorCode::invalid_argument, "product(...) needs two comma-separated factors");
  }
  const auto sep = spec.find_first_of(": ");
  if (sep == std::string_view::npos)
    throw Error(ErrorCode::invalid_argument, "family descriptor must look like <family>:<parameter>");
  const std::string_view family = spec.substr(0, sep);
  const unsigned k = parse_param(spec.substr(sep + 1), family);
  if (family == "cyclic") return cyclic(k, limits);
  if (family == "dihedral") return dihedral(k, limits);
  if (family == "symmetric") return symmetric(k, false, limits);
  if (family == "alternating") return symmetric(k, true, limits);
  if (family == "sl2") return special_linear(k, false, limits);
  if (family == "psl2") return special_linear(k, true, limits);
  throw Error(ErrorCode::invalid_argument, "unknown family '" + std::string(family) + "'");
}

std::pair<FiniteGroup, PermutationAction> from_generators(std::span<const Permutation> generators,
                                                          const GroupLimits& limits) {
  if (generators.empty()) throw Error(ErrorCode::invalid_argument, "at least one generator is required");
  const std::size_t d = generators.front().size();
  if (d == 0) throw Error(ErrorCode::invalid_argument, "permutation degree must be positive");
  for (const auto& p : generators)
    if (p.size() != d || !is_permutation(p))
      throw Error(ErrorCode::invalid_argument, "generator is not a permutation of degree " + std::to_string(d));

  Permutation ident(d);
  for (std::uint32_t i = 0; i < d; ++i) ident[i] = i;
  std::vector<Permutation> elems{ident};
  std::unordered_map<Permutation, Element, PermHash> seen{{ident, 0}};
  for (std::size_t qi = 0; qi < elems.size(); ++qi) {
    for (const auto& s : generators) {
      Permutation next = compose(elems[qi], s);
      if (seen.contains(next)) continue;
      if (elems.size() >= limits.order_cap)
        throw Error(ErrorCode::cap_exceeded, "generated group exceeds order cap " + std::to_string(limits.order_cap));
      seen.emplace(next, static_cast<Element>(elems.size()));
      elems.push_back(std::move(next));
    }
  }
  const std::string name = "perm" + std::to_string(d) + "[" + std::to_string(elems.size()) + "]";
  auto g = from_element_list(std::move(elems), name, limits);
  auto act = natural_action(g);
  return {std::move(g), std::move(act)};
}

}  // namespace qplab
