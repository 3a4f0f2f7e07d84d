#include "qplab/io.hpp"

#include <fstream>
#include <sstream>

#include "qplab/error.hpp"

namespace qplab {

namespace {

// Yields non-comment, non-blank lines with their 1-based line numbers.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++number_;
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      return true;
    }
    return false;
  }
  std::size_t number() const { return number_; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::parse, "line " + std::to_string(number_) + ": " + msg);
  }

 private:
  std::istream& in_;
  std::size_t number_ = 0;
};

std::vector<std::uint64_t> parse_numbers(const std::string& line, LineReader& reader) {
  std::istringstream ss(line);
  std::vector<std::uint64_t> out;
  std::string tok;
  while (ss >> tok) {
    std::uint64_t v = 0;
    std::size_t used = 0;
    try {
      if (tok.front() == '-') throw std::invalid_argument("negative");
      v = std::stoull(tok, &used);
    } catch (const std::exception&) {
      reader.fail("expected a non-negative integer, got '" + tok + "'");
    }
    if (used != tok.size()) reader.fail("expected a non-negative integer, got '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot read " + path.string());
  return in;
}

}  // namespace

std::pair<std::size_t, std::vector<Element>> parse_raw_table(std::istream& in) {
  LineReader reader(in);
  std::string line;
  if (!reader.next(line)) reader.fail("missing group order");
  const auto head = parse_numbers(line, reader);
  if (head.size() != 1 || head[0] == 0) reader.fail("first line must be the group order n >= 1");
  const std::size_t n = head[0];
  if (n > 100000) reader.fail("group order too large");
  std::vector<Element> table;
  table.reserve(n * n);
  for (std::size_t r = 0; r < n; ++r) {
    if (!reader.next(line)) reader.fail("expected " + std::to_string(n) + " table rows, got " + std::to_string(r));
    const auto row = parse_numbers(line, reader);
    if (row.size() != n) reader.fail("row has " + std::to_string(row.size()) + " entries, expected " + std::to_string(n));
    for (auto v : row) {
      if (v >= n) reader.fail("entry " + std::to_string(v) + " out of range 0.." + std::to_string(n - 1));
      table.push_back(static_cast<Element>(v));
    }
  }
  if (reader.next(line)) reader.fail("trailing data after table");
  return {n, std::move(table)};
}

FiniteGroup parse_cayley_table(std::istream& in, const GroupLimits& limits) {
  auto [n, table] = parse_raw_table(in);
  return FiniteGroup::from_table(n, std::move(table), {}, limits);
}

FiniteGroup read_cayley_table(const std::filesystem::path& path, const GroupLimits& limits) {
  auto in = open_input(path);
  auto [n, table] = parse_raw_table(in);
  return FiniteGroup::from_table(n, std::move(table), path.stem().string(), limits);
}

void write_cayley_table(std::ostream& out, const FiniteGroup& g) {
  if (!g.name().empty()) out << "# " << g.name() << "\n";
  const std::size_t n = g.order();
  out << n << "\n";
  for (Element a = 0; a < n; ++a) {
    for (Element b = 0; b < n; ++b) out << (b ? " " : "") << g.mul(a, b);
    out << "\n";
  }
}

void write_cayley_table(const std::filesystem::path& path, const FiniteGroup& g) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io, "cannot write " + path.string());
  write_cayley_table(out, g);
}

std::vector<Permutation> parse_generators(std::istream& in) {
  LineReader reader(in);
  std::string line;
  if (!reader.next(line)) reader.fail("missing degree");
  const auto head = parse_numbers(line, reader);
  if (head.size() != 1 || head[0] == 0 || head[0] > 4096) reader.fail("first line must be the degree d >= 1");
  const std::size_t d = head[0];
  std::vector<Permutation> gens;
  while (reader.next(line)) {
    const auto vals = parse_numbers(line, reader);
    if (vals.size() != d) reader.fail("permutation must list " + std::to_string(d) + " images");
    Permutation p(vals.begin(), vals.end());
    if (!is_permutation(p)) reader.fail("not a permutation of 0.." + std::to_string(d - 1));
    gens.push_back(std::move(p));
  }
  if (gens.empty()) {
    Permutation ident(d);
    for (std::uint32_t i = 0; i < d; ++i) ident[i] = i;
    gens.push_back(std::move(ident));
  }
  return gens;
}

std::vector<Permutation> read_generators(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_generators(in);
}

Subset parse_subset(std::istream& in, std::size_t universe) {
  LineReader reader(in);
  Subset s(universe);
  std::string line;
  while (reader.next(line)) {
    for (auto v : parse_numbers(line, reader)) {
      if (v >= universe) reader.fail("element " + std::to_string(v) + " outside group of order " + std::to_string(universe));
      s.set(static_cast<Element>(v));
    }
  }
  return s;
}

Subset read_subset(const std::filesystem::path& path, std::size_t universe) {
  auto in = open_input(path);
  try {
    return parse_subset(in, universe);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void write_subset(std::ostream& out, const Subset& s) {
  s.for_each([&](Element x) { out << x << "\n"; });
}

FiniteGroup load_group(const std::string& source, const GroupLimits& limits) {
  const std::filesystem::path path(source);
  if (path.extension() == ".cay") return read_cayley_table(path, limits);
  if (path.extension() == ".gens") {
    const auto gens = read_generators(path);
    auto g = from_generators(gens, limits).first;
    return g;
  }
  return build_named(source, limits);
}

}  // namespace qplab
