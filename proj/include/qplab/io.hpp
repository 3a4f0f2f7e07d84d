#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "qplab/group.hpp"

namespace qplab {

// Cayley table text (".cay"): n, then n rows of n 0-based indices. Lines
// starting with '#' are comments.
FiniteGroup parse_cayley_table(std::istream& in, const GroupLimits& limits = {});
FiniteGroup read_cayley_table(const std::filesystem::path& path, const GroupLimits& limits = {});
void write_cayley_table(std::ostream& out, const FiniteGroup& g);
void write_cayley_table(const std::filesystem::path& path, const FiniteGroup& g);

/// Raw parse without group validation; used by `group validate`.
std::pair<std::size_t, std::vector<Element>> parse_raw_table(std::istream& in);

// Generator file (".gens"): degree d, then one permutation per line in
// one-line image notation.
std::vector<Permutation> parse_generators(std::istream& in);
std::vector<Permutation> read_generators(const std::filesystem::path& path);

// Subset file (".set"): one element index per line, '#' comments.
Subset parse_subset(std::istream& in, std::size_t universe);
Subset read_subset(const std::filesystem::path& path, std::size_t universe);
void write_subset(std::ostream& out, const Subset& s);

/// Loads a .cay or .gens file, or builds a family descriptor otherwise.
FiniteGroup load_group(const std::string& source, const GroupLimits& limits = {});

}  // namespace qplab

#include "qplab/multiparty.hpp"

namespace qplab {

// System file (".sys.json"):
//   {"group": "g.cay", "m": 3,
//    "constraints": [{"F": [1, 2], "set": "a12.set"}, {"F": [3], "set": "FULL"}]}
// Set paths and the group path are relative to the system file; "set" may
// also be an inline array of element indices.
DensitySystem read_density_system(const std::filesystem::path& path, const GroupLimits& limits = {});

// Threshold table (".json"): {"f": {"2": 2.0, "3": 9.9}} or {"f": [f(2), f(3), ...]}.
FTable read_f_table(const std::filesystem::path& path);

}  // namespace qplab
