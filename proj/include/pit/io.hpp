#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pit/roabp.hpp"
#include "pit/verify.hpp"

namespace pit {

inline constexpr const char* kCircuitFormat = "pit-circuit/1";

struct CircuitFile {
  Instance instance;
  std::vector<std::string> names;  // variable names, index order
};

// A modulus override reduces every residue into the new field.
CircuitFile parse_circuit(const std::string& text, std::optional<std::uint64_t> modulus = std::nullopt);
CircuitFile load_circuit(const std::string& path, std::optional<std::uint64_t> modulus = std::nullopt);

// Canonical form: sorted keys, reduced residues, terms in exponent order. Empty names mean x1, x2, ...
std::string dump_circuit(const Instance& inst, const std::vector<std::string>& names = {});
void save_circuit(const Instance& inst, const std::string& path, const std::vector<std::string>& names = {});

// "# key: value" header lines (generator, n, size, then provenance parameters),
// then one comma-separated point per line.
void write_points(const PointSet& points, std::ostream& out);
void save_points(const PointSet& points, const std::string& path);
PointSet read_points(std::istream& in);
PointSet load_points(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace pit
