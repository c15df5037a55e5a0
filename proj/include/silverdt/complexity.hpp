#ifndef SILVERDT_COMPLEXITY_HPP
#define SILVERDT_COMPLEXITY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "silverdt/core.hpp"

namespace silverdt {

/// Memory units needed by beam-constrained CKY over n EDUs with beam B:
/// 4 n^2 B + 4 (n - 1) B^2. Throws DomainError for n < 1, B < 1, or when the
/// result does not fit in 64 bits.
std::uint64_t beam_space_bound(std::uint64_t n, std::uint64_t beam);

/// Memory units needed by unconstrained CKY over n EDUs:
/// sum_{i=1}^{n-1} 4 (n - i) C(i - 1). Throws DomainError for n < 2.
BigInt exact_space_bound(int n);

/// Two-significant-digit SI rendering of a unit count ("1.6KB", "24KB",
/// "920KB", "3.6GB"). Mantissas below 10 are truncated to one decimal,
/// mantissas of 10 and above are rounded to two significant digits, plain
/// byte counts print exactly. Values beyond the SI ladder use scientific
/// notation.
std::string format_units(const BigInt& units);

struct BoundsEntry {
  int edus = 0;
  std::optional<std::uint64_t> beam;  // nullopt for unconstrained CKY
  BigInt units;
  std::string formatted;
};

struct BoundsTable {
  std::vector<int> edus;
  std::vector<std::uint64_t> beams;
  std::vector<BoundsEntry> entries;  // one row per beam, then the unconstrained row

  const BoundsEntry* find(int n, std::optional<std::uint64_t> beam) const;
  /// Human-readable table: formatted value with the exact integer alongside.
  std::string render() const;
};

/// Throws DomainError when either list is empty.
BoundsTable bounds_table(const std::vector<int>& edus, const std::vector<std::uint64_t>& beams);

}  // namespace silverdt

#endif  // SILVERDT_COMPLEXITY_HPP
