#include "silverdt/complexity.hpp"

#include <algorithm>
#include <array>
#include <sstream>

namespace silverdt {

std::uint64_t beam_space_bound(std::uint64_t n, std::uint64_t beam) {
  if (n < 1 || beam < 1) throw DomainError("space bound needs n >= 1 and B >= 1");
  using wide = unsigned __int128;
  const wide value = wide{4} * n * n * beam + wide{4} * (n - 1) * beam * beam;
  if (value > static_cast<wide>(UINT64_MAX)) throw DomainError("space bound overflows 64 bits");
  return static_cast<std::uint64_t>(value);
}

BigInt exact_space_bound(int n) {
  if (n < 2) throw DomainError("unconstrained space bound needs n >= 2");
  BigInt total = 0;
  BigInt catalan = 1;  // C(i - 1)
  for (int i = 1; i <= n - 1; ++i) {
    total += BigInt(4) * (n - i) * catalan;
    catalan = catalan * (2 * (2 * i - 1)) / (i + 1);
  }
  return total;
}

namespace {

constexpr std::array<const char*, 11> kPrefixes = {"", "K", "M", "G", "T", "P", "E", "Z", "Y", "R", "Q"};

}  // namespace

std::string format_units(const BigInt& units) {
  if (units < 0) throw DomainError("negative unit count");
  if (units < 1000) return units.str() + "B";

  // Work on the leading three digits of the decimal expansion.
  const std::string digits = units.str();
  const int exponent = static_cast<int>(digits.size()) - 1;
  const int lead = std::stoi(digits.substr(0, 3));  // d.dd x 10^exponent scaled by 100

  int group = exponent / 3;
  int position = exponent % 3;  // digits before the decimal point minus one
  std::ostringstream out;
  if (position == 0) {
    // Mantissa in [1, 10): truncate to one decimal.
    const int tenths = lead / 10;
    out << tenths / 10 << '.' << tenths % 10;
  } else {
    // Mantissa in [10, 1000): round to two significant digits.
    int two = lead / 10;  // leading two digits
    const int third = lead % 10;
    if (third >= 5) ++two;  // half up
    if (two == 100) {
      two = 10;
      ++position;
      if (position == 3) {
        position = 0;
        ++group;
      }
    }
    if (position == 0) {
      out << two / 10 << '.' << two % 10;
    } else {
      int value = two;
      for (int k = 1; k < position; ++k) value *= 10;
      out << value;
    }
  }
  if (group >= static_cast<int>(kPrefixes.size())) {
    // Off the SI ladder: d.de<exp>, truncated.
    std::ostringstream sci;
    sci << digits[0] << '.' << digits[1] << 'e' << exponent << 'B';
    return sci.str();
  }
  out << kPrefixes[static_cast<std::size_t>(group)] << 'B';
  return out.str();
}

const BoundsEntry* BoundsTable::find(int n, std::optional<std::uint64_t> beam) const {
  for (const auto& e : entries)
    if (e.edus == n && e.beam == beam) return &e;
  return nullptr;
}

std::string BoundsTable::render() const {
  std::ostringstream out;
  constexpr int kWidth = 34;
  out << std::left;
  out.width(8);
  out << "Beam";
  for (int n : edus) {
    out.width(kWidth);
    out << (std::to_string(n) + " EDUs");
  }
  out << '\n';
  auto row = [&](std::optional<std::uint64_t> beam) {
    out.width(8);
    out << (beam ? std::to_string(*beam) : std::string("inf"));
    for (int n : edus) {
      const BoundsEntry* e = find(n, beam);
      out.width(kWidth);
      out << (e ? e->formatted + " (" + e->units.str() + ")" : std::string("-"));
    }
    out << '\n';
  };
  for (auto b : beams) row(b);
  row(std::nullopt);
  return out.str();
}

BoundsTable bounds_table(const std::vector<int>& edus, const std::vector<std::uint64_t>& beams) {
  if (edus.empty() || beams.empty()) throw DomainError("bounds table needs EDU counts and beam sizes");
  BoundsTable table{edus, beams, {}};
  for (auto b : beams) {
    for (int n : edus) {
      if (n < 1) throw DomainError("EDU count must be positive");
      BigInt units = beam_space_bound(static_cast<std::uint64_t>(n), b);
      table.entries.push_back({n, b, units, format_units(units)});
    }
  }
  for (int n : edus) {
    if (n < 2) continue;
    BigInt units = exact_space_bound(n);
    table.entries.push_back({n, std::nullopt, units, format_units(units)});
  }
  return table;
}

}  // namespace silverdt
