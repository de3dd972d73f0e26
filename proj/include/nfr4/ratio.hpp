#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace nfr4 {

/// Non-negative exact ratio. Metrics are kept as counts and only turned into
/// decimal text at the edges, so golden outputs never depend on float printing.
struct Ratio {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  bool operator==(const Ratio&) const = default;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  /// Decimal text rounded half-up to `places` digits, e.g. 2/3 -> "0.6667".
  std::string fixed(unsigned places = 4) const {
    if (den == 0) throw std::domain_error("ratio with zero denominator");
    std::uint64_t scale = 1;
    for (unsigned i = 0; i < places; ++i) scale *= 10;
    unsigned __int128 scaled = (static_cast<unsigned __int128>(num) * scale * 2 + den) / (2 * static_cast<unsigned __int128>(den));
    auto whole = static_cast<std::uint64_t>(scaled / scale);
    auto frac = static_cast<std::uint64_t>(scaled % scale);
    std::string out = std::to_string(whole);
    if (places == 0) return out;
    std::string digits = std::to_string(frac);
    return out + "." + std::string(places - digits.size(), '0') + digits;
  }
};

}  // namespace nfr4
