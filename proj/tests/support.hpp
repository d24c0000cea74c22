#pragma once

#include <random>

#include "rfg/catalog.hpp"
#include "rfg/word.hpp"

namespace testing_support {

inline const rfg::Catalog& catalog16() {
  static const rfg::Catalog c = rfg::catalog_build(16);
  return c;
}

/// Uniform random word of the given raw length over `rank` generators.
inline rfg::Word random_word(std::mt19937_64& rng, std::size_t rank, std::size_t len) {
  std::uniform_int_distribution<int> gen(0, static_cast<int>(rank) - 1), sign(0, 1);
  std::vector<rfg::Letter> raw;
  for (std::size_t i = 0; i < len; ++i)
    raw.push_back({static_cast<std::uint8_t>(gen(rng)), static_cast<std::int8_t>(sign(rng) ? 1 : -1)});
  return rfg::Word::reduce(raw, rank);
}

}  // namespace testing_support
