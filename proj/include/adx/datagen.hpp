#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>

#include "adx/table.hpp"

namespace adx {

/// Number of rows per value 1..10 of the first synthetic attribute: value i
/// gets floor(rows * 10^(i-1) / S) rows with S = sum of the weights; leftover
/// rows go to the largest fractional parts, ties to the larger value.
std::array<std::uint64_t, 10> synthetic_value_counts(std::uint64_t rows);

/// Six int64 attributes a..f. `a` follows synthetic_value_counts, the others
/// are uniform in [0, 2^31). Rows are shuffled with the seed.
Table gen_synthetic(std::uint64_t rows, std::uint64_t seed);

/// Nine attributes modeled on web-log visits, mostly fixed-width strings.
/// searchWord is uniform over kSearchWords words "w00000".."w09999".
Table gen_uservisits(std::uint64_t rows, std::uint64_t seed);

inline constexpr std::uint32_t kSearchWords = 10000;

std::string search_word(std::uint32_t k);

/// Closed searchWord range covering `fraction` of the vocabulary, starting at `first`.
std::pair<std::string, std::string> search_word_range(double fraction, std::uint32_t first = 0);

}  // namespace adx
