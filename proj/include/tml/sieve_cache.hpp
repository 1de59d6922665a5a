#pragma once

#include <filesystem>

#include "tml/arith.hpp"

namespace tml {

// Binary layout: "TMLSPF1", little-endian u64 limit, then spf[0..limit] as
// little-endian u32 words.
void write_prime_table(const PrimeTable& table, const std::filesystem::path& path);
PrimeTable read_prime_table(const std::filesystem::path& path);

// Sieves up to limit, going through $TML_SIEVE_CACHE/spf_<limit>.bin when the
// variable names a directory. Cache failures fall back to sieving.
PrimeTable load_prime_table(u64 limit);

}  // namespace tml
