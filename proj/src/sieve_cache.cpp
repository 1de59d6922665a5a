#include "tml/sieve_cache.hpp"

#include <array>
#include <cstdlib>
#include <cstring>
#include <fstream>

#include "tml/error.hpp"

namespace tml {

namespace {

constexpr std::array<char, 7> kMagic{'T', 'M', 'L', 'S', 'P', 'F', '1'};

template <class T>
void put_le(std::ostream& out, T v) {
  unsigned char bytes[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
T get_le(const unsigned char* bytes) {
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(bytes[i]) << (8 * i);
  return v;
}

}  // namespace

void write_prime_table(const PrimeTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.write(kMagic.data(), kMagic.size());
  put_le<u64>(out, table.limit());
  std::vector<unsigned char> buf;
  buf.reserve(table.spf().size() * 4);
  for (std::uint32_t v : table.spf())
    for (int i = 0; i < 4; ++i) buf.push_back(static_cast<unsigned char>(v >> (8 * i)));
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!out) throw Error("short write to " + path.string());
}

PrimeTable read_prime_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::array<char, 7> magic{};
  in.read(magic.data(), magic.size());
  unsigned char header[8];
  in.read(reinterpret_cast<char*>(header), 8);
  if (!in || magic != kMagic) throw Error(path.string() + " is not a TMLSPF1 file");
  const u64 limit = get_le<u64>(header);
  if (limit < 2 || limit > kMaxSieveLimit) throw BoundsError("cached sieve limit out of range");
  std::vector<unsigned char> raw((limit + 1) * 4);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (in.gcount() != static_cast<std::streamsize>(raw.size()))
    throw Error(path.string() + " is truncated");
  std::vector<std::uint32_t> spf(limit + 1);
  for (u64 i = 0; i <= limit; ++i) spf[i] = get_le<std::uint32_t>(&raw[i * 4]);
  // Entries 0 and 1 carry no factor.
  spf[0] = spf[1] = 0;
  return PrimeTable::from_spf(std::move(spf));
}

PrimeTable load_prime_table(u64 limit) {
  const char* dir = std::getenv("TML_SIEVE_CACHE");
  if (!dir || !*dir) return sieve_primes(limit);
  const std::filesystem::path path =
      std::filesystem::path(dir) / ("spf_" + std::to_string(limit) + ".bin");
  std::error_code ec;
  if (std::filesystem::exists(path, ec)) {
    try {
      return read_prime_table(path);
    } catch (const Error&) {
      // corrupt or stale; rebuild below
    }
  }
  PrimeTable table = sieve_primes(limit);
  try {
    std::filesystem::create_directories(dir, ec);
    write_prime_table(table, path);
  } catch (const Error&) {
  }
  return table;
}

}  // namespace tml
