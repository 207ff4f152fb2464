#include "shearlab/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>

#include "shearlab/errors.hpp"
#include "shearlab/io.hpp"

namespace shearlab {

namespace {

constexpr char kMagic[8] = {'S', 'H', 'L', 'B', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::string& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
  }
  out.append(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T get(const std::string& in, std::size_t& pos) {
  if (pos + sizeof(T) > in.size()) throw ValidationError("truncated checkpoint");
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, in.data() + pos, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
  }
  pos += sizeof(T);
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace

std::string encode_checkpoint(const Checkpoint& ck) {
  std::string out(kMagic, sizeof kMagic);
  put<std::uint32_t>(out, kVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(ck.grid.nz()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(ck.grid.nv()));
  put<double>(out, ck.grid.lv());
  put<double>(out, ck.nu);
  put<double>(out, ck.regularity);
  put<double>(out, ck.t);
  put<std::uint32_t>(out, ck.frame == Frame::couette ? 0u : 1u);
  for (const Complex& c : ck.f.coeffs()) {
    put<double>(out, c.real());
    put<double>(out, c.imag());
  }
  return out;
}

Checkpoint decode_checkpoint(const std::string& bytes) {
  if (bytes.size() < sizeof kMagic || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) {
    throw ValidationError("not a shearlab checkpoint");
  }
  std::size_t pos = sizeof kMagic;
  const auto version = get<std::uint32_t>(bytes, pos);
  if (version != kVersion) throw ValidationError("unsupported checkpoint version");
  const auto nz = get<std::uint32_t>(bytes, pos);
  const auto nv = get<std::uint32_t>(bytes, pos);
  const double lv = get<double>(bytes, pos);
  Checkpoint ck;
  ck.grid = FrequencyGrid(static_cast<int>(nz), static_cast<int>(nv), lv);
  ck.nu = get<double>(bytes, pos);
  ck.regularity = get<double>(bytes, pos);
  ck.t = get<double>(bytes, pos);
  const auto frame = get<std::uint32_t>(bytes, pos);
  if (frame > 1) throw ValidationError("bad frame tag in checkpoint");
  ck.frame = frame == 0 ? Frame::couette : Frame::general;
  std::vector<Complex> coeffs(ck.grid.size());
  for (auto& c : coeffs) {
    const double re = get<double>(bytes, pos);
    const double im = get<double>(bytes, pos);
    c = {re, im};
  }
  if (pos != bytes.size()) throw ValidationError("trailing bytes in checkpoint");
  ck.f = SpectralField(ck.grid, std::move(coeffs));
  return ck;
}

void write_checkpoint(const std::string& path, const Checkpoint& ck) {
  atomic_write(path, encode_checkpoint(ck));
}

Checkpoint read_checkpoint(const std::string& path) { return decode_checkpoint(read_file(path)); }

}  // namespace shearlab
