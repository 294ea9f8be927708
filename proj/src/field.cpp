#include "rvlab/field.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <vector>

namespace rvlab {

namespace {

constexpr char kMagic[4] = {'R', 'V', 'L', 'B'};

void put_u32(std::string& buf, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& buf, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& buf, double v) {
  put_u64(buf, std::bit_cast<std::uint64_t>(v));
}

struct Reader {
  const std::string& buf;
  std::size_t pos = 0;

  void need(std::size_t nbytes) const {
    if (pos + nbytes > buf.size())
      throw SnapshotError("snapshot truncated: expected " +
                          std::to_string(pos + nbytes) + " bytes, have " +
                          std::to_string(buf.size()));
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf[pos + i])) << (8 * i);
    pos += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[pos + i])) << (8 * i);
    pos += 8;
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(buf[pos++]);
  }
};

std::string encode(const Grid& grid, double z, const Eigen::ArrayXcd& values) {
  std::string buf;
  buf.reserve(41 + 16 * static_cast<std::size_t>(values.size()));
  buf.append(kMagic, 4);
  put_u32(buf, kSnapshotVersion);
  buf.push_back(static_cast<char>(kind(grid)));
  put_u64(buf, static_cast<std::uint64_t>(sample_count(grid)));
  if (const auto* p = std::get_if<Grid1D>(&grid)) {
    put_f64(buf, p->x_min);
    put_f64(buf, p->x_max);
  } else {
    const auto& r = std::get<RadialGrid>(grid);
    put_f64(buf, 0.0);
    put_f64(buf, r.r_max);
  }
  put_f64(buf, z);
  for (Eigen::Index j = 0; j < values.size(); ++j) {
    put_f64(buf, values[j].real());
    put_f64(buf, values[j].imag());
  }
  return buf;
}

void write_file(const std::string& buf, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw SnapshotError("cannot open for writing: " + path.string());
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw SnapshotError("write failed: " + path.string());
}

}  // namespace

void save_snapshot(const ComplexField& field, const std::filesystem::path& path) {
  if (field.values.size() != sample_count(field.grid))
    throw SnapshotError("save_snapshot: value count does not match grid");
  write_file(encode(field.grid, field.z, field.values), path);
}

void save_snapshot(const RealField& field, const std::filesystem::path& path) {
  if (field.values.size() != field.grid.n)
    throw SnapshotError("save_snapshot: value count does not match grid");
  Eigen::ArrayXcd tmp(field.values.size());
  tmp.real() = field.values;
  tmp.imag().setZero();
  write_file(encode(Grid{field.grid}, field.t, tmp), path);
}

ComplexField load_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SnapshotError("cannot open for reading: " + path.string());
  std::string buf((std::istreambuf_iterator<char>(in)),
                  std::istreambuf_iterator<char>());
  Reader rd{buf};
  rd.need(4);
  if (std::memcmp(buf.data(), kMagic, 4) != 0)
    throw SnapshotError("bad magic in " + path.string());
  rd.pos = 4;
  const std::uint32_t version = rd.u32();
  if (version != kSnapshotVersion)
    throw SnapshotError("unsupported snapshot version " +
                        std::to_string(version) + " in " + path.string());
  const std::uint8_t gk = rd.u8();
  const std::uint64_t n = rd.u64();
  const double a = rd.f64();
  const double b = rd.f64();
  const double z = rd.f64();

  ComplexField field;
  const auto count = static_cast<Eigen::Index>(n);
  if (gk == static_cast<std::uint8_t>(GridKind::periodic1d)) {
    field.grid = Grid1D(a, b, count);
  } else if (gk == static_cast<std::uint8_t>(GridKind::radial)) {
    field.grid = RadialGrid(b, count);
  } else {
    throw SnapshotError("unknown grid kind byte in " + path.string());
  }
  field.z = z;
  field.values.resize(count);
  rd.need(16 * n);
  for (Eigen::Index j = 0; j < count; ++j) {
    const double re = rd.f64();
    const double im = rd.f64();
    field.values[j] = Complex(re, im);
  }
  if (rd.pos != buf.size())
    throw SnapshotError("trailing bytes in " + path.string());
  return field;
}

RealField load_snapshot_real(const std::filesystem::path& path) {
  ComplexField c = load_snapshot(path);
  const auto* g = std::get_if<Grid1D>(&c.grid);
  if (!g) throw SnapshotError("real snapshot must use a periodic grid: " + path.string());
  if ((c.values.imag() != 0.0).any())
    throw SnapshotError("nonzero imaginary part in real snapshot: " + path.string());
  return RealField{*g, c.values.real(), c.z};
}

}  // namespace rvlab
