// SPDX-License-Identifier: Apache-2.0

#include "gammasolve/uplf.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "gammasolve/errors.hpp"

static_assert(std::endian::native == std::endian::little, "UPLF I/O assumes a little-endian host");

namespace gammasolve
{

namespace
{

constexpr char magic[4] = {'U', 'P', 'L', 'F'};
constexpr std::uint32_t version = 1;

class Writer
{
public:
  template <typename T>
  void put(T value)
  {
    const auto *p = reinterpret_cast<const std::uint8_t *>(&value);
    bytes.insert(bytes.end(), p, p + sizeof(T));
  }

  std::vector<std::uint8_t> bytes;
};

class Reader
{
public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  template <typename T>
  T get()
  {
    if (pos_ + sizeof(T) > bytes_.size())
    {
      throw Error(ErrorCode::io, "UPLF: truncated file");
    }
    T value;
    std::memcpy(&value, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }

  std::size_t remaining() const { return bytes_.size() - pos_; }

private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_uplf(const Field &f)
{
  Writer w;
  for (char c : magic)
  {
    w.put(static_cast<std::uint8_t>(c));
  }
  w.put(version);
  const auto &grid = f.grid();
  w.put(static_cast<std::uint32_t>(grid.dimension()));
  for (auto n : grid.dims())
  {
    w.put(static_cast<std::uint64_t>(n));
  }
  for (double l : grid.lengths())
  {
    w.put(l);
  }
  w.put(static_cast<std::uint32_t>(f.layout().block_count()));
  for (const auto &b : f.layout().blocks())
  {
    w.put(static_cast<std::uint8_t>(b.kind));
    w.put(static_cast<std::uint32_t>(b.dim));
  }
  w.put(static_cast<std::uint8_t>(f.representation()));
  w.bytes.reserve(w.bytes.size() + f.size() * 16);
  for (const auto &v : f.values())
  {
    w.put(v.real());
    w.put(v.imag());
  }
  return std::move(w.bytes);
}

Field decode_uplf(std::span<const std::uint8_t> bytes)
{
  Reader r(bytes);
  for (char c : magic)
  {
    if (r.get<std::uint8_t>() != static_cast<std::uint8_t>(c))
    {
      throw Error(ErrorCode::io, "UPLF: bad magic");
    }
  }
  if (const auto v = r.get<std::uint32_t>(); v != version)
  {
    throw Error(ErrorCode::io, "UPLF: unsupported version " + std::to_string(v));
  }
  const auto dim = r.get<std::uint32_t>();
  if (dim == 0 || dim > 64)
  {
    throw Error(ErrorCode::io, "UPLF: invalid grid dimension");
  }
  std::vector<std::size_t> dims(dim);
  std::vector<double> lengths(dim);
  for (auto &n : dims)
  {
    n = static_cast<std::size_t>(r.get<std::uint64_t>());
  }
  for (auto &l : lengths)
  {
    l = r.get<double>();
  }
  const auto nblocks = r.get<std::uint32_t>();
  if (nblocks == 0 || nblocks > 1024)
  {
    throw Error(ErrorCode::io, "UPLF: invalid block count");
  }
  std::vector<Block> blocks(nblocks);
  for (auto &b : blocks)
  {
    const auto kind = r.get<std::uint8_t>();
    if (kind > 3)
    {
      throw Error(ErrorCode::io, "UPLF: unknown block kind");
    }
    b.kind = static_cast<BlockKind>(kind);
    b.dim = static_cast<int>(r.get<std::uint32_t>());
  }
  const auto rep = r.get<std::uint8_t>();
  if (rep > 1)
  {
    throw Error(ErrorCode::io, "UPLF: unknown representation");
  }
  Grid grid;
  BlockLayout layout;
  try
  {
    grid = Grid(dims, lengths);
    layout = BlockLayout(blocks);
  }
  catch (const Error &e)
  {
    throw Error(ErrorCode::io, std::string("UPLF: ") + e.what());
  }
  const std::size_t count = grid.points() * static_cast<std::size_t>(layout.total_components());
  if (r.remaining() != count * 16)
  {
    throw Error(ErrorCode::io, "UPLF: payload size does not match header");
  }
  std::vector<cplx> values(count);
  for (auto &v : values)
  {
    const double re = r.get<double>();
    const double im = r.get<double>();
    v = {re, im};
  }
  return Field(std::move(grid), std::move(layout), static_cast<Representation>(rep),
               std::move(values));
}

void write_uplf(const std::filesystem::path &path, const Field &f)
{
  const auto bytes = encode_uplf(f);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
  {
    throw Error(ErrorCode::io, "cannot open " + path.string() + " for writing");
  }
  out.write(reinterpret_cast<const char *>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out)
  {
    throw Error(ErrorCode::io, "write failed for " + path.string());
  }
}

Field read_uplf(const std::filesystem::path &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    throw Error(ErrorCode::io, "cannot open " + path.string());
  }
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_uplf(bytes);
}

}  // namespace gammasolve
