#include "wayloc/store.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <unordered_set>

#include "wayloc/error.hpp"

namespace wayloc {

namespace {

constexpr std::uint8_t kMagic[4] = {'W', 'P', 'E', 'S'};
constexpr std::uint8_t kFlagNormalized = 0x01;

class ByteWriter {
 public:
  explicit ByteWriter(std::vector<std::uint8_t>& out) : out_(out) {}

  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) {
    u8(static_cast<std::uint8_t>(v));
    u8(static_cast<std::uint8_t>(v >> 8));
  }
  void u32(std::uint32_t v) {
    for (int shift = 0; shift < 32; shift += 8) u8(static_cast<std::uint8_t>(v >> shift));
  }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void bytes(std::span<const std::uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }

 private:
  std::vector<std::uint8_t>& out_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> in) : in_(in) {}

  std::span<const std::uint8_t> take(std::size_t n, const char* what) {
    if (in_.size() - pos_ < n) {
      throw Error(Errc::TruncatedFile, std::string("file ends inside ") + what);
    }
    auto s = in_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  std::uint8_t u8(const char* what) { return take(1, what)[0]; }
  std::uint16_t u16(const char* what) {
    auto b = take(2, what);
    return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
  }
  std::uint32_t u32(const char* what) {
    auto b = take(4, what);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | b[static_cast<std::size_t>(i)];
    return v;
  }
  float f32(const char* what) { return std::bit_cast<float>(u32(what)); }
  [[nodiscard]] std::size_t remaining() const noexcept { return in_.size() - pos_; }

 private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

}  // namespace

ReferenceStore::ReferenceStore(std::size_t dim, bool normalized) : dim_(dim), normalized_(normalized) {
  if (dim == 0) throw Error(Errc::InvalidArgument, "store dimension must be >= 1");
  if (dim > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(Errc::FormatOverflow, "store dimension does not fit in u32");
  }
}

void ReferenceStore::add(WaypointLabel label, Embedding embedding) {
  if (embedding.dim() != dim_) {
    throw Error(Errc::DimensionMismatch, "record dim " + std::to_string(embedding.dim()) +
                                             " != store dim " + std::to_string(dim_));
  }
  if (embedding.normalized() != normalized_) {
    throw Error(Errc::UnnormalizedInput, normalized_ ? "store requires normalized embeddings"
                                                     : "store is flagged unnormalized");
  }
  records_.push_back({std::move(label), std::move(embedding)});
}

std::vector<WaypointLabel> ReferenceStore::distinct_labels() const {
  std::vector<WaypointLabel> out;
  std::unordered_set<std::string> seen;
  for (const auto& r : records_) {
    if (seen.insert(r.label.str()).second) out.push_back(r.label);
  }
  return out;
}

std::vector<std::uint8_t> encode_store(const ReferenceStore& store) {
  if (store.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(Errc::FormatOverflow, "record count does not fit in u32");
  }
  std::vector<std::uint8_t> out;
  out.reserve(kStoreHeaderBytes + store.size() * (8 + store.dim() * 4));
  ByteWriter w(out);
  w.bytes(kMagic);
  w.u16(kStoreVersion);
  w.u8(store.normalized() ? kFlagNormalized : 0);
  w.u8(0);
  w.u32(static_cast<std::uint32_t>(store.dim()));
  w.u32(static_cast<std::uint32_t>(store.size()));
  for (const auto& rec : store.records()) {
    const std::string& label = rec.label.str();
    if (label.size() > WaypointLabel::kMaxBytes) {
      throw Error(Errc::FormatOverflow, "label exceeds 65535 bytes");
    }
    w.u16(static_cast<std::uint16_t>(label.size()));
    w.bytes({reinterpret_cast<const std::uint8_t*>(label.data()), label.size()});
    for (double v : rec.embedding.values()) w.f32(static_cast<float>(v));
  }
  return out;
}

ReferenceStore decode_store(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  auto magic = r.take(4, "magic");
  if (!std::equal(magic.begin(), magic.end(), std::begin(kMagic))) {
    throw Error(Errc::BadMagic, "not an embedding store file");
  }
  const std::uint16_t version = r.u16("header");
  if (version != kStoreVersion) {
    throw Error(Errc::UnsupportedVersion, "store version " + std::to_string(version));
  }
  const std::uint8_t flags = r.u8("header");
  const std::uint8_t reserved = r.u8("header");
  if ((flags & ~kFlagNormalized) != 0 || reserved != 0) {
    throw Error(Errc::UnsupportedVersion, "unknown header flags");
  }
  const std::uint32_t dim = r.u32("header");
  const std::uint32_t count = r.u32("header");
  const bool normalized = (flags & kFlagNormalized) != 0;
  if (dim == 0) throw Error(Errc::InvalidArgument, "store dimension is zero");

  ReferenceStore store(dim, normalized);
  std::vector<double> values;
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::uint16_t len = r.u16("record label length");
    auto label_bytes = r.take(len, "record label");
    std::string label(label_bytes.begin(), label_bytes.end());
    values.resize(dim);
    for (auto& v : values) v = r.f32("record vector");
    for (double v : values) {
      if (!std::isfinite(v)) {
        throw Error(Errc::NonFiniteInput, "record " + std::to_string(i) + " has a non-finite value");
      }
    }
    if (normalized) {
      double ss = 0.0;
      for (double v : values) ss += v * v;
      const double n = std::sqrt(ss);
      if (std::abs(n - 1.0) > kStoredNormTolerance) {
        throw Error(Errc::NormViolation,
                    "record " + std::to_string(i) + " flagged normalized has norm " + std::to_string(n));
      }
      // Within the file tolerance but outside the in-memory one: renormalize.
      if (std::abs(n - 1.0) > kUnitNormTolerance) {
        store.add(WaypointLabel(std::move(label)), normalize(values));
        continue;
      }
    }
    store.add(WaypointLabel(std::move(label)), Embedding(values, normalized));
  }
  if (r.remaining() != 0) {
    throw Error(Errc::InvalidArgument, std::to_string(r.remaining()) + " trailing bytes after last record");
  }
  return store;
}

std::size_t write_store(const ReferenceStore& store, const std::filesystem::path& path) {
  const auto bytes = encode_store(store);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoFailure, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  out.close();
  if (!out) throw Error(Errc::IoFailure, "write to " + path.string() + " failed");
  return bytes.size();
}

ReferenceStore read_store(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoFailure, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(Errc::IoFailure, "read from " + path.string() + " failed");
  return decode_store(bytes);
}

ReferenceStore quantize_to_storage(const ReferenceStore& store) { return decode_store(encode_store(store)); }

}  // namespace wayloc
