#include "aladdin/frame.hpp"

#include <algorithm>

#include <zlib.h>

namespace aladdin {

std::optional<BeaconId> BeaconId::from_hex(std::string_view hex) {
  Bytes raw;
  if (hex.size() != 32 || !aladdin::from_hex(hex, raw)) return std::nullopt;
  BeaconId id;
  std::copy(raw.begin(), raw.end(), id.bytes.begin());
  return id;
}

std::string BeaconId::hex() const { return to_hex(bytes); }

Bytes signing_input(const Announcement& a) {
  Bytes out;
  out.reserve(a.beacon_id.bytes.size() + 4 + a.payload.size());
  ByteWriter w(out);
  w.raw(a.beacon_id.bytes);
  w.u32(a.payload_version);
  w.raw(a.payload);
  return out;
}

Bytes wire_body(const Announcement& a) {
  Bytes body = a.payload;
  if (a.signature) body.insert(body.end(), a.signature->begin(), a.signature->end());
  return body;
}

std::uint32_t crc32(ByteView data) {
  // zlib's crc32 is the reflected 0x04C11DB7 variant with ~0 init and xorout.
  uLong crc = ::crc32(0L, Z_NULL, 0);
  return static_cast<std::uint32_t>(::crc32(crc, data.data(), static_cast<uInt>(data.size())));
}

namespace {

void write_header(ByteWriter& w, const FrameHeader& h) {
  w.u16(h.magic);
  w.u8(h.version);
  w.u8(h.flags);
  w.raw(h.beacon_id.bytes);
  w.u32(h.payload_version);
  w.u8(h.frag_index);
  w.u8(h.frag_count);
  w.u16(h.chunk_length);
}

Bytes encode_without_checksum(const Frame& f) {
  Bytes out;
  out.reserve(f.encoded_size());
  ByteWriter w(out);
  write_header(w, f.header);
  w.raw(f.chunk);
  return out;
}

}  // namespace

std::vector<Frame> fragment(const Announcement& a, std::size_t mtu) {
  if (mtu <= kFragmentReserve) {
    throw FrameError(FrameErrc::invalid_mtu, "mtu " + std::to_string(mtu) + " leaves no room for a chunk");
  }
  const std::size_t capacity = std::min<std::size_t>(mtu - kFragmentReserve, 0xFFFF);
  const Bytes body = wire_body(a);
  const std::size_t count = std::max<std::size_t>(1, (body.size() + capacity - 1) / capacity);
  if (count > 255) {
    throw FrameError(FrameErrc::too_many_fragments,
                     "body of " + std::to_string(body.size()) + " bytes needs " + std::to_string(count) + " fragments");
  }

  std::vector<Frame> frames;
  frames.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t begin = i * capacity;
    const std::size_t end = std::min(body.size(), begin + capacity);
    Frame f;
    f.header.flags = a.signature ? kFlagSigned : 0;
    f.header.beacon_id = a.beacon_id;
    f.header.payload_version = a.payload_version;
    f.header.frag_index = static_cast<std::uint8_t>(i);
    f.header.frag_count = static_cast<std::uint8_t>(count);
    f.header.chunk_length = static_cast<std::uint16_t>(end - begin);
    f.chunk.assign(body.begin() + static_cast<std::ptrdiff_t>(begin), body.begin() + static_cast<std::ptrdiff_t>(end));
    f.checksum = crc32(encode_without_checksum(f));
    frames.push_back(std::move(f));
  }
  return frames;
}

Bytes encode_frame(const Frame& f) {
  Bytes out = encode_without_checksum(f);
  ByteWriter(out).u32(f.checksum);
  return out;
}

Frame decode_frame(ByteView bytes) {
  if (bytes.size() < kFrameOverhead) {
    throw FrameError(FrameErrc::truncated, "frame of " + std::to_string(bytes.size()) + " bytes is below the minimum");
  }
  ByteReader r(bytes);
  Frame f;
  auto& h = f.header;
  h.magic = r.u16();
  if (h.magic != kFrameMagic) throw FrameError(FrameErrc::bad_magic, "bad frame magic");
  h.version = r.u8();
  h.flags = r.u8();
  auto id = r.raw(h.beacon_id.bytes.size());
  std::copy(id.begin(), id.end(), h.beacon_id.bytes.begin());
  h.payload_version = r.u32();
  h.frag_index = r.u8();
  h.frag_count = r.u8();
  h.chunk_length = r.u16();

  const std::size_t expected = kFrameOverhead + h.chunk_length;
  if (bytes.size() < expected) {
    throw FrameError(FrameErrc::truncated, "frame declares " + std::to_string(expected) + " bytes, got " +
                                               std::to_string(bytes.size()));
  }
  if (bytes.size() > expected) {
    // The trailing four bytes are not at the declared CRC position.
    throw FrameError(FrameErrc::checksum_mismatch, "frame length does not match its chunk length");
  }
  auto chunk = r.raw(h.chunk_length);
  f.chunk.assign(chunk.begin(), chunk.end());
  f.checksum = r.u32();
  if (crc32(bytes.first(expected - 4)) != f.checksum) throw FrameError(FrameErrc::checksum_mismatch, "CRC-32 mismatch");
  if (h.version != kFrameVersion) {
    throw FrameError(FrameErrc::bad_version, "unsupported frame version " + std::to_string(h.version));
  }
  if (h.frag_count == 0 || h.frag_index >= h.frag_count) {
    throw FrameError(FrameErrc::invalid_header, "fragment index outside fragment count");
  }
  return f;
}

void Assembler::evict(SimTime now) {
  std::erase_if(buffers_, [&](const auto& entry) { return now - entry.second.first_seen > timeout_; });
}

std::optional<Announcement> Assembler::feed(const Frame& f, SimTime now) {
  evict(now);
  const auto& h = f.header;
  if (h.frag_count == 0 || h.frag_index >= h.frag_count) {
    throw FrameError(FrameErrc::invalid_header, "fragment index outside fragment count");
  }

  const Key key{h.beacon_id, h.payload_version};
  auto it = buffers_.find(key);
  if (it == buffers_.end()) {
    it = buffers_.emplace(key, Buffer{now, h.frag_count, h.flags, {}}).first;
  } else if (it->second.frag_count != h.frag_count) {
    buffers_.erase(it);
    throw FrameError(FrameErrc::inconsistent_frag_count, "frag_count disagrees with earlier fragments");
  }
  Buffer& buf = it->second;
  buf.chunks.try_emplace(h.frag_index, f.chunk);
  if (buf.chunks.size() < buf.frag_count) return std::nullopt;

  Bytes body;
  for (auto& [index, chunk] : buf.chunks) body.insert(body.end(), chunk.begin(), chunk.end());
  const bool is_signed = (buf.flags & kFlagSigned) != 0;
  buffers_.erase(it);

  Announcement a;
  a.beacon_id = h.beacon_id;
  a.payload_version = h.payload_version;
  if (is_signed) {
    if (body.size() < kSignatureSize) {
      throw FrameError(FrameErrc::malformed_announcement, "signed body shorter than a signature");
    }
    std::array<std::uint8_t, kSignatureSize> sig;
    std::copy(body.end() - kSignatureSize, body.end(), sig.begin());
    a.signature = sig;
    body.resize(body.size() - kSignatureSize);
  }
  a.payload = std::move(body);
  return a;
}

}  // namespace aladdin
