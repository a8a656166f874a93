#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aladdin/bytes.hpp"
#include "aladdin/error.hpp"
#include "aladdin/sim_time.hpp"

namespace aladdin {

enum class FrameErrc {
  bad_magic,
  bad_version,
  checksum_mismatch,
  truncated,
  invalid_header,            // CRC-valid frame whose fragment fields are inconsistent
  too_many_fragments,
  invalid_mtu,
  inconsistent_frag_count,
  malformed_announcement,    // signed flag set but body shorter than a signature
  already_signed,
  announcement_too_large,
};

using FrameError = Error<FrameErrc>;

struct BeaconId {
  std::array<std::uint8_t, 16> bytes{};

  static std::optional<BeaconId> from_hex(std::string_view hex);
  std::string hex() const;

  auto operator<=>(const BeaconId&) const = default;
  bool operator==(const BeaconId&) const = default;
};

inline constexpr std::size_t kSignatureSize = 64;
inline constexpr std::size_t kDefaultMaxAnnouncementSize = 2048;

struct Announcement {
  BeaconId beacon_id;
  std::uint32_t payload_version = 0;
  Bytes payload;  // compact-encoded graph
  std::optional<std::array<std::uint8_t, kSignatureSize>> signature;

  bool operator==(const Announcement&) const = default;
};

// beacon_id ‖ big-endian payload_version ‖ payload: the byte string a
// signature covers.
Bytes signing_input(const Announcement& a);

// payload, followed by the signature when present.
Bytes wire_body(const Announcement& a);

// ---- Frames --------------------------------------------------------------
//
// Wire layout, big-endian:
//   0-1 magic A1 DD | 2 version 01 | 3 flags (bit0 signed) | 4-19 beacon id
//   20-23 payload version | 24 frag index | 25 frag count | 26-27 chunk length
//   28.. chunk | final 4 bytes CRC-32 over everything before it.

inline constexpr std::uint16_t kFrameMagic = 0xA1DD;
inline constexpr std::uint8_t kFrameVersion = 0x01;
inline constexpr std::uint8_t kFlagSigned = 0x01;
inline constexpr std::size_t kFrameHeaderSize = 28;
inline constexpr std::size_t kFrameOverhead = kFrameHeaderSize + 4;
// Per-fragment budget reserved out of the MTU. Four bytes above the true
// overhead, so every frame encodes to at most mtu - 4 bytes.
inline constexpr std::size_t kFragmentReserve = 36;
inline constexpr std::size_t kDefaultMtu = 254;

struct FrameHeader {
  std::uint16_t magic = kFrameMagic;
  std::uint8_t version = kFrameVersion;
  std::uint8_t flags = 0;
  BeaconId beacon_id;
  std::uint32_t payload_version = 0;
  std::uint8_t frag_index = 0;
  std::uint8_t frag_count = 1;
  std::uint16_t chunk_length = 0;

  bool is_signed() const noexcept { return (flags & kFlagSigned) != 0; }
  bool operator==(const FrameHeader&) const = default;
};

struct Frame {
  FrameHeader header;
  Bytes chunk;
  std::uint32_t checksum = 0;

  std::size_t encoded_size() const noexcept { return kFrameOverhead + chunk.size(); }
  bool operator==(const Frame&) const = default;
};

// Standard CRC-32 (reflected 0x04C11DB7, init and xorout 0xFFFFFFFF).
std::uint32_t crc32(ByteView data);

// Splits the wire body into chunks of mtu - 36 bytes. Each returned frame has
// its checksum filled in.
std::vector<Frame> fragment(const Announcement& a, std::size_t mtu = kDefaultMtu);

Bytes encode_frame(const Frame& f);
Frame decode_frame(ByteView bytes);

// ---- Reassembly ----------------------------------------------------------

inline constexpr SimTime kDefaultReassemblyTimeout = sim_ms(5000);

class Assembler {
 public:
  explicit Assembler(SimTime timeout = kDefaultReassemblyTimeout) : timeout_(timeout) {}

  // Stores the chunk and returns the announcement once every fragment of
  // (beacon_id, payload_version) is present. Evicts buffers older than the
  // timeout. Throws FrameError(inconsistent_frag_count) when a frame
  // disagrees with its buffer on frag_count (the buffer is discarded), and
  // FrameError(malformed_announcement) for a signed body too short to carry
  // a signature.
  std::optional<Announcement> feed(const Frame& f, SimTime now);

  std::size_t buffer_count() const noexcept { return buffers_.size(); }
  SimTime timeout() const noexcept { return timeout_; }

 private:
  struct Key {
    BeaconId beacon_id;
    std::uint32_t payload_version;
    auto operator<=>(const Key&) const = default;
  };
  struct Buffer {
    SimTime first_seen;
    std::uint8_t frag_count;
    std::uint8_t flags;
    std::map<std::uint8_t, Bytes> chunks;
  };

  void evict(SimTime now);

  SimTime timeout_;
  std::map<Key, Buffer> buffers_;
};

}  // namespace aladdin
