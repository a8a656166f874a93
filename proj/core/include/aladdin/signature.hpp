#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>

#include "aladdin/bytes.hpp"
#include "aladdin/frame.hpp"

namespace aladdin {

// Key material is opaque to the frame layer; its meaning belongs to the
// scheme that produced it.
struct PrivateKey {
  Bytes bytes;
  bool operator==(const PrivateKey&) const = default;
};

struct PublicKey {
  Bytes bytes;
  bool operator==(const PublicKey&) const = default;
};

using Signature = std::array<std::uint8_t, kSignatureSize>;

class SignatureScheme {
 public:
  virtual ~SignatureScheme() = default;

  virtual std::string_view name() const = 0;
  virtual Signature sign(ByteView message, const PrivateKey& key) const = 0;
  virtual bool verify(ByteView message, const Signature& signature, const PublicKey& key) const = 0;
  virtual PublicKey public_key(const PrivateKey& key) const = 0;
};

// Ed25519 via libsodium. Private keys are the 32-byte seed.
class Ed25519Scheme final : public SignatureScheme {
 public:
  Ed25519Scheme();

  std::string_view name() const override { return "ed25519"; }
  Signature sign(ByteView message, const PrivateKey& key) const override;
  bool verify(ByteView message, const Signature& signature, const PublicKey& key) const override;
  PublicKey public_key(const PrivateKey& key) const override;

  // Deterministic key from a 32-byte seed; random seed when omitted.
  static PrivateKey generate(std::optional<std::array<std::uint8_t, 32>> seed = std::nullopt);
};

const SignatureScheme& default_scheme();

// Throws FrameError(already_signed) if `a` carries a signature.
Announcement sign(Announcement a, const PrivateKey& key, const SignatureScheme& scheme = default_scheme());

// False when unsigned or when the signature does not match.
bool verify(const Announcement& a, const PublicKey& key, const SignatureScheme& scheme = default_scheme());

}  // namespace aladdin
