#include "aladdin/signature.hpp"

#include <stdexcept>

#include <sodium.h>

namespace aladdin {

namespace {

void ensure_sodium() {
  static const bool ready = sodium_init() >= 0;
  if (!ready) throw std::runtime_error("libsodium initialisation failed");
}

constexpr std::size_t kSeedSize = crypto_sign_SEEDBYTES;

std::array<std::uint8_t, crypto_sign_SECRETKEYBYTES> expand(const PrivateKey& key, PublicKey* pub_out = nullptr) {
  if (key.bytes.size() != kSeedSize) throw std::invalid_argument("ed25519 private key must be a 32-byte seed");
  std::array<std::uint8_t, crypto_sign_PUBLICKEYBYTES> pk{};
  std::array<std::uint8_t, crypto_sign_SECRETKEYBYTES> sk{};
  crypto_sign_seed_keypair(pk.data(), sk.data(), key.bytes.data());
  if (pub_out) pub_out->bytes.assign(pk.begin(), pk.end());
  return sk;
}

}  // namespace

static_assert(crypto_sign_BYTES == kSignatureSize);

Ed25519Scheme::Ed25519Scheme() { ensure_sodium(); }

Signature Ed25519Scheme::sign(ByteView message, const PrivateKey& key) const {
  auto sk = expand(key);
  Signature sig{};
  crypto_sign_detached(sig.data(), nullptr, message.data(), message.size(), sk.data());
  sodium_memzero(sk.data(), sk.size());
  return sig;
}

bool Ed25519Scheme::verify(ByteView message, const Signature& signature, const PublicKey& key) const {
  if (key.bytes.size() != crypto_sign_PUBLICKEYBYTES) return false;
  return crypto_sign_verify_detached(signature.data(), message.data(), message.size(), key.bytes.data()) == 0;
}

PublicKey Ed25519Scheme::public_key(const PrivateKey& key) const {
  PublicKey pub;
  auto sk = expand(key, &pub);
  sodium_memzero(sk.data(), sk.size());
  return pub;
}

PrivateKey Ed25519Scheme::generate(std::optional<std::array<std::uint8_t, 32>> seed) {
  ensure_sodium();
  PrivateKey key;
  key.bytes.resize(kSeedSize);
  if (seed) {
    std::copy(seed->begin(), seed->end(), key.bytes.begin());
  } else {
    randombytes_buf(key.bytes.data(), key.bytes.size());
  }
  return key;
}

const SignatureScheme& default_scheme() {
  static const Ed25519Scheme scheme;
  return scheme;
}

Announcement sign(Announcement a, const PrivateKey& key, const SignatureScheme& scheme) {
  if (a.signature) throw FrameError(FrameErrc::already_signed, "announcement is already signed");
  a.signature = scheme.sign(signing_input(a), key);
  return a;
}

bool verify(const Announcement& a, const PublicKey& key, const SignatureScheme& scheme) {
  if (!a.signature) return false;
  return scheme.verify(signing_input(a), *a.signature, key);
}

}  // namespace aladdin
