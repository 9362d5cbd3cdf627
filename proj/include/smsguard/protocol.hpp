#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "smsguard/types.hpp"

namespace smsguard::protocol {

// Frame discrimination by body prefix: "$$" carries an encrypted command,
// a single "$" a plain command, anything else is an ordinary SMS. The three
// cases are mutually exclusive and exhaustive.
enum class FrameKind { EncryptedCommand, PlainCommand, Ordinary };

// The user-chosen halves of the remote connection handshake.
struct SharedSecret {
  std::string activation_command;  // [A-Z]{1,16}
  std::string activation_pin;      // [0-9]{4,8}

  bool operator==(const SharedSecret&) const = default;
};

bool valid_activation_command(const std::string& s);
bool valid_activation_pin(const std::string& s);
bool valid_shared_secret(const SharedSecret& s);
bool valid_login_pin(const std::string& s);  // same shape as the activation pin

// Non-empty printable text; derive_key yields activation_command ++ pin.
using CipherKey = std::string;

struct NonPrintableInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidKey : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MissingKey : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MalformedCommandText : std::runtime_error {
  using std::runtime_error::runtime_error;
};

CipherKey derive_key(const SharedSecret& secret);

// Reference cipher: a keyed shift over the 95-character printable alphabet,
//   out[i] = 32 + ((in[i]-32) + (key[i mod |key|]-32)) mod 95.
// Output length equals input length and stays printable. Stronger ciphers can
// replace this behind the same framing without changing any caller.
std::string encrypt_text(const std::string& plain, const CipherKey& key);
std::string decrypt_text(const std::string& cipher, const CipherKey& key);

FrameKind classify_frame(const std::string& body);

// command_text must be the canonical "$..." form. Plain channel passes it
// through; Encrypted strips the leading '$', encrypts, and prefixes "$$".
std::string encode_frame(const std::string& command_text, Channel channel,
                         const std::optional<CipherKey>& key = std::nullopt);

struct DecodedFrame {
  std::string command_text;  // canonical "$..." form
  Channel channel = Channel::Plain;

  bool operator==(const DecodedFrame&) const = default;
};

// Ordinary bodies decode to nullopt; command frames yield the canonical text
// and the channel they arrived on.
std::optional<DecodedFrame> decode_frame(const std::string& body,
                                         const CipherKey& key);

}  // namespace smsguard::protocol
