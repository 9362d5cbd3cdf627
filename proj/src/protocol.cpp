#include "smsguard/protocol.hpp"

namespace smsguard::protocol {

namespace {

constexpr int kBase = 32;   // first printable codepoint
constexpr int kRange = 95;  // printable alphabet size

void require_printable(const std::string& s) {
  if (!is_printable_text(s)) {
    throw NonPrintableInput("text contains characters outside 32..126");
  }
}

void require_key(const CipherKey& key) {
  if (key.empty() || !is_printable_text(key)) {
    throw InvalidKey("cipher key must be non-empty printable text");
  }
}

}  // namespace

bool valid_activation_command(const std::string& s) {
  if (s.empty() || s.size() > 16) return false;
  for (char c : s) {
    if (c < 'A' || c > 'Z') return false;
  }
  return true;
}

bool valid_activation_pin(const std::string& s) {
  if (s.size() < 4 || s.size() > 8) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

bool valid_shared_secret(const SharedSecret& s) {
  return valid_activation_command(s.activation_command) &&
         valid_activation_pin(s.activation_pin);
}

bool valid_login_pin(const std::string& s) { return valid_activation_pin(s); }

CipherKey derive_key(const SharedSecret& secret) {
  return secret.activation_command + secret.activation_pin;
}

std::string encrypt_text(const std::string& plain, const CipherKey& key) {
  require_key(key);
  require_printable(plain);
  std::string out(plain.size(), '\0');
  for (std::size_t i = 0; i < plain.size(); ++i) {
    const int p = plain[i] - kBase;
    const int k = key[i % key.size()] - kBase;
    out[i] = static_cast<char>(kBase + (p + k) % kRange);
  }
  return out;
}

std::string decrypt_text(const std::string& cipher, const CipherKey& key) {
  require_key(key);
  require_printable(cipher);
  std::string out(cipher.size(), '\0');
  for (std::size_t i = 0; i < cipher.size(); ++i) {
    const int c = cipher[i] - kBase;
    const int k = key[i % key.size()] - kBase;
    out[i] = static_cast<char>(kBase + ((c - k) % kRange + kRange) % kRange);
  }
  return out;
}

FrameKind classify_frame(const std::string& body) {
  if (body.size() >= 2 && body[0] == '$' && body[1] == '$') {
    return FrameKind::EncryptedCommand;
  }
  if (!body.empty() && body[0] == '$') return FrameKind::PlainCommand;
  return FrameKind::Ordinary;
}

std::string encode_frame(const std::string& command_text, Channel channel,
                         const std::optional<CipherKey>& key) {
  if (command_text.empty() || command_text[0] != '$') {
    throw MalformedCommandText("command text must begin with '$'");
  }
  if (channel == Channel::Plain) return command_text;
  if (!key) throw MissingKey("encrypted channel needs a cipher key");
  return "$$" + encrypt_text(command_text.substr(1), *key);
}

std::optional<DecodedFrame> decode_frame(const std::string& body,
                                         const CipherKey& key) {
  switch (classify_frame(body)) {
    case FrameKind::EncryptedCommand:
      return DecodedFrame{"$" + decrypt_text(body.substr(2), key),
                          Channel::Encrypted};
    case FrameKind::PlainCommand:
      return DecodedFrame{body, Channel::Plain};
    case FrameKind::Ordinary:
      break;
  }
  return std::nullopt;
}

}  // namespace smsguard::protocol
