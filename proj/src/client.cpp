#include "smsguard/client.hpp"

#include "smsguard/guard.hpp"

namespace smsguard::client {

namespace {

// Server replies are not command frames: encrypted ones are "$$" ++ cipher,
// plain ones arrive as ordinary text.
std::string decode_reply(const std::string& body,
                         const protocol::CipherKey& key) {
  if (protocol::classify_frame(body) == protocol::FrameKind::EncryptedCommand) {
    return protocol::decrypt_text(body.substr(2), key);
  }
  return body;
}

bool has_prefix(const std::string& s, const std::string& prefix) {
  return s.rfind(prefix, 0) == 0;
}

}  // namespace

BeginConnection begin_connection(const Msisdn& self, const Msisdn& server,
                                 const protocol::SharedSecret& secret,
                                 Channel channel) {
  if (guard::normalize_msisdn(self) == guard::normalize_msisdn(server)) {
    throw SelfTarget("remote connection to own number " + self);
  }
  ClientState c;
  c.self = self;
  c.server = server;
  c.secret = secret;
  c.channel = channel;
  c.phase = Phase::AwaitingConfirmation;

  const std::string connect_text =
      "$" + secret.activation_command + " " + secret.activation_pin;
  const std::string body = protocol::encode_frame(
      connect_text, channel, protocol::derive_key(secret));
  return BeginConnection{std::move(c), Effect::send_sms(server, body)};
}

std::vector<Effect> handle_inbound(ClientState& c, const SmsMessage& msg,
                                   std::mt19937& rng) {
  std::vector<Effect> out;
  if (guard::normalize_msisdn(msg.sender) !=
      guard::normalize_msisdn(c.server)) {
    out.push_back(Effect::log("IGNORED " + msg.sender));
    return out;
  }

  const std::string text =
      decode_reply(msg.body, protocol::derive_key(c.secret));

  if (has_prefix(text, "CONNECTED") &&
      c.phase == Phase::AwaitingConfirmation) {
    c.phase = Phase::Active;
    std::string pin;
    for (int i = 0; i < 4; ++i) {
      pin += static_cast<char>('0' + rng() % 10);
    }
    c.temp_pin = pin;
    c.ui_locked = true;
    out.push_back(Effect::log("TEMP-PIN " + pin));
    return out;
  }

  if (has_prefix(text, "SIM-CHANGED")) {
    out.push_back(Effect::log("ALERT " + text));
    return out;
  }

  if (c.phase == Phase::Active) {
    if (has_prefix(text, "CALL-ALERT ")) {
      const std::string rest = text.substr(11);
      const std::size_t sp = rest.find(' ');
      if (sp != std::string::npos) {
        c.missed_calls.emplace_back(rest.substr(0, sp), rest.substr(sp + 1));
        return out;
      }
    } else if (has_prefix(text, "SMS-FROM ")) {
      const std::size_t colon = text.find(": ", 9);
      if (colon != std::string::npos) {
        c.inbox_mirror.emplace_back(text.substr(9, colon - 9),
                                    text.substr(colon + 2));
        return out;
      }
    } else if (has_prefix(text, "CONTACT ")) {
      c.contact_results.push_back(text);
      return out;
    } else if (has_prefix(text, "LOC ")) {
      c.location_reports.push_back(text);
      return out;
    } else if (text == "SIGNED-OFF") {
      c.phase = Phase::Ended;
      return out;
    }
  }

  out.push_back(Effect::log("SERVER " + text));
  return out;
}

Effect request(const ClientState& c, const command::Command& cmd) {
  if (c.phase != Phase::Active) {
    throw NotConnected("no active remote connection to " + c.server);
  }
  if (c.ui_locked) {
    throw UiLocked("client interface is locked; enter the temporary PIN");
  }
  const std::string body = protocol::encode_frame(
      command::render_command(cmd, c.secret.activation_command), c.channel,
      protocol::derive_key(c.secret));
  return Effect::send_sms(c.server, body);
}

UnlockResult unlock_ui(ClientState& c, const std::string& pin) {
  if (c.phase != Phase::Active) {
    throw NotConnected("no active remote connection to " + c.server);
  }
  if (!c.temp_pin || pin != *c.temp_pin) return UnlockResult::WrongPin;
  c.ui_locked = false;
  return UnlockResult::Ok;
}

}  // namespace smsguard::client
