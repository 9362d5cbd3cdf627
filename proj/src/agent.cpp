#include "smsguard/agent.hpp"

#include <cassert>
#include <cstdio>

#include "smsguard/protocol.hpp"

namespace smsguard::agent {

using command::Command;
using command::Kind;
using device::DeviceState;
using device::Session;
using device::Toggle;
using protocol::CipherKey;

namespace {

std::size_t digit_count(std::size_t n) {
  std::size_t d = 1;
  while (n >= 10) {
    n /= 10;
    ++d;
  }
  return d;
}

std::string format_coord(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s = buf;
  const std::size_t dot = s.find('.');
  std::size_t end = s.size();
  while (end - 1 > dot + 1 && s[end - 1] == '0') --end;
  return s.substr(0, end);
}

std::string location_report(const DeviceState& d, Timestamp now) {
  if (!d.location) return "LOC UNKNOWN";
  return "LOC " + format_coord(d.location->lat) + "," +
         format_coord(d.location->lon) + " " + format_timestamp(now);
}

// Channel-symmetric send: encrypted sessions get "$$" ++ cipher, plain ones
// the text as-is; oversized replies split first so every body fits 160.
void send_on_channel(std::vector<Effect>& out, const Msisdn& to, Channel ch,
                     const CipherKey& key, const std::string& plain) {
  const std::size_t overhead = ch == Channel::Encrypted ? 2 : 0;
  for (const auto& part : split_reply(plain, overhead)) {
    if (ch == Channel::Encrypted) {
      out.push_back(Effect::send_sms(to, "$$" + protocol::encrypt_text(part, key)));
    } else {
      out.push_back(Effect::send_sms(to, part));
    }
  }
}

void reply_to_peer(std::vector<Effect>& out, const DeviceState& d,
                   const Session& s, const std::string& plain) {
  send_on_channel(out, s.peer, s.channel, derive_key(d.settings.secret), plain);
}

}  // namespace

std::vector<std::string> split_reply(const std::string& reply,
                                     std::size_t overhead) {
  assert(overhead < kMaxSmsBody);
  const std::size_t limit = kMaxSmsBody - overhead;
  if (reply.size() <= limit) return {reply};

  // All parts share one chunk size, computed from the widest "[i/n] " prefix,
  // so the count stabilizes in a couple of iterations.
  std::size_t parts = (reply.size() + limit - 1) / limit;
  std::size_t chunk = 0;
  for (;;) {
    const std::size_t prefix = 4 + 2 * digit_count(parts);
    chunk = limit > prefix ? limit - prefix : 1;
    const std::size_t need = (reply.size() + chunk - 1) / chunk;
    if (need == parts) break;
    parts = need;
  }

  std::vector<std::string> out;
  out.reserve(parts);
  for (std::size_t i = 0; i < parts; ++i) {
    const std::string head =
        "[" + std::to_string(i + 1) + "/" + std::to_string(parts) + "] ";
    out.push_back(head + reply.substr(i * chunk, chunk));
  }
  return out;
}

std::vector<Effect> execute(DeviceState& d, const Command& cmd, Timestamp now) {
  assert(d.settings.session && cmd.kind != Kind::Connect);
  const Session session = *d.settings.session;
  std::vector<Effect> out;
  auto reply = [&](const std::string& plain) {
    reply_to_peer(out, d, session, plain);
  };
  const std::string canonical =
      command::render_command(cmd, d.settings.secret.activation_command);

  switch (cmd.kind) {
    case Kind::SilentOn:
    case Kind::SilentOff:
      device::apply_toggle(d, Toggle::Silent, cmd.kind == Kind::SilentOn);
      reply("OK " + canonical);
      break;
    case Kind::WifiOn:
    case Kind::WifiOff:
      device::apply_toggle(d, Toggle::Wifi, cmd.kind == Kind::WifiOn);
      reply("OK " + canonical);
      break;
    case Kind::GpsOn:
      device::apply_toggle(d, Toggle::Gps, true);
      reply("OK " + canonical);
      reply(location_report(d, now));
      break;
    case Kind::GpsOff:
      device::apply_toggle(d, Toggle::Gps, false);
      reply("OK " + canonical);
      break;
    case Kind::FlightOn:
      // Ack first; isolation only affects deliveries after this event.
      device::apply_toggle(d, Toggle::Flight, true);
      reply("OK " + canonical);
      break;
    case Kind::CallAlertOn:
    case Kind::CallAlertOff:
      d.settings.call_alert = cmd.kind == Kind::CallAlertOn;
      reply("OK " + canonical);
      break;
    case Kind::SmsDivertOn:
    case Kind::SmsDivertOff:
      d.settings.sms_divert = cmd.kind == Kind::SmsDivertOn;
      reply("OK " + canonical);
      break;
    case Kind::AutoReplyOn:
      d.settings.auto_reply = cmd.arg;
      reply("OK " + canonical);
      break;
    case Kind::AutoReplyOff:
      d.settings.auto_reply.reset();
      reply("OK " + canonical);
      break;
    case Kind::ContactLookup: {
      const auto matches = device::search_contacts(d, cmd.arg);
      if (matches.empty()) {
        reply("CONTACT NOT-FOUND " + cmd.arg);
      } else {
        for (const auto& c : matches) {
          reply("CONTACT " + c.name + " " + c.mobile + " " + c.email);
        }
      }
      break;
    }
    case Kind::Wipeout:
      device::wipeout(d);
      reply("OK " + canonical);
      break;
    case Kind::SignOff:
      d.settings.session.reset();
      d.locked = false;
      reply("SIGNED-OFF");
      break;
    case Kind::Connect:
      break;  // unreachable; see handle_sms
  }
  return out;
}

std::vector<Effect> handle_sms(DeviceState& d, const SmsMessage& msg,
                               Timestamp now) {
  if (!d.booted) throw device::NotBooted("SMS delivered to a powered-off device");
  std::vector<Effect> out;
  const protocol::FrameKind frame = protocol::classify_frame(msg.body);

  // (a) sender hygiene: web gateways and self requests never reach the guard.
  switch (guard::validate_sender(msg.sender, d.msisdn)) {
    case guard::SenderCheck::NotMsisdn:
      if (frame == protocol::FrameKind::Ordinary) {
        d.inbox.push_back(msg);
      } else {
        out.push_back(Effect::log("DROP NOT-MSISDN " + msg.sender));
      }
      return out;
    case guard::SenderCheck::SelfRequest:
      if (frame == protocol::FrameKind::Ordinary) {
        d.inbox.push_back(msg);
      } else {
        out.push_back(Effect::log("DROP SELF-REQUEST " + msg.sender));
      }
      return out;
    case guard::SenderCheck::Valid:
      break;
  }

  // (b) blocked numbers are dropped silently; no reply leaks our presence.
  if (guard::sender_status(d.guard, msg.sender, now) ==
      guard::SenderStatus::Blocked) {
    out.push_back(Effect::log("DROP BLOCKED " + msg.sender));
    return out;
  }

  const CipherKey key = derive_key(d.settings.secret);

  // (c) ordinary SMS: divert/auto-reply while a session is active, then store.
  if (frame == protocol::FrameKind::Ordinary) {
    if (d.settings.session) {
      const Session s = *d.settings.session;
      if (d.settings.sms_divert) {
        send_on_channel(out, s.peer, s.channel, key,
                        "SMS-FROM " + msg.sender + ": " + msg.body);
      }
      if (d.settings.auto_reply) {
        for (const auto& part : split_reply(*d.settings.auto_reply, 0)) {
          out.push_back(Effect::send_sms(msg.sender, part));
        }
      }
    }
    d.inbox.push_back(msg);
    return out;
  }

  const auto decoded = protocol::decode_frame(msg.body, key);
  const auto cmd = command::parse_command(
      decoded->command_text, d.settings.secret.activation_command);

  // (d) idle: only a correct Connect authenticates; everything else counts
  // as a failed access attempt.
  if (!d.settings.session) {
    if (cmd && cmd->kind == Kind::Connect &&
        cmd->arg == d.settings.secret.activation_pin) {
      d.settings.session =
          Session{msg.sender, decoded->channel, now};
      d.settings.trusted_remote = msg.sender;
      device::lock(d);
      send_on_channel(out, msg.sender, decoded->channel, key,
                      "CONNECTED " + d.msisdn);
    } else {
      const auto result = guard::record_failure(d.guard, msg.sender, now);
      const std::string verdict =
          result.kind == guard::FailureResult::Kind::Blocked
              ? "BLOCKED"
              : "WARNED-" + std::to_string(result.count);
      out.push_back(Effect::log("AUTH-FAIL " + msg.sender + " " + verdict));
    }
    return out;
  }

  const Session session = *d.settings.session;
  const bool from_peer = guard::normalize_msisdn(msg.sender) ==
                         guard::normalize_msisdn(session.peer);

  // (f) command from a third number during a session: immediate block + alert.
  if (!from_peer) {
    guard::block_now(d.guard, msg.sender);
    reply_to_peer(out, d, session, "INTRUDER " + msg.sender + " BLOCKED");
    return out;
  }

  // (e) command from the peer, replied on the session channel.
  if (cmd && cmd->kind == Kind::Connect) {
    if (cmd->arg == d.settings.secret.activation_pin) {
      reply_to_peer(out, d, session, "CONNECTED " + d.msisdn);  // idempotent
    } else {
      reply_to_peer(out, d, session, "ERR UNKNOWN-COMMAND");
    }
    return out;
  }
  if (!cmd) {
    reply_to_peer(out, d, session, "ERR UNKNOWN-COMMAND");
    return out;
  }
  return execute(d, *cmd, now);
}

std::vector<Effect> handle_call(DeviceState& d, const Msisdn& caller,
                                Timestamp now) {
  if (!d.booted) throw device::NotBooted("call delivered to a powered-off device");
  std::vector<Effect> out;
  d.call_log.push_back({caller, now});
  if (d.settings.call_alert && d.settings.session) {
    reply_to_peer(out, d, *d.settings.session,
                  "CALL-ALERT " + caller + " " + format_timestamp(now));
  }
  return out;
}

std::vector<Effect> handle_boot(DeviceState& d, Timestamp now) {
  (void)now;
  if (d.booted) throw AlreadyBooted("device " + d.msisdn + " is already on");
  d.booted = true;
  std::vector<Effect> out;
  if (d.settings.session) device::lock(d);
  if (d.sim_id != d.last_boot_sim && d.settings.trusted_remote) {
    const Channel ch =
        d.settings.session ? d.settings.session->channel : Channel::Plain;
    send_on_channel(out, *d.settings.trusted_remote, ch,
                    derive_key(d.settings.secret),
                    "SIM-CHANGED old=" + d.last_boot_sim + " new=" + d.sim_id +
                        " number=" + d.msisdn);
  }
  d.last_boot_sim = d.sim_id;
  return out;
}

std::vector<Effect> gps_tick(DeviceState& d, Timestamp now) {
  std::vector<Effect> out;
  if (!d.booted || !d.gps_tracking || !d.settings.session) return out;
  reply_to_peer(out, d, *d.settings.session, location_report(d, now));
  return out;
}

}  // namespace smsguard::agent
