#pragma once

#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "smsguard/command.hpp"
#include "smsguard/protocol.hpp"
#include "smsguard/types.hpp"

namespace smsguard::client {

enum class Phase { AwaitingConfirmation, Active, Ended };

// The smartphone-side controller: sends the connect request, mirrors what the
// protected device reports, and guards its own screen with a temporary PIN.
struct ClientState {
  Msisdn self;
  Msisdn server;
  protocol::SharedSecret secret;
  Channel channel = Channel::Plain;
  Phase phase = Phase::AwaitingConfirmation;
  std::optional<std::string> temp_pin;  // 4 digits, drawn on confirmation
  bool ui_locked = false;
  std::vector<std::pair<Msisdn, std::string>> missed_calls;  // number, iso-ts
  std::vector<std::pair<std::string, std::string>> inbox_mirror;  // sender, body
  std::vector<std::string> contact_results;
  std::vector<std::string> location_reports;

  bool operator==(const ClientState&) const = default;
};

struct SelfTarget : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotConnected : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UiLocked : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BeginConnection {
  ClientState state;
  Effect request;  // the outbound connect SMS
};

BeginConnection begin_connection(const Msisdn& self, const Msisdn& server,
                                 const protocol::SharedSecret& secret,
                                 Channel channel);

// Interprets server replies on the session channel. The confirmation draws a
// temporary login PIN from rng, locks the UI, and logs the pin exactly once;
// everything else feeds the mirror views.
std::vector<Effect> handle_inbound(ClientState& c, const SmsMessage& msg,
                                   std::mt19937& rng);

// Encodes one command for the wire. Requires an active, unlocked session.
Effect request(const ClientState& c, const command::Command& cmd);

enum class UnlockResult { Ok, WrongPin };

// No lockout here: retry counting is the server side's job.
UnlockResult unlock_ui(ClientState& c, const std::string& pin);

}  // namespace smsguard::client
