#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "smsguard/command.hpp"
#include "smsguard/device.hpp"
#include "smsguard/types.hpp"

namespace smsguard::agent {

struct AlreadyBooted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Inbound SMS decision tree. Sender validation and the guard run first; then
// ordinary SMS get stored (and diverted/auto-replied during a session), and
// command frames either authenticate a new session, execute for the peer, or
// trip the intrusion block. All anomalies surface as Log effects.
std::vector<Effect> handle_sms(device::DeviceState& d, const SmsMessage& msg,
                               Timestamp now);

// Runs one parsed command for the session peer and replies on the session
// channel. Precondition: a session is active and cmd is not Connect
// (handle_sms answers re-connects itself).
std::vector<Effect> execute(device::DeviceState& d,
                            const command::Command& cmd, Timestamp now);

// Logs the call; alerts the session peer when call_alert is on.
std::vector<Effect> handle_call(device::DeviceState& d, const Msisdn& caller,
                                Timestamp now);

// Power-on: re-locks an in-session device and reports a SIM change to the
// trusted remote from the new number.
std::vector<Effect> handle_boot(device::DeviceState& d, Timestamp now);

// Periodic location report; active only with gps_tracking and a session.
std::vector<Effect> gps_tick(device::DeviceState& d, Timestamp now);

// Splits one logical reply into parts that stay within the 160-char SMS body
// once `overhead` channel bytes ("$$" on the encrypted channel) are added.
// Split parts carry "[i/n] " prefixes; stripping and concatenating them
// reproduces the original reply.
std::vector<std::string> split_reply(const std::string& reply,
                                     std::size_t overhead);

}  // namespace smsguard::agent
