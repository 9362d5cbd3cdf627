#pragma once

#include <optional>
#include <string>

namespace smsguard::command {

enum class Kind {
  Connect,
  SilentOn,
  SilentOff,
  GpsOn,
  GpsOff,
  WifiOn,
  WifiOff,
  CallAlertOn,
  CallAlertOff,
  SmsDivertOn,
  SmsDivertOff,
  AutoReplyOn,
  AutoReplyOff,
  ContactLookup,
  Wipeout,
  FlightOn,
  SignOff,
};

// Closed instruction set. `arg` carries the pin for Connect, the message for
// AutoReplyOn, the query for ContactLookup; empty otherwise. Arguments are
// stored trimmed.
struct Command {
  Kind kind = Kind::SignOff;
  std::string arg;

  bool operator==(const Command&) const = default;
};

// Case-sensitive match against the canonical uppercase forms ($SILENT-ON,
// $SMS-REPLY <msg>, ..., $<activation_command> <pin>). Anything else yields
// nullopt; callers treat that as an authentication failure when idle.
// "$SMS-REPLY OFF" always means AutoReplyOff, so a literal reply text "OFF"
// cannot be expressed.
std::optional<Command> parse_command(const std::string& command_text,
                                     const std::string& activation_command);

// Canonical text; parse_command(render_command(c, a), a) == c.
std::string render_command(const Command& cmd,
                           const std::string& activation_command);

}  // namespace smsguard::command
