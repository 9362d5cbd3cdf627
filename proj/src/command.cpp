#include "smsguard/command.hpp"

#include "smsguard/protocol.hpp"
#include "smsguard/types.hpp"

namespace smsguard::command {

namespace {

struct FixedForm {
  const char* text;
  Kind kind;
};

// No-argument forms; matched by exact equality against the full body.
constexpr FixedForm kFixedForms[] = {
    {"$SILENT-ON", Kind::SilentOn},       {"$SILENT-OFF", Kind::SilentOff},
    {"$GPS-ON", Kind::GpsOn},             {"$GPS-OFF", Kind::GpsOff},
    {"$WIFI-ON", Kind::WifiOn},           {"$WIFI-OFF", Kind::WifiOff},
    {"$CALLALERT-ON", Kind::CallAlertOn}, {"$CALLALERT-OFF", Kind::CallAlertOff},
    {"$SMSDIVERT-ON", Kind::SmsDivertOn}, {"$SMSDIVERT-OFF", Kind::SmsDivertOff},
    {"$WIPEOUT", Kind::Wipeout},          {"$FLIGHT-ON", Kind::FlightOn},
    {"$SIGNOFF", Kind::SignOff},
};

// Argument after "<keyword> ": the remainder verbatim, trimmed at the ends.
std::optional<std::string> arg_after(const std::string& text,
                                     const std::string& keyword) {
  const std::string prefix = keyword + " ";
  if (text.rfind(prefix, 0) != 0) return std::nullopt;
  return trim(text.substr(prefix.size()));
}

}  // namespace

std::optional<Command> parse_command(const std::string& command_text,
                                     const std::string& activation_command) {
  if (command_text.empty() || command_text[0] != '$') return std::nullopt;

  for (const auto& form : kFixedForms) {
    if (command_text == form.text) return Command{form.kind, ""};
  }

  if (auto msg = arg_after(command_text, "$SMS-REPLY")) {
    if (msg->empty()) return std::nullopt;
    if (*msg == "OFF") return Command{Kind::AutoReplyOff, ""};
    return Command{Kind::AutoReplyOn, *msg};
  }

  if (auto query = arg_after(command_text, "$CONTACT")) {
    if (query->empty()) return std::nullopt;
    return Command{Kind::ContactLookup, *query};
  }

  if (auto pin = arg_after(command_text, "$" + activation_command)) {
    if (!protocol::valid_activation_pin(*pin)) return std::nullopt;
    return Command{Kind::Connect, *pin};
  }

  return std::nullopt;
}

std::string render_command(const Command& cmd,
                           const std::string& activation_command) {
  switch (cmd.kind) {
    case Kind::Connect:
      return "$" + activation_command + " " + cmd.arg;
    case Kind::SilentOn:
      return "$SILENT-ON";
    case Kind::SilentOff:
      return "$SILENT-OFF";
    case Kind::GpsOn:
      return "$GPS-ON";
    case Kind::GpsOff:
      return "$GPS-OFF";
    case Kind::WifiOn:
      return "$WIFI-ON";
    case Kind::WifiOff:
      return "$WIFI-OFF";
    case Kind::CallAlertOn:
      return "$CALLALERT-ON";
    case Kind::CallAlertOff:
      return "$CALLALERT-OFF";
    case Kind::SmsDivertOn:
      return "$SMSDIVERT-ON";
    case Kind::SmsDivertOff:
      return "$SMSDIVERT-OFF";
    case Kind::AutoReplyOn:
      return "$SMS-REPLY " + cmd.arg;
    case Kind::AutoReplyOff:
      return "$SMS-REPLY OFF";
    case Kind::ContactLookup:
      return "$CONTACT " + cmd.arg;
    case Kind::Wipeout:
      return "$WIPEOUT";
    case Kind::FlightOn:
      return "$FLIGHT-ON";
    case Kind::SignOff:
      return "$SIGNOFF";
  }
  return {};
}

}  // namespace smsguard::command
