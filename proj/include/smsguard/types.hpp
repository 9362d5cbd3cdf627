#pragma once

#include <cstdint>
#include <string>

namespace smsguard {

// Simulated time: whole seconds since 2012-01-01T00:00:00Z.
using Timestamp = std::int64_t;
using Seconds = std::int64_t;

// Subscriber number in international digit form. Kept as text so raw
// (possibly alphanumeric) sender ids can flow through the same plumbing
// until guard::validate_sender sorts them out.
using Msisdn = std::string;

enum class Channel { Plain, Encrypted };

inline constexpr std::size_t kMaxSmsBody = 160;

// The only wire unit in the system.
struct SmsMessage {
  std::string sender;  // raw sender id; not necessarily a valid MSISDN
  Msisdn recipient;
  std::string body;    // printable text, at most kMaxSmsBody chars
  Timestamp at = 0;

  bool operator==(const SmsMessage&) const = default;
};

// Output unit of the agent and client state machines. The network routes
// these; tests assert on them.
struct Effect {
  enum class Kind { SendSms, Log };

  Kind kind = Kind::Log;
  Msisdn to;         // SendSms only
  std::string text;  // SMS body, or log line

  static Effect send_sms(Msisdn to, std::string body);
  static Effect log(std::string text);

  bool operator==(const Effect&) const = default;
};

// True iff every character is in the printable range 32..126.
bool is_printable_text(const std::string& s);

// ISO-8601 UTC, e.g. "2012-01-01T00:10:00Z".
std::string format_timestamp(Timestamp t);

// Strips leading/trailing spaces.
std::string trim(const std::string& s);

const char* channel_name(Channel c);

}  // namespace smsguard
