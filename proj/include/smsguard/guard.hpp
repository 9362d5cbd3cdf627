#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>

#include "smsguard/types.hpp"

namespace smsguard::guard {

// Warning entries live 48 hours from the first failure that created them.
inline constexpr Timestamp kWarningTtl = 48 * 3600;

// \+?[0-9]{7,15}; alphanumeric sender ids (web SMS gateways) are not MSISDNs.
bool is_msisdn(const std::string& s);

// Strips the leading '+' so numbers compare by digits alone.
std::string normalize_msisdn(const std::string& s);

enum class SenderCheck { Valid, NotMsisdn, SelfRequest };

SenderCheck validate_sender(const std::string& sender,
                            const Msisdn& self_number);

struct WarningEntry {
  int fail_count = 1;  // 1 or 2; the third failure converts to a block
  Timestamp first_fail_at = 0;

  bool operator==(const WarningEntry&) const = default;
};

// A number is never in warnings and blocked at the same time. Keys are
// normalized numbers.
struct GuardState {
  std::map<std::string, WarningEntry> warnings;
  std::set<std::string> blocked;

  bool operator==(const GuardState&) const = default;
};

struct AlreadyBlocked : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Drops warning entries with now - first_fail_at > kWarningTtl.
void purge_expired(GuardState& g, Timestamp now);

enum class SenderStatus { Allowed, Blocked };

SenderStatus sender_status(GuardState& g, const Msisdn& number, Timestamp now);

struct FailureResult {
  enum class Kind { Warned, Blocked };
  Kind kind = Kind::Warned;
  int count = 0;  // meaningful for Warned

  bool operator==(const FailureResult&) const = default;
};

// First two failures inside the window warn; the third converts the entry to
// a permanent block. Throws AlreadyBlocked if the number is already blocked.
FailureResult record_failure(GuardState& g, const Msisdn& number,
                             Timestamp now);

// Immediate permanent block (intrusion during an active session). Idempotent.
void block_now(GuardState& g, const Msisdn& number);

// Local owner action: empties the block list, leaves warnings untouched.
void clear_blocked(GuardState& g);

}  // namespace smsguard::guard
