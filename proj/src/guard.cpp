#include "smsguard/guard.hpp"

namespace smsguard::guard {

bool is_msisdn(const std::string& s) {
  std::size_t i = (!s.empty() && s[0] == '+') ? 1 : 0;
  const std::size_t digits = s.size() - i;
  if (digits < 7 || digits > 15) return false;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  return true;
}

std::string normalize_msisdn(const std::string& s) {
  return (!s.empty() && s[0] == '+') ? s.substr(1) : s;
}

SenderCheck validate_sender(const std::string& sender,
                            const Msisdn& self_number) {
  if (!is_msisdn(sender)) return SenderCheck::NotMsisdn;
  if (normalize_msisdn(sender) == normalize_msisdn(self_number)) {
    return SenderCheck::SelfRequest;
  }
  return SenderCheck::Valid;
}

void purge_expired(GuardState& g, Timestamp now) {
  for (auto it = g.warnings.begin(); it != g.warnings.end();) {
    if (now - it->second.first_fail_at > kWarningTtl) {
      it = g.warnings.erase(it);
    } else {
      ++it;
    }
  }
}

SenderStatus sender_status(GuardState& g, const Msisdn& number,
                           Timestamp now) {
  purge_expired(g, now);
  return g.blocked.count(normalize_msisdn(number)) ? SenderStatus::Blocked
                                                   : SenderStatus::Allowed;
}

FailureResult record_failure(GuardState& g, const Msisdn& number,
                             Timestamp now) {
  const std::string key = normalize_msisdn(number);
  if (g.blocked.count(key)) {
    throw AlreadyBlocked("failure recorded for blocked number " + number);
  }
  purge_expired(g, now);
  auto it = g.warnings.find(key);
  if (it == g.warnings.end()) {
    g.warnings.emplace(key, WarningEntry{1, now});
    return {FailureResult::Kind::Warned, 1};
  }
  if (it->second.fail_count == 1) {
    it->second.fail_count = 2;
    return {FailureResult::Kind::Warned, 2};
  }
  g.warnings.erase(it);
  g.blocked.insert(key);
  return {FailureResult::Kind::Blocked, 0};
}

void block_now(GuardState& g, const Msisdn& number) {
  const std::string key = normalize_msisdn(number);
  g.warnings.erase(key);
  g.blocked.insert(key);
}

void clear_blocked(GuardState& g) { g.blocked.clear(); }

}  // namespace smsguard::guard
