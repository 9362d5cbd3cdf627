#include "smsguard/types.hpp"

#include <cstdio>

namespace smsguard {

Effect Effect::send_sms(Msisdn to, std::string body) {
  Effect e;
  e.kind = Kind::SendSms;
  e.to = std::move(to);
  e.text = std::move(body);
  return e;
}

Effect Effect::log(std::string text) {
  Effect e;
  e.kind = Kind::Log;
  e.text = std::move(text);
  return e;
}

bool is_printable_text(const std::string& s) {
  for (unsigned char c : s) {
    if (c < 32 || c > 126) return false;
  }
  return true;
}

namespace {

// Days from 1970-01-01 to the simulated epoch 2012-01-01.
constexpr long long kEpochDays = 15340;

// Gregorian date from a day count relative to 1970-01-01.
void civil_from_days(long long z, int& year, unsigned& month, unsigned& day) {
  z += 719468;
  const long long era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const long long y = static_cast<long long>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  day = doy - (153 * mp + 2) / 5 + 1;
  month = mp < 10 ? mp + 3 : mp - 9;
  year = static_cast<int>(y + (month <= 2));
}

}  // namespace

std::string format_timestamp(Timestamp t) {
  long long days = t / 86400;
  long long secs = t % 86400;
  if (secs < 0) {
    secs += 86400;
    days -= 1;
  }
  int year;
  unsigned month, day;
  civil_from_days(kEpochDays + days, year, month, day);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lld:%02lldZ", year,
                month, day, secs / 3600, (secs / 60) % 60, secs % 60);
  return buf;
}

std::string trim(const std::string& s) {
  const std::size_t b = s.find_first_not_of(' ');
  if (b == std::string::npos) return "";
  const std::size_t e = s.find_last_not_of(' ');
  return s.substr(b, e - b + 1);
}

const char* channel_name(Channel c) {
  return c == Channel::Encrypted ? "encrypted" : "plain";
}

}  // namespace smsguard
