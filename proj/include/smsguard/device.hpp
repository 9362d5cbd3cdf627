#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "smsguard/guard.hpp"
#include "smsguard/protocol.hpp"
#include "smsguard/types.hpp"

namespace smsguard::device {

struct Contact {
  std::string name;  // non-empty
  Msisdn mobile;
  std::string email;

  bool operator==(const Contact&) const = default;
};

struct CallRecord {
  Msisdn caller;
  Timestamp at = 0;

  bool operator==(const CallRecord&) const = default;
};

// Exactly one remote peer controls the device while this exists; the device
// stays locked for the session's lifetime.
struct Session {
  Msisdn peer;
  Channel channel = Channel::Plain;
  Timestamp since = 0;

  bool operator==(const Session&) const = default;
};

struct Settings {
  protocol::SharedSecret secret;
  std::string login_pin;  // [0-9]{4,8}; unlocks locally and ends the session
  bool call_alert = false;
  bool sms_divert = false;
  std::optional<std::string> auto_reply;
  std::optional<Session> session;
  std::optional<Msisdn> trusted_remote;  // last authenticated peer; survives sign-off

  bool operator==(const Settings&) const = default;
};

struct GeoPoint {
  double lat = 0;
  double lon = 0;

  bool operator==(const GeoPoint&) const = default;
};

// The simulated protected phone. Mutated only by the agent state machines
// and the scenario runner.
struct DeviceState {
  Msisdn msisdn;
  std::string sim_id = "SIM0";
  bool booted = false;
  bool locked = false;
  bool profile_silent = false;
  bool wifi_on = false;
  bool gps_tracking = false;
  bool flight_mode = false;
  std::optional<GeoPoint> location;
  std::vector<Contact> contacts;
  std::vector<SmsMessage> inbox;
  std::vector<CallRecord> call_log;
  std::vector<std::string> user_files;
  Settings settings;
  guard::GuardState guard;
  std::string last_boot_sim = "SIM0";

  bool operator==(const DeviceState&) const = default;
};

struct NotBooted : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DeviceBooted : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotLocked : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EmptyQuery : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_, const std::string& what_)
      : std::runtime_error("line " + std::to_string(line_) + ": " + what_),
        line(line_) {}
};

enum class Toggle { Silent, Wifi, Gps, Flight };

// Flight has no remote "off": the command set has no $FLIGHT-OFF, so the flag
// only clears through a local unlock.
void apply_toggle(DeviceState& d, Toggle t, bool on);

void lock(DeviceState& d);

enum class UnlockResult { Ok, WrongPin };

// Correct login pin unlocks, ends any session, and clears flight mode.
// Wrong local attempts are not guard-counted.
UnlockResult unlock(DeviceState& d, const std::string& pin);

// Empties contacts, inbox, call log, and user files. Settings, guard lists,
// session, lock state, and toggles all survive.
void wipeout(DeviceState& d);

// Case-insensitive substring match on names, stored order, at most 5 results.
std::vector<Contact> search_contacts(const DeviceState& d,
                                     const std::string& query);

// SIM changes happen powered off; detection runs at the next boot.
void swap_sim(DeviceState& d, const std::string& new_sim,
              const Msisdn& new_msisdn);

void shutdown(DeviceState& d);

// Line-oriented "key=value" text, keys sorted lexicographically, one record
// per line; list stores index as contacts.N.name etc. load(save(d)) == d.
std::string save(const DeviceState& d);
DeviceState load(const std::string& text);

}  // namespace smsguard::device
