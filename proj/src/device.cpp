#include "smsguard/device.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <sstream>

namespace smsguard::device {

namespace {

void require_booted(const DeviceState& d) {
  if (!d.booted) throw NotBooted("device " + d.msisdn + " is powered off");
}

std::string lowered(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

}  // namespace

void apply_toggle(DeviceState& d, Toggle t, bool on) {
  require_booted(d);
  switch (t) {
    case Toggle::Silent:
      d.profile_silent = on;
      break;
    case Toggle::Wifi:
      d.wifi_on = on;
      break;
    case Toggle::Gps:
      d.gps_tracking = on;
      break;
    case Toggle::Flight:
      d.flight_mode = on;
      break;
  }
}

void lock(DeviceState& d) {
  require_booted(d);
  d.locked = true;
}

UnlockResult unlock(DeviceState& d, const std::string& pin) {
  if (!d.locked) throw NotLocked("device " + d.msisdn + " is not locked");
  if (pin != d.settings.login_pin) return UnlockResult::WrongPin;
  d.locked = false;
  d.settings.session.reset();
  d.flight_mode = false;
  return UnlockResult::Ok;
}

void wipeout(DeviceState& d) {
  require_booted(d);
  d.contacts.clear();
  d.inbox.clear();
  d.call_log.clear();
  d.user_files.clear();
}

std::vector<Contact> search_contacts(const DeviceState& d,
                                     const std::string& query) {
  if (query.empty()) throw EmptyQuery("contact query is empty");
  const std::string needle = lowered(query);
  std::vector<Contact> out;
  for (const auto& c : d.contacts) {
    if (lowered(c.name).find(needle) != std::string::npos) {
      out.push_back(c);
      if (out.size() == 5) break;
    }
  }
  return out;
}

void swap_sim(DeviceState& d, const std::string& new_sim,
              const Msisdn& new_msisdn) {
  if (d.booted) {
    throw DeviceBooted("cannot swap the SIM while " + d.msisdn + " is on");
  }
  d.sim_id = new_sim;
  d.msisdn = new_msisdn;
}

void shutdown(DeviceState& d) {
  require_booted(d);
  d.booted = false;
}

// ---------------------------------------------------------------------------
// Persistence

namespace {

std::string escape_value(const std::string& v) {
  std::string out;
  out.reserve(v.size());
  for (char c : v) {
    switch (c) {
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\r':
        out += "\\r";
        break;
      default:
        out += c;
    }
  }
  return out;
}

std::string unescape_value(const std::string& v, int line) {
  std::string out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != '\\') {
      out += v[i];
      continue;
    }
    if (i + 1 >= v.size()) throw ParseError(line, "dangling escape");
    switch (v[++i]) {
      case '\\':
        out += '\\';
        break;
      case 'n':
        out += '\n';
        break;
      case 'r':
        out += '\r';
        break;
      default:
        throw ParseError(line, "unknown escape sequence");
    }
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Bound to one load() call: key/value map plus line numbers for errors.
struct Records {
  std::map<std::string, std::string> values;
  std::map<std::string, int> lines;

  int line_of(const std::string& key) const {
    auto it = lines.find(key);
    return it == lines.end() ? 0 : it->second;
  }

  bool has(const std::string& key) const { return values.count(key) != 0; }

  std::string take(const std::string& key) {
    auto it = values.find(key);
    if (it == values.end()) {
      throw ParseError(0, "missing required key '" + key + "'");
    }
    std::string v = it->second;
    values.erase(it);
    return v;
  }

  std::optional<std::string> take_optional(const std::string& key) {
    auto it = values.find(key);
    if (it == values.end()) return std::nullopt;
    std::string v = it->second;
    values.erase(it);
    return v;
  }
};

bool parse_bool(Records& r, const std::string& key) {
  const std::string v = r.take(key);
  if (v == "0") return false;
  if (v == "1") return true;
  throw ParseError(r.line_of(key), "flag '" + key + "' must be 0 or 1");
}

Timestamp parse_ts(const Records& r, const std::string& key,
                   const std::string& v) {
  if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos) {
    throw ParseError(r.line_of(key), "'" + key + "' must be a whole number");
  }
  return std::stoll(v);
}

double parse_double(const Records& r, const std::string& key,
                    const std::string& v) {
  const char* begin = v.c_str();
  char* end = nullptr;
  const double d = std::strtod(begin, &end);
  if (end != begin + v.size() || v.empty()) {
    throw ParseError(r.line_of(key), "'" + key + "' must be a number");
  }
  return d;
}

std::string index_key(const std::string& store, std::size_t i,
                      const std::string& field) {
  std::string k = store + "." + std::to_string(i);
  if (!field.empty()) k += "." + field;
  return k;
}

}  // namespace

std::string save(const DeviceState& d) {
  std::vector<std::pair<std::string, std::string>> kv;
  auto put = [&](const std::string& k, const std::string& v) {
    kv.emplace_back(k, v);
  };
  auto put_bool = [&](const std::string& k, bool v) { put(k, v ? "1" : "0"); };

  put("msisdn", d.msisdn);
  put("sim_id", d.sim_id);
  put("last_boot_sim", d.last_boot_sim);
  put_bool("booted", d.booted);
  put_bool("locked", d.locked);
  put_bool("profile_silent", d.profile_silent);
  put_bool("wifi_on", d.wifi_on);
  put_bool("gps_tracking", d.gps_tracking);
  put_bool("flight_mode", d.flight_mode);
  if (d.location) {
    put("location.lat", format_double(d.location->lat));
    put("location.lon", format_double(d.location->lon));
  }

  for (std::size_t i = 0; i < d.contacts.size(); ++i) {
    put(index_key("contacts", i, "name"), d.contacts[i].name);
    put(index_key("contacts", i, "mobile"), d.contacts[i].mobile);
    put(index_key("contacts", i, "email"), d.contacts[i].email);
  }
  for (std::size_t i = 0; i < d.inbox.size(); ++i) {
    put(index_key("inbox", i, "sender"), d.inbox[i].sender);
    put(index_key("inbox", i, "recipient"), d.inbox[i].recipient);
    put(index_key("inbox", i, "body"), d.inbox[i].body);
    put(index_key("inbox", i, "at"), std::to_string(d.inbox[i].at));
  }
  for (std::size_t i = 0; i < d.call_log.size(); ++i) {
    put(index_key("call_log", i, "caller"), d.call_log[i].caller);
    put(index_key("call_log", i, "at"), std::to_string(d.call_log[i].at));
  }
  for (std::size_t i = 0; i < d.user_files.size(); ++i) {
    put(index_key("user_files", i, ""), d.user_files[i]);
  }

  put("settings.activation_command", d.settings.secret.activation_command);
  put("settings.activation_pin", d.settings.secret.activation_pin);
  put("settings.login_pin", d.settings.login_pin);
  put_bool("settings.call_alert", d.settings.call_alert);
  put_bool("settings.sms_divert", d.settings.sms_divert);
  if (d.settings.auto_reply) put("settings.auto_reply", *d.settings.auto_reply);
  if (d.settings.session) {
    put("settings.session.peer", d.settings.session->peer);
    put("settings.session.channel", channel_name(d.settings.session->channel));
    put("settings.session.since", std::to_string(d.settings.session->since));
  }
  if (d.settings.trusted_remote) {
    put("settings.trusted_remote", *d.settings.trusted_remote);
  }

  std::size_t i = 0;
  for (const auto& n : d.guard.blocked) {
    put(index_key("guard.blocked", i++, ""), n);
  }
  i = 0;
  for (const auto& [number, entry] : d.guard.warnings) {
    put(index_key("guard.warnings", i, "number"), number);
    put(index_key("guard.warnings", i, "count"),
        std::to_string(entry.fail_count));
    put(index_key("guard.warnings", i, "first_fail_at"),
        std::to_string(entry.first_fail_at));
    ++i;
  }

  std::sort(kv.begin(), kv.end());
  std::string out;
  for (const auto& [k, v] : kv) {
    out += k;
    out += '=';
    out += escape_value(v);
    out += '\n';
  }
  return out;
}

DeviceState load(const std::string& text) {
  Records r;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (raw.empty()) continue;
    const std::size_t eq = raw.find('=');
    if (eq == std::string::npos) {
      throw ParseError(line, "expected key=value");
    }
    const std::string key = raw.substr(0, eq);
    if (key.empty()) throw ParseError(line, "empty key");
    if (r.values.count(key)) throw ParseError(line, "duplicate key '" + key + "'");
    r.values[key] = unescape_value(raw.substr(eq + 1), line);
    r.lines[key] = line;
  }

  DeviceState d;
  d.msisdn = r.take("msisdn");
  d.sim_id = r.take("sim_id");
  d.last_boot_sim = r.take("last_boot_sim");
  d.booted = parse_bool(r, "booted");
  d.locked = parse_bool(r, "locked");
  d.profile_silent = parse_bool(r, "profile_silent");
  d.wifi_on = parse_bool(r, "wifi_on");
  d.gps_tracking = parse_bool(r, "gps_tracking");
  d.flight_mode = parse_bool(r, "flight_mode");

  if (r.has("location.lat") || r.has("location.lon")) {
    const std::string lat = r.take("location.lat");
    const std::string lon = r.take("location.lon");
    d.location = GeoPoint{parse_double(r, "location.lat", lat),
                          parse_double(r, "location.lon", lon)};
  }

  for (std::size_t i = 0; r.has(index_key("contacts", i, "name")); ++i) {
    Contact c;
    c.name = r.take(index_key("contacts", i, "name"));
    c.mobile = r.take(index_key("contacts", i, "mobile"));
    c.email = r.take(index_key("contacts", i, "email"));
    if (c.name.empty()) {
      throw ParseError(0, "contact " + std::to_string(i) + " has no name");
    }
    d.contacts.push_back(std::move(c));
  }
  for (std::size_t i = 0; r.has(index_key("inbox", i, "sender")); ++i) {
    SmsMessage m;
    m.sender = r.take(index_key("inbox", i, "sender"));
    m.recipient = r.take(index_key("inbox", i, "recipient"));
    m.body = r.take(index_key("inbox", i, "body"));
    const std::string at_key = index_key("inbox", i, "at");
    m.at = parse_ts(r, at_key, r.take(at_key));
    d.inbox.push_back(std::move(m));
  }
  for (std::size_t i = 0; r.has(index_key("call_log", i, "caller")); ++i) {
    CallRecord c;
    c.caller = r.take(index_key("call_log", i, "caller"));
    const std::string at_key = index_key("call_log", i, "at");
    c.at = parse_ts(r, at_key, r.take(at_key));
    d.call_log.push_back(std::move(c));
  }
  for (std::size_t i = 0; r.has(index_key("user_files", i, "")); ++i) {
    d.user_files.push_back(r.take(index_key("user_files", i, "")));
  }

  d.settings.secret.activation_command = r.take("settings.activation_command");
  d.settings.secret.activation_pin = r.take("settings.activation_pin");
  d.settings.login_pin = r.take("settings.login_pin");
  d.settings.call_alert = parse_bool(r, "settings.call_alert");
  d.settings.sms_divert = parse_bool(r, "settings.sms_divert");
  d.settings.auto_reply = r.take_optional("settings.auto_reply");
  if (r.has("settings.session.peer")) {
    Session s;
    s.peer = r.take("settings.session.peer");
    const std::string ch = r.take("settings.session.channel");
    if (ch == "plain") {
      s.channel = Channel::Plain;
    } else if (ch == "encrypted") {
      s.channel = Channel::Encrypted;
    } else {
      throw ParseError(r.line_of("settings.session.channel"),
                       "channel must be plain or encrypted");
    }
    const std::string since = r.take("settings.session.since");
    s.since = parse_ts(r, "settings.session.since", since);
    d.settings.session = std::move(s);
  }
  d.settings.trusted_remote = r.take_optional("settings.trusted_remote");

  for (std::size_t i = 0; r.has(index_key("guard.blocked", i, "")); ++i) {
    d.guard.blocked.insert(r.take(index_key("guard.blocked", i, "")));
  }
  for (std::size_t i = 0; r.has(index_key("guard.warnings", i, "number"));
       ++i) {
    const std::string number = r.take(index_key("guard.warnings", i, "number"));
    const std::string count_key = index_key("guard.warnings", i, "count");
    const std::string count = r.take(count_key);
    if (count != "1" && count != "2") {
      throw ParseError(r.line_of(count_key), "warning count must be 1 or 2");
    }
    const std::string at_key = index_key("guard.warnings", i, "first_fail_at");
    const Timestamp at = parse_ts(r, at_key, r.take(at_key));
    d.guard.warnings[number] = guard::WarningEntry{count == "1" ? 1 : 2, at};
  }

  if (!r.values.empty()) {
    const auto& [key, value] = *r.values.begin();
    (void)value;
    throw ParseError(r.line_of(key), "unknown key '" + key + "'");
  }
  for (const auto& [number, entry] : d.guard.warnings) {
    (void)entry;
    if (d.guard.blocked.count(number)) {
      throw ParseError(0, "'" + number + "' is both warned and blocked");
    }
  }
  return d;
}

}  // namespace smsguard::device
