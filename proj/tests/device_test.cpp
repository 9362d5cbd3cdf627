#include "smsguard/device.hpp"

#include <random>

#include "doctest.h"

using namespace smsguard;
using namespace smsguard::device;

namespace {

DeviceState booted_device() {
  DeviceState d;
  d.msisdn = "+919000000001";
  d.settings.secret = {"MYDOB", "1989"};
  d.settings.login_pin = "4321";
  d.booted = true;
  return d;
}

std::string random_text(std::mt19937& rng, std::size_t max_len) {
  std::string s(rng() % (max_len + 1), ' ');
  for (auto& c : s) c = static_cast<char>(32 + rng() % 95);
  return s;
}

Msisdn random_msisdn(std::mt19937& rng) {
  std::string s = rng() % 2 ? "+" : "";
  const std::size_t len = 7 + rng() % 9;
  for (std::size_t i = 0; i < len; ++i) {
    s += static_cast<char>('0' + rng() % 10);
  }
  return s;
}

// Arbitrary reachable state for the persistence round-trip property.
DeviceState random_state(std::mt19937& rng) {
  DeviceState d;
  d.msisdn = random_msisdn(rng);
  d.sim_id = "SIM" + std::to_string(rng() % 100);
  d.last_boot_sim = rng() % 2 ? d.sim_id : "SIM-OLD";
  d.booted = rng() % 2;
  d.locked = rng() % 2;
  d.profile_silent = rng() % 2;
  d.wifi_on = rng() % 2;
  d.gps_tracking = rng() % 2;
  d.flight_mode = rng() % 2;
  if (rng() % 2) {
    d.location = GeoPoint{(static_cast<double>(rng() % 180000) / 1000.0) - 90,
                          (static_cast<double>(rng() % 360000) / 1000.0) - 180};
  }
  const std::size_t contacts = rng() % 12;
  for (std::size_t i = 0; i < contacts; ++i) {
    d.contacts.push_back({"c" + random_text(rng, 10), random_msisdn(rng),
                          random_text(rng, 12)});
  }
  const std::size_t inbox = rng() % 4;
  for (std::size_t i = 0; i < inbox; ++i) {
    d.inbox.push_back({random_text(rng, 12), d.msisdn, random_text(rng, 40),
                       static_cast<Timestamp>(rng() % 100000)});
  }
  const std::size_t calls = rng() % 3;
  for (std::size_t i = 0; i < calls; ++i) {
    d.call_log.push_back(
        {random_msisdn(rng), static_cast<Timestamp>(rng() % 100000)});
  }
  const std::size_t files = rng() % 3;
  for (std::size_t i = 0; i < files; ++i) {
    d.user_files.push_back("f" + random_text(rng, 15));
  }
  d.settings.secret = {"GUARD", "123456"};
  d.settings.login_pin = "99887766";
  d.settings.call_alert = rng() % 2;
  d.settings.sms_divert = rng() % 2;
  if (rng() % 2) d.settings.auto_reply = "r" + random_text(rng, 20);
  if (rng() % 2) {
    Session s;
    s.peer = random_msisdn(rng);
    s.channel = rng() % 2 ? Channel::Encrypted : Channel::Plain;
    s.since = static_cast<Timestamp>(rng() % 100000);
    d.settings.trusted_remote = s.peer;
    d.settings.session = s;
    d.locked = true;
  } else if (rng() % 2) {
    d.settings.trusted_remote = random_msisdn(rng);
  }
  const std::size_t warned = rng() % 3;
  for (std::size_t i = 0; i < warned; ++i) {
    d.guard.warnings["91900000000" + std::to_string(i)] =
        guard::WarningEntry{1 + static_cast<int>(rng() % 2),
                            static_cast<Timestamp>(rng() % 100000)};
  }
  const std::size_t blocked = rng() % 3;
  for (std::size_t i = 0; i < blocked; ++i) {
    d.guard.blocked.insert("91800000000" + std::to_string(i));
  }
  return d;
}

}  // namespace

TEST_CASE("toggles require a booted device") {
  DeviceState d = booted_device();
  apply_toggle(d, Toggle::Silent, true);
  CHECK(d.profile_silent);
  apply_toggle(d, Toggle::Silent, true);  // idempotent
  CHECK(d.profile_silent);
  apply_toggle(d, Toggle::Wifi, false);
  CHECK_FALSE(d.wifi_on);
  apply_toggle(d, Toggle::Gps, true);
  CHECK(d.gps_tracking);
  apply_toggle(d, Toggle::Flight, true);
  CHECK(d.flight_mode);

  DeviceState off;
  CHECK_THROWS_AS(apply_toggle(off, Toggle::Silent, true), NotBooted);
}

TEST_CASE("lock and unlock") {
  DeviceState d = booted_device();
  lock(d);
  CHECK(d.locked);
  lock(d);  // idempotent
  CHECK(d.locked);
  CHECK(unlock(d, "0000") == UnlockResult::WrongPin);
  CHECK(d.locked);
  CHECK(unlock(d, "4321") == UnlockResult::Ok);
  CHECK_FALSE(d.locked);
  CHECK_THROWS_AS(unlock(d, "4321"), NotLocked);

  DeviceState off;
  CHECK_THROWS_AS(lock(off), NotBooted);
}

TEST_CASE("unlock ends the session and clears flight mode") {
  DeviceState d = booted_device();
  d.settings.session = Session{"+919000000002", Channel::Plain, 5};
  d.settings.trusted_remote = "+919000000002";
  lock(d);
  d.flight_mode = true;
  CHECK(unlock(d, "4321") == UnlockResult::Ok);
  CHECK_FALSE(d.settings.session.has_value());
  CHECK_FALSE(d.flight_mode);
  CHECK(d.settings.trusted_remote == "+919000000002");  // survives
}

TEST_CASE("wipeout clears user data and nothing else") {
  DeviceState d = booted_device();
  d.contacts = {{"A", "+911234567", "a@x"},
                {"B", "+911234568", "b@x"},
                {"C", "+911234569", "c@x"}};
  for (int i = 0; i < 5; ++i) {
    d.inbox.push_back({"+918000000001", d.msisdn, "m" + std::to_string(i), i});
  }
  d.call_log.push_back({"+918000000001", 9});
  d.user_files = {"photo.jpg", "notes.txt"};
  d.guard.blocked.insert("918000000009");
  d.settings.session = Session{"+919000000002", Channel::Plain, 1};
  d.settings.trusted_remote = "+919000000002";
  d.locked = true;

  const Settings before = d.settings;
  wipeout(d);
  CHECK(d.contacts.empty());
  CHECK(d.inbox.empty());
  CHECK(d.call_log.empty());
  CHECK(d.user_files.empty());
  CHECK(d.settings == before);
  CHECK(d.settings.secret == protocol::SharedSecret{"MYDOB", "1989"});
  CHECK(d.guard.blocked.count("918000000009") == 1);
  CHECK(d.locked);

  wipeout(d);  // no-op on empty stores
  CHECK(d.contacts.empty());

  DeviceState off;
  CHECK_THROWS_AS(wipeout(off), NotBooted);
}

TEST_CASE("search_contacts") {
  DeviceState d = booted_device();
  d.contacts = {{"Rajalakshmi", "+919000000077", "r@x.com"}};
  const auto hits = search_contacts(d, "raja");
  REQUIRE(hits.size() == 1);
  CHECK(hits[0].name == "Rajalakshmi");
  CHECK(search_contacts(d, "zz").empty());
  CHECK(search_contacts(d, "RAJA").size() == 1);  // case-insensitive
  CHECK_THROWS_AS(search_contacts(d, ""), EmptyQuery);
}

TEST_CASE("search_contacts caps at five in stored order") {
  DeviceState d = booted_device();
  for (int i = 0; i < 7; ++i) {
    d.contacts.push_back(
        {"raja" + std::to_string(i), "+91900000000" + std::to_string(i), "e"});
  }
  const auto hits = search_contacts(d, "raja");
  REQUIRE(hits.size() == 5);
  for (int i = 0; i < 5; ++i) {
    CHECK(hits[i].name == "raja" + std::to_string(i));
  }
}

TEST_CASE("search_contacts equals a naive scan on random lists") {
  std::mt19937 rng(42);
  for (int round = 0; round < 50; ++round) {
    DeviceState d = booted_device();
    const std::size_t n = rng() % 20;
    for (std::size_t i = 0; i < n; ++i) {
      std::string name;
      const std::size_t len = 1 + rng() % 8;
      for (std::size_t j = 0; j < len; ++j) {
        name += static_cast<char>('a' + rng() % 4);
      }
      d.contacts.push_back({name, "+917000000000", "e@x"});
    }
    std::string query;
    const std::size_t qlen = 1 + rng() % 3;
    for (std::size_t j = 0; j < qlen; ++j) {
      query += static_cast<char>('a' + rng() % 4);
    }
    std::vector<Contact> naive;
    for (const auto& c : d.contacts) {
      if (c.name.find(query) != std::string::npos && naive.size() < 5) {
        naive.push_back(c);
      }
    }
    CHECK(search_contacts(d, query) == naive);
  }
}

TEST_CASE("swap_sim only while powered off") {
  DeviceState d = booted_device();
  CHECK_THROWS_AS(swap_sim(d, "SIM9", "+919111111111"), DeviceBooted);
  shutdown(d);
  swap_sim(d, "SIM9", "+919111111111");
  CHECK(d.sim_id == "SIM9");
  CHECK(d.msisdn == "+919111111111");
  CHECK(d.last_boot_sim == "SIM0");  // detection happens at the next boot
  CHECK_THROWS_AS(shutdown(d), NotBooted);
}

TEST_CASE("save produces only settings and guard keys for empty stores") {
  DeviceState d = booted_device();
  const std::string text = save(d);
  CHECK(text.find("contacts.") == std::string::npos);
  CHECK(text.find("inbox.") == std::string::npos);
  CHECK(text.find("call_log.") == std::string::npos);
  CHECK(text.find("user_files.") == std::string::npos);
  CHECK(text.find("settings.login_pin=4321\n") != std::string::npos);
  CHECK(load(text) == d);
}

TEST_CASE("save/load round-trips arbitrary states") {
  std::mt19937 rng(2024);
  for (int i = 0; i < 100; ++i) {
    const DeviceState d = random_state(rng);
    const DeviceState back = load(save(d));
    CHECK(back == d);
    CHECK(save(back) == save(d));
  }
}

TEST_CASE("save/load keeps values with escapes intact") {
  DeviceState d = booted_device();
  d.user_files = {"weird\\name", "line\nbreak"};
  CHECK(load(save(d)) == d);
}

TEST_CASE("load rejects malformed input") {
  const DeviceState d = booted_device();
  const std::string good = save(d);

  // truncated mid-line
  CHECK_THROWS_AS(load(good.substr(0, good.find('=') - 1) + "\n"), ParseError);
  // unknown key
  CHECK_THROWS_AS(load(good + "bogus_key=1\n"), ParseError);
  // bad flag value
  std::string bad = good;
  bad.replace(bad.find("booted=1"), 8, "booted=2");
  CHECK_THROWS_AS(load(bad), ParseError);
  // missing required key
  std::string missing = good;
  const auto pos = missing.find("msisdn=");
  missing.erase(pos, missing.find('\n', pos) - pos + 1);
  CHECK_THROWS_AS(load(missing), ParseError);
  // duplicate key
  CHECK_THROWS_AS(load(good + "booted=1\n"), ParseError);
  CHECK_THROWS_AS(load("garbage line with no separator\n"), ParseError);

  try {
    load("msisdn=+919\nnot-a-record\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
  }
}
