// Acceptance suite: runs every criterion and prints one PASS/FAIL line each.
// Exits non-zero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "smsguard/agent.hpp"
#include "smsguard/scenario.hpp"

using namespace smsguard;

namespace {

int g_failures = 0;

struct CheckFailure {
  std::string what;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw CheckFailure{what};
}

void criterion(int number, const std::string& name,
               const std::function<void()>& body) {
  try {
    body();
    std::printf("PASS %2d %s\n", number, name.c_str());
  } catch (const CheckFailure& f) {
    ++g_failures;
    std::printf("FAIL %2d %s: %s\n", number, name.c_str(), f.what.c_str());
  } catch (const std::exception& e) {
    ++g_failures;
    std::printf("FAIL %2d %s: unexpected exception: %s\n", number, name.c_str(),
                e.what());
  }
  std::fflush(stdout);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string golden_path(const std::string& name) {
  return std::string(SMSGUARD_GOLDEN_DIR) + "/" + name;
}

cli::ScenarioResult run_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "cannot read " + path);
  std::ostringstream out, err;
  return cli::run_scenario(in, {}, out, err);
}

cli::ScenarioResult run_text(const std::string& text) {
  std::istringstream in(text);
  std::ostringstream out, err;
  return cli::run_scenario(in, {}, out, err);
}

std::string random_printable(std::mt19937& rng, std::size_t min_len,
                             std::size_t max_len) {
  std::string s(min_len + rng() % (max_len - min_len + 1), ' ');
  for (auto& c : s) c = static_cast<char>(32 + rng() % 95);
  return s;
}

// SMS bodies sent from -> to, in transcript order.
std::vector<std::string> bodies(const cli::World& world,
                                const std::string& from,
                                const std::string& to) {
  std::vector<std::string> out;
  for (const auto& e : world.transcript) {
    if (e.kind == net::TranscriptEntry::Kind::Sms && e.from == from &&
        e.to == to) {
      out.push_back(e.text);
    }
  }
  return out;
}

std::size_t count_containing(const cli::World& world, const std::string& what) {
  std::size_t n = 0;
  for (const auto& e : world.transcript) {
    if (e.to_line().find(what) != std::string::npos) ++n;
  }
  return n;
}

// "....-..-..T..:..:..Z" with digits in the dotted positions.
bool valid_iso_timestamp(const std::string& s) {
  if (s.size() != 20) return false;
  const std::string pattern = "dddd-dd-ddTdd:dd:ddZ";
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    if (pattern[i] == 'd') {
      if (s[i] < '0' || s[i] > '9') return false;
    } else if (s[i] != pattern[i]) {
      return false;
    }
  }
  return true;
}

const Msisdn kDev = "+919000000001";
const Msisdn kCtl = "+919000000002";  // controller (peer)
const Msisdn kStr = "+919000000003";  // stranger

const char* kDeviceLine =
    "device A +919000000001 activation=MYDOB pin=1989 login=4321\n";

void criterion_1() {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  std::mt19937 rng(20120101);
  for (int i = 0; i < 10000; ++i) {
    const std::string payload = random_printable(rng, 0, 160);
    const std::string key = random_printable(rng, 1, 24);
    require(protocol::decrypt_text(protocol::encrypt_text(payload, key), key) ==
                payload,
            "cipher round-trip failed");
    std::string rest = payload;
    while (!rest.empty() && rest[0] == '$') rest.erase(0, 1);
    const std::string text = "$" + rest;
    for (Channel ch : {Channel::Plain, Channel::Encrypted}) {
      const auto decoded =
          protocol::decode_frame(protocol::encode_frame(text, ch, key), key);
      require(decoded && decoded->command_text == text && decoded->channel == ch,
              "frame round-trip failed");
    }
  }
  const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                           clock::now() - start)
                           .count();
  require(elapsed < 5000,
          "10k round-trips took " + std::to_string(elapsed) + " ms");
}

void criterion_2() {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  using command::Kind;
  const struct {
    const char* text;
    command::Command expected;
  } cases[] = {
      {"$SILENT-ON", {Kind::SilentOn, ""}},
      {"$SILENT-OFF", {Kind::SilentOff, ""}},
      {"$GPS-ON", {Kind::GpsOn, ""}},
      {"$GPS-OFF", {Kind::GpsOff, ""}},
      {"$WIFI-ON", {Kind::WifiOn, ""}},
      {"$WIFI-OFF", {Kind::WifiOff, ""}},
      {"$CALLALERT-ON", {Kind::CallAlertOn, ""}},
      {"$CALLALERT-OFF", {Kind::CallAlertOff, ""}},
      {"$SMSDIVERT-ON", {Kind::SmsDivertOn, ""}},
      {"$SMSDIVERT-OFF", {Kind::SmsDivertOff, ""}},
      {"$SMS-REPLY In a meeting", {Kind::AutoReplyOn, "In a meeting"}},
      {"$SMS-REPLY OFF", {Kind::AutoReplyOff, ""}},
      {"$CONTACT raja", {Kind::ContactLookup, "raja"}},
      {"$WIPEOUT", {Kind::Wipeout, ""}},
      {"$FLIGHT-ON", {Kind::FlightOn, ""}},
      {"$SIGNOFF", {Kind::SignOff, ""}},
      {"$MYDOB 1989", {Kind::Connect, "1989"}},
  };
  int seen = 0;
  for (const auto& c : cases) {
    const auto parsed = command::parse_command(c.text, "MYDOB");
    require(parsed.has_value(), std::string("did not parse: ") + c.text);
    require(*parsed == c.expected, std::string("wrong variant for ") + c.text);
    require(command::render_command(*parsed, "MYDOB") == c.text,
            std::string("render is not canonical for ") + c.text);
    ++seen;
  }
  require(seen == 17, "expected 17 command forms");
  const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                           clock::now() - start)
                           .count();
  require(elapsed < 1000, "command table took too long");
}

cli::ScenarioResult run_golden(const std::string& stem) {
  auto result = run_file(golden_path(stem + ".scn"));
  require(result.exit_code == 0,
          stem + ".scn exited " + std::to_string(result.exit_code));
  const std::string golden = read_file(golden_path(stem + ".golden"));
  require(result.transcript == golden,
          stem + " transcript differs from the checked-in golden");
  return result;
}

void criterion_3() {
  const auto result = run_golden("connect_control_signoff");
  auto* dev = result.world->device("A");
  require(dev != nullptr, "device A missing");
  require(!dev->state().locked, "device still locked after sign-off");
  require(!dev->state().settings.session.has_value(),
          "session not cleared after sign-off");
}

void criterion_4() {
  const auto plain = run_golden("connect_control_signoff");
  const auto enc = run_golden("encrypted_channel");

  const auto plain_replies = bodies(*plain.world, kDev, kCtl);
  const auto enc_replies = bodies(*enc.world, kDev, kCtl);
  require(!plain_replies.empty(), "no replies in the plain run");
  require(plain_replies.size() == enc_replies.size(),
          "reply counts differ between the channels");
  const protocol::CipherKey key = "MYDOB1989";
  for (std::size_t i = 0; i < enc_replies.size(); ++i) {
    require(enc_replies[i].rfind("$$", 0) == 0,
            "encrypted reply does not carry the $$ prefix");
    require(protocol::decrypt_text(enc_replies[i].substr(2), key) ==
                plain_replies[i],
            "decoded reply " + std::to_string(i) + " differs from plain run");
  }
}

void criterion_5() {
  // unit-level timelines
  {
    guard::GuardState g;
    require(guard::record_failure(g, kStr, 0).count == 1, "warn 1");
    require(guard::record_failure(g, kStr, 3600).count == 2, "warn 2");
    require(guard::record_failure(g, kStr, 7200).kind ==
                guard::FailureResult::Kind::Blocked,
            "third failure inside 48h must block");

    guard::GuardState g2;
    guard::record_failure(g2, kStr, 0);
    guard::record_failure(g2, kStr, 3600);
    const auto third = guard::record_failure(g2, kStr, 49 * 3600);
    require(third.kind == guard::FailureResult::Kind::Warned && third.count == 1,
            "third failure after 48h must start a fresh warning");
  }

  // full-stack over SMS
  {
    const std::string text = std::string(kDeviceLine) +
                             "boot A\n"
                             "sms +919000000003 A \"$MYDOB 0000\"\n"
                             "advance 1h\n"
                             "sms +919000000003 A \"$MYDOB 0000\"\n"
                             "advance 1h\n"
                             "sms +919000000003 A \"$MYDOB 0000\"\n"
                             "advance 10s\n"
                             "assert A blocked=+919000000003\n";
    const auto result = run_text(text);
    require(result.exit_code == 0, "in-window scenario failed");

    const std::string spread = std::string(kDeviceLine) +
                               "boot A\n"
                               "sms +919000000003 A \"$MYDOB 0000\"\n"
                               "advance 1h\n"
                               "sms +919000000003 A \"$MYDOB 0000\"\n"
                               "advance 48h\n"
                               "sms +919000000003 A \"$MYDOB 0000\"\n"
                               "advance 10s\n";
    const auto late = run_text(spread);
    require(late.exit_code == 0, "spread scenario failed");
    const auto& g = late.world->device("A")->state().guard;
    require(g.blocked.empty(), "number blocked despite the 48h expiry");
    require(g.warnings.count("919000000003") == 1 &&
                g.warnings.at("919000000003").fail_count == 1,
            "third failure after expiry must be Warned(1)");
  }

  // brute force against an independent greedy-walk oracle
  {
    const Timestamp grid[] = {0, 3600, 47 * 3600, 49 * 3600, 96 * 3600};
    std::vector<std::vector<Timestamp>> sequences;
    std::vector<Timestamp> current;
    auto build = [&](auto&& self, std::size_t min_idx) -> void {
      if (!current.empty()) sequences.push_back(current);
      if (current.size() == 5) return;
      for (std::size_t i = min_idx; i < 5; ++i) {
        current.push_back(grid[i]);
        self(self, i);
        current.pop_back();
      }
    };
    build(build, 0);
    for (const auto& seq : sequences) {
      bool oracle_blocked = false;
      int count = 0;
      Timestamp anchor = 0;
      for (Timestamp t : seq) {
        if (count == 0 || t - anchor > guard::kWarningTtl) {
          anchor = t;
          count = 1;
        } else {
          ++count;
        }
        if (count == 3) {
          oracle_blocked = true;
          break;
        }
      }
      guard::GuardState g;
      bool got = false;
      for (Timestamp t : seq) {
        if (got) break;
        got = guard::record_failure(g, kStr, t).kind ==
              guard::FailureResult::Kind::Blocked;
      }
      require(got == oracle_blocked, "guard disagrees with the timeline oracle");
    }
  }
}

void criterion_6() {
  const std::string text = std::string(kDeviceLine) +
                           "boot A\n"
                           "handset P +919000000002\n"
                           "handset Q +919000000003\n"
                           "sms P A \"$MYDOB 1989\"\n"
                           "advance 5s\n"
                           "sms Q A \"$SILENT-ON\"\n"
                           "advance 5s\n"
                           "assert A blocked=+919000000003\n"
                           "sms Q A \"$WIPEOUT\"\n"
                           "sms Q A \"hello?\"\n"
                           "advance 5s\n";
  const auto result = run_text(text);
  require(result.exit_code == 0, "intrusion scenario failed");
  require(count_containing(*result.world, "INTRUDER +919000000003 BLOCKED") == 1,
          "expected exactly one INTRUDER alert");
  const auto alert = bodies(*result.world, kDev, kCtl);
  require(!alert.empty() && alert.back() == "INTRUDER +919000000003 BLOCKED",
          "the alert must go to the session peer");
  const auto& dev = result.world->device("A")->state();
  require(!dev.profile_silent, "the intruder's command must not execute");
  require(dev.inbox.empty(), "blocked sender's later SMS must leave no trace");
  require(count_containing(*result.world, "DROP BLOCKED +919000000003") == 2,
          "later messages from the blocked number must be dropped silently");
}

void criterion_7() {
  device::DeviceState d;
  d.msisdn = kDev;
  d.settings.secret = {"MYDOB", "1989"};
  d.settings.login_pin = "4321";
  d.booted = true;
  d.contacts = {{"Rajalakshmi", "+919000000077", "r@x.com"},
                {"Kumaran", "+919000000078", "k@x.com"}};
  d.inbox.push_back({kStr, kDev, "old message", 10});
  d.call_log.push_back({kStr, 20});
  d.user_files = {"photo.jpg", "notes.txt"};
  agent::handle_sms(d, {kCtl, kDev, "$MYDOB 1989", 30}, 30);
  agent::handle_call(d, kStr, 40);
  require(d.settings.session.has_value() && d.locked, "setup: no session");
  guard::block_now(d.guard, "+919000000055");
  guard::record_failure(d.guard, "+919000000066", 50);

  const auto effects = agent::handle_sms(d, {kCtl, kDev, "$WIPEOUT", 60}, 60);
  require(effects.size() == 1 &&
              effects[0] == Effect::send_sms(kCtl, "OK $WIPEOUT"),
          "wipeout must be acknowledged");
  require(d.contacts.empty() && d.inbox.empty() && d.call_log.empty() &&
              d.user_files.empty(),
          "wipeout must empty all four user stores");

  const device::DeviceState reloaded = device::load(device::save(d));
  require(reloaded == d, "save/load round-trip changed the state");
  require(reloaded.settings.secret ==
              protocol::SharedSecret{"MYDOB", "1989"},
          "settings must survive the wipeout");
  require(reloaded.guard.blocked.count("919000000055") == 1 &&
              reloaded.guard.warnings.count("919000000066") == 1,
          "guard lists must survive the wipeout");
  require(reloaded.settings.session.has_value() && reloaded.locked,
          "session and lock must survive the wipeout");
}

void criterion_8() {
  const std::string text = std::string(kDeviceLine) +
                           "boot A\n"
                           "handset P +919000000002\n"
                           "sms P A \"$MYDOB 1989\"\n"
                           "advance 5s\n"
                           "shutdown A\n"
                           "simswap A SIM-THIEF +919333333333\n"
                           "boot A\n"
                           "advance 5s\n"
                           "expect sms +919333333333 P "
                           "\"SIM-CHANGED old=SIM0 new=SIM-THIEF "
                           "number=+919333333333\"\n"
                           "assert A locked\n";
  const auto result = run_text(text);
  require(result.exit_code == 0, "boot/SIM scenario failed");
  const auto& dev = result.world->device("A")->state();
  require(dev.locked, "device must come up locked while a session exists");
  require(dev.last_boot_sim == "SIM-THIEF", "boot must record the new SIM");
  require(bodies(*result.world, "+919333333333", kCtl).size() == 1,
          "exactly one SIM-CHANGED alert from the new number");
}

void criterion_9() {
  const std::string on = std::string(kDeviceLine) +
                         "boot A\n"
                         "handset P +919000000002\n"
                         "handset S +919000000003\n"
                         "sms P A \"$MYDOB 1989\"\n"
                         "advance 5s\n"
                         "sms P A \"$SMSDIVERT-ON\"\n"
                         "sms P A \"$CALLALERT-ON\"\n"
                         "sms P A \"$SMS-REPLY busy\"\n"
                         "advance 5s\n"
                         "sms S A \"see you at 5\"\n"
                         "call S A\n"
                         "advance 5s\n";
  const auto result = run_text(on);
  require(result.exit_code == 0, "divert scenario failed");
  require(count_containing(*result.world,
                           "SMS-FROM +919000000003: see you at 5") == 1,
          "exactly one diverted copy");
  const auto to_stranger = bodies(*result.world, kDev, kStr);
  require(to_stranger.size() == 1 && to_stranger[0] == "busy",
          "exactly one auto-reply");
  std::size_t alerts = 0;
  for (const auto& body : bodies(*result.world, kDev, kCtl)) {
    if (body.rfind("CALL-ALERT ", 0) == 0) {
      ++alerts;
      require(body.rfind("CALL-ALERT +919000000003 ", 0) == 0,
              "CALL-ALERT must carry the caller number");
      require(valid_iso_timestamp(body.substr(body.rfind(' ') + 1)),
              "CALL-ALERT timestamp is malformed");
    }
  }
  require(alerts == 1, "exactly one CALL-ALERT");

  const std::string off = std::string(kDeviceLine) +
                          "boot A\n"
                          "handset P +919000000002\n"
                          "handset S +919000000003\n"
                          "sms P A \"$MYDOB 1989\"\n"
                          "advance 5s\n"
                          "sms S A \"see you at 5\"\n"
                          "call S A\n"
                          "advance 5s\n";
  const auto quiet = run_text(off);
  require(quiet.exit_code == 0, "flags-off scenario failed");
  require(count_containing(*quiet.world, "SMS-FROM") == 0, "no divert when off");
  require(bodies(*quiet.world, kDev, kStr).empty(), "no auto-reply when off");
  require(count_containing(*quiet.world, "CALL-ALERT") == 0,
          "no call alert when off");
  require(quiet.world->device("A")->state().inbox.size() == 1,
          "the ordinary SMS still lands in the inbox");
}

void criterion_10() {
  const std::string text = std::string(kDeviceLine) +
                           "boot A\n"
                           "sms AD-WAY2SMS A \"$MYDOB 1989\"\n"
                           "sms A A \"$MYDOB 1989\"\n"
                           "advance 5s\n";
  const auto result = run_text(text);
  require(result.exit_code == 0, "hygiene scenario failed");
  const auto& dev = result.world->device("A")->state();
  require(!dev.settings.session.has_value(), "no session may be established");
  require(dev.guard.warnings.empty() && dev.guard.blocked.empty(),
          "rejected senders must leave no guard entries");
  require(count_containing(*result.world, "DROP NOT-MSISDN AD-WAY2SMS") == 1,
          "web-gateway sender must be dropped");
  require(count_containing(*result.world, "DROP SELF-REQUEST") == 1,
          "self request must be dropped");
}

// Independent decision-table oracle for the request-handler state machine.
namespace oracle {

enum class SenderClass { Peer, Stranger, Blocked, Invalid };
enum class Outcome { Drop, AuthFail, SessionSet, PeerConnected, PeerSignOff,
                     PeerReply, Intruder };

Outcome expected(command::Kind cmd, bool session_active, SenderClass cls) {
  if (cls == SenderClass::Invalid || cls == SenderClass::Blocked) {
    return Outcome::Drop;
  }
  if (!session_active) {
    return cmd == command::Kind::Connect ? Outcome::SessionSet
                                         : Outcome::AuthFail;
  }
  if (cls != SenderClass::Peer) return Outcome::Intruder;
  if (cmd == command::Kind::Connect) return Outcome::PeerConnected;
  if (cmd == command::Kind::SignOff) return Outcome::PeerSignOff;
  return Outcome::PeerReply;
}

}  // namespace oracle

void criterion_11() {
  // determinism: one scenario, two runs, byte-identical transcripts
  const std::string path = golden_path("connect_control_signoff.scn");
  const auto first = run_file(path);
  const auto second = run_file(path);
  require(first.exit_code == 0 && second.exit_code == 0, "scenario failed");
  require(first.transcript == second.transcript,
          "same seed must give byte-identical transcripts");

  // state-machine brute force against the decision table
  using command::Kind;
  using oracle::Outcome;
  using oracle::SenderClass;
  const Kind kinds[] = {
      Kind::Connect,     Kind::SilentOn,    Kind::SilentOff,
      Kind::GpsOn,       Kind::GpsOff,      Kind::WifiOn,
      Kind::WifiOff,     Kind::CallAlertOn, Kind::CallAlertOff,
      Kind::SmsDivertOn, Kind::SmsDivertOff, Kind::AutoReplyOn,
      Kind::AutoReplyOff, Kind::ContactLookup, Kind::Wipeout,
      Kind::FlightOn,    Kind::SignOff};
  const SenderClass classes[] = {SenderClass::Peer, SenderClass::Stranger,
                                 SenderClass::Blocked, SenderClass::Invalid};

  for (Kind kind : kinds) {
    command::Command cmd{kind, ""};
    if (kind == Kind::Connect) cmd.arg = "1989";
    if (kind == Kind::AutoReplyOn) cmd.arg = "busy";
    if (kind == Kind::ContactLookup) cmd.arg = "raja";
    for (bool active : {false, true}) {
      for (SenderClass cls : classes) {
        device::DeviceState d;
        d.msisdn = kDev;
        d.settings.secret = {"MYDOB", "1989"};
        d.settings.login_pin = "4321";
        d.booted = true;
        d.contacts = {{"Rajalakshmi", "+919000000077", "r@x"}};
        if (active) {
          d.settings.session = device::Session{kCtl, Channel::Plain, 0};
          d.settings.trusted_remote = kCtl;
          d.locked = true;
        }
        std::string sender;
        switch (cls) {
          case SenderClass::Peer:
            sender = active ? kCtl : kStr;  // idle has no peer: a valid number
            break;
          case SenderClass::Stranger:
            sender = kStr;
            break;
          case SenderClass::Blocked:
            sender = kStr;
            guard::block_now(d.guard, kStr);
            break;
          case SenderClass::Invalid:
            sender = "AD-WAY2SMS";
            break;
        }
        const guard::GuardState guard_before = d.guard;
        const bool session_before = d.settings.session.has_value();
        const std::string body = command::render_command(cmd, "MYDOB");
        const auto effects = agent::handle_sms(d, {sender, kDev, body, 7}, 7);

        Outcome got;
        if (effects.size() == 1 && effects[0].kind == Effect::Kind::Log &&
            effects[0].text.rfind("DROP", 0) == 0) {
          got = Outcome::Drop;
          require(d.settings.session.has_value() == session_before &&
                      d.guard == guard_before,
                  "a drop must not change session or guard");
        } else if (effects.size() == 1 &&
                   effects[0].kind == Effect::Kind::Log &&
                   effects[0].text.rfind("AUTH-FAIL", 0) == 0) {
          got = Outcome::AuthFail;
          require(!d.settings.session.has_value(),
                  "auth failure must not create a session");
          require(d.guard.warnings.size() + d.guard.blocked.size() >
                      guard_before.warnings.size() + guard_before.blocked.size(),
                  "auth failure must be counted");
        } else if (!session_before && d.settings.session.has_value()) {
          got = Outcome::SessionSet;
          require(d.settings.session->peer == sender && d.locked,
                  "a new session must lock for its peer");
          require(effects.size() == 1 &&
                      effects[0] == Effect::send_sms(sender, "CONNECTED " + kDev),
                  "connect must be confirmed");
        } else if (effects.size() == 1 &&
                   effects[0] == Effect::send_sms(
                                     kCtl, "INTRUDER " + kStr + " BLOCKED")) {
          got = Outcome::Intruder;
          require(d.guard.blocked.count(guard::normalize_msisdn(kStr)) == 1,
                  "intruder must be blocked immediately");
          require(d.settings.session->peer == kCtl, "no session takeover");
        } else if (effects.size() == 1 &&
                   effects[0] ==
                       Effect::send_sms(kCtl, "CONNECTED " + kDev)) {
          got = Outcome::PeerConnected;
          require(d.settings.session.has_value(), "session must survive");
        } else if (!effects.empty() &&
                   effects[0] == Effect::send_sms(kCtl, "SIGNED-OFF")) {
          got = Outcome::PeerSignOff;
          require(!d.settings.session.has_value() && !d.locked,
                  "sign-off must clear the session and unlock");
        } else {
          got = Outcome::PeerReply;
          require(!effects.empty(), "peer command must produce a reply");
          for (const auto& e : effects) {
            require(e.kind == Effect::Kind::SendSms && e.to == kCtl,
                    "peer replies must go to the peer");
          }
          require(d.settings.session.has_value() &&
                      d.settings.session->peer == kCtl,
                  "peer command must keep the session");
        }
        require(got == oracle::expected(kind, active, cls),
                "decision table mismatch for command " +
                    command::render_command(cmd, "MYDOB") + " active=" +
                    std::to_string(active) + " class=" +
                    std::to_string(static_cast<int>(cls)));
      }
    }
  }
}

void criterion_12() {
  net::Network network;
  device::DeviceState state;
  state.msisdn = kDev;
  state.settings.secret = {"MYDOB", "1989"};
  state.settings.login_pin = "4321";
  state.booted = true;
  network.register_endpoint(kDev,
                            std::make_unique<net::DeviceEndpoint>(state));
  network.register_endpoint(kCtl, std::make_unique<net::RawHandset>());
  auto* dev = dynamic_cast<net::DeviceEndpoint*>(network.find(kDev));
  auto* peer = dynamic_cast<net::RawHandset*>(network.find(kCtl));

  network.submit_sms(kCtl, kDev, "$MYDOB 1989");
  network.advance(5);
  network.submit_sms(kCtl, kDev, "$FLIGHT-ON");
  network.advance(5);
  require(dev->state().flight_mode, "flight mode must be set");
  require(!peer->inbox().empty() &&
              peer->inbox().back().body == "OK $FLIGHT-ON",
          "the ack must go out before isolation");

  // everything inbound is now dropped, the peer's sign-off included
  network.submit_sms(kCtl, kDev, "$SIGNOFF");
  network.submit_call(kStr, kDev);
  auto entries = network.advance(5);
  std::size_t drops = 0;
  for (const auto& e : entries) {
    require(e.kind == net::TranscriptEntry::Kind::Log &&
                e.text.rfind("UNDELIVERED-FLIGHT", 0) == 0,
            "flight mode must drop and log every inbound event");
    ++drops;
  }
  require(drops == 2, "both the SMS and the call must be dropped");
  require(dev->state().settings.session.has_value(),
          "the dropped sign-off must not reach the agent");
  require(dev->state().call_log.empty(), "the dropped call must not be logged");

  // local unlock restores reachability
  require(device::unlock(dev->state(), "4321") == device::UnlockResult::Ok,
          "local unlock failed");
  require(!dev->state().flight_mode, "unlock must clear flight mode");
  require(dev->is_reachable(), "device must be reachable after unlock");
  network.submit_sms(kCtl, kDev, "hello again");
  network.advance(5);
  require(dev->state().inbox.size() == 1 &&
              dev->state().inbox[0].body == "hello again",
          "delivery must resume after the unlock");
}

}  // namespace

int main() {
  criterion(1, "cipher and frame round-trips (10k randomized)", criterion_1);
  criterion(2, "command table coverage (17 forms)", criterion_2);
  criterion(3, "golden scenario: connect-control-signoff", criterion_3);
  criterion(4, "golden scenario: encrypted channel symmetry", criterion_4);
  criterion(5, "3-strike timeline with 48h expiry", criterion_5);
  criterion(6, "intrusion rule during an active session", criterion_6);
  criterion(7, "wipeout survivability across save/load", criterion_7);
  criterion(8, "boot handler: SIM change alert from the new number",
            criterion_8);
  criterion(9, "divert, call alert and auto-reply", criterion_9);
  criterion(10, "sender hygiene: web gateways and self requests", criterion_10);
  criterion(11, "determinism and decision-table brute force", criterion_11);
  criterion(12, "flight isolation until local unlock", criterion_12);
  if (g_failures) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all 12 criteria passed\n");
  return 0;
}
