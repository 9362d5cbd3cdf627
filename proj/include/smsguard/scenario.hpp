#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "smsguard/simnet.hpp"
#include "smsguard/types.hpp"

namespace smsguard::cli {

// One directive per line, '#' comments. Grammar:
//   seed <int>
//   device <name> <msisdn> activation=<WORD> pin=<digits> login=<digits>
//   client <name> <msisdn> target=<devname> channel=plain|encrypted
//   handset <name> <msisdn>
//   contact <devname> "<name>" <msisdn> <email>
//   locate <devname> <lat> <lon>
//   boot <devname> | shutdown <devname>
//   simswap <devname> <simid> <msisdn>
//   sms <from> <to> "<body>"
//   call <from> <to>
//   advance <N>(s|m|h)
//   request <clientname> "<command-text>"
//   unlockui <clientname> <pin>
//   expect sms <from> <to> "<body-with-*>"
//   assert <devname> locked|unlocked|wifi-on|wifi-off|silent|flight|
//          blocked=<msisdn>|contacts=<N>|inbox=<N>
struct Directive {
  enum class Kind {
    Seed,
    Device,
    Client,
    Handset,
    Contact,
    Locate,
    Boot,
    Shutdown,
    SimSwap,
    Sms,
    Call,
    Advance,
    Request,
    UnlockUi,
    ExpectSms,
    Assert,
  };

  Kind kind = Kind::Seed;
  int line = 0;
  std::vector<std::string> args;  // kind-specific positional fields
  std::uint64_t seed = 0;
  Seconds duration = 0;
  double lat = 0;
  double lon = 0;
};

struct ScenarioParseError {
  int line;
  std::string message;
};

// Parses one directive; throws ScenarioParseError. Blank/comment lines yield
// nullopt.
std::optional<Directive> parse_directive(const std::string& line,
                                         int line_number);

// Whole-file fail-fast parse.
std::vector<Directive> parse_scenario(std::istream& in);

// Glob-style match where '*' spans any (possibly empty) run of characters.
bool glob_match(const std::string& pattern, const std::string& text);

// Named endpoints plus the network they live on; the unit a scenario runs
// against and what tests inspect afterwards.
struct World {
  enum class EndpointKind { Device, Client, Handset };

  struct Entry {
    EndpointKind kind = EndpointKind::Handset;
    Msisdn msisdn;
  };

  explicit World(std::uint64_t seed) : net(seed) {}

  net::Network net;
  std::map<std::string, Entry> names;
  std::vector<net::TranscriptEntry> transcript;

  net::DeviceEndpoint* device(const std::string& name);
  net::ClientEndpoint* client(const std::string& name);
  net::RawHandset* handset(const std::string& name);

  // Names resolve to their number; anything else passes through verbatim.
  std::string resolve(const std::string& name_or_number) const;
};

struct RunOptions {
  std::optional<std::uint64_t> seed;  // overrides any `seed` directives
  std::string state_dir;              // devices persist as <msisdn>.device
  std::string transcript_path;        // full transcript copy, one line each
};

struct ScenarioResult {
  int exit_code = 0;  // 0 ok, 1 failed expect/assert/directive, 2 parse error
  std::string transcript;
  std::vector<std::string> failures;
  std::unique_ptr<World> world;  // null after a parse error
};

ScenarioResult run_scenario(std::istream& in, const RunOptions& opts,
                            std::ostream& out, std::ostream& err);

int run_scenario_file(const std::string& path, const RunOptions& opts,
                      std::ostream& out, std::ostream& err);

// Interactive loop attached to one raw handset number. Accepts the scenario
// grammar plus `send <to> <body>`, `call <to>`, `show <name> state|inbox|
// blocked`, `help`, `quit`. Transcript entries print as they occur.
int repl(const Msisdn& attach, std::istream& in, std::ostream& out,
         std::ostream& err, const RunOptions& opts,
         const std::string& scenario_path = "");

}  // namespace smsguard::cli
