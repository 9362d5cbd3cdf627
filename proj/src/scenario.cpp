#include "smsguard/scenario.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "smsguard/agent.hpp"
#include "smsguard/guard.hpp"

namespace smsguard::cli {

namespace {

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

[[noreturn]] void fail(int line, const std::string& message) {
  throw ScenarioParseError{line, message};
}

// Splits a line with exactly one quoted field: tokens before the opening
// quote, the quoted text, tokens after the closing quote. The body fields of
// sms/expect/request are the last field on their line, so they take a greedy
// closing quote and may contain '"' themselves.
struct QuotedLine {
  std::vector<std::string> head;
  std::string quoted;
  std::vector<std::string> tail;
};

QuotedLine split_quoted(const std::string& line, int line_number,
                        bool greedy) {
  const std::size_t open = line.find('"');
  if (open == std::string::npos) fail(line_number, "expected a \"...\" field");
  const std::size_t close =
      greedy ? line.rfind('"') : line.find('"', open + 1);
  if (close == std::string::npos || close == open) {
    fail(line_number, "unterminated \"...\" field");
  }
  QuotedLine q;
  q.head = split_ws(line.substr(0, open));
  q.quoted = line.substr(open + 1, close - open - 1);
  q.tail = split_ws(line.substr(close + 1));
  return q;
}

bool all_digits(const std::string& s) {
  return !s.empty() && s.find_first_not_of("0123456789") == std::string::npos;
}

std::string strip_prefix(const std::string& tok, const std::string& prefix,
                         int line) {
  if (tok.rfind(prefix, 0) != 0) fail(line, "expected " + prefix + "...");
  return tok.substr(prefix.size());
}

void require_msisdn(const std::string& s, int line) {
  if (!guard::is_msisdn(s)) fail(line, "'" + s + "' is not a valid number");
}

double parse_coord(const std::string& s, int line) {
  const char* begin = s.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (s.empty() || end != begin + s.size()) {
    fail(line, "'" + s + "' is not a number");
  }
  return v;
}

Seconds parse_duration(const std::string& s, int line) {
  if (s.size() < 2) fail(line, "duration must look like 5s, 10m or 48h");
  const char unit = s.back();
  const std::string num = s.substr(0, s.size() - 1);
  if (!all_digits(num)) fail(line, "duration must look like 5s, 10m or 48h");
  const Seconds n = std::stoll(num);
  switch (unit) {
    case 's':
      return n;
    case 'm':
      return n * 60;
    case 'h':
      return n * 3600;
    default:
      fail(line, "duration unit must be s, m or h");
  }
}

const std::string kAssertFlags[] = {"locked", "unlocked", "wifi-on",
                                    "wifi-off", "silent", "flight"};

void validate_assert_check(const std::string& check, int line) {
  for (const auto& f : kAssertFlags) {
    if (check == f) return;
  }
  if (check.rfind("blocked=", 0) == 0) {
    require_msisdn(check.substr(8), line);
    return;
  }
  if (check.rfind("contacts=", 0) == 0 && all_digits(check.substr(9))) return;
  if (check.rfind("inbox=", 0) == 0 && all_digits(check.substr(6))) return;
  fail(line, "unknown assert check '" + check + "'");
}

}  // namespace

std::optional<Directive> parse_directive(const std::string& raw,
                                         int line_number) {
  const std::string line = trim(raw);
  if (line.empty() || line[0] == '#') return std::nullopt;

  Directive d;
  d.line = line_number;
  const std::string verb = line.substr(0, line.find(' '));

  if (verb == "seed") {
    const auto tok = split_ws(line);
    if (tok.size() != 2 || !all_digits(tok[1])) fail(line_number, "seed <int>");
    d.kind = Directive::Kind::Seed;
    d.seed = std::stoull(tok[1]);
    return d;
  }
  if (verb == "device") {
    const auto tok = split_ws(line);
    if (tok.size() != 6) {
      fail(line_number,
           "device <name> <msisdn> activation=<WORD> pin=<digits> "
           "login=<digits>");
    }
    require_msisdn(tok[2], line_number);
    const std::string activation =
        strip_prefix(tok[3], "activation=", line_number);
    const std::string pin = strip_prefix(tok[4], "pin=", line_number);
    const std::string login = strip_prefix(tok[5], "login=", line_number);
    if (!protocol::valid_activation_command(activation)) {
      fail(line_number, "activation must match [A-Z]{1,16}");
    }
    if (!protocol::valid_activation_pin(pin)) {
      fail(line_number, "pin must match [0-9]{4,8}");
    }
    if (!protocol::valid_login_pin(login)) {
      fail(line_number, "login must match [0-9]{4,8}");
    }
    d.kind = Directive::Kind::Device;
    d.args = {tok[1], tok[2], activation, pin, login};
    return d;
  }
  if (verb == "client") {
    const auto tok = split_ws(line);
    if (tok.size() != 5) {
      fail(line_number,
           "client <name> <msisdn> target=<devname> channel=plain|encrypted");
    }
    require_msisdn(tok[2], line_number);
    const std::string target = strip_prefix(tok[3], "target=", line_number);
    const std::string channel = strip_prefix(tok[4], "channel=", line_number);
    if (channel != "plain" && channel != "encrypted") {
      fail(line_number, "channel must be plain or encrypted");
    }
    d.kind = Directive::Kind::Client;
    d.args = {tok[1], tok[2], target, channel};
    return d;
  }
  if (verb == "handset") {
    const auto tok = split_ws(line);
    if (tok.size() != 3) fail(line_number, "handset <name> <msisdn>");
    require_msisdn(tok[2], line_number);
    d.kind = Directive::Kind::Handset;
    d.args = {tok[1], tok[2]};
    return d;
  }
  if (verb == "contact") {
    const auto q = split_quoted(line, line_number, /*greedy=*/false);
    if (q.head.size() != 2 || q.tail.size() != 2 || q.quoted.empty()) {
      fail(line_number, "contact <devname> \"<name>\" <msisdn> <email>");
    }
    require_msisdn(q.tail[0], line_number);
    d.kind = Directive::Kind::Contact;
    d.args = {q.head[1], q.quoted, q.tail[0], q.tail[1]};
    return d;
  }
  if (verb == "locate") {
    const auto tok = split_ws(line);
    if (tok.size() != 4) fail(line_number, "locate <devname> <lat> <lon>");
    d.kind = Directive::Kind::Locate;
    d.args = {tok[1]};
    d.lat = parse_coord(tok[2], line_number);
    d.lon = parse_coord(tok[3], line_number);
    return d;
  }
  if (verb == "boot" || verb == "shutdown") {
    const auto tok = split_ws(line);
    if (tok.size() != 2) fail(line_number, verb + " <devname>");
    d.kind = verb == "boot" ? Directive::Kind::Boot : Directive::Kind::Shutdown;
    d.args = {tok[1]};
    return d;
  }
  if (verb == "simswap") {
    const auto tok = split_ws(line);
    if (tok.size() != 4) fail(line_number, "simswap <devname> <simid> <msisdn>");
    require_msisdn(tok[3], line_number);
    d.kind = Directive::Kind::SimSwap;
    d.args = {tok[1], tok[2], tok[3]};
    return d;
  }
  if (verb == "sms") {
    const auto q = split_quoted(line, line_number, /*greedy=*/true);
    if (q.head.size() != 3 || !q.tail.empty()) {
      fail(line_number, "sms <from> <to> \"<body>\"");
    }
    if (q.quoted.size() > kMaxSmsBody) {
      fail(line_number, "SMS body exceeds 160 characters");
    }
    if (!is_printable_text(q.quoted)) {
      fail(line_number, "SMS body must be printable text");
    }
    d.kind = Directive::Kind::Sms;
    d.args = {q.head[1], q.head[2], q.quoted};
    return d;
  }
  if (verb == "call") {
    const auto tok = split_ws(line);
    if (tok.size() != 3) fail(line_number, "call <from> <to>");
    d.kind = Directive::Kind::Call;
    d.args = {tok[1], tok[2]};
    return d;
  }
  if (verb == "advance") {
    const auto tok = split_ws(line);
    if (tok.size() != 2) fail(line_number, "advance <N>(s|m|h)");
    d.kind = Directive::Kind::Advance;
    d.duration = parse_duration(tok[1], line_number);
    return d;
  }
  if (verb == "request") {
    const auto q = split_quoted(line, line_number, /*greedy=*/true);
    if (q.head.size() != 2 || !q.tail.empty()) {
      fail(line_number, "request <clientname> \"<command-text>\"");
    }
    d.kind = Directive::Kind::Request;
    d.args = {q.head[1], q.quoted};
    return d;
  }
  if (verb == "unlockui") {
    const auto tok = split_ws(line);
    if (tok.size() != 3 || !all_digits(tok[2])) {
      fail(line_number, "unlockui <clientname> <pin>");
    }
    d.kind = Directive::Kind::UnlockUi;
    d.args = {tok[1], tok[2]};
    return d;
  }
  if (verb == "expect") {
    const auto q = split_quoted(line, line_number, /*greedy=*/true);
    if (q.head.size() != 4 || q.head[1] != "sms" || !q.tail.empty()) {
      fail(line_number, "expect sms <from> <to> \"<body-with-*>\"");
    }
    d.kind = Directive::Kind::ExpectSms;
    d.args = {q.head[2], q.head[3], q.quoted};
    return d;
  }
  if (verb == "assert") {
    const auto tok = split_ws(line);
    if (tok.size() != 3) fail(line_number, "assert <devname> <check>");
    validate_assert_check(tok[2], line_number);
    d.kind = Directive::Kind::Assert;
    d.args = {tok[1], tok[2]};
    return d;
  }
  fail(line_number, "unknown directive '" + verb + "'");
}

std::vector<Directive> parse_scenario(std::istream& in) {
  std::vector<Directive> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto d = parse_directive(line, number)) out.push_back(std::move(*d));
  }
  return out;
}

bool glob_match(const std::string& pattern, const std::string& text) {
  std::size_t p = 0, t = 0;
  std::size_t star = std::string::npos, mark = 0;
  while (t < text.size()) {
    if (p < pattern.size() && pattern[p] == '*') {
      star = p++;
      mark = t;
    } else if (p < pattern.size() && pattern[p] == text[t]) {
      ++p;
      ++t;
    } else if (star != std::string::npos) {
      p = star + 1;
      t = ++mark;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '*') ++p;
  return p == pattern.size();
}

net::DeviceEndpoint* World::device(const std::string& name) {
  auto it = names.find(name);
  if (it == names.end() || it->second.kind != EndpointKind::Device) {
    return nullptr;
  }
  return dynamic_cast<net::DeviceEndpoint*>(net.find(it->second.msisdn));
}

net::ClientEndpoint* World::client(const std::string& name) {
  auto it = names.find(name);
  if (it == names.end() || it->second.kind != EndpointKind::Client) {
    return nullptr;
  }
  return dynamic_cast<net::ClientEndpoint*>(net.find(it->second.msisdn));
}

net::RawHandset* World::handset(const std::string& name) {
  auto it = names.find(name);
  if (it == names.end() || it->second.kind != EndpointKind::Handset) {
    return nullptr;
  }
  return dynamic_cast<net::RawHandset*>(net.find(it->second.msisdn));
}

std::string World::resolve(const std::string& name_or_number) const {
  auto it = names.find(name_or_number);
  return it == names.end() ? name_or_number : it->second.msisdn;
}

namespace {

namespace fs = std::filesystem;

std::string state_file(const std::string& dir, const Msisdn& msisdn) {
  return (fs::path(dir) / (msisdn + ".device")).string();
}

struct ExecContext {
  World& world;
  const RunOptions& opts;
  std::ostream& out;
  std::ostream& err;
  std::vector<std::string> failures;
  std::size_t expect_cursor = 0;

  void emit(const std::vector<net::TranscriptEntry>& entries) {
    for (const auto& e : entries) {
      world.transcript.push_back(e);
      out << e.to_line() << "\n";
    }
  }

  void failure(int line, const std::string& what) {
    failures.push_back("line " + std::to_string(line) + ": " + what);
    err << "FAIL " << failures.back() << "\n";
  }
};

net::DeviceEndpoint& need_device(ExecContext& ctx, const std::string& name) {
  auto* dev = ctx.world.device(name);
  if (!dev) throw std::runtime_error("no device named '" + name + "'");
  return *dev;
}

net::ClientEndpoint& need_client(ExecContext& ctx, const std::string& name) {
  auto* cl = ctx.world.client(name);
  if (!cl) throw std::runtime_error("no client named '" + name + "'");
  return *cl;
}

void require_fresh_name(ExecContext& ctx, const std::string& name) {
  if (ctx.world.names.count(name)) {
    throw std::runtime_error("name '" + name + "' is already in use");
  }
}

void exec_device(ExecContext& ctx, const Directive& d) {
  require_fresh_name(ctx, d.args[0]);
  device::DeviceState state;
  state.msisdn = d.args[1];
  state.settings.secret = {d.args[2], d.args[3]};
  state.settings.login_pin = d.args[4];
  if (!ctx.opts.state_dir.empty()) {
    const std::string path = state_file(ctx.opts.state_dir, state.msisdn);
    if (std::ifstream in(path); in) {
      std::stringstream buf;
      buf << in.rdbuf();
      state = device::load(buf.str());
    }
  }
  const Msisdn msisdn = state.msisdn;
  ctx.world.net.register_endpoint(
      msisdn, std::make_unique<net::DeviceEndpoint>(std::move(state)));
  ctx.world.names[d.args[0]] = {World::EndpointKind::Device, msisdn};
}

void exec_client(ExecContext& ctx, const Directive& d) {
  require_fresh_name(ctx, d.args[0]);
  auto& target = need_device(ctx, d.args[2]);
  const Channel channel =
      d.args[3] == "encrypted" ? Channel::Encrypted : Channel::Plain;
  auto begun = client::begin_connection(d.args[1], target.state().msisdn,
                                        target.state().settings.secret,
                                        channel);
  ctx.world.net.register_endpoint(
      d.args[1], std::make_unique<net::ClientEndpoint>(std::move(begun.state)));
  ctx.world.names[d.args[0]] = {World::EndpointKind::Client, d.args[1]};
  ctx.emit(ctx.world.net.dispatch_effects(d.args[1], {begun.request}));
}

void exec_assert(ExecContext& ctx, const Directive& d) {
  const auto& state = need_device(ctx, d.args[0]).state();
  const std::string& check = d.args[1];
  bool ok = false;
  if (check == "locked") {
    ok = state.locked;
  } else if (check == "unlocked") {
    ok = !state.locked;
  } else if (check == "wifi-on") {
    ok = state.wifi_on;
  } else if (check == "wifi-off") {
    ok = !state.wifi_on;
  } else if (check == "silent") {
    ok = state.profile_silent;
  } else if (check == "flight") {
    ok = state.flight_mode;
  } else if (check.rfind("blocked=", 0) == 0) {
    ok = state.guard.blocked.count(guard::normalize_msisdn(check.substr(8))) > 0;
  } else if (check.rfind("contacts=", 0) == 0) {
    ok = state.contacts.size() == std::stoul(check.substr(9));
  } else if (check.rfind("inbox=", 0) == 0) {
    ok = state.inbox.size() == std::stoul(check.substr(6));
  }
  if (!ok) {
    ctx.failure(d.line, "assert " + d.args[0] + " " + check);
  }
}

void exec_expect(ExecContext& ctx, const Directive& d) {
  const std::string from = ctx.world.resolve(d.args[0]);
  const std::string to = ctx.world.resolve(d.args[1]);
  const std::string& body = d.args[2];
  for (std::size_t i = ctx.expect_cursor; i < ctx.world.transcript.size();
       ++i) {
    const auto& e = ctx.world.transcript[i];
    if (e.kind != net::TranscriptEntry::Kind::Sms) continue;
    if (glob_match(from, e.from) && glob_match(to, e.to) &&
        glob_match(body, e.text)) {
      ctx.expect_cursor = i + 1;
      return;
    }
  }
  ctx.failure(d.line, "expect sms " + d.args[0] + " " + d.args[1] + " \"" +
                          body + "\" not matched");
}

void execute_directive(ExecContext& ctx, const Directive& d,
                       bool seed_locked) {
  switch (d.kind) {
    case Directive::Kind::Seed:
      if (!seed_locked) ctx.world.net.reseed(d.seed);
      break;
    case Directive::Kind::Device:
      exec_device(ctx, d);
      break;
    case Directive::Kind::Client:
      exec_client(ctx, d);
      break;
    case Directive::Kind::Handset:
      require_fresh_name(ctx, d.args[0]);
      ctx.world.net.register_endpoint(d.args[1],
                                      std::make_unique<net::RawHandset>());
      ctx.world.names[d.args[0]] = {World::EndpointKind::Handset, d.args[1]};
      break;
    case Directive::Kind::Contact:
      need_device(ctx, d.args[0])
          .state()
          .contacts.push_back({d.args[1], d.args[2], d.args[3]});
      break;
    case Directive::Kind::Locate:
      need_device(ctx, d.args[0]).state().location =
          device::GeoPoint{d.lat, d.lon};
      break;
    case Directive::Kind::Boot: {
      auto& dev = need_device(ctx, d.args[0]);
      ctx.emit(ctx.world.net.dispatch_effects(
          dev.state().msisdn,
          agent::handle_boot(dev.state(), ctx.world.net.now())));
      break;
    }
    case Directive::Kind::Shutdown:
      device::shutdown(need_device(ctx, d.args[0]).state());
      break;
    case Directive::Kind::SimSwap: {
      auto& dev = need_device(ctx, d.args[0]);
      const Msisdn old_number = dev.state().msisdn;
      device::swap_sim(dev.state(), d.args[1], d.args[2]);
      ctx.world.net.rebind(old_number, d.args[2]);
      ctx.world.names[d.args[0]].msisdn = d.args[2];
      break;
    }
    case Directive::Kind::Sms:
      ctx.world.net.submit_sms(ctx.world.resolve(d.args[0]),
                               ctx.world.resolve(d.args[1]), d.args[2]);
      break;
    case Directive::Kind::Call:
      ctx.world.net.submit_call(ctx.world.resolve(d.args[0]),
                                ctx.world.resolve(d.args[1]));
      break;
    case Directive::Kind::Advance:
      ctx.emit(ctx.world.net.advance(d.duration));
      break;
    case Directive::Kind::Request: {
      auto& cl = need_client(ctx, d.args[0]);
      const auto cmd = command::parse_command(
          d.args[1], cl.state().secret.activation_command);
      if (!cmd) {
        throw std::runtime_error("unknown command text '" + d.args[1] + "'");
      }
      ctx.emit(ctx.world.net.dispatch_effects(
          cl.state().self, {client::request(cl.state(), *cmd)}));
      break;
    }
    case Directive::Kind::UnlockUi: {
      auto& cl = need_client(ctx, d.args[0]);
      if (client::unlock_ui(cl.state(), d.args[1]) !=
          client::UnlockResult::Ok) {
        throw std::runtime_error("wrong temporary pin for '" + d.args[0] + "'");
      }
      break;
    }
    case Directive::Kind::ExpectSms:
      exec_expect(ctx, d);
      break;
    case Directive::Kind::Assert:
      exec_assert(ctx, d);
      break;
  }
}

void persist_devices(ExecContext& ctx) {
  if (ctx.opts.state_dir.empty()) return;
  fs::create_directories(ctx.opts.state_dir);
  for (const auto& [name, entry] : ctx.world.names) {
    (void)name;
    if (entry.kind != World::EndpointKind::Device) continue;
    auto* dev = dynamic_cast<net::DeviceEndpoint*>(ctx.world.net.find(entry.msisdn));
    if (!dev) continue;
    std::ofstream out(state_file(ctx.opts.state_dir, entry.msisdn));
    out << device::save(dev->state());
  }
}

void write_transcript_file(const ExecContext& ctx) {
  if (ctx.opts.transcript_path.empty()) return;
  std::ofstream out(ctx.opts.transcript_path);
  for (const auto& e : ctx.world.transcript) out << e.to_line() << "\n";
}

std::string transcript_text(const World& world) {
  std::string out;
  for (const auto& e : world.transcript) {
    out += e.to_line();
    out += '\n';
  }
  return out;
}

}  // namespace

ScenarioResult run_scenario(std::istream& in, const RunOptions& opts,
                            std::ostream& out, std::ostream& err) {
  ScenarioResult result;
  std::vector<Directive> directives;
  try {
    directives = parse_scenario(in);
  } catch (const ScenarioParseError& e) {
    err << "parse error: line " << e.line << ": " << e.message << "\n";
    result.exit_code = 2;
    return result;
  }

  result.world = std::make_unique<World>(opts.seed.value_or(0));
  ExecContext ctx{*result.world, opts, out, err, {}, 0};
  for (const auto& d : directives) {
    try {
      execute_directive(ctx, d, opts.seed.has_value());
    } catch (const std::exception& e) {
      ctx.failure(d.line, e.what());
    }
  }
  persist_devices(ctx);
  write_transcript_file(ctx);
  result.transcript = transcript_text(*result.world);
  result.failures = std::move(ctx.failures);
  result.exit_code = result.failures.empty() ? 0 : 1;
  return result;
}

int run_scenario_file(const std::string& path, const RunOptions& opts,
                      std::ostream& out, std::ostream& err) {
  std::ifstream in(path);
  if (!in) {
    err << "cannot read scenario file '" << path << "'\n";
    return 2;
  }
  return run_scenario(in, opts, out, err).exit_code;
}

namespace {

void print_help(std::ostream& err) {
  err << "commands:\n"
         "  send <to> <body...>          send an SMS from the attached number\n"
         "  call <to>                    place a call from the attached number\n"
         "  show <name> state|inbox|blocked\n"
         "  unlock <devname> <pin>       local unlock (ends session, leaves flight mode)\n"
         "  clearblocked <devname>       owner clears the device's block list\n"
         "  quit\n"
         "plus any scenario directive (device, client, handset, contact,\n"
         "locate, boot, shutdown, simswap, sms, call, advance, request,\n"
         "unlockui, expect, assert, seed)\n";
}

void show_device(std::ostream& out, const std::string& name,
                 const device::DeviceState& s, const std::string& what) {
  if (what == "inbox") {
    for (std::size_t i = 0; i < s.inbox.size(); ++i) {
      out << i << " " << format_timestamp(s.inbox[i].at) << " from="
          << s.inbox[i].sender << " \"" << s.inbox[i].body << "\"\n";
    }
    if (s.inbox.empty()) out << "(empty)\n";
    return;
  }
  if (what == "blocked") {
    for (const auto& n : s.guard.blocked) out << n << "\n";
    if (s.guard.blocked.empty()) out << "(none)\n";
    return;
  }
  out << name << " msisdn=" << s.msisdn << " sim=" << s.sim_id
      << " booted=" << s.booted << " locked=" << s.locked
      << " silent=" << s.profile_silent << " wifi=" << s.wifi_on
      << " gps=" << s.gps_tracking << " flight=" << s.flight_mode << "\n";
  out << name << " session=";
  if (s.settings.session) {
    out << s.settings.session->peer << "/"
        << channel_name(s.settings.session->channel);
  } else {
    out << "none";
  }
  out << " trusted=" << s.settings.trusted_remote.value_or("none")
      << " call_alert=" << s.settings.call_alert
      << " sms_divert=" << s.settings.sms_divert
      << " auto_reply=" << s.settings.auto_reply.value_or("none") << "\n";
  out << name << " contacts=" << s.contacts.size() << " inbox="
      << s.inbox.size() << " call_log=" << s.call_log.size()
      << " user_files=" << s.user_files.size()
      << " warnings=" << s.guard.warnings.size()
      << " blocked=" << s.guard.blocked.size() << "\n";
}

void show_client(std::ostream& out, const std::string& name,
                 const client::ClientState& s, const std::string& what) {
  if (what == "inbox") {
    for (const auto& [sender, body] : s.inbox_mirror) {
      out << "from=" << sender << " \"" << body << "\"\n";
    }
    if (s.inbox_mirror.empty()) out << "(empty)\n";
    return;
  }
  const char* phase = s.phase == client::Phase::Active
                          ? "active"
                          : (s.phase == client::Phase::Ended ? "ended"
                                                             : "awaiting");
  out << name << " self=" << s.self << " server=" << s.server
      << " channel=" << channel_name(s.channel) << " phase=" << phase
      << " ui_locked=" << s.ui_locked << "\n";
  out << name << " missed_calls=" << s.missed_calls.size()
      << " inbox_mirror=" << s.inbox_mirror.size()
      << " contacts=" << s.contact_results.size()
      << " locations=" << s.location_reports.size() << "\n";
}

void exec_show(ExecContext& ctx, const std::vector<std::string>& tok) {
  if (tok.size() != 3) {
    ctx.err << "usage: show <name> state|inbox|blocked\n";
    return;
  }
  const std::string& name = tok[1];
  const std::string& what = tok[2];
  if (what != "state" && what != "inbox" && what != "blocked") {
    ctx.err << "usage: show <name> state|inbox|blocked\n";
    return;
  }
  if (auto* dev = ctx.world.device(name)) {
    show_device(ctx.out, name, dev->state(), what);
    return;
  }
  if (auto* cl = ctx.world.client(name)) {
    show_client(ctx.out, name, cl->state(), what);
    return;
  }
  if (auto* h = ctx.world.handset(name)) {
    if (what == "inbox") {
      for (const auto& m : h->inbox()) {
        ctx.out << format_timestamp(m.at) << " from=" << m.sender << " \""
                << m.body << "\"\n";
      }
      if (h->inbox().empty()) ctx.out << "(empty)\n";
    } else {
      ctx.out << name << " inbox=" << h->inbox().size()
              << " calls=" << h->calls().size() << "\n";
    }
    return;
  }
  ctx.err << "no endpoint named '" << name << "'\n";
}

}  // namespace

int repl(const Msisdn& attach, std::istream& in, std::ostream& out,
         std::ostream& err, const RunOptions& opts,
         const std::string& scenario_path) {
  auto world = std::make_unique<World>(opts.seed.value_or(0));
  ExecContext ctx{*world, opts, out, err, {}, 0};

  if (!scenario_path.empty()) {
    std::ifstream file(scenario_path);
    if (!file) {
      err << "cannot read scenario file '" << scenario_path << "'\n";
      return 2;
    }
    std::vector<Directive> directives;
    try {
      directives = parse_scenario(file);
    } catch (const ScenarioParseError& e) {
      err << "parse error: line " << e.line << ": " << e.message << "\n";
      return 2;
    }
    for (const auto& d : directives) {
      try {
        execute_directive(ctx, d, opts.seed.has_value());
      } catch (const std::exception& e) {
        ctx.failure(d.line, e.what());
      }
    }
  }

  if (!ctx.world.net.find(attach)) {
    if (!guard::is_msisdn(attach)) {
      err << "'" << attach << "' is not a valid number\n";
      return 2;
    }
    ctx.world.net.register_endpoint(attach, std::make_unique<net::RawHandset>());
    ctx.world.names[attach] = {World::EndpointKind::Handset, attach};
  }

  std::string line;
  int line_number = 0;
  for (;;) {
    err << "> " << std::flush;
    if (!std::getline(in, line)) break;
    ++line_number;
    const std::string text = trim(line);
    if (text.empty() || text[0] == '#') continue;
    const auto tok = split_ws(text);
    const std::string& verb = tok[0];

    if (verb == "quit") break;
    if (verb == "help") {
      print_help(err);
      continue;
    }
    if (verb == "show") {
      exec_show(ctx, tok);
      continue;
    }
    if (verb == "send") {
      if (tok.size() < 3) {
        err << "usage: send <to> <body...>\n";
        continue;
      }
      // body = everything after the <to> token, verbatim apart from trimming
      std::size_t pos = text.find_first_not_of(' ', text.find(' '));
      pos += tok[1].size();
      const std::string body = trim(text.substr(pos));
      try {
        ctx.world.net.submit_sms(attach, ctx.world.resolve(tok[1]), body);
      } catch (const std::exception& e) {
        err << e.what() << "\n";
      }
      continue;
    }
    if (verb == "call" && tok.size() == 2) {
      ctx.world.net.submit_call(attach, ctx.world.resolve(tok[1]));
      continue;
    }
    if (verb == "unlock") {
      auto* dev = tok.size() == 3 ? ctx.world.device(tok[1]) : nullptr;
      if (!dev) {
        err << "usage: unlock <devname> <pin>\n";
        continue;
      }
      try {
        err << (device::unlock(dev->state(), tok[2]) ==
                        device::UnlockResult::Ok
                    ? "unlocked\n"
                    : "wrong pin\n");
      } catch (const std::exception& e) {
        err << e.what() << "\n";
      }
      continue;
    }
    if (verb == "clearblocked") {
      auto* dev = tok.size() == 2 ? ctx.world.device(tok[1]) : nullptr;
      if (!dev) {
        err << "usage: clearblocked <devname>\n";
        continue;
      }
      guard::clear_blocked(dev->state().guard);
      err << "block list cleared\n";
      continue;
    }

    try {
      const auto d = parse_directive(text, line_number);
      if (d) execute_directive(ctx, *d, opts.seed.has_value());
    } catch (const ScenarioParseError& e) {
      err << e.message << " (type 'help' for the command list)\n";
    } catch (const std::exception& e) {
      ctx.failure(line_number, e.what());
    }
  }

  persist_devices(ctx);
  write_transcript_file(ctx);
  return 0;
}

}  // namespace smsguard::cli
