#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <queue>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "smsguard/client.hpp"
#include "smsguard/device.hpp"
#include "smsguard/types.hpp"

namespace smsguard::net {

// Device endpoints get one of these every 600 simulated seconds.
inline constexpr Seconds kGpsTickPeriod = 600;

// One line of the golden-file contract:
//   <iso-ts> SMS <from>-><to> "<body>"
//   <iso-ts> CALL <from>-><to>
//   <iso-ts> LOG <text>
struct TranscriptEntry {
  enum class Kind { Sms, Call, Log };

  Timestamp at = 0;
  Kind kind = Kind::Log;
  std::string from;
  std::string to;
  std::string text;  // SMS body, or log text

  std::string to_line() const;

  bool operator==(const TranscriptEntry&) const = default;
};

struct EventContext {
  Timestamp now;
  std::mt19937& rng;
};

class Endpoint {
 public:
  virtual ~Endpoint() = default;

  virtual std::vector<Effect> on_sms(const SmsMessage& msg,
                                     EventContext& ctx) = 0;
  virtual std::vector<Effect> on_call(const std::string& from,
                                      EventContext& ctx) = 0;
  virtual std::vector<Effect> on_gps_tick(EventContext& ctx) {
    (void)ctx;
    return {};
  }
  virtual bool gps_capable() const { return false; }

  // Empty means deliverable; otherwise a reason token ("FLIGHT", "OFF") for
  // the UNDELIVERED log line.
  virtual std::string delivery_block() const { return {}; }
};

class DeviceEndpoint : public Endpoint {
 public:
  explicit DeviceEndpoint(device::DeviceState state)
      : state_(std::move(state)) {}

  device::DeviceState& state() { return state_; }
  const device::DeviceState& state() const { return state_; }

  std::vector<Effect> on_sms(const SmsMessage& msg, EventContext& ctx) override;
  std::vector<Effect> on_call(const std::string& from,
                              EventContext& ctx) override;
  std::vector<Effect> on_gps_tick(EventContext& ctx) override;
  bool gps_capable() const override { return true; }
  std::string delivery_block() const override;

  bool is_reachable() const { return delivery_block().empty(); }

 private:
  device::DeviceState state_;
};

class ClientEndpoint : public Endpoint {
 public:
  explicit ClientEndpoint(client::ClientState state)
      : state_(std::move(state)) {}

  client::ClientState& state() { return state_; }
  const client::ClientState& state() const { return state_; }

  std::vector<Effect> on_sms(const SmsMessage& msg, EventContext& ctx) override;
  std::vector<Effect> on_call(const std::string& from,
                              EventContext& ctx) override;

 private:
  client::ClientState state_;
};

// A normal mobile: stores whatever arrives, replies to nothing. Its traffic
// is driven from the CLI.
class RawHandset : public Endpoint {
 public:
  std::vector<Effect> on_sms(const SmsMessage& msg, EventContext& ctx) override;
  std::vector<Effect> on_call(const std::string& from,
                              EventContext& ctx) override;

  const std::vector<SmsMessage>& inbox() const { return inbox_; }
  const std::vector<std::pair<std::string, Timestamp>>& calls() const {
    return calls_;
  }

 private:
  std::vector<SmsMessage> inbox_;
  std::vector<std::pair<std::string, Timestamp>> calls_;
};

struct DuplicateNumber : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Discrete-event SMS/call carrier with a logical clock. Strictly
// single-threaded; events are processed in (due_at, submission) order, so a
// run is a pure function of (scenario, seed).
class Network {
 public:
  explicit Network(std::uint64_t seed = 0) : rng_(seed) {}

  void reseed(std::uint64_t seed) { rng_.seed(seed); }
  void set_delivery_delay(Seconds delay);
  void set_loss_permille(int permille);

  Endpoint& register_endpoint(const Msisdn& msisdn,
                              std::unique_ptr<Endpoint> endpoint);

  // Re-keys an endpoint after a SIM swap. Pending GPS ticks for the old
  // number die quietly; a fresh cadence starts under the new one.
  void rebind(const Msisdn& old_number, const Msisdn& new_number);

  Endpoint* find(const Msisdn& msisdn);

  // The carrier accepts anything; unknown or unreachable recipients surface
  // as UNDELIVERED log entries at delivery time. Bodies must be printable
  // and fit kMaxSmsBody.
  void submit_sms(const std::string& from, const Msisdn& to,
                  const std::string& body);
  void submit_call(const Msisdn& from, const Msisdn& to);

  // Routes effects produced outside a delivery (boot, client creation):
  // SendSms gets scheduled, Log becomes an immediate transcript entry.
  std::vector<TranscriptEntry> dispatch_effects(
      const Msisdn& from, const std::vector<Effect>& effects);

  // Processes everything due in the window in (due_at, seq) order, cascading
  // follow-up submissions that land inside it; the clock ends at now+duration.
  std::vector<TranscriptEntry> advance(Seconds duration);

  Timestamp now() const { return now_; }
  std::mt19937& rng() { return rng_; }

 private:
  struct PendingEvent {
    enum class Kind { Sms, Call, GpsTick };

    Timestamp due = 0;
    std::uint64_t seq = 0;
    Kind kind = Kind::Sms;
    std::string from;
    std::string to;  // delivery key (normalized); GpsTick target
    std::string body;
    std::string display_to;  // original form for transcript lines

    bool operator>(const PendingEvent& other) const {
      if (due != other.due) return due > other.due;
      return seq > other.seq;
    }
  };

  struct Registered {
    Msisdn display;
    std::unique_ptr<Endpoint> endpoint;
  };

  void schedule(PendingEvent ev);
  void schedule_gps(const std::string& key);
  void process(const PendingEvent& ev, std::vector<TranscriptEntry>& out);
  void route(const Msisdn& from, const std::vector<Effect>& effects,
             std::vector<TranscriptEntry>& out);

  std::map<std::string, Registered> endpoints_;  // keyed by normalized number
  std::priority_queue<PendingEvent, std::vector<PendingEvent>,
                      std::greater<PendingEvent>>
      queue_;
  Timestamp now_ = 0;
  std::uint64_t seq_ = 0;
  Seconds delivery_delay_ = 1;
  int loss_permille_ = 0;
  std::mt19937 rng_;
};

}  // namespace smsguard::net
