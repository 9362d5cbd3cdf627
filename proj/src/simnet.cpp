#include "smsguard/simnet.hpp"

#include "smsguard/agent.hpp"
#include "smsguard/guard.hpp"

namespace smsguard::net {

std::string TranscriptEntry::to_line() const {
  const std::string head = format_timestamp(at);
  switch (kind) {
    case Kind::Sms:
      return head + " SMS " + from + "->" + to + " \"" + text + "\"";
    case Kind::Call:
      return head + " CALL " + from + "->" + to;
    case Kind::Log:
      break;
  }
  return head + " LOG " + text;
}

std::vector<Effect> DeviceEndpoint::on_sms(const SmsMessage& msg,
                                           EventContext& ctx) {
  return agent::handle_sms(state_, msg, ctx.now);
}

std::vector<Effect> DeviceEndpoint::on_call(const std::string& from,
                                            EventContext& ctx) {
  return agent::handle_call(state_, from, ctx.now);
}

std::vector<Effect> DeviceEndpoint::on_gps_tick(EventContext& ctx) {
  return agent::gps_tick(state_, ctx.now);
}

std::string DeviceEndpoint::delivery_block() const {
  if (!state_.booted) return "OFF";
  if (state_.flight_mode) return "FLIGHT";
  return {};
}

std::vector<Effect> ClientEndpoint::on_sms(const SmsMessage& msg,
                                           EventContext& ctx) {
  return client::handle_inbound(state_, msg, ctx.rng);
}

std::vector<Effect> ClientEndpoint::on_call(const std::string& from,
                                            EventContext& ctx) {
  (void)from;
  (void)ctx;
  return {};
}

std::vector<Effect> RawHandset::on_sms(const SmsMessage& msg,
                                       EventContext& ctx) {
  (void)ctx;
  inbox_.push_back(msg);
  return {};
}

std::vector<Effect> RawHandset::on_call(const std::string& from,
                                        EventContext& ctx) {
  calls_.emplace_back(from, ctx.now);
  return {};
}

// A zero delay would let reply loops schedule at due == now forever inside
// one advance window, so the carrier always takes at least a second.
void Network::set_delivery_delay(Seconds delay) {
  if (delay < 1) throw std::invalid_argument("delivery delay must be >= 1");
  delivery_delay_ = delay;
}

void Network::set_loss_permille(int permille) {
  if (permille < 0 || permille > 1000) {
    throw std::invalid_argument("loss must be 0..1000 permille");
  }
  loss_permille_ = permille;
}

Endpoint& Network::register_endpoint(const Msisdn& msisdn,
                                     std::unique_ptr<Endpoint> endpoint) {
  const std::string key = guard::normalize_msisdn(msisdn);
  if (endpoints_.count(key)) {
    throw DuplicateNumber(msisdn + " is already registered");
  }
  auto& slot = endpoints_[key];
  slot.display = msisdn;
  slot.endpoint = std::move(endpoint);
  if (slot.endpoint->gps_capable()) schedule_gps(key);
  return *slot.endpoint;
}

void Network::rebind(const Msisdn& old_number, const Msisdn& new_number) {
  const std::string old_key = guard::normalize_msisdn(old_number);
  const std::string new_key = guard::normalize_msisdn(new_number);
  if (old_key == new_key) return;
  auto it = endpoints_.find(old_key);
  if (it == endpoints_.end()) {
    throw std::invalid_argument(old_number + " is not registered");
  }
  if (endpoints_.count(new_key)) {
    throw DuplicateNumber(new_number + " is already registered");
  }
  Registered moved = std::move(it->second);
  endpoints_.erase(it);
  moved.display = new_number;
  const bool gps = moved.endpoint->gps_capable();
  endpoints_[new_key] = std::move(moved);
  if (gps) schedule_gps(new_key);
}

Endpoint* Network::find(const Msisdn& msisdn) {
  auto it = endpoints_.find(guard::normalize_msisdn(msisdn));
  return it == endpoints_.end() ? nullptr : it->second.endpoint.get();
}

void Network::schedule(PendingEvent ev) {
  ev.seq = seq_++;
  queue_.push(std::move(ev));
}

void Network::schedule_gps(const std::string& key) {
  PendingEvent ev;
  ev.due = now_ + kGpsTickPeriod;
  ev.kind = PendingEvent::Kind::GpsTick;
  ev.to = key;
  schedule(std::move(ev));
}

void Network::submit_sms(const std::string& from, const Msisdn& to,
                         const std::string& body) {
  if (body.size() > kMaxSmsBody) {
    throw std::invalid_argument("SMS body exceeds 160 characters");
  }
  if (!is_printable_text(body)) {
    throw std::invalid_argument("SMS body must be printable text");
  }
  PendingEvent ev;
  ev.due = now_ + delivery_delay_;
  ev.kind = PendingEvent::Kind::Sms;
  ev.from = from;
  ev.to = guard::normalize_msisdn(to);
  ev.display_to = to;
  ev.body = body;
  schedule(std::move(ev));
}

void Network::submit_call(const Msisdn& from, const Msisdn& to) {
  PendingEvent ev;
  ev.due = now_ + delivery_delay_;
  ev.kind = PendingEvent::Kind::Call;
  ev.from = from;
  ev.to = guard::normalize_msisdn(to);
  ev.display_to = to;
  schedule(std::move(ev));
}

void Network::route(const Msisdn& from, const std::vector<Effect>& effects,
                    std::vector<TranscriptEntry>& out) {
  for (const auto& e : effects) {
    switch (e.kind) {
      case Effect::Kind::SendSms:
        submit_sms(from, e.to, e.text);
        break;
      case Effect::Kind::Log:
        out.push_back({now_, TranscriptEntry::Kind::Log, "", "", e.text});
        break;
    }
  }
}

std::vector<TranscriptEntry> Network::dispatch_effects(
    const Msisdn& from, const std::vector<Effect>& effects) {
  std::vector<TranscriptEntry> out;
  route(from, effects, out);
  return out;
}

void Network::process(const PendingEvent& ev,
                      std::vector<TranscriptEntry>& out) {
  auto it = endpoints_.find(ev.to);

  if (ev.kind == PendingEvent::Kind::GpsTick) {
    if (it == endpoints_.end()) return;  // number died in a SIM swap
    EventContext ctx{now_, rng_};
    route(it->second.display, it->second.endpoint->on_gps_tick(ctx), out);
    schedule_gps(ev.to);
    return;
  }

  const std::string arrow = ev.from + "->" + ev.display_to;
  if (it == endpoints_.end()) {
    out.push_back(
        {now_, TranscriptEntry::Kind::Log, "", "", "UNDELIVERED-UNKNOWN " + arrow});
    return;
  }
  if (const std::string reason = it->second.endpoint->delivery_block();
      !reason.empty()) {
    out.push_back({now_, TranscriptEntry::Kind::Log, "", "",
                   "UNDELIVERED-" + reason + " " + arrow});
    return;
  }
  if (loss_permille_ > 0 &&
      static_cast<int>(rng_() % 1000) < loss_permille_) {
    out.push_back({now_, TranscriptEntry::Kind::Log, "", "", "LOST " + arrow});
    return;
  }

  EventContext ctx{now_, rng_};
  if (ev.kind == PendingEvent::Kind::Sms) {
    out.push_back(
        {now_, TranscriptEntry::Kind::Sms, ev.from, it->second.display, ev.body});
    const SmsMessage msg{ev.from, it->second.display, ev.body, now_};
    route(it->second.display, it->second.endpoint->on_sms(msg, ctx), out);
  } else {
    out.push_back(
        {now_, TranscriptEntry::Kind::Call, ev.from, it->second.display, ""});
    route(it->second.display, it->second.endpoint->on_call(ev.from, ctx), out);
  }
}

std::vector<TranscriptEntry> Network::advance(Seconds duration) {
  if (duration < 0) throw std::invalid_argument("cannot advance backwards");
  const Timestamp deadline = now_ + duration;
  std::vector<TranscriptEntry> out;
  while (!queue_.empty() && queue_.top().due <= deadline) {
    const PendingEvent ev = queue_.top();
    queue_.pop();
    now_ = ev.due;
    process(ev, out);
  }
  now_ = deadline;
  return out;
}

}  // namespace smsguard::net
