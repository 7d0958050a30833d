#include "hardlabel/remote_victim.h"

#include <httplib.h>

#include <json.hpp>
#include <thread>

#include "hardlabel/errors.h"

namespace hardlabel {
namespace {

using nlohmann::json;

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

Endpoint parse_endpoint(const std::string& url) {
  const std::string scheme = "http://";
  if (url.rfind(scheme, 0) != 0) {
    throw InvalidArgumentError("endpoint must start with http://: " + url);
  }
  auto slash = url.find('/', scheme.size());
  Endpoint e;
  e.origin = url.substr(0, slash);
  e.path = slash == std::string::npos ? "/" : url.substr(slash);
  if (e.origin.size() == scheme.size()) {
    throw InvalidArgumentError("endpoint has no host: " + url);
  }
  return e;
}

void replace_all(std::string& s, std::string_view from, const std::string& to) {
  std::size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
}

void fill_placeholders(json& node, const std::string& text,
                       const std::string& premise,
                       const std::string& hypothesis) {
  if (node.is_string()) {
    auto s = node.get<std::string>();
    replace_all(s, "{text}", text);
    replace_all(s, "{premise}", premise);
    replace_all(s, "{hypothesis}", hypothesis);
    node = std::move(s);
  } else if (node.is_structured()) {
    for (auto& child : node) fill_placeholders(child, text, premise, hypothesis);
  }
}

bool retryable(int status) { return status == 429 || status >= 500; }

}  // namespace

struct RemoteVictim::Impl {
  explicit Impl(const Endpoint& e) : client(e.origin), path(e.path) {}
  httplib::Client client;
  std::string path;
};

void validate(const RemoteVictimConfig& config) {
  parse_endpoint(config.endpoint);
  if (!json::accept(config.request_template)) {
    throw InvalidArgumentError("request template is not valid JSON");
  }
  if (config.max_attempts < 1) {
    throw InvalidArgumentError("max_attempts must be >= 1");
  }
  if (config.label_path.empty()) {
    throw InvalidArgumentError("label path is empty");
  }
}

RemoteVictim::RemoteVictim(RemoteVictimConfig config)
    : config_(std::move(config)) {
  validate(config_);
  impl_ = std::make_unique<Impl>(parse_endpoint(config_.endpoint));
  auto secs = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
  auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(
      config_.timeout - secs);
  impl_->client.set_connection_timeout(secs.count(), usecs.count());
  impl_->client.set_read_timeout(secs.count(), usecs.count());
  impl_->client.set_write_timeout(secs.count(), usecs.count());
}

RemoteVictim::~RemoteVictim() = default;

std::string RemoteVictim::render_request(const TokenizedText& x) const {
  json body = json::parse(config_.request_template);
  std::string premise;
  std::string hypothesis;
  if (x.is_pair()) {
    premise = detokenize(x, 0, x.segment_start());
    hypothesis = detokenize(x, x.segment_start(), x.size());
  } else {
    hypothesis = detokenize(x);
  }
  fill_placeholders(body, detokenize(x), premise, hypothesis);
  return body.dump();
}

void RemoteVictim::wait_for_slot() {
  if (has_sent_ && config_.min_interval.count() > 0) {
    auto ready = last_request_ + config_.min_interval;
    std::this_thread::sleep_until(ready);
  }
  last_request_ = std::chrono::steady_clock::now();
  has_sent_ = true;
}

Label RemoteVictim::classify(const TokenizedText& x) {
  const std::string body = render_request(x);
  httplib::Headers headers;
  if (!config_.header.empty()) {
    auto colon = config_.header.find(':');
    if (colon != std::string::npos) {
      auto value = config_.header.substr(colon + 1);
      value.erase(0, value.find_first_not_of(' '));
      headers.emplace(config_.header.substr(0, colon), value);
    }
  }

  std::string last_error;
  auto delay = config_.backoff;
  for (int attempt = 0; attempt < config_.max_attempts; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(delay);
      delay *= 2;
    }
    wait_for_slot();
    ++requests_sent_;
    auto res = impl_->client.Post(impl_->path, headers, body,
                                  "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 200 && res->status < 300) {
      return extract_label(res->body, config_.label_path);
    }
    last_error = "HTTP " + std::to_string(res->status);
    if (!retryable(res->status)) break;
  }
  throw VictimFailureError("remote victim failed after " +
                           std::to_string(config_.max_attempts) +
                           " attempt(s): " + last_error);
}

Label extract_label(const std::string& body, const std::string& label_path) {
  json doc = json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) {
    throw VictimFailureError("response is not JSON");
  }
  const json* node = &doc;
  std::size_t start = 0;
  while (start <= label_path.size()) {
    auto dot = label_path.find('.', start);
    std::string key = label_path.substr(
        start, dot == std::string::npos ? std::string::npos : dot - start);
    if (node->is_object() && node->contains(key)) {
      node = &(*node)[key];
    } else if (node->is_array() && !key.empty() &&
               key.find_first_not_of("0123456789") == std::string::npos &&
               std::stoul(key) < node->size()) {
      node = &(*node)[std::stoul(key)];
    } else {
      throw VictimFailureError("label path '" + label_path +
                               "' not found in response");
    }
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  if (node->is_string()) return Label{node->get<std::string>()};
  if (node->is_number_integer()) return Label::of(node->get<long long>());
  if (node->is_boolean()) return Label{node->get<bool>() ? "true" : "false"};
  throw VictimFailureError("label at '" + label_path +
                           "' is not a string, integer or boolean");
}

}  // namespace hardlabel
