#ifndef HARDLABEL_REMOTE_VICTIM_H_
#define HARDLABEL_REMOTE_VICTIM_H_

#include <chrono>
#include <cstdint>
#include <memory>
#include <string>

#include "hardlabel/oracle.h"

namespace hardlabel {

// Client settings for a label-returning HTTP endpoint.
//
// The request template is a JSON document. Inside any string value the
// placeholders {text}, {premise} and {hypothesis} are replaced by the
// (detokenized) input; for single texts {premise} is empty and {hypothesis}
// equals {text}. The label is read from the response at `label_path`, a
// dot-separated list of object keys and array indices ("result.0.label").
struct RemoteVictimConfig {
  std::string endpoint;  // http://host[:port]/path
  std::string request_template = R"({"text": "{text}"})";
  std::string label_path = "label";
  std::chrono::milliseconds timeout{10000};
  // Total attempts per text, including the first.
  int max_attempts = 3;
  // Delay before the second attempt; doubles on each further retry.
  std::chrono::milliseconds backoff{200};
  // Minimum spacing between the starts of consecutive requests.
  std::chrono::milliseconds min_interval{0};
  // Optional static "Name: value" header, e.g. an API key.
  std::string header;
};

// Throws InvalidArgumentError for an unsupported endpoint or a template that
// is not valid JSON.
void validate(const RemoteVictimConfig& config);

class RemoteVictim : public Victim {
 public:
  explicit RemoteVictim(RemoteVictimConfig config);
  ~RemoteVictim() override;
  RemoteVictim(const RemoteVictim&) = delete;
  RemoteVictim& operator=(const RemoteVictim&) = delete;

  // Throws VictimFailureError once all attempts fail, or immediately on a
  // non-retryable response (4xx other than 429, unparseable body, missing
  // label field).
  Label classify(const TokenizedText& x) override;

  // Request body for `x`, as sent on the wire.
  std::string render_request(const TokenizedText& x) const;

  // HTTP requests issued, including retries.
  std::int64_t requests_sent() const { return requests_sent_; }

 private:
  struct Impl;

  void wait_for_slot();

  RemoteVictimConfig config_;
  std::unique_ptr<Impl> impl_;
  std::int64_t requests_sent_ = 0;
  std::chrono::steady_clock::time_point last_request_{};
  bool has_sent_ = false;
};

// Extracts a label from a JSON response body. Throws VictimFailureError.
Label extract_label(const std::string& body, const std::string& label_path);

}  // namespace hardlabel

#endif  // HARDLABEL_REMOTE_VICTIM_H_
