#pragma once

#include <string>

#include "retrokit/gen/generator.hpp"

namespace retrokit::gen {

struct Endpoint {
  /// Full URL of the chat-completion route, e.g. http://host:8000/v1/chat/completions.
  std::string url;
  std::string api_key;
  int timeout_seconds = 120;
};

/// Reads `<PREFIX>_ENDPOINT` and `<PREFIX>_API_KEY`. The URL is empty when unset.
Endpoint endpoint_from_env(const std::string& prefix);

/// JSON-over-HTTP chat completion. Transport failures, non-200 replies and
/// malformed bodies come back as FinishReason::Error, never as exceptions.
class HttpChatGenerator : public TextGenerator {
 public:
  explicit HttpChatGenerator(Endpoint endpoint);
  Completion generate(const std::string& prompt, const GenConfig& config) override;

 private:
  Endpoint endpoint_;
  std::string origin_;
  std::string path_;
};

/// Request body sent for `prompt`. Exposed for tests.
std::string chat_request_body(const std::string& prompt, const GenConfig& config);

/// Parses a chat-completion response body.
Completion parse_chat_response(const std::string& body);

}  // namespace retrokit::gen
