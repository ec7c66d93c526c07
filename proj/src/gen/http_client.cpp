#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "retrokit/gen/http_client.hpp"

#include <cstdlib>
#include <stdexcept>

#include "httplib.h"
#include "json.hpp"

namespace retrokit::gen {

using json = nlohmann::json;

Endpoint endpoint_from_env(const std::string& prefix) {
  Endpoint e;
  if (const char* url = std::getenv((prefix + "_ENDPOINT").c_str())) e.url = url;
  if (const char* key = std::getenv((prefix + "_API_KEY").c_str())) e.api_key = key;
  return e;
}

HttpChatGenerator::HttpChatGenerator(Endpoint endpoint) : endpoint_(std::move(endpoint)) {
  const auto scheme_end = endpoint_.url.find("://");
  if (scheme_end == std::string::npos) throw std::invalid_argument("endpoint URL needs a scheme: " + endpoint_.url);
  const auto path_start = endpoint_.url.find('/', scheme_end + 3);
  origin_ = endpoint_.url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : endpoint_.url.substr(path_start);
}

std::string chat_request_body(const std::string& prompt, const GenConfig& config) {
  const json body = {{"model", config.model},
                     {"messages", json::array({{{"role", "user"}, {"content", prompt}}})},
                     {"temperature", config.temperature},
                     {"max_tokens", config.max_tokens},
                     {"presence_penalty", config.presence_penalty},
                     {"frequency_penalty", config.frequency_penalty}};
  return body.dump();
}

Completion parse_chat_response(const std::string& body) {
  Completion c;
  try {
    const json j = json::parse(body);
    const auto& choice = j.at("choices").at(0);
    c.text = choice.at("message").at("content").get<std::string>();
    const std::string finish = choice.value("finish_reason", "stop");
    c.finish = finish == "length" ? FinishReason::Length : FinishReason::Stop;
  } catch (const json::exception&) {
    c.text.clear();
    c.finish = FinishReason::Error;
  }
  return c;
}

Completion HttpChatGenerator::generate(const std::string& prompt, const GenConfig& config) {
  httplib::Client client(origin_);
  client.set_connection_timeout(endpoint_.timeout_seconds);
  client.set_read_timeout(endpoint_.timeout_seconds);
  httplib::Headers headers;
  if (!endpoint_.api_key.empty()) headers.emplace("Authorization", "Bearer " + endpoint_.api_key);
  const auto res = client.Post(path_, headers, chat_request_body(prompt, config), "application/json");
  if (!res || res->status != 200) return {{}, FinishReason::Error};
  return parse_chat_response(res->body);
}

}  // namespace retrokit::gen
