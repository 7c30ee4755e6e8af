#include "httplib.h"

#include <cstdlib>

#include "json.hpp"
#include "revpipe/error.hpp"
#include "revpipe/extraction.hpp"

namespace revpipe {

namespace {

// Splits "http(s)://host[:port]/path" into base and path.
std::pair<std::string, std::string> split_endpoint(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw PipelineError(ErrorKind::BackendError, "endpoint_url missing scheme: " + url);
  }
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

HttpBackend::HttpBackend(BackendConfig config) : config_(std::move(config)) {
  if (config_.endpoint_url.empty()) {
    throw PipelineError(ErrorKind::BackendError, "http backend requires endpoint_url");
  }
}

std::string HttpBackend::complete(const CorrespondenceDocument&, const std::string& prompt) {
  const auto [base, path] = split_endpoint(config_.endpoint_url);
  httplib::Client client(base);
  client.set_connection_timeout(config_.timeout_seconds, 0);
  client.set_read_timeout(config_.timeout_seconds, 0);
  client.set_write_timeout(config_.timeout_seconds, 0);

  httplib::Headers headers;
  if (const char* key = std::getenv(config_.api_key_env.c_str()); key && *key) {
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }

  nlohmann::ordered_json body;
  body["model"] = config_.model_name;
  body["temperature"] = config_.temperature;
  body["messages"] = nlohmann::ordered_json::array(
      {{{"role", "user"}, {"content", prompt}}});

  const auto res = client.Post(path, headers, body.dump(), "application/json");
  if (!res) {
    throw PipelineError(ErrorKind::BackendError,
                        "transport failure: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw PipelineError(ErrorKind::BackendError, "status " + std::to_string(res->status));
  }

  // OpenAI-style chat shape first; fall back to the raw body so simpler
  // text-in/text-out services still work.
  try {
    const auto j = nlohmann::json::parse(res->body);
    if (j.contains("choices") && j["choices"].is_array() && !j["choices"].empty()) {
      const auto& message = j["choices"][0];
      if (message.contains("message") && message["message"].contains("content")) {
        return message["message"]["content"].get<std::string>();
      }
      if (message.contains("text")) return message["text"].get<std::string>();
    }
    if (j.contains("content") && j["content"].is_string()) {
      return j["content"].get<std::string>();
    }
  } catch (const nlohmann::json::exception&) {
  }
  return res->body;
}

}  // namespace revpipe
