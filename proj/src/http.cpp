#include "focalqg/http.hpp"

#include <httplib.h>

#include <spdlog/spdlog.h>

#include "focalqg/error.hpp"

namespace focalqg::http {

Endpoint parse_url(const std::string& url) {
  Endpoint ep;
  std::string rest = url;
  auto scheme_end = rest.find("://");
  if (scheme_end != std::string::npos) {
    ep.scheme = rest.substr(0, scheme_end);
    rest = rest.substr(scheme_end + 3);
  }
  if (ep.scheme != "http") fail(ErrorCode::ConfigInvalid, "unsupported URL scheme in '" + url + "'");
  auto slash = rest.find('/');
  std::string authority = rest.substr(0, slash);
  if (slash != std::string::npos) ep.base_path = rest.substr(slash);
  while (!ep.base_path.empty() && ep.base_path.back() == '/') ep.base_path.pop_back();
  auto colon = authority.rfind(':');
  if (colon != std::string::npos) {
    try {
      ep.port = std::stoi(authority.substr(colon + 1));
    } catch (const std::exception&) {
      fail(ErrorCode::ConfigInvalid, "bad port in '" + url + "'");
    }
    authority = authority.substr(0, colon);
  }
  if (authority.empty()) fail(ErrorCode::ConfigInvalid, "missing host in '" + url + "'");
  ep.host = authority;
  return ep;
}

io::Json post_json(const Endpoint& endpoint, const std::string& path, const io::Json& body, const CallOptions& options) {
  httplib::Client client(endpoint.host, endpoint.port);
  auto secs = std::chrono::duration_cast<std::chrono::seconds>(options.timeout);
  auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(options.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  const std::string target = endpoint.base_path + path;
  const std::string payload = body.dump();
  std::string last_error;
  ErrorCode last_code = ErrorCode::BackendUnavailable;
  for (int attempt = 0; attempt <= options.retries; ++attempt) {
    auto started = std::chrono::steady_clock::now();
    auto res = client.Post(target, payload, "application/json");
    auto elapsed = std::chrono::steady_clock::now() - started;
    if (!res) {
      bool slow = elapsed >= options.timeout * 9 / 10;
      last_code = (res.error() == httplib::Error::ConnectionTimeout || (res.error() == httplib::Error::Read && slow))
                      ? ErrorCode::GenerationTimeout
                      : ErrorCode::BackendUnavailable;
      last_error = httplib::to_string(res.error());
    } else if (res->status != 200) {
      last_code = ErrorCode::BackendUnavailable;
      last_error = "HTTP " + std::to_string(res->status);
    } else {
      try {
        return io::Json::parse(res->body);
      } catch (const nlohmann::json::exception& e) {
        last_code = ErrorCode::BackendUnavailable;
        last_error = std::string("undecodable reply: ") + e.what();
      }
    }
    spdlog::debug("POST {}{} attempt {} failed: {}", endpoint.host, target, attempt + 1, last_error);
  }
  fail(last_code, "POST " + endpoint.host + ":" + std::to_string(endpoint.port) + target + " failed: " + last_error);
}

}  // namespace focalqg::http
