#pragma once

#include <chrono>
#include <string>

#include "focalqg/jsonl.hpp"

namespace focalqg::http {

struct Endpoint {
  std::string scheme = "http";
  std::string host;
  int port = 80;
  std::string base_path;  // no trailing slash
};

// Accepts "http://host[:port][/prefix]". Only plain HTTP is supported.
Endpoint parse_url(const std::string& url);

struct CallOptions {
  std::chrono::milliseconds timeout{10000};
  int retries = 2;  // extra attempts after the first
};

// POSTs a JSON body and returns the decoded JSON reply. A reply slower than
// the timeout raises GenerationTimeout; connection failures, non-200 codes
// and undecodable bodies raise BackendUnavailable.
io::Json post_json(const Endpoint& endpoint, const std::string& path, const io::Json& body, const CallOptions& options);

}  // namespace focalqg::http
