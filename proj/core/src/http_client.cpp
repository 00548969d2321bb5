// Copyright 2026 The gplan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <httplib.h>

#include "gplan/decode.hpp"
#include "gplan/error.hpp"

namespace gplan {

struct HttpGeneratorClient::Impl {
  HttpClientOptions options;
  std::string path;
  std::unique_ptr<httplib::Client> client;
};

namespace {

// Splits "http://host:port/path" into the scheme-host-port part and path.
std::pair<std::string, std::string> split_endpoint(const std::string& endpoint) {
  auto scheme = endpoint.find("://");
  if (scheme == std::string::npos || endpoint.compare(0, scheme, "http") != 0)
    throw Error(ErrorCode::InvalidConfig, "endpoint must look like http://host:port/path, got '" +
                                              endpoint + "'");
  auto slash = endpoint.find('/', scheme + 3);
  if (slash == std::string::npos) return {endpoint, "/"};
  return {endpoint.substr(0, slash), endpoint.substr(slash)};
}

}  // namespace

HttpGeneratorClient::HttpGeneratorClient(HttpClientOptions options)
    : impl_(std::make_unique<Impl>()) {
  if (options.retries < 0) throw Error(ErrorCode::InvalidConfig, "retries must be >= 0");
  auto [base, path] = split_endpoint(options.endpoint);
  impl_->path = path;
  impl_->client = std::make_unique<httplib::Client>(base);
  auto secs = std::chrono::duration_cast<std::chrono::seconds>(options.timeout);
  auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(options.timeout - secs);
  impl_->client->set_connection_timeout(secs.count(), usecs.count());
  impl_->client->set_read_timeout(secs.count(), usecs.count());
  impl_->client->set_write_timeout(secs.count(), usecs.count());
  impl_->options = std::move(options);
}

HttpGeneratorClient::~HttpGeneratorClient() = default;

GeneratorResponse HttpGeneratorClient::generate(const GeneratorRequest& request) {
  auto body = request_to_json(request).dump();
  std::string last_error;
  for (int attempt = 0; attempt <= impl_->options.retries; ++attempt) {
    auto res = impl_->client->Post(impl_->path, body, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status != 200)
      throw Error(ErrorCode::ProtocolError, "generator answered HTTP " + std::to_string(res->status));
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ProtocolError, std::string("response is not JSON: ") + e.what());
    }
    return response_from_json(doc);
  }
  throw Error(ErrorCode::GeneratorUnreachable,
              impl_->options.endpoint + " (" + last_error + ")");
}

}  // namespace gplan
