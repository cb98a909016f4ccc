// Copyright 2026 the pacore authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy of
// the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations under
// the License.

#include "pacore/mock/mock.hpp"

#include <chrono>

#include "httplib.h"
#include "pacore/errors.hpp"

namespace pacore::mock {

struct MockServerImpl {
  httplib::Server server;
};

MockServer::MockServer(std::shared_ptr<Behavior> behavior, int threads,
                       int port)
    : behavior_(std::move(behavior)), impl_(new MockServerImpl) {
  if (!behavior_) throw ValidationError("mock server needs a behavior");
  httplib::Server& svr = impl_->server;
  svr.new_task_queue = [threads] {
    return new httplib::ThreadPool(static_cast<std::size_t>(threads));
  };
  svr.Post("/chat/completions", [this](const httplib::Request& req,
                                       httplib::Response& res) {
    const int now = active_.fetch_add(1) + 1;
    int prev = max_active_.load();
    while (now > prev && !max_active_.compare_exchange_weak(prev, now)) {
    }
    requests_.fetch_add(1);
    {
      std::lock_guard<std::mutex> lock(bodies_mu_);
      bodies_.push_back(req.body);
    }
    const MockReply reply = behavior_->respond(req.body);
    if (reply.delay_ms > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(reply.delay_ms));
    }
    res.status = reply.status;
    res.set_content(reply.body, "application/json");
    active_.fetch_sub(1);
  });
  if (port > 0) {
    if (!svr.bind_to_port("127.0.0.1", port)) {
      throw ConfigError("mock server failed to bind port " +
                        std::to_string(port));
    }
    port_ = port;
  } else {
    port_ = svr.bind_to_any_port("127.0.0.1");
    if (port_ <= 0) throw ConfigError("mock server failed to bind a port");
  }
  serve_thread_ = std::thread([this] { impl_->server.listen_after_bind(); });
  svr.wait_until_ready();
}

MockServer::~MockServer() {
  impl_->server.stop();
  if (serve_thread_.joinable()) serve_thread_.join();
}

std::string MockServer::base_url() const {
  return "http://127.0.0.1:" + std::to_string(port_);
}

std::vector<std::string> MockServer::recorded_bodies() const {
  std::lock_guard<std::mutex> lock(bodies_mu_);
  return bodies_;
}

}  // namespace pacore::mock
