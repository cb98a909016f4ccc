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

#include <unistd.h>

#include <csignal>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "pacore/errors.hpp"
#include "pacore/mock/mock.hpp"

namespace {

volatile std::sig_atomic_t g_stop = 0;

void handle_signal(int) { g_stop = 1; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Scripted chat-completion endpoint for deterministic integration "
      "testing; serves until SIGINT or SIGTERM"};
  std::string scenario;
  int threads = 32;
  int port = 0;
  app.add_option("--scenario", scenario, "Scenario file (JSON)")->required();
  app.add_option("--threads", threads, "Server thread pool size");
  app.add_option("--port", port, "Port to bind; 0 picks an ephemeral one");

  try {
    app.parse(argc, argv);
    pacore::mock::MockServer server(pacore::mock::Behavior::from_file(scenario),
                                    threads, port);
    std::cout << "listening on " << server.port() << "\n" << std::flush;

    struct sigaction sa = {};
    sa.sa_handler = handle_signal;
    sigaction(SIGINT, &sa, nullptr);
    sigaction(SIGTERM, &sa, nullptr);
    while (g_stop == 0) pause();
    return 0;
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  } catch (const pacore::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
