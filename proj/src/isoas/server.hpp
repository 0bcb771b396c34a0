// Copyright 2026 The isoas Authors
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

#pragma once

#include <memory>
#include <string>
#include <thread>

#include "isoas/engine.hpp"

namespace httplib {
class Server;
}

namespace isoas {

struct ServerConfig {
  std::string host = "127.0.0.1";
  int port = 8080;           // 0 picks a free port
  std::string static_dir;    // served at / when non-empty
  std::string default_session = "web";
};

// JSON-over-HTTP front for an Engine. Domain failures come back as 200 with
// an `error` member; 4xx is reserved for malformed requests.
class Server {
 public:
  Server(Engine& engine, ServerConfig config);
  ~Server();

  // Binds and starts serving on a background thread. Throws BindFailure.
  void start();
  void stop();
  void wait();
  int port() const { return port_; }

 private:
  void routes();

  Engine& engine_;
  ServerConfig config_;
  std::unique_ptr<httplib::Server> http_;
  std::thread thread_;
  int port_ = 0;
};

}  // namespace isoas
