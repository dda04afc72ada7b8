// Copyright 2026 The Tagcube Authors.
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

#include "tagcube/error.h"
#include "tagcube/service.h"

namespace tagcube {

void serve(Service& service, const std::string& host, int port, const std::string& static_dir) {
  httplib::Server server;
  if (!static_dir.empty() && !server.set_mount_point("/", static_dir)) {
    throw Error(ErrorCode::kIo, "cannot serve static files from " + static_dir);
  }
  auto route = [&service](const httplib::Request& req, httplib::Response& res) {
    HttpReply reply = service.handle(req.method, req.path, req.body);
    res.status = reply.status;
    res.set_content(reply.body, reply.content_type);
  };
  const char* api = R"(/(datasets|clouds)(/.*)?)";
  server.Get(api, route);
  server.Post(api, route);
  server.Put(api, route);
  if (!server.listen(host, port)) throw Error(ErrorCode::kIo, "cannot listen on " + host + ":" + std::to_string(port));
}

}  // namespace tagcube
