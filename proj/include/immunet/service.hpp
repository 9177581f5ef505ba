#pragma once

#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "immunet/serialize.hpp"

namespace httplib {
class Server;
}

namespace immunet {

/// One uploaded graph. The graph is immutable; the harmful set can be
/// replaced through PUT and the eigenpair is computed on first use.
class GraphSession {
 public:
  explicit GraphSession(IndexedGraph g);

  const IndexedGraph& graph() const noexcept { return g_; }
  std::shared_ptr<const HarmfulSet> harmful() const;
  void set_harmful(HarmfulSet set);
  const EigenPair& eigenpair() const;
  bool has_eigenpair() const noexcept { return eig_ready_.load(); }

 private:
  IndexedGraph g_;
  mutable std::mutex mu_;
  std::shared_ptr<const HarmfulSet> harmful_;
  mutable std::once_flag eig_once_;
  mutable EigenPair eig_;
  mutable std::atomic<bool> eig_ready_{false};
};

/// HTTP/JSON front end over the immunization library. `handle` is the whole
/// protocol; `bind` only forwards httplib requests to it.
class Service {
 public:
  struct Request {
    std::string method;
    std::string path;
    std::string body;
    std::map<std::string, std::string> query;
  };
  struct Response {
    int status = 200;
    std::string body;
  };

  /// Simulations whose estimated work (trials * (n + m)) exceeds this run
  /// as background jobs.
  static constexpr double kAsyncWork = 2.0e7;
  /// Hard cap on nodes returned by the view endpoint.
  static constexpr std::size_t kViewLimit = 3000;

  Service() = default;
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  Response handle(const Request& req);
  void bind(httplib::Server& server);

  /// Blocks on the calling thread.
  void serve(const std::string& host, int port);

  /// Waits for every background job (tests).
  void drain_jobs();

 private:
  struct Job {
    std::atomic<int> state{0};  // 0 running, 1 done, 2 failed
    Json result;
    int error_status = 0;
  };

  std::shared_ptr<GraphSession> session(const std::string& id) const;
  Response create_graph(const Request& req);
  Response graph_stats(const std::string& id) const;
  Response put_harmful(const std::string& id, const Request& req);
  Response immunize(const std::string& id, const Request& req);
  Response simulate(const std::string& id, const Request& req);
  Response compare(const std::string& id, const Request& req);
  Response view(const std::string& id, const Request& req) const;
  Response job(const std::string& id) const;

  template <class Fn>
  Response maybe_async(bool async, Fn&& compute);

  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<GraphSession>> graphs_;
  std::map<std::string, std::shared_ptr<Job>> jobs_;
  std::vector<std::thread> workers_;
  std::size_t next_graph_ = 1;
  std::size_t next_job_ = 1;
};

}  // namespace immunet
