#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qfse/engine.hpp"

namespace qfse {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path corpus_root;
  std::filesystem::path embedding_path;
  std::filesystem::path log_dir = "logs";
  std::optional<std::filesystem::path> static_dir;
  std::map<std::string, SystemConfig> systems;
  int min_explore_seconds = 150;
  int session_idle_timeout_seconds = 3600;
  std::string use_case =
      "Produce an informative summary draft text which a journalist could use to best produce an "
      "overview of the topic.";

  /// Throws ArgumentError on a violated invariant.
  void validate() const;

  /// JSON keys: "listen" ("host:port"), "corpus_root", "embeddings", "log_dir",
  /// "static_dir", "systems" (object of id -> "s1" | "s2" | SystemConfig JSON),
  /// "min_explore_seconds", "session_idle_timeout_seconds", "use_case".
  /// Relative paths resolve against `base_dir`.
  static ServiceConfig from_json(std::string_view text, const std::filesystem::path& base_dir = {});
  static ServiceConfig load(const std::filesystem::path& path);
};

/// Transport-independent response: HTTP status plus a JSON body.
struct ApiResponse {
  int status = 200;
  std::string body;
};

/// The session backend. Corpora and embeddings are shared read-only; each
/// live session has its own mutex, so concurrent calls on one session run one
/// at a time in arrival order while different sessions proceed in parallel.
class Service {
 public:
  /// Loads corpora and embeddings from the configured paths. Throws
  /// IngestError / FormatError when they cannot be read.
  explicit Service(ServiceConfig config, Clock clock = system_clock_ms());
  Service(ServiceConfig config, std::vector<TopicCorpus> topics,
          std::shared_ptr<const EmbeddingStore> store, Clock clock = system_clock_ms());
  ~Service();

  const ServiceConfig& config() const { return config_; }

  ApiResponse create_session(std::string_view body);
  ApiResponse query(const std::string& session_id, std::string_view body);
  ApiResponse rate(const std::string& session_id, std::string_view body);
  ApiResponse finish(const std::string& session_id, std::string_view body);
  ApiResponse state(const std::string& session_id);
  ApiResponse log(const std::string& session_id);
  ApiResponse topics() const;
  ApiResponse health() const;

  std::size_t live_sessions() const;

 private:
  struct Live;
  void init(std::vector<TopicCorpus> topics);
  std::shared_ptr<Live> find(const std::string& id);
  std::string new_session_id();
  bool expired(const Live& live, std::int64_t now) const;
  void release(const Live& live);

  ServiceConfig config_;
  Clock clock_;
  std::shared_ptr<const EmbeddingStore> store_;
  std::map<std::string, std::shared_ptr<const TopicCorpus>> corpora_;
  std::map<std::pair<std::string, int>, std::shared_ptr<const TopicIndex>> indexes_;

  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Live>> sessions_;
  std::map<std::string, std::string> active_;  // "user\ntopic\nsystem" -> session id
  std::uint64_t counter_ = 0;
  std::uint64_t id_salt_ = 0;
};

/// HTTP front end for a Service (cpp-httplib).
class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds host:port (port 0 picks a free port). Returns the bound port or
  /// throws IngestError.
  int bind(const std::string& host, int port);
  /// Blocks until stop() is called.
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace qfse
