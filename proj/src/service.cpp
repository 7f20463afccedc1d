#include "qfse/service.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <variant>

#include "httplib.h"
#include "json.hpp"
#include "qfse/errors.hpp"
#include "qfse/session_log.hpp"

namespace qfse {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const char* kPromptR1 = "How useful is this for the journalist's generic overview of the topic?";
const char* kPromptR2 =
    "How much useful info does this add to the journalist's overview (regardless of how well it "
    "matched your query)?";
const char* kPromptR3 = "During the interactive stage, how well did the responses respond to your queries?";
const char* kPromptR4 = "As a system for exploring information on a topic,";
const char* kPromptR4a =
    "its capabilities meet the need to efficiently collect useful information for a journalistic "
    "overview.";
const char* kPromptR4b = "it is easy to use.";

ApiResponse reply(int status, const json& body) { return {status, body.dump()}; }

ApiResponse error(int status, const std::string& message) {
  return reply(status, {{"error", message}});
}

// Parses a request body; nullopt when it is not a JSON object.
std::optional<json> parse_body(std::string_view body) {
  if (body.empty()) return json::object();
  try {
    json j = json::parse(body);
    if (!j.is_object()) return std::nullopt;
    return j;
  } catch (const json::parse_error&) {
    return std::nullopt;
  }
}

std::optional<std::string> string_field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) return std::nullopt;
  return it->get<std::string>();
}

// Score in 1..5, or an error message.
std::variant<int, std::string> score_field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_number_integer()) return std::string(key) + " must be an integer 1..5";
  const auto v = it->get<std::int64_t>();
  if (v < 1 || v > 5) return std::string(key) + " must be in 1..5";
  return static_cast<int>(v);
}

std::string safe_name(const std::string& s) {
  std::string out;
  for (char c : s) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '-' || c == '.';
    out.push_back(ok ? c : '-');
  }
  return out.empty() ? "anon" : out;
}

std::pair<std::string, int> parse_listen(const std::string& listen) {
  const auto colon = listen.rfind(':');
  if (colon == std::string::npos) throw ArgumentError("listen must be host:port");
  const std::string host = listen.substr(0, colon);
  int port = 0;
  try {
    std::size_t used = 0;
    port = std::stoi(listen.substr(colon + 1), &used);
    if (used != listen.size() - colon - 1) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw ArgumentError("bad port in listen: " + listen);
  }
  return {host.empty() ? "0.0.0.0" : host, port};
}

json prompts() {
  return {{"r1", kPromptR1}, {"r2", kPromptR2}, {"r3", kPromptR3},
          {"r4", kPromptR4}, {"r4a", kPromptR4a}, {"r4b", kPromptR4b}};
}

}  // namespace

// ---------------------------------------------------------------------------
// ServiceConfig

void ServiceConfig::validate() const {
  if (systems.empty()) throw ArgumentError("service needs at least one system");
  for (const auto& [id, sys] : systems) {
    if (id != sys.system_id) throw ArgumentError("system key " + id + " differs from its system_id");
    sys.validate();
  }
  if (min_explore_seconds < 0) throw ArgumentError("min_explore_seconds must be >= 0");
  if (session_idle_timeout_seconds <= 0) throw ArgumentError("session_idle_timeout_seconds must be > 0");
  if (port < 0 || port > 65535) throw ArgumentError("port out of range");
}

ServiceConfig ServiceConfig::from_json(std::string_view text, const fs::path& base_dir) {
  ServiceConfig c;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ArgumentError(std::string("service config is not JSON: ") + e.what());
  }
  if (!j.is_object()) throw ArgumentError("service config must be a JSON object");
  auto resolve = [&](const std::string& p) {
    fs::path path(p);
    return path.is_relative() && !base_dir.empty() ? base_dir / path : path;
  };
  try {
    if (j.contains("listen")) std::tie(c.host, c.port) = parse_listen(j.at("listen").get<std::string>());
    c.corpus_root = resolve(j.at("corpus_root").get<std::string>());
    c.embedding_path = resolve(j.at("embeddings").get<std::string>());
    if (j.contains("log_dir")) {
      c.log_dir = resolve(j.at("log_dir").get<std::string>());
    } else if (!base_dir.empty()) {
      c.log_dir = base_dir / c.log_dir;
    }
    if (j.contains("static_dir") && !j.at("static_dir").is_null()) {
      c.static_dir = resolve(j.at("static_dir").get<std::string>());
    }
    c.min_explore_seconds = j.value("min_explore_seconds", c.min_explore_seconds);
    c.session_idle_timeout_seconds = j.value("session_idle_timeout_seconds", c.session_idle_timeout_seconds);
    c.use_case = j.value("use_case", c.use_case);
    const json systems = j.value("systems", json::object({{"s1", "s1"}, {"s2", "s2"}}));
    if (!systems.is_object()) throw ArgumentError("systems must be an object");
    for (const auto& [id, spec] : systems.items()) {
      SystemConfig sys;
      if (spec.is_string()) {
        const auto name = spec.get<std::string>();
        if (name == "s1") {
          sys = SystemConfig::s1();
        } else if (name == "s2") {
          sys = SystemConfig::s2();
        } else {
          throw ArgumentError("unknown system preset " + name);
        }
      } else {
        sys = SystemConfig::from_json(spec.dump());
      }
      sys.system_id = id;
      c.systems[id] = sys;
    }
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("bad service config: ") + e.what());
  }
  c.validate();
  return c;
}

ServiceConfig ServiceConfig::load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str(), path.parent_path());
}

// ---------------------------------------------------------------------------
// Service

struct Service::Live {
  std::mutex mu;
  std::unique_ptr<Session> session;
  std::string id;
  std::string user_id;
  std::string triple;
  bool finished = false;
  bool expired = false;
  SessionRecord final_record;
  std::string log_path;
};

Service::Service(ServiceConfig config, Clock clock) : config_(std::move(config)), clock_(std::move(clock)) {
  config_.validate();
  if (!fs::exists(config_.embedding_path)) {
    throw IngestError("embedding file not found: " + config_.embedding_path.string());
  }
  if (!fs::is_directory(config_.corpus_root)) {
    throw IngestError("corpus root not found: " + config_.corpus_root.string());
  }
  store_ = std::make_shared<const EmbeddingStore>(EmbeddingStore::load(config_.embedding_path));
  init(load_corpus_root(config_.corpus_root));
}

Service::Service(ServiceConfig config, std::vector<TopicCorpus> topics,
                 std::shared_ptr<const EmbeddingStore> store, Clock clock)
    : config_(std::move(config)), clock_(std::move(clock)), store_(std::move(store)) {
  config_.validate();
  if (!store_) throw ArgumentError("service needs an embedding store");
  init(std::move(topics));
}

Service::~Service() = default;

void Service::init(std::vector<TopicCorpus> topics) {
  if (topics.empty()) throw IngestError("no topics found");
  for (auto& t : topics) {
    const std::string id = t.topic_id();
    corpora_[id] = std::make_shared<const TopicCorpus>(std::move(t));
  }
  std::set<int> dims;
  for (const auto& [id, sys] : config_.systems) dims.insert(sys.pca_dim);
  for (const auto& [id, corpus] : corpora_) {
    for (int d : dims) indexes_[{id, d}] = TopicIndex::build(corpus, *store_, d);
  }
  std::random_device rd;
  id_salt_ = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

std::string Service::new_session_id() {
  std::mt19937_64 mix(id_salt_ ^ (++counter_ * 0x9E3779B97F4A7C15ULL));
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(mix()));
  return buf;
}

std::shared_ptr<Service::Live> Service::find(const std::string& id) {
  std::lock_guard lock(mu_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

bool Service::expired(const Live& live, std::int64_t now) const {
  if (live.expired) return true;
  return now - live.session->last_active_ms() >
         static_cast<std::int64_t>(config_.session_idle_timeout_seconds) * 1000;
}

void Service::release(const Live& live) {
  std::lock_guard lock(mu_);
  auto it = active_.find(live.triple);
  if (it != active_.end() && it->second == live.id) active_.erase(it);
}

std::size_t Service::live_sessions() const {
  std::lock_guard lock(mu_);
  return active_.size();
}

ApiResponse Service::create_session(std::string_view body) {
  const auto req = parse_body(body);
  if (!req) return error(400, "request body must be a JSON object");
  const auto system_id = string_field(*req, "system_id");
  const auto topic_id = string_field(*req, "topic_id");
  const auto user_id = string_field(*req, "user_id");
  if (!system_id || !topic_id || !user_id) return error(400, "system_id, topic_id and user_id are required");
  auto sys = config_.systems.find(*system_id);
  if (sys == config_.systems.end()) return error(404, "unknown system " + *system_id);
  auto corpus = corpora_.find(*topic_id);
  if (corpus == corpora_.end()) return error(404, "unknown topic " + *topic_id);

  const std::string triple = *user_id + "\n" + *topic_id + "\n" + *system_id;
  std::string id;
  {
    std::lock_guard lock(mu_);
    auto act = active_.find(triple);
    if (act != active_.end()) {
      auto other = sessions_.at(act->second);
      std::unique_lock olock(other->mu, std::try_to_lock);
      const bool stale = olock.owns_lock() && expired(*other, clock_());
      if (!stale) return error(409, "an active session exists for this user, topic and system");
      other->expired = true;
      active_.erase(act);
    }
    id = new_session_id();
    active_[triple] = id;
  }

  auto live = std::make_shared<Live>();
  live->id = id;
  live->user_id = *user_id;
  live->triple = triple;
  try {
    live->session = std::make_unique<Session>(id, indexes_.at({*topic_id, sys->second.pca_dim}), store_,
                                              sys->second, clock_);
  } catch (const std::exception& e) {
    std::lock_guard lock(mu_);
    active_.erase(triple);
    return error(500, e.what());
  }
  {
    std::lock_guard lock(mu_);
    sessions_[id] = live;
  }
  const Session& s = *live->session;
  return reply(200, {
                        {"session_id", id},
                        {"system_id", *system_id},
                        {"topic_id", *topic_id},
                        {"initial_text", s.initial().text},
                        {"initial_word_count", s.initial().word_count},
                        {"r1_prompt", kPromptR1},
                        {"prompts", prompts()},
                        {"suggestions", s.suggestions()},
                        {"min_explore_seconds", config_.min_explore_seconds},
                        {"use_case", config_.use_case},
                    });
}

ApiResponse Service::query(const std::string& session_id, std::string_view body) {
  auto live = find(session_id);
  if (!live) return error(404, "unknown session");
  const auto req = parse_body(body);
  if (!req) return error(400, "request body must be a JSON object");
  const auto type_name = string_field(*req, "query_type").value_or("free_text");
  QueryType type;
  try {
    type = parse_query_type(type_name);
  } catch (const ArgumentError& e) {
    return error(422, e.what());
  }
  const auto text = string_field(*req, "query_text").value_or("");

  std::lock_guard lock(live->mu);
  if (live->finished) return error(410, "session finished");
  if (expired(*live, clock_())) {
    live->expired = true;
    release(*live);
    return error(410, "session expired");
  }
  try {
    const Interaction& it = live->session->respond(text, type);
    json sentences = json::array();
    for (const auto& s : it.response_sentences) {
      sentences.push_back({{"doc_id", s.doc_id}, {"index", s.index}, {"text", s.text}});
    }
    return reply(200, {
                          {"response_index", live->session->interactions().size() - 1},
                          {"query_text", it.query_text},
                          {"query_type", to_string(it.query_type)},
                          {"response_text", it.response_text()},
                          {"response_word_count", it.response_word_count},
                          {"sentences", sentences},
                          {"exhausted", it.exhausted},
                          {"degenerate_query", it.degenerate_query},
                          {"latency_ms", it.latency_ms},
                      });
  } catch (const StateError& e) {
    return error(422, e.what());
  } catch (const ArgumentError& e) {
    return error(422, e.what());
  }
}

ApiResponse Service::rate(const std::string& session_id, std::string_view body) {
  auto live = find(session_id);
  if (!live) return error(404, "unknown session");
  const auto req = parse_body(body);
  if (!req) return error(400, "request body must be a JSON object");
  const auto target = string_field(*req, "target");
  if (!target || (*target != "initial" && *target != "response")) {
    return error(422, "target must be \"initial\" or \"response\"");
  }
  const auto score = score_field(*req, "score");
  if (std::holds_alternative<std::string>(score)) return error(422, std::get<std::string>(score));
  const int value = std::get<int>(score);

  std::lock_guard lock(live->mu);
  if (live->finished) return error(410, "session finished");
  if (expired(*live, clock_())) {
    live->expired = true;
    release(*live);
    return error(410, "session expired");
  }
  if (*target == "initial") {
    live->session->rate_initial(value);
    return reply(200, {{"ok", true}, {"target", "initial"}, {"score", value}});
  }
  auto idx = req->find("response_index");
  if (idx == req->end() || !idx->is_number_integer()) return error(422, "response_index is required");
  const auto i = idx->get<std::int64_t>();
  if (i < 0 || static_cast<std::size_t>(i) >= live->session->interactions().size()) {
    return error(404, "no response with index " + std::to_string(i));
  }
  live->session->rate_response(static_cast<std::size_t>(i), value);
  return reply(200, {{"ok", true}, {"target", "response"}, {"response_index", i}, {"score", value}});
}

ApiResponse Service::finish(const std::string& session_id, std::string_view body) {
  auto live = find(session_id);
  if (!live) return error(404, "unknown session");
  const auto req = parse_body(body);
  if (!req) return error(400, "request body must be a JSON object");
  std::optional<int> answers[3];
  const char* keys[3] = {"r3", "r4a", "r4b"};
  for (int k = 0; k < 3; ++k) {
    auto it = req->find(keys[k]);
    if (it == req->end() || it->is_null()) continue;
    const auto score = score_field(*req, keys[k]);
    if (std::holds_alternative<std::string>(score)) return error(422, std::get<std::string>(score));
    answers[k] = std::get<int>(score);
  }

  std::lock_guard lock(live->mu);
  if (live->finished) return error(410, "session already finished");
  const std::int64_t now = clock_();
  if (expired(*live, now)) {
    live->expired = true;
    release(*live);
    return error(410, "session expired");
  }
  const std::int64_t elapsed = now - live->session->created_at_ms();
  const std::int64_t needed = static_cast<std::int64_t>(config_.min_explore_seconds) * 1000;
  if (elapsed < needed) {
    const std::int64_t remaining = (needed - elapsed + 999) / 1000;
    return reply(200, {{"accepted", false}, {"rejected", "min_time_not_met"}, {"remaining_seconds", remaining}});
  }

  auto& ratings = live->session->ratings();
  ratings.r3 = answers[0];
  ratings.r4a = answers[1];
  ratings.r4b = answers[2];
  SessionRecord record = live->session->to_record(live->user_id, SessionSource::Human);
  const fs::path path = config_.log_dir / (safe_name(record.system_id) + "_" + safe_name(record.topic_id) + "_" +
                                           safe_name(record.user_id) + "_" + live->id + ".json");
  try {
    save_session_record(path, record);
  } catch (const std::exception& e) {
    return error(500, std::string("could not write session log: ") + e.what());
  }
  live->finished = true;
  live->final_record = std::move(record);
  live->log_path = path.string();
  release(*live);
  return reply(200, {{"accepted", true}, {"log_path", live->log_path}});
}

ApiResponse Service::state(const std::string& session_id) {
  auto live = find(session_id);
  if (!live) return error(404, "unknown session");
  std::lock_guard lock(live->mu);
  const Session& s = *live->session;
  const std::int64_t now = clock_();
  json interactions = json::array();
  for (const auto& it : s.interactions()) {
    interactions.push_back({{"query_text", it.query_text},
                            {"query_type", to_string(it.query_type)},
                            {"response_text", it.response_text()},
                            {"rating", it.rating ? json(*it.rating) : json(nullptr)}});
  }
  return reply(200, {
                        {"session_id", live->id},
                        {"system_id", s.config().system_id},
                        {"topic_id", s.topic_id()},
                        {"user_id", live->user_id},
                        {"initial_text", s.initial().text},
                        {"initial_rating", s.ratings().r1 ? json(*s.ratings().r1) : json(nullptr)},
                        {"interactions", interactions},
                        {"suggestions", s.suggestions()},
                        {"prompts", prompts()},
                        {"use_case", config_.use_case},
                        {"min_explore_seconds", config_.min_explore_seconds},
                        {"elapsed_seconds", (now - s.created_at_ms()) / 1000.0},
                        {"finished", live->finished},
                        {"expired", live->expired || (!live->finished && expired(*live, now))},
                    });
}

ApiResponse Service::log(const std::string& session_id) {
  auto live = find(session_id);
  if (!live) return error(404, "unknown session");
  std::lock_guard lock(live->mu);
  const SessionRecord record =
      live->finished ? live->final_record : live->session->to_record(live->user_id, SessionSource::Human);
  return {200, to_json_string(record)};
}

ApiResponse Service::topics() const {
  json list = json::array();
  for (const auto& [id, corpus] : corpora_) {
    list.push_back({{"topic_id", id},
                    {"documents", corpus->documents().size()},
                    {"sentences", corpus->sentences().size()}});
  }
  json systems = json::array();
  for (const auto& [id, sys] : config_.systems) systems.push_back(id);
  return reply(200, {{"topics", list}, {"systems", systems}});
}

ApiResponse Service::health() const { return reply(200, {{"status", "ok"}}); }

// ---------------------------------------------------------------------------
// HttpServer

struct HttpServer::Impl {
  Service& service;
  httplib::Server server;
  explicit Impl(Service& s) : service(s) {}
};

HttpServer::HttpServer(Service& service) : impl_(std::make_unique<Impl>(service)) {
  auto& srv = impl_->server;
  Service& svc = service;
  auto send = [](httplib::Response& res, const ApiResponse& api) {
    res.status = api.status;
    res.set_content(api.body, "application/json");
  };
  srv.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                           {"Access-Control-Allow-Headers", "Content-Type"},
                           {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
  srv.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  srv.Get("/health", [&svc, send](const httplib::Request&, httplib::Response& res) { send(res, svc.health()); });
  srv.Get("/topics", [&svc, send](const httplib::Request&, httplib::Response& res) { send(res, svc.topics()); });
  srv.Post("/sessions", [&svc, send](const httplib::Request& req, httplib::Response& res) {
    send(res, svc.create_session(req.body));
  });
  srv.Get(R"(/sessions/([^/]+))", [&svc, send](const httplib::Request& req, httplib::Response& res) {
    send(res, svc.state(req.matches[1]));
  });
  srv.Post(R"(/sessions/([^/]+)/query)", [&svc, send](const httplib::Request& req, httplib::Response& res) {
    send(res, svc.query(req.matches[1], req.body));
  });
  srv.Post(R"(/sessions/([^/]+)/rating)", [&svc, send](const httplib::Request& req, httplib::Response& res) {
    send(res, svc.rate(req.matches[1], req.body));
  });
  srv.Post(R"(/sessions/([^/]+)/finish)", [&svc, send](const httplib::Request& req, httplib::Response& res) {
    send(res, svc.finish(req.matches[1], req.body));
  });
  srv.Get(R"(/sessions/([^/]+)/log)", [&svc, send](const httplib::Request& req, httplib::Response& res) {
    send(res, svc.log(req.matches[1]));
  });
  srv.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    std::string what = "internal error";
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      what = e.what();
    } catch (...) {
    }
    res.status = 500;
    res.set_content(json{{"error", what}}.dump(), "application/json");
  });
  if (service.config().static_dir) srv.set_mount_point("/", service.config().static_dir->string());
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  auto& srv = impl_->server;
  int bound = -1;
  if (port == 0) {
    bound = srv.bind_to_any_port(host);
  } else if (srv.bind_to_port(host, port)) {
    bound = port;
  }
  if (bound <= 0) throw IngestError("cannot listen on " + host + ":" + std::to_string(port));
  return bound;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

}  // namespace qfse
