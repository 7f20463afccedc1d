#include "qfse/embeddings.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "qfse/errors.hpp"

namespace qfse {
namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::vector<std::string_view> fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

bool parse_int(std::string_view s, long& v) {
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc() && p == s.data() + s.size();
}

}  // namespace

EmbeddingStore EmbeddingStore::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open embedding file " + path.string());
  EmbeddingStore store;
  std::string line;
  std::size_t lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    auto f = fields(line);
    if (f.empty()) continue;
    if (first) {
      first = false;
      long count = 0;
      long dim = 0;
      if (f.size() == 2 && parse_int(f[0], count) && parse_int(f[1], dim)) {
        if (dim <= 0) throw FormatError("bad header dimension", lineno);
        store.dim_ = static_cast<int>(dim);
        continue;
      }
      if (f.size() < 2) throw FormatError("embedding line has no values", lineno);
      store.dim_ = static_cast<int>(f.size() - 1);
    }
    if (static_cast<int>(f.size()) - 1 != store.dim_) {
      throw FormatError("expected " + std::to_string(store.dim_) + " values, got " +
                            std::to_string(f.size() - 1),
                        lineno);
    }
    std::vector<float> vec(static_cast<std::size_t>(store.dim_));
    for (int d = 0; d < store.dim_; ++d) {
      auto s = f[static_cast<std::size_t>(d) + 1];
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), vec[static_cast<std::size_t>(d)]);
      if (ec != std::errc() || p != s.data() + s.size()) {
        throw FormatError("malformed value '" + std::string(s) + "'", lineno);
      }
    }
    std::string key = lower(f[0]);
    // First occurrence wins when case-folding merges entries.
    if (store.vectors_.count(key) == 0) {
      store.order_.push_back(key);
      store.vectors_.emplace(std::move(key), std::move(vec));
    }
  }
  return store;
}

void EmbeddingStore::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write embedding file " + path.string());
  char buf[64];
  std::string line;
  for (const auto& w : order_) {
    line = w;
    for (float v : vectors_.at(w)) {
      auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
      line.push_back(' ');
      line.append(buf, p);
    }
    line.push_back('\n');
    out << line;
  }
}

std::optional<std::span<const float>> EmbeddingStore::lookup(std::string_view token) const {
  auto it = vectors_.find(lower(token));
  if (it == vectors_.end()) return std::nullopt;
  return std::span<const float>(it->second);
}

void EmbeddingStore::insert(std::string token, std::vector<float> vec) {
  if (dim_ == 0) dim_ = static_cast<int>(vec.size());
  if (static_cast<int>(vec.size()) != dim_) throw ArgumentError("vector dimension mismatch");
  token = lower(token);
  auto [it, inserted] = vectors_.insert_or_assign(token, std::move(vec));
  if (inserted) order_.push_back(std::move(token));
}

SentenceVector embed_tokens(std::span<const std::string> tokens, const EmbeddingStore& store) {
  SentenceVector out;
  out.values.assign(static_cast<std::size_t>(store.dim()), 0.0);
  int hits = 0;
  for (const auto& t : tokens) {
    auto v = store.lookup(t);
    if (!v) continue;
    ++hits;
    for (std::size_t d = 0; d < out.values.size(); ++d) out.values[d] += (*v)[d];
  }
  if (hits == 0) {
    out.oov = true;
    return out;
  }
  for (double& x : out.values) x /= hits;
  return out;
}

double cosine(std::span<const double> a, std::span<const double> b) {
  double dot = 0, na = 0, nb = 0;
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na <= 0 || nb <= 0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace qfse
