#include "qfse/textproc.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "json.hpp"
#include "qfse/errors.hpp"

namespace qfse {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

char ascii_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

const std::unordered_set<std::string_view>& abbreviations() {
  static const std::unordered_set<std::string_view> set = {
      "mr",   "mrs",  "ms",  "dr",   "prof", "sr",  "jr",   "st",  "mt",  "vs",
      "etc",  "inc",  "ltd", "co",   "corp", "gov", "sen",  "rep", "gen", "col",
      "lt",   "sgt",  "capt", "jan", "feb",  "mar", "apr",  "jun", "jul", "aug",
      "sep",  "sept", "oct", "nov",  "dec",  "fig", "e.g",  "i.e", "u.s", "u.k",
      "a.m",  "p.m",  "approx", "dept", "univ", "ave", "blvd",
  };
  return set;
}

bool is_terminal(char c) { return c == '.' || c == '?' || c == '!'; }

// Closing quotes/brackets that may trail a terminal mark. UTF-8 right quotes
// (E2 80 99 / E2 80 9D) are handled byte-wise by the caller.
bool is_closer(char c) { return c == '"' || c == '\'' || c == ')' || c == ']'; }

// The word ending at `end` (exclusive), with leading brackets/quotes removed
// and the trailing period dropped, lowercased.
std::string word_before(std::string_view s, std::size_t end) {
  std::size_t begin = end;
  while (begin > 0 && !is_space(s[begin - 1])) --begin;
  std::string w;
  for (std::size_t i = begin; i < end; ++i) w.push_back(ascii_lower(s[i]));
  while (!w.empty() && (w.front() == '(' || w.front() == '"' || w.front() == '\'' ||
                        w.front() == '[')) {
    w.erase(w.begin());
  }
  if (!w.empty() && w.back() == '.') w.pop_back();
  return w;
}

bool is_abbreviation(std::string_view s, std::size_t period_pos) {
  const std::string w = word_before(s, period_pos + 1);
  if (w.empty()) return false;
  return abbreviations().count(w) > 0;
}

bool is_punct_byte(unsigned char c) { return c < 0x80 && std::ispunct(c) != 0; }

// Strips ASCII punctuation and UTF-8 curly quotes from both ends.
void strip_punct(std::string& t) {
  for (;;) {
    bool changed = false;
    while (!t.empty() && is_punct_byte(static_cast<unsigned char>(t.back()))) {
      t.pop_back();
      changed = true;
    }
    while (!t.empty() && is_punct_byte(static_cast<unsigned char>(t.front()))) {
      t.erase(t.begin());
      changed = true;
    }
    // U+2018, U+2019, U+201C, U+201D
    auto curly = [](std::string_view v) {
      return v.size() == 3 && static_cast<unsigned char>(v[0]) == 0xE2 &&
             static_cast<unsigned char>(v[1]) == 0x80 &&
             (static_cast<unsigned char>(v[2]) == 0x98 || static_cast<unsigned char>(v[2]) == 0x99 ||
              static_cast<unsigned char>(v[2]) == 0x9C || static_cast<unsigned char>(v[2]) == 0x9D);
    };
    if (t.size() >= 3 && curly(std::string_view(t).substr(t.size() - 3))) {
      t.resize(t.size() - 3);
      changed = true;
    }
    if (t.size() >= 3 && curly(std::string_view(t).substr(0, 3))) {
      t.erase(0, 3);
      changed = true;
    }
    if (!changed) return;
  }
}

void strip_possessive(std::string& t) {
  if (t.size() > 2 && t.compare(t.size() - 2, 2, "'s") == 0) {
    t.resize(t.size() - 2);
  } else if (t.size() > 4 && t.compare(t.size() - 4, 4, "\xE2\x80\x99s") == 0) {
    t.resize(t.size() - 4);
  }
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IngestError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<fs::path> sorted_txt_files(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::vector<std::string> parse_scus(const json& j) {
  if (!j.is_array()) throw IngestError("scus must be an array of strings");
  std::vector<std::string> out;
  for (const auto& s : j) {
    if (!s.is_string()) throw IngestError("scus must be an array of strings");
    out.push_back(s.get<std::string>());
  }
  return out;
}

TopicCorpus load_plain_dir(const fs::path& dir) {
  const fs::path docs_dir = dir / "docs";
  if (!fs::is_directory(docs_dir)) throw IngestError("missing docs directory: " + docs_dir.string());
  std::vector<Document> docs;
  for (const auto& f : sorted_txt_files(docs_dir)) {
    docs.push_back(make_document(f.stem().string(), read_file(f)));
  }
  std::vector<ReferenceSummary> refs;
  if (fs::is_directory(dir / "refs")) {
    for (const auto& f : sorted_txt_files(dir / "refs")) {
      refs.push_back(make_reference(f.stem().string(), read_file(f)));
    }
  }
  std::vector<std::string> scus;
  if (fs::exists(dir / "scus.json")) {
    try {
      scus = parse_scus(json::parse(read_file(dir / "scus.json")));
    } catch (const json::exception& e) {
      throw IngestError(std::string("bad scus.json: ") + e.what());
    }
  }
  std::string topic_id = dir.filename().string();
  if (topic_id.empty()) topic_id = dir.parent_path().filename().string();
  return TopicCorpus(std::move(topic_id), std::move(docs), std::move(refs), std::move(scus));
}

TopicCorpus load_json(const fs::path& file) {
  json j;
  try {
    j = json::parse(read_file(file));
    std::string topic_id = j.at("topic_id").get<std::string>();
    std::vector<Document> docs;
    for (const auto& d : j.at("documents")) {
      docs.push_back(make_document(d.at("doc_id").get<std::string>(), d.at("text").get<std::string>()));
    }
    std::vector<ReferenceSummary> refs;
    if (j.contains("references")) {
      int i = 0;
      for (const auto& r : j.at("references")) {
        refs.push_back(make_reference("ref" + std::to_string(i++), r.get<std::string>()));
      }
    }
    std::vector<std::string> scus;
    if (j.contains("scus") && !j.at("scus").is_null()) scus = parse_scus(j.at("scus"));
    return TopicCorpus(std::move(topic_id), std::move(docs), std::move(refs), std::move(scus));
  } catch (const json::exception& e) {
    throw IngestError("bad corpus JSON " + file.string() + ": " + e.what());
  }
}

}  // namespace

TopicCorpus::TopicCorpus(std::string topic_id, std::vector<Document> documents,
                         std::vector<ReferenceSummary> references, std::vector<std::string> scus)
    : topic_id_(std::move(topic_id)),
      documents_(std::move(documents)),
      references_(std::move(references)),
      scus_(std::move(scus)) {
  if (topic_id_.empty()) throw IngestError("topic_id must be nonempty");
  if (documents_.empty()) throw IngestError("topic " + topic_id_ + " has no documents");
  std::sort(documents_.begin(), documents_.end(),
            [](const Document& a, const Document& b) { return a.doc_id < b.doc_id; });
  for (std::size_t i = 1; i < documents_.size(); ++i) {
    if (documents_[i].doc_id == documents_[i - 1].doc_id) {
      throw IngestError("duplicate doc_id " + documents_[i].doc_id);
    }
  }
  reindex();
}

TopicCorpus::TopicCorpus(const TopicCorpus& other)
    : topic_id_(other.topic_id_),
      documents_(other.documents_),
      references_(other.references_),
      scus_(other.scus_) {
  reindex();
}

TopicCorpus& TopicCorpus::operator=(const TopicCorpus& other) {
  if (this != &other) {
    topic_id_ = other.topic_id_;
    documents_ = other.documents_;
    references_ = other.references_;
    scus_ = other.scus_;
    reindex();
  }
  return *this;
}

void TopicCorpus::reindex() {
  flat_.clear();
  for (const auto& d : documents_) {
    for (const auto& s : d.sentences) flat_.push_back(&s);
  }
}

std::vector<std::vector<std::string>> TopicCorpus::reference_tokens() const {
  std::vector<std::vector<std::string>> out;
  out.reserve(references_.size());
  for (const auto& r : references_) out.push_back(r.tokens);
  return out;
}

std::vector<std::string> split_sentences(std::string_view raw) {
  std::vector<std::string> out;
  auto emit = [&](std::size_t b, std::size_t e) {
    while (b < e && is_space(raw[b])) ++b;
    while (e > b && is_space(raw[e - 1])) --e;
    if (e > b) out.emplace_back(raw.substr(b, e - b));
  };

  std::size_t start = 0;
  std::size_t i = 0;
  while (i < raw.size()) {
    if (!is_terminal(raw[i])) {
      ++i;
      continue;
    }
    const std::size_t mark = i;
    std::size_t end = i + 1;
    while (end < raw.size()) {
      if (is_terminal(raw[end]) || is_closer(raw[end])) {
        ++end;
      } else if (end + 2 < raw.size() && static_cast<unsigned char>(raw[end]) == 0xE2 &&
                 static_cast<unsigned char>(raw[end + 1]) == 0x80 &&
                 (static_cast<unsigned char>(raw[end + 2]) == 0x99 ||
                  static_cast<unsigned char>(raw[end + 2]) == 0x9D)) {
        end += 3;
      } else {
        break;
      }
    }
    const bool at_break = end >= raw.size() || is_space(raw[end]);
    bool boundary = at_break;
    if (boundary && raw[mark] == '.' && end == mark + 1) {
      if (is_abbreviation(raw, mark)) boundary = false;
    }
    if (boundary && end < raw.size()) {
      std::size_t next = end;
      while (next < raw.size() && is_space(raw[next])) ++next;
      if (next < raw.size() && std::islower(static_cast<unsigned char>(raw[next]))) boundary = false;
    }
    if (boundary) {
      emit(start, end);
      start = end;
    }
    i = end;
  }
  emit(start, raw.size());
  return out;
}

std::vector<std::string> tokenize(std::string_view text, bool drop_stopwords) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_space(text[j])) ++j;
    if (j > i) {
      std::string t;
      t.reserve(j - i);
      for (std::size_t k = i; k < j; ++k) t.push_back(ascii_lower(text[k]));
      strip_punct(t);
      strip_possessive(t);
      strip_punct(t);
      if (!t.empty() && !(drop_stopwords && is_stopword(t))) tokens.push_back(std::move(t));
    }
    i = j;
  }
  return tokens;
}

int count_words(std::string_view text) {
  int n = 0;
  bool in_word = false;
  for (char c : text) {
    if (is_space(c)) {
      in_word = false;
    } else if (!in_word) {
      in_word = true;
      ++n;
    }
  }
  return n;
}

Document make_document(std::string doc_id, std::string raw_text) {
  Document doc;
  doc.doc_id = std::move(doc_id);
  doc.raw_text = std::move(raw_text);
  int index = 0;
  for (auto& text : split_sentences(doc.raw_text)) {
    auto tokens = tokenize(text);
    if (tokens.empty()) continue;
    Sentence s;
    s.doc_id = doc.doc_id;
    s.index = index++;
    s.word_count = count_words(text);
    s.text = std::move(text);
    s.tokens = std::move(tokens);
    doc.sentences.push_back(std::move(s));
  }
  return doc;
}

ReferenceSummary make_reference(std::string name, std::string text) {
  ReferenceSummary r;
  r.name = std::move(name);
  r.tokens = tokenize(text);
  r.text = std::move(text);
  return r;
}

TopicCorpus load_topic(const fs::path& path, CorpusFormat format) {
  if (!fs::exists(path)) throw IngestError("no such corpus path: " + path.string());
  return format == CorpusFormat::Json ? load_json(path) : load_plain_dir(path);
}

TopicCorpus load_topic(const fs::path& path) {
  return load_topic(path, fs::is_directory(path) ? CorpusFormat::PlainDir : CorpusFormat::Json);
}

std::vector<TopicCorpus> load_corpus_root(const fs::path& root) {
  if (!fs::is_directory(root)) throw IngestError("corpus root is not a directory: " + root.string());
  std::vector<fs::path> entries;
  for (const auto& e : fs::directory_iterator(root)) {
    if (e.is_directory() && fs::is_directory(e.path() / "docs")) {
      entries.push_back(e.path());
    } else if (e.is_regular_file() && e.path().extension() == ".json") {
      entries.push_back(e.path());
    }
  }
  std::sort(entries.begin(), entries.end());
  std::vector<TopicCorpus> out;
  for (const auto& p : entries) out.push_back(load_topic(p));
  std::sort(out.begin(), out.end(),
            [](const TopicCorpus& a, const TopicCorpus& b) { return a.topic_id() < b.topic_id(); });
  return out;
}

void save_topic_plain(const TopicCorpus& corpus, const fs::path& dir) {
  fs::create_directories(dir / "docs");
  fs::create_directories(dir / "refs");
  for (const auto& d : corpus.documents()) {
    std::ofstream(dir / "docs" / (d.doc_id + ".txt"), std::ios::binary) << d.raw_text;
  }
  for (const auto& r : corpus.references()) {
    std::ofstream(dir / "refs" / (r.name + ".txt"), std::ios::binary) << r.text;
  }
  if (!corpus.scus().empty()) {
    std::ofstream(dir / "scus.json", std::ios::binary) << json(corpus.scus()).dump(1) << "\n";
  }
}

std::map<std::string, int> word_frequency(const TopicCorpus& corpus, bool drop_stopwords) {
  std::map<std::string, int> counts;
  for (const Sentence* s : corpus.sentences()) {
    for (const auto& t : s->tokens) {
      if (drop_stopwords && is_stopword(t)) continue;
      ++counts[t];
    }
  }
  return counts;
}

}  // namespace qfse
