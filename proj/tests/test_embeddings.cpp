#include <fstream>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "qfse/embeddings.hpp"
#include "qfse/errors.hpp"

using namespace qfse;

namespace {
std::filesystem::path write(const fixture::TempDir& dir, const std::string& name, const std::string& text) {
  auto p = dir.path / name;
  std::ofstream(p) << text;
  return p;
}
}  // namespace

TEST_CASE("load infers dimension and looks up case-insensitively") {
  fixture::TempDir tmp("qfse-emb");
  const auto store = EmbeddingStore::load(write(tmp, "e.txt", "cat 1 2 3\nDog 4 5 6\n"));
  CHECK(store.size() == 2);
  CHECK(store.dim() == 3);
  REQUIRE(store.lookup("DOG"));
  CHECK((*store.lookup("dog"))[2] == doctest::Approx(6));
  CHECK_FALSE(store.lookup("bird"));
}

TEST_CASE("word2vec header line is skipped") {
  fixture::TempDir tmp("qfse-emb");
  const auto store = EmbeddingStore::load(write(tmp, "e.txt", "2 2\na 1 0\nb 0 1\n"));
  CHECK(store.size() == 2);
  CHECK(store.dim() == 2);
}

TEST_CASE("malformed line reports its line number") {
  fixture::TempDir tmp("qfse-emb");
  const auto p = write(tmp, "e.txt", "a 1 2\nb 1 2\nc 1 2\nd 1 2\ne 1 x\n");
  try {
    EmbeddingStore::load(p);
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(e.line() == 5);
  }
  const auto q = write(tmp, "f.txt", "a 1 2\nb 1 2 3\n");
  CHECK_THROWS_AS(EmbeddingStore::load(q), FormatError);
}

TEST_CASE("save/load round-trips bit-exactly") {
  fixture::TempDir tmp("qfse-emb");
  EmbeddingStore s(4);
  std::mt19937_64 rng(3);
  std::normal_distribution<float> g;
  for (int i = 0; i < 50; ++i) s.insert("w" + std::to_string(i), {g(rng), g(rng), g(rng), g(rng) * 1e-7f});
  s.save(tmp.path / "out.txt");
  const auto back = EmbeddingStore::load(tmp.path / "out.txt");
  REQUIRE(back.size() == s.size());
  for (const auto& w : s.words()) {
    const auto a = *s.lookup(w);
    const auto b = *back.lookup(w);
    for (std::size_t i = 0; i < 4; ++i) CHECK(a[i] == b[i]);
  }
}

TEST_CASE("embed_tokens averages in-vocabulary vectors") {
  EmbeddingStore s(2);
  s.insert("a", {1, 0});
  s.insert("b", {0, 1});
  s.insert("c", {2, 2});
  std::vector<std::string> ab{"a", "b"};
  auto v = embed_tokens(ab, s);
  CHECK_FALSE(v.oov);
  CHECK(v.values == std::vector<double>{0.5, 0.5});

  std::vector<std::string> oov{"zzz", "yyy"};
  v = embed_tokens(oov, s);
  CHECK(v.oov);
  CHECK(v.values == std::vector<double>{0, 0});

  std::vector<std::string> cz{"c", "zzz"};
  CHECK(embed_tokens(cz, s).values == std::vector<double>{2, 2});

  std::vector<std::string> ba{"b", "a"};
  CHECK(embed_tokens(ba, s).values == embed_tokens(ab, s).values);
}

TEST_CASE("embedding scales with the word vector") {
  EmbeddingStore s1(2), s2(2);
  s1.insert("a", {1.5f, -2});
  s2.insert("a", {3, -4});
  std::vector<std::string> a{"a"};
  const auto v1 = embed_tokens(a, s1).values;
  const auto v2 = embed_tokens(a, s2).values;
  CHECK(v2[0] == 2 * v1[0]);
  CHECK(v2[1] == 2 * v1[1]);
}

TEST_CASE("cosine") {
  const std::vector<double> a{1, 0}, b{0, 1}, c{2, 0}, z{0, 0};
  CHECK(cosine(a, b) == doctest::Approx(0));
  CHECK(cosine(a, c) == doctest::Approx(1));
  CHECK(cosine(a, z) == 0);
}
