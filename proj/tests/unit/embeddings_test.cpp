#include <gtest/gtest.h>

#include <sstream>

#include "embsvm/embeddings.hpp"
#include "embsvm/error.hpp"
#include "embsvm/rng.hpp"

namespace embsvm {
namespace {

EmbeddingLoad parse(const std::string& text) {
  std::istringstream in(text);
  return read_word2vec_text(in, "mem");
}

std::size_t error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

std::vector<float> vec(std::optional<std::span<const float>> v) {
  return v ? std::vector<float>(v->begin(), v->end()) : std::vector<float>{};
}

TEST(Word2VecText, ParsesSingleEntry) {
  const auto load = parse("1 2\napple 0.5 -1.0\n");
  EXPECT_EQ(load.table.dim(), 2u);
  EXPECT_EQ(load.table.size(), 1u);
  EXPECT_EQ(load.duplicates, 0u);
  EXPECT_EQ(vec(load.table.lookup("apple")), (std::vector<float>{0.5f, -1.0f}));
}

TEST(Word2VecText, LastDuplicateWins) {
  const auto load = parse("2 3\na 1 2 3\na 4 5 6\n");
  EXPECT_EQ(load.table.size(), 1u);
  EXPECT_EQ(load.duplicates, 1u);
  EXPECT_EQ(vec(load.table.lookup("a")), (std::vector<float>{4, 5, 6}));
}

TEST(Word2VecText, WrongComponentCountNamesLine) {
  EXPECT_EQ(error_line("1 2\napple 0.5 -1.0 2.0\n"), 2u);
  EXPECT_EQ(error_line("2 2\na 1 2\nb 1\n"), 3u);
}

TEST(Word2VecText, MalformedInputs) {
  EXPECT_EQ(error_line(""), 1u);
  EXPECT_EQ(error_line("1\n"), 1u);
  EXPECT_EQ(error_line("x 2\n"), 1u);
  EXPECT_EQ(error_line("1 0\na\n"), 1u);
  EXPECT_EQ(error_line("1 2\na 1 nan\n"), 2u);
  EXPECT_EQ(error_line("1 2\na inf 1\n"), 2u);
  EXPECT_EQ(error_line("1 2\na 1e300 1\n"), 2u);  // overflows float
  EXPECT_EQ(error_line("1 2\na 1 x\n"), 2u);
  EXPECT_NE(error_line("2 2\na 1 2\n"), 0u);       // fewer entries than declared
  EXPECT_NE(error_line("1 2\na 1 2\nb 3 4\n"), 0u);  // more entries than declared
}

TEST(Word2VecText, ToleratesCrLf) {
  const auto load = parse("1 2\r\nz 1 2\r\n");
  EXPECT_EQ(vec(load.table.lookup("z")), (std::vector<float>{1, 2}));
}

TEST(EmbeddingTable, LookupMissingAndRepeatable) {
  const auto load = parse("1 2\napple 0.5 -1.0\n");
  EXPECT_FALSE(load.table.lookup("missing"));
  EXPECT_EQ(vec(load.table.lookup("apple")), vec(load.table.lookup("apple")));
}

TEST(EmbeddingTable, Coverage) {
  const auto table = parse("1 2\napple 0.5 -1.0\n").table;
  const std::vector<std::string> half = {"apple", "missing"};
  const std::vector<std::string> all = {"apple", "apple"};
  EXPECT_DOUBLE_EQ(table.coverage(half), 0.5);
  EXPECT_DOUBLE_EQ(table.coverage(all), 1.0);
  EXPECT_DOUBLE_EQ(table.coverage({}), 1.0);
}

TEST(EmbeddingTable, FromEntriesRejectsWrongLength) {
  EXPECT_THROW(EmbeddingTable::from_entries(2, {{"a", {1.0f}}}), ValidationError);
  EXPECT_THROW(EmbeddingTable::from_entries(0, {}), ValidationError);
}

TEST(Word2VecText, RoundTripIsExact) {
  Rng rng(12);
  std::vector<EmbeddingTable::Entry> entries;
  for (int i = 0; i < 50; ++i) {
    std::vector<float> v(7);
    for (auto& x : v) x = static_cast<float>(rng.normal() * std::pow(10.0, rng.below(9) - 4.0));
    entries.push_back({"tok" + std::to_string(i), v});
  }
  const auto table = EmbeddingTable::from_entries(7, entries);
  std::ostringstream first;
  write_word2vec_text(first, table);
  const auto reloaded = parse(first.str()).table;
  ASSERT_EQ(reloaded.size(), table.size());
  for (std::size_t r = 0; r < table.size(); ++r) {
    EXPECT_EQ(reloaded.tokens()[r], table.tokens()[r]);
    for (std::size_t j = 0; j < 7; ++j) EXPECT_EQ(reloaded.vector_at(r)[j], table.vector_at(r)[j]);
  }
  std::ostringstream second;
  write_word2vec_text(second, reloaded);
  EXPECT_EQ(first.str(), second.str());
}

TEST(Word2VecText, MissingFileIsIoError) {
  EXPECT_THROW(load_word2vec_text("/nonexistent/vectors.txt"), IoError);
}

}  // namespace
}  // namespace embsvm
