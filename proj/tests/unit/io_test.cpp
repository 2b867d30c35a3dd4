#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <sstream>

#include "embsvm/error.hpp"
#include "embsvm/model_io.hpp"
#include "embsvm/rng.hpp"
#include "embsvm/vector_io.hpp"

namespace embsvm {
namespace {

VectorFile sample_file(std::uint64_t seed) {
  Rng rng(seed);
  VectorFile f;
  f.dim = 40;
  f.boundary = 30;
  f.comments = {"config representation=tfidf+conc", "second comment"};
  for (int r = 0; r < 25; ++r) {
    std::vector<std::pair<std::uint32_t, double>> e;
    for (std::uint32_t i = 0; i < 40; ++i) {
      if (rng.uniform() < 0.2) e.emplace_back(i, rng.normal() * std::pow(10.0, rng.below(12) - 6.0));
    }
    f.rows.push_back(SparseVector::from_unsorted(40, e));
    LabelSet labels;
    if (r % 5 != 0) labels.push_back("c" + std::to_string(r % 3));
    if (r % 4 == 0) labels.push_back("z");
    f.labels.push_back(labels);
  }
  return f;
}

std::string write(const VectorFile& f) {
  std::ostringstream out;
  write_vector_file(out, f);
  return out.str();
}

VectorFile read(const std::string& text) {
  std::istringstream in(text);
  return read_vector_file(in, "mem");
}

TEST(VectorFile, WritesDocumentedLayout) {
  VectorFile f;
  f.dim = 6;
  f.boundary = 4;
  f.comments = {"config x=1"};
  f.labels = {{"a", "b"}, {}};
  f.rows = {SparseVector::from_sorted(6, {1, 5}, {2.0, 0.1}), SparseVector(6)};
  EXPECT_EQ(write(f), "#dim=6 #boundary=4\n#config x=1\na,b\t1:2 5:0.1\n\t\n");
}

TEST(VectorFile, RoundTripIsByteIdentical) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const VectorFile f = sample_file(seed);
    const std::string first = write(f);
    const VectorFile back = read(first);
    EXPECT_EQ(back.dim, f.dim);
    EXPECT_EQ(back.boundary, f.boundary);
    EXPECT_EQ(back.comments, f.comments);
    EXPECT_EQ(back.labels, f.labels);
    EXPECT_EQ(back.rows, f.rows);
    EXPECT_EQ(write(back), first);
  }
}

std::size_t error_line(const std::string& text) {
  try {
    read(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

TEST(VectorFile, ParseErrors) {
  EXPECT_EQ(error_line(""), 1u);
  EXPECT_EQ(error_line("dim=3\n"), 1u);
  EXPECT_EQ(error_line("#dim=x\n"), 1u);
  EXPECT_EQ(error_line("#dim=3 #boundary=4\n"), 1u);
  EXPECT_EQ(error_line("#dim=3\na 0:1\n"), 2u);      // no TAB
  EXPECT_EQ(error_line("#dim=3\na\t3:1\n"), 2u);     // index out of range
  EXPECT_EQ(error_line("#dim=3\na\t1:1 0:1\n"), 2u); // not ascending
  EXPECT_EQ(error_line("#dim=3\na\t0:0\n"), 2u);     // stored zero
  EXPECT_EQ(error_line("#dim=3\na\t0:x\n"), 2u);
  EXPECT_EQ(error_line("#dim=3\na,a\t0:1\n"), 2u);
  EXPECT_EQ(error_line("#dim=3\na,\t0:1\n"), 2u);
  EXPECT_EQ(error_line("#dim=3\na\t0:1\n#late\n"), 3u);
}

TEST(VectorFile, RejectsUnwritableLabels) {
  VectorFile f;
  f.dim = 1;
  f.rows = {SparseVector(1)};
  for (const char* bad : {"has space", "a,b", "#x", ""}) {
    f.labels = {{bad}};
    EXPECT_THROW(write(f), ValidationError) << bad;
  }
}

LinearModel small_model() {
  return LinearModel({"a", "bc"}, 2, {1.0f, 2.0f, 3.0f, 4.0f}, {0.5f, -1.0f}, 0.25, 1, true);
}

template <class T>
void put(std::string& s, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
  s.append(buf, sizeof(T));
}

TEST(ModelFile, ByteLayout) {
  std::string expected = "EMBSVM01";
  put<std::uint32_t>(expected, 1);
  put<std::uint32_t>(expected, 2);
  put<std::uint32_t>(expected, 2);
  put<std::uint8_t>(expected, 1);
  put<double>(expected, 0.25);
  put<std::uint32_t>(expected, 1);
  put<std::uint16_t>(expected, 1);
  expected += "a";
  put<std::uint16_t>(expected, 2);
  expected += "bc";
  for (float w : {1.0f, 2.0f, 3.0f, 4.0f}) put<float>(expected, w);
  for (float b : {0.5f, -1.0f}) put<float>(expected, b);

  std::ostringstream out;
  save_model(out, small_model());
  EXPECT_EQ(out.str(), expected);
}

TEST(ModelFile, RoundTripIsByteIdentical) {
  Rng rng(4);
  std::vector<std::string> labels = {"a", "Ünï", "label with space"};
  std::vector<float> w(3 * 17), b(3);
  for (auto& x : w) x = static_cast<float>(rng.normal());
  for (auto& x : b) x = static_cast<float>(rng.normal());
  const LinearModel m(labels, 17, w, b, 1e-4, 2, false);
  std::ostringstream first;
  save_model(first, m);
  std::istringstream in(first.str());
  const LinearModel back = load_model(in, "mem");
  EXPECT_EQ(back, m);
  std::ostringstream second;
  save_model(second, back);
  EXPECT_EQ(second.str(), first.str());
}

TEST(ModelFile, RejectsCorruptFiles) {
  std::ostringstream out;
  save_model(out, small_model());
  const std::string good = out.str();
  auto load = [](const std::string& bytes) {
    std::istringstream in(bytes);
    return load_model(in, "mem");
  };
  EXPECT_NO_THROW(load(good));
  std::string bad_magic = good;
  bad_magic[7] = '2';
  EXPECT_THROW(load(bad_magic), IoError);
  std::string bad_version = good;
  bad_version[8] = 2;
  EXPECT_THROW(load(bad_version), IoError);
  for (std::size_t cut : {0u, 5u, 20u, 34u}) EXPECT_THROW(load(good.substr(0, cut)), IoError) << cut;
  EXPECT_THROW(load(good.substr(0, good.size() - 1)), IoError);
  EXPECT_THROW(load(good + "x"), IoError);
  std::string bad_fallback = good;
  bad_fallback[29] = 7;  // fallback index out of range
  EXPECT_THROW(load(bad_fallback), IoError);
}

}  // namespace
}  // namespace embsvm
