#include "embsvm/model_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

#include "embsvm/error.hpp"

namespace embsvm {

namespace {

static_assert(std::numeric_limits<float>::is_iec559 && std::numeric_limits<double>::is_iec559);

class ByteWriter {
 public:
  template <class U>
  void uint(U v) {
    for (std::size_t k = 0; k < sizeof(U); ++k) bytes_.push_back(static_cast<char>((v >> (8 * k)) & 0xff));
  }
  void f32(float v) { uint(std::bit_cast<std::uint32_t>(v)); }
  void f64(double v) { uint(std::bit_cast<std::uint64_t>(v)); }
  void raw(std::string_view s) { bytes_.append(s); }
  const std::string& bytes() const { return bytes_; }

 private:
  std::string bytes_;
};

class ByteReader {
 public:
  ByteReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

  template <class U>
  U uint(const char* what) {
    unsigned char buf[sizeof(U)];
    read(buf, sizeof(U), what);
    U v = 0;
    for (std::size_t k = 0; k < sizeof(U); ++k) v |= static_cast<U>(U{buf[k]} << (8 * k));
    return v;
  }
  float f32(const char* what) { return std::bit_cast<float>(uint<std::uint32_t>(what)); }
  double f64(const char* what) { return std::bit_cast<double>(uint<std::uint64_t>(what)); }
  std::string bytes(std::size_t n, const char* what) {
    std::string s(n, '\0');
    read(s.data(), n, what);
    return s;
  }
  bool at_end() { return in_.peek() == std::char_traits<char>::eof(); }
  std::uint64_t offset() const { return offset_; }

 private:
  void read(void* dst, std::size_t n, const char* what) {
    in_.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) {
      throw IoError(source_ + ": truncated model file while reading " + what + " at byte " +
                    std::to_string(offset_));
    }
    offset_ += n;
  }

  std::istream& in_;
  std::string source_;
  std::uint64_t offset_ = 0;
};

}  // namespace

void save_model(std::ostream& out, const LinearModel& model) {
  ByteWriter w;
  w.raw(kModelMagic);
  w.uint(kModelVersion);
  w.uint(static_cast<std::uint32_t>(model.n_labels()));
  w.uint(model.feature_dim());
  w.uint(static_cast<std::uint8_t>(model.has_bias() ? 1 : 0));
  w.f64(model.lambda());
  w.uint(model.fallback_index());
  for (const auto& label : model.labels()) {
    if (label.size() > std::numeric_limits<std::uint16_t>::max()) {
      throw ValidationError("label longer than 65535 bytes");
    }
    w.uint(static_cast<std::uint16_t>(label.size()));
    w.raw(label);
  }
  for (float v : model.all_weights()) w.f32(v);
  for (float v : model.biases()) w.f32(v);
  out.write(w.bytes().data(), static_cast<std::streamsize>(w.bytes().size()));
}

void save_model(const std::filesystem::path& path, const LinearModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write model file: " + path.string());
  save_model(out, model);
  if (!out) throw IoError("write failed: " + path.string());
}

LinearModel load_model(std::istream& in, std::string_view source) {
  const std::string src(source);
  ByteReader r(in, src);
  if (r.bytes(kModelMagic.size(), "magic") != kModelMagic) {
    throw IoError(src + ": not an EMBSVM01 model file (bad magic)");
  }
  const auto version = r.uint<std::uint32_t>("version");
  if (version != kModelVersion) {
    throw IoError(src + ": unsupported model version " + std::to_string(version));
  }
  const auto n_labels = r.uint<std::uint32_t>("n_labels");
  const auto dim = r.uint<std::uint32_t>("feature_dim");
  const auto has_bias = r.uint<std::uint8_t>("has_bias");
  const double lambda = r.f64("lambda");
  const auto fallback = r.uint<std::uint32_t>("fallback index");
  if (n_labels == 0 || has_bias > 1 || fallback >= n_labels || !(lambda > 0.0)) {
    throw IoError(src + ": inconsistent model header");
  }
  std::vector<std::string> labels;
  labels.reserve(n_labels);
  for (std::uint32_t c = 0; c < n_labels; ++c) {
    const auto len = r.uint<std::uint16_t>("label length");
    labels.push_back(r.bytes(len, "label"));
  }
  const std::uint64_t n_weights = std::uint64_t{n_labels} * dim;
  std::vector<float> weights;
  weights.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(n_weights, 1u << 24)));
  for (std::uint64_t k = 0; k < n_weights; ++k) weights.push_back(r.f32("weights"));
  std::vector<float> biases(n_labels);
  for (auto& b : biases) b = r.f32("biases");
  if (!r.at_end()) throw IoError(src + ": trailing bytes after model payload");
  try {
    return LinearModel(std::move(labels), dim, std::move(weights), std::move(biases), lambda,
                       fallback, has_bias == 1);
  } catch (const ValidationError& e) {
    throw IoError(src + ": " + e.what());
  }
}

LinearModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model file: " + path.string());
  return load_model(in, path.string());
}

}  // namespace embsvm
