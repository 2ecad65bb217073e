#pragma once

// IDX container files (the MNIST distribution format): a big-endian magic
// number whose low byte is the dimension count, the dimensions as big-endian
// 32-bit sizes, then the raw unsigned-byte payload.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <string>
#include <vector>

#include "rsa/energy/cross_entropy.hpp"

namespace rsa::io {

inline constexpr std::uint32_t kImageMagic = 2051;  // 00 00 08 03
inline constexpr std::uint32_t kLabelMagic = 2049;  // 00 00 08 01

class IdxError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class IdxMagicError : public IdxError {
 public:
  using IdxError::IdxError;
};
class IdxTruncatedError : public IdxError {
 public:
  using IdxError::IdxError;
};
class IdxCountMismatchError : public IdxError {
 public:
  using IdxError::IdxError;
};
class DatasetMissingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IdxFile {
  std::uint32_t magic = 0;
  std::vector<std::uint32_t> dims;
  std::vector<std::uint8_t> payload;

  [[nodiscard]] bool is_images() const noexcept { return magic == kImageMagic; }
  [[nodiscard]] bool is_labels() const noexcept { return magic == kLabelMagic; }
  [[nodiscard]] std::size_t count() const noexcept { return dims.empty() ? 0 : dims.front(); }
  /// Elements per item (product of the trailing dimensions).
  [[nodiscard]] std::size_t item_size() const noexcept {
    std::size_t s = 1;
    for (std::size_t k = 1; k < dims.size(); ++k) s *= dims[k];
    return s;
  }
};

namespace detail {
inline std::uint32_t read_be32(const std::uint8_t* p) {
  return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) | (std::uint32_t{p[2]} << 8) | p[3];
}
inline void write_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}
}  // namespace detail

/// Parses an in-memory IDX file. `name` only labels error messages.
inline IdxFile parse_idx(const std::vector<std::uint8_t>& bytes, const std::string& name = "<memory>") {
  if (bytes.size() < 4)
    throw IdxTruncatedError(name + ": truncated header: expected at least 4 bytes, got " +
                            std::to_string(bytes.size()));
  IdxFile f;
  f.magic = detail::read_be32(bytes.data());
  std::size_t ndims = 0;
  if (f.magic == kImageMagic) ndims = 3;
  else if (f.magic == kLabelMagic) ndims = 1;
  else
    throw IdxMagicError(name + ": bad magic number " + std::to_string(f.magic) + " (expected 2051 for images or " +
                        "2049 for labels)");
  const std::size_t header = 4 + 4 * ndims;
  if (bytes.size() < header)
    throw IdxTruncatedError(name + ": truncated header: expected " + std::to_string(header) + " bytes, got " +
                            std::to_string(bytes.size()));
  std::size_t expected = 1;
  for (std::size_t k = 0; k < ndims; ++k) {
    f.dims.push_back(detail::read_be32(bytes.data() + 4 + 4 * k));
    expected *= f.dims.back();
  }
  const std::size_t actual = bytes.size() - header;
  if (actual < expected)
    throw IdxTruncatedError(name + ": truncated payload: expected " + std::to_string(expected) + " bytes, got " +
                            std::to_string(actual));
  f.payload.assign(bytes.begin() + static_cast<std::ptrdiff_t>(header),
                   bytes.begin() + static_cast<std::ptrdiff_t>(header + expected));
  return f;
}

inline std::vector<std::uint8_t> serialize_idx(const IdxFile& f) {
  std::vector<std::uint8_t> out;
  detail::write_be32(out, f.magic);
  for (std::uint32_t d : f.dims) detail::write_be32(out, d);
  out.insert(out.end(), f.payload.begin(), f.payload.end());
  return out;
}

inline IdxFile read_idx(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_idx(bytes, path.string());
}

/// Pairs an image file with a label file: pixels scaled by 1/255, labels as
/// class indices 0-9.
inline ClassifierDataset to_dataset(const IdxFile& images, const IdxFile& labels, std::size_t classes = 10) {
  if (!images.is_images()) throw IdxMagicError("to_dataset: first file is not an image file");
  if (!labels.is_labels()) throw IdxMagicError("to_dataset: second file is not a label file");
  if (images.count() != labels.count())
    throw IdxCountMismatchError("to_dataset: " + std::to_string(images.count()) + " images but " +
                                std::to_string(labels.count()) + " labels");
  std::vector<float> x(images.payload.size());
  for (std::size_t k = 0; k < x.size(); ++k) x[k] = static_cast<float>(images.payload[k]) / 255.0f;
  std::vector<int> t(labels.payload.begin(), labels.payload.end());
  return ClassifierDataset(images.item_size(), classes, std::move(x), std::move(t));
}

struct MnistFiles {
  static constexpr const char* train_images = "train-images-idx3-ubyte";
  static constexpr const char* train_labels = "train-labels-idx1-ubyte";
  static constexpr const char* test_images = "t10k-images-idx3-ubyte";
  static constexpr const char* test_labels = "t10k-labels-idx1-ubyte";
};

inline constexpr const char* kDataDirVariable = "RSA_DATA_DIR";

/// Directory from RSA_DATA_DIR, or empty.
inline std::filesystem::path data_dir_from_env() {
  const char* v = std::getenv(kDataDirVariable);
  return v == nullptr ? std::filesystem::path{} : std::filesystem::path(v);
}

struct MnistData {
  ClassifierDataset train;
  ClassifierDataset test;
};

/// Loads the standard MNIST train and t10k files from `dir`.
inline MnistData load_mnist(const std::filesystem::path& dir) {
  const char* names[] = {MnistFiles::train_images, MnistFiles::train_labels, MnistFiles::test_images,
                         MnistFiles::test_labels};
  std::string missing;
  for (const char* n : names)
    if (!std::filesystem::exists(dir / n)) missing += std::string(missing.empty() ? "" : ", ") + n;
  if (dir.empty() || !missing.empty())
    throw DatasetMissingError("MNIST files not found in '" + dir.string() + "' (missing: " +
                              (dir.empty() ? std::string("all") : missing) +
                              "). Set " + kDataDirVariable +
                              " to a directory holding the uncompressed files train-images-idx3-ubyte, "
                              "train-labels-idx1-ubyte, t10k-images-idx3-ubyte, t10k-labels-idx1-ubyte.");
  return MnistData{to_dataset(read_idx(dir / MnistFiles::train_images), read_idx(dir / MnistFiles::train_labels)),
                   to_dataset(read_idx(dir / MnistFiles::test_images), read_idx(dir / MnistFiles::test_labels))};
}

}  // namespace rsa::io
