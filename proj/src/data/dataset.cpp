#include "qgl/data/dataset.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <sstream>
#include <stdexcept>

#include "qgl/core/errors.hpp"
#include "qgl/core/io.hpp"

namespace qgl::data {

void Dataset::validate() const {
  if (static_cast<std::size_t>(images.rows()) != labels.size()) {
    throw std::invalid_argument("Dataset: image and label counts differ");
  }
  if (images.rows() > 0 && static_cast<std::size_t>(images.cols()) != pixels()) {
    throw std::invalid_argument("Dataset: image width differs from height * width");
  }
  if (images.size() > 0 && (images.minCoeff() < -1.0 || images.maxCoeff() > 1.0)) {
    throw std::invalid_argument("Dataset: pixel values outside [-1, 1]");
  }
  for (int y : labels) {
    if (y < 0 || static_cast<std::size_t>(y) >= n_classes) {
      throw std::invalid_argument("Dataset: label outside [0, n_classes)");
    }
  }
}

nn::Matrix Dataset::gather(std::span<const std::size_t> rows) const {
  nn::Matrix out(rows.size(), images.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = images.row(static_cast<Eigen::Index>(rows[i]));
  }
  return out;
}

std::vector<int> Dataset::gather_labels(std::span<const std::size_t> rows) const {
  std::vector<int> out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) out[i] = labels[rows[i]];
  return out;
}

nn::Matrix downscale(const nn::Matrix& images, std::size_t height, std::size_t width,
                     std::size_t factor) {
  if (factor == 0 || height % factor != 0 || width % factor != 0) {
    throw std::invalid_argument("downscale: image sides must be divisible by the factor");
  }
  if (static_cast<std::size_t>(images.cols()) != height * width) {
    throw std::invalid_argument("downscale: row width differs from height * width");
  }
  const std::size_t oh = height / factor;
  const std::size_t ow = width / factor;
  const double inv = 1.0 / static_cast<double>(factor * factor);
  nn::Matrix out(images.rows(), static_cast<Eigen::Index>(oh * ow));
  for (Eigen::Index n = 0; n < images.rows(); ++n) {
    for (std::size_t r = 0; r < oh; ++r) {
      for (std::size_t c = 0; c < ow; ++c) {
        double acc = 0.0;
        for (std::size_t dr = 0; dr < factor; ++dr) {
          for (std::size_t dc = 0; dc < factor; ++dc) {
            acc += images(n, static_cast<Eigen::Index>((r * factor + dr) * width + c * factor + dc));
          }
        }
        out(n, static_cast<Eigen::Index>(r * ow + c)) = acc * inv;
      }
    }
  }
  return out;
}

Dataset dataset_from_idx(const IdxTensor& images, const IdxTensor& labels, std::size_t factor,
                         std::size_t n_classes) {
  if (images.dims.size() != 3) throw ParseError("IDX images: expected 3 dimensions", 3);
  if (labels.dims.size() != 1) throw ParseError("IDX labels: expected 1 dimension", 3);
  const std::size_t n = images.dims[0];
  if (labels.dims[0] != n) throw ParseError("IDX: image and label counts differ", 4);
  const std::size_t h = images.dims[1];
  const std::size_t w = images.dims[2];

  nn::Matrix full(n, h * w);
  for (std::size_t i = 0; i < n * h * w; ++i) full.data()[i] = normalize_u8(images.payload[i]);
  Dataset ds;
  ds.n_classes = n_classes;
  ds.images = factor == 1 ? std::move(full) : downscale(full, h, w, factor);
  ds.height = h / factor;
  ds.width = w / factor;
  ds.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint8_t y = labels.payload[i];
    if (y >= n_classes) {
      throw ParseError("IDX labels: value " + std::to_string(y) + " outside [0, " +
                           std::to_string(n_classes) + ")",
                       8 + i);
    }
    ds.labels[i] = y;
  }
  return ds;
}

MnistFiles locate_mnist(const std::filesystem::path& dir) {
  std::vector<std::string> missing;
  auto find = [&](const std::string& stem) {
    for (const auto* suffix : {"", ".gz"}) {
      auto p = dir / (stem + suffix);
      if (std::filesystem::exists(p)) return p;
    }
    missing.push_back((dir / stem).string() + "[.gz]");
    return std::filesystem::path{};
  };
  MnistFiles f{find("train-images-idx3-ubyte"), find("train-labels-idx1-ubyte"),
               find("t10k-images-idx3-ubyte"), find("t10k-labels-idx1-ubyte")};
  if (!missing.empty()) {
    std::ostringstream msg;
    msg << "missing MNIST files:";
    for (const auto& m : missing) msg << ' ' << m;
    throw std::runtime_error(msg.str());
  }
  return f;
}

DatasetSplit load_mnist(const std::filesystem::path& dir, std::size_t factor) {
  const MnistFiles f = locate_mnist(dir);
  auto parse = [](const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes,
                  std::uint32_t magic) {
    try {
      return parse_idx(bytes, magic);
    } catch (const ParseError& e) {
      throw ParseError(path.string() + ": " + e.message(), e.offset());
    }
  };
  auto load = [&](const std::filesystem::path& img, const std::filesystem::path& lbl) {
    const auto ib = read_maybe_gzip(img);
    const auto lb = read_maybe_gzip(lbl);
    return dataset_from_idx(parse(img, ib, kIdxImageMagic), parse(lbl, lb, kIdxLabelMagic), factor);
  };
  return {load(f.train_images, f.train_labels), load(f.test_images, f.test_labels)};
}

std::vector<double> synthetic_class_mean(std::size_t class_label, std::size_t n_classes,
                                         std::size_t dim) {
  std::vector<double> mean(dim, -0.6);
  for (std::size_t i = 0; i < dim; ++i) {
    if (i * n_classes / dim == class_label) mean[i] = 0.6;
  }
  return mean;
}

std::pair<std::size_t, std::size_t> image_shape_for(std::size_t dim) {
  const auto side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(dim))));
  if (side * side == dim) return {side, side};
  return {1, dim};
}

Dataset synthetic_gmm(std::size_t n_per_class, std::size_t n_classes, std::size_t dim,
                      std::uint64_t seed, double sigma) {
  if (n_classes == 0 || dim < n_classes) {
    throw std::invalid_argument("synthetic_gmm: need n_classes > 0 and dim >= n_classes");
  }
  Dataset ds;
  ds.n_classes = n_classes;
  std::tie(ds.height, ds.width) = image_shape_for(dim);
  ds.images.resize(static_cast<Eigen::Index>(n_per_class * n_classes), static_cast<Eigen::Index>(dim));
  ds.labels.resize(n_per_class * n_classes);
  Rng rng(seed, "synthetic_gmm");
  std::vector<std::vector<double>> means;
  for (std::size_t c = 0; c < n_classes; ++c) means.push_back(synthetic_class_mean(c, n_classes, dim));
  // Interleave classes so any prefix is balanced.
  for (std::size_t i = 0; i < n_per_class * n_classes; ++i) {
    const std::size_t c = i % n_classes;
    ds.labels[i] = static_cast<int>(c);
    for (std::size_t j = 0; j < dim; ++j) {
      ds.images(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          std::clamp(means[c][j] + sigma * rng.normal(), -1.0, 1.0);
    }
  }
  return ds;
}

std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed, std::size_t epoch) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  Rng rng(seed, "data", epoch);
  for (std::size_t i = n; i > 1; --i) std::swap(idx[i - 1], idx[rng.index(i)]);
  return idx;
}

namespace {
constexpr std::string_view kCacheMagic = "QGD1";

void append_f32(std::string& out, float v) {
  const auto bits = std::bit_cast<std::uint32_t>(v);
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

float read_f32(const unsigned char* p) {
  std::uint32_t bits = 0;
  for (int i = 3; i >= 0; --i) bits = (bits << 8) | p[i];
  return std::bit_cast<float>(bits);
}
}  // namespace

void write_cache(const std::filesystem::path& path, const DatasetSplit& split) {
  const Dataset& tr = split.train;
  const Dataset& te = split.test;
  if (tr.height != te.height || tr.width != te.width || tr.n_classes != te.n_classes) {
    throw std::invalid_argument("write_cache: train/test shapes differ");
  }
  std::string out(kCacheMagic);
  for (std::uint64_t v : {std::uint64_t{tr.height}, std::uint64_t{tr.width},
                          std::uint64_t{tr.n_classes}, std::uint64_t{tr.size()},
                          std::uint64_t{te.size()}}) {
    append_u64_le(out, v);
  }
  out.reserve(out.size() + 4 * (tr.images.size() + te.images.size()) + tr.size() + te.size());
  for (const Dataset* ds : {&tr, &te}) {
    for (Eigen::Index i = 0; i < ds->images.size(); ++i) {
      append_f32(out, static_cast<float>(ds->images.data()[i]));
    }
  }
  for (const Dataset* ds : {&tr, &te}) {
    for (int y : ds->labels) out.push_back(static_cast<char>(y));
  }
  write_file_atomic(path, out);
}

DatasetSplit read_cache(const std::filesystem::path& path) {
  const std::string raw = read_file(path);
  const auto* p = reinterpret_cast<const unsigned char*>(raw.data());
  if (raw.size() < 44 || raw.compare(0, 4, kCacheMagic) != 0) {
    throw ParseError("dataset cache " + path.string() + ": bad magic", 0);
  }
  const std::size_t h = read_u64_le(p + 4);
  const std::size_t w = read_u64_le(p + 12);
  const std::size_t k = read_u64_le(p + 20);
  const std::size_t n_tr = read_u64_le(p + 28);
  const std::size_t n_te = read_u64_le(p + 36);
  const std::size_t px = h * w;
  const std::size_t need = 44 + 4 * px * (n_tr + n_te) + n_tr + n_te;
  if (raw.size() != need) throw ParseError("dataset cache " + path.string() + ": size mismatch", raw.size());
  std::size_t at = 44;
  auto fill = [&](Dataset& ds, std::size_t n) {
    ds.height = h;
    ds.width = w;
    ds.n_classes = k;
    ds.images.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(px));
    for (std::size_t i = 0; i < n * px; ++i, at += 4) ds.images.data()[i] = read_f32(p + at);
  };
  DatasetSplit split;
  fill(split.train, n_tr);
  fill(split.test, n_te);
  for (Dataset* ds : {&split.train, &split.test}) {
    ds->labels.resize(ds == &split.train ? n_tr : n_te);
    for (auto& y : ds->labels) y = p[at++];
  }
  split.train.validate();
  split.test.validate();
  return split;
}

}  // namespace qgl::data
