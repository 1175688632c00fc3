#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "qgl/core/rng.hpp"
#include "qgl/data/idx.hpp"
#include "qgl/nn/tensor.hpp"

namespace qgl::data {

/// Images flattened row-major into rows of height * width values in [-1, 1].
struct Dataset {
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t n_classes = 10;
  nn::Matrix images;
  std::vector<int> labels;

  std::size_t size() const { return labels.size(); }
  std::size_t pixels() const { return height * width; }
  void validate() const;
  /// Rows picked by index, in order.
  nn::Matrix gather(std::span<const std::size_t> rows) const;
  std::vector<int> gather_labels(std::span<const std::size_t> rows) const;
};

struct DatasetSplit {
  Dataset train;
  Dataset test;
};

/// u8 -> [-1, 1]: v / 127.5 - 1 (0 -> -1, 255 -> +1 exactly).
inline double normalize_u8(std::uint8_t v) { return static_cast<double>(v) / 127.5 - 1.0; }

/// Non-overlapping factor x factor average pooling of each row.
nn::Matrix downscale(const nn::Matrix& images, std::size_t height, std::size_t width,
                     std::size_t factor);

/// Combines a parsed image tensor [n, h, w] and label tensor [n]. Labels
/// outside [0, n_classes) abort with ParseError.
Dataset dataset_from_idx(const IdxTensor& images, const IdxTensor& labels, std::size_t factor,
                         std::size_t n_classes = 10);

struct MnistFiles {
  std::filesystem::path train_images, train_labels, test_images, test_labels;
};

/// Resolves the four standard file names (optionally .gz) in `dir`.
/// Throws std::runtime_error listing every absent file.
MnistFiles locate_mnist(const std::filesystem::path& dir);

DatasetSplit load_mnist(const std::filesystem::path& dir, std::size_t factor = 2);

/// Class c is drawn from N(mean_c, sigma^2 I) and clipped to [-1, 1]. The
/// means do not depend on the seed: -0.6 everywhere except +0.6 on class
/// c's contiguous pixel band, so neighbouring means sit far more than 4 sigma apart.
Dataset synthetic_gmm(std::size_t n_per_class, std::size_t n_classes, std::size_t dim,
                      std::uint64_t seed, double sigma = 0.25);
std::vector<double> synthetic_class_mean(std::size_t class_label, std::size_t n_classes,
                                         std::size_t dim);

/// A square side for `dim` when dim is a perfect square, else (1, dim).
std::pair<std::size_t, std::size_t> image_shape_for(std::size_t dim);

/// Permutation of [0, n) that depends only on (seed, epoch).
std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed, std::size_t epoch);

// Cache layout: "QGD1", u64 height, width, n_classes, n_train, n_test (LE),
// then train images, test images as LE float32, then train labels, test labels as u8.
void write_cache(const std::filesystem::path& path, const DatasetSplit& split);
DatasetSplit read_cache(const std::filesystem::path& path);

}  // namespace qgl::data
