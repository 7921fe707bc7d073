#pragma once

#include <filesystem>

#include "unlearn/dataset.hpp"

namespace unlearn {

// IDX files as used by MNIST: big-endian 32-bit magic (2051 images / 2049
// labels), big-endian 32-bit dimension sizes, then raw unsigned bytes.
// Images carry dims [count, rows, cols]; labels carry [count].

/// Loads an images/labels pair. Pixels are scaled by 1/255 into [0,1].
Dataset load_idx(const std::filesystem::path& images_path,
                 const std::filesystem::path& labels_path);

/// Writes a dataset as an IDX pair, quantizing inputs to round(255*v).
/// Loading a written pair and re-writing it reproduces the bytes exactly.
void save_idx(const Dataset& ds,
              const std::filesystem::path& images_path,
              const std::filesystem::path& labels_path);

} // namespace unlearn
