#pragma once

#include <filesystem>
#include <span>

namespace unlearn {

/// Binary PGM ("P5", maxval 255); pixel bytes are round(255 * v) in
/// row-major order. Values must lie in [0,1] and width*height must equal
/// the image length.
void save_pgm(std::span<const double> image, int width, int height,
              const std::filesystem::path& path);

} // namespace unlearn
