#include "unlearn/pgm.hpp"

#include <cmath>
#include <fstream>

#include "unlearn/errors.hpp"

namespace unlearn {

void save_pgm(std::span<const double> image, int width, int height,
              const std::filesystem::path& path) {
    if (width < 1 || height < 1 ||
        image.size() != std::size_t(width) * std::size_t(height))
        throw ShapeMismatch("save_pgm: width*height does not match image length");

    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write " + path.string());
    out << "P5\n" << width << " " << height << "\n255\n";
    for (double v : image) {
        if (!(v >= 0.0 && v <= 1.0))
            throw InvalidParam("save_pgm: pixel value outside [0,1]");
        out.put(static_cast<char>(static_cast<unsigned char>(std::llround(v * 255.0))));
    }
    if (!out)
        throw IoError("failed writing " + path.string());
}

} // namespace unlearn
