#include "unlearn/idx.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>

#include "unlearn/errors.hpp"

namespace unlearn {

namespace {

constexpr std::uint32_t kImageMagic = 2051;
constexpr std::uint32_t kLabelMagic = 2049;

std::uint32_t read_u32_be(std::istream& in, const std::string& what) {
    unsigned char buf[4];
    in.read(reinterpret_cast<char*>(buf), 4);
    if (!in)
        throw TruncatedFile("unexpected end of file reading " + what);
    return (std::uint32_t(buf[0]) << 24) | (std::uint32_t(buf[1]) << 16) |
           (std::uint32_t(buf[2]) << 8) | std::uint32_t(buf[3]);
}

void write_u32_be(std::ostream& out, std::uint32_t v) {
    const unsigned char buf[4] = {
        static_cast<unsigned char>(v >> 24), static_cast<unsigned char>(v >> 16),
        static_cast<unsigned char>(v >> 8), static_cast<unsigned char>(v)};
    out.write(reinterpret_cast<const char*>(buf), 4);
}

std::vector<unsigned char> read_bytes(std::istream& in, std::size_t count,
                                      const std::string& what) {
    std::vector<unsigned char> bytes(count);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(count));
    if (static_cast<std::size_t>(in.gcount()) != count)
        throw TruncatedFile("unexpected end of file reading " + what);
    return bytes;
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path.string());
    return in;
}

} // namespace

Dataset load_idx(const std::filesystem::path& images_path,
                 const std::filesystem::path& labels_path) {
    auto img = open_input(images_path);
    if (read_u32_be(img, "image magic") != kImageMagic)
        throw BadMagic("bad image magic in " + images_path.string());
    const std::uint32_t n_images = read_u32_be(img, "image count");
    const std::uint32_t rows = read_u32_be(img, "image rows");
    const std::uint32_t cols = read_u32_be(img, "image cols");
    const auto pixels = read_bytes(img, std::size_t(n_images) * rows * cols, "pixels");

    auto lab = open_input(labels_path);
    if (read_u32_be(lab, "label magic") != kLabelMagic)
        throw BadMagic("bad label magic in " + labels_path.string());
    const std::uint32_t n_labels = read_u32_be(lab, "label count");
    if (n_labels != n_images)
        throw CountMismatch("image count " + std::to_string(n_images) +
                            " != label count " + std::to_string(n_labels));
    const auto raw_labels = read_bytes(lab, n_labels, "labels");

    Dataset ds;
    const std::size_t d = std::size_t(rows) * cols;
    ds.inputs = Matrix(n_images, d);
    ds.labels.resize(n_images);
    ds.name = images_path.stem().string();
    ds.img_rows = static_cast<int>(rows);
    ds.img_cols = static_cast<int>(cols);
    int max_label = -1;
    for (std::size_t i = 0; i < n_images; ++i) {
        for (std::size_t j = 0; j < d; ++j)
            ds.inputs(i, j) = pixels[i * d + j] / 255.0;
        ds.labels[i] = raw_labels[i];
        max_label = std::max(max_label, ds.labels[i]);
    }
    ds.num_classes = max_label + 1;
    return ds;
}

void save_idx(const Dataset& ds,
              const std::filesystem::path& images_path,
              const std::filesystem::path& labels_path) {
    const std::uint32_t rows = ds.img_rows > 0 ? std::uint32_t(ds.img_rows) : 1;
    const std::uint32_t cols = ds.img_rows > 0 ? std::uint32_t(ds.img_cols)
                                               : std::uint32_t(ds.dim());
    if (std::size_t(rows) * cols != ds.dim())
        throw ShapeMismatch("save_idx: image geometry does not match input dim");

    std::ofstream img(images_path, std::ios::binary);
    if (!img)
        throw IoError("cannot write " + images_path.string());
    write_u32_be(img, kImageMagic);
    write_u32_be(img, static_cast<std::uint32_t>(ds.size()));
    write_u32_be(img, rows);
    write_u32_be(img, cols);
    for (std::size_t i = 0; i < ds.size(); ++i)
        for (std::size_t j = 0; j < ds.dim(); ++j) {
            const auto byte = static_cast<unsigned char>(
                std::llround(std::clamp(ds.inputs(i, j), 0.0, 1.0) * 255.0));
            img.put(static_cast<char>(byte));
        }
    if (!img)
        throw IoError("failed writing " + images_path.string());

    std::ofstream lab(labels_path, std::ios::binary);
    if (!lab)
        throw IoError("cannot write " + labels_path.string());
    write_u32_be(lab, kLabelMagic);
    write_u32_be(lab, static_cast<std::uint32_t>(ds.size()));
    for (int label : ds.labels)
        lab.put(static_cast<char>(static_cast<unsigned char>(label)));
    if (!lab)
        throw IoError("failed writing " + labels_path.string());
}

} // namespace unlearn
