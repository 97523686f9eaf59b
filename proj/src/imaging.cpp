#include "rustseg/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "rustseg/dbscan.hpp"
#include "rustseg/error.hpp"

namespace rustseg {

RgbImage::RgbImage(int width, int height)
    : width_(width), height_(height), data_(static_cast<std::size_t>(width) * height * 3, 0.0) {
    if (width < 0 || height < 0) throw Error(ErrorCode::InvalidArgument, "negative image dimension");
}

RgbImage::RgbImage(int width, int height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
    if (width < 0 || height < 0) throw Error(ErrorCode::InvalidArgument, "negative image dimension");
    if (data_.size() != static_cast<std::size_t>(width) * height * 3)
        throw Error(ErrorCode::Dimension, "rgb data length must be width*height*3");
    for (double c : data_)
        if (!(c >= 0.0 && c <= 1.0)) throw Error(ErrorCode::InvalidArgument, "rgb channel outside [0,1]");
}

void RgbImage::set(int x, int y, double r, double g, double b) {
    double* p = at(x, y);
    p[0] = r;
    p[1] = g;
    p[2] = b;
}

FloatPlane::FloatPlane(int width, int height, double fill)
    : width_(width), height_(height), data_(static_cast<std::size_t>(width) * height, fill) {
    if (width < 0 || height < 0) throw Error(ErrorCode::InvalidArgument, "negative plane dimension");
}

FloatPlane::FloatPlane(int width, int height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
    if (width < 0 || height < 0) throw Error(ErrorCode::InvalidArgument, "negative plane dimension");
    if (data_.size() != static_cast<std::size_t>(width) * height)
        throw Error(ErrorCode::Dimension, "plane data length must be width*height");
}

BinaryMask::BinaryMask(int width, int height, bool fill)
    : width_(width), height_(height), bits_(static_cast<std::size_t>(width) * height, fill ? 1 : 0) {
    if (width < 0 || height < 0) throw Error(ErrorCode::InvalidArgument, "negative mask dimension");
}

std::size_t BinaryMask::popcount() const noexcept {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw Error(ErrorCode::Io, "read failed: " + path.string());
    return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::Io, "write failed: " + path.string());
}

namespace {

bool is_png(std::span<const std::uint8_t> b) {
    static constexpr std::uint8_t sig[] = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
    return b.size() >= 8 && std::equal(std::begin(sig), std::end(sig), b.begin());
}

bool is_jpeg(std::span<const std::uint8_t> b) {
    return b.size() >= 3 && b[0] == 0xFF && b[1] == 0xD8 && b[2] == 0xFF;
}

template <typename T>
RgbImage from_mat(const cv::Mat& m, double scale) {
    RgbImage out(m.cols, m.rows);
    const int ch = m.channels();
    for (int y = 0; y < m.rows; ++y) {
        const T* row = m.ptr<T>(y);
        for (int x = 0; x < m.cols; ++x) {
            const T* px = row + static_cast<std::ptrdiff_t>(x) * ch;
            if (ch <= 2) {
                double g = px[0] / scale;
                out.set(x, y, g, g, g);
            } else {
                // OpenCV order is BGR(A)
                out.set(x, y, px[2] / scale, px[1] / scale, px[0] / scale);
            }
        }
    }
    return out;
}

std::vector<std::uint8_t> encode_png(const cv::Mat& m) {
    std::vector<std::uint8_t> buf;
    if (!cv::imencode(".png", m, buf)) throw Error(ErrorCode::Io, "png encoding failed");
    return buf;
}

}  // namespace

RgbImage decode_rgb(std::span<const std::uint8_t> bytes) {
    if (!is_png(bytes) && !is_jpeg(bytes)) throw Error(ErrorCode::UnsupportedFormat, "not a PNG or JPEG file");
    cv::Mat raw(1, static_cast<int>(bytes.size()), CV_8UC1, const_cast<std::uint8_t*>(bytes.data()));
    cv::Mat m = cv::imdecode(raw, cv::IMREAD_UNCHANGED);
    if (m.empty()) throw Error(ErrorCode::UnsupportedFormat, "image could not be decoded");
    if (m.cols == 0 || m.rows == 0) throw Error(ErrorCode::Dimension, "zero-dimension image");
    switch (m.depth()) {
        case CV_8U: return from_mat<std::uint8_t>(m, 255.0);
        case CV_16U: return from_mat<std::uint16_t>(m, 65535.0);
        default: throw Error(ErrorCode::UnsupportedFormat, "unsupported sample depth");
    }
}

RgbImage load_rgb(const std::filesystem::path& path) {
    return decode_rgb(read_file(path));
}

std::vector<std::uint8_t> encode_mask_png(const BinaryMask& mask) {
    if (mask.size() == 0) throw Error(ErrorCode::Dimension, "cannot encode an empty mask");
    cv::Mat m(mask.height(), mask.width(), CV_8UC1);
    auto bits = mask.bits();
    for (int y = 0; y < mask.height(); ++y) {
        auto* row = m.ptr<std::uint8_t>(y);
        for (int x = 0; x < mask.width(); ++x)
            row[x] = bits[static_cast<std::size_t>(y) * mask.width() + x] ? 255 : 0;
    }
    return encode_png(m);
}

std::vector<std::uint8_t> encode_rgb_png(const RgbImage& image) {
    if (image.empty()) throw Error(ErrorCode::Dimension, "cannot encode an empty image");
    cv::Mat m(image.height(), image.width(), CV_8UC3);
    auto to8 = [](double c) { return static_cast<std::uint8_t>(std::lround(std::clamp(c, 0.0, 1.0) * 255.0)); };
    for (int y = 0; y < image.height(); ++y) {
        auto* row = m.ptr<std::uint8_t>(y);
        for (int x = 0; x < image.width(); ++x) {
            const double* p = image.at(x, y);
            row[3 * x + 0] = to8(p[2]);
            row[3 * x + 1] = to8(p[1]);
            row[3 * x + 2] = to8(p[0]);
        }
    }
    return encode_png(m);
}

void save_mask(const BinaryMask& mask, const std::filesystem::path& path) {
    write_file(path, encode_mask_png(mask));
}

void save_rgb(const RgbImage& image, const std::filesystem::path& path) {
    write_file(path, encode_rgb_png(image));
}

BinaryMask load_mask(const std::filesystem::path& path) {
    auto bytes = read_file(path);
    if (!is_png(bytes)) throw Error(ErrorCode::UnsupportedFormat, "mask is not a PNG");
    cv::Mat raw(1, static_cast<int>(bytes.size()), CV_8UC1, bytes.data());
    cv::Mat m = cv::imdecode(raw, cv::IMREAD_GRAYSCALE);
    if (m.empty()) throw Error(ErrorCode::UnsupportedFormat, "mask could not be decoded");
    BinaryMask mask(m.cols, m.rows);
    for (int y = 0; y < m.rows; ++y) {
        const auto* row = m.ptr<std::uint8_t>(y);
        for (int x = 0; x < m.cols; ++x) mask.set(x, y, row[x] >= 128);
    }
    return mask;
}

RgbImage render_overlay(const RgbImage& image, const ClusterSet& clusters, const OverlayStyle& style) {
    if (!(style.blend >= 0.0 && style.blend <= 1.0))
        throw Error(ErrorCode::InvalidArgument, "overlay blend must be in [0,1]");
    RgbImage out = image;
    const double hi[3] = {style.color.r / 255.0, style.color.g / 255.0, style.color.b / 255.0};
    for (std::size_t i = 0; i < clusters.points.size(); ++i) {
        if (clusters.labels[i] == kNoise) continue;
        const Point p = clusters.points[i];
        if (p.x < 0 || p.y < 0 || p.x >= image.width() || p.y >= image.height())
            throw Error(ErrorCode::Dimension, "cluster point outside overlay image");
        double* px = out.at(p.x, p.y);
        for (int c = 0; c < 3; ++c) px[c] = (1.0 - style.blend) * px[c] + style.blend * hi[c];
    }
    return out;
}

}  // namespace rustseg
