#include "ramplab/image.hpp"

#include <cmath>
#include <stdexcept>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

namespace ramplab {

ImageRgb::ImageRgb(int w, int h, Rgb fill) : width(w), height(h) {
    if (w <= 0 || h <= 0) throw std::invalid_argument("image dims must be positive");
    data.resize(static_cast<std::size_t>(w) * h * 3);
    for (std::size_t i = 0; i < data.size(); i += 3) {
        data[i] = fill[0];
        data[i + 1] = fill[1];
        data[i + 2] = fill[2];
    }
}

Rgb sample_wrap_clamp(const ImageRgb& img, double x, double y, SampleBounds* trace) {
    const int w = img.width;
    const int h = img.height;
    // Wrap x into [0, w) before splitting; y clamps at the poles.
    x = std::fmod(x, static_cast<double>(w));
    if (x < 0.0) x += w;
    if (x >= w) x = 0.0;
    if (y < 0.0) y = 0.0;
    if (y > h - 1) y = h - 1;

    const int x0 = static_cast<int>(std::floor(x));
    const int y0 = static_cast<int>(std::floor(y));
    const int x1 = (x0 + 1) % w;
    const int y1 = (y0 + 1 < h) ? y0 + 1 : h - 1;
    const double fx = x - x0;
    const double fy = y - y0;

    if (trace) {
        trace->note(x0, y0);
        trace->note(x1, y1);
    }
    const Rgb c00 = img.at(x0, y0);
    const Rgb c10 = img.at(x1, y0);
    const Rgb c01 = img.at(x0, y1);
    const Rgb c11 = img.at(x1, y1);

    Rgb out;
    for (int ch = 0; ch < 3; ++ch) {
        const double v = (1.0 - fx) * (1.0 - fy) * c00[ch] + fx * (1.0 - fy) * c10[ch] +
                         (1.0 - fx) * fy * c01[ch] + fx * fy * c11[ch];
        const long r = std::lround(v);
        out[ch] = static_cast<std::uint8_t>(r < 0 ? 0 : (r > 255 ? 255 : r));
    }
    return out;
}

ImageRgb hflip(const ImageRgb& img) {
    ImageRgb out(img.width, img.height);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            out.set(img.width - 1 - x, y, img.at(x, y));
        }
    }
    return out;
}

namespace {

// The library reads/writes BGR; we keep RGB internally and swap by hand so we
// only need the codec component.
cv::Mat to_bgr_mat(const ImageRgb& img) {
    cv::Mat m(img.height, img.width, CV_8UC3);
    for (int y = 0; y < img.height; ++y) {
        auto* row = m.ptr<std::uint8_t>(y);
        const std::uint8_t* src = img.data.data() + static_cast<std::size_t>(y) * img.width * 3;
        for (int x = 0; x < img.width; ++x) {
            row[x * 3 + 0] = src[x * 3 + 2];
            row[x * 3 + 1] = src[x * 3 + 1];
            row[x * 3 + 2] = src[x * 3 + 0];
        }
    }
    return m;
}

ImageRgb from_bgr_mat(const cv::Mat& m) {
    ImageRgb img(m.cols, m.rows);
    for (int y = 0; y < m.rows; ++y) {
        const auto* row = m.ptr<std::uint8_t>(y);
        std::uint8_t* dst = img.data.data() + static_cast<std::size_t>(y) * m.cols * 3;
        for (int x = 0; x < m.cols; ++x) {
            dst[x * 3 + 0] = row[x * 3 + 2];
            dst[x * 3 + 1] = row[x * 3 + 1];
            dst[x * 3 + 2] = row[x * 3 + 0];
        }
    }
    return img;
}

}  // namespace

ImageRgb load_image(const std::string& path) {
    cv::Mat m = cv::imread(path, cv::IMREAD_COLOR);
    if (m.empty()) throw std::runtime_error("failed to read image: " + path);
    return from_bgr_mat(m);
}

void save_png(const std::string& path, const ImageRgb& img) {
    if (!cv::imwrite(path, to_bgr_mat(img))) {
        throw std::runtime_error("failed to write image: " + path);
    }
}

std::vector<std::uint8_t> encode_png(const ImageRgb& img) {
    std::vector<std::uint8_t> buf;
    if (!cv::imencode(".png", to_bgr_mat(img), buf)) {
        throw std::runtime_error("png encode failed");
    }
    return buf;
}

ImageRgb decode_image(const std::vector<std::uint8_t>& bytes) {
    cv::Mat m = cv::imdecode(bytes, cv::IMREAD_COLOR);
    if (m.empty()) throw std::runtime_error("image decode failed");
    return from_bgr_mat(m);
}

void save_gray16_png(const std::string& path, int width, int height,
                     const std::vector<double>& values) {
    if (values.size() != static_cast<std::size_t>(width) * height) {
        throw std::invalid_argument("gray16: value count does not match dims");
    }
    cv::Mat m(height, width, CV_16UC1);
    for (int y = 0; y < height; ++y) {
        auto* row = m.ptr<std::uint16_t>(y);
        for (int x = 0; x < width; ++x) {
            double v = values[static_cast<std::size_t>(y) * width + x];
            if (v < 0.0) v = 0.0;
            if (v > 1.0) v = 1.0;
            row[x] = static_cast<std::uint16_t>(std::lround(v * 65535.0));
        }
    }
    if (!cv::imwrite(path, m)) {
        throw std::runtime_error("failed to write image: " + path);
    }
}

}  // namespace ramplab
