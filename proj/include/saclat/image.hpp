#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace saclat {

/// Row-major single-channel image of doubles.
struct Image {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<double> pixels;

    Image() = default;
    Image(std::size_t w, std::size_t h, double fill = 0.0) : width(w), height(h), pixels(w * h, fill) {}

    double& at(std::size_t x, std::size_t y) { return pixels[y * width + x]; }
    double at(std::size_t x, std::size_t y) const { return pixels[y * width + x]; }

    bool empty() const { return pixels.empty(); }
};

}  // namespace saclat
