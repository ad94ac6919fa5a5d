#pragma once

// Stimulus features from imagery: Weber contrast and the representative
// spatial frequency of a luminance patch (Laplacian-pyramid band with the
// highest contrast).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "saclat/geometry.hpp"
#include "saclat/image.hpp"

namespace saclat {

/// Signed (L_t - L_b) / L_b.
inline double weber_contrast_signed(double target, double background) {
    if (!(background > 0.0) || !std::isfinite(background) || !std::isfinite(target)) {
        throw std::domain_error("weber_contrast: background luminance must be positive");
    }
    return (target - background) / background;
}

/// Model input: the magnitude of the Weber contrast.
inline double weber_contrast(double target, double background) {
    return std::abs(weber_contrast_signed(target, background));
}

/// Grayscale relative-luminance grid plus its physical pixel pitch.
struct LuminancePatch {
    Image image;
    double pixel_pitch_cm = 0.0;

    void validate() const {
        if (image.empty() || image.pixels.size() != image.width * image.height) {
            throw std::invalid_argument("LuminancePatch: empty or inconsistent image");
        }
        if (!(pixel_pitch_cm > 0.0)) {
            throw std::invalid_argument("LuminancePatch: pixel pitch must be positive");
        }
        for (double v : image.pixels) {
            if (!(v >= 0.0 && v <= 1.0)) {
                throw std::invalid_argument("LuminancePatch: luminance outside [0, 1]");
            }
        }
    }
};

class NoDominantBand : public std::domain_error {
public:
    NoDominantBand() : std::domain_error("no dominant band") {}
};

namespace pyramid {

inline constexpr std::size_t kMinPatchSize = 8;

namespace detail {

/// Mirror index into [0, n) without repeating the edge sample (…2 1 | 0 1 2…).
inline std::size_t reflect(std::ptrdiff_t i, std::size_t n) {
    const auto m = static_cast<std::ptrdiff_t>(n);
    if (m == 1) {
        return 0;
    }
    const std::ptrdiff_t period = 2 * (m - 1);
    i %= period;
    if (i < 0) {
        i += period;
    }
    return static_cast<std::size_t>(i < m ? i : period - i);
}

inline constexpr double kBinomial[5] = {1.0 / 16, 4.0 / 16, 6.0 / 16, 4.0 / 16, 1.0 / 16};

/// Separable 5-tap binomial filter, scaled by `gain` per axis.
inline Image blur(const Image& in, double gain = 1.0) {
    Image tmp(in.width, in.height);
    for (std::size_t y = 0; y < in.height; ++y) {
        for (std::size_t x = 0; x < in.width; ++x) {
            double s = 0.0;
            for (int k = -2; k <= 2; ++k) {
                s += kBinomial[k + 2] * in.at(reflect(static_cast<std::ptrdiff_t>(x) + k, in.width), y);
            }
            tmp.at(x, y) = gain * s;
        }
    }
    Image out(in.width, in.height);
    for (std::size_t y = 0; y < in.height; ++y) {
        for (std::size_t x = 0; x < in.width; ++x) {
            double s = 0.0;
            for (int k = -2; k <= 2; ++k) {
                s += kBinomial[k + 2] * tmp.at(x, reflect(static_cast<std::ptrdiff_t>(y) + k, in.height));
            }
            out.at(x, y) = gain * s;
        }
    }
    return out;
}

}  // namespace detail

/// Blur, then keep every other row and column.
inline Image reduce(const Image& in) {
    const Image b = detail::blur(in);
    Image out((in.width + 1) / 2, (in.height + 1) / 2);
    for (std::size_t y = 0; y < out.height; ++y) {
        for (std::size_t x = 0; x < out.width; ++x) {
            out.at(x, y) = b.at(2 * x, 2 * y);
        }
    }
    return out;
}

/// Zero-insert to (width, height), then interpolate with the binomial filter.
inline Image expand(const Image& in, std::size_t width, std::size_t height) {
    Image up(width, height, 0.0);
    for (std::size_t y = 0; y < in.height && 2 * y < height; ++y) {
        for (std::size_t x = 0; x < in.width && 2 * x < width; ++x) {
            up.at(2 * x, 2 * y) = in.at(x, y);
        }
    }
    return detail::blur(up, 2.0);
}

struct Level {
    Image band;     // L_k = G_k - expand(G_{k+1})
    Image lowpass;  // expand(G_{k+1}): local mean luminance at this scale
};

/// Number of band-pass levels for a patch: halve until the next Gaussian
/// level would drop below 4 pixels on its short side.
inline std::size_t level_count(std::size_t width, std::size_t height) {
    std::size_t n = 0;
    std::size_t side = std::min(width, height);
    while ((side + 1) / 2 >= 4) {
        side = (side + 1) / 2;
        ++n;
    }
    return n;
}

inline std::vector<Level> laplacian(const Image& img) {
    if (img.width < kMinPatchSize || img.height < kMinPatchSize) {
        throw std::invalid_argument("laplacian pyramid: patch must be at least 8x8 pixels");
    }
    std::vector<Level> levels;
    Image g = img;
    const std::size_t n = level_count(img.width, img.height);
    for (std::size_t k = 0; k < n; ++k) {
        Image next = reduce(g);
        Image low = expand(next, g.width, g.height);
        Image band(g.width, g.height);
        for (std::size_t i = 0; i < band.pixels.size(); ++i) {
            band.pixels[i] = g.pixels[i] - low.pixels[i];
        }
        levels.push_back({std::move(band), std::move(low)});
        g = std::move(next);
    }
    return levels;
}

/// RMS of the band divided by the local mean luminance.
inline double band_contrast(const Level& level) {
    constexpr double kDark = 1e-6;
    double s = 0.0;
    for (std::size_t i = 0; i < level.band.pixels.size(); ++i) {
        const double c = level.band.pixels[i] / std::max(level.lowpass.pixels[i], kDark);
        s += c * c;
    }
    return std::sqrt(s / static_cast<double>(level.band.pixels.size()));
}

inline std::vector<double> band_contrasts(const Image& img) {
    std::vector<double> out;
    for (const auto& level : laplacian(img)) {
        out.push_back(band_contrast(level));
    }
    return out;
}

/// Center frequency of band k in cycles/cm: Nyquist / 2^(k+1).
inline double band_center_frequency(std::size_t k, double pixel_pitch_cm) {
    const double nyquist = 0.5 / pixel_pitch_cm;
    return nyquist / std::ldexp(1.0, static_cast<int>(k) + 1);
}

/// Index of the band with the largest contrast.
inline std::size_t dominant_band(const Image& img) {
    const auto c = band_contrasts(img);
    // Contrast at or below this level is filter round-off on a flat patch.
    constexpr double kFlat = 1e-9;
    const auto it = std::max_element(c.begin(), c.end());
    if (it == c.end() || !(*it > kFlat)) {
        throw NoDominantBand();
    }
    return static_cast<std::size_t>(it - c.begin());
}

}  // namespace pyramid

/// Representative frequency in cycles/cm on the display.
inline double representative_display_frequency(const LuminancePatch& patch) {
    patch.validate();
    return pyramid::band_center_frequency(pyramid::dominant_band(patch.image), patch.pixel_pitch_cm);
}

/// Representative frequency in cycles/degree at the given eccentricity.
inline double representative_frequency(const LuminancePatch& patch, const DisplayConfig& cfg,
                                       double eccentricity_deg) {
    return display_to_retinal_frequency(representative_display_frequency(patch), eccentricity_deg,
                                        cfg);
}

}  // namespace saclat
