#pragma once

// Flat display viewed head-on with gaze at the screen center: conversions
// between field of view, eye-display distance, on-screen offsets, retinal
// eccentricity and spatial frequency.

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>

namespace saclat {

inline constexpr double kDegPerRad = 180.0 / std::numbers::pi;

/// d = (w/2) / tan(fov/2)
inline double fov_to_distance(double width_cm, double fov_deg) {
    if (!(fov_deg > 0.0 && fov_deg < 180.0)) {
        throw std::domain_error("field of view must lie in (0, 180) degrees");
    }
    if (!(width_cm > 0.0)) {
        throw std::domain_error("display width must be positive");
    }
    return (width_cm / 2.0) / std::tan(fov_deg / 2.0 / kDegPerRad);
}

inline double distance_to_fov(double width_cm, double distance_cm) {
    if (!(distance_cm > 0.0) || !(width_cm > 0.0)) {
        throw std::domain_error("display width and distance must be positive");
    }
    return 2.0 * std::atan((width_cm / 2.0) / distance_cm) * kDegPerRad;
}

/// Diopters are inverse meters.
inline double cm_to_diopters(double distance_cm) { return 100.0 / distance_cm; }
inline double diopters_to_cm(double diopters) { return 100.0 / diopters; }

class DisplayConfig {
public:
    static DisplayConfig from_fov(double width_cm, int width_px, int height_px, double fov_deg) {
        return {width_cm, width_px, height_px, fov_to_distance(width_cm, fov_deg)};
    }

    static DisplayConfig from_distance(double width_cm, int width_px, int height_px,
                                       double distance_cm) {
        if (!(distance_cm > 0.0) || !std::isfinite(distance_cm)) {
            throw std::domain_error("viewing distance must be positive");
        }
        return {width_cm, width_px, height_px, distance_cm};
    }

    static DisplayConfig from_diopters(double width_cm, int width_px, int height_px,
                                       double diopters) {
        if (!(diopters > 0.0)) {
            throw std::domain_error("diopters must be positive");
        }
        return from_distance(width_cm, width_px, height_px, diopters_to_cm(diopters));
    }

    /// Same physical screen seen at a different field of view.
    DisplayConfig with_fov(double fov_deg) const {
        return from_fov(width_cm_, width_px_, height_px_, fov_deg);
    }

    double width_cm() const { return width_cm_; }
    int width_px() const { return width_px_; }
    int height_px() const { return height_px_; }
    double distance_cm() const { return distance_cm_; }
    double diopters() const { return cm_to_diopters(distance_cm_); }
    double fov_deg() const { return distance_to_fov(width_cm_, distance_cm_); }
    double pixel_pitch_cm() const { return width_cm_ / width_px_; }

    /// Physical offset (cm) of a pixel position from the screen center.
    double offset_x_cm(double px) const { return (px - width_px_ / 2.0) * pixel_pitch_cm(); }
    double offset_y_cm(double py) const { return (py - height_px_ / 2.0) * pixel_pitch_cm(); }

private:
    DisplayConfig(double width_cm, int width_px, int height_px, double distance_cm)
        : width_cm_(width_cm), width_px_(width_px), height_px_(height_px),
          distance_cm_(distance_cm) {
        if (!(width_cm > 0.0) || width_px <= 0 || height_px <= 0) {
            throw std::domain_error("display width and resolution must be positive");
        }
    }

    double width_cm_;
    int width_px_;
    int height_px_;
    double distance_cm_;
};

inline double fov_to_distance(const DisplayConfig& cfg) { return cfg.distance_cm(); }
inline double distance_to_fov(const DisplayConfig& cfg) { return cfg.fov_deg(); }

/// theta = arctan(x tan(fov/2) / (w/2)) = arctan(x / d), in degrees.
inline double screen_pos_to_eccentricity(double x_cm, const DisplayConfig& cfg) {
    return std::atan(std::abs(x_cm) / cfg.distance_cm()) * kDegPerRad;
}

/// d(theta)/dx = cos^2(theta) / d, in degrees per cm.
inline double degrees_per_cm(double x_cm, const DisplayConfig& cfg) {
    const double theta = std::atan(x_cm / cfg.distance_cm());
    const double c = std::cos(theta);
    return kDegPerRad * c * c / cfg.distance_cm();
}

/// f_retina = f_display / cos^2(theta) * (w/2) / tan(fov/2), converted from
/// cycles per radian to cycles per degree.
inline double display_to_retinal_frequency(double cycles_per_cm, double eccentricity_deg,
                                           const DisplayConfig& cfg) {
    const double c = std::cos(eccentricity_deg / kDegPerRad);
    return cycles_per_cm * cfg.distance_cm() / (c * c) / kDegPerRad;
}

inline double retinal_to_display_frequency(double cycles_per_deg, double eccentricity_deg,
                                           const DisplayConfig& cfg) {
    return cycles_per_deg / display_to_retinal_frequency(1.0, eccentricity_deg, cfg);
}

}  // namespace saclat
