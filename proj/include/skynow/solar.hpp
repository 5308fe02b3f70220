#pragma once

#include "skynow/site.hpp"
#include "skynow/time_util.hpp"

namespace skynow {

// Sun direction at a site and instant. Zenith is the apparent (refraction
// corrected) angle from local vertical; azimuth is measured clockwise from
// north in [0, 360).
struct SolarPosition {
    double zenith_deg = 0.0;   // [0, 180]
    double azimuth_deg = 0.0;  // [0, 360)
};

inline constexpr double kDefaultSolarConstant = 1366.0;  // W/m^2

struct SolarConstant {
    double wm2 = kDefaultSolarConstant;
};

// Closed-form solar ephemeris (NOAA solar-calculator equations, after Meeus).
// Accuracy is well inside 0.1 deg for years 1950-2100, which keeps the
// projected sun center within one pixel at a 64-pixel image width.
// Throws RangeError outside the supported year range.
SolarPosition solar_position(const Site& site, UtcSeconds instant);

// Top-of-atmosphere GHI: I0 * cos(zenith), clamped to 0 below the horizon.
double extraterrestrial_ghi(const SolarPosition& pos,
                            const SolarConstant& i0 = SolarConstant{});

// NOAA atmospheric refraction correction, degrees to add to the true
// elevation. Exposed so alternative ephemerides can be compared apples to
// apples in tests.
double refraction_correction_deg(double true_elevation_deg);

}  // namespace skynow
