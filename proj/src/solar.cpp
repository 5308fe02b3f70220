#include "skynow/solar.hpp"

#include <cmath>

#include "skynow/errors.hpp"

namespace skynow {

namespace {

constexpr double kDeg2Rad = M_PI / 180.0;
constexpr double kRad2Deg = 180.0 / M_PI;

double wrap360(double deg) {
    double r = std::fmod(deg, 360.0);
    if (r < 0.0) r += 360.0;
    return r;
}

}  // namespace

double refraction_correction_deg(double e) {
    if (e > 85.0) return 0.0;
    if (e > 5.0) {
        const double te = std::tan(e * kDeg2Rad);
        return (58.1 / te - 0.07 / (te * te * te) +
                0.000086 / (te * te * te * te * te)) / 3600.0;
    }
    if (e > -0.575) {
        return (1735.0 + e * (-518.2 + e * (103.4 + e * (-12.79 + e * 0.711)))) / 3600.0;
    }
    return (-20.774 / std::tan(e * kDeg2Rad)) / 3600.0;
}

SolarPosition solar_position(const Site& site, UtcSeconds instant) {
    const CivilDateTime c = civil_from_utc(instant);
    if (c.year < 1950 || c.year > 2100)
        throw RangeError("solar_position: instant outside years 1950-2100");

    const double jd = julian_day(instant);
    const double T = (jd - 2451545.0) / 36525.0;  // Julian centuries since J2000

    const double L0 = wrap360(280.46646 + T * (36000.76983 + T * 0.0003032));
    const double M = 357.52911 + T * (35999.05029 - 0.0001537 * T);
    const double e = 0.016708634 - T * (0.000042037 + 0.0000001267 * T);
    const double Mr = M * kDeg2Rad;
    const double C = std::sin(Mr) * (1.914602 - T * (0.004817 + 0.000014 * T)) +
                     std::sin(2.0 * Mr) * (0.019993 - 0.000101 * T) +
                     std::sin(3.0 * Mr) * 0.000289;
    const double true_long = L0 + C;
    const double omega = (125.04 - 1934.136 * T) * kDeg2Rad;
    const double lambda = (true_long - 0.00569 - 0.00478 * std::sin(omega)) * kDeg2Rad;

    const double eps0 =
        23.0 + (26.0 + (21.448 - T * (46.8150 + T * (0.00059 - T * 0.001813))) / 60.0) / 60.0;
    const double eps = (eps0 + 0.00256 * std::cos(omega)) * kDeg2Rad;

    const double declination = std::asin(std::sin(eps) * std::sin(lambda));

    // Equation of time, minutes.
    const double y = std::tan(eps / 2.0) * std::tan(eps / 2.0);
    const double L0r = L0 * kDeg2Rad;
    const double eot = 4.0 * kRad2Deg *
        (y * std::sin(2.0 * L0r) - 2.0 * e * std::sin(Mr) +
         4.0 * e * y * std::sin(Mr) * std::cos(2.0 * L0r) -
         0.5 * y * y * std::sin(4.0 * L0r) - 1.25 * e * e * std::sin(2.0 * Mr));

    const double utc_minutes = c.hour * 60.0 + c.minute + c.second / 60.0;
    const double true_solar_minutes = utc_minutes + eot + 4.0 * site.longitude;
    double ha = true_solar_minutes / 4.0 - 180.0;
    ha = std::fmod(ha + 540.0, 360.0) - 180.0;  // [-180, 180)
    const double har = ha * kDeg2Rad;

    const double latr = site.latitude * kDeg2Rad;
    double cosz = std::sin(latr) * std::sin(declination) +
                  std::cos(latr) * std::cos(declination) * std::cos(har);
    cosz = std::clamp(cosz, -1.0, 1.0);
    const double true_zenith = std::acos(cosz) * kRad2Deg;

    double az = std::atan2(std::sin(har),
                           std::cos(har) * std::sin(latr) -
                               std::tan(declination) * std::cos(latr)) * kRad2Deg;
    az = wrap360(az + 180.0);  // measured from north, clockwise

    const double elev = 90.0 - true_zenith;
    const double apparent_zenith = 90.0 - (elev + refraction_correction_deg(elev));

    return SolarPosition{apparent_zenith, az};
}

double extraterrestrial_ghi(const SolarPosition& pos, const SolarConstant& i0) {
    if (pos.zenith_deg >= 90.0) return 0.0;
    return i0.wm2 * std::cos(pos.zenith_deg * kDeg2Rad);
}

}  // namespace skynow
