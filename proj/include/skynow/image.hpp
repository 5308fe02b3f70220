#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "skynow/solar.hpp"
#include "skynow/time_util.hpp"

namespace skynow {

enum class Exposure : std::uint8_t { Long = 0, Short = 1 };

// Interleaved row-major H x W x C uint8 image with the two timestamps every
// drift audit needs.
struct SkyImage {
    int height = 0;
    int width = 0;
    int channels = 0;  // 3 or 4
    std::vector<std::uint8_t> pixels;
    UtcSeconds ts_file_name = 0;
    UtcSeconds ts_date_modified = 0;
    Exposure exposure = Exposure::Long;
    std::string site_id;

    std::size_t pixel_count() const {
        return static_cast<std::size_t>(height) * width * channels;
    }
    std::uint8_t& at(int y, int x, int c) {
        return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    std::uint8_t at(int y, int x, int c) const {
        return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    static SkyImage filled(int h, int w, int c, std::uint8_t value);
};

// Circular region of interest on the raw frame: center (x, y) in pixels and
// radius in pixels.
struct RoiSpec {
    double radius_px = 0.0;
    double center_x = 0.0;
    double center_y = 0.0;
};

enum class FisheyeProjection : std::uint8_t { Stereographic, Equidistant };

// Fisheye sun-projection model on the processed (square, width W) image.
// `focal` is the dimensionless focal length of the radial mapping and
// `theta_c_deg` the camera orientation correction.
struct CameraModel {
    FisheyeProjection projection = FisheyeProjection::Equidistant;
    double focal = 0.65;
    double theta_c_deg = 180.0;
    int width = 64;
};

struct SunMask {
    int width = 0;
    std::vector<std::uint8_t> mask;  // W x W, values 0/1
    double center_x = 0.0;           // real pixel coordinates
    double center_y = 0.0;
    double radius_px = 5.0;
    bool fully_clipped = false;  // center so far outside that no pixel is set

    std::uint8_t at(int y, int x) const {
        return mask[static_cast<std::size_t>(y) * width + x];
    }
    std::size_t area() const;
};

// Zeroes every pixel outside the ROI circle. Pixel centers at (x+0.5, y+0.5).
// Throws ConfigError when the circle does not fit the frame.
void apply_roi(SkyImage& image, const RoiSpec& roi);

// The [x0,x1) x [y0,y1) crop window used by crop_and_resize, possibly
// extending past the frame (those areas read as zero).
struct CropWindow {
    int x0 = 0, y0 = 0, x1 = 0, y1 = 0;
};
CropWindow crop_window(const RoiSpec& roi);

// Center square crop of side 2R on the ROI center, zero-padded where the
// window leaves the frame, then area-average downscale to out_w x out_w.
SkyImage crop_and_resize(const SkyImage& image, const RoiSpec& roi, int out_w = 64);

// Sun-center pixel coordinates on the processed image, from the fisheye
// radial mapping (stereographic: R = 2 f tan(zenith/2); equidistant:
// R = f * zenith_radians) and the azimuth rotation. Throws RangeError when
// the sun is below the horizon.
struct PixelPoint {
    double x = 0.0;
    double y = 0.0;
};
PixelPoint sun_center(const CameraModel& cam, const SolarPosition& pos);

// Binary disc of radius 5*(W/64) px at the projected sun center. Pixel (x,y)
// is set iff its center lies within the radius. May clip at the border.
SunMask render_sun_mask(const CameraModel& cam, const SolarPosition& pos);

// Concatenates the mask as a 4th channel (values 0/255) onto a 3-channel
// image of the same width. Throws ShapeError on dimension mismatch.
SkyImage append_mask_channel(const SkyImage& image, const SunMask& mask);
SkyImage drop_mask_channel(const SkyImage& image);

// Plain area-average resize to out_w x out_w (no crop). Identity when the
// frame is already that size.
SkyImage resize_image(const SkyImage& image, int out_w);

// Batch ROI+crop+resize over many frames; parallel across images.
std::vector<SkyImage> process_batch(std::vector<SkyImage> frames, const RoiSpec& roi,
                                    int out_w = 64);

}  // namespace skynow
