#include "skynow/image.hpp"

#include <algorithm>
#include <cmath>

#include "skynow/errors.hpp"
#include "skynow/kernels.hpp"

namespace skynow {

namespace {
constexpr double kDeg2Rad = M_PI / 180.0;
}

SkyImage SkyImage::filled(int h, int w, int c, std::uint8_t value) {
    SkyImage img;
    img.height = h;
    img.width = w;
    img.channels = c;
    img.pixels.assign(static_cast<std::size_t>(h) * w * c, value);
    return img;
}

void apply_roi(SkyImage& image, const RoiSpec& roi) {
    if (roi.radius_px <= 0.0) throw ConfigError("roi radius must be positive");
    if (roi.center_x < 0 || roi.center_x > image.width ||
        roi.center_y < 0 || roi.center_y > image.height)
        throw ConfigError("roi center outside the frame");
    const double r2 = roi.radius_px * roi.radius_px;
    const int c = image.channels;
    for (int y = 0; y < image.height; ++y) {
        const double dy = (y + 0.5) - roi.center_y;
        std::uint8_t* row = image.pixels.data() + static_cast<std::size_t>(y) * image.width * c;
        for (int x = 0; x < image.width; ++x) {
            const double dx = (x + 0.5) - roi.center_x;
            if (dx * dx + dy * dy > r2)
                for (int k = 0; k < c; ++k) row[x * c + k] = 0;
        }
    }
}

CropWindow crop_window(const RoiSpec& roi) {
    const int r = static_cast<int>(std::lround(roi.radius_px));
    const int cx = static_cast<int>(std::lround(roi.center_x));
    const int cy = static_cast<int>(std::lround(roi.center_y));
    return CropWindow{cx - r, cy - r, cx + r, cy + r};
}

SkyImage crop_and_resize(const SkyImage& image, const RoiSpec& roi, int out_w) {
    const CropWindow w = crop_window(roi);
    const int side = w.x1 - w.x0;
    if (side <= 0) throw ConfigError("empty crop window");

    // Materialize the (possibly zero-padded) crop, one channel plane at a time.
    SkyImage out;
    out.height = out_w;
    out.width = out_w;
    out.channels = image.channels;
    out.pixels.assign(static_cast<std::size_t>(out_w) * out_w * image.channels, 0);
    out.ts_file_name = image.ts_file_name;
    out.ts_date_modified = image.ts_date_modified;
    out.exposure = image.exposure;
    out.site_id = image.site_id;

    std::vector<std::uint8_t> plane(static_cast<std::size_t>(side) * side);
    std::vector<std::uint8_t> small(static_cast<std::size_t>(out_w) * out_w);
    for (int c = 0; c < image.channels; ++c) {
        std::fill(plane.begin(), plane.end(), 0);
        const int ys = std::max(0, -w.y0), ye = std::min(side, image.height - w.y0);
        const int xs = std::max(0, -w.x0), xe = std::min(side, image.width - w.x0);
        for (int y = ys; y < ye; ++y)
            for (int x = xs; x < xe; ++x)
                plane[static_cast<std::size_t>(y) * side + x] =
                    image.at(w.y0 + y, w.x0 + x, c);
        box_resize_u8(plane.data(), side, side, side, small.data(), out_w, out_w);
        for (int y = 0; y < out_w; ++y)
            for (int x = 0; x < out_w; ++x)
                out.at(y, x, c) = small[static_cast<std::size_t>(y) * out_w + x];
    }
    return out;
}

PixelPoint sun_center(const CameraModel& cam, const SolarPosition& pos) {
    if (pos.zenith_deg >= 90.0)
        throw RangeError("sun_center: sun below the horizon");
    const double zr = pos.zenith_deg * kDeg2Rad;
    double r = 0.0;
    switch (cam.projection) {
        case FisheyeProjection::Stereographic:
            r = 2.0 * cam.focal * std::tan(zr / 2.0);
            break;
        case FisheyeProjection::Equidistant:
            r = cam.focal * zr;
            break;
    }
    const double rot = (pos.azimuth_deg - cam.theta_c_deg) * kDeg2Rad;
    const double xc = r * std::sin(rot);
    const double yc = r * std::cos(rot);
    const double half = cam.width / 2.0;
    return PixelPoint{half * (1.0 + xc), half * (1.0 + yc)};
}

std::size_t SunMask::area() const {
    std::size_t n = 0;
    for (std::uint8_t v : mask) n += v;
    return n;
}

SunMask render_sun_mask(const CameraModel& cam, const SolarPosition& pos) {
    const PixelPoint c = sun_center(cam, pos);
    SunMask m;
    m.width = cam.width;
    m.center_x = c.x;
    m.center_y = c.y;
    m.radius_px = 5.0 * (cam.width / 64.0);
    m.mask.assign(static_cast<std::size_t>(cam.width) * cam.width, 0);
    const double r2 = m.radius_px * m.radius_px;
    // Only the disc's bounding box needs scanning.
    const int y0 = std::max(0, static_cast<int>(std::floor(c.y - m.radius_px - 1)));
    const int y1 = std::min(cam.width - 1, static_cast<int>(std::ceil(c.y + m.radius_px + 1)));
    const int x0 = std::max(0, static_cast<int>(std::floor(c.x - m.radius_px - 1)));
    const int x1 = std::min(cam.width - 1, static_cast<int>(std::ceil(c.x + m.radius_px + 1)));
    std::size_t set = 0;
    for (int y = y0; y <= y1; ++y) {
        const double dy = (y + 0.5) - c.y;
        for (int x = x0; x <= x1; ++x) {
            const double dx = (x + 0.5) - c.x;
            if (dx * dx + dy * dy <= r2) {
                m.mask[static_cast<std::size_t>(y) * cam.width + x] = 1;
                ++set;
            }
        }
    }
    m.fully_clipped = (set == 0);
    return m;
}

SkyImage append_mask_channel(const SkyImage& image, const SunMask& mask) {
    if (image.channels != 3)
        throw ShapeError("append_mask_channel: image must have 3 channels");
    if (image.width != mask.width || image.height != mask.width)
        throw ShapeError("append_mask_channel: image/mask size mismatch");
    SkyImage out;
    out.height = image.height;
    out.width = image.width;
    out.channels = 4;
    out.pixels.resize(static_cast<std::size_t>(out.height) * out.width * 4);
    out.ts_file_name = image.ts_file_name;
    out.ts_date_modified = image.ts_date_modified;
    out.exposure = image.exposure;
    out.site_id = image.site_id;
    for (int y = 0; y < out.height; ++y)
        for (int x = 0; x < out.width; ++x) {
            for (int c = 0; c < 3; ++c) out.at(y, x, c) = image.at(y, x, c);
            out.at(y, x, 3) = mask.at(y, x) ? 255 : 0;
        }
    return out;
}

SkyImage drop_mask_channel(const SkyImage& image) {
    if (image.channels != 4)
        throw ShapeError("drop_mask_channel: image must have 4 channels");
    SkyImage out;
    out.height = image.height;
    out.width = image.width;
    out.channels = 3;
    out.pixels.resize(static_cast<std::size_t>(out.height) * out.width * 3);
    out.ts_file_name = image.ts_file_name;
    out.ts_date_modified = image.ts_date_modified;
    out.exposure = image.exposure;
    out.site_id = image.site_id;
    for (int y = 0; y < out.height; ++y)
        for (int x = 0; x < out.width; ++x)
            for (int c = 0; c < 3; ++c) out.at(y, x, c) = image.at(y, x, c);
    return out;
}

SkyImage resize_image(const SkyImage& image, int out_w) {
    if (image.width == out_w && image.height == out_w) return image;
    SkyImage out;
    out.height = out_w;
    out.width = out_w;
    out.channels = image.channels;
    out.pixels.assign(static_cast<std::size_t>(out_w) * out_w * image.channels, 0);
    out.ts_file_name = image.ts_file_name;
    out.ts_date_modified = image.ts_date_modified;
    out.exposure = image.exposure;
    out.site_id = image.site_id;
    std::vector<std::uint8_t> plane(static_cast<std::size_t>(image.height) * image.width);
    std::vector<std::uint8_t> small(static_cast<std::size_t>(out_w) * out_w);
    for (int c = 0; c < image.channels; ++c) {
        for (int y = 0; y < image.height; ++y)
            for (int x = 0; x < image.width; ++x)
                plane[static_cast<std::size_t>(y) * image.width + x] = image.at(y, x, c);
        box_resize_u8_serial(plane.data(), image.width, image.height, image.width,
                             small.data(), out_w, out_w);
        for (int y = 0; y < out_w; ++y)
            for (int x = 0; x < out_w; ++x)
                out.at(y, x, c) = small[static_cast<std::size_t>(y) * out_w + x];
    }
    return out;
}

std::vector<SkyImage> process_batch(std::vector<SkyImage> frames, const RoiSpec& roi,
                                    int out_w) {
    std::vector<SkyImage> out(frames.size());
    #pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(frames.size()); ++i) {
        const auto idx = static_cast<std::size_t>(i);
        apply_roi(frames[idx], roi);
        out[idx] = crop_and_resize(frames[idx], roi, out_w);
    }
    return out;
}

}  // namespace skynow
