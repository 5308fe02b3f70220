#include "skynow/site.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "skynow/errors.hpp"

namespace skynow {

void Site::validate() const {
    if (!(latitude >= -90.0 && latitude <= 90.0))
        throw ConfigError("site '" + name + "': latitude out of [-90, 90]");
    if (!(longitude >= -180.0 && longitude <= 180.0))
        throw ConfigError("site '" + name + "': longitude out of [-180, 180]");
    if (!std::isfinite(altitude_m))
        throw ConfigError("site '" + name + "': altitude not finite");
    if (utc_offset_s < -50400 || utc_offset_s > 50400)
        throw ConfigError("site '" + name + "': utc_offset_s out of [-50400, 50400]");
}

Site site_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("site json parse: ") + e.what());
    }
    Site s;
    try {
        s.name = j.at("name").get<std::string>();
        s.latitude = j.at("latitude").get<double>();
        s.longitude = j.at("longitude").get<double>();
        s.altitude_m = j.at("altitude_m").get<double>();
        s.utc_offset_s = j.at("utc_offset_s").get<std::int64_t>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("site json fields: ") + e.what());
    }
    s.validate();
    return s;
}

Site site_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open site config: " + path);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return site_from_json_text(text);
}

}  // namespace skynow
