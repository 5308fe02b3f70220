#include "skynow/config.hpp"

#include <fstream>

#include <json.hpp>

#include "skynow/errors.hpp"

namespace skynow {

namespace {

SiteConfig make_folsom() {
    SiteConfig c;
    c.site = {"folsom", 38.642, -121.148, 96.0, -8 * 3600};
    c.roi = {755.0, 768.0, 768.0};
    c.raw_width = 1536;
    c.raw_height = 1536;
    c.camera = {FisheyeProjection::Stereographic, 0.48, 165.0, 64};
    c.policy = {TimestampSource::DateModified, std::nullopt};
    c.train_time_shift_s = -20;
    c.split.test_years = {2016};
    c.derive_dni = true;
    return c;
}

SiteConfig make_sirta() {
    SiteConfig c;
    c.site = {"sirta", 48.713, 2.208, 156.0, 1 * 3600};
    c.roi = {340.0, 502.0, 394.0};
    c.raw_width = 768;
    c.raw_height = 1024;
    c.camera = {FisheyeProjection::Equidistant, 0.63, 182.0, 64};
    c.policy = {TimestampSource::FileName, std::nullopt};
    c.train_time_shift_s = 10;
    c.split.test_years = {2019};
    return c;
}

SiteConfig make_nrel() {
    SiteConfig c;
    c.site = {"nrel", 39.742, -105.18, 1829.0, -7 * 3600};
    c.roi = {755.0, 768.0, 768.0};
    c.raw_width = 1536;
    c.raw_height = 1536;
    c.camera = {FisheyeProjection::Equidistant, 0.67, 180.0, 64};
    c.policy = {TimestampSource::FileName, 30};
    c.train_time_shift_s = -30;
    c.split.test_years = {2023};
    return c;
}

}  // namespace

const SiteConfig& PipelineConfig::site(const std::string& name) const {
    auto it = sites.find(name);
    if (it == sites.end()) throw ConfigError("unknown site: '" + name + "'");
    return it->second;
}

PipelineConfig default_config() {
    PipelineConfig cfg;
    cfg.sites["folsom"] = make_folsom();
    cfg.sites["sirta"] = make_sirta();
    cfg.sites["nrel"] = make_nrel();
    cfg.target = TargetKind::parse("kt");
    return cfg;
}

namespace {

void apply_site_overrides(SiteConfig& c, const nlohmann::json& j) {
    for (const auto& [key, val] : j.items()) {
        if (key == "latitude") c.site.latitude = val.get<double>();
        else if (key == "longitude") c.site.longitude = val.get<double>();
        else if (key == "altitude_m") c.site.altitude_m = val.get<double>();
        else if (key == "utc_offset_s") c.site.utc_offset_s = val.get<std::int64_t>();
        else if (key == "roi_radius_px") c.roi.radius_px = val.get<double>();
        else if (key == "roi_center_x") c.roi.center_x = val.get<double>();
        else if (key == "roi_center_y") c.roi.center_y = val.get<double>();
        else if (key == "raw_width") c.raw_width = val.get<int>();
        else if (key == "raw_height") c.raw_height = val.get<int>();
        else if (key == "projection") {
            const auto s = val.get<std::string>();
            if (s == "stereographic") c.camera.projection = FisheyeProjection::Stereographic;
            else if (s == "equidistant") c.camera.projection = FisheyeProjection::Equidistant;
            else throw ConfigError("unknown projection: '" + s + "'");
        } else if (key == "focal") c.camera.focal = val.get<double>();
        else if (key == "theta_c_deg") c.camera.theta_c_deg = val.get<double>();
        else if (key == "timestamp_source") {
            const auto s = val.get<std::string>();
            if (s == "file_name") c.policy.source = TimestampSource::FileName;
            else if (s == "date_modified") c.policy.source = TimestampSource::DateModified;
            else throw ConfigError("unknown timestamp source: '" + s + "'");
        } else if (key == "max_fn_dm_gap_s") {
            if (val.is_null()) c.policy.max_fn_dm_gap_s.reset();
            else c.policy.max_fn_dm_gap_s = val.get<std::int64_t>();
        } else if (key == "train_time_shift_s") c.train_time_shift_s = val.get<std::int64_t>();
        else if (key == "clear_sky_model") c.clear_sky = ClearSkyModel::from_name(val.get<std::string>());
        else if (key == "aod700") c.clear_sky.parameters["aod700"] = val.get<double>();
        else if (key == "precipitable_water") c.clear_sky.parameters["precipitable_water"] = val.get<double>();
        else if (key == "pressure_pa") c.clear_sky.parameters["pressure_pa"] = val.get<double>();
        else if (key == "solar_constant") c.clear_sky.i0.wm2 = val.get<double>();
        else if (key == "reno_window_s") c.reno.window_s = val.get<int>();
        else if (key == "reno_mean_diff") c.reno.thresholds.mean_diff_wm2 = val.get<double>();
        else if (key == "reno_max_diff") c.reno.thresholds.max_diff_wm2 = val.get<double>();
        else if (key == "reno_line_length_lower") c.reno.thresholds.line_length_lower = val.get<double>();
        else if (key == "reno_line_length_upper") c.reno.thresholds.line_length_upper = val.get<double>();
        else if (key == "reno_slope_var") c.reno.thresholds.slope_var = val.get<double>();
        else if (key == "reno_max_slope_diff") c.reno.thresholds.max_slope_diff = val.get<double>();
        else if (key == "reno_renormalize") c.reno.renormalize = val.get<bool>();
        else if (key == "test_years") {
            c.split.test_years.clear();
            for (const auto& y : val) c.split.test_years.insert(y.get<int>());
        } else if (key == "k_folds") c.split.k = val.get<int>();
        else if (key == "stratify_bins") c.split.n_bins = val.get<int>();
        else if (key == "stratify_bin_width") c.split.bin_width_wm2 = val.get<double>();
        else if (key == "derive_dni") c.derive_dni = val.get<bool>();
        else throw ConfigError("unknown site config key: '" + key + "'");
    }
    c.site.validate();
}

}  // namespace

PipelineConfig parse_config_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config json: ") + e.what());
    }
    PipelineConfig cfg = default_config();
    for (const auto& [key, val] : j.items()) {
        if (key == "sites") {
            for (const auto& [name, overrides] : val.items()) {
                auto it = cfg.sites.find(name);
                if (it == cfg.sites.end()) {
                    SiteConfig fresh;
                    fresh.site.name = name;
                    it = cfg.sites.emplace(name, std::move(fresh)).first;
                }
                apply_site_overrides(it->second, overrides);
            }
        } else if (key == "target") {
            cfg.target = TargetKind::parse(val.get<std::string>());
        } else if (key == "feature_width") {
            cfg.features.feature_width = val.get<int>();
        } else if (key == "use_mask_channel") {
            cfg.features.use_mask_channel = val.get<bool>();
        } else if (key == "use_cos_zenith") {
            cfg.features.use_cos_zenith = val.get<bool>();
        } else if (key == "ridge_lambda") {
            cfg.ridge_lambda = val.get<double>();
        } else if (key == "seed") {
            cfg.seed = val.get<std::uint64_t>();
        } else if (key == "out_width") {
            cfg.out_width = val.get<int>();
        } else {
            throw ConfigError("unknown config key: '" + key + "'");
        }
    }
    return cfg;
}

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config: " + path);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return parse_config_text(text);
}

std::string config_to_json(const PipelineConfig& cfg) {
    nlohmann::json j;
    for (const auto& [name, c] : cfg.sites) {
        nlohmann::json s;
        s["latitude"] = c.site.latitude;
        s["longitude"] = c.site.longitude;
        s["altitude_m"] = c.site.altitude_m;
        s["utc_offset_s"] = c.site.utc_offset_s;
        s["roi_radius_px"] = c.roi.radius_px;
        s["roi_center_x"] = c.roi.center_x;
        s["roi_center_y"] = c.roi.center_y;
        s["raw_width"] = c.raw_width;
        s["raw_height"] = c.raw_height;
        s["projection"] = c.camera.projection == FisheyeProjection::Stereographic
                              ? "stereographic"
                              : "equidistant";
        s["focal"] = c.camera.focal;
        s["theta_c_deg"] = c.camera.theta_c_deg;
        s["timestamp_source"] =
            c.policy.source == TimestampSource::FileName ? "file_name" : "date_modified";
        if (c.policy.max_fn_dm_gap_s)
            s["max_fn_dm_gap_s"] = *c.policy.max_fn_dm_gap_s;
        s["train_time_shift_s"] = c.train_time_shift_s;
        s["test_years"] = c.split.test_years;
        s["k_folds"] = c.split.k;
        s["derive_dni"] = c.derive_dni;
        j["sites"][name] = s;
    }
    j["target"] = cfg.target.name();
    j["feature_width"] = cfg.features.feature_width;
    j["use_mask_channel"] = cfg.features.use_mask_channel;
    j["use_cos_zenith"] = cfg.features.use_cos_zenith;
    j["ridge_lambda"] = cfg.ridge_lambda;
    j["seed"] = cfg.seed;
    j["out_width"] = cfg.out_width;
    return j.dump(2);
}

}  // namespace skynow
