#pragma once

#include <map>
#include <optional>
#include <string>

#include "skynow/align.hpp"
#include "skynow/clear_sky.hpp"
#include "skynow/image.hpp"
#include "skynow/modeling.hpp"
#include "skynow/splits.hpp"

namespace skynow {

// Everything one site needs to run the pipeline. Defaults embed the standard
// setups for the three reference stations (folsom / sirta / nrel) so each is
// reproducible out of the box.
struct SiteConfig {
    Site site;
    RoiSpec roi;
    int raw_width = 0;   // expected raw frame size, 0 = don't check
    int raw_height = 0;
    CameraModel camera;
    TimestampPolicy policy;
    std::int64_t train_time_shift_s = 0;
    ClearSkyModel clear_sky;
    RenoParams reno;
    SplitSpec split;
    bool derive_dni = false;  // back-compute DNI from GHI/DHI
};

struct PipelineConfig {
    std::map<std::string, SiteConfig> sites;
    TargetKind target;          // default kt
    FeatureSpec features;
    double ridge_lambda = 1e-4;
    std::uint64_t seed = 0;
    int out_width = 64;

    const SiteConfig& site(const std::string& name) const;
};

PipelineConfig default_config();

// Loads a config JSON, overlaying the defaults. Unknown keys are rejected.
PipelineConfig load_config(const std::string& path);
PipelineConfig parse_config_text(const std::string& text);
std::string config_to_json(const PipelineConfig& cfg);

}  // namespace skynow
