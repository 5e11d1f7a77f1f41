#include "holo/config.hpp"

#include <cmath>
#include <numbers>
#include <string_view>

#include "json.hpp"

#include "holo/io.hpp"
#include "holo/random.hpp"

namespace holo {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void bad(const std::string& msg) { throw ConfigError(msg); }

void check_keys(const json& j, const std::string& section,
                std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) bad("section '" + section + "' must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (auto a : allowed)
      if (it.key() == a) {
        known = true;
        break;
      }
    if (!known) bad("unknown key '" + section + "." + it.key() + "'");
  }
}

template <typename T>
T get_field(const json& j, const std::string& section, const char* key,
            T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    bad("bad value for '" + section + "." + std::string(key) + "'");
  }
}

PixelRect parse_rect(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 4) bad("'" + where + "' must be [x,y,w,h]");
  try {
    return PixelRect{j.at(0).get<int>(), j.at(1).get<int>(), j.at(2).get<int>(),
                     j.at(3).get<int>()};
  } catch (const json::exception&) {
    bad("bad rectangle in '" + where + "'");
  }
}

json rect_json(const PixelRect& r) {
  return json::array({r.x, r.y, r.w, r.h});
}

ObjectKind parse_kind(const std::string& name) {
  if (name == "usaf_target") return ObjectKind::UsafTarget;
  if (name == "phase_disk") return ObjectKind::PhaseDisk;
  if (name == "happy_face") return ObjectKind::HappyFace;
  if (name == "uniform") return ObjectKind::Uniform;
  bad("unknown object.kind '" + name + "'");
}

std::string kind_name(ObjectKind kind) {
  switch (kind) {
    case ObjectKind::UsafTarget: return "usaf_target";
    case ObjectKind::PhaseDisk: return "phase_disk";
    case ObjectKind::HappyFace: return "happy_face";
    case ObjectKind::Uniform: return "uniform";
  }
  return "uniform";
}

}  // namespace

RunConfig::RunConfig() {
  object.kind = ObjectKind::UsafTarget;
  object.phase_step = 0.82 * std::numbers::pi;
  object.base_transmission = 0.94;
}

void RunConfig::validate() const {
  if (!(std::isfinite(object.phase_step))) bad("object.phase_step not finite");
  if (object.base_transmission < 0.0 || object.base_transmission > 1.0)
    bad("object.base_transmission outside [0, 1]");
  if (object.od < 0.0) bad("object.od must be >= 0");
  if (object.grid.width <= 0 || object.grid.height <= 0)
    bad("grid dimensions must be positive");
  if (object.grid.pixel_pitch <= 0.0) bad("grid.pixel_pitch must be positive");
  if (visibility < 0.0 || visibility > 1.0) bad("model.visibility outside [0, 1]");
  if (mean_flux < 0.0) bad("model.mean_flux must be >= 0");
  if (background_rate < 0.0) bad("model.background_rate must be >= 0");
  if (psf_sigma < 0.0) bad("model.psf_sigma must be >= 0");
  if (!(exposure > 0.0)) bad("camera.exposure_s must be positive");
  if (read_noise < 0.0) bad("camera.read_noise must be >= 0");
  if (m != 3 && m != 4 && m != 6 && m != 12) bad("schedule.m must be 3, 4, 6 or 12");
  if (!(filters.lowpass_cutoff > 0.0 && filters.lowpass_cutoff <= 0.5))
    bad("filters.lowpass_cutoff outside (0, 0.5]");
  if (filters.gaussian_sigma < 0.0) bad("filters.gaussian_sigma_px must be >= 0");
  if (analysis.n_sets < 1) bad("analysis.n_sets must be >= 1");
  for (double e : analysis.exposures)
    if (!(e > 0.0)) bad("analysis.exposures_s must be positive");
  for (int mv : analysis.m_values)
    if (mv != 3 && mv != 4 && mv != 6 && mv != 12)
      bad("analysis.m_values must be within {3, 4, 6, 12}");
  for (double od : analysis.od_values)
    if (od < 0.0) bad("analysis.od_values must be >= 0");
}

RunConfig parse_config(const std::string& json_text,
                       const std::string& origin) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    bad("cannot parse " + origin + ": " + e.what());
  }
  check_keys(root, "config",
             {"seed", "object", "grid", "model", "camera", "schedule",
              "filters", "analysis", "derived_seeds"});

  RunConfig cfg;
  cfg.seed = get_field<std::uint64_t>(root, "config", "seed", cfg.seed);

  if (root.contains("object")) {
    const json& jo = root.at("object");
    check_keys(jo, "object",
               {"kind", "phase_step_pi", "phase_step_rad", "base_transmission",
                "od", "od_convention", "od_region"});
    cfg.object.kind = parse_kind(
        get_field<std::string>(jo, "object", "kind", kind_name(cfg.object.kind)));
    if (jo.contains("phase_step_pi") && jo.contains("phase_step_rad"))
      bad("give object.phase_step_pi or object.phase_step_rad, not both");
    if (jo.contains("phase_step_pi"))
      cfg.object.phase_step = std::numbers::pi * get_field<double>(
          jo, "object", "phase_step_pi", 0.0);
    if (jo.contains("phase_step_rad"))
      cfg.object.phase_step =
          get_field<double>(jo, "object", "phase_step_rad", 0.0);
    cfg.object.base_transmission = get_field<double>(
        jo, "object", "base_transmission", cfg.object.base_transmission);
    cfg.object.od = get_field<double>(jo, "object", "od", cfg.object.od);
    const std::string conv = get_field<std::string>(
        jo, "object", "od_convention",
        cfg.object.od_convention == OdConvention::Amplitude ? "amplitude"
                                                            : "intensity");
    if (conv == "amplitude") cfg.object.od_convention = OdConvention::Amplitude;
    else if (conv == "intensity") cfg.object.od_convention = OdConvention::Intensity;
    else bad("object.od_convention must be 'amplitude' or 'intensity'");
    if (jo.contains("od_region") && !jo.at("od_region").is_null())
      cfg.object.od_region = parse_rect(jo.at("od_region"), "object.od_region");
  }

  if (root.contains("grid")) {
    const json& jg = root.at("grid");
    check_keys(jg, "grid", {"width", "height", "pixel_pitch_um", "pixel_pitch_m"});
    cfg.object.grid.width =
        get_field<int>(jg, "grid", "width", cfg.object.grid.width);
    cfg.object.grid.height =
        get_field<int>(jg, "grid", "height", cfg.object.grid.height);
    if (jg.contains("pixel_pitch_um") && jg.contains("pixel_pitch_m"))
      bad("give grid.pixel_pitch_um or grid.pixel_pitch_m, not both");
    if (jg.contains("pixel_pitch_um"))
      cfg.object.grid.pixel_pitch =
          1e-6 * get_field<double>(jg, "grid", "pixel_pitch_um", 0.0);
    if (jg.contains("pixel_pitch_m"))
      cfg.object.grid.pixel_pitch =
          get_field<double>(jg, "grid", "pixel_pitch_m", 0.0);
  }

  if (root.contains("model")) {
    const json& jm = root.at("model");
    check_keys(jm, "model",
               {"visibility", "mean_flux", "background_rate", "psf_sigma_um",
                "psf_sigma_m", "nu"});
    cfg.visibility = get_field<double>(jm, "model", "visibility", cfg.visibility);
    cfg.mean_flux = get_field<double>(jm, "model", "mean_flux", cfg.mean_flux);
    cfg.background_rate =
        get_field<double>(jm, "model", "background_rate", cfg.background_rate);
    if (jm.contains("psf_sigma_um") && jm.contains("psf_sigma_m"))
      bad("give model.psf_sigma_um or model.psf_sigma_m, not both");
    if (jm.contains("psf_sigma_um"))
      cfg.psf_sigma = 1e-6 * get_field<double>(jm, "model", "psf_sigma_um", 0.0);
    if (jm.contains("psf_sigma_m"))
      cfg.psf_sigma = get_field<double>(jm, "model", "psf_sigma_m", 0.0);
    if (jm.contains("nu")) {
      const json& jn = jm.at("nu");
      check_keys(jn, "model.nu",
                 {"kind", "tilt_x", "tilt_y", "bump_amplitude",
                  "bump_sigma_frac"});
      const std::string kind = get_field<std::string>(
          jn, "model.nu", "kind", cfg.nu.zero ? "zero" : "tilt_bump");
      if (kind == "zero") cfg.nu.zero = true;
      else if (kind == "tilt_bump") cfg.nu.zero = false;
      else bad("model.nu.kind must be 'zero' or 'tilt_bump'");
      cfg.nu.tilt_x = get_field<double>(jn, "model.nu", "tilt_x", cfg.nu.tilt_x);
      cfg.nu.tilt_y = get_field<double>(jn, "model.nu", "tilt_y", cfg.nu.tilt_y);
      cfg.nu.bump_amplitude = get_field<double>(jn, "model.nu", "bump_amplitude",
                                                cfg.nu.bump_amplitude);
      cfg.nu.bump_sigma_frac = get_field<double>(
          jn, "model.nu", "bump_sigma_frac", cfg.nu.bump_sigma_frac);
    }
  }

  if (root.contains("camera")) {
    const json& jc = root.at("camera");
    check_keys(jc, "camera", {"exposure_s", "read_noise", "noise"});
    cfg.exposure = get_field<double>(jc, "camera", "exposure_s", cfg.exposure);
    cfg.read_noise = get_field<double>(jc, "camera", "read_noise", cfg.read_noise);
    cfg.noise = get_field<bool>(jc, "camera", "noise", cfg.noise);
  }

  if (root.contains("schedule")) {
    const json& js = root.at("schedule");
    check_keys(js, "schedule", {"m"});
    cfg.m = get_field<int>(js, "schedule", "m", cfg.m);
  }

  if (root.contains("filters")) {
    const json& jf = root.at("filters");
    check_keys(jf, "filters", {"lowpass_cutoff", "gaussian_sigma_px", "enabled"});
    cfg.filters.lowpass_cutoff = get_field<double>(
        jf, "filters", "lowpass_cutoff", cfg.filters.lowpass_cutoff);
    cfg.filters.gaussian_sigma = get_field<double>(
        jf, "filters", "gaussian_sigma_px", cfg.filters.gaussian_sigma);
    cfg.filters.enabled =
        get_field<bool>(jf, "filters", "enabled", cfg.filters.enabled);
  }

  if (root.contains("analysis")) {
    const json& ja = root.at("analysis");
    check_keys(ja, "analysis",
               {"exposures_s", "m_values", "n_sets", "od_values", "od_regions",
                "region_in", "region_out", "flat_region"});
    cfg.analysis.exposures = get_field<std::vector<double>>(
        ja, "analysis", "exposures_s", cfg.analysis.exposures);
    cfg.analysis.m_values = get_field<std::vector<int>>(
        ja, "analysis", "m_values", cfg.analysis.m_values);
    cfg.analysis.n_sets =
        get_field<int>(ja, "analysis", "n_sets", cfg.analysis.n_sets);
    cfg.analysis.od_values = get_field<std::vector<double>>(
        ja, "analysis", "od_values", cfg.analysis.od_values);
    if (ja.contains("od_regions")) {
      cfg.analysis.od_regions.clear();
      const json& jr = ja.at("od_regions");
      if (!jr.is_array()) bad("'analysis.od_regions' must be an array");
      for (const auto& r : jr)
        cfg.analysis.od_regions.push_back(parse_rect(r, "analysis.od_regions"));
    }
    for (const char* key : {"region_in", "region_out", "flat_region"}) {
      if (!ja.contains(key) || ja.at(key).is_null()) continue;
      const PixelRect r = parse_rect(ja.at(key), std::string("analysis.") + key);
      if (std::string_view(key) == "region_in") cfg.analysis.region_in = r;
      else if (std::string_view(key) == "region_out") cfg.analysis.region_out = r;
      else cfg.analysis.flat_region = r;
    }
  }

  cfg.validate();
  return cfg;
}

RunConfig load_config_file(const std::filesystem::path& path) {
  return parse_config(read_text_file(path), path.string());
}

std::string manifest_json(const RunConfig& cfg) {
  json root;
  root["seed"] = cfg.seed;
  root["object"] = {
      {"kind", kind_name(cfg.object.kind)},
      {"phase_step_rad", cfg.object.phase_step},
      {"base_transmission", cfg.object.base_transmission},
      {"od", cfg.object.od},
      {"od_convention",
       cfg.object.od_convention == OdConvention::Amplitude ? "amplitude"
                                                           : "intensity"},
      {"od_region", cfg.object.od_region ? json(rect_json(*cfg.object.od_region))
                                         : json(nullptr)}};
  root["grid"] = {{"width", cfg.object.grid.width},
                  {"height", cfg.object.grid.height},
                  {"pixel_pitch_m", cfg.object.grid.pixel_pitch}};
  root["model"] = {
      {"visibility", cfg.visibility},
      {"mean_flux", cfg.mean_flux},
      {"background_rate", cfg.background_rate},
      {"psf_sigma_m", cfg.psf_sigma},
      {"nu",
       {{"kind", cfg.nu.zero ? "zero" : "tilt_bump"},
        {"tilt_x", cfg.nu.tilt_x},
        {"tilt_y", cfg.nu.tilt_y},
        {"bump_amplitude", cfg.nu.bump_amplitude},
        {"bump_sigma_frac", cfg.nu.bump_sigma_frac}}}};
  root["camera"] = {{"exposure_s", cfg.exposure},
                    {"read_noise", cfg.read_noise},
                    {"noise", cfg.noise}};
  root["schedule"] = {{"m", cfg.m}};
  root["filters"] = {{"lowpass_cutoff", cfg.filters.lowpass_cutoff},
                     {"gaussian_sigma_px", cfg.filters.gaussian_sigma},
                     {"enabled", cfg.filters.enabled}};
  json ja;
  ja["exposures_s"] = cfg.analysis.exposures;
  ja["m_values"] = cfg.analysis.m_values;
  ja["n_sets"] = cfg.analysis.n_sets;
  ja["od_values"] = cfg.analysis.od_values;
  json regions = json::array();
  for (const auto& r : cfg.analysis.od_regions) regions.push_back(rect_json(r));
  ja["od_regions"] = regions;
  ja["region_in"] = cfg.analysis.region_in
                        ? json(rect_json(*cfg.analysis.region_in))
                        : json(nullptr);
  ja["region_out"] = cfg.analysis.region_out
                         ? json(rect_json(*cfg.analysis.region_out))
                         : json(nullptr);
  ja["flat_region"] = cfg.analysis.flat_region
                          ? json(rect_json(*cfg.analysis.flat_region))
                          : json(nullptr);
  root["analysis"] = ja;
  root["derived_seeds"] = {{"object_stack", object_stack_seed(cfg)},
                           {"reference_stack", reference_stack_seed(cfg)},
                           {"background", background_seed(cfg)}};
  return root.dump(2) + "\n";
}

InterferometerModel build_model(const RunConfig& cfg) {
  InterferometerModel model;
  model.nu = cfg.nu.zero
                 ? ImageGrid(cfg.object.grid.width, cfg.object.grid.height,
                             Unit::Radians, 0.0)
                 : make_nu_map(cfg.object.grid.width, cfg.object.grid.height,
                               cfg.nu.tilt_x, cfg.nu.tilt_y,
                               cfg.nu.bump_amplitude, cfg.nu.bump_sigma_frac);
  model.visibility = cfg.visibility;
  model.mean_flux = cfg.mean_flux;
  model.background_rate = cfg.background_rate;
  model.psf_sigma = cfg.psf_sigma;
  return model;
}

CameraSpec build_camera(const RunConfig& cfg, std::uint64_t stack_seed) {
  CameraSpec cam;
  cam.exposure = cfg.exposure;
  cam.read_noise_sigma = cfg.read_noise;
  cam.dark_background = cfg.background_rate;
  cam.seed = stack_seed;
  cam.noise_enabled = cfg.noise;
  return cam;
}

std::uint64_t object_stack_seed(const RunConfig& cfg) {
  return substream(cfg.seed, 1);
}
std::uint64_t reference_stack_seed(const RunConfig& cfg) {
  return substream(cfg.seed, 2);
}
std::uint64_t background_seed(const RunConfig& cfg) {
  return substream(cfg.seed, 3);
}

}  // namespace holo
