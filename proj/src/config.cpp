#include "mctrack/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "mctrack/error.hpp"

namespace mct {
namespace {

using nlohmann::json;

json to_json(const RunConfig& cfg) {
  const TrackerConfig& t = cfg.tracker;
  const SyntheticSpec& s = cfg.synthetic;
  json j;
  j["num_candidates"] = t.num_candidates;
  j["sigma_x"] = t.sigma.x;
  j["sigma_y"] = t.sigma.y;
  j["sigma_s"] = t.sigma.s;
  j["patch_w"] = t.patch_w;
  j["patch_h"] = t.patch_h;
  j["obs_rate"] = t.obs_rate;
  j["n_templates"] = t.n_templates;
  j["mu0"] = t.solver.mu0 ? json(*t.solver.mu0) : json(nullptr);
  j["mu0_scale"] = t.solver.mu0_scale;
  j["rho"] = t.solver.rho;
  j["tol"] = t.solver.tol;
  j["max_iter"] = t.solver.max_iter;
  j["sim_threshold"] = t.templates.sim_threshold;
  j["alpha"] = t.templates.alpha;
  j["seed"] = t.seed;
  j["workers"] = t.workers;

  j["synth_width"] = s.width;
  j["synth_height"] = s.height;
  j["synth_frames"] = s.frames;
  j["synth_target_w"] = s.target_w;
  j["synth_target_h"] = s.target_h;
  j["synth_texture_rank"] = s.texture_rank;
  j["synth_start_x"] = s.start_x;
  j["synth_start_y"] = s.start_y;
  j["synth_velocity_x"] = s.velocity_x;
  j["synth_velocity_y"] = s.velocity_y;
  j["synth_wobble_amplitude"] = s.wobble_amplitude;
  j["synth_wobble_period"] = s.wobble_period;
  j["synth_illumination"] = s.illumination;
  j["synth_noise_std"] = s.noise_std;
  j["synth_seed"] = s.seed;
  json occ = json::array();
  for (const auto& o : s.occluders) {
    occ.push_back({{"start", o.start_frame},
                   {"length", o.length},
                   {"coverage", o.coverage},
                   {"offset", o.offset},
                   {"intensity", o.intensity},
                   {"contrast", o.contrast}});
  }
  j["synth_occluders"] = occ;
  return j;
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Usage, std::string("config key '") + key + "': " + e.what());
  }
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Parse, std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::Parse, "config must be a JSON object");

  RunConfig cfg;
  const json known = to_json(cfg);
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw Error(ErrorKind::Usage, "unknown config key '" + key + "'");
  }

  TrackerConfig& t = cfg.tracker;
  read(j, "num_candidates", t.num_candidates);
  read(j, "sigma_x", t.sigma.x);
  read(j, "sigma_y", t.sigma.y);
  read(j, "sigma_s", t.sigma.s);
  read(j, "patch_w", t.patch_w);
  read(j, "patch_h", t.patch_h);
  read(j, "obs_rate", t.obs_rate);
  read(j, "n_templates", t.n_templates);
  if (j.contains("mu0")) {
    if (j["mu0"].is_null()) {
      t.solver.mu0.reset();
    } else {
      double mu0 = 0.0;
      read(j, "mu0", mu0);
      t.solver.mu0 = mu0;
    }
  }
  read(j, "mu0_scale", t.solver.mu0_scale);
  read(j, "rho", t.solver.rho);
  read(j, "tol", t.solver.tol);
  read(j, "max_iter", t.solver.max_iter);
  read(j, "sim_threshold", t.templates.sim_threshold);
  read(j, "alpha", t.templates.alpha);
  read(j, "seed", t.seed);
  read(j, "workers", t.workers);

  SyntheticSpec& s = cfg.synthetic;
  read(j, "synth_width", s.width);
  read(j, "synth_height", s.height);
  read(j, "synth_frames", s.frames);
  read(j, "synth_target_w", s.target_w);
  read(j, "synth_target_h", s.target_h);
  read(j, "synth_texture_rank", s.texture_rank);
  read(j, "synth_start_x", s.start_x);
  read(j, "synth_start_y", s.start_y);
  read(j, "synth_velocity_x", s.velocity_x);
  read(j, "synth_velocity_y", s.velocity_y);
  read(j, "synth_wobble_amplitude", s.wobble_amplitude);
  read(j, "synth_wobble_period", s.wobble_period);
  read(j, "synth_illumination", s.illumination);
  read(j, "synth_noise_std", s.noise_std);
  read(j, "synth_seed", s.seed);
  if (j.contains("synth_occluders")) {
    const json& occ = j["synth_occluders"];
    if (!occ.is_array()) throw Error(ErrorKind::Usage, "synth_occluders must be an array");
    s.occluders.clear();
    for (const auto& o : occ) {
      OccluderEvent ev;
      read(o, "start", ev.start_frame);
      read(o, "length", ev.length);
      read(o, "coverage", ev.coverage);
      read(o, "offset", ev.offset);
      read(o, "intensity", ev.intensity);
      read(o, "contrast", ev.contrast);
      s.occluders.push_back(ev);
    }
  }

  t.validate();
  s.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Ingestion, "cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string dump_config(const RunConfig& cfg) { return to_json(cfg).dump(2) + "\n"; }

}  // namespace mct
