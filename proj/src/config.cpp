#include "graspbench/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace graspbench {

std::vector<std::string> RunConfig::effective_objects() const {
    if (!objects.empty()) return objects;
    std::vector<std::string> all;
    for (const auto& [name, obj] : env.catalog) all.push_back(name);
    return all;
}

std::vector<ExperimentConfig> RunConfig::matrix() const {
    std::vector<ExperimentConfig> entries;
    for (const std::string& planner : planners) {
        for (const std::string& profile : profiles) {
            for (const std::string& gripper : grippers) {
                ExperimentConfig c;
                c.planner_id = planner;
                c.noise_profile = profile;
                c.gripper_id = gripper;
                c.objects = effective_objects();
                c.r = protocol_r;
                c.theta = protocol_theta;
                c.trials = trials;
                c.master_seed = master_seed;
                entries.push_back(std::move(c));
            }
        }
    }
    return entries;
}

RunConfig default_run_config() {
    RunConfig config;
    config.env = default_bench_environment();
    return config;
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    out.erase(std::remove(out.begin(), out.end(), std::string()), out.end());
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    try {
        size_t used = 0;
        double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
    }
}

long to_long(const std::string& key, const std::string& v) {
    try {
        size_t used = 0;
        long d = std::stol(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': expected an integer, got '" + v + "'");
    }
}

uint64_t to_u64(const std::string& key, const std::string& v) {
    try {
        size_t used = 0;
        unsigned long long d = std::stoull(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': expected an unsigned integer, got '" + v + "'");
    }
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("key '" + key + "': expected a boolean, got '" + v + "'");
}

std::vector<double> to_doubles(const std::string& key, const std::string& v) {
    std::vector<double> out;
    for (const std::string& part : split(v, ',')) out.push_back(to_double(key, part));
    return out;
}

/// Accumulates object.* overrides until all keys are seen, then rebuilds.
struct ObjectDraft {
    bool has_mass = false, has_mu = false;
    double mass = 0.0, mu = 0.0;
    std::map<int, SolidPrimitive> primitives;
};

}  // namespace

RunConfig parse_run_config(const std::string& text) {
    RunConfig config = default_run_config();
    BenchEnvironment& env = config.env;
    std::map<std::string, ObjectDraft> drafts;

    std::istringstream stream(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(stream, raw)) {
        ++line_no;
        std::string line = raw;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));

        // fixed keys
        if (key == "camera.width") env.camera.width = static_cast<int>(to_long(key, value));
        else if (key == "camera.height") env.camera.height = static_cast<int>(to_long(key, value));
        else if (key == "camera.fx") env.camera.fx = to_double(key, value);
        else if (key == "camera.fy") env.camera.fy = to_double(key, value);
        else if (key == "camera.cx") env.camera.cx = to_double(key, value);
        else if (key == "camera.cy") env.camera.cy = to_double(key, value);
        else if (key == "camera.standoff_m") env.camera.standoff = to_double(key, value);
        else if (key == "protocol.r_m") config.protocol_r = to_double(key, value);
        else if (key == "protocol.theta_rad") config.protocol_theta = to_double(key, value);
        else if (key == "protocol.trials") config.trials = static_cast<int>(to_long(key, value));
        else if (key == "protocol.master_seed") config.master_seed = to_u64(key, value);
        else if (key == "bench.planners") config.planners = split(value, ',');
        else if (key == "bench.profiles") config.profiles = split(value, ',');
        else if (key == "bench.grippers") config.grippers = split(value, ',');
        else if (key == "bench.objects") config.objects = split(value, ',');
        else if (key == "bench.threads") env.threads = static_cast<unsigned>(to_long(key, value));
        else if (key == "preprocess.roi") {
            std::istringstream ss(value);
            RoiBox roi;
            if (!(ss >> roi.x_min >> roi.x_max >> roi.y_min >> roi.y_max) || !roi.valid())
                throw ConfigError("key 'preprocess.roi': expected 'x_min x_max y_min y_max'");
            env.preprocess.roi = roi;
        }
        else if (key == "preprocess.plane_tol_m") env.preprocess.plane_tol = to_double(key, value);
        else if (key == "preprocess.voxel_m") env.preprocess.voxel = to_double(key, value);
        else if (key == "preprocess.ransac_iters")
            env.preprocess.ransac_iters = static_cast<int>(to_long(key, value));
        else if (key == "preprocess.ransac_seed") env.preprocess.ransac_seed = to_u64(key, value);
        else if (key == "topsurface.thickness_m") env.topsurface.thickness = to_double(key, value);
        else if (key == "topsurface.alpha_m") env.topsurface.alpha = to_double(key, value);
        else if (key == "topsurface.harmonics")
            env.topsurface.harmonics = static_cast<int>(to_long(key, value));
        else if (key == "topsurface.samples")
            env.topsurface.samples = static_cast<int>(to_long(key, value));
        else if (key == "topsurface.mu") env.topsurface.planner_mu = to_double(key, value);
        else if (key == "topsurface.w_antipodal")
            env.topsurface.weights.antipodal = to_double(key, value);
        else if (key == "topsurface.w_cone") env.topsurface.weights.cone = to_double(key, value);
        else if (key == "topsurface.w_moment")
            env.topsurface.weights.moment = to_double(key, value);
        else if (key == "topsurface.clearance_m")
            env.topsurface.weights.clearance = to_double(key, value);
        else if (key == "mask.angles") env.mask.angle_count = static_cast<int>(to_long(key, value));
        else if (key == "mask.openings_m") env.mask.openings = to_doubles(key, value);
        else if (key == "mask.band_m") env.mask.band = to_double(key, value);
        else if (key == "mask.engagement_m") env.mask.engagement_depth = to_double(key, value);
        else if (key == "mask.min_height_m") env.mask.min_object_height = to_double(key, value);
        else if (key == "stability.k_lift") env.stability.k_lift = to_double(key, value);
        else if (key == "stability.k_yaw") env.stability.k_yaw = to_double(key, value);
        else if (key == "stability.k_shake") env.stability.k_shake = to_double(key, value);
        else if (key == "external.timeout_s") env.external.timeout_seconds = to_double(key, value);
        else if (key == "external.normalize_angle")
            env.external.allow_angle_normalization = to_bool(key, value);
        else if (key == "output.dir") config.output_dir = value;
        else {
            // families: gripper.<name>.<field>, noise.<name>.<field>,
            // object.<name>.(mass_kg|mu|primitive.<k>)
            std::vector<std::string> parts;
            {
                std::string cur;
                for (char ch : key) {
                    if (ch == '.') {
                        parts.push_back(cur);
                        cur.clear();
                    } else {
                        cur += ch;
                    }
                }
                parts.push_back(cur);
            }
            if (parts.size() == 3 && parts[0] == "gripper") {
                GripperSpec& g = env.grippers[parts[1]];
                if (g.name.empty()) g.name = parts[1];
                const std::string& f = parts[2];
                if (f == "max_opening_m") g.max_opening = to_double(key, value);
                else if (f == "min_opening_m") g.min_opening = to_double(key, value);
                else if (f == "max_force_n") g.max_force = to_double(key, value);
                else if (f == "finger_width_m") g.finger_width = to_double(key, value);
                else if (f == "finger_thickness_m") g.finger_thickness = to_double(key, value);
                else if (f == "patch_radius_m") g.contact_patch_radius = to_double(key, value);
                else throw ConfigError("unknown gripper field '" + f + "' in key '" + key + "'");
            } else if (parts.size() == 3 && parts[0] == "noise") {
                NoiseProfile& p = env.profiles[parts[1]];
                if (p.name.empty()) p.name = parts[1];
                const std::string& f = parts[2];
                if (f == "sigma_z_m") p.sigma_z = to_double(key, value);
                else if (f == "dropout") p.dropout_rate = to_double(key, value);
                else if (f == "smooth_px") p.smoothing = static_cast<int>(to_long(key, value));
                else if (f == "seed") p.seed = to_u64(key, value);
                else throw ConfigError("unknown noise field '" + f + "' in key '" + key + "'");
            } else if (parts.size() >= 3 && parts[0] == "object") {
                ObjectDraft& d = drafts[parts[1]];
                if (parts.size() == 3 && parts[2] == "mass_kg") {
                    d.mass = to_double(key, value);
                    d.has_mass = true;
                } else if (parts.size() == 3 && parts[2] == "mu") {
                    d.mu = to_double(key, value);
                    d.has_mu = true;
                } else if (parts.size() == 4 && parts[2] == "primitive") {
                    int k = static_cast<int>(to_long(key, parts[3]));
                    d.primitives[k] = parse_primitive(value);
                } else {
                    throw ConfigError("unknown object field in key '" + key + "'");
                }
            } else {
                throw ConfigError("unknown key '" + key + "'");
            }
        }
    }

    // rebuild overridden/new objects
    for (auto& [name, draft] : drafts) {
        auto it = env.catalog.find(name);
        double mass = draft.has_mass ? draft.mass : (it != env.catalog.end() ? it->second.mass() : 0.0);
        double mu = draft.has_mu ? draft.mu : (it != env.catalog.end() ? it->second.friction_mu() : 0.0);
        std::vector<SolidPrimitive> prims;
        if (!draft.primitives.empty()) {
            for (const auto& [k, p] : draft.primitives) prims.push_back(p);
        } else if (it != env.catalog.end()) {
            prims = it->second.primitives();
        }
        if (prims.empty()) throw ConfigError("object '" + name + "' needs primitives");
        if (mass <= 0.0) throw ConfigError("object '" + name + "' needs mass_kg > 0");
        if (mu <= 0.0) throw ConfigError("object '" + name + "' needs mu in (0, 2]");
        ObjectModel rebuilt(name, std::move(prims), mass, mu);
        if (it != env.catalog.end())
            it->second = std::move(rebuilt);
        else
            env.catalog.emplace(name, std::move(rebuilt));
    }

    if (!env.camera.valid()) throw ConfigError("invalid camera parameters");
    if (config.trials < 1) throw ConfigError("protocol.trials must be >= 1");
    for (const std::string& g : config.grippers)
        if (!env.grippers.count(g)) throw ConfigError("unknown gripper '" + g + "' in bench.grippers");
    for (const std::string& p : config.profiles)
        if (!env.profiles.count(p)) throw ConfigError("unknown profile '" + p + "' in bench.profiles");
    for (const std::string& o : config.objects)
        if (!env.catalog.count(o)) throw ConfigError("unknown object '" + o + "' in bench.objects");
    return config;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open config: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_run_config(ss.str());
}

// ---------------------------------------------------------------------------
// Dump
// ---------------------------------------------------------------------------

namespace {
std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + v[i];
    return out;
}

std::string num(double v) {
    std::ostringstream ss;
    ss.precision(12);
    ss << v;
    return ss.str();
}
}  // namespace

std::string dump_run_config(const RunConfig& config) {
    const BenchEnvironment& env = config.env;
    std::ostringstream out;
    out << "# graspbench run configuration (all keys shown with their current values)\n\n";
    out << "camera.width = " << env.camera.width << "\n";
    out << "camera.height = " << env.camera.height << "\n";
    out << "camera.fx = " << num(env.camera.fx) << "\n";
    out << "camera.fy = " << num(env.camera.fy) << "\n";
    out << "camera.cx = " << num(env.camera.cx) << "\n";
    out << "camera.cy = " << num(env.camera.cy) << "\n";
    out << "camera.standoff_m = " << num(env.camera.standoff) << "\n\n";

    out << "protocol.r_m = " << num(config.protocol_r) << "\n";
    out << "protocol.theta_rad = " << num(config.protocol_theta) << "\n";
    out << "protocol.trials = " << config.trials << "\n";
    out << "protocol.master_seed = " << config.master_seed << "\n\n";

    out << "bench.planners = " << join(config.planners) << "\n";
    out << "bench.profiles = " << join(config.profiles) << "\n";
    out << "bench.grippers = " << join(config.grippers) << "\n";
    out << "bench.objects = " << join(config.effective_objects()) << "\n";
    out << "bench.threads = " << env.threads << "\n\n";

    out << "preprocess.roi = " << num(env.preprocess.roi.x_min) << " "
        << num(env.preprocess.roi.x_max) << " " << num(env.preprocess.roi.y_min) << " "
        << num(env.preprocess.roi.y_max) << "\n";
    out << "preprocess.plane_tol_m = " << num(env.preprocess.plane_tol) << "\n";
    out << "preprocess.voxel_m = " << num(env.preprocess.voxel) << "\n";
    out << "preprocess.ransac_iters = " << env.preprocess.ransac_iters << "\n";
    out << "preprocess.ransac_seed = " << env.preprocess.ransac_seed << "\n\n";

    out << "topsurface.thickness_m = " << num(env.topsurface.thickness) << "\n";
    out << "topsurface.alpha_m = " << num(env.topsurface.alpha) << "\n";
    out << "topsurface.harmonics = " << env.topsurface.harmonics << "\n";
    out << "topsurface.samples = " << env.topsurface.samples << "\n";
    out << "topsurface.mu = " << num(env.topsurface.planner_mu) << "\n";
    out << "topsurface.w_antipodal = " << num(env.topsurface.weights.antipodal) << "\n";
    out << "topsurface.w_cone = " << num(env.topsurface.weights.cone) << "\n";
    out << "topsurface.w_moment = " << num(env.topsurface.weights.moment) << "\n";
    out << "topsurface.clearance_m = " << num(env.topsurface.weights.clearance) << "\n\n";

    out << "mask.angles = " << env.mask.angle_count << "\n";
    {
        std::string list;
        for (size_t i = 0; i < env.mask.openings.size(); ++i)
            list += (i ? "," : "") + num(env.mask.openings[i]);
        out << "mask.openings_m = " << list << "\n";
    }
    out << "mask.band_m = " << num(env.mask.band) << "\n";
    out << "mask.engagement_m = " << num(env.mask.engagement_depth) << "\n";
    out << "mask.min_height_m = " << num(env.mask.min_object_height) << "\n\n";

    out << "stability.k_lift = " << num(env.stability.k_lift) << "\n";
    out << "stability.k_yaw = " << num(env.stability.k_yaw) << "\n";
    out << "stability.k_shake = " << num(env.stability.k_shake) << "\n\n";

    out << "external.timeout_s = " << num(env.external.timeout_seconds) << "\n";
    out << "external.normalize_angle = "
        << (env.external.allow_angle_normalization ? "true" : "false") << "\n\n";

    out << "output.dir = " << config.output_dir << "\n\n";

    for (const auto& [name, g] : env.grippers) {
        out << "gripper." << name << ".max_opening_m = " << num(g.max_opening) << "\n";
        out << "gripper." << name << ".min_opening_m = " << num(g.min_opening) << "\n";
        out << "gripper." << name << ".max_force_n = " << num(g.max_force) << "\n";
        out << "gripper." << name << ".finger_width_m = " << num(g.finger_width) << "\n";
        out << "gripper." << name << ".finger_thickness_m = " << num(g.finger_thickness) << "\n";
        out << "gripper." << name << ".patch_radius_m = " << num(g.contact_patch_radius) << "\n";
    }
    out << "\n";
    for (const auto& [name, p] : env.profiles) {
        out << "noise." << name << ".sigma_z_m = " << num(p.sigma_z) << "\n";
        out << "noise." << name << ".dropout = " << num(p.dropout_rate) << "\n";
        out << "noise." << name << ".smooth_px = " << p.smoothing << "\n";
        out << "noise." << name << ".seed = " << p.seed << "\n";
    }
    out << "\n";
    for (const auto& [name, obj] : env.catalog) {
        out << "object." << name << ".mass_kg = " << num(obj.mass()) << "\n";
        out << "object." << name << ".mu = " << num(obj.friction_mu()) << "\n";
        int k = 1;
        for (const SolidPrimitive& prim : obj.primitives())
            out << "object." << name << ".primitive." << k++ << " = "
                << format_primitive(prim) << "\n";
    }
    return out.str();
}

}  // namespace graspbench
