#include "graspbench/maskgrasp.hpp"

#include <algorithm>
#include <cmath>

namespace graspbench {

double HeightMap::max_height() const {
    double m = 0.0;
    for (double h : data) m = std::max(m, h);
    return m;
}

HeightMap height_map(const DepthImage& depth, const CameraModel& camera) {
    if (!camera.valid()) throw ConfigError("invalid camera model");
    HeightMap hm;
    hm.width = depth.width;
    hm.height = depth.height;
    hm.meters_per_pixel = camera.standoff / camera.fx;
    hm.standoff = camera.standoff;
    hm.cx = camera.cx;
    hm.cy = camera.cy;
    hm.data.resize(depth.size());
    for (size_t i = 0; i < depth.size(); ++i) {
        float d = depth.data[i];
        if (!DepthImage::is_valid(d)) throw InvalidPixels("height map needs a completed depth image");
        hm.data[i] = std::max(0.0, camera.standoff - static_cast<double>(d));
    }
    return hm;
}

// ---------------------------------------------------------------------------
// Masks
// ---------------------------------------------------------------------------

GraspMask build_mask(const GripperSpec& gripper, double opening, double angle, double scale) {
    if (scale <= 0.0) throw ConfigError("mask scale must be > 0");
    if (opening > gripper.max_opening + 1e-12)
        throw ConfigError("mask opening exceeds gripper max opening");

    const double op = opening / scale;
    const double fw = std::max(1.0, gripper.finger_width / scale);
    const double ft = std::max(1.0, gripper.finger_thickness / scale);
    const int opening_px = static_cast<int>(std::lround(op));
    if (opening_px < 3) throw TooSmall("mask opening below 3 px at this scale");

    // axis-aligned template on an odd canvas, closing axis along +x; the
    // negative finger zones over-cover the physical pad footprint by one
    // pixel so a placement that fits the template also fits the hardware
    const double x_extent = op / 2.0 + ft;
    const double y_extent = fw / 2.0;
    const int hx0 = static_cast<int>(std::floor(x_extent)) + 1;
    const int hy0 = static_cast<int>(std::floor(y_extent)) + 1;
    const int w0 = 2 * hx0 + 1, h0 = 2 * hy0 + 1;

    std::vector<double> base(static_cast<size_t>(w0) * h0, 0.0);
    for (int iy = -hy0; iy <= hy0; ++iy) {
        for (int ix = -hx0; ix <= hx0; ++ix) {
            double v = 0.0;
            double ax = std::abs(ix);
            if (ax <= op / 2.0 && std::abs(iy) <= y_extent) {
                // pyramid taper: object mass at the grasp center is rewarded
                // most, which keeps the argmax centered on plateau-like fits
                double tx = 1.0 - ax / (op / 2.0 + 1.0);
                double ty = 1.0 - std::abs(iy) / (y_extent + 1.0);
                v = tx * ty;
            } else if (ax > op / 2.0) {
                v = -1.0;
            }
            base[static_cast<size_t>(iy + hy0) * w0 + (ix + hx0)] = v;
        }
    }

    // rotate with bilinear resampling onto an odd canvas sized for the
    // rotated footprint
    const double c = std::cos(angle), s = std::sin(angle);
    const int hxr = static_cast<int>(std::ceil(std::abs(c) * hx0 + std::abs(s) * hy0 - 1e-9));
    const int hyr = static_cast<int>(std::ceil(std::abs(s) * hx0 + std::abs(c) * hy0 - 1e-9));
    GraspMask mask;
    mask.width = 2 * hxr + 1;
    mask.height = 2 * hyr + 1;
    mask.angle = angle;
    mask.opening_px = opening_px;
    mask.weights.assign(static_cast<size_t>(mask.width) * mask.height, 0.0);

    double pos_sum = 0.0, neg_sum = 0.0;
    for (int iy = -hyr; iy <= hyr; ++iy) {
        for (int ix = -hxr; ix <= hxr; ++ix) {
            // inverse rotation into the base frame
            double bx = c * ix + s * iy;
            double by = -s * ix + c * iy;
            double gx = bx + hx0, gy = by + hy0;
            int x0 = static_cast<int>(std::floor(gx));
            int y0 = static_cast<int>(std::floor(gy));
            double fx = gx - x0, fy = gy - y0;
            double v = 0.0;
            for (int dy = 0; dy <= 1; ++dy) {
                for (int dx = 0; dx <= 1; ++dx) {
                    int xs = x0 + dx, ys = y0 + dy;
                    if (xs < 0 || xs >= w0 || ys < 0 || ys >= h0) continue;
                    double wgt = (dx ? fx : 1.0 - fx) * (dy ? fy : 1.0 - fy);
                    v += wgt * base[static_cast<size_t>(ys) * w0 + xs];
                }
            }
            mask.weights[static_cast<size_t>(iy + hyr) * mask.width + (ix + hxr)] = v;
            if (v > 0.0) pos_sum += v;
            if (v < 0.0) neg_sum += -v;
        }
    }
    if (pos_sum <= 0.0 || neg_sum <= 0.0) throw TooSmall("degenerate mask after rotation");

    // re-balance so positives sum to +1 and negatives to -1
    for (double& v : mask.weights) {
        if (v > 0.0) v /= pos_sum;
        else if (v < 0.0) v /= neg_sum;
    }
    return mask;
}

// ---------------------------------------------------------------------------
// Scoring
// ---------------------------------------------------------------------------

std::vector<uint8_t> binarize_top_band(const HeightMap& hm, double band,
                                       double min_object_height) {
    std::vector<uint8_t> bin(hm.data.size(), 0);
    const double h_max = hm.max_height();
    if (h_max < min_object_height) return bin;
    // floor keeps table pixels out of the band for objects shorter than it
    const double threshold = std::max(h_max - band, min_object_height);
    for (size_t i = 0; i < hm.data.size(); ++i)
        if (hm.data[i] >= threshold) bin[i] = 1;
    return bin;
}

ScoreMap score_map(const HeightMap& hm, const GraspMask& mask, double band) {
    ScoreMap out;
    out.width = hm.width;
    out.height = hm.height;
    out.data.assign(static_cast<size_t>(hm.width) * hm.height, 0.0);
    if (mask.width > hm.width || mask.height > hm.height)
        throw ConfigError("mask larger than the height map");

    std::vector<uint8_t> bin = binarize_top_band(hm, band);

    // occupied pixels; scores are exactly zero wherever the mask support
    // misses every one of them
    std::vector<std::pair<int, int>> ones;
    int bx0 = hm.width, bx1 = -1, by0 = hm.height, by1 = -1;
    for (int y = 0; y < hm.height; ++y)
        for (int x = 0; x < hm.width; ++x)
            if (bin[static_cast<size_t>(y) * hm.width + x]) {
                ones.emplace_back(x, y);
                bx0 = std::min(bx0, x);
                bx1 = std::max(bx1, x);
                by0 = std::min(by0, y);
                by1 = std::max(by1, y);
            }
    if (ones.empty()) return out;

    struct Tap {
        int dx, dy;
        double v;
    };
    std::vector<Tap> support;
    const int mx = mask.width / 2, my = mask.height / 2;
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x) {
            double v = mask.at(x, y);
            if (v != 0.0) support.push_back({x - mx, y - my, v});
        }

    // scatter: an occupied pixel at q contributes mask(m) to the placement
    // centered at q - (m - center)
    for (const auto& [qx, qy] : ones) {
        for (const Tap& t : support) {
            int x = qx - t.dx;
            int y = qy - t.dy;
            if (x < 0 || x >= hm.width || y < 0 || y >= hm.height) continue;
            out.data[static_cast<size_t>(y) * hm.width + x] += t.v;
        }
    }
    out.x0 = std::max(0, bx0 - mx);
    out.x1 = std::min(hm.width - 1, bx1 + mx);
    out.y0 = std::max(0, by0 - my);
    out.y1 = std::min(hm.height - 1, by1 + my);
    return out;
}

// ---------------------------------------------------------------------------
// Planner
// ---------------------------------------------------------------------------

Grasp best_mask_grasp(const HeightMap& hm, const GripperSpec& gripper,
                      const MaskPlannerParams& params) {
    if (params.angle_count < 4) throw ConfigError("need at least 4 mask angles");
    std::vector<double> openings = params.openings;
    if (std::find(openings.begin(), openings.end(), gripper.max_opening) == openings.end())
        openings.push_back(gripper.max_opening);
    std::sort(openings.begin(), openings.end());
    openings.erase(std::remove_if(openings.begin(), openings.end(),
                                  [&](double o) { return o > gripper.max_opening + 1e-12; }),
                   openings.end());
    if (openings.empty()) throw ConfigError("no feasible mask openings");

    const double h_max = hm.max_height();
    if (h_max < params.min_object_height) throw NoGraspFound("empty scene");

    const double engagement = std::min(params.engagement_depth, h_max / 2.0);
    const double grasp_z = h_max - engagement;
    // candidate placements must put the grasp center on the object top band
    const std::vector<uint8_t> bin = binarize_top_band(hm, params.band, params.min_object_height);

    bool have_best = false;
    double best_score = 0.0;
    Grasp best;

    for (double opening : openings) {
        for (int a = 0; a < params.angle_count; ++a) {
            double angle = kPi * static_cast<double>(a) / params.angle_count;
            GraspMask mask;
            try {
                mask = build_mask(gripper, opening, angle, hm.meters_per_pixel);
            } catch (const TooSmall&) {
                continue;
            }
            ScoreMap scores = score_map(hm, mask, params.band);
            for (int y = scores.y0; y <= scores.y1; ++y) {
                for (int x = scores.x0; x <= scores.x1; ++x) {
                    double s = scores.at(x, y);
                    if (s <= 0.0) continue;
                    if (!bin[static_cast<size_t>(y) * hm.width + x]) continue;
                    // pinhole scale at the surface actually seen by this pixel
                    double scale =
                        hm.meters_per_pixel * (hm.standoff - hm.at(x, y)) / hm.standoff;
                    Grasp g;
                    g.center = {(x - hm.cx) * scale, (y - hm.cy) * scale, grasp_z};
                    g.angle = normalize_grasp_angle(angle);
                    g.width = std::min(opening + params.clearance, gripper.max_opening);
                    g.quality = s;
                    if (!have_best || s > best_score ||
                        (s == best_score && g.tie_break_before(best))) {
                        have_best = true;
                        best_score = s;
                        best = g;
                    }
                }
            }
        }
    }
    if (!have_best) throw NoGraspFound("no mask placement scored above zero");
    return best;
}

Grasp MaskPlanner::plan(const Observation& obs, const GripperSpec& gripper) const {
    HeightMap hm = height_map(obs.depth, obs.camera);
    // ROI in table coordinates; heights outside are cleared
    const double table_scale = hm.meters_per_pixel;
    for (int y = 0; y < hm.height; ++y) {
        for (int x = 0; x < hm.width; ++x) {
            double tx = (x - hm.cx) * table_scale;
            double ty = (y - hm.cy) * table_scale;
            if (!params_.roi.contains(tx, ty)) hm.at(x, y) = 0.0;
        }
    }
    Grasp g = best_mask_grasp(hm, gripper, params_);
    validate_grasp(g, gripper);
    return g;
}

}  // namespace graspbench
