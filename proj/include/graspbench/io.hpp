#ifndef GRASPBENCH_IO_HPP
#define GRASPBENCH_IO_HPP

#include <string>
#include <vector>

#include "graspbench/types.hpp"

namespace graspbench {

// Depth file format "GBD1": magic `G B D 1`, u32-LE width, u32-LE height,
// f64-LE standoff, then width*height f32-LE depths (meters, NaN = invalid).
// NaNs are canonicalized on write so identical images give identical bytes.

void write_gbd1(const std::string& path, const DepthImage& depth, double standoff);
DepthImage read_gbd1(const std::string& path, double* standoff_out = nullptr);

std::string encode_gbd1(const DepthImage& depth, double standoff);
DepthImage decode_gbd1(const std::string& bytes, double* standoff_out = nullptr);

/// ASCII PLY with x,y,z float properties.
void write_ply(const std::string& path, const PointCloud& cloud);

// Base64 of raw bytes; used by the external-planner wire protocol to carry
// little-endian f32 depth data.
std::string base64_encode(const void* data, size_t len);
std::vector<unsigned char> base64_decode(const std::string& text);

/// Row-major little-endian f32 payload for the wire protocol (NaN = invalid).
std::string depth_to_base64(const DepthImage& depth);
DepthImage depth_from_base64(const std::string& b64, int width, int height);

}  // namespace graspbench

#endif
