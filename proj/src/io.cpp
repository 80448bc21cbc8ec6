#include "graspbench/io.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

namespace graspbench {

namespace {

void put_u32(std::string& out, uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f32(std::string& out, float v) {
    uint32_t bits;
    std::memcpy(&bits, &v, 4);
    // canonical quiet NaN so serialized bytes are stable
    if (!DepthImage::is_valid(v)) bits = 0x7fc00000u;
    put_u32(out, bits);
}

void put_f64(std::string& out, double v) {
    uint64_t bits;
    std::memcpy(&bits, &v, 8);
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

uint32_t get_u32(const std::string& in, size_t off) {
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(static_cast<unsigned char>(in[off + i])) << (8 * i);
    return v;
}

}  // namespace

std::string encode_gbd1(const DepthImage& depth, double standoff) {
    std::string out;
    out.reserve(16 + depth.size() * 4);
    out += "GBD1";
    put_u32(out, static_cast<uint32_t>(depth.width));
    put_u32(out, static_cast<uint32_t>(depth.height));
    put_f64(out, standoff);
    for (float d : depth.data) put_f32(out, d);
    return out;
}

DepthImage decode_gbd1(const std::string& bytes, double* standoff_out) {
    if (bytes.size() < 20 || bytes.compare(0, 4, "GBD1") != 0)
        throw IoError("not a GBD1 depth file");
    uint32_t w = get_u32(bytes, 4);
    uint32_t h = get_u32(bytes, 8);
    uint64_t sbits = 0;
    for (int i = 0; i < 8; ++i)
        sbits |= static_cast<uint64_t>(static_cast<unsigned char>(bytes[12 + i])) << (8 * i);
    double standoff;
    std::memcpy(&standoff, &sbits, 8);
    size_t need = 20 + static_cast<size_t>(w) * h * 4;
    if (bytes.size() != need) throw IoError("GBD1 payload size mismatch");

    DepthImage depth(static_cast<int>(w), static_cast<int>(h));
    for (size_t i = 0; i < depth.size(); ++i) {
        uint32_t bits = get_u32(bytes, 20 + i * 4);
        float v;
        std::memcpy(&v, &bits, 4);
        depth.data[i] = v;
    }
    if (standoff_out) *standoff_out = standoff;
    return depth;
}

void write_gbd1(const std::string& path, const DepthImage& depth, double standoff) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for write: " + path);
    std::string bytes = encode_gbd1(depth, standoff);
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw IoError("write failed: " + path);
}

DepthImage read_gbd1(const std::string& path, double* standoff_out) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return decode_gbd1(ss.str(), standoff_out);
}

void write_ply(const std::string& path, const PointCloud& cloud) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open for write: " + path);
    f << "ply\nformat ascii 1.0\nelement vertex " << cloud.size()
      << "\nproperty float x\nproperty float y\nproperty float z\nend_header\n";
    char line[96];
    for (const Vec3& p : cloud.points) {
        std::snprintf(line, sizeof(line), "%.6f %.6f %.6f\n", p.x, p.y, p.z);
        f << line;
    }
    if (!f) throw IoError("write failed: " + path);
}

namespace {
const char kB64Table[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

int b64_value(char c) {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
}
}  // namespace

std::string base64_encode(const void* data, size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::string out;
    out.reserve((len + 2) / 3 * 4);
    for (size_t i = 0; i < len; i += 3) {
        uint32_t chunk = static_cast<uint32_t>(p[i]) << 16;
        int n = 1;
        if (i + 1 < len) { chunk |= static_cast<uint32_t>(p[i + 1]) << 8; n = 2; }
        if (i + 2 < len) { chunk |= p[i + 2]; n = 3; }
        out.push_back(kB64Table[(chunk >> 18) & 63]);
        out.push_back(kB64Table[(chunk >> 12) & 63]);
        out.push_back(n > 1 ? kB64Table[(chunk >> 6) & 63] : '=');
        out.push_back(n > 2 ? kB64Table[chunk & 63] : '=');
    }
    return out;
}

std::vector<unsigned char> base64_decode(const std::string& text) {
    std::vector<unsigned char> out;
    out.reserve(text.size() / 4 * 3);
    uint32_t chunk = 0;
    int have = 0;
    for (char c : text) {
        if (c == '=' || c == '\n' || c == '\r') continue;
        int v = b64_value(c);
        if (v < 0) throw IoError("invalid base64 character");
        chunk = (chunk << 6) | static_cast<uint32_t>(v);
        if (++have == 4) {
            out.push_back(static_cast<unsigned char>((chunk >> 16) & 0xff));
            out.push_back(static_cast<unsigned char>((chunk >> 8) & 0xff));
            out.push_back(static_cast<unsigned char>(chunk & 0xff));
            chunk = 0;
            have = 0;
        }
    }
    if (have == 2) {
        out.push_back(static_cast<unsigned char>((chunk >> 4) & 0xff));
    } else if (have == 3) {
        out.push_back(static_cast<unsigned char>((chunk >> 10) & 0xff));
        out.push_back(static_cast<unsigned char>((chunk >> 2) & 0xff));
    } else if (have != 0) {
        throw IoError("truncated base64 payload");
    }
    return out;
}

std::string depth_to_base64(const DepthImage& depth) {
    std::string raw;
    raw.reserve(depth.size() * 4);
    for (float d : depth.data) {
        uint32_t bits;
        std::memcpy(&bits, &d, 4);
        if (!DepthImage::is_valid(d)) bits = 0x7fc00000u;
        for (int i = 0; i < 4; ++i) raw.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
    }
    return base64_encode(raw.data(), raw.size());
}

DepthImage depth_from_base64(const std::string& b64, int width, int height) {
    std::vector<unsigned char> raw = base64_decode(b64);
    size_t need = static_cast<size_t>(width) * height * 4;
    if (raw.size() != need) throw ProtocolError("depth payload size mismatch");
    DepthImage depth(width, height);
    for (size_t i = 0; i < depth.size(); ++i) {
        uint32_t bits = 0;
        for (int k = 0; k < 4; ++k) bits |= static_cast<uint32_t>(raw[i * 4 + k]) << (8 * k);
        float v;
        std::memcpy(&v, &bits, 4);
        depth.data[i] = v;
    }
    return depth;
}

}  // namespace graspbench
