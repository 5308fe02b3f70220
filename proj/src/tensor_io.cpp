#include "skynow/tensor_io.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>

#include "skynow/errors.hpp"

namespace skynow {

namespace {

constexpr char kMagic[8] = {'S', 'K', 'Y', 'T', 'E', 'N', 'S', '\0'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint32_t kDtypeU8 = 0;

void put_u32(std::uint8_t* p, std::uint32_t v) {
    p[0] = static_cast<std::uint8_t>(v);
    p[1] = static_cast<std::uint8_t>(v >> 8);
    p[2] = static_cast<std::uint8_t>(v >> 16);
    p[3] = static_cast<std::uint8_t>(v >> 24);
}

std::uint32_t get_u32(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) |
           (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace

void write_tensor_u8(const std::string& path, const SkyImage& img) {
    std::uint8_t header[64] = {0};
    std::memcpy(header, kMagic, 8);
    put_u32(header + 8, kVersion);
    put_u32(header + 12, kDtypeU8);
    put_u32(header + 16, static_cast<std::uint32_t>(img.height));
    put_u32(header + 20, static_cast<std::uint32_t>(img.width));
    put_u32(header + 24, static_cast<std::uint32_t>(img.channels));
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write tensor: " + path);
    out.write(reinterpret_cast<const char*>(header), sizeof(header));
    out.write(reinterpret_cast<const char*>(img.pixels.data()),
              static_cast<std::streamsize>(img.pixels.size()));
    if (!out) throw DataError("short write: " + path);
}

SkyImage read_tensor_u8(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open tensor: " + path);
    std::uint8_t header[64];
    in.read(reinterpret_cast<char*>(header), sizeof(header));
    if (!in || std::memcmp(header, kMagic, 8) != 0)
        throw DataError("bad tensor magic: " + path);
    if (get_u32(header + 8) != kVersion) throw DataError("bad tensor version: " + path);
    if (get_u32(header + 12) != kDtypeU8) throw DataError("unsupported dtype: " + path);
    SkyImage img;
    img.height = static_cast<int>(get_u32(header + 16));
    img.width = static_cast<int>(get_u32(header + 20));
    img.channels = static_cast<int>(get_u32(header + 24));
    if (img.height <= 0 || img.width <= 0 || (img.channels != 3 && img.channels != 4))
        throw DataError("bad tensor dims: " + path);
    img.pixels.resize(img.pixel_count());
    in.read(reinterpret_cast<char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
    if (!in) throw DataError("short tensor read: " + path);
    return img;
}

void write_manifest_csv(const std::string& path, const ImageManifest& m) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write manifest: " + path);
    out << "path,ts_file_name,ts_date_modified,exposure,site\n";
    for (const auto& e : m.entries) {
        out << e.path << ',' << format_iso8601(e.ts_file_name) << ','
            << format_iso8601(e.ts_date_modified) << ','
            << (e.exposure == Exposure::Long ? "long" : "short") << ',' << e.site_id
            << '\n';
    }
}

ImageManifest read_manifest_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open manifest: " + path);
    ImageManifest m;
    const auto slash = path.find_last_of('/');
    m.base_dir = slash == std::string::npos ? "." : path.substr(0, slash);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (header) {
            header = false;
            if (line.rfind("path,", 0) == 0) continue;
        }
        ManifestEntry e;
        std::string field;
        std::vector<std::string> f;
        for (char ch : line) {
            if (ch == ',') {
                f.push_back(field);
                field.clear();
            } else if (ch != '\r') {
                field.push_back(ch);
            }
        }
        f.push_back(field);
        if (f.size() < 5) throw DataError("short manifest row: " + line);
        e.path = f[0];
        e.ts_file_name = parse_iso8601(f[1]);
        e.ts_date_modified = parse_iso8601(f[2]);
        e.exposure = f[3] == "short" ? Exposure::Short : Exposure::Long;
        e.site_id = f[4];
        m.entries.push_back(std::move(e));
    }
    return m;
}

SkyImage DirImageStore::load(const ManifestEntry& e) const {
    SkyImage img = read_tensor_u8(base_dir_ + "/" + e.path);
    img.ts_file_name = e.ts_file_name;
    img.ts_date_modified = e.ts_date_modified;
    img.exposure = e.exposure;
    img.site_id = e.site_id;
    return img;
}

void MemoryImageStore::put(const std::string& key, SkyImage img) {
    auto it = std::lower_bound(items_.begin(), items_.end(), key,
                               [](const auto& a, const std::string& k) { return a.first < k; });
    if (it != items_.end() && it->first == key)
        it->second = std::move(img);
    else
        items_.insert(it, {key, std::move(img)});
}

SkyImage MemoryImageStore::load(const ManifestEntry& e) const {
    auto it = std::lower_bound(items_.begin(), items_.end(), e.path,
                               [](const auto& a, const std::string& k) { return a.first < k; });
    if (it == items_.end() || it->first != e.path)
        throw DataError("image not in store: " + e.path);
    SkyImage img = it->second;
    img.ts_file_name = e.ts_file_name;
    img.ts_date_modified = e.ts_date_modified;
    img.exposure = e.exposure;
    img.site_id = e.site_id;
    return img;
}

}  // namespace skynow
