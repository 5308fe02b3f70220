#pragma once

#include <memory>
#include <string>
#include <vector>

#include "skynow/image.hpp"

namespace skynow {

// Raw tensor container: fixed 64-byte little-endian header followed by
// row-major pixel bytes. Header layout:
//   offset  size  field
//   0       8     magic "SKYTENS\0"
//   8       4     version (u32, = 1)
//   12      4     dtype   (u32, 0 = uint8)
//   16      4     height  (u32)
//   20      4     width   (u32)
//   24      4     channels(u32)
//   28      36    reserved, zero
void write_tensor_u8(const std::string& path, const SkyImage& img);
SkyImage read_tensor_u8(const std::string& path);

// One manifest row per stored image.
struct ManifestEntry {
    std::string path;                // relative to the manifest's directory
    UtcSeconds ts_file_name = 0;
    UtcSeconds ts_date_modified = 0;
    Exposure exposure = Exposure::Long;
    std::string site_id;
};

struct ImageManifest {
    std::string base_dir;  // directory the paths are relative to
    std::vector<ManifestEntry> entries;
};

void write_manifest_csv(const std::string& path, const ImageManifest& m);
ImageManifest read_manifest_csv(const std::string& path);

// Frame access behind the manifest: directory-backed or in-memory.
class ImageStore {
public:
    virtual ~ImageStore() = default;
    virtual SkyImage load(const ManifestEntry& e) const = 0;
};

class DirImageStore final : public ImageStore {
public:
    explicit DirImageStore(std::string base_dir) : base_dir_(std::move(base_dir)) {}
    SkyImage load(const ManifestEntry& e) const override;

private:
    std::string base_dir_;
};

class MemoryImageStore final : public ImageStore {
public:
    // Entry paths are keys into the map.
    void put(const std::string& key, SkyImage img);
    SkyImage load(const ManifestEntry& e) const override;

private:
    std::vector<std::pair<std::string, SkyImage>> items_;  // sorted by key
};

}  // namespace skynow
