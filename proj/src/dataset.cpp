#include "ssr/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "ssr/rng.hpp"

namespace ssr {

using nlohmann::json;

std::string split_to_string(Split s) { return s == Split::train ? "train" : "test"; }

Split split_from_string(const std::string& s) {
    if (s == "train") return Split::train;
    if (s == "test") return Split::test;
    throw ValidationError("unknown split tag: '" + s + "'");
}

std::string axis_to_string(SplitAxis a) { return a == SplitAxis::columns ? "columns" : "rows"; }

SplitAxis axis_from_string(const std::string& s) {
    if (s == "columns") return SplitAxis::columns;
    if (s == "rows") return SplitAxis::rows;
    throw ValidationError("unknown split axis: '" + s + "'");
}

SplitRegion geographic_split(int extent, double fraction, SplitAxis axis) {
    if (extent < 2) throw ValidationError("geographic_split: extent must be >= 2");
    if (!(fraction > 0.0 && fraction < 1.0))
        throw ValidationError("geographic_split: fraction must lie in (0,1)");
    int cut = static_cast<int>(std::lround(fraction * extent));
    cut = std::clamp(cut, 1, extent - 1);
    return SplitRegion{axis, cut, extent};
}

size_t PatchSet::count(Split tag) const {
    return static_cast<size_t>(
        std::count_if(pairs.begin(), pairs.end(), [&](const PatchPair& p) { return p.tag == tag; }));
}

namespace {

struct OriginBox {
    int row_lo, row_hi, col_lo, col_hi;  // inclusive origin ranges
};

OriginBox origin_box(const SplitRegion& region, int other_extent, int size, Split tag) {
    const int lo = tag == Split::train ? 0 : region.cut;
    const int hi = tag == Split::train ? region.cut : region.extent;  // exclusive
    const int along_lo = lo;
    const int along_hi = hi - size;  // inclusive
    if (along_hi < along_lo)
        throw ValidationError("extract_patches: patch size " + std::to_string(size) +
                              " exceeds the " + split_to_string(tag) + " interval extent " +
                              std::to_string(hi - lo));
    const int cross_hi = other_extent - size;
    if (cross_hi < 0)
        throw ValidationError("extract_patches: patch size " + std::to_string(size) +
                              " exceeds the image extent " + std::to_string(other_extent));
    if (region.axis == SplitAxis::columns)
        return OriginBox{0, cross_hi, along_lo, along_hi};
    return OriginBox{along_lo, along_hi, 0, cross_hi};
}

PatchPair cut_patch(const RGBImage& rgb, const SpectralCube& hsi, int row, int col, int size,
                    Split tag) {
    PatchPair p;
    p.row = row;
    p.col = col;
    p.tag = tag;
    p.rgb = nn::Tensor<float>(3, size, size);
    p.target = nn::Tensor<float>(hsi.bands, size, size);
    for (int c = 0; c < 3; ++c)
        for (int y = 0; y < size; ++y)
            for (int x = 0; x < size; ++x) p.rgb.at(c, y, x) = rgb.at(c, row + y, col + x);
    for (int b = 0; b < hsi.bands; ++b)
        for (int y = 0; y < size; ++y)
            for (int x = 0; x < size; ++x) p.target.at(b, y, x) = hsi.at(b, row + y, col + x);
    return p;
}

}  // namespace

PatchSet extract_patches(const RGBImage& rgb, const SpectralCube& hsi, const SplitRegion& region,
                         int size, int n_train, int n_test, std::uint64_t seed) {
    rgb.validate();
    hsi.validate();
    if (rgb.width != hsi.width || rgb.height != hsi.height)
        throw ValidationError("extract_patches: rgb and cube dimensions differ");
    if (hsi.bands != 31)
        throw ValidationError("extract_patches: expected a 31-band target cube, got " +
                              std::to_string(hsi.bands));
    if (hsi.units != Units::normalized)
        throw ValidationError("extract_patches: target cube must be normalized to [0,1]");
    if (size < 1) throw ValidationError("extract_patches: patch size must be >= 1");
    if (n_train < 0 || n_test < 0)
        throw ValidationError("extract_patches: patch counts must be >= 0");
    const int axis_extent = region.axis == SplitAxis::columns ? rgb.width : rgb.height;
    if (region.extent != axis_extent || !(region.cut > 0 && region.cut < region.extent))
        throw ValidationError("extract_patches: split region does not match the image");

    PatchSet set;
    set.patch_size = size;
    set.seed = seed;
    set.wavelengths = hsi.wavelengths;
    set.pairs.reserve(static_cast<size_t>(n_train) + n_test);

    RngStream rng = derive_stream(seed, "patches");
    for (Split tag : {Split::train, Split::test}) {
        const int n = tag == Split::train ? n_train : n_test;
        if (n == 0) continue;
        const int other = region.axis == SplitAxis::columns ? rgb.height : rgb.width;
        const OriginBox box = origin_box(region, other, size, tag);
        for (int i = 0; i < n; ++i) {
            // Draw order is fixed (row, then column) — part of the format.
            int row = static_cast<int>(rng.uniform_int(box.row_lo, box.row_hi));
            int col = static_cast<int>(rng.uniform_int(box.col_lo, box.col_hi));
            set.pairs.push_back(cut_patch(rgb, hsi, row, col, size, tag));
        }
    }
    return set;
}

int audit_split_overlaps(const PatchSet& patches) {
    const int s = patches.patch_size;
    int overlaps = 0;
    for (size_t i = 0; i < patches.pairs.size(); ++i)
        for (size_t j = i + 1; j < patches.pairs.size(); ++j) {
            const PatchPair& a = patches.pairs[i];
            const PatchPair& b = patches.pairs[j];
            if (a.tag == b.tag) continue;
            const bool rows = a.row < b.row + s && b.row < a.row + s;
            const bool cols = a.col < b.col + s && b.col < a.col + s;
            if (rows && cols) ++overlaps;
        }
    return overlaps;
}

void save_patchset(const PatchSet& patches, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create patch directory " + dir.string() + ": " + ec.message());

    json manifest;
    manifest["patch_size"] = patches.patch_size;
    manifest["seed"] = patches.seed;
    manifest["source"] = {{"rgb", patches.source_rgb}, {"hsi", patches.source_hsi}};
    manifest["wavelengths"] = patches.wavelengths;
    manifest["patches"] = json::array();

    char name[32];
    for (size_t i = 0; i < patches.pairs.size(); ++i) {
        const PatchPair& p = patches.pairs[i];
        std::snprintf(name, sizeof(name), "p%05zu", i);
        const std::string base(name);

        save_rgb(rgb_from_tensor(p.rgb), dir / (base + "_rgb"));
        save_cube(cube_from_tensor(p.target, patches.wavelengths), dir / (base + "_hsi"));

        manifest["patches"].push_back({{"rgb", base + "_rgb"},
                                       {"hsi", base + "_hsi"},
                                       {"origin", {p.row, p.col}},
                                       {"split", split_to_string(p.tag)}});
    }

    std::ofstream out(dir / "manifest.json");
    if (!out) throw IoError("cannot write manifest under " + dir.string());
    out << manifest.dump(2) << "\n";
    if (!out) throw IoError("failed writing manifest under " + dir.string());
}

PatchSet load_patchset(const std::filesystem::path& dir) {
    std::ifstream in(dir / "manifest.json");
    if (!in) throw IoError("cannot open manifest: " + (dir / "manifest.json").string());
    json manifest;
    try {
        in >> manifest;
    } catch (const json::exception& e) {
        throw ValidationError("malformed patch manifest in " + dir.string() + ": " + e.what());
    }

    PatchSet set;
    try {
        set.patch_size = manifest.at("patch_size").get<int>();
        set.seed = manifest.at("seed").get<std::uint64_t>();
        set.source_rgb = manifest.at("source").at("rgb").get<std::string>();
        set.source_hsi = manifest.at("source").at("hsi").get<std::string>();
        set.wavelengths = manifest.at("wavelengths").get<std::vector<double>>();
        for (const auto& entry : manifest.at("patches")) {
            PatchPair p;
            p.row = entry.at("origin").at(0).get<int>();
            p.col = entry.at("origin").at(1).get<int>();
            p.tag = split_from_string(entry.at("split").get<std::string>());
            p.rgb = tensor_from_rgb(load_rgb(dir / entry.at("rgb").get<std::string>()));
            SpectralCube cube = load_cube(dir / entry.at("hsi").get<std::string>());
            p.target = tensor_from_cube(cube);
            if (p.rgb.h != set.patch_size || p.rgb.w != set.patch_size ||
                p.target.h != set.patch_size || p.target.w != set.patch_size)
                throw ValidationError("patch size mismatch in " + dir.string());
            set.pairs.push_back(std::move(p));
        }
    } catch (const json::exception& e) {
        throw ValidationError("patch manifest " + dir.string() + " missing/invalid field: " +
                              e.what());
    }
    return set;
}

std::pair<RGBImage, CropRecord> pad_to_multiple(const RGBImage& rgb, int multiple) {
    rgb.validate();
    if (multiple < 1) throw ValidationError("pad_to_multiple: multiple must be >= 1");

    const auto round_up = [multiple](int n) { return ((n + multiple - 1) / multiple) * multiple; };
    const int pw = round_up(rgb.width);
    const int ph = round_up(rgb.height);
    CropRecord record{rgb.width, rgb.height};
    if (pw == rgb.width && ph == rgb.height) return {rgb, record};

    // Edge-inclusive mirror: fold index q into [0, n) with period 2n. A
    // size-1 axis therefore pads out as a constant.
    const auto mirror = [](int q, int n) {
        q %= 2 * n;
        return q < n ? q : 2 * n - 1 - q;
    };

    RGBImage out;
    out.width = pw;
    out.height = ph;
    out.data.resize(static_cast<size_t>(pw) * ph * 3);
    for (int c = 0; c < 3; ++c)
        for (int y = 0; y < ph; ++y)
            for (int x = 0; x < pw; ++x)
                out.at(c, y, x) = rgb.at(c, mirror(y, rgb.height), mirror(x, rgb.width));
    return {std::move(out), record};
}

nn::Tensor<float> crop_tensor(const nn::Tensor<float>& t, const CropRecord& record) {
    if (record.width > t.w || record.height > t.h)
        throw ValidationError("crop_tensor: record larger than tensor");
    nn::Tensor<float> out(t.ch, record.height, record.width);
    for (int c = 0; c < t.ch; ++c)
        for (int y = 0; y < record.height; ++y)
            for (int x = 0; x < record.width; ++x) out.at(c, y, x) = t.at(c, y, x);
    return out;
}

nn::Tensor<float> tensor_from_rgb(const RGBImage& rgb) {
    nn::Tensor<float> t(3, rgb.height, rgb.width);
    t.v = rgb.data;
    return t;
}

RGBImage rgb_from_tensor(const nn::Tensor<float>& t) {
    if (t.ch != 3) throw ValidationError("rgb_from_tensor: expected 3 channels");
    RGBImage rgb;
    rgb.width = t.w;
    rgb.height = t.h;
    rgb.data = t.v;
    return rgb;
}

nn::Tensor<float> tensor_from_cube(const SpectralCube& cube) {
    nn::Tensor<float> t(cube.bands, cube.height, cube.width);
    t.v = cube.data;
    return t;
}

SpectralCube cube_from_tensor(const nn::Tensor<float>& t, const std::vector<double>& wavelengths) {
    SpectralCube cube;
    cube.width = t.w;
    cube.height = t.h;
    cube.bands = t.ch;
    cube.wavelengths = wavelengths;
    cube.units = Units::normalized;
    cube.radiance_ceiling = 1.0;
    cube.data = t.v;
    cube.validate();
    return cube;
}

}  // namespace ssr
