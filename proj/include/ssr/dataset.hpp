#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ssr/hypercube.hpp"
#include "ssr/rgbsynth.hpp"
#include "ssr/tensor.hpp"

namespace ssr {

enum class Split { train, test };
std::string split_to_string(Split s);
Split split_from_string(const std::string& s);

enum class SplitAxis { columns, rows };
std::string axis_to_string(SplitAxis a);
SplitAxis axis_from_string(const std::string& s);

// Geographic half-split of one image axis: train pixels [0, cut), test
// pixels [cut, extent).
struct SplitRegion {
    SplitAxis axis = SplitAxis::columns;
    int cut = 0;
    int extent = 0;
};

// cut = round(fraction * extent), clamped to [1, extent - 1].
SplitRegion geographic_split(int extent, double fraction, SplitAxis axis);

// One paired sample: 3xSxS input and 31xSxS target, both in [0,1].
struct PatchPair {
    nn::Tensor<float> rgb;
    nn::Tensor<float> target;
    int row = 0;  // origin in the source image
    int col = 0;
    Split tag = Split::train;
};

struct PatchSet {
    int patch_size = 0;
    std::uint64_t seed = 0;
    std::string source_rgb;
    std::string source_hsi;
    std::vector<double> wavelengths;  // target band centers, carried for inference
    std::vector<PatchPair> pairs;

    size_t count(Split tag) const;
};

// Uniform random patch origins (with replacement) drawn from a single seeded
// stream, train patches first; footprints stay strictly inside their split
// interval. Patches are copies of the source data.
PatchSet extract_patches(const RGBImage& rgb, const SpectralCube& hsi, const SplitRegion& region,
                         int size, int n_train, int n_test, std::uint64_t seed);

// Brute-force rectangle-intersection audit: number of (train, test) pairs
// whose SxS footprints overlap. A valid PatchSet yields 0.
int audit_split_overlaps(const PatchSet& patches);

// Directory layout: manifest.json plus two cube containers per patch (the
// rgb input and the 31-band target live on different wavelength grids, so
// they cannot share one container).
void save_patchset(const PatchSet& patches, const std::filesystem::path& dir);
PatchSet load_patchset(const std::filesystem::path& dir);

struct CropRecord {
    int width = 0;   // original size to crop back to
    int height = 0;
};

// Reflect-pads (edge-inclusive mirror) right and bottom until both
// dimensions are divisible by `multiple`.
std::pair<RGBImage, CropRecord> pad_to_multiple(const RGBImage& rgb, int multiple);

// Drops the padded rows/columns introduced by pad_to_multiple.
nn::Tensor<float> crop_tensor(const nn::Tensor<float>& t, const CropRecord& record);

// Layout adapters: RGBImage and SpectralCube payloads are already
// channel/band-major, so these are plain copies with shape bookkeeping.
nn::Tensor<float> tensor_from_rgb(const RGBImage& rgb);
RGBImage rgb_from_tensor(const nn::Tensor<float>& t);
nn::Tensor<float> tensor_from_cube(const SpectralCube& cube);
SpectralCube cube_from_tensor(const nn::Tensor<float>& t, const std::vector<double>& wavelengths);

}  // namespace ssr
