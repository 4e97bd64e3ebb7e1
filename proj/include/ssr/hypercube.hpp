#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ssr/error.hpp"

namespace ssr {

enum class Units { radiance, normalized, label };

std::string units_to_string(Units u);
Units units_from_string(const std::string& s);

// H x W x B radiance image with an explicit wavelength axis. Samples are
// stored band-sequential (BSQ): all of band 0, then band 1, ...
struct SpectralCube {
    int width = 0;
    int height = 0;
    int bands = 0;
    std::vector<double> wavelengths;  // nm, strictly increasing, one per band
    std::vector<float> data;          // indexed (band, row, col)
    Units units = Units::radiance;
    double radiance_ceiling = 0.0;    // scalar used for normalization; meaningful when normalized

    size_t plane() const { return static_cast<size_t>(width) * height; }
    float& at(int band, int row, int col) {
        return data[(static_cast<size_t>(band) * height + row) * width + col];
    }
    const float& at(int band, int row, int col) const {
        return data[(static_cast<size_t>(band) * height + row) * width + col];
    }

    // Throws ValidationError if any invariant fails.
    void validate() const;
};

struct LabelMap {
    int width = 0;
    int height = 0;
    std::vector<std::int32_t> ids;  // row-major material id per pixel

    std::int32_t at(int row, int col) const { return ids[static_cast<size_t>(row) * width + col]; }
};

// One Gaussian bump of a material reflectance model.
struct SignatureBump {
    double center_nm = 550.0;
    double width_nm = 40.0;  // Gaussian sigma
    double amplitude = 0.5;
};

// Material spectrum: offset + sum of 1..3 Gaussian bumps, evaluated per band.
struct MaterialSpec {
    double offset = 0.1;
    std::vector<SignatureBump> bumps;

    double evaluate(double wavelength_nm) const;
};

struct WavelengthGrid {
    double start_nm = 400.0;
    double step_nm = 10.0;
    int count = 31;

    std::vector<double> centers() const;
};

// Deterministic synthetic aerial scene: rectangles of labeled materials over
// a background, a smooth multiplicative illumination field and additive
// Gaussian noise.
struct SceneSpec {
    int width = 128;
    int height = 96;
    std::vector<MaterialSpec> materials;  // >= 2; material 0 is the background
    int n_rectangles = 24;
    int illumination_scale_px = 16;  // coarse-grid cell size of the illumination field
    double noise_sigma = 0.0;
    WavelengthGrid grid;
    std::uint64_t seed = 0;

    void validate() const;
};

// Container I/O: <path>.json header + <path>.raw BSQ float32 little-endian.
void save_cube(const SpectralCube& cube, const std::filesystem::path& path);
SpectralCube load_cube(const std::filesystem::path& path);

void save_labels(const LabelMap& labels, const std::filesystem::path& path);
LabelMap load_labels(const std::filesystem::path& path);

// Boxcar band reduction: output band b is the arithmetic mean of all source
// bands whose centers fall in [c_b - half_window, c_b + half_window).
SpectralCube resample_bands(const SpectralCube& cube, const std::vector<double>& target_centers,
                            double half_window);

// clamp(sample / radiance_ceiling, 0, 1); units become normalized.
SpectralCube normalize_cube(const SpectralCube& cube, double radiance_ceiling);

struct Scene {
    SpectralCube cube;   // normalized units, ceiling 1
    LabelMap labels;
};

Scene generate_scene(const SceneSpec& spec);

// The exact illumination field generate_scene uses (bilinear upsampling of a
// coarse random grid, values in [0.7, 1.0]). Exposed so tests can recombine
// signature x illumination independently.
std::vector<double> illumination_field(const SceneSpec& spec);

// Deterministic material palette used when a scene config lists no materials.
std::vector<MaterialSpec> default_materials(int n, const WavelengthGrid& grid);

}  // namespace ssr
