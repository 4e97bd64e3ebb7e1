#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "ssr/hypercube.hpp"

namespace ssr {

// Per-wavelength relative efficiency of a trichromatic sensor. Column order
// is red, green, blue.
struct CameraSensitivity {
    std::vector<double> wavelengths;               // nm, strictly increasing
    std::vector<std::array<double, 3>> weights;    // one row per band, >= 0
    std::string name;

    void validate() const;
};

// 3 x H x W image in [0,1], channel order r, g, b.
struct RGBImage {
    int width = 0;
    int height = 0;
    std::vector<float> data;  // indexed (channel, row, col)

    size_t plane() const { return static_cast<size_t>(width) * height; }
    float& at(int c, int row, int col) {
        return data[(static_cast<size_t>(c) * height + row) * width + col];
    }
    const float& at(int c, int row, int col) const {
        return data[(static_cast<size_t>(c) * height + row) * width + col];
    }

    void validate() const;
};

// Parses a CSV with header `wavelength_nm,red,green,blue`.
CameraSensitivity load_csf(const std::filesystem::path& path);

// Three Gaussian channel responses (centers 650/550/450 nm, FWHM 60 nm)
// sampled on the given band centers, so the pipeline runs without any
// external sensor table.
CameraSensitivity builtin_csf(const std::vector<double>& band_centers);

// Per pixel and channel: the weighted mean of the band values under the
// channel's sensitivity column. A [0,1] cube therefore yields a [0,1] image.
RGBImage synthesize_rgb(const SpectralCube& cube, const CameraSensitivity& csf);

// RGB images persist through the cube container with 3 bands tagged with the
// nominal channel centers {450, 550, 650} (stored blue-to-red so the
// wavelength axis stays increasing).
void save_rgb(const RGBImage& rgb, const std::filesystem::path& path);
RGBImage load_rgb(const std::filesystem::path& path);

}  // namespace ssr
