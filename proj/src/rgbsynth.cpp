#include "ssr/rgbsynth.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace ssr {

void CameraSensitivity::validate() const {
    if (wavelengths.empty()) throw ValidationError("csf: empty table");
    if (weights.size() != wavelengths.size())
        throw ValidationError("csf: weight rows != wavelength count");
    for (size_t b = 1; b < wavelengths.size(); ++b)
        if (!(wavelengths[b] > wavelengths[b - 1]))
            throw ValidationError("csf: wavelengths not strictly increasing at row " +
                                  std::to_string(b));
    std::array<bool, 3> any_positive = {false, false, false};
    for (const auto& row : weights)
        for (int k = 0; k < 3; ++k) {
            if (!(std::isfinite(row[k]) && row[k] >= 0.0))
                throw ValidationError("csf: weights must be finite and non-negative");
            if (row[k] > 0.0) any_positive[k] = true;
        }
    static const char* channel_names[3] = {"red", "green", "blue"};
    for (int k = 0; k < 3; ++k)
        if (!any_positive[k])
            throw ValidationError(std::string("csf: column '") + channel_names[k] +
                                  "' has no positive weight");
}

void RGBImage::validate() const {
    if (width < 1 || height < 1) throw ValidationError("rgb: dimensions must be positive");
    if (data.size() != plane() * 3) throw ValidationError("rgb: data length != 3*width*height");
    for (float s : data)
        if (!(s >= 0.0f && s <= 1.0f)) throw ValidationError("rgb: sample outside [0,1]");
}

namespace {

double parse_cell(const std::string& cell, int line_no, const char* what) {
    double v = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last)
        throw ValidationError("csf: line " + std::to_string(line_no) + ": non-numeric " + what +
                              " cell '" + cell + "'");
    return v;
}

std::vector<std::string> split_csv_line(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

}  // namespace

CameraSensitivity load_csf(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open csf table: " + path.string());

    std::string line;
    if (!std::getline(in, line)) throw ValidationError("csf: empty file " + path.string());
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "wavelength_nm,red,green,blue")
        throw ValidationError("csf: bad header '" + line +
                              "', expected 'wavelength_nm,red,green,blue'");

    CameraSensitivity csf;
    csf.name = path.stem().string();
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto cells = split_csv_line(line);
        if (cells.size() != 4)
            throw ValidationError("csf: line " + std::to_string(line_no) + ": expected 4 cells, got " +
                                  std::to_string(cells.size()));
        csf.wavelengths.push_back(parse_cell(cells[0], line_no, "wavelength"));
        csf.weights.push_back({parse_cell(cells[1], line_no, "red"),
                               parse_cell(cells[2], line_no, "green"),
                               parse_cell(cells[3], line_no, "blue")});
    }
    csf.validate();
    return csf;
}

CameraSensitivity builtin_csf(const std::vector<double>& band_centers) {
    if (band_centers.empty()) throw ValidationError("builtin_csf: no band centers");
    constexpr double kFwhm = 60.0;
    const double sigma = kFwhm / (2.0 * std::sqrt(2.0 * std::log(2.0)));
    constexpr double centers[3] = {650.0, 550.0, 450.0};  // r, g, b

    CameraSensitivity csf;
    csf.name = "builtin";
    csf.wavelengths = band_centers;
    csf.weights.resize(band_centers.size());
    for (size_t b = 0; b < band_centers.size(); ++b)
        for (int k = 0; k < 3; ++k) {
            double d = (band_centers[b] - centers[k]) / sigma;
            csf.weights[b][k] = std::exp(-0.5 * d * d);
        }
    csf.validate();
    return csf;
}

RGBImage synthesize_rgb(const SpectralCube& cube, const CameraSensitivity& csf) {
    cube.validate();
    csf.validate();
    if (cube.units != Units::normalized)
        throw ValidationError("synthesize_rgb: cube must be normalized to [0,1]");
    auto grids_match = [&] {
        if (cube.wavelengths.size() != csf.wavelengths.size()) return false;
        for (size_t b = 0; b < csf.wavelengths.size(); ++b)
            if (std::abs(cube.wavelengths[b] - csf.wavelengths[b]) > 1e-9) return false;
        return true;
    };
    if (!grids_match()) {
        auto fmt = [](const std::vector<double>& v) {
            std::ostringstream os;
            for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
            return os.str();
        };
        throw ValidationError("synthesize_rgb: wavelength grids differ; cube = [" +
                              fmt(cube.wavelengths) + "], csf = [" + fmt(csf.wavelengths) + "]");
    }

    double col_sum[3] = {0, 0, 0};
    for (const auto& row : csf.weights)
        for (int k = 0; k < 3; ++k) col_sum[k] += row[k];

    RGBImage rgb;
    rgb.width = cube.width;
    rgb.height = cube.height;
    rgb.data.resize(rgb.plane() * 3);
    const size_t plane = cube.plane();
    for (int k = 0; k < 3; ++k) {
        float* dst = rgb.data.data() + static_cast<size_t>(k) * plane;
        std::vector<double> acc(plane, 0.0);
        for (int b = 0; b < cube.bands; ++b) {
            const double w = csf.weights[static_cast<size_t>(b)][k];
            if (w == 0.0) continue;
            const float* src = cube.data.data() + static_cast<size_t>(b) * plane;
            for (size_t i = 0; i < plane; ++i) acc[i] += w * src[i];
        }
        for (size_t i = 0; i < plane; ++i)
            dst[i] = static_cast<float>(std::clamp(acc[i] / col_sum[k], 0.0, 1.0));
    }
    return rgb;
}

void save_rgb(const RGBImage& rgb, const std::filesystem::path& path) {
    rgb.validate();
    SpectralCube cube;
    cube.width = rgb.width;
    cube.height = rgb.height;
    cube.bands = 3;
    cube.wavelengths = {450.0, 550.0, 650.0};  // b, g, r planes in that order
    cube.units = Units::normalized;
    cube.radiance_ceiling = 1.0;
    cube.data.resize(rgb.data.size());
    const size_t plane = rgb.plane();
    for (int k = 0; k < 3; ++k)
        std::copy_n(rgb.data.begin() + static_cast<size_t>(k) * plane, plane,
                    cube.data.begin() + static_cast<size_t>(2 - k) * plane);
    save_cube(cube, path);
}

RGBImage load_rgb(const std::filesystem::path& path) {
    SpectralCube cube = load_cube(path);
    if (cube.bands != 3 || cube.units != Units::normalized)
        throw ValidationError("not an rgb container: " + path.string());
    RGBImage rgb;
    rgb.width = cube.width;
    rgb.height = cube.height;
    rgb.data.resize(cube.data.size());
    const size_t plane = rgb.plane();
    for (int k = 0; k < 3; ++k)
        std::copy_n(cube.data.begin() + static_cast<size_t>(2 - k) * plane, plane,
                    rgb.data.begin() + static_cast<size_t>(k) * plane);
    return rgb;
}

}  // namespace ssr
