#include "ssr/hypercube.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ssr/rng.hpp"

namespace ssr {

using nlohmann::json;

std::string units_to_string(Units u) {
    switch (u) {
        case Units::radiance: return "radiance_W_m2_sr_um";
        case Units::normalized: return "normalized_unit";
        case Units::label: return "label";
    }
    throw ValidationError("unknown units enum value");
}

Units units_from_string(const std::string& s) {
    if (s == "radiance_W_m2_sr_um") return Units::radiance;
    if (s == "normalized_unit") return Units::normalized;
    if (s == "label") return Units::label;
    throw ValidationError("unknown units tag: '" + s + "'");
}

void SpectralCube::validate() const {
    if (width < 1 || height < 1 || bands < 1)
        throw ValidationError("cube: dimensions must be positive");
    if (static_cast<int>(wavelengths.size()) != bands)
        throw ValidationError("cube: wavelength count " + std::to_string(wavelengths.size()) +
                              " != bands " + std::to_string(bands));
    for (int b = 1; b < bands; ++b)
        if (!(wavelengths[b] > wavelengths[b - 1]))
            throw ValidationError("cube: wavelengths not strictly increasing at band " +
                                  std::to_string(b));
    if (data.size() != static_cast<size_t>(width) * height * bands)
        throw ValidationError("cube: data length != width*height*bands");
    if (units == Units::normalized) {
        for (float s : data)
            if (!(s >= 0.0f && s <= 1.0f))
                throw ValidationError("cube: normalized sample outside [0,1]");
    }
}

namespace {

void write_le_f32(std::ofstream& out, const std::vector<float>& v, const std::string& path) {
    static_assert(sizeof(float) == 4);
    if constexpr (std::endian::native == std::endian::little) {
        out.write(reinterpret_cast<const char*>(v.data()),
                  static_cast<std::streamsize>(v.size() * 4));
    } else {
        for (float f : v) {
            std::uint32_t u;
            std::memcpy(&u, &f, 4);
            char b[4] = {char(u), char(u >> 8), char(u >> 16), char(u >> 24)};
            out.write(b, 4);
        }
    }
    if (!out) throw IoError("failed writing raw payload: " + path);
}

std::vector<float> read_le_f32(std::ifstream& in, size_t count, const std::string& path) {
    std::vector<float> v(count);
    if constexpr (std::endian::native == std::endian::little) {
        in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(count * 4));
    } else {
        for (size_t i = 0; i < count; ++i) {
            unsigned char b[4];
            in.read(reinterpret_cast<char*>(b), 4);
            std::uint32_t u = std::uint32_t(b[0]) | std::uint32_t(b[1]) << 8 |
                              std::uint32_t(b[2]) << 16 | std::uint32_t(b[3]) << 24;
            std::memcpy(&v[i], &u, 4);
        }
    }
    if (!in) throw IoError("failed reading raw payload: " + path);
    return v;
}

}  // namespace

void save_cube(const SpectralCube& cube, const std::filesystem::path& path) {
    cube.validate();
    for (float s : cube.data)
        if (!std::isfinite(s))
            throw ValidationError("save_cube: non-finite sample, refusing to write " +
                                  path.string());

    json header;
    header["width"] = cube.width;
    header["height"] = cube.height;
    header["bands"] = cube.bands;
    header["wavelengths"] = cube.wavelengths;
    header["units"] = units_to_string(cube.units);
    if (cube.units == Units::normalized) header["radiance_ceiling"] = cube.radiance_ceiling;
    header["dtype"] = "float32";
    header["interleave"] = "bsq";
    header["byte_order"] = "little-endian";

    auto jpath = path.string() + ".json";
    auto rpath = path.string() + ".raw";
    {
        std::ofstream js(jpath);
        if (!js) throw IoError("cannot open for writing: " + jpath);
        js << header.dump(2) << "\n";
        if (!js) throw IoError("failed writing header: " + jpath);
    }
    std::ofstream raw(rpath, std::ios::binary);
    if (!raw) throw IoError("cannot open for writing: " + rpath);
    write_le_f32(raw, cube.data, rpath);
}

SpectralCube load_cube(const std::filesystem::path& path) {
    auto jpath = path.string() + ".json";
    auto rpath = path.string() + ".raw";

    std::ifstream js(jpath);
    if (!js) throw IoError("cannot open header: " + jpath);
    json header;
    try {
        js >> header;
    } catch (const json::exception& e) {
        throw ValidationError("malformed header " + jpath + ": " + e.what());
    }

    SpectralCube cube;
    try {
        cube.width = header.at("width").get<int>();
        cube.height = header.at("height").get<int>();
        cube.bands = header.at("bands").get<int>();
        cube.wavelengths = header.at("wavelengths").get<std::vector<double>>();
        cube.units = units_from_string(header.at("units").get<std::string>());
        if (header.contains("radiance_ceiling"))
            cube.radiance_ceiling = header.at("radiance_ceiling").get<double>();
        const auto dtype = header.at("dtype").get<std::string>();
        const auto interleave = header.at("interleave").get<std::string>();
        const auto byte_order = header.at("byte_order").get<std::string>();
        if (dtype != "float32") throw ValidationError("unsupported dtype: " + dtype);
        if (interleave != "bsq") throw ValidationError("unsupported interleave: " + interleave);
        if (byte_order != "little-endian")
            throw ValidationError("unsupported byte order: " + byte_order);
    } catch (const json::exception& e) {
        throw ValidationError("header " + jpath + " missing/invalid field: " + e.what());
    }

    if (cube.width < 1 || cube.height < 1 || cube.bands < 1)
        throw ValidationError("header " + jpath + ": non-positive dimensions");

    std::ifstream raw(rpath, std::ios::binary | std::ios::ate);
    if (!raw) throw IoError("cannot open raw payload: " + rpath);
    const auto actual = static_cast<std::uint64_t>(raw.tellg());
    const auto expected = static_cast<std::uint64_t>(cube.width) * cube.height * cube.bands * 4;
    if (actual != expected)
        throw ValidationError("size mismatch for " + rpath + ": header implies " +
                              std::to_string(expected) + " bytes, file has " +
                              std::to_string(actual));
    raw.seekg(0);
    cube.data = read_le_f32(raw, expected / 4, rpath);
    cube.validate();
    return cube;
}

void save_labels(const LabelMap& labels, const std::filesystem::path& path) {
    SpectralCube cube;
    cube.width = labels.width;
    cube.height = labels.height;
    cube.bands = 1;
    cube.wavelengths = {0.0};
    cube.units = Units::label;
    cube.data.resize(labels.ids.size());
    std::transform(labels.ids.begin(), labels.ids.end(), cube.data.begin(),
                   [](std::int32_t id) { return static_cast<float>(id); });
    save_cube(cube, path);
}

LabelMap load_labels(const std::filesystem::path& path) {
    SpectralCube cube = load_cube(path);
    if (cube.units != Units::label || cube.bands != 1)
        throw ValidationError("not a label container: " + path.string());
    LabelMap labels;
    labels.width = cube.width;
    labels.height = cube.height;
    labels.ids.resize(cube.data.size());
    std::transform(cube.data.begin(), cube.data.end(), labels.ids.begin(),
                   [](float f) { return static_cast<std::int32_t>(std::lround(f)); });
    return labels;
}

SpectralCube resample_bands(const SpectralCube& cube, const std::vector<double>& target_centers,
                            double half_window) {
    cube.validate();
    if (target_centers.empty()) throw ValidationError("resample_bands: no target centers");
    for (size_t b = 1; b < target_centers.size(); ++b)
        if (!(target_centers[b] > target_centers[b - 1]))
            throw ValidationError("resample_bands: target centers not strictly increasing");

    // Source band index lists per target window [c - hw, c + hw).
    std::vector<std::vector<int>> members(target_centers.size());
    for (size_t t = 0; t < target_centers.size(); ++t) {
        for (int b = 0; b < cube.bands; ++b) {
            double w = cube.wavelengths[b];
            if (w >= target_centers[t] - half_window && w < target_centers[t] + half_window)
                members[t].push_back(b);
        }
        if (members[t].empty()) {
            std::ostringstream os;
            os << "resample_bands: no source band inside [" << target_centers[t] - half_window
               << ", " << target_centers[t] + half_window << ") for target center "
               << target_centers[t];
            throw ValidationError(os.str());
        }
    }

    SpectralCube out;
    out.width = cube.width;
    out.height = cube.height;
    out.bands = static_cast<int>(target_centers.size());
    out.wavelengths = target_centers;
    out.units = cube.units;
    out.radiance_ceiling = cube.radiance_ceiling;
    out.data.resize(out.plane() * out.bands);

    const size_t plane = cube.plane();
    for (size_t t = 0; t < target_centers.size(); ++t) {
        float* dst = out.data.data() + t * plane;
        const double inv = 1.0 / static_cast<double>(members[t].size());
        std::vector<double> acc(plane, 0.0);
        for (int b : members[t]) {
            const float* src = cube.data.data() + static_cast<size_t>(b) * plane;
            for (size_t i = 0; i < plane; ++i) acc[i] += src[i];
        }
        for (size_t i = 0; i < plane; ++i) dst[i] = static_cast<float>(acc[i] * inv);
    }
    return out;
}

SpectralCube normalize_cube(const SpectralCube& cube, double radiance_ceiling) {
    cube.validate();
    if (!(radiance_ceiling > 0.0))
        throw ValidationError("normalize_cube: ceiling must be positive");
    // Accepting already-normalized cubes keeps the op idempotent at ceiling 1.
    if (cube.units == Units::label)
        throw ValidationError("normalize_cube: cube holds labels, not radiance");

    SpectralCube out = cube;
    out.units = Units::normalized;
    out.radiance_ceiling = radiance_ceiling;
    for (float& s : out.data) {
        double v = static_cast<double>(s) / radiance_ceiling;
        s = static_cast<float>(std::clamp(v, 0.0, 1.0));
    }
    return out;
}

double MaterialSpec::evaluate(double wavelength_nm) const {
    double v = offset;
    for (const auto& b : bumps) {
        double d = (wavelength_nm - b.center_nm) / b.width_nm;
        v += b.amplitude * std::exp(-0.5 * d * d);
    }
    return v;
}

std::vector<double> WavelengthGrid::centers() const {
    std::vector<double> c(count);
    for (int i = 0; i < count; ++i) c[i] = start_nm + step_nm * i;
    return c;
}

void SceneSpec::validate() const {
    if (width < 1 || height < 1) throw ValidationError("scene: dimensions must be positive");
    if (materials.size() < 2) throw ValidationError("scene: n_materials must be >= 2");
    if (grid.count < 2) throw ValidationError("scene: wavelength grid count must be >= 2");
    if (!(grid.step_nm > 0.0)) throw ValidationError("scene: grid step must be positive");
    if (n_rectangles < 0) throw ValidationError("scene: n_rectangles must be >= 0");
    if (illumination_scale_px < 1)
        throw ValidationError("scene: illumination scale must be >= 1 pixel");
    if (noise_sigma < 0.0) throw ValidationError("scene: noise sigma must be >= 0");
    for (size_t m = 0; m < materials.size(); ++m) {
        if (materials[m].bumps.empty() || materials[m].bumps.size() > 3)
            throw ValidationError("scene: material " + std::to_string(m) +
                                  " must have 1..3 bumps");
        for (double w : grid.centers()) {
            double v = materials[m].evaluate(w);
            if (!(v >= 0.0 && v <= 1.0))
                throw ValidationError("scene: material " + std::to_string(m) +
                                      " signature leaves [0,1] at " + std::to_string(w) + " nm");
        }
    }
}

std::vector<double> illumination_field(const SceneSpec& spec) {
    RngStream rng = derive_stream(spec.seed, "scene/illumination");
    const int scale = spec.illumination_scale_px;
    const int ncx = (spec.width + scale - 1) / scale + 1;
    const int ncy = (spec.height + scale - 1) / scale + 1;
    std::vector<double> coarse(static_cast<size_t>(ncx) * ncy);
    for (double& c : coarse) c = rng.uniform(0.7, 1.0);

    std::vector<double> field(static_cast<size_t>(spec.width) * spec.height);
    for (int r = 0; r < spec.height; ++r) {
        double v = static_cast<double>(r) / scale;
        int i0 = std::min(static_cast<int>(v), ncy - 2);
        double fv = v - i0;
        for (int c = 0; c < spec.width; ++c) {
            double u = static_cast<double>(c) / scale;
            int j0 = std::min(static_cast<int>(u), ncx - 2);
            double fu = u - j0;
            double top = coarse[static_cast<size_t>(i0) * ncx + j0] * (1 - fu) +
                         coarse[static_cast<size_t>(i0) * ncx + j0 + 1] * fu;
            double bot = coarse[static_cast<size_t>(i0 + 1) * ncx + j0] * (1 - fu) +
                         coarse[static_cast<size_t>(i0 + 1) * ncx + j0 + 1] * fu;
            field[static_cast<size_t>(r) * spec.width + c] = top * (1 - fv) + bot * fv;
        }
    }
    return field;
}

Scene generate_scene(const SceneSpec& spec) {
    spec.validate();

    // Rectangle layout. Later rectangles overwrite earlier ones.
    LabelMap labels;
    labels.width = spec.width;
    labels.height = spec.height;
    labels.ids.assign(static_cast<size_t>(spec.width) * spec.height, 0);
    {
        RngStream rng = derive_stream(spec.seed, "scene/layout");
        const auto n_mat = static_cast<std::int64_t>(spec.materials.size());
        for (int k = 0; k < spec.n_rectangles; ++k) {
            // Two random corners; the covered area is the half-open box
            // between them, so a rectangle whose corners share a coordinate
            // covers nothing.
            auto x0 = rng.uniform_int(0, spec.width);
            auto x1 = rng.uniform_int(0, spec.width);
            auto y0 = rng.uniform_int(0, spec.height);
            auto y1 = rng.uniform_int(0, spec.height);
            auto mat = rng.uniform_int(1, n_mat - 1);
            if (x1 < x0) std::swap(x0, x1);
            if (y1 < y0) std::swap(y0, y1);
            for (auto r = y0; r < y1; ++r)
                for (auto c = x0; c < x1; ++c)
                    labels.ids[static_cast<size_t>(r) * spec.width + c] =
                        static_cast<std::int32_t>(mat);
        }
    }

    const auto centers = spec.grid.centers();
    std::vector<std::vector<double>> signatures(spec.materials.size());
    for (size_t m = 0; m < spec.materials.size(); ++m) {
        signatures[m].resize(centers.size());
        for (size_t b = 0; b < centers.size(); ++b)
            signatures[m][b] = spec.materials[m].evaluate(centers[b]);
    }

    const std::vector<double> illum = illumination_field(spec);

    SpectralCube cube;
    cube.width = spec.width;
    cube.height = spec.height;
    cube.bands = spec.grid.count;
    cube.wavelengths = centers;
    cube.units = Units::normalized;
    cube.radiance_ceiling = 1.0;
    cube.data.resize(cube.plane() * cube.bands);

    RngStream noise = derive_stream(spec.seed, "scene/noise");
    const size_t plane = cube.plane();
    for (int b = 0; b < cube.bands; ++b) {
        float* dst = cube.data.data() + static_cast<size_t>(b) * plane;
        for (size_t p = 0; p < plane; ++p) {
            double v = signatures[static_cast<size_t>(labels.ids[p])][b] * illum[p];
            if (spec.noise_sigma > 0.0) v += noise.normal(0.0, spec.noise_sigma);
            dst[p] = static_cast<float>(std::clamp(v, 0.0, 1.0));
        }
    }
    return Scene{std::move(cube), std::move(labels)};
}

std::vector<MaterialSpec> default_materials(int n, const WavelengthGrid& grid) {
    if (n < 2) throw ValidationError("default_materials: need at least 2 materials");
    const double lo = grid.start_nm;
    const double hi = grid.start_nm + grid.step_nm * (grid.count - 1);
    std::vector<MaterialSpec> mats(n);
    // Background: flat-ish with a broad mid-spectrum bump.
    mats[0].offset = 0.15;
    mats[0].bumps = {{0.5 * (lo + hi), 0.35 * (hi - lo), 0.2}};
    for (int m = 1; m < n; ++m) {
        MaterialSpec& mat = mats[m];
        mat.offset = 0.08 + 0.04 * (m % 3);
        // Peak positions sweep the grid so materials stay spectrally distinct.
        double c1 = lo + (hi - lo) * (0.15 + 0.7 * (m - 1) / std::max(1, n - 2));
        mat.bumps = {{c1, 0.08 * (hi - lo), 0.55}};
        if (m % 2 == 0)
            mat.bumps.push_back({std::min(hi, c1 + 0.3 * (hi - lo)), 0.05 * (hi - lo), 0.3});
    }
    return mats;
}

}  // namespace ssr
