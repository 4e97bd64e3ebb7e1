#include "ssr/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include <json.hpp>

namespace ssr {

using nlohmann::json;

namespace {

void check_pair(const nn::Tensor<float>& pred, const nn::Tensor<float>& target) {
    if (!pred.same_shape(target))
        throw ValidationError("metric: prediction and target shapes differ");
    if (pred.size() == 0) throw ValidationError("metric: empty tensors");
    for (float v : pred.v)
        if (!(v >= 0.0f && v <= 1.0f)) throw ValidationError("metric: prediction outside [0,1]");
    for (float v : target.v)
        if (!(v >= 0.0f && v <= 1.0f)) throw ValidationError("metric: target outside [0,1]");
}

double mse_unit(const nn::Tensor<float>& pred, const nn::Tensor<float>& target) {
    double acc = 0.0;
    for (size_t i = 0; i < pred.size(); ++i) {
        const double d = static_cast<double>(pred.v[i]) - static_cast<double>(target.v[i]);
        acc += d * d;
    }
    return acc / static_cast<double>(pred.size());
}

std::string shortest(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

}  // namespace

double rmse_8bit(const nn::Tensor<float>& pred, const nn::Tensor<float>& target) {
    check_pair(pred, target);
    return 255.0 * std::sqrt(mse_unit(pred, target));
}

std::optional<double> psnr_unit(const nn::Tensor<float>& pred, const nn::Tensor<float>& target) {
    check_pair(pred, target);
    const double mse = mse_unit(pred, target);
    if (mse == 0.0) return std::nullopt;
    return 10.0 * std::log10(1.0 / mse);
}

EvalReport evaluate(const Predictor& predictor, const PatchSet& patches) {
    EvalReport report;
    report.patch_size = patches.patch_size;

    double sq_acc = 0.0;
    std::uint64_t n_elements = 0;
    for (size_t i = 0; i < patches.pairs.size(); ++i) {
        const PatchPair& pair = patches.pairs[i];
        if (pair.tag != Split::test) continue;
        nn::Tensor<float> pred = predictor(pair.rgb);
        if (!pred.same_shape(pair.target))
            throw ValidationError("evaluate: prediction shape differs from target");

        PatchEval pe;
        pe.patch = i;
        pe.rmse_8bit = rmse_8bit(pred, pair.target);
        pe.psnr_unit = psnr_unit(pred, pair.target);
        report.per_patch.push_back(pe);

        for (size_t e = 0; e < pred.size(); ++e) {
            const double d =
                static_cast<double>(pred.v[e]) - static_cast<double>(pair.target.v[e]);
            sq_acc += d * d;
        }
        n_elements += pred.size();
        ++report.test_patches;
    }
    if (report.test_patches == 0) throw ValidationError("evaluate: the test split is empty");

    const double mse = sq_acc / static_cast<double>(n_elements);
    report.rmse_8bit = 255.0 * std::sqrt(mse);
    report.psnr_unit = mse == 0.0 ? std::nullopt
                                  : std::optional<double>(10.0 * std::log10(1.0 / mse));
    return report;
}

EvalReport evaluate(nn::Generator<float>& generator, const PatchSet& patches) {
    const nn::Mode saved = generator.mode();
    generator.set_mode(nn::Mode::inference);
    EvalReport report =
        evaluate([&](const nn::Tensor<float>& rgb) { return generator.forward(rgb); }, patches);
    generator.set_mode(saved);
    return report;
}

std::string EvalReport::to_json() const {
    json j;
    j["rmse_8bit"] = rmse_8bit;
    j["psnr_unit"] = psnr_unit ? json(*psnr_unit) : json(nullptr);
    j["psnr_infinite"] = !psnr_unit.has_value();
    j["aggregation"] = "global_flatten";
    j["test_patches"] = test_patches;
    j["patch_size"] = patch_size;
    j["per_patch"] = json::array();
    for (const auto& pe : per_patch)
        j["per_patch"].push_back({{"patch", pe.patch},
                                  {"rmse_8bit", pe.rmse_8bit},
                                  {"psnr_unit", pe.psnr_unit ? json(*pe.psnr_unit) : json(nullptr)},
                                  {"psnr_infinite", !pe.psnr_unit.has_value()}});
    return j.dump(2) + "\n";
}

void save_report(const EvalReport& report, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write report: " + path.string());
    out << report.to_json();
    if (!out) throw IoError("failed writing report: " + path.string());
}

Signature sample_signature(const SpectralCube& cube, int row, int col, SignatureSource source) {
    cube.validate();
    if (cube.bands != 31)
        throw ValidationError("sample_signature: expected a 31-band cube, got " +
                              std::to_string(cube.bands));
    if (row < 0 || row >= cube.height || col < 0 || col >= cube.width)
        throw ValidationError("sample_signature: point (" + std::to_string(row) + "," +
                              std::to_string(col) + ") outside " + std::to_string(cube.width) +
                              "x" + std::to_string(cube.height));
    Signature sig;
    sig.row = row;
    sig.col = col;
    sig.source = source;
    sig.wavelengths = cube.wavelengths;
    sig.values.resize(cube.bands);
    for (int b = 0; b < cube.bands; ++b) sig.values[b] = cube.at(b, row, col);
    return sig;
}

Curve interpolate_bspline(const Signature& sig, int samples_per_interval, CurveScale scale) {
    const size_t n = sig.values.size();
    if (n < 4) throw ValidationError("interpolate_bspline: need at least 4 control points");
    if (sig.wavelengths.size() != n)
        throw ValidationError("interpolate_bspline: wavelength/value count mismatch");
    if (samples_per_interval < 1)
        throw ValidationError("interpolate_bspline: samples per interval must be >= 1");
    for (double v : sig.values)
        if (!std::isfinite(v)) throw ValidationError("interpolate_bspline: non-finite value");

    const std::vector<double>& x = sig.wavelengths;
    const std::vector<double>& y = sig.values;
    std::vector<double> h(n - 1);
    for (size_t i = 0; i + 1 < n; ++i) {
        h[i] = x[i + 1] - x[i];
        if (!(h[i] > 0.0))
            throw ValidationError("interpolate_bspline: wavelengths not strictly increasing");
    }

    // Natural boundary conditions: second derivatives m[0] = m[n-1] = 0;
    // the interior system is tridiagonal (Thomas algorithm).
    std::vector<double> m(n, 0.0);
    if (n > 2) {
        const size_t k = n - 2;  // interior unknowns
        std::vector<double> diag(k), rhs(k), upper(k);
        for (size_t i = 0; i < k; ++i) {
            diag[i] = 2.0 * (h[i] + h[i + 1]);
            upper[i] = h[i + 1];
            rhs[i] = 6.0 * ((y[i + 2] - y[i + 1]) / h[i + 1] - (y[i + 1] - y[i]) / h[i]);
        }
        for (size_t i = 1; i < k; ++i) {
            const double w = h[i] / diag[i - 1];  // lower entry is h[i]
            diag[i] -= w * upper[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        m[k] = rhs[k - 1] / diag[k - 1];
        for (size_t i = k - 1; i > 0; --i) m[i] = (rhs[i - 1] - upper[i - 1] * m[i + 1]) / diag[i - 1];
    }

    const double factor = scale == CurveScale::eight_bit ? 255.0 : 1.0;
    Curve curve;
    curve.scale = scale;
    curve.grid.reserve((n - 1) * samples_per_interval + 1);
    curve.values.reserve(curve.grid.capacity());
    for (size_t i = 0; i + 1 < n; ++i) {
        const double b = (y[i + 1] - y[i]) / h[i] - h[i] * (2.0 * m[i] + m[i + 1]) / 6.0;
        const double c = m[i] / 2.0;
        const double d = (m[i + 1] - m[i]) / (6.0 * h[i]);
        for (int sdx = 0; sdx < samples_per_interval; ++sdx) {
            const double t = h[i] * sdx / samples_per_interval;
            curve.grid.push_back(x[i] + t);
            curve.values.push_back(factor * (y[i] + t * (b + t * (c + t * d))));
        }
    }
    curve.grid.push_back(x[n - 1]);
    curve.values.push_back(factor * y[n - 1]);
    return curve;
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '&')
            out += "&amp;";
        else if (c == '<')
            out += "&lt;";
        else if (c == '>')
            out += "&gt;";
        else
            out += c;
    }
    return out;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

}  // namespace

RenderedCurves render_curves(const std::vector<Curve>& curves,
                             const std::vector<std::string>& labels) {
    if (curves.empty()) throw ValidationError("render_curves: no curves");
    if (labels.size() != curves.size())
        throw ValidationError("render_curves: label count != curve count");
    const std::vector<double>& grid = curves[0].grid;
    if (grid.size() < 2) throw ValidationError("render_curves: degenerate wavelength grid");
    for (const Curve& c : curves) {
        if (c.grid != grid)
            throw ValidationError("render_curves: curves do not share one wavelength grid");
        if (c.values.size() != grid.size())
            throw ValidationError("render_curves: value/grid length mismatch");
    }

    std::string csv = "wavelength_nm";
    for (const auto& label : labels) csv += "," + csv_field(label);
    csv += "\n";
    for (size_t i = 0; i < grid.size(); ++i) {
        csv += shortest(grid[i]);
        for (const Curve& c : curves) csv += "," + shortest(c.values[i]);
        csv += "\n";
    }

    double ymin = curves[0].values[0], ymax = ymin;
    for (const Curve& c : curves)
        for (double v : c.values) {
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
    if (ymax == ymin) {
        ymax += 1.0;
        ymin -= 1.0;
    }
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;
    const double xmin = grid.front(), xmax = grid.back();

    constexpr int kW = 820, kH = 500, kL = 70, kR = 170, kT = 20, kB = 50;
    const double pw = kW - kL - kR, ph = kH - kT - kB;
    auto sx = [&](double x) { return kL + (x - xmin) / (xmax - xmin) * pw; };
    auto sy = [&](double y) { return kT + (ymax - y) / (ymax - ymin) * ph; };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
           std::to_string(kW) + "\" height=\"" + std::to_string(kH) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    // axes
    svg += "<line x1=\"" + shortest(kL) + "\" y1=\"" + shortest(kT) + "\" x2=\"" + shortest(kL) +
           "\" y2=\"" + shortest(kT + ph) + "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + shortest(kL) + "\" y1=\"" + shortest(kT + ph) + "\" x2=\"" +
           shortest(kL + pw) + "\" y2=\"" + shortest(kT + ph) + "\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 5; ++t) {
        const double xv = xmin + (xmax - xmin) * t / 5.0;
        const double yv = ymin + (ymax - ymin) * t / 5.0;
        svg += "<line x1=\"" + shortest(sx(xv)) + "\" y1=\"" + shortest(kT + ph) + "\" x2=\"" +
               shortest(sx(xv)) + "\" y2=\"" + shortest(kT + ph + 5) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + shortest(sx(xv)) + "\" y=\"" + shortest(kT + ph + 20) +
               "\" font-size=\"12\" text-anchor=\"middle\">" + shortest(xv) + "</text>\n";
        svg += "<line x1=\"" + shortest(kL - 5) + "\" y1=\"" + shortest(sy(yv)) + "\" x2=\"" +
               shortest(kL) + "\" y2=\"" + shortest(sy(yv)) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + shortest(kL - 8) + "\" y=\"" + shortest(sy(yv) + 4) +
               "\" font-size=\"12\" text-anchor=\"end\">" + shortest(yv) + "</text>\n";
    }
    svg += "<text x=\"" + shortest(kL + pw / 2) + "\" y=\"" + shortest(kH - 8) +
           "\" font-size=\"13\" text-anchor=\"middle\">wavelength (nm)</text>\n";

    for (size_t c = 0; c < curves.size(); ++c) {
        const char* color = kPalette[c % (sizeof(kPalette) / sizeof(kPalette[0]))];
        svg += "<polyline fill=\"none\" stroke=\"";
        svg += color;
        svg += "\" stroke-width=\"1.5\" points=\"";
        for (size_t i = 0; i < grid.size(); ++i) {
            if (i) svg += ' ';
            svg += shortest(sx(grid[i])) + "," + shortest(sy(curves[c].values[i]));
        }
        svg += "\"/>\n";
        const double ly = kT + 16.0 + 18.0 * static_cast<double>(c);
        svg += "<line x1=\"" + shortest(kL + pw + 12) + "\" y1=\"" + shortest(ly - 4) +
               "\" x2=\"" + shortest(kL + pw + 36) + "\" y2=\"" + shortest(ly - 4) +
               "\" stroke=\"";
        svg += color;
        svg += "\" stroke-width=\"1.5\"/>\n";
        svg += "<text x=\"" + shortest(kL + pw + 42) + "\" y=\"" + shortest(ly) +
               "\" font-size=\"12\">" + xml_escape(labels[c]) + "</text>\n";
    }
    svg += "</svg>\n";

    return RenderedCurves{std::move(csv), std::move(svg)};
}

}  // namespace ssr
