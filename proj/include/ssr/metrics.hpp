#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ssr/dataset.hpp"
#include "ssr/nn/generator.hpp"

namespace ssr {

// sqrt(mean((255*pred - 255*target)^2)) over every band and pixel; inputs
// must lie in [0,1]. Equals 255 * sqrt(unit-range MSE).
double rmse_8bit(const nn::Tensor<float>& pred, const nn::Tensor<float>& target);

// 10*log10(1/MSE) on the [0,1] scale. Identical inputs have no finite PSNR;
// that case returns an empty optional rather than a number.
std::optional<double> psnr_unit(const nn::Tensor<float>& pred, const nn::Tensor<float>& target);

struct PatchEval {
    size_t patch = 0;  // index into PatchSet::pairs
    double rmse_8bit = 0;
    std::optional<double> psnr_unit;
};

struct EvalReport {
    double rmse_8bit = 0;
    std::optional<double> psnr_unit;
    std::vector<PatchEval> per_patch;
    size_t test_patches = 0;
    int patch_size = 0;

    // Global scores flatten every test element into one pool before the
    // final sqrt/log, which is NOT the mean of the per-patch scores.
    std::string to_json() const;
};

using Predictor = std::function<nn::Tensor<float>(const nn::Tensor<float>& rgb)>;

// Runs the predictor on every test patch and aggregates.
EvalReport evaluate(const Predictor& predictor, const PatchSet& patches);

// Convenience wrapper: dropout-free forward of the generator.
EvalReport evaluate(nn::Generator<float>& generator, const PatchSet& patches);

void save_report(const EvalReport& report, const std::filesystem::path& path);

enum class SignatureSource { ground_truth, predicted };

// The per-band value vector of one pixel.
struct Signature {
    int row = 0;
    int col = 0;
    std::vector<double> wavelengths;
    std::vector<double> values;
    SignatureSource source = SignatureSource::ground_truth;
};

Signature sample_signature(const SpectralCube& cube, int row, int col,
                           SignatureSource source = SignatureSource::ground_truth);

enum class CurveScale { unit, eight_bit };

struct Curve {
    std::vector<double> grid;    // nm
    std::vector<double> values;  // eight_bit scale multiplies by 255
    CurveScale scale = CurveScale::unit;
};

// Natural cubic interpolating spline through all control points; the dense
// grid subdivides each band interval into `samples_per_interval` pieces.
Curve interpolate_bspline(const Signature& sig, int samples_per_interval,
                          CurveScale scale = CurveScale::unit);

struct RenderedCurves {
    std::string csv;
    std::string svg;
};

// CSV column per curve plus a standalone SVG line chart; labels drive both
// the CSV header and the SVG legend.
RenderedCurves render_curves(const std::vector<Curve>& curves,
                             const std::vector<std::string>& labels);

}  // namespace ssr
