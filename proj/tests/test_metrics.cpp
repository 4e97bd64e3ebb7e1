// Reconstruction metrics, evaluation aggregation, spectral-signature
// sampling, cubic-spline interpolation, and curve rendering (CSV + SVG).
//
// Oracles come first: every derived number is recomputed here from its
// definition (brute-force, double precision, different algebraic route than
// the implementation) before any test uses it.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ssr/hypercube.hpp"
#include "ssr/metrics.hpp"
#include "ssr/rng.hpp"

using namespace ssr;
using nn::Tensor;

namespace {

// ---------------------------------------------------------------------------
// Oracles
// ---------------------------------------------------------------------------

// Root-mean-square error computed directly in the 8-bit domain: scale each
// element by 255 first, then average the squared differences. The production
// code instead computes unit-range MSE and scales the final root by 255;
// the two routes must agree because 255 is a constant factor.
double rmse_8bit_oracle(const Tensor<float>& pred, const Tensor<float>& target) {
    double acc = 0.0;
    for (size_t i = 0; i < pred.size(); ++i) {
        const double d = 255.0 * static_cast<double>(pred.v[i]) -
                         255.0 * static_cast<double>(target.v[i]);
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(pred.size()));
}

// Peak signal-to-noise ratio with peak 1: -10 log10(MSE).
double psnr_oracle(const Tensor<float>& pred, const Tensor<float>& target) {
    double acc = 0.0;
    for (size_t i = 0; i < pred.size(); ++i) {
        const double d = static_cast<double>(pred.v[i]) - static_cast<double>(target.v[i]);
        acc += d * d;
    }
    return -10.0 * std::log10(acc / static_cast<double>(pred.size()));
}

Tensor<float> random_unit_tensor(int ch, int h, int w, RngStream& rng) {
    Tensor<float> t(ch, h, w);
    for (float& v : t.v) v = static_cast<float>(rng.uniform());
    return t;
}

Tensor<float> const_tensor(int ch, int h, int w, float value) {
    Tensor<float> t(ch, h, w);
    std::fill(t.v.begin(), t.v.end(), value);
    return t;
}

// A hand-assembled patch set: values chosen so per-patch errors are exactly
// representable and the pooled (global) score differs from the mean of the
// per-patch scores.
PatchSet two_test_patches() {
    PatchSet set;
    set.patch_size = 2;
    set.wavelengths = {400.0, 500.0, 600.0};
    PatchPair a;  // target equals what the predictor below returns: error 0
    a.rgb = const_tensor(3, 2, 2, 0.5f);
    a.target = const_tensor(3, 2, 2, 0.25f);
    a.tag = Split::test;
    PatchPair b;  // constant gap of 0.5
    b.rgb = const_tensor(3, 2, 2, 0.5f);
    b.target = const_tensor(3, 2, 2, 0.75f);
    b.tag = Split::test;
    PatchPair t;  // train patch: must be ignored by evaluation
    t.rgb = const_tensor(3, 2, 2, 0.5f);
    t.target = const_tensor(3, 2, 2, 1.0f);
    t.tag = Split::train;
    set.pairs = {a, b, t};
    return set;
}

// 31-band cube whose value at (band, row, col) is a known function, kept
// within [0,1].
SpectralCube probe_cube(int h, int w) {
    SpectralCube cube;
    cube.bands = 31;
    cube.height = h;
    cube.width = w;
    cube.units = Units::normalized;
    cube.wavelengths.resize(31);
    for (int b = 0; b < 31; ++b) cube.wavelengths[b] = 400.0 + 10.0 * b;
    cube.data.resize(static_cast<size_t>(31) * h * w);
    for (int b = 0; b < 31; ++b)
        for (int r = 0; r < h; ++r)
            for (int c = 0; c < w; ++c)
                cube.at(b, r, c) =
                    static_cast<float>((b + 2.0 * r + 3.0 * c) / (31.0 + 2.0 * h + 3.0 * w));
    return cube;
}

// Splits a CSV document into lines, then each line into cells.
std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        std::vector<std::string> cells;
        std::string cell;
        bool quoted = false;
        for (size_t i = 0; i < line.size(); ++i) {
            const char c = line[i];
            if (quoted) {
                if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                    cell += '"';
                    ++i;
                } else if (c == '"') {
                    quoted = false;
                } else {
                    cell += c;
                }
            } else if (c == '"') {
                quoted = true;
            } else if (c == ',') {
                cells.push_back(cell);
                cell.clear();
            } else {
                cell += c;
            }
        }
        cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

size_t count_occurrences(const std::string& text, const std::string& needle) {
    size_t n = 0;
    for (size_t pos = text.find(needle); pos != std::string::npos;
         pos = text.find(needle, pos + needle.size()))
        ++n;
    return n;
}

}  // namespace

// ---------------------------------------------------------------------------
// Metric values against the oracles
// ---------------------------------------------------------------------------

TEST_CASE("rmse and psnr match brute-force oracles on 100 random pairs") {
    RngStream rng = derive_stream(7, "metrics");
    for (int trial = 0; trial < 100; ++trial) {
        Tensor<float> pred = random_unit_tensor(31, 4, 4, rng);
        Tensor<float> target = random_unit_tensor(31, 4, 4, rng);
        CHECK(rmse_8bit(pred, target) ==
              doctest::Approx(rmse_8bit_oracle(pred, target)).epsilon(1e-9));
        auto psnr = psnr_unit(pred, target);
        REQUIRE(psnr.has_value());
        CHECK(*psnr == doctest::Approx(psnr_oracle(pred, target)).epsilon(1e-9));
    }
}

TEST_CASE("the 8-bit rmse is exactly 255 times the unit-range root-MSE") {
    RngStream rng = derive_stream(8, "identity255");
    for (int trial = 0; trial < 20; ++trial) {
        Tensor<float> pred = random_unit_tensor(5, 3, 3, rng);
        Tensor<float> target = random_unit_tensor(5, 3, 3, rng);
        double mse = 0.0;
        for (size_t i = 0; i < pred.size(); ++i) {
            const double d = static_cast<double>(pred.v[i]) - static_cast<double>(target.v[i]);
            mse += d * d;
        }
        mse /= static_cast<double>(pred.size());
        CHECK(rmse_8bit(pred, target) ==
              doctest::Approx(255.0 * std::sqrt(mse)).epsilon(1e-12));
    }
}

TEST_CASE("both metrics are symmetric in their arguments") {
    RngStream rng = derive_stream(9, "sym");
    Tensor<float> a = random_unit_tensor(7, 5, 4, rng);
    Tensor<float> b = random_unit_tensor(7, 5, 4, rng);
    CHECK(rmse_8bit(a, b) == rmse_8bit(b, a));
    CHECK(*psnr_unit(a, b) == *psnr_unit(b, a));
}

TEST_CASE("identical inputs score zero rmse and have no finite psnr") {
    Tensor<float> a = const_tensor(31, 4, 4, 0.625f);
    CHECK(rmse_8bit(a, a) == 0.0);
    CHECK_FALSE(psnr_unit(a, a).has_value());
}

TEST_CASE("the maximal error scores rmse 255 and psnr 0 dB exactly") {
    Tensor<float> zeros = const_tensor(31, 4, 4, 0.0f);
    Tensor<float> ones = const_tensor(31, 4, 4, 1.0f);
    CHECK(rmse_8bit(zeros, ones) == 255.0);   // MSE = 1
    REQUIRE(psnr_unit(zeros, ones).has_value());
    CHECK(*psnr_unit(zeros, ones) == 0.0);    // 10 log10(1/1)
}

TEST_CASE("a constant exactly-representable gap gives closed-form scores") {
    // |0.75 - 0.25| = 0.5 exactly in binary floating point: MSE = 0.25,
    // rmse_8bit = 127.5, psnr = 10 log10 4.
    Tensor<float> pred = const_tensor(2, 3, 3, 0.75f);
    Tensor<float> target = const_tensor(2, 3, 3, 0.25f);
    CHECK(rmse_8bit(pred, target) == doctest::Approx(127.5).epsilon(1e-12));
    CHECK(*psnr_unit(pred, target) ==
          doctest::Approx(10.0 * std::log10(4.0)).epsilon(1e-12));
}

TEST_CASE("monotonicity: a larger constant gap never scores lower") {
    Tensor<float> target = const_tensor(3, 4, 4, 0.0f);
    double prev = -1.0;
    for (float gap : {0.1f, 0.2f, 0.4f, 0.8f}) {
        const double r = rmse_8bit(const_tensor(3, 4, 4, gap), target);
        CHECK(r > prev);
        prev = r;
    }
}

TEST_CASE("metric inputs are validated") {
    Tensor<float> a = const_tensor(3, 4, 4, 0.5f);
    Tensor<float> wrong_shape = const_tensor(3, 4, 5, 0.5f);
    CHECK_THROWS_AS(rmse_8bit(a, wrong_shape), ValidationError);
    CHECK_THROWS_AS(psnr_unit(a, wrong_shape), ValidationError);

    Tensor<float> empty;
    CHECK_THROWS_AS(rmse_8bit(empty, empty), ValidationError);

    Tensor<float> over = const_tensor(3, 4, 4, 1.5f);
    CHECK_THROWS_AS(rmse_8bit(over, a), ValidationError);
    CHECK_THROWS_AS(rmse_8bit(a, over), ValidationError);
    Tensor<float> under = const_tensor(3, 4, 4, -0.125f);
    CHECK_THROWS_AS(psnr_unit(under, a), ValidationError);

    Tensor<float> poisoned = const_tensor(3, 4, 4, 0.5f);
    poisoned.v[7] = std::nanf("");
    CHECK_THROWS_AS(rmse_8bit(poisoned, a), ValidationError);
}

// ---------------------------------------------------------------------------
// Evaluation over a patch set
// ---------------------------------------------------------------------------

TEST_CASE("evaluate pools all test elements before the final root") {
    PatchSet set = two_test_patches();
    // The predictor returns a constant 0.25 cube: patch A has zero error,
    // patch B a constant 0.5 gap, and the train patch (gap 0.75) is ignored.
    Predictor constant = [](const Tensor<float>& rgb) {
        return const_tensor(3, rgb.h, rgb.w, 0.25f);
    };
    EvalReport report = evaluate(constant, set);

    CHECK(report.test_patches == 2);
    CHECK(report.patch_size == 2);
    REQUIRE(report.per_patch.size() == 2);
    CHECK(report.per_patch[0].patch == 0);
    CHECK(report.per_patch[1].patch == 1);

    // Per-patch scores.
    CHECK(report.per_patch[0].rmse_8bit == 0.0);
    CHECK_FALSE(report.per_patch[0].psnr_unit.has_value());
    CHECK(report.per_patch[1].rmse_8bit == doctest::Approx(127.5).epsilon(1e-12));

    // Global score: pooled MSE = (0 + 0.25)/2 = 0.125, so the global rmse is
    // 255*sqrt(0.125) ~ 90.16 -- NOT the per-patch mean (0+127.5)/2 = 63.75.
    CHECK(report.rmse_8bit == doctest::Approx(255.0 * std::sqrt(0.125)).epsilon(1e-12));
    CHECK(report.rmse_8bit != doctest::Approx(63.75).epsilon(1e-3));
    REQUIRE(report.psnr_unit.has_value());
    CHECK(*report.psnr_unit == doctest::Approx(-10.0 * std::log10(0.125)).epsilon(1e-12));
}

TEST_CASE("a perfect predictor reports zero rmse and an infinite psnr") {
    PatchSet set = two_test_patches();
    Predictor perfect = [&](const Tensor<float>& rgb) {
        // Return each patch's own target by matching on the constant value.
        for (const PatchPair& p : set.pairs)
            if (p.tag == Split::test && p.rgb.v == rgb.v) return p.target;
        return const_tensor(3, rgb.h, rgb.w, 0.0f);
    };
    // Both test patches share the same rgb here, so make targets equal too.
    set.pairs[1].target = set.pairs[0].target;
    EvalReport report = evaluate(perfect, set);
    CHECK(report.rmse_8bit == 0.0);
    CHECK_FALSE(report.psnr_unit.has_value());
    for (const auto& pe : report.per_patch) CHECK_FALSE(pe.psnr_unit.has_value());
}

TEST_CASE("evaluating an empty test split is an error that names the split") {
    PatchSet set = two_test_patches();
    for (auto& p : set.pairs) p.tag = Split::train;
    Predictor id = [](const Tensor<float>& rgb) { return rgb; };
    try {
        evaluate(id, set);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("test") != std::string::npos);
    }
}

TEST_CASE("a predictor with the wrong output shape is rejected") {
    PatchSet set = two_test_patches();
    Predictor wrong = [](const Tensor<float>& rgb) {
        return const_tensor(7, rgb.h, rgb.w, 0.5f);
    };
    CHECK_THROWS_AS(evaluate(wrong, set), ValidationError);
}

TEST_CASE("the report serializes to parseable json with pinned keys") {
    PatchSet set = two_test_patches();
    Predictor constant = [](const Tensor<float>& rgb) {
        return const_tensor(3, rgb.h, rgb.w, 0.25f);
    };
    EvalReport report = evaluate(constant, set);

    std::istringstream in(report.to_json());
    nlohmann::json j = nlohmann::json::parse(in);
    CHECK(j.at("rmse_8bit").get<double>() == report.rmse_8bit);
    CHECK(j.at("aggregation").get<std::string>() == "global_flatten");
    CHECK(j.at("test_patches").get<size_t>() == 2);
    CHECK(j.at("patch_size").get<int>() == 2);
    REQUIRE(j.at("per_patch").size() == 2);
    // Patch 0 matched exactly: psnr is null and flagged infinite.
    CHECK(j.at("per_patch")[0].at("psnr_unit").is_null());
    CHECK(j.at("per_patch")[0].at("psnr_infinite").get<bool>());
    CHECK_FALSE(j.at("per_patch")[1].at("psnr_infinite").get<bool>());
    CHECK(j.at("per_patch")[1].at("rmse_8bit").get<double>() ==
          report.per_patch[1].rmse_8bit);

    // Round-trip through a file.
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "ssr_metrics_report";
    fs::create_directories(dir);
    save_report(report, dir / "report.json");
    std::ifstream file(dir / "report.json");
    REQUIRE(file.good());
    nlohmann::json j2 = nlohmann::json::parse(file);
    CHECK(j2 == j);

    CHECK_THROWS_AS(save_report(report, "/nonexistent-dir/report.json"), IoError);
}

// ---------------------------------------------------------------------------
// Signature sampling
// ---------------------------------------------------------------------------

TEST_CASE("sampling a pixel returns its 31 per-band values verbatim") {
    SpectralCube cube = probe_cube(5, 6);
    Signature sig = sample_signature(cube, 3, 4, SignatureSource::predicted);
    CHECK(sig.row == 3);
    CHECK(sig.col == 4);
    CHECK(sig.source == SignatureSource::predicted);
    REQUIRE(sig.wavelengths.size() == 31);
    REQUIRE(sig.values.size() == 31);
    CHECK(sig.wavelengths == cube.wavelengths);
    for (int b = 0; b < 31; ++b)
        CHECK(sig.values[b] == static_cast<double>(cube.at(b, 3, 4)));
    // Default source tag is ground truth.
    CHECK(sample_signature(cube, 0, 0).source == SignatureSource::ground_truth);
}

TEST_CASE("corner pixels are inside bounds; one past either edge is not") {
    SpectralCube cube = probe_cube(4, 7);
    CHECK_NOTHROW(sample_signature(cube, 0, 0));
    CHECK_NOTHROW(sample_signature(cube, 3, 6));
    for (auto [r, c] : {std::pair{-1, 0}, {0, -1}, {4, 0}, {0, 7}}) {
        try {
            sample_signature(cube, r, c);
            FAIL("expected ValidationError for (", r, ",", c, ")");
        } catch (const ValidationError& e) {
            const std::string msg = e.what();
            CHECK(msg.find("(" + std::to_string(r) + "," + std::to_string(c) + ")") !=
                  std::string::npos);
        }
    }
}

TEST_CASE("sampling wants a 31-band cube and names the count it got") {
    SpectralCube cube = probe_cube(3, 3);
    cube.bands = 7;
    cube.wavelengths.resize(7);
    cube.data.resize(static_cast<size_t>(7) * 3 * 3);
    try {
        sample_signature(cube, 0, 0);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("7") != std::string::npos);
    }
}

// ---------------------------------------------------------------------------
// Cubic-spline interpolation
// ---------------------------------------------------------------------------

namespace {

Signature random_signature(std::uint64_t seed) {
    Signature sig;
    RngStream rng = derive_stream(seed, "spline");
    sig.wavelengths.resize(31);
    sig.values.resize(31);
    for (int b = 0; b < 31; ++b) {
        sig.wavelengths[b] = 400.0 + 10.0 * b;
        sig.values[b] = rng.uniform();
    }
    return sig;
}

}  // namespace

TEST_CASE("the spline passes through every control point within 1e-9") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        Signature sig = random_signature(seed);
        for (int spi : {1, 4, 10}) {
            Curve curve = interpolate_bspline(sig, spi);
            REQUIRE(curve.grid.size() == 30u * spi + 1u);
            for (int b = 0; b < 31; ++b) {
                const size_t at = static_cast<size_t>(b) * spi;
                CHECK(curve.grid[at] == doctest::Approx(sig.wavelengths[b]).epsilon(1e-12));
                CHECK(curve.values[at] == doctest::Approx(sig.values[b]).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("linear data is reproduced exactly at every dense sample") {
    // A straight line has zero second derivative everywhere, which satisfies
    // the natural boundary conditions, so the spline IS the line.
    Signature sig;
    for (int b = 0; b < 31; ++b) {
        sig.wavelengths.push_back(400.0 + 10.0 * b);
        sig.values.push_back(0.02 * b + 0.1);
    }
    Curve curve = interpolate_bspline(sig, 7);
    for (size_t i = 0; i < curve.grid.size(); ++i) {
        const double expect = 0.1 + 0.02 * (curve.grid[i] - 400.0) / 10.0;
        CHECK(curve.values[i] == doctest::Approx(expect).epsilon(1e-9));
    }
}

TEST_CASE("constant data yields a constant curve") {
    Signature sig;
    for (int b = 0; b < 31; ++b) {
        sig.wavelengths.push_back(400.0 + 10.0 * b);
        sig.values.push_back(0.375);
    }
    Curve curve = interpolate_bspline(sig, 3);
    for (double v : curve.values) CHECK(v == doctest::Approx(0.375).epsilon(1e-12));
}

TEST_CASE("the eight-bit scale multiplies the unit curve by 255") {
    Signature sig = random_signature(11);
    Curve unit = interpolate_bspline(sig, 5, CurveScale::unit);
    Curve eight = interpolate_bspline(sig, 5, CurveScale::eight_bit);
    CHECK(eight.scale == CurveScale::eight_bit);
    REQUIRE(unit.values.size() == eight.values.size());
    CHECK(unit.grid == eight.grid);
    for (size_t i = 0; i < unit.values.size(); ++i)
        CHECK(eight.values[i] == doctest::Approx(255.0 * unit.values[i]).epsilon(1e-12));
}

TEST_CASE("spline inputs are validated") {
    Signature three;
    three.wavelengths = {400.0, 410.0, 420.0};
    three.values = {0.1, 0.2, 0.3};
    CHECK_THROWS_AS(interpolate_bspline(three, 4), ValidationError);

    Signature sig = random_signature(12);
    CHECK_THROWS_AS(interpolate_bspline(sig, 0), ValidationError);

    Signature mismatched = sig;
    mismatched.values.pop_back();
    CHECK_THROWS_AS(interpolate_bspline(mismatched, 4), ValidationError);

    Signature unsorted = sig;
    std::swap(unsorted.wavelengths[4], unsorted.wavelengths[5]);
    CHECK_THROWS_AS(interpolate_bspline(unsorted, 4), ValidationError);

    Signature poisoned = sig;
    poisoned.values[9] = std::nan("");
    CHECK_THROWS_AS(interpolate_bspline(poisoned, 4), ValidationError);
}

// ---------------------------------------------------------------------------
// Curve rendering
// ---------------------------------------------------------------------------

TEST_CASE("the csv has one labeled column per curve and parses back exactly") {
    Signature truth = random_signature(21);
    Signature pred = random_signature(22);
    Curve a = interpolate_bspline(truth, 4, CurveScale::eight_bit);
    Curve b = interpolate_bspline(pred, 4, CurveScale::eight_bit);
    RenderedCurves out = render_curves({a, b}, {"truth (8,3)", "predicted (8,3)"});

    auto rows = parse_csv(out.csv);
    REQUIRE(rows.size() == a.grid.size() + 1);
    REQUIRE(rows[0].size() == 3);
    CHECK(rows[0][0] == "wavelength_nm");
    CHECK(rows[0][1] == "truth (8,3)");
    CHECK(rows[0][2] == "predicted (8,3)");
    // Shortest-round-trip formatting: parsing each cell recovers the exact
    // double that was written.
    for (size_t i = 0; i < a.grid.size(); ++i) {
        CHECK(std::strtod(rows[i + 1][0].c_str(), nullptr) == a.grid[i]);
        CHECK(std::strtod(rows[i + 1][1].c_str(), nullptr) == a.values[i]);
        CHECK(std::strtod(rows[i + 1][2].c_str(), nullptr) == b.values[i]);
    }
}

TEST_CASE("labels containing commas or quotes are csv-quoted") {
    Signature sig = random_signature(23);
    Curve a = interpolate_bspline(sig, 1);
    RenderedCurves out = render_curves({a, a}, {"pixel, truth", "say \"hi\""});
    auto rows = parse_csv(out.csv);
    REQUIRE(rows[0].size() == 3);
    CHECK(rows[0][1] == "pixel, truth");
    CHECK(rows[0][2] == "say \"hi\"");
    // The raw text must actually be quoted (the parser would split otherwise).
    CHECK(out.csv.find("\"pixel, truth\"") != std::string::npos);
    CHECK(out.csv.find("\"say \"\"hi\"\"\"") != std::string::npos);
}

TEST_CASE("the svg draws one polyline per curve and escapes labels") {
    Signature sig1 = random_signature(24);
    Signature sig2 = random_signature(25);
    Signature sig3 = random_signature(26);
    Curve a = interpolate_bspline(sig1, 2);
    Curve b = interpolate_bspline(sig2, 2);
    Curve c = interpolate_bspline(sig3, 2);
    RenderedCurves out = render_curves({a, b, c}, {"plain", "a<b&c", "tail>"});

    CHECK(count_occurrences(out.svg, "<polyline") == 3);
    CHECK(out.svg.find("<svg") == 0);
    CHECK(out.svg.rfind("</svg>\n") == out.svg.size() - 7);
    CHECK(out.svg.find("wavelength (nm)") != std::string::npos);
    CHECK(out.svg.find("a&lt;b&amp;c") != std::string::npos);
    CHECK(out.svg.find("tail&gt;") != std::string::npos);
    CHECK(out.svg.find("a<b&c") == std::string::npos);
    // Every dense sample appears as a vertex of its polyline.
    const size_t first_poly = out.svg.find("<polyline");
    const size_t poly_end = out.svg.find("\"/>", first_poly);
    const std::string points = out.svg.substr(first_poly, poly_end - first_poly);
    CHECK(count_occurrences(points, ",") >= a.grid.size());
}

TEST_CASE("render inputs are validated") {
    Signature sig = random_signature(27);
    Curve a = interpolate_bspline(sig, 2);
    CHECK_THROWS_AS(render_curves({}, {}), ValidationError);
    CHECK_THROWS_AS(render_curves({a}, {"x", "y"}), ValidationError);

    Curve other = a;
    other.grid.back() += 1.0;  // different wavelength grid
    CHECK_THROWS_AS(render_curves({a, other}, {"x", "y"}), ValidationError);

    Curve short_values = a;
    short_values.values.pop_back();
    CHECK_THROWS_AS(render_curves({short_values}, {"x"}), ValidationError);

    Curve degenerate;
    degenerate.grid = {400.0};
    degenerate.values = {0.5};
    CHECK_THROWS_AS(render_curves({degenerate}, {"x"}), ValidationError);
}
