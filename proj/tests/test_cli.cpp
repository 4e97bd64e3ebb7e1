// Command-line driver: every subcommand exercised in-process through
// ssr::cli::run, including one full pipeline chain, exit-code conventions,
// and byte-identical artifact reruns for a fixed seed.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ssr/cli.hpp"
#include "ssr/dataset.hpp"
#include "ssr/hypercube.hpp"
#include "ssr/rgbsynth.hpp"

using namespace ssr;
namespace fs = std::filesystem;

namespace {

int run(std::vector<std::string> args) { return cli::run(args); }

fs::path temp_dir(const std::string& tag) {
    fs::path dir = fs::temp_directory_path() / ("ssr_cli_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    REQUIRE(out.good());
    out << text;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// A compact scene description: 96x64 pixels on a fine 61-band grid that the
// resampling step later reduces to the 31 reconstruction bands.
std::string scene_json(int width, int height, int seed) {
    nlohmann::json j;
    j["width"] = width;
    j["height"] = height;
    j["grid"] = {{"start_nm", 400.0}, {"step_nm", 5.0}, {"count", 61}};
    j["n_rectangles"] = 10;
    j["n_materials"] = 4;
    j["noise_sigma"] = 0.004;
    j["seed"] = seed;
    return j.dump(2) + "\n";
}

}  // namespace

TEST_CASE("help exits 0; bad invocations exit 1") {
    CHECK(run({"--help"}) == 0);
    CHECK(run({"synth-scene", "--help"}) == 0);
    CHECK(run({"frobnicate"}) == 1);
    CHECK(run({}) == 1);                       // a subcommand is required
    CHECK(run({"train", "--patches", "p"}) == 1);  // --out missing
}

TEST_CASE("missing input files exit 2") {
    fs::path dir = temp_dir("missing");
    CHECK(run({"synth-scene", "--config", (dir / "absent.json").string(), "--out",
               (dir / "out").string()}) == 2);
    CHECK(run({"synthesize-rgb", "--in", (dir / "absent_cube").string(), "--out",
               (dir / "rgb").string()}) == 2);
    CHECK(run({"evaluate", "--checkpoint", (dir / "absent_ckpt").string(), "--patches",
               (dir / "absent_patches").string(), "--out", (dir / "r.json").string()}) == 2);
}

TEST_CASE("a malformed scene config exits 1") {
    fs::path dir = temp_dir("badcfg");
    write_text(dir / "no_height.json", "{\"width\": 32, \"grid\": {\"start_nm\": 400, "
                                       "\"step_nm\": 10, \"count\": 31}}\n");
    CHECK(run({"synth-scene", "--config", (dir / "no_height.json").string(), "--out",
               (dir / "out").string()}) == 1);
    write_text(dir / "not_json.json", "this is not json\n");
    CHECK(run({"synth-scene", "--config", (dir / "not_json.json").string(), "--out",
               (dir / "out").string()}) == 1);
}

TEST_CASE("the same seed reproduces byte-identical scene artifacts") {
    fs::path dir = temp_dir("determinism");
    write_text(dir / "scene.json", scene_json(48, 32, 77));
    REQUIRE(run({"synth-scene", "--config", (dir / "scene.json").string(), "--out",
                 (dir / "a").string()}) == 0);
    REQUIRE(run({"synth-scene", "--config", (dir / "scene.json").string(), "--out",
                 (dir / "b").string()}) == 0);
    for (const char* name : {"scene.json", "scene.raw", "labels.json", "labels.raw"})
        CHECK(slurp(dir / "a" / name) == slurp(dir / "b" / name));

    // A different seed changes the data payload.
    REQUIRE(run({"synth-scene", "--config", (dir / "scene.json").string(), "--seed", "78",
                 "--out", (dir / "c").string()}) == 0);
    CHECK(slurp(dir / "a" / "scene.raw") != slurp(dir / "c" / "scene.raw"));
}

TEST_CASE("the eight-subcommand pipeline runs end to end from one seed") {
    fs::path dir = temp_dir("chain");
    write_text(dir / "scene.json", scene_json(96, 64, 7));

    // 1. synth-scene
    REQUIRE(run({"synth-scene", "--config", (dir / "scene.json").string(), "--out",
                 (dir / "scene").string()}) == 0);
    SpectralCube fine = load_cube(dir / "scene" / "scene");
    CHECK(fine.bands == 61);
    CHECK(fine.width == 96);
    CHECK(fine.height == 64);

    // 2. resample to the 31 reconstruction bands
    REQUIRE(run({"resample", "--in", (dir / "scene" / "scene").string(), "--out",
                 (dir / "cube31").string(), "--start", "400", "--step", "10", "--count", "31",
                 "--half-window", "5"}) == 0);
    SpectralCube cube31 = load_cube(dir / "cube31");
    CHECK(cube31.bands == 31);
    CHECK(cube31.wavelengths.front() == 400.0);
    CHECK(cube31.wavelengths.back() == 700.0);

    // 3. synthesize-rgb through the built-in camera curves
    REQUIRE(run({"synthesize-rgb", "--in", (dir / "cube31").string(), "--csf", "builtin",
                 "--out", (dir / "rgb").string()}) == 0);
    RGBImage rgb = load_rgb(dir / "rgb");
    CHECK(rgb.width == 96);
    CHECK(rgb.height == 64);

    // 4. split-patches with a 60/40 column split
    REQUIRE(run({"split-patches", "--rgb", (dir / "rgb").string(), "--hsi",
                 (dir / "cube31").string(), "--out", (dir / "patches").string(), "--fraction",
                 "0.6", "--axis", "columns", "--size", "32", "--n-train", "20", "--n-test", "8",
                 "--seed", "11"}) == 0);
    PatchSet patches = load_patchset(dir / "patches");
    CHECK(patches.count(Split::train) == 20);
    CHECK(patches.count(Split::test) == 8);
    CHECK(audit_split_overlaps(patches) == 0);

    // 5. train a reduced-width network for two epochs
    REQUIRE(run({"train", "--patches", (dir / "patches").string(), "--out",
                 (dir / "run").string(), "--epochs", "2", "--batch", "4", "--gen-depth", "3",
                 "--gen-mult", "0.0625", "--disc", "rf16", "--disc-mult", "0.125", "--seed",
                 "1"}) == 0);
    const fs::path last_ckpt = dir / "run" / "checkpoints" / "epoch-002";
    REQUIRE(fs::exists(last_ckpt / "manifest.json"));
    REQUIRE(fs::exists(last_ckpt / "params.bin"));
    {
        std::ifstream in(dir / "run" / "history.json");
        REQUIRE(in.good());
        nlohmann::json hist = nlohmann::json::parse(in);
        REQUIRE(hist.is_array());
        CHECK(hist.size() == 10);  // 2 epochs x ceil(20/4) steps
        CHECK(hist[0].contains("epoch"));
        CHECK(hist[0].contains("d_loss"));
        CHECK(hist[0].contains("g_adv"));
        CHECK(hist[0].contains("g_aux"));
        CHECK(hist[0].contains("g_total"));
    }

    // 6. infer a full-frame reconstruction
    REQUIRE(run({"infer", "--checkpoint", last_ckpt.string(), "--rgb", (dir / "rgb").string(),
                 "--out", (dir / "pred").string()}) == 0);
    SpectralCube pred = load_cube(dir / "pred");
    CHECK(pred.bands == 31);
    CHECK(pred.width == 96);
    CHECK(pred.height == 64);
    CHECK(pred.wavelengths == cube31.wavelengths);
    for (float v : pred.data) {
        REQUIRE(v >= 0.0f);
        REQUIRE(v <= 1.0f);
    }

    // Inference is deterministic: a second run writes identical bytes.
    REQUIRE(run({"infer", "--checkpoint", last_ckpt.string(), "--rgb", (dir / "rgb").string(),
                 "--out", (dir / "pred2").string()}) == 0);
    CHECK(slurp(dir / "pred.raw") == slurp(dir / "pred2.raw"));

    // 7. evaluate against the held-out patches
    REQUIRE(run({"evaluate", "--checkpoint", last_ckpt.string(), "--patches",
                 (dir / "patches").string(), "--out", (dir / "report.json").string()}) == 0);
    {
        std::ifstream in(dir / "report.json");
        REQUIRE(in.good());
        nlohmann::json rep = nlohmann::json::parse(in);
        CHECK(rep.at("test_patches").get<int>() == 8);
        CHECK(rep.at("aggregation").get<std::string>() == "global_flatten");
        CHECK(rep.at("rmse_8bit").get<double>() > 0.0);
        CHECK(rep.at("per_patch").size() == 8);
    }

    // 8. signature curves from two probe pixels
    REQUIRE(run({"signature", "--truth", (dir / "cube31").string(), "--pred",
                 (dir / "pred").string(), "--points", "5,5;20,40", "--out",
                 (dir / "curves").string()}) == 0);
    {
        std::string csv = slurp(dir / "curves" / "curves.csv");
        std::istringstream lines(csv);
        std::string header;
        REQUIRE(std::getline(lines, header));
        // Labels contain commas, so the CSV writer quotes each one.
        CHECK(header == "wavelength_nm,\"truth (5,5)\",\"predicted (5,5)\","
                        "\"truth (20,40)\",\"predicted (20,40)\"");
        std::string svg = slurp(dir / "curves" / "curves.svg");
        size_t polylines = 0;
        for (size_t pos = svg.find("<polyline"); pos != std::string::npos;
             pos = svg.find("<polyline", pos + 1))
            ++polylines;
        CHECK(polylines == 4);
    }

    // Resume rejects every flag except --epochs / --stop-after...
    CHECK(run({"train", "--patches", (dir / "patches").string(), "--out",
               (dir / "run2").string(), "--resume", last_ckpt.string(), "--batch", "8"}) == 1);
    // ...but plain resume extends the run: one more epoch lands epoch-003.
    REQUIRE(run({"train", "--patches", (dir / "patches").string(), "--out",
                 (dir / "run2").string(), "--resume", last_ckpt.string(), "--epochs", "3"}) == 0);
    CHECK(fs::exists(dir / "run2" / "checkpoints" / "epoch-003" / "manifest.json"));

    // Bad signature point syntax exits 1.
    CHECK(run({"signature", "--truth", (dir / "cube31").string(), "--pred",
               (dir / "pred").string(), "--points", "5;x", "--out",
               (dir / "curves2").string()}) == 1);
    // A probe outside the image exits 1 too.
    CHECK(run({"signature", "--truth", (dir / "cube31").string(), "--pred",
               (dir / "pred").string(), "--points", "500,500", "--out",
               (dir / "curves3").string()}) == 1);
}

TEST_CASE("evaluating a patch set with no test patches exits 1") {
    fs::path dir = temp_dir("notest");
    write_text(dir / "scene.json", scene_json(64, 48, 3));
    REQUIRE(run({"synth-scene", "--config", (dir / "scene.json").string(), "--out",
                 (dir / "scene").string()}) == 0);
    REQUIRE(run({"resample", "--in", (dir / "scene" / "scene").string(), "--out",
                 (dir / "cube31").string(), "--start", "400", "--step", "10", "--count", "31",
                 "--half-window", "5"}) == 0);
    REQUIRE(run({"synthesize-rgb", "--in", (dir / "cube31").string(), "--out",
                 (dir / "rgb").string()}) == 0);
    REQUIRE(run({"split-patches", "--rgb", (dir / "rgb").string(), "--hsi",
                 (dir / "cube31").string(), "--out", (dir / "patches").string(), "--size", "16",
                 "--n-train", "6", "--n-test", "0", "--seed", "2"}) == 0);
    REQUIRE(run({"train", "--patches", (dir / "patches").string(), "--out",
                 (dir / "run").string(), "--epochs", "1", "--batch", "2", "--gen-depth", "2",
                 "--gen-mult", "0.0625", "--disc", "rf1", "--disc-mult", "0.125", "--seed",
                 "9"}) == 0);
    CHECK(run({"evaluate", "--checkpoint",
               (dir / "run" / "checkpoints" / "epoch-001").string(), "--patches",
               (dir / "patches").string(), "--out", (dir / "report.json").string()}) == 1);
}

TEST_CASE("training validation failures exit 1") {
    fs::path dir = temp_dir("badtrain");
    write_text(dir / "scene.json", scene_json(64, 48, 4));
    REQUIRE(run({"synth-scene", "--config", (dir / "scene.json").string(), "--out",
                 (dir / "scene").string()}) == 0);
    REQUIRE(run({"resample", "--in", (dir / "scene" / "scene").string(), "--out",
                 (dir / "cube31").string(), "--start", "400", "--step", "10", "--count", "31",
                 "--half-window", "5"}) == 0);
    REQUIRE(run({"synthesize-rgb", "--in", (dir / "cube31").string(), "--out",
                 (dir / "rgb").string()}) == 0);
    REQUIRE(run({"split-patches", "--rgb", (dir / "rgb").string(), "--hsi",
                 (dir / "cube31").string(), "--out", (dir / "patches").string(), "--size", "16",
                 "--n-train", "4", "--n-test", "2", "--seed", "2"}) == 0);
    CHECK(run({"train", "--patches", (dir / "patches").string(), "--out", (dir / "r").string(),
               "--epochs", "0"}) == 1);
    CHECK(run({"train", "--patches", (dir / "patches").string(), "--out", (dir / "r").string(),
               "--epochs", "1", "--disc", "rf99"}) == 1);
    CHECK(run({"train", "--patches", (dir / "patches").string(), "--out", (dir / "r").string(),
               "--epochs", "1", "--aux", "l3"}) == 1);
}
