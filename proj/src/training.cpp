#include "ssr/training.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include <json.hpp>

namespace ssr {

using nlohmann::json;

std::string schedule_to_string(LrSchedule s) {
    return s == LrSchedule::constant_then_linear ? "constant_then_linear" : "step";
}

LrSchedule schedule_from_string(const std::string& s) {
    if (s == "constant_then_linear") return LrSchedule::constant_then_linear;
    if (s == "step") return LrSchedule::step;
    throw ValidationError("unknown lr schedule: '" + s + "'");
}

void TrainingConfig::validate() const {
    if (lambda_l1 < 0.0) throw ValidationError("training config: lambda_l1 must be >= 0");
    if (epochs < 1) throw ValidationError("training config: epochs must be >= 1");
    if (!(lr_end > 0.0 && lr_end <= lr_start))
        throw ValidationError("training config: need 0 < lr_end <= lr_start");
    if (batch_size < 1) throw ValidationError("training config: batch size must be >= 1");
    gen.validate();
    disc.validate();
    if (disc.in_channels != gen.in_channels + gen.out_bands)
        throw ValidationError("training config: discriminator input channels must equal " +
                              std::to_string(gen.in_channels + gen.out_bands) +
                              " (rgb + band channels)");
}

double lr_at(int epoch, const TrainingConfig& config) {
    if (epoch < 0 || epoch >= config.epochs)
        throw ValidationError("lr_at: epoch " + std::to_string(epoch) + " outside [0, " +
                              std::to_string(config.epochs) + ")");
    const int half = config.epochs / 2;
    if (epoch < half) return config.lr_start;
    if (config.schedule == LrSchedule::step) return config.lr_end;
    const int last = config.epochs - 1;
    if (last == half) return config.lr_end;
    const double t = static_cast<double>(epoch - half) / static_cast<double>(last - half);
    return config.lr_start + t * (config.lr_end - config.lr_start);
}

std::unique_ptr<TrainState> init_train_state(const TrainingConfig& config,
                                             const std::vector<double>& wavelengths) {
    config.validate();
    auto state = std::make_unique<TrainState>();
    state->config = config;
    state->wavelengths = wavelengths;
    state->gen = std::make_unique<nn::Generator<float>>(config.gen);
    state->disc = std::make_unique<nn::Discriminator<float>>(config.disc);
    state->opt_g = std::make_unique<nn::Adam<float>>(state->gen->params(), config.beta1,
                                                     config.beta2, config.adam_eps);
    state->opt_d = std::make_unique<nn::Adam<float>>(state->disc->params(), config.beta1,
                                                     config.beta2, config.adam_eps);
    state->shuffle = derive_stream(config.seed, "train/shuffle");
    return state;
}

namespace {

void write_le_f32(std::ofstream& out, const std::vector<float>& v, const std::string& path) {
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
    if (!out) throw IoError("failed writing checkpoint payload: " + path);
}

void read_le_f32(std::ifstream& in, std::vector<float>& v, const std::string& path) {
    if constexpr (std::endian::native == std::endian::little) {
        in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(v.size() * 4));
    } else {
        for (float& f : v) {
            unsigned char b[4];
            in.read(reinterpret_cast<char*>(b), 4);
            std::uint32_t u = std::uint32_t(b[0]) | std::uint32_t(b[1]) << 8 |
                              std::uint32_t(b[2]) << 16 | std::uint32_t(b[3]) << 24;
            std::memcpy(&f, &u, 4);
        }
    }
    if (!in) throw IoError("failed reading checkpoint payload: " + path);
}

// Every float vector in the checkpoint payload, in serialization order:
// network parameters first, then optimizer moments.
struct PayloadEntry {
    std::string name;
    std::vector<int> shape;
    std::vector<float>* data;
};

std::vector<PayloadEntry> payload_entries(TrainState& state) {
    std::vector<PayloadEntry> entries;
    auto add_params = [&](const std::string& prefix, std::vector<nn::ParamRef<float>> refs) {
        for (auto& r : refs) entries.push_back({prefix + r.name, r.shape, r.value});
    };
    auto add_moments = [&](const std::string& prefix, nn::Adam<float>& opt) {
        const auto& refs = opt.params();
        for (size_t i = 0; i < refs.size(); ++i) {
            entries.push_back({prefix + ".m:" + refs[i].name, refs[i].shape, &opt.moment1()[i]});
            entries.push_back({prefix + ".v:" + refs[i].name, refs[i].shape, &opt.moment2()[i]});
        }
    };
    add_params("gen:", state.gen->params());
    add_params("disc:", state.disc->params());
    add_moments("adam_g", *state.opt_g);
    add_moments("adam_d", *state.opt_d);
    return entries;
}

json generator_config_to_json(const nn::GeneratorConfig& g) {
    return json{{"depth", g.depth},
                {"plan", g.plan},
                {"in_channels", g.in_channels},
                {"out_bands", g.out_bands},
                {"dropout", g.dropout},
                {"width_multiplier", g.width_multiplier},
                {"norm", g.norm},
                {"seed", g.seed}};
}

nn::GeneratorConfig generator_config_from_json(const json& j) {
    nn::GeneratorConfig g;
    g.depth = j.at("depth").get<int>();
    g.plan = j.at("plan").get<std::vector<int>>();
    g.in_channels = j.at("in_channels").get<int>();
    g.out_bands = j.at("out_bands").get<int>();
    g.dropout = j.at("dropout").get<double>();
    g.width_multiplier = j.at("width_multiplier").get<double>();
    g.norm = j.at("norm").get<bool>();
    g.seed = j.at("seed").get<std::uint64_t>();
    return g;
}

json disc_config_to_json(const nn::DiscriminatorConfig& d) {
    return json{{"preset", nn::preset_to_string(d.preset)},
                {"in_channels", d.in_channels},
                {"width_multiplier", d.width_multiplier},
                {"seed", d.seed}};
}

nn::DiscriminatorConfig disc_config_from_json(const json& j) {
    nn::DiscriminatorConfig d;
    d.preset = nn::preset_from_string(j.at("preset").get<std::string>());
    d.in_channels = j.at("in_channels").get<int>();
    d.width_multiplier = j.at("width_multiplier").get<double>();
    d.seed = j.at("seed").get<std::uint64_t>();
    return d;
}

json training_config_to_json(const TrainingConfig& c) {
    return json{{"lambda_l1", c.lambda_l1},
                {"epochs", c.epochs},
                {"lr_start", c.lr_start},
                {"lr_end", c.lr_end},
                {"beta1", c.beta1},
                {"beta2", c.beta2},
                {"adam_eps", c.adam_eps},
                {"batch_size", c.batch_size},
                {"seed", c.seed},
                {"aux", nn::aux_to_string(c.aux)},
                {"schedule", schedule_to_string(c.schedule)},
                {"generator", generator_config_to_json(c.gen)},
                {"discriminator", disc_config_to_json(c.disc)}};
}

TrainingConfig training_config_from_json(const json& j) {
    TrainingConfig c;
    c.lambda_l1 = j.at("lambda_l1").get<double>();
    c.epochs = j.at("epochs").get<int>();
    c.lr_start = j.at("lr_start").get<double>();
    c.lr_end = j.at("lr_end").get<double>();
    c.beta1 = j.at("beta1").get<double>();
    c.beta2 = j.at("beta2").get<double>();
    c.adam_eps = j.at("adam_eps").get<double>();
    c.batch_size = j.at("batch_size").get<int>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.aux = nn::aux_from_string(j.at("aux").get<std::string>());
    c.schedule = schedule_from_string(j.at("schedule").get<std::string>());
    c.gen = generator_config_from_json(j.at("generator"));
    c.disc = disc_config_from_json(j.at("discriminator"));
    return c;
}

}  // namespace

void save_checkpoint(const TrainState& state, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create checkpoint directory " + dir.string() + ": " + ec.message());

    auto& mut = const_cast<TrainState&>(state);  // payload enumeration needs non-const refs
    auto entries = payload_entries(mut);

    json manifest;
    manifest["format"] = "ssr-checkpoint";
    manifest["version"] = 1;
    manifest["completed_epochs"] = state.completed_epochs;
    manifest["wavelengths"] = state.wavelengths;
    manifest["training"] = training_config_to_json(state.config);
    manifest["rng"] = {{"shuffle", state.shuffle.save_state()},
                       {"gen_dropout", mut.gen->dropout_rng().save_state()}};
    manifest["adam"] = {{"g_step", mut.opt_g->step_count()}, {"d_step", mut.opt_d->step_count()}};
    json hist = json::array();
    for (const auto& r : state.history)
        hist.push_back({r.epoch, r.step, r.d_loss, r.g_adv, r.g_aux, r.g_total});
    manifest["history"] = std::move(hist);

    json table = json::array();
    std::uint64_t offset = 0;
    for (const auto& e : entries) {
        table.push_back({{"name", e.name},
                         {"shape", e.shape},
                         {"offset", offset},
                         {"count", e.data->size()}});
        offset += e.data->size();
    }
    manifest["params"] = std::move(table);
    manifest["payload_floats"] = offset;

    {
        std::ofstream out(dir / "manifest.json");
        if (!out) throw IoError("cannot write " + (dir / "manifest.json").string());
        out << manifest.dump(2) << "\n";
        if (!out) throw IoError("failed writing " + (dir / "manifest.json").string());
    }
    std::ofstream bin(dir / "params.bin", std::ios::binary);
    if (!bin) throw IoError("cannot write " + (dir / "params.bin").string());
    for (const auto& e : entries) write_le_f32(bin, *e.data, (dir / "params.bin").string());
}

std::unique_ptr<TrainState> load_checkpoint(const std::filesystem::path& dir) {
    std::ifstream in(dir / "manifest.json");
    if (!in) throw IoError("cannot open checkpoint manifest: " + (dir / "manifest.json").string());
    json manifest;
    try {
        in >> manifest;
    } catch (const json::exception& e) {
        throw ValidationError("malformed checkpoint manifest in " + dir.string() + ": " + e.what());
    }

    std::unique_ptr<TrainState> state;
    std::uint64_t payload_floats = 0;
    try {
        if (manifest.at("format").get<std::string>() != "ssr-checkpoint")
            throw ValidationError("not a checkpoint manifest: " + dir.string());
        TrainingConfig config = training_config_from_json(manifest.at("training"));
        state = init_train_state(config,
                                 manifest.at("wavelengths").get<std::vector<double>>());
        state->completed_epochs = manifest.at("completed_epochs").get<int>();
        state->shuffle.load_state(manifest.at("rng").at("shuffle").get<std::string>());
        state->gen->dropout_rng().load_state(
            manifest.at("rng").at("gen_dropout").get<std::string>());
        state->opt_g->step_count() = manifest.at("adam").at("g_step").get<std::int64_t>();
        state->opt_d->step_count() = manifest.at("adam").at("d_step").get<std::int64_t>();
        for (const auto& r : manifest.at("history"))
            state->history.push_back({r.at(0).get<int>(), r.at(1).get<int>(),
                                      r.at(2).get<double>(), r.at(3).get<double>(),
                                      r.at(4).get<double>(), r.at(5).get<double>()});
        payload_floats = manifest.at("payload_floats").get<std::uint64_t>();

        auto entries = payload_entries(*state);
        const auto& table = manifest.at("params");
        if (table.size() != entries.size())
            throw ValidationError("checkpoint " + dir.string() + ": parameter table has " +
                                  std::to_string(table.size()) + " entries, expected " +
                                  std::to_string(entries.size()));
        std::uint64_t offset = 0;
        for (size_t i = 0; i < entries.size(); ++i) {
            const auto& row = table.at(i);
            if (row.at("name").get<std::string>() != entries[i].name ||
                row.at("count").get<std::uint64_t>() != entries[i].data->size() ||
                row.at("offset").get<std::uint64_t>() != offset)
                throw ValidationError("checkpoint " + dir.string() +
                                      ": parameter table mismatch at entry '" + entries[i].name +
                                      "'");
            offset += entries[i].data->size();
        }
        if (payload_floats != offset)
            throw ValidationError("checkpoint " + dir.string() + ": payload length mismatch");

        const auto bin_path = dir / "params.bin";
        std::ifstream bin(bin_path, std::ios::binary | std::ios::ate);
        if (!bin) throw IoError("cannot open checkpoint payload: " + bin_path.string());
        if (static_cast<std::uint64_t>(bin.tellg()) != payload_floats * 4)
            throw ValidationError("checkpoint payload " + bin_path.string() + " holds " +
                                  std::to_string(bin.tellg()) + " bytes, manifest implies " +
                                  std::to_string(payload_floats * 4));
        bin.seekg(0);
        for (auto& e : entries) read_le_f32(bin, *e.data, bin_path.string());
    } catch (const json::exception& e) {
        throw ValidationError("checkpoint manifest " + dir.string() +
                              " missing/invalid field: " + e.what());
    }
    return state;
}

namespace {

// Pulls the gradient of the band-channel part out of the discriminator
// input gradient (channels [in_rgb, in_rgb + bands)).
void add_si_slice(const nn::Tensor<float>& d_cat, int rgb_ch, nn::Tensor<float>& d_si) {
    const size_t plane = d_cat.plane();
    const float* src = d_cat.v.data() + static_cast<size_t>(rgb_ch) * plane;
    for (size_t i = 0; i < d_si.size(); ++i) d_si.v[i] += src[i];
}

}  // namespace

void train_epochs(TrainState& state, const PatchSet& patches,
                  const std::filesystem::path& checkpoint_dir, const StepObserver& observer,
                  int max_epochs) {
    const TrainingConfig& cfg = state.config;
    cfg.validate();
    int last_epoch = cfg.epochs;
    if (max_epochs >= 0)
        last_epoch = std::min(last_epoch, state.completed_epochs + max_epochs);

    std::vector<size_t> train_idx;
    for (size_t i = 0; i < patches.pairs.size(); ++i)
        if (patches.pairs[i].tag == Split::train) train_idx.push_back(i);
    if (train_idx.empty()) throw ValidationError("train: the train split is empty");
    for (size_t i : train_idx) {
        const PatchPair& p = patches.pairs[i];
        if (p.rgb.ch != cfg.gen.in_channels || p.target.ch != cfg.gen.out_bands)
            throw ValidationError("train: patch channel counts do not match the network config");
    }

    nn::Generator<float>& gen = *state.gen;
    nn::Discriminator<float>& disc = *state.disc;
    gen.set_mode(nn::Mode::training);

    const int rgb_ch = cfg.gen.in_channels;

    for (int epoch = state.completed_epochs; epoch < last_epoch; ++epoch) {
        const double lr = lr_at(epoch, cfg);

        // Fisher-Yates shuffle, re-dealt from the sorted index list each
        // epoch so the batch order is a pure function of the persisted RNG
        // state (a run resumed from a checkpoint replays the same batches).
        std::vector<size_t> order = train_idx;
        for (size_t i = order.size(); i > 1; --i) {
            const auto j = static_cast<size_t>(state.shuffle.uniform_int(0, static_cast<std::int64_t>(i) - 1));
            std::swap(order[i - 1], order[j]);
        }

        int step = 0;
        for (size_t start = 0; start < order.size(); start += cfg.batch_size, ++step) {
            const size_t bsz = std::min<size_t>(cfg.batch_size, order.size() - start);
            const float inv_b = 1.0f / static_cast<float>(bsz);

            std::vector<nn::Tensor<float>> fakes(bsz);
            std::vector<typename nn::Generator<float>::Trace> traces(bsz);
            for (size_t b = 0; b < bsz; ++b)
                fakes[b] = gen.forward(patches.pairs[order[start + b]].rgb, &traces[b]);

            // Discriminator step: real pairs toward 1, generated toward 0.
            disc.zero_grad();
            double d_loss = 0.0;
            for (size_t b = 0; b < bsz; ++b) {
                const PatchPair& pair = patches.pairs[order[start + b]];
                typename nn::Discriminator<float>::Trace tr_real, tr_fake;
                const auto s_real = disc.forward(pair.rgb, pair.target, &tr_real);
                const auto s_fake = disc.forward(pair.rgb, fakes[b], &tr_fake);
                d_loss += 0.5 * (nn::bce_with_logits_mean(s_real, 1.0f) +
                                 nn::bce_with_logits_mean(s_fake, 0.0f));
                disc.backward(tr_real, nn::bce_with_logits_grad(s_real, 1.0f, 0.5f * inv_b),
                              nullptr);
                disc.backward(tr_fake, nn::bce_with_logits_grad(s_fake, 0.0f, 0.5f * inv_b),
                              nullptr);
            }
            d_loss /= static_cast<double>(bsz);
            state.opt_d->step(lr);

            // Generator step against the updated discriminator; the cached
            // forward traces stay valid because only disc parameters moved.
            gen.zero_grad();
            double g_adv = 0.0, g_aux = 0.0;
            for (size_t b = 0; b < bsz; ++b) {
                const PatchPair& pair = patches.pairs[order[start + b]];
                typename nn::Discriminator<float>::Trace tr;
                const auto scores = disc.forward(pair.rgb, fakes[b], &tr);
                g_adv += nn::bce_with_logits_mean(scores, 1.0f);
                g_aux += nn::aux_loss(cfg.aux, fakes[b], pair.target);

                nn::Tensor<float> d_cat(cfg.disc.in_channels, fakes[b].h, fakes[b].w);
                disc.backward(tr, nn::bce_with_logits_grad(scores, 1.0f, inv_b), &d_cat,
                              /*accum_params=*/false);
                nn::Tensor<float> d_fake = nn::aux_grad(cfg.aux, fakes[b], pair.target,
                                                        static_cast<float>(cfg.lambda_l1) * inv_b);
                add_si_slice(d_cat, rgb_ch, d_fake);
                gen.backward(traces[b], d_fake);
            }
            g_adv /= static_cast<double>(bsz);
            g_aux /= static_cast<double>(bsz);
            state.opt_g->step(lr);

            LossRecord rec{epoch, step, d_loss, g_adv, g_aux, g_adv + cfg.lambda_l1 * g_aux};
            if (!std::isfinite(rec.d_loss) || !std::isfinite(rec.g_total))
                throw ValidationError("train: non-finite loss at epoch " + std::to_string(epoch) +
                                      " step " + std::to_string(step));
            state.history.push_back(rec);
            if (observer) observer(rec);
        }

        state.completed_epochs = epoch + 1;
        char name[32];
        std::snprintf(name, sizeof(name), "epoch-%03d", state.completed_epochs);
        save_checkpoint(state, checkpoint_dir / name);
    }
}

std::unique_ptr<TrainState> train(const TrainingConfig& config, const PatchSet& patches,
                                  const std::filesystem::path& checkpoint_dir,
                                  const StepObserver& observer) {
    auto state = init_train_state(config, patches.wavelengths);
    train_epochs(*state, patches, checkpoint_dir, observer);
    return state;
}

}  // namespace ssr
