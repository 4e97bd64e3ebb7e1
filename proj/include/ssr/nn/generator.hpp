#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ssr/nn/layers.hpp"

namespace ssr::nn {

enum class Mode { training, inference };

struct GeneratorConfig {
    int depth = 6;
    std::vector<int> plan = {64, 128, 256, 512, 512, 512};  // encoder widths, pre-multiplier
    int in_channels = 3;
    int out_bands = 31;
    double dropout = 0.5;
    double width_multiplier = 1.0;  // desk-scale shrink knob; topology stays fixed
    bool norm = false;              // optional per-channel statistics normalization
    std::uint64_t seed = 0;

    void validate() const {
        if (depth < 1 || static_cast<size_t>(depth) != plan.size())
            throw ValidationError("generator config: depth must equal the channel plan length");
        for (int c : plan)
            if (c < 1) throw ValidationError("generator config: channel widths must be >= 1");
        if (out_bands < 1) throw ValidationError("generator config: output bands must be >= 1");
        if (!(dropout >= 0.0 && dropout < 1.0))
            throw ValidationError("generator config: dropout must lie in [0,1)");
        if (!(width_multiplier > 0.0))
            throw ValidationError("generator config: width multiplier must be positive");
        if (in_channels < 1) throw ValidationError("generator config: input channels must be >= 1");
    }

    std::vector<int> scaled_plan() const {
        std::vector<int> scaled(plan.size());
        for (size_t i = 0; i < plan.size(); ++i)
            scaled[i] = std::max(1, static_cast<int>(std::lround(plan[i] * width_multiplier)));
        return scaled;
    }
};

// Encoder-decoder with skip concatenations: `depth` stride-2 4x4
// convolutions (LeakyReLU 0.2), a mirrored stack of stride-2 4x4 transposed
// convolutions (ReLU, dropout on all but the last two), then a 1x1
// convolution down to `out_bands` and a sigmoid.
template <typename T>
class Generator {
public:
    // Per-call activation record; one per sample, consumed by backward().
    struct Trace {
        Tensor<T> input;
        std::vector<Tensor<T>> enc_z;    // conv outputs pre-norm (norm runs only)
        std::vector<std::vector<T>> enc_mu, enc_istd;
        std::vector<Tensor<T>> enc_act;  // post-activation, the skip sources
        std::vector<Tensor<T>> dec_in;   // input to each transposed conv
        std::vector<Tensor<T>> dec_z;
        std::vector<std::vector<T>> dec_mu, dec_istd;
        std::vector<Tensor<T>> dec_act;  // post-ReLU, post-dropout
        std::vector<std::vector<T>> drop_mask;
        Tensor<T> output;
    };

    explicit Generator(const GeneratorConfig& cfg) : cfg_(cfg), plan_(cfg.scaled_plan()) {
        cfg_.validate();
        const int d = cfg_.depth;
        enc_.reserve(d);
        dec_.reserve(d);
        for (int i = 0; i < d; ++i)
            enc_.emplace_back(i == 0 ? cfg_.in_channels : plan_[i - 1], plan_[i], 4, 2, 1);
        for (int j = 0; j < d; ++j) {
            const int in = j == 0 ? plan_[d - 1] : dec_out_ch(j - 1) + plan_[d - 1 - j];
            dec_.emplace_back(in, dec_out_ch(j), 4, 2, 1);
        }
        head_ = Conv2d<T>(dec_out_ch(d - 1), cfg_.out_bands, 1, 1, 0);
        if (cfg_.norm) {
            for (int i = 0; i < d; ++i)
                enc_norm_.emplace_back(norm_on_enc(i) ? plan_[i] : 0);
            for (int j = 0; j < d; ++j)
                dec_norm_.emplace_back(norm_on_dec(j) ? dec_out_ch(j) : 0);
        }

        RngStream init = derive_stream(cfg_.seed, "init/generator");
        for (auto& layer : enc_) layer.init(init);
        for (auto& layer : dec_) layer.init(init);
        head_.init(init);
        dropout_rng_ = derive_stream(cfg_.seed, "dropout/generator");
    }

    const GeneratorConfig& config() const { return cfg_; }
    Mode mode() const { return mode_; }
    void set_mode(Mode m) { mode_ = m; }
    RngStream& dropout_rng() { return dropout_rng_; }

    Tensor<T> forward(const Tensor<T>& rgb, Trace* trace = nullptr) {
        if (rgb.ch != cfg_.in_channels)
            throw ValidationError("generator: expected " + std::to_string(cfg_.in_channels) +
                                  " input channels, got " + std::to_string(rgb.ch));
        const int div = 1 << cfg_.depth;
        if (rgb.h % div != 0 || rgb.w % div != 0)
            throw ValidationError("generator: spatial size " + std::to_string(rgb.w) + "x" +
                                  std::to_string(rgb.h) + " not divisible by " +
                                  std::to_string(div) +
                                  "; pad the input first (see pad_to_multiple)");

        const int d = cfg_.depth;
        Trace local;
        Trace& tr = trace ? *trace : local;
        tr.input = rgb;
        tr.enc_z.assign(d, {});
        tr.enc_mu.assign(d, {});
        tr.enc_istd.assign(d, {});
        tr.enc_act.clear();
        tr.enc_act.reserve(d);
        tr.dec_in.assign(d, {});
        tr.dec_z.assign(d, {});
        tr.dec_mu.assign(d, {});
        tr.dec_istd.assign(d, {});
        tr.dec_act.assign(d, {});
        tr.drop_mask.assign(d, {});

        const Tensor<T>* cur = &rgb;
        for (int i = 0; i < d; ++i) {
            Tensor<T> z = enc_[i].forward(*cur);
            if (cfg_.norm && norm_on_enc(i)) {
                tr.enc_z[i] = z;
                z = enc_norm_[i].forward(z, tr.enc_mu[i], tr.enc_istd[i]);
            }
            leaky_relu_inplace(z, T(0.2));
            tr.enc_act.push_back(std::move(z));
            cur = &tr.enc_act.back();
        }

        const bool drop_active = mode_ == Mode::training && cfg_.dropout > 0.0;
        for (int j = 0; j < d; ++j) {
            tr.dec_in[j] = j == 0 ? tr.enc_act[d - 1]
                                  : concat_channels(tr.dec_act[j - 1], tr.enc_act[d - 1 - j]);
            Tensor<T> z = dec_[j].forward(tr.dec_in[j]);
            if (cfg_.norm && norm_on_dec(j)) {
                tr.dec_z[j] = z;
                z = dec_norm_[j].forward(z, tr.dec_mu[j], tr.dec_istd[j]);
            }
            relu_inplace(z);
            if (drop_active && dropout_on_dec(j))
                tr.drop_mask[j] = dropout_inplace(z, cfg_.dropout, dropout_rng_);
            tr.dec_act[j] = std::move(z);
        }

        Tensor<T> out = head_.forward(tr.dec_act[d - 1]);
        sigmoid_inplace(out);
        tr.output = out;
        return out;
    }

    // Accumulates parameter gradients for the sample recorded in `trace`.
    void backward(const Trace& tr, const Tensor<T>& dout) {
        const int d = cfg_.depth;
        std::vector<Tensor<T>> denc(d), ddec(d);
        for (int i = 0; i < d; ++i)
            denc[i] = Tensor<T>(tr.enc_act[i].ch, tr.enc_act[i].h, tr.enc_act[i].w);
        for (int j = 0; j < d; ++j)
            ddec[j] = Tensor<T>(tr.dec_act[j].ch, tr.dec_act[j].h, tr.dec_act[j].w);

        Tensor<T> dhead = dout;
        sigmoid_backward(tr.output, dhead);
        head_.backward(tr.dec_act[d - 1], dhead, &ddec[d - 1]);

        for (int j = d - 1; j >= 0; --j) {
            Tensor<T>& dcur = ddec[j];
            if (!tr.drop_mask[j].empty()) dropout_backward(tr.drop_mask[j], dcur);
            relu_backward(tr.dec_act[j], dcur);
            Tensor<T> dz = std::move(dcur);
            if (cfg_.norm && norm_on_dec(j))
                dz = dec_norm_[j].backward(tr.dec_z[j], tr.dec_mu[j], tr.dec_istd[j], dz);
            Tensor<T> din(tr.dec_in[j].ch, tr.dec_in[j].h, tr.dec_in[j].w);
            dec_[j].backward(tr.dec_in[j], dz, &din);
            if (j == 0)
                for (size_t i = 0; i < din.size(); ++i) denc[d - 1].v[i] += din.v[i];
            else
                split_channels_add(din, ddec[j - 1].ch, ddec[j - 1], denc[d - 1 - j]);
        }

        for (int i = d - 1; i >= 0; --i) {
            Tensor<T>& dcur = denc[i];
            leaky_relu_backward(tr.enc_act[i], dcur, T(0.2));
            Tensor<T> dz = std::move(dcur);
            if (cfg_.norm && norm_on_enc(i))
                dz = enc_norm_[i].backward(tr.enc_z[i], tr.enc_mu[i], tr.enc_istd[i], dz);
            if (i == 0) {
                enc_[0].backward(tr.input, dz, nullptr);
            } else {
                enc_[i].backward(tr.enc_act[i - 1], dz, &denc[i - 1]);
            }
        }
    }

    std::vector<ParamRef<T>> params() {
        std::vector<ParamRef<T>> refs;
        for (int i = 0; i < cfg_.depth; ++i) {
            auto& l = enc_[i];
            refs.push_back({"enc" + std::to_string(i) + ".w", {l.out_ch, l.in_ch, l.k, l.k}, &l.w,
                            &l.gw});
            refs.push_back({"enc" + std::to_string(i) + ".b", {l.out_ch}, &l.b, &l.gb});
            if (cfg_.norm && norm_on_enc(i)) {
                auto& nm = enc_norm_[i];
                refs.push_back({"enc" + std::to_string(i) + ".gamma", {nm.ch}, &nm.gamma,
                                &nm.ggamma});
                refs.push_back({"enc" + std::to_string(i) + ".beta", {nm.ch}, &nm.beta,
                                &nm.gbeta});
            }
        }
        for (int j = 0; j < cfg_.depth; ++j) {
            auto& l = dec_[j];
            refs.push_back({"dec" + std::to_string(j) + ".w", {l.in_ch, l.out_ch, l.k, l.k}, &l.w,
                            &l.gw});
            refs.push_back({"dec" + std::to_string(j) + ".b", {l.out_ch}, &l.b, &l.gb});
            if (cfg_.norm && norm_on_dec(j)) {
                auto& nm = dec_norm_[j];
                refs.push_back({"dec" + std::to_string(j) + ".gamma", {nm.ch}, &nm.gamma,
                                &nm.ggamma});
                refs.push_back({"dec" + std::to_string(j) + ".beta", {nm.ch}, &nm.beta,
                                &nm.gbeta});
            }
        }
        refs.push_back({"head.w", {head_.out_ch, head_.in_ch, 1, 1}, &head_.w, &head_.gw});
        refs.push_back({"head.b", {head_.out_ch}, &head_.b, &head_.gb});
        return refs;
    }

    void zero_grad() {
        for (auto& ref : params()) std::fill(ref.grad->begin(), ref.grad->end(), T(0));
    }

private:
    int dec_out_ch(int j) const {
        return j <= cfg_.depth - 2 ? plan_[std::max(0, cfg_.depth - 2 - j)] : plan_[0];
    }
    bool dropout_on_dec(int j) const { return j <= cfg_.depth - 3; }
    // The first encoder block and the 1x1-spatial bottleneck stay
    // unnormalized (single-pixel statistics would erase the signal).
    bool norm_on_enc(int i) const { return i >= 1 && i <= cfg_.depth - 2; }
    bool norm_on_dec(int j) const { return j <= cfg_.depth - 2; }

    GeneratorConfig cfg_;
    std::vector<int> plan_;
    Mode mode_ = Mode::inference;
    std::vector<Conv2d<T>> enc_;
    std::vector<ConvTranspose2d<T>> dec_;
    std::vector<InstanceNorm2d<T>> enc_norm_, dec_norm_;
    Conv2d<T> head_;
    RngStream dropout_rng_;
};

}  // namespace ssr::nn
