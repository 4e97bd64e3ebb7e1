#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ssr/nn/layers.hpp"

namespace ssr::nn {

struct DiscLayer {
    int k = 1;
    int s = 1;
    int width = 1;
};

enum class DiscPreset { rf1, rf16, rf34, rf70 };

// Receptive field of a stacked plan via the backward recurrence
// r <- r*s + (k - s), starting from r = 1 at the last layer.
inline int receptive_field(const std::vector<std::pair<int, int>>& ks_plan) {
    if (ks_plan.empty()) throw ValidationError("receptive_field: empty plan");
    int r = 1;
    for (auto it = ks_plan.rbegin(); it != ks_plan.rend(); ++it) {
        const auto [k, s] = *it;
        if (k < 1 || s < 1) throw ValidationError("receptive_field: kernel/stride must be >= 1");
        r = r * s + (k - s);
    }
    return r;
}

inline std::string preset_to_string(DiscPreset p) {
    switch (p) {
        case DiscPreset::rf1: return "rf1";
        case DiscPreset::rf16: return "rf16";
        case DiscPreset::rf34: return "rf34";
        case DiscPreset::rf70: return "rf70";
    }
    throw ValidationError("unknown discriminator preset");
}

inline DiscPreset preset_from_string(const std::string& s) {
    if (s == "rf1") return DiscPreset::rf1;
    if (s == "rf16") return DiscPreset::rf16;
    if (s == "rf34") return DiscPreset::rf34;
    if (s == "rf70") return DiscPreset::rf70;
    throw ValidationError("unknown discriminator preset: '" + s + "'");
}

inline int preset_nominal_rf(DiscPreset p) {
    switch (p) {
        case DiscPreset::rf1: return 1;
        case DiscPreset::rf16: return 16;
        case DiscPreset::rf34: return 34;
        case DiscPreset::rf70: return 70;
    }
    throw ValidationError("unknown discriminator preset");
}

inline std::vector<DiscLayer> preset_plan(DiscPreset p) {
    switch (p) {
        case DiscPreset::rf70:
            return {{4, 2, 64}, {4, 2, 128}, {4, 2, 256}, {4, 1, 512}, {4, 1, 1}};
        case DiscPreset::rf34: return {{4, 2, 64}, {4, 2, 128}, {4, 1, 256}, {4, 1, 1}};
        case DiscPreset::rf16: return {{4, 2, 64}, {4, 1, 128}, {4, 1, 1}};
        case DiscPreset::rf1: return {{1, 1, 64}, {1, 1, 128}, {1, 1, 1}};
    }
    throw ValidationError("unknown discriminator preset");
}

struct DiscriminatorConfig {
    DiscPreset preset = DiscPreset::rf70;
    int in_channels = 34;  // 3 rgb + 31 band channels, concatenated
    double width_multiplier = 1.0;
    std::uint64_t seed = 0;

    // Preset plan with widths scaled by the multiplier; the final 1-channel
    // logit layer never scales.
    std::vector<DiscLayer> plan() const {
        auto layers = preset_plan(preset);
        for (size_t i = 0; i + 1 < layers.size(); ++i)
            layers[i].width =
                std::max(1, static_cast<int>(std::lround(layers[i].width * width_multiplier)));
        return layers;
    }

    void validate() const {
        if (in_channels < 1)
            throw ValidationError("discriminator config: input channels must be >= 1");
        if (!(width_multiplier > 0.0))
            throw ValidationError("discriminator config: width multiplier must be positive");
        std::vector<std::pair<int, int>> ks;
        for (const auto& l : plan()) ks.emplace_back(l.k, l.s);
        const int rf = receptive_field(ks);
        if (rf != preset_nominal_rf(preset))
            throw ValidationError("discriminator config: plan receptive field " +
                                  std::to_string(rf) + " != preset nominal " +
                                  std::to_string(preset_nominal_rf(preset)));
    }
};

// Fully convolutional real/fake scorer over (rgb, bands) pairs: plan layers
// with LeakyReLU 0.2 in between, raw logits out. Padding is (k-1)/2.
template <typename T>
class Discriminator {
public:
    struct Trace {
        std::vector<Tensor<T>> x;  // input of each layer
        Tensor<T> scores;
    };

    explicit Discriminator(const DiscriminatorConfig& cfg) : cfg_(cfg) {
        cfg_.validate();
        const auto plan = cfg_.plan();
        int in = cfg_.in_channels;
        for (const auto& l : plan) {
            layers_.emplace_back(in, l.width, l.k, l.s, (l.k - 1) / 2);
            in = l.width;
        }
        RngStream init = derive_stream(cfg_.seed, "init/discriminator");
        for (auto& layer : layers_) layer.init(init);
    }

    const DiscriminatorConfig& config() const { return cfg_; }

    Tensor<T> forward(const Tensor<T>& rgb, const Tensor<T>& si, Trace* trace = nullptr) {
        if (rgb.h != si.h || rgb.w != si.w)
            throw ValidationError("discriminator: rgb and band input sizes differ");
        return forward_cat(concat_channels(rgb, si), trace);
    }

    Tensor<T> forward_cat(const Tensor<T>& cat, Trace* trace = nullptr) {
        if (cat.ch != cfg_.in_channels)
            throw ValidationError("discriminator: expected " + std::to_string(cfg_.in_channels) +
                                  " channels, got " + std::to_string(cat.ch));
        Trace local;
        Trace& tr = trace ? *trace : local;
        tr.x.clear();
        tr.x.reserve(layers_.size());
        tr.x.push_back(cat);
        Tensor<T> cur;
        for (size_t i = 0; i < layers_.size(); ++i) {
            cur = layers_[i].forward(tr.x.back());
            if (i + 1 < layers_.size()) {
                leaky_relu_inplace(cur, T(0.2));
                tr.x.push_back(std::move(cur));
            }
        }
        tr.scores = std::move(cur);
        return tr.scores;
    }

    // dscores: gradient at the logits. If d_input is non-null the gradient
    // with respect to the 34-channel input is added into it (used for the
    // generator update, where the discriminator parameters stay frozen).
    void backward(const Trace& tr, const Tensor<T>& dscores, Tensor<T>* d_input,
                  bool accum_params = true) {
        Tensor<T> d = dscores;
        for (int i = static_cast<int>(layers_.size()) - 1; i >= 0; --i) {
            const bool need_dx = i > 0 || d_input != nullptr;
            Tensor<T> dx;
            if (need_dx) dx = Tensor<T>(tr.x[i].ch, tr.x[i].h, tr.x[i].w);
            layers_[i].backward(tr.x[i], d, need_dx ? &dx : nullptr, accum_params);
            if (i > 0) {
                leaky_relu_backward(tr.x[i], dx, T(0.2));
                d = std::move(dx);
            } else if (d_input) {
                for (size_t j = 0; j < dx.size(); ++j) d_input->v[j] += dx.v[j];
            }
        }
    }

    std::vector<ParamRef<T>> params() {
        std::vector<ParamRef<T>> refs;
        for (size_t i = 0; i < layers_.size(); ++i) {
            auto& l = layers_[i];
            refs.push_back({"disc" + std::to_string(i) + ".w", {l.out_ch, l.in_ch, l.k, l.k},
                            &l.w, &l.gw});
            refs.push_back({"disc" + std::to_string(i) + ".b", {l.out_ch}, &l.b, &l.gb});
        }
        return refs;
    }

    void zero_grad() {
        for (auto& ref : params()) std::fill(ref.grad->begin(), ref.grad->end(), T(0));
    }

private:
    DiscriminatorConfig cfg_;
    std::vector<Conv2d<T>> layers_;
};

}  // namespace ssr::nn
