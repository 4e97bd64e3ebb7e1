#pragma once

#include <cmath>
#include <string>

#include "ssr/tensor.hpp"

namespace ssr::nn {

enum class AuxKind { l1, l2 };

inline std::string aux_to_string(AuxKind k) { return k == AuxKind::l1 ? "l1" : "l2"; }

inline AuxKind aux_from_string(const std::string& s) {
    if (s == "l1") return AuxKind::l1;
    if (s == "l2") return AuxKind::l2;
    throw ValidationError("unknown aux loss kind: '" + s + "'");
}

template <typename T>
void require_finite(const Tensor<T>& t, const char* what) {
    for (T x : t.v)
        if (!std::isfinite(x)) throw ValidationError(std::string(what) + ": non-finite value");
}

// Numerically stable binary cross-entropy on logits against a constant
// label, averaged over all cells: max(z,0) - z*y + log(1 + exp(-|z|)).
template <typename T>
T bce_with_logits_mean(const Tensor<T>& logits, T label) {
    require_finite(logits, "bce logits");
    if (logits.size() == 0) throw ValidationError("bce: empty score map");
    double acc = 0.0;
    for (T z : logits.v) {
        const double zd = static_cast<double>(z);
        acc += std::max(zd, 0.0) - zd * static_cast<double>(label) +
               std::log1p(std::exp(-std::abs(zd)));
    }
    return static_cast<T>(acc / static_cast<double>(logits.size()));
}

// d(mean BCE)/dz = (sigmoid(z) - label) / N, times an external scale.
template <typename T>
Tensor<T> bce_with_logits_grad(const Tensor<T>& logits, T label, T scale) {
    Tensor<T> d(logits.ch, logits.h, logits.w);
    const T inv_n = scale / static_cast<T>(logits.size());
    for (size_t i = 0; i < logits.size(); ++i) {
        const T z = logits.v[i];
        T sig;
        if (z >= T(0)) {
            sig = T(1) / (T(1) + std::exp(-z));
        } else {
            const T e = std::exp(z);
            sig = e / (T(1) + e);
        }
        d.v[i] = (sig - label) * inv_n;
    }
    return d;
}

// 0.5 * [BCE(real, 1) + BCE(fake, 0)], the two-sided objective of the
// real/fake scorer.
template <typename T>
T discriminator_loss(const Tensor<T>& score_real, const Tensor<T>& score_fake) {
    return T(0.5) * (bce_with_logits_mean(score_real, T(1)) +
                     bce_with_logits_mean(score_fake, T(0)));
}

template <typename T>
T aux_loss(AuxKind kind, const Tensor<T>& fake, const Tensor<T>& target) {
    if (!fake.same_shape(target)) throw ValidationError("aux loss: shape mismatch");
    require_finite(fake, "aux fake");
    require_finite(target, "aux target");
    double acc = 0.0;
    if (kind == AuxKind::l1) {
        for (size_t i = 0; i < fake.size(); ++i)
            acc += std::abs(static_cast<double>(fake.v[i]) - static_cast<double>(target.v[i]));
    } else {
        for (size_t i = 0; i < fake.size(); ++i) {
            const double d = static_cast<double>(fake.v[i]) - static_cast<double>(target.v[i]);
            acc += d * d;
        }
    }
    return static_cast<T>(acc / static_cast<double>(fake.size()));
}

// Gradient of the mean aux loss with respect to `fake`, times `scale`.
template <typename T>
Tensor<T> aux_grad(AuxKind kind, const Tensor<T>& fake, const Tensor<T>& target, T scale) {
    if (!fake.same_shape(target)) throw ValidationError("aux grad: shape mismatch");
    Tensor<T> d(fake.ch, fake.h, fake.w);
    const T inv_n = scale / static_cast<T>(fake.size());
    if (kind == AuxKind::l1) {
        for (size_t i = 0; i < fake.size(); ++i) {
            const T diff = fake.v[i] - target.v[i];
            d.v[i] = diff > T(0) ? inv_n : diff < T(0) ? -inv_n : T(0);
        }
    } else {
        for (size_t i = 0; i < fake.size(); ++i)
            d.v[i] = T(2) * (fake.v[i] - target.v[i]) * inv_n;
    }
    return d;
}

}  // namespace ssr::nn
