#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "ssr/nn/blas.hpp"
#include "ssr/rng.hpp"
#include "ssr/tensor.hpp"

namespace ssr::nn {

// Named view of one parameter tensor and its gradient accumulator. The
// registration order of these views is the serialization order.
template <typename T>
struct ParamRef {
    std::string name;
    std::vector<int> shape;
    std::vector<T>* value;
    std::vector<T>* grad;
};

inline int conv_out_size(int in, int k, int s, int p) {
    if (k < 1 || s < 1 || p < 0) throw ValidationError("conv: bad kernel/stride/padding");
    if (in + 2 * p < k)
        throw ValidationError("conv: input size " + std::to_string(in) +
                              " too small for kernel " + std::to_string(k));
    return (in + 2 * p - k) / s + 1;
}

inline int tconv_out_size(int in, int k, int s, int p) {
    int out = (in - 1) * s - 2 * p + k;
    if (out < 1) throw ValidationError("transposed conv: output size would be < 1");
    return out;
}

// col is (ch*k*k) x (oh*ow); row (c*k+i)*k+j holds the input value under
// kernel tap (i,j) of channel c for each output position.
template <typename T>
void im2col(const T* img, int ch, int ih, int iw, int k, int s, int p, int oh, int ow, T* col) {
    for (int c = 0; c < ch; ++c)
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) {
                T* row = col + (static_cast<size_t>(c) * k * k + i * k + j) *
                                   (static_cast<size_t>(oh) * ow);
                for (int oy = 0; oy < oh; ++oy) {
                    const int iy = oy * s - p + i;
                    if (iy < 0 || iy >= ih) {
                        std::fill_n(row + static_cast<size_t>(oy) * ow, ow, T(0));
                        continue;
                    }
                    const T* src = img + (static_cast<size_t>(c) * ih + iy) * iw;
                    T* dst = row + static_cast<size_t>(oy) * ow;
                    for (int ox = 0; ox < ow; ++ox) {
                        const int ix = ox * s - p + j;
                        dst[ox] = (ix >= 0 && ix < iw) ? src[ix] : T(0);
                    }
                }
            }
}

// Adjoint of im2col: scatter-adds column entries back into the image.
template <typename T>
void col2im(const T* col, int ch, int ih, int iw, int k, int s, int p, int oh, int ow, T* img) {
    for (int c = 0; c < ch; ++c)
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) {
                const T* row = col + (static_cast<size_t>(c) * k * k + i * k + j) *
                                         (static_cast<size_t>(oh) * ow);
                for (int oy = 0; oy < oh; ++oy) {
                    const int iy = oy * s - p + i;
                    if (iy < 0 || iy >= ih) continue;
                    T* dst = img + (static_cast<size_t>(c) * ih + iy) * iw;
                    const T* src = row + static_cast<size_t>(oy) * ow;
                    for (int ox = 0; ox < ow; ++ox) {
                        const int ix = ox * s - p + j;
                        if (ix >= 0 && ix < iw) dst[ix] += src[ox];
                    }
                }
            }
}

// Uniform on [-sqrt(6/fan_in), +sqrt(6/fan_in)]; variance 2/fan_in.
template <typename T>
void he_uniform_fill(std::vector<T>& w, int fan_in, RngStream& rng) {
    const double limit = std::sqrt(6.0 / fan_in);
    for (T& x : w) x = static_cast<T>(rng.uniform(-limit, limit));
}

template <typename T>
struct Conv2d {
    int in_ch = 0, out_ch = 0, k = 1, s = 1, p = 0;
    std::vector<T> w, b, gw, gb;  // w laid out [out_ch][in_ch*k*k]

    Conv2d() = default;
    Conv2d(int in, int out, int kernel, int stride, int pad)
        : in_ch(in), out_ch(out), k(kernel), s(stride), p(pad) {
        const size_t nw = static_cast<size_t>(out_ch) * in_ch * k * k;
        w.assign(nw, T(0));
        gw.assign(nw, T(0));
        b.assign(out_ch, T(0));
        gb.assign(out_ch, T(0));
    }

    int fan_in() const { return in_ch * k * k; }

    void init(RngStream& rng) {
        he_uniform_fill(w, fan_in(), rng);
        std::fill(b.begin(), b.end(), T(0));
    }

    Tensor<T> forward(const Tensor<T>& x) const {
        if (x.ch != in_ch) throw ValidationError("conv: channel mismatch");
        const int oh = conv_out_size(x.h, k, s, p);
        const int ow = conv_out_size(x.w, k, s, p);
        const int kk = in_ch * k * k;
        const int n = oh * ow;
        std::vector<T> col(static_cast<size_t>(kk) * n);
        im2col(x.v.data(), in_ch, x.h, x.w, k, s, p, oh, ow, col.data());
        Tensor<T> y(out_ch, oh, ow);
        gemm(false, false, out_ch, n, kk, T(1), w.data(), kk, col.data(), n, T(0), y.v.data(), n);
        for (int oc = 0; oc < out_ch; ++oc) {
            T* dst = y.v.data() + static_cast<size_t>(oc) * n;
            for (int i = 0; i < n; ++i) dst[i] += b[oc];
        }
        return y;
    }

    // x is the forward input, dy the gradient at the output. Parameter
    // gradients accumulate into gw/gb; input gradients add into *dx.
    void backward(const Tensor<T>& x, const Tensor<T>& dy, Tensor<T>* dx,
                  bool accum_params = true) {
        const int oh = dy.h, ow = dy.w;
        const int kk = in_ch * k * k;
        const int n = oh * ow;
        std::vector<T> col(static_cast<size_t>(kk) * n);
        im2col(x.v.data(), in_ch, x.h, x.w, k, s, p, oh, ow, col.data());
        if (accum_params) {
            gemm(false, true, out_ch, kk, n, T(1), dy.v.data(), n, col.data(), n, T(1), gw.data(),
                 kk);
            for (int oc = 0; oc < out_ch; ++oc) {
                const T* src = dy.v.data() + static_cast<size_t>(oc) * n;
                T acc = T(0);
                for (int i = 0; i < n; ++i) acc += src[i];
                gb[oc] += acc;
            }
        }
        if (dx) {
            std::vector<T> tmp(static_cast<size_t>(kk) * n);
            gemm(true, false, kk, n, out_ch, T(1), w.data(), kk, dy.v.data(), n, T(0), tmp.data(),
                 n);
            col2im(tmp.data(), in_ch, x.h, x.w, k, s, p, oh, ow, dx->v.data());
        }
    }
};

// Transposed convolution, implemented as the adjoint of a strided
// convolution: forward scatters (col2im), backward gathers (im2col).
template <typename T>
struct ConvTranspose2d {
    int in_ch = 0, out_ch = 0, k = 1, s = 1, p = 0;
    std::vector<T> w, b, gw, gb;  // w laid out [in_ch][out_ch*k*k]

    ConvTranspose2d() = default;
    ConvTranspose2d(int in, int out, int kernel, int stride, int pad)
        : in_ch(in), out_ch(out), k(kernel), s(stride), p(pad) {
        const size_t nw = static_cast<size_t>(in_ch) * out_ch * k * k;
        w.assign(nw, T(0));
        gw.assign(nw, T(0));
        b.assign(out_ch, T(0));
        gb.assign(out_ch, T(0));
    }

    int fan_in() const { return in_ch * k * k; }

    void init(RngStream& rng) {
        he_uniform_fill(w, fan_in(), rng);
        std::fill(b.begin(), b.end(), T(0));
    }

    Tensor<T> forward(const Tensor<T>& x) const {
        if (x.ch != in_ch) throw ValidationError("transposed conv: channel mismatch");
        const int oh = tconv_out_size(x.h, k, s, p);
        const int ow = tconv_out_size(x.w, k, s, p);
        const int kk = out_ch * k * k;
        const int n = x.h * x.w;
        std::vector<T> tmp(static_cast<size_t>(kk) * n);
        gemm(true, false, kk, n, in_ch, T(1), w.data(), kk, x.v.data(), n, T(0), tmp.data(), n);
        Tensor<T> y(out_ch, oh, ow);
        col2im(tmp.data(), out_ch, oh, ow, k, s, p, x.h, x.w, y.v.data());
        const size_t plane = y.plane();
        for (int oc = 0; oc < out_ch; ++oc) {
            T* dst = y.v.data() + static_cast<size_t>(oc) * plane;
            for (size_t i = 0; i < plane; ++i) dst[i] += b[oc];
        }
        return y;
    }

    void backward(const Tensor<T>& x, const Tensor<T>& dy, Tensor<T>* dx,
                  bool accum_params = true) {
        const int kk = out_ch * k * k;
        const int n = x.h * x.w;
        std::vector<T> col(static_cast<size_t>(kk) * n);
        im2col(dy.v.data(), out_ch, dy.h, dy.w, k, s, p, x.h, x.w, col.data());
        if (accum_params) {
            gemm(false, true, in_ch, kk, n, T(1), x.v.data(), n, col.data(), n, T(1), gw.data(),
                 kk);
            const size_t plane = dy.plane();
            for (int oc = 0; oc < out_ch; ++oc) {
                const T* src = dy.v.data() + static_cast<size_t>(oc) * plane;
                T acc = T(0);
                for (size_t i = 0; i < plane; ++i) acc += src[i];
                gb[oc] += acc;
            }
        }
        if (dx)
            gemm(false, false, in_ch, n, kk, T(1), w.data(), kk, col.data(), n, T(1),
                 dx->v.data(), n);
    }
};

template <typename T>
void leaky_relu_inplace(Tensor<T>& t, T slope) {
    for (T& x : t.v)
        if (x < T(0)) x *= slope;
}

// Gradient from the activation *output*: valid because a positive slope
// preserves sign, so y > 0 iff the pre-activation was > 0.
template <typename T>
void leaky_relu_backward(const Tensor<T>& y, Tensor<T>& d, T slope) {
    for (size_t i = 0; i < y.size(); ++i)
        if (y.v[i] <= T(0)) d.v[i] *= slope;
}

template <typename T>
void relu_inplace(Tensor<T>& t) {
    for (T& x : t.v)
        if (x < T(0)) x = T(0);
}

template <typename T>
void relu_backward(const Tensor<T>& y, Tensor<T>& d) {
    for (size_t i = 0; i < y.size(); ++i)
        if (y.v[i] <= T(0)) d.v[i] = T(0);
}

// Stable sigmoid, then clamped to the open interval so downstream range
// checks hold even where float rounding saturates to exactly 0 or 1.
template <typename T>
void sigmoid_inplace(Tensor<T>& t) {
    const T lo = std::nextafter(T(0), T(1));
    const T hi = std::nextafter(T(1), T(0));
    for (T& x : t.v) {
        T y;
        if (x >= T(0)) {
            y = T(1) / (T(1) + std::exp(-x));
        } else {
            const T e = std::exp(x);
            y = e / (T(1) + e);
        }
        x = std::clamp(y, lo, hi);
    }
}

template <typename T>
void sigmoid_backward(const Tensor<T>& y, Tensor<T>& d) {
    for (size_t i = 0; i < y.size(); ++i) d.v[i] *= y.v[i] * (T(1) - y.v[i]);
}

// Inverted dropout: kept entries scale by 1/(1-rate) so inference needs no
// rescaling. Returns the scaled mask for the backward pass.
template <typename T>
std::vector<T> dropout_inplace(Tensor<T>& t, double rate, RngStream& rng) {
    const T keep_scale = static_cast<T>(1.0 / (1.0 - rate));
    std::vector<T> mask(t.size());
    for (size_t i = 0; i < t.size(); ++i) {
        mask[i] = rng.uniform() < rate ? T(0) : keep_scale;
        t.v[i] *= mask[i];
    }
    return mask;
}

template <typename T>
void dropout_backward(const std::vector<T>& mask, Tensor<T>& d) {
    for (size_t i = 0; i < d.size(); ++i) d.v[i] *= mask[i];
}

// Per-channel statistics normalization over the spatial plane of a single
// sample, with learnable scale/shift.
template <typename T>
struct InstanceNorm2d {
    int ch = 0;
    T eps = static_cast<T>(1e-5);
    std::vector<T> gamma, beta, ggamma, gbeta;

    InstanceNorm2d() = default;
    explicit InstanceNorm2d(int channels) : ch(channels) {
        gamma.assign(ch, T(1));
        beta.assign(ch, T(0));
        ggamma.assign(ch, T(0));
        gbeta.assign(ch, T(0));
    }

    // Fills mu/istd (length ch) for the backward pass.
    Tensor<T> forward(const Tensor<T>& x, std::vector<T>& mu, std::vector<T>& istd) const {
        const size_t n = x.plane();
        mu.resize(ch);
        istd.resize(ch);
        Tensor<T> y(x.ch, x.h, x.w);
        for (int c = 0; c < ch; ++c) {
            const T* src = x.v.data() + static_cast<size_t>(c) * n;
            T m = T(0);
            for (size_t i = 0; i < n; ++i) m += src[i];
            m /= static_cast<T>(n);
            T var = T(0);
            for (size_t i = 0; i < n; ++i) var += (src[i] - m) * (src[i] - m);
            var /= static_cast<T>(n);
            const T is = T(1) / std::sqrt(var + eps);
            mu[c] = m;
            istd[c] = is;
            T* dst = y.v.data() + static_cast<size_t>(c) * n;
            for (size_t i = 0; i < n; ++i) dst[i] = gamma[c] * (src[i] - m) * is + beta[c];
        }
        return y;
    }

    Tensor<T> backward(const Tensor<T>& x, const std::vector<T>& mu, const std::vector<T>& istd,
                       const Tensor<T>& dy, bool accum_params = true) {
        const size_t n = x.plane();
        Tensor<T> dx(x.ch, x.h, x.w);
        for (int c = 0; c < ch; ++c) {
            const T* xs = x.v.data() + static_cast<size_t>(c) * n;
            const T* ds = dy.v.data() + static_cast<size_t>(c) * n;
            T* out = dx.v.data() + static_cast<size_t>(c) * n;
            T sum_d = T(0), sum_dxhat = T(0);
            for (size_t i = 0; i < n; ++i) {
                const T xhat = (xs[i] - mu[c]) * istd[c];
                sum_d += ds[i];
                sum_dxhat += ds[i] * xhat;
            }
            if (accum_params) {
                ggamma[c] += sum_dxhat;
                gbeta[c] += sum_d;
            }
            const T mean_d = sum_d / static_cast<T>(n);
            const T mean_dxhat = sum_dxhat / static_cast<T>(n);
            const T scale = gamma[c] * istd[c];
            for (size_t i = 0; i < n; ++i) {
                const T xhat = (xs[i] - mu[c]) * istd[c];
                out[i] = scale * (ds[i] - mean_d - xhat * mean_dxhat);
            }
        }
        return dx;
    }
};

}  // namespace ssr::nn
