#pragma once

#include <cstddef>
#include <vector>

#include "ssr/error.hpp"

namespace ssr::nn {

// Dense CHW tensor. Single sample; batches are loops over samples.
template <typename T>
struct Tensor {
    int ch = 0, h = 0, w = 0;
    std::vector<T> v;

    Tensor() = default;
    Tensor(int c, int hh, int ww) : ch(c), h(hh), w(ww), v(static_cast<size_t>(c) * hh * ww, T(0)) {}

    size_t size() const { return v.size(); }
    size_t plane() const { return static_cast<size_t>(h) * w; }

    T& at(int c, int y, int x) { return v[(static_cast<size_t>(c) * h + y) * w + x]; }
    const T& at(int c, int y, int x) const { return v[(static_cast<size_t>(c) * h + y) * w + x]; }

    bool same_shape(const Tensor& o) const { return ch == o.ch && h == o.h && w == o.w; }
};

template <typename T>
Tensor<T> concat_channels(const Tensor<T>& a, const Tensor<T>& b) {
    if (a.h != b.h || a.w != b.w)
        throw ValidationError("concat_channels: spatial size mismatch");
    Tensor<T> out(a.ch + b.ch, a.h, a.w);
    std::copy(a.v.begin(), a.v.end(), out.v.begin());
    std::copy(b.v.begin(), b.v.end(), out.v.begin() + a.v.size());
    return out;
}

// Splits dx of a channel concat back into the two inputs (accumulating).
template <typename T>
void split_channels_add(const Tensor<T>& d, int a_ch, Tensor<T>& da, Tensor<T>& db) {
    size_t na = static_cast<size_t>(a_ch) * d.plane();
    for (size_t i = 0; i < na; ++i) da.v[i] += d.v[i];
    for (size_t i = na; i < d.size(); ++i) db.v[i - na] += d.v[i];
}

}  // namespace ssr::nn
