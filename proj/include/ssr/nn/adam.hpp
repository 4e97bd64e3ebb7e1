#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "ssr/nn/layers.hpp"

namespace ssr::nn {

// Adam over a fixed parameter list; first and second moments live here and
// serialize with checkpoints.
template <typename T>
class Adam {
public:
    explicit Adam(std::vector<ParamRef<T>> params, double beta1 = 0.9, double beta2 = 0.999,
                  double eps = 1e-8)
        : params_(std::move(params)), beta1_(beta1), beta2_(beta2), eps_(eps) {
        m_.reserve(params_.size());
        v_.reserve(params_.size());
        for (const auto& p : params_) {
            m_.emplace_back(p.value->size(), T(0));
            v_.emplace_back(p.value->size(), T(0));
        }
    }

    void step(double lr) {
        ++t_;
        const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
        const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
        for (size_t i = 0; i < params_.size(); ++i) {
            std::vector<T>& w = *params_[i].value;
            const std::vector<T>& g = *params_[i].grad;
            std::vector<T>& m = m_[i];
            std::vector<T>& v = v_[i];
            for (size_t j = 0; j < w.size(); ++j) {
                m[j] = static_cast<T>(beta1_ * m[j] + (1.0 - beta1_) * g[j]);
                v[j] = static_cast<T>(beta2_ * v[j] + (1.0 - beta2_) * g[j] * g[j]);
                const double mhat = m[j] / bc1;
                const double vhat = v[j] / bc2;
                w[j] = static_cast<T>(w[j] - lr * mhat / (std::sqrt(vhat) + eps_));
            }
        }
    }

    const std::vector<ParamRef<T>>& params() const { return params_; }
    std::vector<std::vector<T>>& moment1() { return m_; }
    std::vector<std::vector<T>>& moment2() { return v_; }
    std::int64_t& step_count() { return t_; }

private:
    std::vector<ParamRef<T>> params_;
    double beta1_, beta2_, eps_;
    std::int64_t t_ = 0;
    std::vector<std::vector<T>> m_, v_;
};

}  // namespace ssr::nn
