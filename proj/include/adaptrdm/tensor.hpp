#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace adaptrdm {

using cplx = std::complex<double>;

/// Dense square tensors over one orbital dimension, flat row-major storage.
template <typename T>
struct Tensor2 {
    std::size_t n = 0;
    std::vector<T> data;

    Tensor2() = default;
    explicit Tensor2(std::size_t dim) : n(dim), data(dim * dim, T{}) {}

    T& operator()(std::size_t i, std::size_t j) { return data[i * n + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data[i * n + j]; }
};

template <typename T>
struct Tensor4 {
    std::size_t n = 0;
    std::vector<T> data;

    Tensor4() = default;
    explicit Tensor4(std::size_t dim) : n(dim), data(dim * dim * dim * dim, T{}) {}

    T& operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
        return data[((i * n + j) * n + k) * n + l];
    }
    const T& operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
        return data[((i * n + j) * n + k) * n + l];
    }
};

template <typename T>
struct Tensor6 {
    std::size_t n = 0;
    std::vector<T> data;

    Tensor6() = default;
    explicit Tensor6(std::size_t dim)
        : n(dim), data(dim * dim * dim * dim * dim * dim, T{}) {}

    T& operator()(std::size_t a, std::size_t b, std::size_t c,
                  std::size_t d, std::size_t e, std::size_t f) {
        return data[((((a * n + b) * n + c) * n + d) * n + e) * n + f];
    }
    const T& operator()(std::size_t a, std::size_t b, std::size_t c,
                        std::size_t d, std::size_t e, std::size_t f) const {
        return data[((((a * n + b) * n + c) * n + d) * n + e) * n + f];
    }
};

using Tensor2d = Tensor2<double>;
using Tensor4d = Tensor4<double>;
using Tensor2c = Tensor2<cplx>;
using Tensor4c = Tensor4<cplx>;
using Tensor6c = Tensor6<cplx>;

}  // namespace adaptrdm
