#include "sburg/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace sburg {

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

Fft::Fft(int n) : n_(n) {
    std::lock_guard lock(planner_mutex());
    real_buf_ = fftw_alloc_real(n);
    cplx_buf_ = fftw_alloc_complex(n / 2 + 1);
    plan_fwd_ = fftw_plan_dft_r2c_1d(n, real_buf_, static_cast<fftw_complex*>(cplx_buf_),
                                     FFTW_ESTIMATE);
    plan_inv_ = fftw_plan_dft_c2r_1d(n, static_cast<fftw_complex*>(cplx_buf_), real_buf_,
                                     FFTW_ESTIMATE);
}

Fft::~Fft() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(plan_inv_));
    fftw_free(real_buf_);
    fftw_free(cplx_buf_);
}

void Fft::forward(std::span<const double> in, std::complex<double>* out) const {
    std::memcpy(real_buf_, in.data(), sizeof(double) * n_);
    fftw_execute(static_cast<fftw_plan>(plan_fwd_));
    std::memcpy(out, cplx_buf_, sizeof(std::complex<double>) * n_modes());
}

void Fft::inverse(const std::complex<double>* in, std::span<double> out) const {
    std::memcpy(cplx_buf_, in, sizeof(std::complex<double>) * n_modes());
    fftw_execute(static_cast<fftw_plan>(plan_inv_));
    const double inv_n = 1.0 / n_;
    for (int j = 0; j < n_; ++j) out[j] = real_buf_[j] * inv_n;
}

Spectral::Spectral(const PeriodicGrid& g) : grid_(g), fft_(g.n), hat_(g.n / 2 + 1) {
    k_.resize(g.n / 2 + 1);
    for (int j = 0; j <= g.n / 2; ++j) k_[j] = 2.0 * std::numbers::pi * j / g.length;
}

void Spectral::heat(std::span<const double> in, double t, std::span<double> out) const {
    if (t < 0.0) throw std::invalid_argument("heat: t must be >= 0");
    fft_.forward(in, hat_.data());
    for (std::size_t j = 0; j < k_.size(); ++j) hat_[j] *= std::exp(-0.5 * k_[j] * k_[j] * t);
    fft_.inverse(hat_.data(), out);
}

void Spectral::ddx(std::span<const double> in, std::span<double> out) const {
    fft_.forward(in, hat_.data());
    for (std::size_t j = 0; j < k_.size(); ++j)
        hat_[j] *= std::complex<double>(0.0, k_[j]);
    hat_.back() = 0.0;  // odd derivative of the Nyquist mode is not representable
    fft_.inverse(hat_.data(), out);
}

void Spectral::shift(std::span<const double> in, double a, std::span<double> out) const {
    fft_.forward(in, hat_.data());
    for (std::size_t j = 0; j + 1 < k_.size(); ++j)
        hat_[j] *= std::exp(std::complex<double>(0.0, -k_[j] * a));
    // The Nyquist component of a real signal must stay real.
    hat_.back() *= std::cos(k_.back() * a);
    fft_.inverse(hat_.data(), out);
}

void Spectral::antiderivative(std::span<const double> in, std::span<double> out) const {
    fft_.forward(in, hat_.data());
    hat_[0] = 0.0;
    for (std::size_t j = 1; j + 1 < k_.size(); ++j)
        hat_[j] /= std::complex<double>(0.0, k_[j]);
    hat_.back() = 0.0;
    fft_.inverse(hat_.data(), out);
}

const Spectral& spectral_for(const PeriodicGrid& g) {
    thread_local std::map<int, std::unique_ptr<Spectral>> cache;
    auto it = cache.find(g.n);
    if (it == cache.end() || !(it->second->grid() == g))
        it = cache.insert_or_assign(g.n, std::make_unique<Spectral>(g)).first;
    return *it->second;
}

Field heat_apply(const Field& f, double t) {
    Field out(f.grid);
    spectral_for(f.grid).heat(f.v, t, out.v);
    return out;
}

Field ddx(const Field& f) {
    Field out(f.grid);
    spectral_for(f.grid).ddx(f.v, out.v);
    return out;
}

Field shift(const Field& f, double a) {
    Field out(f.grid);
    spectral_for(f.grid).shift(f.v, a, out.v);
    return out;
}

}  // namespace sburg
