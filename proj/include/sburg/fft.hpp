#pragma once

#include <complex>
#include <span>
#include <vector>

#include "sburg/grid.hpp"

namespace sburg {

/// Thin wrapper over FFTW r2c/c2r transforms of a fixed size. Forward is
/// unnormalized; inverse divides by n. Each instance owns its plans and
/// buffers, so distinct instances may be used concurrently; plan
/// creation/destruction is serialized internally (the FFTW planner is not
/// thread-safe).
class Fft {
public:
    explicit Fft(int n);
    ~Fft();
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    int n() const { return n_; }
    int n_modes() const { return n_ / 2 + 1; }

    void forward(std::span<const double> in, std::complex<double>* out) const;
    void inverse(const std::complex<double>* in, std::span<double> out) const;

private:
    int n_;
    void* plan_fwd_;
    void* plan_inv_;
    double* real_buf_;
    void* cplx_buf_;
};

/// Spectral operator kit for one grid: wavenumbers, heat semigroup,
/// derivative, exact translation. A thread-local instance per grid size is
/// available through `spectral_for`.
class Spectral {
public:
    explicit Spectral(const PeriodicGrid& g);

    const PeriodicGrid& grid() const { return grid_; }
    const std::vector<double>& wavenumbers() const { return k_; }
    const Fft& fft() const { return fft_; }

    void heat(std::span<const double> in, double t, std::span<double> out) const;
    void ddx(std::span<const double> in, std::span<double> out) const;
    void shift(std::span<const double> in, double a, std::span<double> out) const;
    /// Zero-mean antiderivative of a (numerically) mean-zero field.
    void antiderivative(std::span<const double> in, std::span<double> out) const;

private:
    PeriodicGrid grid_;
    Fft fft_;
    std::vector<double> k_;  // k_j = 2*pi*j/L for j = 0..n/2
    mutable std::vector<std::complex<double>> hat_;
};

/// Thread-local Spectral instance for this grid (keyed by n).
const Spectral& spectral_for(const PeriodicGrid& g);

// Field-level convenience wrappers.
Field heat_apply(const Field& f, double t);
Field ddx(const Field& f);
Field shift(const Field& f, double a);

}  // namespace sburg
