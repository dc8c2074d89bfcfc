#include "sburg/noise.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "sburg/fft.hpp"

namespace sburg {

NoisePath::NoisePath(std::uint64_t seed, double dt, std::uint64_t steps, const PeriodicGrid& grid,
                     std::uint64_t stream_id)
    : seed_(seed), stream_(stream_id), dt_(dt), steps_(steps), grid_(grid), rng_(seed, stream_id) {
    if (!(dt > 0.0)) throw std::invalid_argument("noise: dt must be > 0");
    if (steps < 1) throw std::invalid_argument("noise: steps must be >= 1");
}

void NoisePath::row(std::uint64_t step, std::span<double> out) const {
    if (step >= steps_) throw std::out_of_range("noise: step index out of range");
    const int n = grid_.n;
    if (storage_) {
        std::memcpy(out.data(), storage_->data() + step * n, sizeof(double) * n);
        return;
    }
    const double sigma = std::sqrt(dt_ / grid_.dx);
    const std::uint64_t base = step * static_cast<std::uint64_t>(n);
    for (int k = 0; k < n; ++k) out[k] = sigma * rng_.normal_at(base + k);
}

std::vector<double> NoisePath::row(std::uint64_t step) const {
    std::vector<double> out(grid_.n);
    row(step, out);
    return out;
}

void NoisePath::materialize() {
    if (storage_) return;
    std::vector<double> data(steps_ * static_cast<std::size_t>(grid_.n));
    for (std::uint64_t s = 0; s < steps_; ++s)
        row(s, std::span<double>(data.data() + s * grid_.n, grid_.n));
    storage_ = std::move(data);
}

namespace {
constexpr char kNoiseMagic[4] = {'B', 'N', 'P', '1'};
constexpr std::uint32_t kNoiseVersion = 1;

template <typename T>
void write_pod(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
void read_pod(std::istream& is, T& v) {
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
}
}  // namespace

void NoisePath::save(const std::filesystem::path& file) const {
    std::ofstream os(file, std::ios::binary);
    if (!os) throw std::runtime_error("noise: cannot open " + file.string() + " for writing");
    os.write(kNoiseMagic, 4);
    write_pod(os, kNoiseVersion);
    write_pod(os, seed_);
    write_pod(os, dt_);
    write_pod(os, steps_);
    write_pod(os, static_cast<std::uint64_t>(grid_.n));
    std::vector<double> buf(grid_.n);
    for (std::uint64_t s = 0; s < steps_; ++s) {
        row(s, buf);
        os.write(reinterpret_cast<const char*>(buf.data()), sizeof(double) * grid_.n);
    }
    if (!os) throw std::runtime_error("noise: write failed for " + file.string());
}

NoisePath NoisePath::load(const std::filesystem::path& file, const PeriodicGrid& grid) {
    std::ifstream is(file, std::ios::binary);
    if (!is) throw std::runtime_error("noise: cannot open " + file.string());
    char magic[4];
    is.read(magic, 4);
    if (std::memcmp(magic, kNoiseMagic, 4) != 0)
        throw std::runtime_error("noise: bad magic in " + file.string());
    std::uint32_t version;
    read_pod(is, version);
    if (version != kNoiseVersion) throw std::runtime_error("noise: unsupported version");
    std::uint64_t seed, steps, n;
    double dt;
    read_pod(is, seed);
    read_pod(is, dt);
    read_pod(is, steps);
    read_pod(is, n);
    if (static_cast<int>(n) != grid.n)
        throw std::runtime_error("noise: file grid size does not match");
    NoisePath path(seed, dt, steps, grid, /*stream_id=*/0);
    std::vector<double> data(steps * n);
    is.read(reinterpret_cast<char*>(data.data()), sizeof(double) * data.size());
    if (!is) throw std::runtime_error("noise: truncated file " + file.string());
    path.storage_ = std::move(data);
    return path;
}

NoisePath NoisePath::materialized(std::uint64_t seed, double dt, std::uint64_t steps,
                                  const PeriodicGrid& grid, std::uint64_t stream_id,
                                  std::vector<double> data) {
    if (data.size() != steps * static_cast<std::size_t>(grid.n))
        throw std::invalid_argument("noise: materialized data size mismatch");
    NoisePath path(seed, dt, steps, grid, stream_id);
    path.storage_ = std::move(data);
    return path;
}

NoisePath sample_noise_path(std::uint64_t seed, double dt, std::uint64_t steps,
                            const PeriodicGrid& grid, std::uint64_t rng_stream_id) {
    return NoisePath(seed, dt, steps, grid, rng_stream_id);
}

void smooth_increment(std::span<const double> w, const SampledMollifier& rho,
                      std::span<double> out) {
    const PeriodicGrid& g = rho.grid;
    if (w.size() != static_cast<std::size_t>(g.n))
        throw std::invalid_argument("smooth_increment: grid mismatch");
    const Spectral& sp = spectral_for(g);
    std::vector<std::complex<double>> what(sp.fft().n_modes()), rhat(sp.fft().n_modes());
    sp.fft().forward(w, what.data());
    sp.fft().forward(rho.values, rhat.data());
    for (std::size_t j = 0; j < what.size(); ++j) what[j] *= rhat[j] * g.dx;
    sp.fft().inverse(what.data(), out);
}

std::vector<double> smooth_increment(std::span<const double> w, const SampledMollifier& rho) {
    std::vector<double> out(rho.grid.n);
    smooth_increment(w, rho, out);
    return out;
}

LinearizedField psi_step(const LinearizedField& field, std::span<const double> dV, double dt) {
    const PeriodicGrid& g = field.psi.grid;
    if (dV.size() != static_cast<std::size_t>(g.n))
        throw std::invalid_argument("psi_step: grid mismatch");
    const Spectral& sp = spectral_for(g);
    const auto& k = sp.wavenumbers();
    std::vector<std::complex<double>> psi_hat(sp.fft().n_modes()), dv_hat(sp.fft().n_modes());
    sp.fft().forward(field.psi.v, psi_hat.data());
    sp.fft().forward(dV, dv_hat.data());
    for (std::size_t j = 0; j < k.size(); ++j) {
        const double decay = std::exp(-0.5 * k[j] * k[j] * dt);
        psi_hat[j] = decay * (psi_hat[j] + std::complex<double>(0.0, k[j]) * dv_hat[j]);
    }
    psi_hat[0] = 0.0;
    psi_hat.back() = 0.0;  // ik truncated at the Nyquist mode, as in ddx
    LinearizedField out{Field(g), field.t + dt};
    sp.fft().inverse(psi_hat.data(), out.psi.v);
    return out;
}

std::vector<double> psi_stationary_covariance(const SampledMollifier& rho, double t,
                                              const PeriodicGrid& grid) {
    if (t < 0.0) throw std::invalid_argument("psi_stationary_covariance: t must be >= 0");
    require_same_grid(rho.grid, grid, "psi_stationary_covariance");
    const Spectral& sp = spectral_for(grid);
    const auto& k = sp.wavenumbers();
    std::vector<std::complex<double>> hat(sp.fft().n_modes());
    sp.fft().forward(rho.selfconv, hat.data());
    for (std::size_t j = 0; j < k.size(); ++j) hat[j] *= -std::expm1(-k[j] * k[j] * t);
    std::vector<double> out(grid.n);
    sp.fft().inverse(hat.data(), out);
    return out;
}

PsiEvolver::PsiEvolver(const PeriodicGrid& grid, const SampledMollifier& rho, bool track_omega)
    : grid_(grid), rho_(&rho), track_omega_(track_omega) {
    require_same_grid(grid, rho.grid, "PsiEvolver");
    const Spectral& sp = spectral_for(grid);
    const int m = sp.fft().n_modes();
    psi_hat_.assign(m, 0.0);
    omega_hat_.assign(m, 0.0);
    scratch_hat_.resize(m);
    rho_hat_.resize(m);
    sp.fft().forward(rho.values, rho_hat_.data());
    psi_.assign(grid.n, 0.0);
    omega_.assign(grid.n, 0.0);
    dV_.assign(grid.n, 0.0);
}

void PsiEvolver::step(std::span<const double> dW, double dt) {
    const Spectral& sp = spectral_for(grid_);
    const auto& k = sp.wavenumbers();
    sp.fft().forward(dW, scratch_hat_.data());
    for (std::size_t j = 0; j < scratch_hat_.size(); ++j)
        scratch_hat_[j] *= rho_hat_[j] * grid_.dx;  // dV-hat
    sp.fft().inverse(scratch_hat_.data(), dV_);
    for (std::size_t j = 1; j + 1 < k.size(); ++j) {
        const double decay = std::exp(-0.5 * k[j] * k[j] * dt);
        psi_hat_[j] = decay * (psi_hat_[j] + std::complex<double>(0.0, k[j]) * scratch_hat_[j]);
    }
    sp.fft().inverse(psi_hat_.data(), psi_);
    if (track_omega_) {
        for (std::size_t j = 0; j < k.size(); ++j) {
            const double decay = std::exp(-0.5 * k[j] * k[j] * dt);
            omega_hat_[j] = decay * (omega_hat_[j] + scratch_hat_[j]);
        }
        sp.fft().inverse(omega_hat_.data(), omega_);
    }
    t_ += dt;
}

}  // namespace sburg
