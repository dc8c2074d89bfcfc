#include "sburg/mollifier.hpp"

#include <cmath>
#include <stdexcept>

#include "sburg/fft.hpp"

namespace sburg {

MollifierKind mollifier_kind_from_string(const std::string& s) {
    if (s == "gaussian") return MollifierKind::gaussian;
    if (s == "bump") return MollifierKind::bump;
    throw std::invalid_argument("mollifier: unknown kind '" + s + "'");
}

double SampledMollifier::selfconv_at(double r) const {
    double pos = std::fmod(r, grid.length);
    if (pos < 0.0) pos += grid.length;
    const double s = pos / grid.dx;
    const int j0 = static_cast<int>(s) % grid.n;
    const int j1 = (j0 + 1) % grid.n;
    const double frac = s - std::floor(s);
    return (1.0 - frac) * selfconv[j0] + frac * selfconv[j1];
}

namespace {

void finish(SampledMollifier& m) {
    const auto& g = m.grid;
    // Normalize the discrete integral to 1 exactly.
    double mass = 0.0;
    for (double v : m.values) mass += v;
    mass *= g.dx;
    if (!(mass > 0.0)) throw std::invalid_argument("mollifier: kernel has no mass on this grid");
    for (double& v : m.values) v /= mass;

    const Spectral& sp = spectral_for(g);
    // selfconv = dx * (circular convolution of values with itself).
    std::vector<std::complex<double>> hat(sp.fft().n_modes());
    sp.fft().forward(m.values, hat.data());
    for (auto& h : hat) h = h * h * g.dx;
    m.selfconv.resize(g.n);
    sp.fft().inverse(hat.data(), m.selfconv);

    m.l2sq = 0.0;
    for (double v : m.values) m.l2sq += v * v;
    m.l2sq *= g.dx;

    std::vector<double> dv(g.n);
    sp.ddx(m.values, dv);
    m.deriv_l2sq = 0.0;
    for (double v : dv) m.deriv_l2sq += v * v;
    m.deriv_l2sq *= g.dx;
}

}  // namespace

SampledMollifier build_mollifier(MollifierKind kind, double width, const PeriodicGrid& grid) {
    if (!(width > 0.0)) throw std::invalid_argument("mollifier: width must be > 0");
    if (width > grid.length / 8.0)
        throw std::invalid_argument(
            "mollifier: width exceeds length/8; the torus must be at least 8x wider than the "
            "mollifier so wrap-around correlation is negligible");

    SampledMollifier m;
    m.grid = grid;
    m.width = width;
    m.values.resize(grid.n);
    for (int j = 0; j < grid.n; ++j) {
        const double r = grid.wrap(grid.x(j));
        switch (kind) {
            case MollifierKind::gaussian:
                m.values[j] = std::exp(-0.5 * r * r / (width * width));
                break;
            case MollifierKind::bump: {
                const double s = r / width;
                m.values[j] = (std::fabs(s) < 1.0) ? std::exp(-1.0 / (1.0 - s * s)) : 0.0;
                break;
            }
        }
    }
    finish(m);
    return m;
}

SampledMollifier delta_mollifier(const PeriodicGrid& grid) {
    SampledMollifier m;
    m.grid = grid;
    m.width = 0.0;
    m.values.assign(grid.n, 0.0);
    m.values[0] = 1.0 / grid.dx;
    finish(m);
    return m;
}

SampledMollifier zero_mollifier(const PeriodicGrid& grid) {
    SampledMollifier m;
    m.grid = grid;
    m.width = 0.0;
    m.values.assign(grid.n, 0.0);
    m.selfconv.assign(grid.n, 0.0);
    m.l2sq = 0.0;
    m.deriv_l2sq = 0.0;
    return m;
}

}  // namespace sburg
