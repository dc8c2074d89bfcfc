#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace sburg {

/// Uniform grid on the torus [0, L), cells centered at x_j = j*dx.
/// n must be even so the real-to-complex spectral representation has a
/// well-defined Nyquist mode.
struct PeriodicGrid {
    double length = 0.0;
    int n = 0;
    double dx = 0.0;

    static PeriodicGrid make(double length, int n) {
        if (!(length > 0.0)) throw std::invalid_argument("grid: length must be > 0");
        if (n < 8) throw std::invalid_argument("grid: n must be >= 8");
        if (n % 2 != 0) throw std::invalid_argument("grid: n must be even");
        PeriodicGrid g;
        g.length = length;
        g.n = n;
        g.dx = length / n;
        return g;
    }

    double x(int j) const { return j * dx; }

    /// Signed displacement wrapped to [-L/2, L/2).
    double wrap(double r) const {
        r = std::fmod(r, length);
        if (r < -0.5 * length) r += length;
        if (r >= 0.5 * length) r -= length;
        return r;
    }

    bool operator==(const PeriodicGrid& o) const {
        return length == o.length && n == o.n;
    }
};

struct Field {
    PeriodicGrid grid;
    std::vector<double> v;

    Field() = default;
    explicit Field(const PeriodicGrid& g, double fill = 0.0) : grid(g), v(g.n, fill) {}
    Field(const PeriodicGrid& g, std::vector<double> values) : grid(g), v(std::move(values)) {
        if (static_cast<int>(v.size()) != g.n)
            throw std::invalid_argument("field: size does not match grid");
    }

    int n() const { return grid.n; }
    double& operator[](int j) { return v[j]; }
    double operator[](int j) const { return v[j]; }
};

inline void require_same_grid(const PeriodicGrid& a, const PeriodicGrid& b, const char* what) {
    if (!(a == b)) throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

}  // namespace sburg
