#pragma once

#include <span>
#include <string>
#include <vector>

#include "sburg/grid.hpp"

namespace sburg {

enum class MollifierKind { gaussian, bump };

MollifierKind mollifier_kind_from_string(const std::string& s);

/// Symmetric mollifier sampled at cell centers, wrapped on the torus, with
/// its discrete self-convolution rho*rho. This object is the sole source of
/// the noise's spatial correlation: Cov(dV(x), dV(x')) = dt * selfconv(x-x').
struct SampledMollifier {
    PeriodicGrid grid;
    std::vector<double> values;    // rho at x_j, dx * sum(values) == 1
    double width = 0.0;
    double l2sq = 0.0;             // ||rho||^2_{L2}
    double deriv_l2sq = 0.0;       // ||d/dx rho||^2_{L2}
    std::vector<double> selfconv;  // (rho * rho)(x_j), periodic convolution

    /// selfconv at signed displacement r, by periodic linear interpolation.
    double selfconv_at(double r) const;
};

/// Samples rho on the grid; gaussian `width` is the standard deviation,
/// bump `width` is the support half-length. The kernel is normalized so that
/// its discrete integral is exactly 1.
SampledMollifier build_mollifier(MollifierKind kind, double width, const PeriodicGrid& grid);

/// Width->0 limit: a discrete delta of mass 1 (values[0] = 1/dx). Smoothing
/// with it is the identity; used to run the machinery with undressed noise.
SampledMollifier delta_mollifier(const PeriodicGrid& grid);

/// Identically-zero kernel: dV vanishes and every noise-derived constant
/// (||rho||^2 corrections included) is 0, turning the dynamics deterministic.
SampledMollifier zero_mollifier(const PeriodicGrid& grid);

}  // namespace sburg
