#pragma once

#include <array>
#include <span>
#include <string>

#include "kkltype/cube.hpp"
#include "kkltype/errors.hpp"
#include "kkltype/quadrature.hpp"

namespace kkltype {

inline constexpr int kChainDimensionLimit = 16;

struct Reconstruction {
  /// Approximation of f - Ef.
  CubeFunction value;
  double error_estimate;
  std::size_t panels;
};

/// Rebuilds f - Ef from the integrated heat identity
///   f - Ef = 2 int_0^inf E_xi sum_j delta_j(t) D_j P_t f(eps xi(t)) dt / sqrt(e^{2t}-1),
/// evaluating the inner expectation exactly at every quadrature node.
inline Reconstruction chain_reconstruct(const CubeFunction& f, const QuadratureSpec& quad = {}) {
  if (f.n() > kChainDimensionLimit)
    throw std::invalid_argument("chain_reconstruct: n must be <= 16");
  const std::size_t dim = f.data().size();
  if (f.n() == 0) return {CubeFunction::zero(0, f.d()), 0.0, 0};

  const WalshSpectrum spectrum = walsh_transform(f);
  auto integrand = [&](double w, std::span<double> out) {
    const double t = HeatTimeMap::time(w);
    const double scale = 2.0 * HeatTimeMap::jacobian(w);
    if (!(t > 0.0) || !std::isfinite(t)) {
      std::fill(out.begin(), out.end(), 0.0);
      return;
    }
    const CubeFunction pt =
        inverse_walsh(scale_by_degree(spectrum, [t](int k) { return std::exp(-t * k); }));
    const CubeFunction drift = detail::noise_drift_field(pt, t);
    for (std::size_t k = 0; k < dim; ++k) out[k] = scale * drift.data()[k];
  };
  const std::array<double, 2> cuts{0.0, 1.0};
  auto r = integrate_vector(integrand, dim, std::span<const double>(cuts), quad);
  if (!r.converged)
    throw QuadratureError("chain_reconstruct: quadrature did not converge", detail::max_abs(r.value), r.error);
  return {CubeFunction(f.n(), f.d(), std::move(r.value)), r.error, r.panels};
}

}  // namespace kkltype
