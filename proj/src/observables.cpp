#include "xiqed/observables.hpp"

#include <cmath>
#include <sstream>

#include "xiqed/error.hpp"

namespace xiqed {

double linear_entropy(const DensityMatrix &rho) { return 1.0 - rho.purity(); }

double negativity(const DensityMatrix &rho9) {
    double sum = 0.0;
    for(double mu : hermitian_eigenvalues(partial_transpose_second(rho9)))
        if(mu < kNegativeEigenvalueThreshold) sum -= mu;
    return sum;
}

PhotonMoments photon_moments(const WaveFunction &wf) {
    static constexpr std::array<double, 6> weight{1, 2, 2, 2, 1, 1};
    PhotonMoments out;
    for(std::size_t n = 0; n < wf.size(); ++n) {
        double p = 0.0;
        for(std::size_t k = 0; k < 6; ++k) p += weight[k] * std::norm(wf.c[k][n]);
        out.mean_n += n * p;
        out.mean_n2 += static_cast<double>(n) * n * p;
    }
    return out;
}

double mandel_q(const PhotonMoments &moments) {
    if(moments.mean_n <= kVacuumThreshold) {
        std::ostringstream msg;
        msg << "<n> = " << moments.mean_n << " leaves the Mandel parameter undefined";
        throw ModelError(ErrorKind::VacuumField, msg.str());
    }
    return (moments.mean_n2 - moments.mean_n * moments.mean_n) / moments.mean_n - 1.0;
}

double mandel_q(const WaveFunction &wf) { return mandel_q(photon_moments(wf)); }

QuadratureParams quadrature_params(const DensityMatrix &rho_field) {
    Complex a{}, a2{};
    double n_mean = 0.0;
    for(std::size_t n = 0; n < rho_field.dim(); ++n) {
        n_mean += n * rho_field(n, n).real();
        if(n >= 1) a += std::sqrt(static_cast<double>(n)) * rho_field(n, n - 1);
        if(n >= 2) a2 += std::sqrt(static_cast<double>(n) * (n - 1)) * rho_field(n, n - 2);
    }
    QuadratureParams out;
    out.s_x = 2.0 * a2.real() + 2.0 * n_mean - 4.0 * a.real() * a.real();
    out.s_y = -2.0 * a2.real() + 2.0 * n_mean - 4.0 * a.imag() * a.imag();
    return out;
}

QuadratureParams quadrature_params(const WaveFunction &wf) { return quadrature_params(field_reduced(wf)); }

ObservableRecord observable_record(const WaveFunction &wf) {
    ObservableRecord rec;
    rec.t                 = wf.t;
    const auto rho_atoms  = atoms_reduced(wf);
    rec.s_atoms           = linear_entropy(rho_atoms);
    rec.s_atom1           = linear_entropy(atom1_reduced(rho_atoms));
    rec.negativity        = negativity(rho_atoms);
    const auto moments    = photon_moments(wf);
    rec.mean_n            = moments.mean_n;
    rec.mandel_q          = mandel_q(moments);
    const auto quadrature = quadrature_params(field_reduced(wf));
    rec.s_x               = quadrature.s_x;
    rec.s_y               = quadrature.s_y;
    return rec;
}

} // namespace xiqed
