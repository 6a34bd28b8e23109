#pragma once

// Hamiltonian construction and single-excitation evolution. The workhorse is
// the spectral exponential (Hermitian eigendecomposition, exactly unitary up
// to rounding); a fixed-step RK4 integrator covers the z-dependent driven
// equation as an independent dynamical route, and a scaling-and-squaring
// exponential is kept as an internal cross-check.

#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "dynloc/coupling.hpp"
#include "dynloc/errors.hpp"
#include "dynloc/lattice.hpp"

namespace dynloc {

struct Hamiltonian {
    Eigen::MatrixXd mat; // cm⁻¹, real symmetric: β on the diagonal, C_eff off it
    int n() const { return int(mat.rows()); }
};

struct StateVector {
    Eigen::VectorXcd amps;
    double z_cm = 0.0;

    static StateVector basis(int n, int site) {
        if (site < 0 || site >= n) throw std::invalid_argument("StateVector: site out of range");
        StateVector s;
        s.amps = Eigen::VectorXcd::Zero(n);
        s.amps[site] = 1.0;
        return s;
    }
};

struct ProbabilityField {
    std::vector<double> p;
};

// p_i = |ψ_i|², renormalized to Σ = 1.
inline ProbabilityField probability_distribution(const StateVector& psi) {
    double norm2 = psi.amps.squaredNorm();
    if (!(norm2 > 0.0)) throw std::invalid_argument("probability_distribution: zero state");
    ProbabilityField f;
    f.p.resize(std::size_t(psi.amps.size()));
    for (Eigen::Index i = 0; i < psi.amps.size(); ++i)
        f.p[std::size_t(i)] = std::norm(psi.amps[i]) / norm2;
    return f;
}

// Eq.-(1)-style Hamiltonian: uniform β on the diagonal (0 by default), each
// bond carrying C_eff from its own spacing's ω and its direction's A·cosθ.
inline Hamiltonian build_hamiltonian(const Lattice& lat, const CouplingModel& model,
                                     const CurvatureProfile& profile, const PhysicalParams& params,
                                     double beta = 0.0,
                                     const std::vector<double>* beta_per_site = nullptr) {
    if (lat.sites.empty()) throw std::invalid_argument("build_hamiltonian: empty lattice");
    params.validate();
    model.validate();
    profile.validate();
    if (beta_per_site && beta_per_site->size() != lat.sites.size())
        throw std::invalid_argument("build_hamiltonian: beta_per_site size mismatch");

    Hamiltonian H;
    H.mat = Eigen::MatrixXd::Zero(Eigen::Index(lat.sites.size()), Eigen::Index(lat.sites.size()));
    for (std::size_t i = 0; i < lat.sites.size(); ++i)
        H.mat(Eigen::Index(i), Eigen::Index(i)) = beta_per_site ? (*beta_per_site)[i] : beta;

    for (const Bond& b : lat.bonds) {
        double spacing_um = spacing_multiplier(b.spacing) * params.d_um;
        double C0 = model.base(b.spacing, params.d_um);
        double omega = normalized_frequency(params, spacing_um);
        EffectiveCoupling eff;
        switch (profile.kind) {
        case ProfileKind::straight:
            eff = {C0, 1.0};
            break;
        case ProfileKind::sinusoidal: {
            double A_m = effective_amplitude(profile.A_um, b.direction);
            double factor = bessel_j0(bessel_argument(omega, A_m, profile.L_cm));
            eff = {C0 * factor, factor};
            break;
        }
        case ProfileKind::sampled: {
            // project the profile onto the bond direction by scaling samples
            double c = std::cos(direction_angle_deg(b.direction) * kPi / 180.0);
            if (b.direction == Direction::v) c = 0.0;
            CurvatureProfile proj = profile;
            for (double& s : proj.samples_um) s *= c;
            if (c == 0.0)
                eff = {C0, 1.0};
            else
                eff = effective_coupling_general(C0, proj, omega);
            break;
        }
        }
        H.mat(b.i, b.j) = eff.value;
        H.mat(b.j, b.i) = eff.value;
    }
    return H;
}

// Decompose once, evolve to many z: ψ(z) = V e^{-iΛz} Vᵀ ψ0.
class SpectralPropagator {
  public:
    explicit SpectralPropagator(const Hamiltonian& H) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(H.mat);
        if (solver.info() != Eigen::Success)
            throw accuracy_error("SpectralPropagator: eigendecomposition failed");
        evals_ = solver.eigenvalues();
        evecs_ = solver.eigenvectors();
    }

    int n() const { return int(evals_.size()); }

    StateVector evolve(const StateVector& psi0, double dz_cm) const {
        if (psi0.amps.size() != evals_.size())
            throw std::invalid_argument("evolve: state/Hamiltonian dimension mismatch");
        if (dz_cm < 0.0) throw std::invalid_argument("evolve: negative propagation length");
        Eigen::VectorXcd modal = evecs_.transpose() * psi0.amps;
        for (Eigen::Index k = 0; k < modal.size(); ++k)
            modal[k] *= std::exp(std::complex<double>(0.0, -evals_[k] * dz_cm));
        StateVector out;
        out.amps = evecs_ * modal;
        out.z_cm = psi0.z_cm + dz_cm;
        double drift = std::abs(out.amps.norm() - psi0.amps.norm());
        if (drift > 1e-9 * std::max(1.0, psi0.amps.norm()))
            throw accuracy_error("evolve: norm drift above 1e-9");
        return out;
    }

  private:
    Eigen::VectorXd evals_;
    Eigen::MatrixXd evecs_;
};

inline StateVector evolve_static(const Hamiltonian& H, const StateVector& psi0, double z_cm) {
    return SpectralPropagator(H).evolve(psi0, z_cm);
}

// Scaling-and-squaring route (Padé via Eigen's matrix functions); used as an
// internal cross-check of the spectral exponential, never as the main path.
inline StateVector evolve_static_expm(const Hamiltonian& H, const StateVector& psi0, double z_cm) {
    if (psi0.amps.size() != H.mat.rows())
        throw std::invalid_argument("evolve_static_expm: dimension mismatch");
    if (z_cm < 0.0) throw std::invalid_argument("evolve_static_expm: negative propagation length");
    Eigen::MatrixXcd A = std::complex<double>(0.0, -z_cm) * H.mat.cast<std::complex<double>>();
    StateVector out;
    out.amps = A.exp() * psi0.amps;
    out.z_cm = psi0.z_cm + z_cm;
    return out;
}

// Left-to-right composite evolution ψ = e^{-iH_k z_k} ··· e^{-iH_1 z_1} ψ0.
inline StateVector evolve_piecewise(const std::vector<std::pair<Hamiltonian, double>>& segments,
                                    const StateVector& psi0) {
    if (segments.empty()) throw std::invalid_argument("evolve_piecewise: no segments");
    StateVector cur = psi0;
    for (const auto& [H, len] : segments) {
        if (H.mat.rows() != cur.amps.size())
            throw std::invalid_argument("evolve_piecewise: segment lattice mismatch");
        if (!(len > 0.0)) throw std::invalid_argument("evolve_piecewise: segment length must be > 0");
        cur = evolve_static(H, cur, len);
    }
    return cur;
}

// Driven coupled-mode equation on a 1D chain:
//   i ∂Ψ_m/∂z = -C (Ψ_{m+1} + Ψ_{m-1}) + ω ẍ_d(z) m Ψ_m
// with m the site's chain index (x/d). Fixed-step RK4. The site-index weight
// on the drive is what produces the gradient potential of the oscillating
// frame; a site-independent drive would be a pure global phase.
inline StateVector integrate_coupled_mode(double C0, const CurvatureProfile& profile,
                                          const PhysicalParams& params, const StateVector& psi0,
                                          double z_end_cm, double dz_cm) {
    if (!(C0 > 0.0)) throw std::invalid_argument("integrate_coupled_mode: C must be > 0");
    if (!(dz_cm > 0.0)) throw std::invalid_argument("integrate_coupled_mode: dz must be > 0");
    if (z_end_cm < 0.0) throw std::invalid_argument("integrate_coupled_mode: negative z");
    params.validate();
    profile.validate();
    if (profile.is_periodic() && dz_cm > profile.L_cm / 200.0 + 1e-15)
        throw std::invalid_argument("integrate_coupled_mode: dz must be <= L/200 for periodic profiles");

    const Eigen::Index n = psi0.amps.size();
    if (n < 2) throw std::invalid_argument("integrate_coupled_mode: need a chain of >= 2 sites");
    double omega = normalized_frequency(params, params.d_um);

    // site indices m, centered on the chain: an overall shift of m is a pure
    // gauge (global phase), but centering keeps the diagonal drive small on
    // the occupied sites, which is what the step error actually sees
    Eigen::VectorXd m(n);
    for (Eigen::Index i = 0; i < n; ++i) m[i] = double(i) - 0.5 * double(n - 1);

    auto deriv = [&](double z, const Eigen::VectorXcd& psi, Eigen::VectorXcd& out) {
        const std::complex<double> iC(0.0, C0);
        double drive = omega * profile.xddot(z);
        for (Eigen::Index k = 0; k < n; ++k) {
            std::complex<double> hop(0.0, 0.0);
            if (k > 0) hop += psi[k - 1];
            if (k + 1 < n) hop += psi[k + 1];
            out[k] = iC * hop - std::complex<double>(0.0, drive * m[k]) * psi[k];
        }
    };

    long steps = std::lround(std::ceil(z_end_cm / dz_cm - 1e-12));
    if (steps < 1) steps = 1;
    if (z_end_cm == 0.0) steps = 0;
    double h = steps > 0 ? z_end_cm / double(steps) : 0.0;

    Eigen::VectorXcd psi = psi0.amps;
    Eigen::VectorXcd k1(n), k2(n), k3(n), k4(n), tmp(n);
    double z = 0.0;
    for (long s = 0; s < steps; ++s) {
        deriv(z, psi, k1);
        tmp = psi + 0.5 * h * k1;
        deriv(z + 0.5 * h, tmp, k2);
        tmp = psi + 0.5 * h * k2;
        deriv(z + 0.5 * h, tmp, k3);
        tmp = psi + h * k3;
        deriv(z + h, tmp, k4);
        psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        z += h;
    }

    double drift = std::abs(psi.norm() - psi0.amps.norm());
    if (drift > 1e-6) throw accuracy_error("integrate_coupled_mode: norm drift above 1e-6 (step too large)");

    StateVector out;
    out.amps = std::move(psi);
    out.z_cm = psi0.z_cm + z_end_cm;
    return out;
}

// Hard-wall adequacy rule of thumb: sites needed beyond the injection point
// so the boundary stays outside the light cone of a walk with C_max over z.
inline int min_sites_beyond(double C_max, double z_end_cm) {
    return int(std::ceil(4.0 * C_max * z_end_cm)) + 5;
}

} // namespace dynloc
