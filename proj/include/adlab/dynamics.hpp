// Time-dependent generators, RK4 integrators, frame changes and fidelities.
// Units: hbar = 1, frequencies in rad/s, times in s.
#pragma once

#include "adlab/opalg.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace adlab {

template <typename Real>
struct Channel {
    Real rate = 0;  // 1/s
    CMat<Real> jump;
};

// Operator-valued generator over normalized time s in [0,1].
template <typename Real>
struct Schedule {
    Real tau = 1;
    std::function<CMat<Real>(Real)> hamiltonian;
    std::function<std::vector<Channel<Real>>(Real)> channels;  // empty for closed systems
    std::function<CMat<Real>(Real)> hamiltonian_rate;           // dH/dt when known analytically

    CMat<Real> h(Real s) const { return hamiltonian(s); }
    bool is_open() const { return bool(channels); }
    int dim() const { return int(hamiltonian(Real(0)).rows()); }
    std::vector<Channel<Real>> jumps(Real s) const
    {
        return channels ? channels(s) : std::vector<Channel<Real>>{};
    }

    // dH/dt: analytic if supplied, else fourth-order differences in s.
    CMat<Real> h_dot(Real s) const
    {
        if (hamiltonian_rate) return hamiltonian_rate(s);
        return diff_s(hamiltonian, s) / tau;
    }

    CMat<Real> h_ddot(Real s) const
    {
        std::function<CMat<Real>(Real)> hd = [this](Real x) { return h_dot(x); };
        return diff_s(hd, s) / tau;
    }

    static CMat<Real> diff_s(const std::function<CMat<Real>(Real)>& f, Real s, Real step = Real(1e-3))
    {
        const Real h = step;
        if (s - 2 * h >= 0 && s + 2 * h <= 1)
            return (-f(s + 2 * h) + Real(8) * f(s + h) - Real(8) * f(s - h) + f(s - 2 * h)) / (12 * h);
        if (s - 2 * h < 0)
            return (Real(-25) * f(s) + Real(48) * f(s + h) - Real(36) * f(s + 2 * h) +
                    Real(16) * f(s + 3 * h) - Real(3) * f(s + 4 * h)) / (12 * h);
        return (Real(25) * f(s) - Real(48) * f(s - h) + Real(36) * f(s - 2 * h) -
                Real(16) * f(s - 3 * h) + Real(3) * f(s - 4 * h)) / (12 * h);
    }
};

template <typename Real>
CMat<Real> lindblad_rhs(const CMat<Real>& h, const std::vector<Channel<Real>>& ch, const CMat<Real>& rho)
{
    const std::complex<Real> mi(0, -1);
    CMat<Real> out = mi * commutator<Real>(h, rho);
    for (const auto& c : ch) {
        if (c.rate == Real(0)) continue;
        CMat<Real> gg = c.jump.adjoint() * c.jump;
        out += c.rate * (c.jump * rho * c.jump.adjoint() - Real(0.5) * anticommutator<Real>(gg, rho));
    }
    return out;
}

// Generator of a schedule sample as a linear map on operators.
template <typename Real>
OperatorMap<Real> generator_at(const Schedule<Real>& l, Real s)
{
    CMat<Real> h = l.h(s);
    auto ch = l.jumps(s);
    return [h, ch](const CMat<Real>& x) { return lindblad_rhs<Real>(h, ch, x); };
}

template <typename Real>
struct Trajectory {
    std::vector<Real> times;
    std::vector<CVec<Real>> kets;
    std::vector<CMat<Real>> rhos;
    Real norm_drift = 0;
    Real trace_drift = 0;
    Real herm_drift = 0;
    Real min_eig = 1;
    std::vector<std::string> warnings;
};

// Largest spectral radius of H (plus dissipative scale) sampled on the grid.
template <typename Real>
Real max_frequency(const Schedule<Real>& l, int probes = 257)
{
    Real w = 0;
    for (int k = 0; k < probes; ++k) {
        Real s = Real(k) / Real(probes - 1);
        CMat<Real> h = l.h(s);
        Eigen::SelfAdjointEigenSolver<CMat<Real>> es((h + h.adjoint()) / Real(2), Eigen::EigenvaluesOnly);
        Real r = es.eigenvalues().cwiseAbs().maxCoeff();
        for (const auto& c : l.jumps(s)) {
            Real g = c.jump.norm();
            r += c.rate * g * g;
        }
        w = std::max(w, r);
    }
    return w;
}

template <typename Real>
int recommended_steps(const Schedule<Real>& l, Real ratio = Real(0.05), int min_steps = 100)
{
    Real w = max_frequency(l);
    long n = long(std::ceil(w * l.tau / ratio));
    return int(std::max<long>(n, min_steps));
}

namespace detail {

template <typename M>
bool all_finite(const M& m)
{
    for (Eigen::Index i = 0; i < m.size(); ++i)
        if (!std::isfinite(m.data()[i].real()) || !std::isfinite(m.data()[i].imag())) return false;
    return true;
}

}  // namespace detail

// RK4 for dX/dt = -i H X; X may be a ket or a propagator.
template <typename Real, typename Obs>
CMat<Real> propagate(const Schedule<Real>& h, const CMat<Real>& x0, int n_steps, Obs&& observe)
{
    const Real dt = h.tau / Real(n_steps);
    const std::complex<Real> mi(0, -1);
    CMat<Real> x = x0;
    observe(0, x);
    for (int k = 0; k < n_steps; ++k) {
        const Real s0 = Real(k) / Real(n_steps);
        const Real s1 = Real(k + 1) / Real(n_steps);
        const Real sm = (s0 + s1) / 2;
        CMat<Real> h0 = h.h(s0), hm = h.h(sm), h1 = h.h(s1);
        CMat<Real> k1 = mi * (h0 * x);
        CMat<Real> k2 = mi * (hm * (x + (dt / 2) * k1));
        CMat<Real> k3 = mi * (hm * (x + (dt / 2) * k2));
        CMat<Real> k4 = mi * (h1 * (x + dt * k3));
        x += (dt / 6) * (k1 + Real(2) * k2 + Real(2) * k3 + k4);
        if (!detail::all_finite(x))
            throw std::runtime_error("integration failure at step " + std::to_string(k + 1));
        observe(k + 1, x);
    }
    return x;
}

template <typename Real>
CMat<Real> propagator(const Schedule<Real>& h, int n_steps)
{
    const int d = h.dim();
    return propagate(h, CMat<Real>::Identity(d, d).eval(), n_steps, [](int, const CMat<Real>&) {});
}

template <typename Real>
Trajectory<Real> evolve_unitary(const Schedule<Real>& h, const CVec<Real>& psi0, int n_steps, int stride = 1)
{
    if (std::abs(psi0.norm() - Real(1)) > Real(1e-10))
        throw std::invalid_argument("evolve_unitary: initial state not normalized");
    if (h.is_open()) throw std::invalid_argument("evolve_unitary: schedule has dissipative channels");
    Trajectory<Real> tr;
    const Real dt = h.tau / Real(n_steps);
    propagate(h, CMat<Real>(psi0), n_steps, [&](int k, const CMat<Real>& x) {
        if (k % stride == 0 || k == n_steps) {
            tr.times.push_back(Real(k) * dt);
            tr.kets.push_back(x.col(0));
        }
        tr.norm_drift = std::max(tr.norm_drift, std::abs(x.col(0).norm() - Real(1)));
    });
    return tr;
}

template <typename Real>
Trajectory<Real> evolve_lindblad(const Schedule<Real>& l, const CMat<Real>& rho0, int n_steps, int stride = 1,
                                 const Tolerances& tol = default_tol())
{
    if (!is_density_matrix(rho0, tol)) throw std::invalid_argument("evolve_lindblad: rho0 is not a density matrix");
    Trajectory<Real> tr;
    const Real dt = l.tau / Real(n_steps);
    const int check_every = std::max(1, n_steps / 200);
    CMat<Real> rho = rho0;
    auto record = [&](int k) {
        tr.trace_drift = std::max(tr.trace_drift, std::abs(rho.trace() - std::complex<Real>(1)));
        tr.herm_drift = std::max<Real>(tr.herm_drift, Real(max_abs(rho - rho.adjoint())));
        if (k % check_every == 0 || k == n_steps) tr.min_eig = std::min(tr.min_eig, min_eigenvalue(rho));
        if (k % stride == 0 || k == n_steps) {
            tr.times.push_back(Real(k) * dt);
            tr.rhos.push_back(rho);
        }
    };
    record(0);
    for (int k = 0; k < n_steps; ++k) {
        const Real s0 = Real(k) / Real(n_steps);
        const Real s1 = Real(k + 1) / Real(n_steps);
        const Real sm = (s0 + s1) / 2;
        CMat<Real> h0 = l.h(s0), hm = l.h(sm), h1 = l.h(s1);
        auto c0 = l.jumps(s0), cm = l.jumps(sm), c1 = l.jumps(s1);
        CMat<Real> k1 = lindblad_rhs<Real>(h0, c0, rho);
        CMat<Real> k2 = lindblad_rhs<Real>(hm, cm, rho + (dt / 2) * k1);
        CMat<Real> k3 = lindblad_rhs<Real>(hm, cm, rho + (dt / 2) * k2);
        CMat<Real> k4 = lindblad_rhs<Real>(h1, c1, rho + dt * k3);
        rho += (dt / 6) * (k1 + Real(2) * k2 + Real(2) * k3 + k4);
        if (!detail::all_finite(rho))
            throw std::runtime_error("integration failure at step " + std::to_string(k + 1));
        record(k + 1);
    }
    if (tr.trace_drift > Real(1e-9))
        throw std::runtime_error("evolve_lindblad: trace drift " + std::to_string(double(tr.trace_drift)));
    if (tr.min_eig < -Real(tol.pos))
        tr.warnings.push_back("positivity violated (min eigenvalue " + std::to_string(double(tr.min_eig)) +
                              "); increase n_steps");
    return tr;
}

// H_O = O H O^dag + i dO/dt O^dag. o_dot is dO/dt; when absent a central difference is used.
template <typename Real>
Schedule<Real> frame_transform(const Schedule<Real>& h, std::function<CMat<Real>(Real)> o,
                               std::function<CMat<Real>(Real)> o_dot = {}, double tol = 1e-9)
{
    if (!o_dot) {
        const Real tau = h.tau;
        o_dot = [o, tau](Real s) {
            const Real ds = Real(1e-6);
            return CMat<Real>((o(s + ds) - o(s - ds)) / (2 * ds * tau));
        };
    }
    Schedule<Real> out;
    out.tau = h.tau;
    auto base = h.hamiltonian;
    out.hamiltonian = [base, o, o_dot, tol](Real s) {
        CMat<Real> u = o(s);
        if (!is_unitary(u, tol)) throw std::invalid_argument("frame_transform: frame operator is not unitary");
        CMat<Real> a = std::complex<Real>(0, 1) * (o_dot(s) * u.adjoint());
        Real scale = std::max<Real>(1, a.cwiseAbs().maxCoeff());
        if (max_abs(a - a.adjoint()) > tol * scale)
            throw std::invalid_argument("frame_transform: fictitious term is not Hermitian");
        CMat<Real> r = u * base(s) * u.adjoint() + (a + a.adjoint()) / Real(2);
        return CMat<Real>((r + r.adjoint()) / Real(2));
    };
    if (h.channels) {
        auto ch = h.channels;
        out.channels = [ch, o](Real s) {
            CMat<Real> u = o(s);
            auto v = ch(s);
            for (auto& c : v) c.jump = u * c.jump * u.adjoint();
            return v;
        };
    }
    return out;
}

// Hermitian square root through the eigendecomposition, clamping small negatives.
template <typename Real>
CMat<Real> sqrt_psd(const CMat<Real>& a)
{
    Eigen::SelfAdjointEigenSolver<CMat<Real>> es((a + a.adjoint()) / Real(2));
    Eigen::Matrix<Real, Eigen::Dynamic, 1> ev = es.eigenvalues().cwiseMax(Real(0)).cwiseSqrt();
    return es.eigenvectors() * ev.template cast<std::complex<Real>>().asDiagonal() * es.eigenvectors().adjoint();
}

// Uhlmann fidelity Tr sqrt(sqrt(r1) r2 sqrt(r1)).
template <typename Real>
Real fidelity(const CMat<Real>& r1, const CMat<Real>& r2, double pos_tol = 1e-7)
{
    if (min_eigenvalue(r1) < -pos_tol || min_eigenvalue(r2) < -pos_tol)
        throw std::invalid_argument("fidelity: non-positive input");
    CMat<Real> s1 = sqrt_psd(r1);
    CMat<Real> m = s1 * r2 * s1;
    Eigen::SelfAdjointEigenSolver<CMat<Real>> es((m + m.adjoint()) / Real(2), Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseMax(Real(0)).cwiseSqrt().sum();
}

template <typename Real>
Real relative_purity(const CMat<Real>& gs, const CMat<Real>& rho)
{
    Real p1 = std::real((gs * gs).trace());
    Real p2 = std::real((rho * rho).trace());
    if (p1 <= 0 || p2 <= 0) throw std::invalid_argument("relative_purity: zero purity");
    return std::abs((gs * rho).trace()) / (std::sqrt(p1) * std::sqrt(p2));
}

template <typename Real>
CMat<Real> projector(const CVec<Real>& psi)
{
    return psi * psi.adjoint();
}

// Spin-1/2 in a rotating field: p0(t) for the rotating-field model.
inline double nmr_closed_form_p0(double omega0, double omega1, double omega, double t)
{
    const double r = omega / omega0;
    const double tn = omega1 / omega0;
    const double q = (1 - r) * (1 - r) + tn * tn;
    const double c = std::cos(omega0 * t * std::sqrt(q));
    return (2 * (1 - r) * (1 - r) + tn * tn * (1 + c)) / (2 * q);
}

inline double nmr_tau_max(double omega0, double omega1, double omega, int n)
{
    const double r = omega / omega0, tn = omega1 / omega0;
    return 2 * n * M_PI / (std::abs(omega0) * std::sqrt((1 - r) * (1 - r) + tn * tn));
}

inline double nmr_tau_min(double omega0, double omega1, double omega, int n)
{
    const double r = omega / omega0, tn = omega1 / omega0;
    return (2 * n + 1) * M_PI / (std::abs(omega0) * std::sqrt((1 - r) * (1 - r) + tn * tn));
}

}  // namespace adlab
