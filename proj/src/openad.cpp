#include "adlab/openad.hpp"

#include <cmath>

namespace adlab {

namespace {

int qubits_for(int dim)
{
    int n = 0;
    while ((1 << n) < dim) ++n;
    if ((1 << n) != dim) throw std::invalid_argument("basis_for: dimension is not a power of two");
    return n;
}

// <<E_b|d_s D_a>> at each grid point, as matrices (b, a).
std::vector<Operator> connections(const TrackedLiouville<double>& tl)
{
    std::vector<Operator> c(tl.points());
    for (int k = 0; k < tl.points(); ++k) c[k] = tl.left[k] * tl.d_right[k];
    return c;
}

std::vector<cplx> cumulative(const std::vector<cplx>& f, double h)
{
    return cumulative_trapezoid(f, h);
}

}  // namespace

BasisPtr<double> basis_for(int dim)
{
    return pauli_basis<double>(qubits_for(dim));
}

Operator liouvillian_matrix(const Schedule<double>& l, const BasisPtr<double>& basis, double s)
{
    return superoperator_matrix<double>(generator_at(l, s), basis).matrix;
}

XiReport xi_coefficients(const Schedule<double>& l, int n_points, PClosure closure, const Operator& rho0,
                         const std::vector<cplx>& order_hint)
{
    auto basis = basis_for(l.dim());
    auto lmat = [&](double s) { return liouvillian_matrix(l, basis, s); };
    auto tl = tracked_liouville<double>(lmat, n_points, l.tau, order_hint);
    CVec<double> r0;
    if (closure == PClosure::adiabatic) {
        if (rho0.size() == 0) throw std::invalid_argument("xi_coefficients: adiabatic closure needs rho0");
        r0 = tl.left[0] * to_coherence_vector<double>(rho0, basis).comps;
    }
    return xi_coefficients(tl, closure, r0);
}

XiReport xi_coefficients(const TrackedLiouville<double>& tl, PClosure closure, const CVec<double>& r0)
{
    const int n = tl.size(), np = tl.points();
    const double h = tl.s[1] - tl.s[0];
    const double tau = tl.tau;
    if (closure == PClosure::adiabatic && r0.size() != n)
        throw std::invalid_argument("xi_coefficients: initial coefficients missing");
    auto conn = connections(tl);

    // integral of <<E_a|d_s D_a>> ds per eigenvector
    std::vector<std::vector<cplx>> chi(n);
    for (int a = 0; a < n; ++a) {
        std::vector<cplx> f(np);
        for (int k = 0; k < np; ++k) f[k] = conn[k](a, a);
        chi[a] = cumulative(f, h);
    }

    XiReport rep;
    rep.s = tl.s;
    rep.tau = tau;
    rep.xi1.assign(n, std::vector<std::vector<double>>(n));
    rep.xi2.assign(n, std::vector<std::vector<double>>(n));
    rep.max1 = RMat<double>::Zero(n, n);
    rep.max2 = RMat<double>::Zero(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (a == b) continue;
            std::vector<cplx> g(np), ratio(np);
            for (int k = 0; k < np; ++k) g[k] = tl.eigenvalues[k](a) - tl.eigenvalues[k](b);
            auto ig = cumulative(g, h);
            for (int k = 0; k < np; ++k) {
                const cplx p = (closure == PClosure::adiabatic ? r0(a) : cplx(1)) * std::exp(-chi[a][k]);
                const cplx ft = std::exp(-chi[b][k]) * p * conn[k](b, a);
                ratio[k] = ft / g[k];
            }
            auto dratio = grid_derivative(ratio, h);
            auto& x1 = rep.xi1[a][b];
            auto& x2 = rep.xi2[a][b];
            x1.resize(np);
            x2.resize(np);
            for (int k = 0; k < np; ++k) {
                const double grow = std::exp(tau * ig[k].real());
                x1[k] = std::abs(ratio[k]) * grow / tau;
                x2[k] = std::abs(dratio[k]) * grow / tau;
                rep.max1(a, b) = std::max(rep.max1(a, b), x1[k]);
                rep.max2(a, b) = std::max(rep.max2(a, b), x2[k]);
            }
            rep.max_value = std::max({rep.max_value, rep.max1(a, b), rep.max2(a, b)});
        }
    return rep;
}

AdiabaticOpenSolution adiabatic_propagate_1d(const Schedule<double>& l, const Operator& rho0, int n_points,
                                             const std::vector<cplx>& order_hint)
{
    auto basis = basis_for(l.dim());
    auto lmat = [&](double s) { return liouvillian_matrix(l, basis, s); };
    AdiabaticOpenSolution sol;
    sol.spectrum = tracked_liouville<double>(lmat, n_points, l.tau, order_hint);
    const auto& tl = sol.spectrum;
    sol.s = tl.s;
    sol.tau = l.tau;
    const int n = tl.size(), np = tl.points();
    const double h = tl.s[1] - tl.s[0];

    CVec<double> v0 = to_coherence_vector<double>(rho0, basis).comps;
    sol.r0 = tl.left[0] * v0;
    const double resid = (tl.right[0] * sol.r0 - v0).cwiseAbs().maxCoeff();
    if (resid > 1e-8) throw std::runtime_error("adiabatic_propagate_1d: expansion residual " + std::to_string(resid));

    auto conn = connections(tl);
    std::vector<std::vector<cplx>> lam_int(n);
    for (int a = 0; a < n; ++a) {
        std::vector<cplx> f(np);
        // Lambda dt = (tau lambda - <<E|d_s D>>) ds
        for (int k = 0; k < np; ++k) f[k] = l.tau * tl.eigenvalues[k](a) - conn[k](a, a);
        lam_int[a] = cumulative(f, h);
    }
    sol.phase.resize(np);
    sol.coherence.resize(np);
    sol.states.resize(np);
    for (int k = 0; k < np; ++k) {
        CVec<double> ph(n), r(n);
        for (int a = 0; a < n; ++a) {
            ph(a) = lam_int[a][k];
            r(a) = sol.r0(a) * std::exp(ph(a));
        }
        sol.phase[k] = ph;
        sol.coherence[k] = tl.right[k] * r;
        Operator rho = from_coherence_vector<double>({sol.coherence[k], basis});
        sol.states[k] = (rho + rho.adjoint()) / 2.0;
    }
    return sol;
}

std::vector<CVec<double>> jordan_block_coefficient_ode(const std::function<Operator(double)>& g,
                                                       const CVec<double>& p0, double tau, int n_steps)
{
    const int n = int(p0.size());
    if (n < 1) throw std::invalid_argument("jordan_block_coefficient_ode: empty block");
    Operator shift = Operator::Zero(n, n);
    for (int k = 0; k + 1 < n; ++k) shift(k, k + 1) = 1;
    Schedule<double> gen;
    gen.tau = tau;
    // propagate integrates dX/dt = -i H X, so H = i (S - G)
    gen.hamiltonian = [&](double s) { return Operator(cplx(0, 1) * (shift - g(s))); };
    std::vector<CVec<double>> out;
    out.reserve(n_steps + 1);
    propagate(gen, Operator(p0), n_steps, [&](int, const Operator& x) { out.push_back(x.col(0)); });
    return out;
}

InverseIdentityResiduals adiabatic_propagator_inverse_identities(const std::vector<Operator>& u,
                                                                 const std::vector<Operator>& u_tilde)
{
    if (u.size() != u_tilde.size()) throw std::invalid_argument("inverse identities: block count mismatch");
    InverseIdentityResiduals r;
    for (std::size_t b = 0; b < u.size(); ++b) {
        const Operator& a = u[b];
        const Operator& at = u_tilde[b];
        const int n = int(a.rows());
        r.inverse = std::max(r.inverse, max_abs(a * at - Operator::Identity(n, n)));
        auto ut = [&](int i, int j) { return j < 0 ? cplx(0) : at(i, j); };
        for (int l = 0; l < n; ++l) {
            cplx c1 = 0, c2 = 0, c3 = 0, c4 = 0;
            for (int m = 0; m < n; ++m) {
                c1 += ut(l, m - 1) * a(m, l);
                c2 += ut(l, m) * a(m, l);
                if (l + 1 < n) {
                    c3 += ut(l, m) * a(m, l + 1);
                    c4 += ut(l, m - 1) * a(m, l + 1);
                }
            }
            r.block_form = std::max({r.block_form, std::abs(c1), std::abs(c2 - 1.0)});
            if (l + 1 < n) r.block_form = std::max({r.block_form, std::abs(c3), std::abs(c4 - 1.0)});
        }
    }
    return r;
}

double propagator_conjugation_residual(const std::function<Operator(double)>& lmat, const TrackedLiouville<double>& tl)
{
    const int n = tl.size(), np = tl.points();
    const double h = tl.s[1] - tl.s[0];
    std::vector<std::vector<cplx>> li(n);
    for (int a = 0; a < n; ++a) {
        std::vector<cplx> f(np);
        for (int k = 0; k < np; ++k) f[k] = tl.tau * tl.eigenvalues[k](a);
        li[a] = cumulative(f, h);
    }
    double worst = 0;
    for (int k = 0; k < np; ++k) {
        Operator u = Operator::Zero(n, n), ui = Operator::Zero(n, n);
        for (int a = 0; a < n; ++a) {
            u += std::exp(li[a][k]) * tl.right[k].col(a) * tl.left[0].row(a);
            ui += std::exp(-li[a][k]) * tl.right[0].col(a) * tl.left[k].row(a);
        }
        worst = std::max(worst, max_abs(u * ui - Operator::Identity(n, n)));
        Operator j = tl.left[0] * ui * lmat(tl.s[k]) * u * tl.right[0];
        const double scale = std::max(1.0, tl.eigenvalues[k].cwiseAbs().maxCoeff());
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                const cplx target = a == b ? tl.eigenvalues[k](a) : cplx(0);
                worst = std::max(worst, std::abs(j(a, b) - target) / scale);
            }
    }
    return worst;
}

Schedule<double> deutsch_schedule(int f0, int f1, double omega, const std::function<double(double)>& gamma, double tau)
{
    if ((f0 != 0 && f0 != 1) || (f1 != 0 && f1 != 1)) throw std::invalid_argument("deutsch: f values must be 0 or 1");
    Operator oracle = Operator::Zero(2, 2);
    oracle(0, 0) = f0 ? -1.0 : 1.0;
    oracle(1, 1) = f1 ? -1.0 : 1.0;
    const Operator h0 = -0.5 * omega * pauli<double>('X');
    Schedule<double> l;
    l.tau = tau;
    l.hamiltonian = [=](double s) {
        Operator u = Operator::Zero(2, 2);
        for (int i = 0; i < 2; ++i) u(i, i) = std::polar(1.0, 0.5 * M_PI * s * oracle(i, i).real());
        return Operator(u * h0 * u.adjoint());
    };
    l.channels = [gamma](double s) {
        return std::vector<Channel<double>>{{gamma(s), pauli<double>('Z')}};
    };
    return l;
}

std::vector<cplx> deutsch_order_hint(double omega, double gamma)
{
    const cplx root = std::sqrt(cplx(omega * omega - gamma * gamma));
    const cplx dp = gamma + cplx(0, 1) * root, dm = gamma - cplx(0, 1) * root;
    return {0.0, -2 * gamma, -dp, -dm};
}

DeutschResult deutsch_scenario(int f0, int f1, double omega, const std::function<double(double)>& gamma, double tau,
                               int n_points)
{
    auto l = deutsch_schedule(f0, f1, omega, gamma, tau);
    DeutschResult out;
    out.F = 1 - ((f0 + f1) % 2 == 0 ? 1 : -1);
    out.tau = tau;
    Operator plus = Operator::Constant(2, 2, 0.5);

    auto sol = adiabatic_propagate_1d(l, plus, n_points, deutsch_order_hint(omega, gamma(0.0)));
    out.s = sol.s;
    out.rho_ad = sol.states;

    const int seg = n_points - 1;
    const int rec = recommended_steps(l);
    const int steps = seg * std::max(10, (rec + seg - 1) / seg);
    auto tr = evolve_lindblad(l, plus, steps, steps / seg);
    out.rho = tr.rhos;

    for (int k = 0; k < n_points; ++k) {
        Operator hk = l.h(out.s[k]);
        Eigen::SelfAdjointEigenSolver<Operator> es(hk);
        out.rho_target.push_back(projector<double>(es.eigenvectors().col(0)));
        out.f_os.push_back(fidelity(out.rho_ad[k], out.rho[k]));
        out.f_cs.push_back(fidelity(out.rho_target[k], out.rho[k]));
    }
    return out;
}

Certificate asymptotic_adiabaticity_certificate(const Schedule<double>& l, const Operator& rho0, int n_points,
                                                const std::vector<cplx>& order_hint)
{
    Certificate c;
    auto basis = basis_for(l.dim());
    auto lmat = [&](double s) { return liouvillian_matrix(l, basis, s); };
    bool ok = true;
    for (double s : uniform_grid<double>(n_points)) {
        Operator m = lmat(s);
        if (max_abs(m.row(0)) > 1e-12 * std::max(1.0, max_abs(m))) {
            c.reasons.push_back("identity row of the Liouvillian does not vanish at t = " + detail::fmt_time(s * l.tau) + " s");
            ok = false;
            break;
        }
    }
    TrackedLiouville<double> tl;
    try {
        tl = tracked_liouville<double>(lmat, n_points, l.tau, order_hint);
    } catch (const std::exception& e) {
        c.reasons.push_back(std::string("spectrum not trackable: ") + e.what());
        c.certified = false;
        return c;
    }
    const int n = tl.size();
    int stationary = -1;
    for (int k = 0; k < tl.points(); ++k) {
        const double scale = std::max(1.0, tl.eigenvalues[k].cwiseAbs().maxCoeff());
        int zeros = 0, idx = -1;
        for (int a = 0; a < n; ++a) {
            if (std::abs(tl.eigenvalues[k](a)) <= 1e-9 * scale) {
                ++zeros;
                idx = a;
            } else if (!(tl.eigenvalues[k](a).real() < -1e-12 * scale)) {
                c.reasons.push_back("eigenvalue with non-negative real part at t = " + detail::fmt_time(tl.s[k] * l.tau) + " s");
                ok = false;
                k = tl.points();
                break;
            }
        }
        if (k < tl.points() && (zeros != 1 || (stationary >= 0 && idx != stationary))) {
            c.reasons.push_back("stationary eigenvalue not unique at t = " + detail::fmt_time(tl.s[k] * l.tau) + " s");
            ok = false;
            break;
        }
        if (k < tl.points()) stationary = idx;
    }
    CVec<double> r0 = tl.left[0] * to_coherence_vector<double>(rho0, basis).comps;
    const double thr = 1e-10 * std::max(1.0, r0.cwiseAbs().maxCoeff());
    int populated = 0;
    for (int a = 0; a < n; ++a)
        if (a != stationary && std::abs(r0(a)) > thr) ++populated;
    if (populated > 1) {
        c.reasons.push_back("initial state populates " + std::to_string(populated) + " decaying eigenvectors");
        ok = false;
    }
    c.certified = ok;
    if (ok) c.reasons.push_back("certified");
    return c;
}

}  // namespace adlab
