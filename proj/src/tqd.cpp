#include "adlab/tqd.hpp"

#include <cmath>
#include <stdexcept>

namespace adlab {

namespace {

const Operator I2 = Operator::Identity(2, 2);
const Operator X = pauli<double>('X');
const Operator Y = pauli<double>('Y');
const Operator Z = pauli<double>('Z');

// Cubic Lagrange interpolation of samples on a uniform grid over [0,1].
Operator interpolate(const std::vector<Operator>& samples, double s)
{
    const int m = int(samples.size());
    if (m < 4) throw std::invalid_argument("interpolate: need at least four samples");
    const double h = 1.0 / (m - 1);
    int k = int(std::floor(s / h)) - 1;
    k = std::clamp(k, 0, m - 4);
    Operator out = Operator::Zero(samples[0].rows(), samples[0].cols());
    for (int i = 0; i < 4; ++i) {
        double w = 1;
        for (int j = 0; j < 4; ++j)
            if (j != i) w *= (s - (k + j) * h) / ((i - j) * h);
        out += w * samples[k + i];
    }
    return out;
}

double scalar_derivative(const std::function<double(double)>& f, double s)
{
    const double h = 1e-4;
    if (s - 2 * h >= 0 && s + 2 * h <= 1)
        return (-f(s + 2 * h) + 8 * f(s + h) - 8 * f(s - h) + f(s - 2 * h)) / (12 * h);
    if (s - 2 * h < 0)
        return (-25 * f(s) + 48 * f(s + h) - 36 * f(s + 2 * h) + 16 * f(s + 3 * h) - 3 * f(s + 4 * h)) / (12 * h);
    return (25 * f(s) - 48 * f(s - h) + 36 * f(s - 2 * h) - 16 * f(s - 3 * h) + 3 * f(s - 4 * h)) / (12 * h);
}

double simpson(const std::function<double(double)>& f, int n)
{
    if (n % 2 == 0) ++n;
    const double h = 1.0 / (n - 1);
    double acc = f(0.0) + f(1.0);
    for (int i = 1; i < n - 1; ++i) acc += (i % 2 ? 4 : 2) * f(i * h);
    return acc * h / 3;
}

}  // namespace

PhaseChoice adiabatic_phases() { return {PhaseMode::adiabatic, 0, {}}; }
PhaseChoice optimal_phases() { return {PhaseMode::optimal, 0, {}}; }
PhaseChoice constant_phases(double theta) { return {PhaseMode::constant, theta, {}}; }
PhaseChoice user_phases(std::function<RVec<double>(double)> fn) { return {PhaseMode::user, 0, std::move(fn)}; }

RVec<double> phase_values(const PhaseChoice& p, double s, const RVec<double>& energies, const Operator& vecs,
                          const Operator& dvecs)
{
    const int n = int(energies.size());
    RVec<double> th(n);
    switch (p.mode) {
    case PhaseMode::constant: th.setConstant(p.value); return th;
    case PhaseMode::user: {
        th = p.user(s);
        if (th.size() != n) throw std::invalid_argument("phase_values: user phases have wrong length");
        return th;
    }
    default: break;
    }
    double scale = 0;
    for (int k = 0; k < n; ++k) scale = std::max(scale, dvecs.col(k).norm());
    for (int k = 0; k < n; ++k) {
        // -i <dE|E> = -Im <E|dE> when <E|dE> is imaginary
        cplx c = vecs.col(k).dot(dvecs.col(k));
        if (std::abs(c.real()) > 1e-8 * std::max(1.0, scale))
            throw std::runtime_error("phase_values: connection has real part " + std::to_string(c.real()));
        th(k) = -c.imag();
        if (p.mode == PhaseMode::adiabatic) th(k) -= energies(k);
    }
    return th;
}

Operator tqd_hamiltonian(const RVec<double>& energies, const Operator& vecs, const Operator& dvecs,
                         const RVec<double>& theta, double* residual)
{
    const int d = int(vecs.rows());
    Operator h = Operator::Zero(d, d);
    for (int n = 0; n < int(energies.size()); ++n) {
        h += cplx(0, 1) * dvecs.col(n) * vecs.col(n).adjoint();
        h -= theta(n) * vecs.col(n) * vecs.col(n).adjoint();
    }
    const double scale = std::max(1.0, max_abs(h));
    const double r = max_abs(h - h.adjoint()) / scale;
    if (residual) *residual = r;
    if (r > 1e-8) throw std::runtime_error("tqd_hamiltonian: hermiticity residual " + std::to_string(r));
    return (h + h.adjoint()) / 2.0;
}

EigenSample eigen_sample(const Model& m, double s)
{
    EigenSample e;
    auto [ev, v] = m.eig(s);
    e.energies = ev;
    e.vecs = v;
    if (m.deig_dt) {
        e.dvecs = m.deig_dt(s);
    } else {
        std::function<Operator(double)> vf = [&m](double x) { return m.eig(x).second; };
        e.dvecs = Schedule<double>::diff_s(vf, s) / m.h.tau;
    }
    return e;
}

Schedule<double> generalized_tqd(const Model& m, const PhaseChoice& p)
{
    Schedule<double> out;
    out.tau = m.h.tau;
    out.hamiltonian = [m, p](double s) {
        auto e = eigen_sample(m, s);
        return tqd_hamiltonian(e.energies, e.vecs, e.dvecs, phase_values(p, s, e.energies, e.vecs, e.dvecs));
    };
    return out;
}

Schedule<double> standard_tqd(const Model& m)
{
    return generalized_tqd(m, adiabatic_phases());
}

Schedule<double> generalized_tqd(const SpectralFrame<double>& f, const PhaseChoice& p)
{
    if (f.dvecs.size() != f.vecs.size()) throw std::invalid_argument("generalized_tqd: frame has no derivatives");
    auto samples = std::make_shared<std::vector<Operator>>();
    for (int k = 0; k < f.points(); ++k) {
        RVec<double> e = f.energies.row(k).transpose();
        samples->push_back(
            tqd_hamiltonian(e, f.vecs[k], f.dvecs[k], phase_values(p, f.s[k], e, f.vecs[k], f.dvecs[k])));
    }
    Schedule<double> out;
    out.tau = f.tau;
    out.hamiltonian = [samples](double s) {
        Operator h = interpolate(*samples, s);
        return Operator((h + h.adjoint()) / 2.0);
    };
    return out;
}

Schedule<double> standard_tqd(const SpectralFrame<double>& f)
{
    return generalized_tqd(f, adiabatic_phases());
}

Model lz_model(double delta, std::function<double(double)> theta, std::function<double(double)> dtheta_ds,
               double tau)
{
    Model m;
    m.h.tau = tau;
    m.h.hamiltonian = [=](double s) { return Operator(delta * (Z + std::tan(theta(s)) * X)); };
    m.h.hamiltonian_rate = [=](double s) {
        const double c = std::cos(theta(s));
        return Operator(delta * dtheta_ds(s) / (tau * c * c) * X);
    };
    m.eig = [=](double s) {
        const double th = theta(s);
        if (std::abs(th) >= M_PI / 2) throw std::domain_error("lz_model: |theta| must stay below pi/2");
        const double e = std::abs(delta) / std::cos(th);
        const double c = std::cos(th / 2), sn = std::sin(th / 2);
        Operator v(2, 2);
        RVec<double> ev(2);
        // eigenvectors of cos(th) Z + sin(th) X, ordered by energy
        if (delta >= 0) {
            v << -sn, c, c, sn;
            ev << -e, e;
        } else {
            v << c, -sn, sn, c;
            ev << -e, e;
        }
        return std::pair<RVec<double>, Operator>{ev, v};
    };
    m.deig_dt = [=](double s) {
        const double th = theta(s), w = 0.5 * dtheta_ds(s) / tau;
        const double c = std::cos(th / 2), sn = std::sin(th / 2);
        Operator d(2, 2);
        if (delta >= 0) d << -w * c, -w * sn, -w * sn, w * c;
        else d << -w * sn, -w * c, w * c, -w * sn;
        return d;
    };
    m.frame = [](double) { return Operator(Operator::Identity(2, 2)); };
    m.frame_dot = [](double) { return Operator(Operator::Zero(2, 2)); };
    return m;
}

double energy_cost_sigma(const Schedule<double>& h, int n_quad)
{
    if (n_quad < 2) throw std::invalid_argument("energy_cost_sigma: need at least two points");
    const double ds = 1.0 / (n_quad - 1);
    double acc = 0;
    for (int k = 0; k < n_quad; ++k) {
        Operator hk = h.h(k * ds);
        double v = std::sqrt(std::max(0.0, std::real((hk * hk).trace())));
        acc += (k == 0 || k == n_quad - 1) ? 0.5 * v : v;
    }
    return acc * ds;
}

ConnectionConstancy connection_constancy(const SpectralFrame<double>& f, double tol)
{
    if (f.dvecs.size() != f.vecs.size()) throw std::invalid_argument("connection_constancy: frame has no derivatives");
    Operator c0 = f.vecs[0].adjoint() * f.dvecs[0];
    double scale = 0, var = 0;
    for (int k = 0; k < f.points(); ++k) {
        Operator c = f.vecs[k].adjoint() * f.dvecs[k];
        scale = std::max(scale, max_abs(c));
        var = std::max(var, max_abs(c - c0));
    }
    ConnectionConstancy r;
    r.max_variation = scale > 0 ? var / scale : 0;
    r.constant = r.max_variation < tol;
    return r;
}

LzIntensities lz_intensities(const std::function<double(double)>& theta, double delta, double tau, int n_quad)
{
    if (tau <= 0) throw std::invalid_argument("lz_intensities: tau must be positive");
    const double tan2 = simpson([&](double s) { double t = std::tan(theta(s)); return t * t; }, n_quad);
    if (tan2 <= 0 || delta == 0) throw std::domain_error("lz_intensities: adiabatic intensity vanishes");
    const double d2 = simpson([&](double s) { double d = scalar_derivative(theta, s); return d * d; }, n_quad);
    LzIntensities r;
    r.iopt = d2 / (4 * tau * tau) / (delta * delta * tan2);
    r.istd = r.i0 + r.iopt;
    r.tau_b = std::sqrt(d2 / tan2) / (2 * std::abs(delta));
    return r;
}

double nmr_field_ratio(double omega0, double omega1, double omega)
{
    if (omega1 * omega == 0) throw std::domain_error("nmr_field_ratio: optimal field vanishes");
    return (omega1 * omega1 + omega0 * omega0) / (omega1 * omega);
}

std::array<double, 3> field_vector(const Operator& h)
{
    if (h.rows() != 2) throw std::invalid_argument("field_vector: single-qubit operator expected");
    return {std::real((h * X).trace()), std::real((h * Y).trace()), std::real((h * Z).trace())};
}

double field_norm(const Operator& h)
{
    auto b = field_vector(h);
    return std::sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2]);
}

Operator axis_projector(const std::array<double, 3>& axis, int sign)
{
    const double n = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
    if (std::abs(n - 1) > 1e-9) throw std::invalid_argument("axis_projector: axis is not a unit vector");
    const double eps = std::acos(std::clamp(axis[2], -1.0, 1.0));
    const double del = std::atan2(axis[1], axis[0]);
    Ket v(2);
    if (sign > 0) v << std::cos(eps / 2), std::polar(std::sin(eps / 2), del);
    else v << -std::sin(eps / 2), std::polar(std::cos(eps / 2), del);
    return v * v.adjoint();
}

Operator gate_unitary(const GateSpec& g)
{
    Operator pm = axis_projector(g.axis, -1);
    if (g.controlled) {
        Operator p1 = Operator::Zero(2, 2);
        p1(1, 1) = 1;
        Operator p = kron<double>(p1, pm);
        return Operator::Identity(4, 4) + (std::polar(1.0, g.phi) - 1.0) * p;
    }
    return I2 + (std::polar(1.0, g.phi) - 1.0) * pm;
}

Operator ancilla_hamiltonian(double omega, double phi0, double xi, double s)
{
    return -omega * (Z * std::cos(phi0 * s) + std::sin(phi0 * s) * (X * std::cos(xi) + Y * std::sin(xi)));
}

Operator ancilla_counter_diabatic(double phi0, double xi, double tau)
{
    return phi0 / (2 * tau) * (Y * std::cos(xi) - X * std::sin(xi));
}

Schedule<double> controlled_gate_schedule(const GateSpec& g, double tau)
{
    if (!(g.phi0 > 0 && g.phi0 <= M_PI)) throw std::invalid_argument("controlled_gate_schedule: phi0 must lie in (0, pi]");
    if (tau <= 0) throw std::invalid_argument("controlled_gate_schedule: tau must be positive");
    Operator pm = axis_projector(g.axis, -1);
    Operator rot, rest;
    if (g.controlled) {
        Operator p1 = Operator::Zero(2, 2);
        p1(1, 1) = 1;
        rot = kron<double>(p1, pm);
        rest = Operator::Identity(4, 4) - rot;
    } else {
        rot = pm;
        rest = I2 - pm;
    }
    Schedule<double> h;
    h.tau = tau;
    h.hamiltonian = [=](double s) {
        auto block = [&](double xi) {
            Operator a = Operator::Zero(2, 2);
            if (g.variant != GateVariant::optimal) a += ancilla_hamiltonian(g.omega, g.phi0, xi, s);
            if (g.variant != GateVariant::adiabatic) a += ancilla_counter_diabatic(g.phi0, xi, tau);
            return a;
        };
        return Operator(kron<double>(rest, block(0.0)) + kron<double>(rot, block(g.phi)));
    };
    return h;
}

GateRun gate_run(const GateSpec& g, const Schedule<double>& h, const Ket& input, int n_steps)
{
    const int dt = g.controlled ? 4 : 2;
    if (input.size() != dt) throw std::invalid_argument("gate_run: input has wrong dimension");
    if (std::abs(input.norm() - 1) > 1e-10) throw std::invalid_argument("gate_run: input not normalized");
    Ket zero = Ket::Zero(2);
    zero(0) = 1;
    Operator psi0 = kron<double>(Operator(input), Operator(zero));
    GateRun r;
    Operator fin = propagate(h, psi0, n_steps, [&](int, const Operator& x) {
        double w = 0;
        for (int i = 0; i < dt; ++i) w += std::norm(x(2 * i + 1, 0));
        r.branch_weight.push_back(w);
    });
    Ket out(dt);
    for (int i = 0; i < dt; ++i) out(i) = fin(2 * i + 1, 0);
    r.success_prob = out.squaredNorm();
    if (r.success_prob < 1e-12) throw std::runtime_error("gate_run: post-selection probability vanishes");
    r.output = out / std::sqrt(r.success_prob);
    Ket target = gate_unitary(g) * input;
    r.fidelity = std::abs(target.dot(r.output));
    return r;
}

Schedule<double> phase_gate_schedule(GateVariant v, double tau, double nu_hz)
{
    GateSpec g;
    g.axis = {0, 0, 1};
    g.phi = M_PI;
    g.phi0 = M_PI;
    g.omega = 2 * M_PI * nu_hz;
    g.variant = v;
    return controlled_gate_schedule(g, tau);
}

double unitary_overlap(const Operator& a, const Operator& b)
{
    return std::abs((a.adjoint() * b).trace()) / double(a.rows());
}

}  // namespace adlab
