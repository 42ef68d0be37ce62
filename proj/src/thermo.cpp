#include "adlab/thermo.hpp"

#include <cmath>
#include <stdexcept>

namespace adlab {

double heat_rate(const OperatorMap<double>& gen, const Operator& rho, const Operator& h)
{
    return std::real((gen(rho) * h).trace());
}

double heat_rate(const Superoperator<double>& l, const CoherenceVector<double>& rho, const CVec<double>& h)
{
    if (h.size() != rho.comps.size() || l.matrix.cols() != rho.comps.size())
        throw std::invalid_argument("heat_rate: dimension mismatch");
    return std::real(h.dot(l.matrix * rho.comps)) / rho.basis->norm;
}

double work_rate(const Operator& h_dot, const Operator& rho)
{
    return std::real((rho * h_dot).trace());
}

double work_rate(const CVec<double>& h_dot, const CoherenceVector<double>& rho)
{
    if (h_dot.size() != rho.comps.size()) throw std::invalid_argument("work_rate: dimension mismatch");
    return std::real(h_dot.dot(rho.comps)) / rho.basis->norm;
}

namespace {

struct LogResult {
    Operator log;
    bool floored = false;
};

LogResult floored_log(const Operator& rho, double log_floor)
{
    Eigen::SelfAdjointEigenSolver<Operator> es((rho + rho.adjoint()) / 2.0);
    const auto& ev = es.eigenvalues();
    if (ev.minCoeff() < -default_tol().pos)
        throw std::invalid_argument("entropy: state has eigenvalue " + std::to_string(ev.minCoeff()));
    LogResult r;
    RVec<double> lg(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i) < log_floor) r.floored = true;
        lg(i) = std::log(std::max(ev(i), log_floor));
    }
    r.log = es.eigenvectors() * lg.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
    return r;
}

}  // namespace

EntropyRate entropy_rate(const OperatorMap<double>& gen, const Operator& rho, double log_floor)
{
    auto lg = floored_log(rho, log_floor);
    return {-std::real((gen(rho) * lg.log).trace()), lg.floored};
}

double von_neumann_entropy(const Operator& rho, double log_floor)
{
    Eigen::SelfAdjointEigenSolver<Operator> es((rho + rho.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
    double s = 0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        double p = es.eigenvalues()(i);
        if (p > log_floor) s -= p * std::log(p);
    }
    return s;
}

ThermoLedger thermo_ledger(const Schedule<double>& l, const Operator& rho0, int n_steps, int stride)
{
    if (n_steps < 1 || stride < 1) throw std::invalid_argument("thermo_ledger: step counts must be positive");
    if (!is_density_matrix(rho0)) throw std::invalid_argument("thermo_ledger: rho0 is not a density matrix");
    ThermoLedger led;
    const double dt = l.tau / n_steps;
    Operator rho = rho0;
    double q = 0, w = 0;

    struct Sample {
        Operator h, h_dot;
        std::vector<Channel<double>> ch;
    };
    auto sample = [&](double s) { return Sample{l.h(s), l.h_dot(s), l.jumps(s)}; };
    auto rates = [](const Sample& x, const Operator& r, Operator& drho, double& dq, double& dw) {
        drho = lindblad_rhs<double>(x.h, x.ch, r);
        dq = std::real((drho * x.h).trace());
        dw = std::real((r * x.h_dot).trace());
    };

    auto record = [&](int k, const Sample& x) {
        const double s = double(k) / n_steps;
        Operator drho;
        double dq, dw;
        rates(x, rho, drho, dq, dw);
        auto gen = [&](const Operator& r) { return lindblad_rhs<double>(x.h, x.ch, r); };
        auto es = entropy_rate(gen, rho);
        led.entropy_floored = led.entropy_floored || es.floored;
        led.t.push_back(s * l.tau);
        led.rho.push_back(rho);
        led.energy.push_back(std::real((rho * x.h).trace()));
        led.dq.push_back(dq);
        led.dw.push_back(dw);
        led.du.push_back(dq + dw);
        led.entropy.push_back(von_neumann_entropy(rho));
        led.ds.push_back(es.value);
        led.heat.push_back(q);
        led.work.push_back(w);
    };

    Sample s0 = sample(0.0);
    record(0, s0);
    for (int k = 0; k < n_steps; ++k) {
        const double a = double(k) / n_steps, b = double(k + 1) / n_steps;
        Sample sm = sample((a + b) / 2), s1 = sample(b);
        Operator k1, k2, k3, k4;
        double q1, q2, q3, q4, w1, w2, w3, w4;
        rates(s0, rho, k1, q1, w1);
        rates(sm, rho + (dt / 2) * k1, k2, q2, w2);
        rates(sm, rho + (dt / 2) * k2, k3, q3, w3);
        rates(s1, rho + dt * k3, k4, q4, w4);
        rho += (dt / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        q += (dt / 6) * (q1 + 2 * q2 + 2 * q3 + q4);
        w += (dt / 6) * (w1 + 2 * w2 + 2 * w3 + w4);
        if (!detail::all_finite(rho))
            throw std::runtime_error("integration failure at step " + std::to_string(k + 1));
        s0 = std::move(s1);
        if ((k + 1) % stride == 0 || k + 1 == n_steps) record(k + 1, s0);
    }

    double scale = 0, resid = 0;
    for (std::size_t i = 0; i < led.t.size(); ++i) {
        const double du = led.energy[i] - led.energy[0];
        scale = std::max({scale, std::abs(du), std::abs(led.heat[i]), std::abs(led.work[i])});
        resid = std::max(resid, std::abs(du - led.heat[i] - led.work[i]));
    }
    led.first_law_residual = scale > 0 ? resid / scale : resid;
    return led;
}

std::vector<double> adiabatic_heat_1d(const AdiabaticOpenSolution& sol, const std::function<Operator(double)>& h)
{
    const auto& tl = sol.spectrum;
    auto basis = basis_for(int(h(0.0).rows()));
    std::vector<double> out(sol.s.size());
    for (std::size_t k = 0; k < sol.s.size(); ++k) {
        CVec<double> weighted(tl.size());
        for (int b = 0; b < tl.size(); ++b)
            weighted(b) = sol.r0(b) * std::exp(sol.phase[k](b)) * tl.eigenvalues[k](b);
        CVec<double> hv = observable_vector<double>(h(sol.s[k]), basis);
        out[k] = std::real(hv.dot(tl.right[k] * weighted)) / basis->norm;
    }
    return out;
}

Schedule<double> dephasing_schedule(double omega, const std::function<double(double)>& gamma_of_t, double tau_dec)
{
    if (tau_dec <= 0) throw std::invalid_argument("dephasing_schedule: tau_dec must be positive");
    Schedule<double> l;
    l.tau = tau_dec;
    const Operator h = omega * pauli<double>('X');
    l.hamiltonian = [h](double) { return h; };
    l.hamiltonian_rate = [](double) { return Operator(Operator::Zero(2, 2)); };
    l.channels = [gamma_of_t, tau_dec](double s) {
        double g = gamma_of_t(s * tau_dec);
        if (g < 0) throw std::invalid_argument("dephasing_schedule: negative rate");
        return std::vector<Channel<double>>{{g, pauli<double>('Z')}};
    };
    return l;
}

Operator thermal_state(const Operator& h, double beta)
{
    Eigen::SelfAdjointEigenSolver<Operator> es((h + h.adjoint()) / 2.0);
    RVec<double> e = es.eigenvalues();
    const double e0 = e.minCoeff();
    RVec<double> p = (-beta * (e.array() - e0)).exp().matrix();
    p /= p.sum();
    return es.eigenvectors() * p.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

DephasingHeat dephasing_heat_scenario(double omega, double beta, const std::function<double(double)>& gamma_of_t,
                                      double tau_dec, int n_steps)
{
    if (omega <= 0 || beta <= 0) throw std::invalid_argument("dephasing_heat_scenario: omega and beta must be positive");
    DephasingHeat out;
    if (tau_dec == 0) {
        Operator rho = thermal_state(omega * pauli<double>('X'), beta);
        out.q_max = omega * std::tanh(beta * omega);
        out.ledger.t = {0.0};
        out.ledger.rho = {rho};
        out.ledger.heat = {0.0};
        out.ledger.work = {0.0};
        out.beta_deph = {beta};
        return out;
    }
    auto l = dephasing_schedule(omega, gamma_of_t, tau_dec);
    out.ledger = thermo_ledger(l, thermal_state(l.h(0.0), beta), n_steps, std::max(1, n_steps / 1000));
    out.q_total = out.ledger.heat.back();
    out.q_max = omega * std::tanh(beta * omega);

    // mean rate by Simpson on a fine grid
    const int m = 2000;
    double acc = gamma_of_t(0) + gamma_of_t(tau_dec);
    for (int i = 1; i < m; ++i) acc += (i % 2 ? 4 : 2) * gamma_of_t(tau_dec * i / m);
    const double gamma_int = acc * tau_dec / (3.0 * m);
    out.q_closed = out.q_max * (1 - std::exp(-2 * gamma_int));

    const Operator x = pauli<double>('X');
    for (const auto& r : out.ledger.rho) {
        double g = -std::real((r * x).trace());
        out.beta_deph.push_back(std::atanh(g) / omega);
    }
    return out;
}

Schedule<double> unitary_conjugate_channel(const Schedule<double>& l, const Operator& u)
{
    if (!is_unitary(u, 1e-10)) throw std::invalid_argument("unitary_conjugate_channel: operator is not unitary");
    if (u.rows() != l.dim()) throw std::invalid_argument("unitary_conjugate_channel: dimension mismatch");
    Schedule<double> out = l;
    auto h = l.hamiltonian;
    out.hamiltonian = [h, u](double s) { return Operator(u * h(s) * u.adjoint()); };
    if (l.hamiltonian_rate) {
        auto hr = l.hamiltonian_rate;
        out.hamiltonian_rate = [hr, u](double s) { return Operator(u * hr(s) * u.adjoint()); };
    }
    if (l.channels) {
        auto ch = l.channels;
        out.channels = [ch, u](double s) {
            auto v = ch(s);
            for (auto& c : v) c.jump = u * c.jump * u.adjoint();
            return v;
        };
    }
    return out;
}

}  // namespace adlab
