#include "adlab/battery.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace adlab {

Operator passive_state(const Operator& rho, const Operator& h0)
{
    if (max_abs(h0 - h0.adjoint()) > 1e-10 * std::max(1.0, max_abs(h0)))
        throw std::invalid_argument("passive_state: h0 is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Operator> eh(h0), er(Operator(0.5 * (rho + rho.adjoint())));
    const int d = int(h0.rows());
    // eigenvalues ascend; pair the largest population with the lowest energy
    Operator out = Operator::Zero(d, d);
    for (int k = 0; k < d; ++k) {
        const double p = er.eigenvalues()(d - 1 - k);
        out += p * eh.eigenvectors().col(k) * eh.eigenvectors().col(k).adjoint();
    }
    return out;
}

double ergotropy(const Operator& rho, const Operator& h0)
{
    return (h0 * rho).trace().real() - (h0 * passive_state(rho, h0)).trace().real();
}

void BatterySpec::validate() const
{
    if (levels.size() < 2) throw std::invalid_argument("BatterySpec: need at least two levels");
    for (int k = 1; k < levels.size(); ++k)
        if (!(levels(k) > levels(k - 1))) throw std::invalid_argument("BatterySpec: levels must ascend strictly");
}

Operator BatterySpec::h0() const
{
    validate();
    return levels.cast<cplx>().asDiagonal();
}

double BatterySpec::p_max() const { return M_PI / (2 * e_max()); }

BatterySpec transmon_ladder(double omega0)
{
    BatterySpec s;
    s.levels.resize(3);
    s.levels << 0.0, omega0, 1.95 * omega0;
    return s;
}

ChargingNoise ChargingNoise::transmon(double gamma0, double rabi)
{
    ChargingNoise n;
    n.decay21 = gamma0 * rabi;
    n.decay32 = 2 * n.decay21;
    n.dephase2 = n.decay21;
    n.dephase3 = 2 * n.decay21;
    return n;
}

Ramp linear_ramp()
{
    return [](double s) { return s; };
}

Ramp sine_squared_ramp()
{
    return [](double s) { return std::pow(std::sin(M_PI * s / 2), 2); };
}

Ramp smoothstep_ramp()
{
    return [](double s) { return s * s * (3 - 2 * s); };
}

Ramp named_ramp(const std::string& name)
{
    if (name == "linear") return linear_ramp();
    if (name == "sin2") return sine_squared_ramp();
    if (name == "smoothstep") return smoothstep_ramp();
    throw std::invalid_argument("unknown ramp '" + name + "' (expected linear, sin2 or smoothstep)");
}

void check_ramp(const Ramp& f)
{
    if (!f) throw std::invalid_argument("ramp is empty");
    if (std::abs(f(0.0)) > 1e-12 || std::abs(f(1.0) - 1) > 1e-12)
        throw std::invalid_argument("ramp must satisfy f(0) = 0 and f(1) = 1");
}

PulsePair charging_pulses(ChargeProtocol p, const Ramp& f, double rabi)
{
    check_ramp(f);
    if (p == ChargeProtocol::stable)
        return {[=](double s) { return rabi * f(s); }, [=](double s) { return rabi * (1 - f(s)); }};
    return {[=](double s) { return rabi * (1 - f(s)); }, [=](double s) { return rabi * f(s); }};
}

void check_protocol(ChargeProtocol p, const PulsePair& pulses)
{
    const double a0 = pulses.pump(0), b0 = pulses.stokes(0), a1 = pulses.pump(1), b1 = pulses.stokes(1);
    const double scale = std::max({std::abs(a0), std::abs(b0), std::abs(a1), std::abs(b1)});
    if (scale == 0) throw std::invalid_argument("charging pulses vanish at both ends");
    const double tol = 1e-12 * scale;
    if (p == ChargeProtocol::stable) {
        if (std::abs(a0) > tol || std::abs(b0) <= tol)
            throw std::invalid_argument("stable protocol needs pump(0) = 0 and stokes(0) != 0");
        if (std::abs(b1) > tol || std::abs(a1) <= tol)
            throw std::invalid_argument("stable protocol needs stokes(tau) = 0 and pump(tau) != 0");
    } else {
        if (std::abs(b0) > tol || std::abs(a0) <= tol)
            throw std::invalid_argument("unstable protocol needs stokes(0) = 0 and pump(0) != 0");
    }
}

namespace {

Operator ket_bra(int d, int i, int j)
{
    Operator m = Operator::Zero(d, d);
    m(i, j) = 1;
    return m;
}

std::vector<Channel<double>> charging_channels(const ChargingNoise& n)
{
    return {{n.decay21, ket_bra(3, 0, 1)},
            {n.decay32, ket_bra(3, 1, 2)},
            {n.dephase2, ket_bra(3, 1, 1)},
            {n.dephase3, ket_bra(3, 2, 2)}};
}

void check_times(double tau, double hold)
{
    if (!(tau > 0) || !std::isfinite(tau)) throw std::invalid_argument("charge time must be positive");
    if (!(hold >= 0) || !std::isfinite(hold)) throw std::invalid_argument("hold time must be non-negative");
}

}  // namespace

Schedule<double> stirap_schedule(const PulsePair& pulses, const ChargingNoise& noise, double tau, double hold)
{
    check_times(tau, hold);
    Schedule<double> l;
    l.tau = tau + hold;
    const double total = l.tau;
    l.hamiltonian = [=](double s) {
        const double x = std::min(s * total / tau, 1.0);
        const double a = pulses.pump(x), b = pulses.stokes(x);
        Operator h = Operator::Zero(3, 3);
        h(0, 1) = h(1, 0) = a;
        h(1, 2) = h(2, 1) = b;
        return h;
    };
    if (!noise.silent()) {
        auto ch = charging_channels(noise);
        l.channels = [ch](double) { return ch; };
    }
    return l;
}

Schedule<double> stirap_lab_schedule(const BatterySpec& spec, const PulsePair& pulses, const ChargingNoise& noise,
                                     double tau, double hold)
{
    check_times(tau, hold);
    const Operator h0 = spec.h0();
    if (h0.rows() != 3) throw std::invalid_argument("stirap_lab_schedule: three levels required");
    const RVec<double> w = spec.levels;
    Schedule<double> l;
    l.tau = tau + hold;
    const double total = l.tau;
    l.hamiltonian = [=](double s) {
        const double t = s * total;
        const double x = std::min(t / tau, 1.0);
        Operator h = h0;
        const cplx c12 = pulses.pump(x) * std::polar(1.0, (w(1) - w(0)) * t);
        const cplx c23 = pulses.stokes(x) * std::polar(1.0, (w(2) - w(1)) * t);
        h(0, 1) += c12;
        h(1, 0) += std::conj(c12);
        h(1, 2) += c23;
        h(2, 1) += std::conj(c23);
        return h;
    };
    if (!noise.silent()) {
        auto ch = charging_channels(noise);
        l.channels = [ch](double) { return ch; };
    }
    return l;
}

namespace {

double tail_max(const std::vector<double>& t, const std::vector<double>& p)
{
    if (t.empty()) return 0;
    const double start = t.front() + 0.9 * (t.back() - t.front());
    double m = 0;
    for (size_t k = 0; k < t.size(); ++k)
        if (t[k] >= start - 1e-12 * t.back()) m = std::max(m, std::abs(p[k]));
    return m;
}

}  // namespace

ChargeReport stirap_charge(const BatterySpec& spec, const PulsePair& pulses, const ChargingNoise& noise, double tau,
                           ChargeProtocol protocol, int n_steps, double hold, int stride)
{
    spec.validate();
    if (spec.levels.size() != 3) throw std::invalid_argument("stirap_charge: three levels required");
    check_protocol(protocol, pulses);
    if (n_steps < 1) throw std::invalid_argument("stirap_charge: n_steps must be positive");
    auto l = stirap_schedule(pulses, noise, tau, hold);
    const Operator h0 = spec.h0();
    Operator rho0 = Operator::Zero(3, 3);
    rho0(0, 0) = 1;
    auto tr = evolve_lindblad(l, rho0, n_steps, stride);

    ChargeReport r;
    r.capacity = spec.e_max();
    for (size_t k = 0; k < tr.times.size(); ++k) {
        const Operator& rho = tr.rhos[k];
        const double s = tr.times[k] / l.tau;
        r.t.push_back(tr.times[k]);
        r.energy.push_back((h0 * rho).trace().real());
        r.ergotropy.push_back(ergotropy(rho, h0));
        r.power.push_back((h0 * lindblad_rhs<double>(l.h(s), l.jumps(s), rho)).trace().real());
    }
    r.final_ergotropy = r.ergotropy.back();
    // charge reached at the end of the ramp
    const size_t at_tau = std::min(r.t.size() - 1, size_t(std::lround(tau / l.tau * double(r.t.size() - 1))));
    r.power_ratio = r.ergotropy[at_tau] / tau / spec.p_max();
    r.tail_power = tail_max(r.t, r.power);
    return r;
}

double dark_state_ergotropy(const BatterySpec& spec, double a, double b)
{
    const double d2 = a * a + b * b;
    if (d2 == 0) throw std::domain_error("dark_state_ergotropy: both Rabi frequencies vanish");
    return (spec.levels(2) * a * a + spec.levels(0) * b * b) / d2 - spec.levels(0);
}

double bright_pair_ergotropy(const BatterySpec& spec, double a, double b, double phase)
{
    const double d2 = a * a + b * b;
    if (d2 == 0) throw std::domain_error("bright_pair_ergotropy: both Rabi frequencies vanish");
    const double c2 = std::pow(std::cos(phase), 2);
    return c2 / d2 * (spec.levels(0) * a * a + spec.levels(2) * b * b) + spec.levels(1) * (1 - c2) - spec.levels(0);
}

Operator power_operator(const Operator& h0_a, const Operator& hc, double tol)
{
    if (h0_a.rows() != hc.rows() || h0_a.cols() != hc.cols())
        throw std::invalid_argument("power_operator: dimension mismatch");
    Operator p = cplx(0, -1) * commutator<double>(h0_a, hc);
    const double scale = std::max(1.0, max_abs(h0_a) * max_abs(hc));
    if (max_abs(p - p.adjoint()) > tol * scale)
        throw std::invalid_argument("power_operator: result is not Hermitian (non-Hermitian inputs?)");
    return 0.5 * (p + p.adjoint());
}

namespace {

const Operator& id2()
{
    static const Operator i = Operator::Identity(2, 2);
    return i;
}

Operator on3(const Operator& a, const Operator& b, const Operator& c) { return kron_all<double>({a, b, c}); }

}  // namespace

Operator two_cell_initial_hamiltonian(double j)
{
    const Operator X = pauli<double>('X'), Y = pauli<double>('Y');
    return j * (on3(X, X, id2()) + on3(Y, Y, id2()));
}

Operator two_cell_middle_hamiltonian(double j)
{
    const Operator X = pauli<double>('X'), Y = pauli<double>('Y');
    return j * (on3(X, X, id2()) + on3(Y, Y, id2()) + on3(id2(), X, X) + on3(id2(), Y, Y));
}

Operator two_cell_final_hamiltonian(double j)
{
    const Operator Z = pauli<double>('Z');
    return j * (on3(Z, id2(), Z) + on3(id2(), Z, Z));
}

Schedule<double> two_cell_schedule(const Ramp& f, double j, double tau)
{
    check_ramp(f);
    if (!(tau > 0)) throw std::invalid_argument("two_cell_schedule: tau must be positive");
    const Operator hi = two_cell_initial_hamiltonian(j), hm = two_cell_middle_hamiltonian(j),
                   hf = two_cell_final_hamiltonian(j);
    Schedule<double> h;
    h.tau = tau;
    h.hamiltonian = [=](double s) {
        const double x = f(s);
        return Operator((1 - x) * hi + (1 - x) * x * hm + x * hf);
    };
    return h;
}

Operator hub_hamiltonian(double omega0) { return on3(id2(), id2(), Operator(-omega0 * pauli<double>('Z'))); }

Operator parity_operator()
{
    const Operator Z = pauli<double>('Z');
    return on3(Z, Z, Z);
}

Ket two_cell_initial_state()
{
    // (|01> - |10>)/sqrt2 on the cells, |0> on the hub; index = 4 b1 + 2 b2 + a
    Ket k = Ket::Zero(8);
    k(2) = 1 / std::sqrt(2.0);
    k(4) = -1 / std::sqrt(2.0);
    return k;
}

ChargeReport two_cell_discharge(const Ramp& f, double j, double omega0, double tau, int n_steps, int stride)
{
    if (!(omega0 > 0)) throw std::invalid_argument("two_cell_discharge: omega0 must be positive");
    if (n_steps < 1) throw std::invalid_argument("two_cell_discharge: n_steps must be positive");
    stride = std::max(1, stride);
    auto h = two_cell_schedule(f, j, tau);
    const Operator ha = hub_hamiltonian(omega0), pz = parity_operator();
    const double empty = -omega0;

    ChargeReport r;
    r.capacity = 2 * omega0;
    const double dt = tau / n_steps;
    propagate(h, Operator(two_cell_initial_state()), n_steps, [&](int k, const Operator& x) {
        const double s = double(k) / n_steps;
        const Operator hs = h.h(s);
        r.max_commutator = std::max(r.max_commutator, max_abs(commutator<double>(hs, pz)));
        const Ket psi = x.col(0);
        const double par = psi.dot(pz * psi).real();
        r.parity_drift = std::max(r.parity_drift, std::abs(par + 1));
        if (k % stride != 0 && k != n_steps) return;
        const double e = psi.dot(ha * psi).real();
        r.t.push_back(k * dt);
        r.energy.push_back(e);
        r.ergotropy.push_back(e - empty);
        r.power.push_back(psi.dot(power_operator(ha, hs) * psi).real());
        r.parity.push_back(par);
    });
    r.final_ergotropy = r.ergotropy.back();
    r.power_ratio = r.final_ergotropy / tau;
    r.tail_power = tail_max(r.t, r.power);
    return r;
}

}  // namespace adlab
