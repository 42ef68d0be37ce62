#include "doctest.h"
#include "test_util.hpp"

#include "adlab/thermo.hpp"

using namespace adlab;
using namespace testutil;

namespace {

const Operator X = pauli<double>('X'), Y = pauli<double>('Y'), Z = pauli<double>('Z');
const double OMEGA = ev_to_angular(82.662e-12);
const double BETA = hbar_ev_s / 17.238e-12;  // seconds

std::function<double(double)> linear_rate(double g0, double tau)
{
    return [g0, tau](double t) { return g0 * (1 + t / tau); };
}

Schedule<double> lz_closed(double delta, double sweep, double tau)
{
    Schedule<double> l;
    l.tau = tau;
    l.hamiltonian = [=](double s) { return Operator(0.5 * delta * X + 0.5 * sweep * (s - 0.5) * Z); };
    l.hamiltonian_rate = [=](double) { return Operator(0.5 * sweep / tau * Z); };
    return l;
}

}  // namespace

TEST_CASE("heat and work rates agree with the superoperator forms")
{
    std::mt19937 rng(11);
    for (int d : {2, 4}) {
        auto basis = basis_for(d);
        for (int trial = 0; trial < 5; ++trial) {
            Operator h = random_hermitian(d, rng), hd = random_hermitian(d, rng), rho = random_density(d, rng);
            std::vector<Channel<double>> ch{{0.7, random_complex(d, rng)}, {0.2, random_hermitian(d, rng)}};
            OperatorMap<double> gen = [&](const Operator& x) { return lindblad_rhs<double>(h, ch, x); };
            auto lmat = superoperator_matrix(gen, basis);
            auto rv = to_coherence_vector<double>(rho, basis);
            double q1 = heat_rate(gen, rho, h);
            double q2 = heat_rate(lmat, rv, observable_vector<double>(h, basis));
            CHECK(std::abs(q1 - q2) < 1e-10 * std::max(1.0, std::abs(q1)));
            double w1 = work_rate(hd, rho);
            double w2 = work_rate(observable_vector<double>(hd, basis), rv);
            CHECK(std::abs(w1 - w2) < 1e-10 * std::max(1.0, std::abs(w1)));
        }
    }
    OperatorMap<double> zero = [](const Operator& x) { return Operator(Operator::Zero(x.rows(), x.cols())); };
    CHECK(heat_rate(zero, random_density(2, rng), X) == 0.0);
    // maximally mixed state is stationary for unital dephasing
    OperatorMap<double> deph = [](const Operator& x) {
        return lindblad_rhs<double>(X, {{1.0, Z}}, x);
    };
    CHECK(std::abs(heat_rate(deph, Operator::Identity(2, 2) / 2.0, X)) < 1e-15);
    CHECK(std::abs(work_rate(Operator::Zero(2, 2), random_density(2, rng))) == 0.0);
}

TEST_CASE("entropy rate")
{
    OperatorMap<double> deph = [](const Operator& x) { return lindblad_rhs<double>(X, {{1.0, Z}}, x); };
    auto mixed = entropy_rate(deph, Operator::Identity(2, 2) / 2.0);
    CHECK(std::abs(mixed.value) < 1e-15);
    CHECK_FALSE(mixed.floored);

    Operator pure = Operator::Zero(2, 2);
    pure(0, 0) = 1;
    CHECK(entropy_rate(deph, pure).floored);
    Operator bad = Operator::Zero(2, 2);
    bad(0, 0) = 1.1;
    bad(1, 1) = -0.1;
    CHECK_THROWS_AS(entropy_rate(deph, bad), std::invalid_argument);

    // rho = (1 - g X)/2 under Z dephasing at rate gamma: -Tr(L[rho] log rho) = 2 g gamma arctanh g
    const double g = 0.6, gamma = 3.0;
    Operator rho = (Operator::Identity(2, 2) - g * X) / 2.0;
    OperatorMap<double> l = [&](const Operator& x) { return lindblad_rhs<double>(X, {{gamma, Z}}, x); };
    CHECK(entropy_rate(l, rho).value == doctest::Approx(2 * g * gamma * std::atanh(g)).epsilon(1e-12));
}

TEST_CASE("caption energies give the maximal heat")
{
    const double q = angular_to_ev(OMEGA * std::tanh(BETA * OMEGA));
    CHECK(BETA * OMEGA == doctest::Approx(82.662 / 17.238).epsilon(1e-12));
    CHECK(q * 1e12 == doctest::Approx(82.65).epsilon(1e-3));
}

TEST_CASE("dephasing scenario matches the closed forms")
{
    const double tau = 2e-3;
    for (double g0 : {314.0, 628.0, 1257.0}) {
        auto r = dephasing_heat_scenario(OMEGA, BETA, linear_rate(g0, tau), tau, 20000);
        const double closed = OMEGA * std::tanh(BETA * OMEGA) * (1 - std::exp(-2 * 1.5 * g0 * tau));
        CHECK(std::abs(r.q_total - closed) < 1e-6 * closed);
        CHECK(std::abs(r.q_closed - closed) < 1e-10 * closed);
        CHECK(r.q_total > 0);
        CHECK(r.ledger.first_law_residual < 1e-8);
        CHECK_FALSE(r.ledger.entropy_floored);

        const auto& led = r.ledger;
        double worst_rel = 0, worst_ds = 0, worst_rate = 0;
        for (std::size_t k = 0; k < led.t.size(); ++k) {
            const double t = led.t[k];
            const double gam = g0 * (1 + t / tau);
            const double g = std::exp(-2 * g0 * (t + t * t / (2 * tau))) * std::tanh(BETA * OMEGA);
            const double dq = 2 * OMEGA * gam * g;
            worst_rate = std::max(worst_rate, std::abs(led.dq[k] - dq) / dq);
            const double rhs = r.beta_deph[k] * led.dq[k];
            worst_rel = std::max(worst_rel, std::abs(led.ds[k] - rhs) / std::abs(rhs));
            worst_ds = std::max(worst_ds, std::abs(led.ds[k] - 2 * g * gam * std::atanh(g)) / (2 * g * gam * std::atanh(g)));
            CHECK(r.beta_deph[k] == doctest::Approx(std::atanh(g) / OMEGA).epsilon(1e-6));
        }
        CHECK(worst_rate < 1e-6);
        CHECK(worst_rel < 1e-8);
        CHECK(worst_ds < 1e-6);
    }
    auto zero = dephasing_heat_scenario(OMEGA, BETA, linear_rate(314, 1), 0.0, 10);
    CHECK(zero.q_total == 0.0);
    CHECK_THROWS_AS(dephasing_heat_scenario(OMEGA, -1, linear_rate(314, 1), 1e-3, 10), std::invalid_argument);
}

TEST_CASE("heat saturates at the same value for every rate")
{
    const double tau = 0.05;
    double prev_mid = 0;
    for (double g0 : {314.0, 628.0, 1257.0}) {
        auto r = dephasing_heat_scenario(OMEGA, BETA, linear_rate(g0, tau), tau, 200000);
        CHECK(std::abs(r.q_total - r.q_max) < 1e-6 * r.q_max);
        // at a fixed early time the faster rate has exchanged more heat
        const std::size_t mid = r.ledger.t.size() / 100;
        CHECK(r.ledger.heat[mid] > prev_mid);
        prev_mid = r.ledger.heat[mid];
    }
}

TEST_CASE("adiabatic heat equals the heat rate on the adiabatic trajectory")
{
    const double tau = 2e-3, g0 = 628;
    auto l = dephasing_schedule(OMEGA, linear_rate(g0, tau), tau);
    Operator rho0 = thermal_state(l.h(0.0), BETA);
    std::vector<cplx> hint{0.0, -2 * g0, cplx(-g0, 2 * OMEGA), cplx(-g0, -2 * OMEGA)};
    auto sol = adiabatic_propagate_1d(l, rho0, 401, hint);
    auto series = adiabatic_heat_1d(sol, [&](double s) { return l.h(s); });
    double scale = 0, worst = 0;
    for (std::size_t k = 0; k < sol.s.size(); ++k) {
        double direct = heat_rate(generator_at(l, sol.s[k]), sol.states[k], l.h(sol.s[k]));
        scale = std::max(scale, std::abs(direct));
        worst = std::max(worst, std::abs(series[k] - direct));
    }
    CHECK(worst < 1e-8 * scale);

    // thermal state with dephasing in the eigenbasis: only the degenerate lambda = 0 pair (I, Z) is populated
    AdiabaticOpenSolution eig;
    eig.tau = tau;
    eig.s = uniform_grid<double>(11);
    auto basis = basis_for(2);
    eig.r0 = to_coherence_vector<double>(thermal_state(OMEGA * Z, BETA), basis).comps;
    eig.spectrum.s = eig.s;
    eig.spectrum.tau = tau;
    for (double s : eig.s) {
        CVec<double> lam(4);
        lam << 0.0, cplx(-2 * g0 * (1 + s), -2 * OMEGA), cplx(-2 * g0 * (1 + s), 2 * OMEGA), 0.0;
        Operator right = Operator::Identity(4, 4);
        right.block(1, 1, 2, 2) << 1.0, 1.0, cplx(0, 1), cplx(0, -1);
        eig.spectrum.eigenvalues.push_back(lam);
        eig.spectrum.right.push_back(right);
        eig.phase.push_back(CVec<double>::Zero(4));
    }
    for (double q : adiabatic_heat_1d(eig, [&](double) { return Operator(OMEGA * Z); })) CHECK(q == 0.0);
}

TEST_CASE("closed sweep: work equals the energy change")
{
    auto l = lz_closed(2 * M_PI * 1e3, 2 * M_PI * 2e4, 1e-3);
    Operator rho0 = Operator::Zero(2, 2);
    Eigen::SelfAdjointEigenSolver<Operator> es(l.h(0.0));
    rho0 = projector<double>(es.eigenvectors().col(0));
    auto led = thermo_ledger(l, rho0, 20000, 100);
    const double du = led.energy.back() - led.energy.front();
    CHECK(std::abs(led.work.back() - du) < 1e-8 * std::abs(du));
    CHECK(std::abs(led.heat.back()) < 1e-12 * std::abs(du));
    CHECK(led.first_law_residual < 1e-8);
}

TEST_CASE("heat is invariant under unitary conjugation of the channel")
{
    const double tau = 2e-3, g0 = 628;
    auto l = dephasing_schedule(OMEGA, linear_rate(g0, tau), tau);
    Operator rho0 = thermal_state(l.h(0.0), BETA);
    const int steps = 4000;
    const double q = thermo_ledger(l, rho0, steps, steps).heat.back();

    std::mt19937 rng(5);
    double worst = 0;
    for (int trial = 0; trial < 50; ++trial) {
        Operator u = random_unitary(2, rng);
        auto lc = unitary_conjugate_channel(l, u);
        worst = std::max(worst, std::abs(thermo_ledger(lc, u * rho0 * u.adjoint(), steps, steps).heat.back() - q));
    }
    CHECK(worst < 1e-9 * q);

    auto same = unitary_conjugate_channel(l, Operator::Identity(2, 2));
    CHECK(max_abs(same.h(0.3) - l.h(0.3)) == 0.0);
    CHECK_THROWS_AS(unitary_conjugate_channel(l, 2.0 * Operator::Identity(2, 2)), std::invalid_argument);

    // dephasing turned into a bit flip on the rotated Hamiltonian: saturation heat unchanged
    auto rx = [](double a) { return Operator(std::cos(a / 2) * Operator::Identity(2, 2) - cplx(0, std::sin(a / 2)) * X); };
    auto rz = [](double a) { return Operator(std::cos(a / 2) * Operator::Identity(2, 2) - cplx(0, std::sin(a / 2)) * Z); };
    Operator u = rx(M_PI / 2) * rz(M_PI / 2);
    const double tl = 0.05;
    auto lf = unitary_conjugate_channel(dephasing_schedule(OMEGA, linear_rate(g0, tl), tl), u);
    auto led = thermo_ledger(lf, u * rho0 * u.adjoint(), 200000, 200000);
    CHECK(std::abs(led.heat.back() - OMEGA * std::tanh(BETA * OMEGA)) < 1e-6 * OMEGA);
}
