#include "doctest.h"
#include "test_util.hpp"

#include "adlab/dynamics.hpp"

#include <cmath>

using namespace adlab;
using namespace testutil;

namespace {

const Operator X = pauli<double>('X'), Y = pauli<double>('Y'), Z = pauli<double>('Z');
const Operator I2 = Operator::Identity(2, 2);

Schedule<double> nmr(double w0, double w1, double w, double tau)
{
    Schedule<double> h;
    h.tau = tau;
    h.hamiltonian = [=](double s) {
        const double t = s * tau;
        return Operator(0.5 * w0 * Z + 0.5 * w1 * (std::cos(w * t) * X + std::sin(w * t) * Y));
    };
    return h;
}

Operator rot_z(double w, double tau, double s)
{
    Operator o = Operator::Zero(2, 2);
    o(0, 0) = std::polar(1.0, 0.5 * w * s * tau);
    o(1, 1) = std::polar(1.0, -0.5 * w * s * tau);
    return o;
}

}  // namespace

TEST_CASE("eigenstate of a static Hamiltonian only acquires a phase")
{
    const double w = 2 * M_PI * 1e3, tau = 1e-3;
    Schedule<double> h;
    h.tau = tau;
    h.hamiltonian = [&](double) { return Operator(0.5 * w * Z); };
    auto tr = evolve_unitary<double>(h, ket({1, 0}), 2000);
    for (std::size_t k = 0; k < tr.times.size(); k += 100) {
        CHECK(std::abs(tr.kets[k](1)) < 1e-14);
        CHECK(std::abs(tr.kets[k](0) - std::polar(1.0, -0.5 * w * tr.times[k])) < 1e-9);
    }
}

TEST_CASE("rotating-field qubit matches the closed-form ground population")
{
    const double w0 = 2 * M_PI * 1e6, theta = 0.03, w1 = w0 * std::tan(theta);
    for (double r : {0.1, 0.5, 1.0, 2.0, 3.0}) {
        const double w = r * w0;
        const double tau = 2 * nmr_tau_min(w0, w1, w, 0);
        auto h = nmr(w0, w1, w, tau);
        const int n = 1000 * int(std::ceil(recommended_steps(h) / 1000.0));
        auto tr = evolve_unitary<double>(h, ket({1, 0}), n, n / 1000);
        REQUIRE(tr.times.size() == 1001);
        double err = 0;
        for (std::size_t k = 0; k < tr.times.size(); ++k)
            err = std::max(err, std::abs(std::norm(tr.kets[k](0)) - nmr_closed_form_p0(w0, w1, w, tr.times[k])));
        CHECK(err < 1e-6);
    }
}

TEST_CASE("closed-form population limits")
{
    const double w0 = 1.0, w1 = 0.05;
    for (double t : {0.3, 7.0, 40.0}) CHECK(nmr_closed_form_p0(w0, w1, w0, t) == doctest::Approx(std::pow(std::cos(w1 * t / 2), 2)).epsilon(1e-12));
    CHECK(nmr_closed_form_p0(w0, w1, w0, M_PI / w1) < 1e-15);
    CHECK(nmr_closed_form_p0(w0, w1, w0, 3 * M_PI / w1) < 1e-15);
    const double theta = 0.03;
    const double w1b = std::tan(theta);
    CHECK(nmr_closed_form_p0(1.0, w1b, 0.0, nmr_tau_min(1.0, w1b, 0.0, 0)) == doctest::Approx(std::pow(std::cos(theta), 2)).epsilon(1e-12));
    const double r = 0.5;
    const double expect = (1 - r) * (1 - r) / ((1 - r) * (1 - r) + w1b * w1b);
    CHECK(nmr_closed_form_p0(1.0, w1b, r, nmr_tau_min(1.0, w1b, r, 0)) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(nmr_closed_form_p0(1.0, w1b, r, nmr_tau_max(1.0, w1b, r, 2)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("unitary norm drift over 1e4 steps")
{
    const double w0 = 2 * M_PI * 1e6;
    auto h = nmr(w0, 0.03 * w0, 0.5 * w0, 2e-6);
    auto tr = evolve_unitary<double>(h, ket({1, 0}), 10000, 10000);
    CHECK(tr.norm_drift < 1e-8);
    CHECK(max_frequency(h) * h.tau / 10000 < 0.05);
}

TEST_CASE("Lindblad integrator reduces to unitary evolution without noise")
{
    const double w0 = 2 * M_PI * 1e3;
    auto h = nmr(w0, 0.2 * w0, 0.7 * w0, 3e-3);
    auto l = h;
    l.channels = [](double) { return std::vector<Channel<double>>{{0.0, Operator(Z)}}; };
    const int n = 10 * recommended_steps(h);
    auto tu = evolve_unitary<double>(h, ket({1, 0}), n, 100);
    auto tl = evolve_lindblad<double>(l, projector<double>(ket({1, 0})), n, 100);
    REQUIRE(tu.kets.size() == tl.rhos.size());
    double err = 0;
    for (std::size_t k = 0; k < tu.kets.size(); ++k)
        err = std::max(err, max_abs(tl.rhos[k] - projector<double>(tu.kets[k])));
    CHECK(err < 1e-9);
}

TEST_CASE("constant dephasing of a thermal qubit decays the coherence as exp(-2 gamma t)")
{
    const double w = 2 * M_PI * 100.0, g = 40.0, th = std::tanh(0.8);
    Schedule<double> l;
    l.tau = 0.02;
    l.hamiltonian = [&](double) { return Operator(w * X); };
    l.channels = [&](double) { return std::vector<Channel<double>>{{g, Operator(Z)}}; };
    auto tr = evolve_lindblad<double>(l, Operator(0.5 * (I2 - th * X)), recommended_steps(l), 50);
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
        Operator expect = 0.5 * (I2 - std::exp(-2 * g * tr.times[k]) * th * X);
        CHECK(max_abs(tr.rhos[k] - expect) < 1e-10);
    }
}

TEST_CASE("Lindblad integrator preserves trace, Hermiticity and positivity")
{
    std::mt19937 rng(3);
    for (int rep = 0; rep < 5; ++rep) {
        const int d = rep % 2 ? 4 : 2;
        Operator h0 = random_hermitian(d, rng), h1 = random_hermitian(d, rng);
        Operator j0 = random_complex(d, rng), j1 = random_complex(d, rng);
        Schedule<double> l;
        l.tau = 3.0;
        l.hamiltonian = [=](double s) { return Operator(h0 + std::sin(3 * s) * h1); };
        l.channels = [=](double s) {
            return std::vector<Channel<double>>{{0.2 * (1 + s), j0}, {0.1, j1}};
        };
        auto tr = evolve_lindblad<double>(l, random_density(d, rng), recommended_steps(l), 100);
        CHECK(tr.trace_drift < 1e-9);
        CHECK(tr.herm_drift < 1e-9);
        CHECK(tr.min_eig >= -1e-7);
        CHECK(tr.warnings.empty());
    }
}

TEST_CASE("rotating frame of the rotating-field qubit is static")
{
    const double w0 = 2 * M_PI * 1e6, w1 = 0.03 * w0, w = 0.8 * w0, tau = 1e-5;
    auto h = nmr(w0, w1, w, tau);
    auto o = [&](double s) { return rot_z(w, tau, s); };
    auto odot = [&](double s) { return Operator(cplx(0, 0.5 * w) * Z * rot_z(w, tau, s)); };
    auto hr = frame_transform<double>(h, o, odot);
    Operator expect = 0.5 * (w0 - w) * Z + 0.5 * w1 * X;
    for (double s : {0.0, 0.13, 0.5, 0.77, 1.0}) CHECK(max_abs(hr.h(s) - expect) < 1e-6);
    // numerical derivative fallback
    auto hr2 = frame_transform<double>(h, o);
    for (double s : {0.1, 0.6}) CHECK(max_abs(hr2.h(s) - expect) / w0 < 1e-6);
}

TEST_CASE("identity frame leaves the schedule unchanged")
{
    auto h = nmr(3.0, 0.4, 1.1, 2.0);
    auto same = frame_transform<double>(h, [](double) { return Operator(I2); },
                                        [](double) { return Operator(Operator::Zero(2, 2)); });
    for (double s : {0.0, 0.4, 1.0}) CHECK(max_abs(same.h(s) - h.h(s)) < 1e-15);
}

TEST_CASE("oscillating field in the rotating frame")
{
    const double w0 = 5.0, w1 = 0.3, w = 4.1, tau = 2.7;
    Schedule<double> h;
    h.tau = tau;
    h.hamiltonian = [=](double s) { return Operator(0.5 * (w0 * Z + w1 * std::sin(w * s * tau) * X)); };
    auto ho = frame_transform<double>(h, [&](double s) { return rot_z(w, tau, s); },
                                      [&](double s) { return Operator(cplx(0, 0.5 * w) * Z * rot_z(w, tau, s)); });
    for (double s : {0.0, 0.21, 0.5, 0.93}) {
        const double t = s * tau;
        Operator expect = 0.5 * (w0 - w) * Z + 0.5 * w1 * std::sin(w * t) * (std::cos(w * t) * X - std::sin(w * t) * Y);
        CHECK(max_abs(ho.h(s) - expect) < 1e-12);
    }
}

TEST_CASE("frame round trip")
{
    std::mt19937 rng(5);
    Operator a = random_hermitian(2, rng), b = random_hermitian(2, rng);
    const double tau = 1.5;
    auto h = nmr(2.0, 0.7, 1.3, tau);
    // O(s) = exp(-i s tau a) via eigendecomposition
    Eigen::SelfAdjointEigenSolver<Operator> es(a);
    auto o = [=](double s) {
        Ket ph(2);
        for (int i = 0; i < 2; ++i) ph(i) = std::polar(1.0, -es.eigenvalues()(i) * s * tau);
        return Operator(es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint());
    };
    auto odot = [=](double s) { return Operator(cplx(0, -1) * a * o(s)); };
    auto oinv = [=](double s) { return Operator(o(s).adjoint()); };
    auto oinv_dot = [=](double s) { return Operator(odot(s).adjoint()); };
    auto back = frame_transform<double>(frame_transform<double>(h, o, odot), oinv, oinv_dot);
    for (double s : {0.0, 0.3, 0.66, 1.0}) CHECK(max_abs(back.h(s) - h.h(s)) < 1e-10);
    (void)b;
    CHECK_THROWS_AS(frame_transform<double>(h, [](double) { return Operator(2.0 * I2); }).h(0.5), std::invalid_argument);
}

TEST_CASE("Uhlmann fidelity")
{
    std::mt19937 rng(9);
    Operator r = random_density(3, rng), q = random_density(3, rng);
    CHECK(fidelity(r, r) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(fidelity(r, q) - fidelity(q, r)) < 1e-10);
    CHECK(fidelity<double>(projector<double>(ket({1, 0})), projector<double>(ket({0, 1}))) < 1e-12);
    Ket plus = ket({1, 1}) / std::sqrt(2.0);
    for (double c : {1.0, 0.6, 0.1, -0.4}) {
        Operator deph = 0.5 * (I2 + c * X);
        CHECK(fidelity<double>(projector<double>(plus), deph) == doctest::Approx(std::sqrt((1 + c) / 2)).epsilon(1e-10));
    }
    Operator bad(2, 2);
    bad << 1.5, 0, 0, -0.5;
    CHECK_THROWS_AS(fidelity<double>(bad, r.topLeftCorner(2, 2)), std::invalid_argument);
}

TEST_CASE("relative purity")
{
    Operator p0 = projector<double>(ket({1, 0})), p1 = projector<double>(ket({0, 1}));
    CHECK(relative_purity(p0, p0) == doctest::Approx(1.0));
    CHECK(relative_purity(p0, p1) == 0.0);
    CHECK(relative_purity<double>(p0, I2 / 2.0) == doctest::Approx(1 / std::sqrt(2.0)));
    CHECK_THROWS_AS(relative_purity<double>(p0, Operator::Zero(2, 2)), std::invalid_argument);
}
