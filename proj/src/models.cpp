#include "adlab/models.hpp"

#include <cmath>

namespace adlab {

namespace {

const Operator X = pauli<double>('X');
const Operator Y = pauli<double>('Y');
const Operator Z = pauli<double>('Z');

}  // namespace

SpectralFrame<double> Model::analytic(int n_points) const
{
    return analytic_frame<double>(n_points, h.tau, eig, deig_dt);
}

std::function<Operator(double)> z_rotation(double omega, double tau)
{
    return [=](double s) {
        Operator o = Operator::Zero(2, 2);
        o(0, 0) = std::polar(1.0, 0.5 * omega * s * tau);
        o(1, 1) = std::polar(1.0, -0.5 * omega * s * tau);
        return o;
    };
}

std::function<Operator(double)> z_rotation_dot(double omega, double tau)
{
    auto o = z_rotation(omega, tau);
    return [=](double s) { return Operator(cplx(0, 0.5 * omega) * Z * o(s)); };
}

std::pair<RVec<double>, Operator> spin_half_eigen(double transverse, double azimuth, double bz)
{
    const double mag = std::hypot(transverse, bz);
    const double th = std::atan2(transverse, bz);
    const cplx ph = std::polar(1.0, azimuth);
    Operator v(2, 2);
    v(0, 0) = -std::conj(ph) * std::sin(th / 2);
    v(1, 0) = std::cos(th / 2);
    v(0, 1) = std::cos(th / 2);
    v(1, 1) = ph * std::sin(th / 2);
    RVec<double> e(2);
    e << -0.5 * mag, 0.5 * mag;
    return {e, v};
}

Model nmr_rotating(double w0, double w1, double w, double tau)
{
    Model m;
    m.h.tau = tau;
    m.h.hamiltonian = [=](double s) {
        const double t = s * tau;
        return Operator(0.5 * w0 * Z + 0.5 * w1 * (std::cos(w * t) * X + std::sin(w * t) * Y));
    };
    m.h.hamiltonian_rate = [=](double s) {
        const double t = s * tau;
        return Operator(0.5 * w1 * w * (-std::sin(w * t) * X + std::cos(w * t) * Y));
    };
    m.eig = [=](double s) { return spin_half_eigen(w1, w * s * tau, w0); };
    const double th = std::atan2(w1, w0);
    m.deig_dt = [=](double s) {
        const double t = s * tau;
        Operator d = Operator::Zero(2, 2);
        d(0, 0) = cplx(0, w) * std::polar(1.0, -w * t) * std::sin(th / 2);
        d(1, 1) = cplx(0, w) * std::polar(1.0, w * t) * std::sin(th / 2);
        return d;
    };
    m.frame = z_rotation(w, tau);
    m.frame_dot = z_rotation_dot(w, tau);
    return m;
}

Model nmr_rotating_frame(double w0, double w1, double w, double tau)
{
    Model m;
    m.h.tau = tau;
    const Operator hr = 0.5 * (w0 - w) * Z + 0.5 * w1 * X;
    m.h.hamiltonian = [=](double) { return hr; };
    m.h.hamiltonian_rate = [](double) { return Operator(Operator::Zero(2, 2)); };
    m.eig = [=](double) { return spin_half_eigen(w1, 0.0, w0 - w); };
    m.deig_dt = [](double) { return Operator(Operator::Zero(2, 2)); };
    return m;
}

Model oscillating(double w0, double w1, double w, double tau)
{
    Model m;
    m.h.tau = tau;
    m.h.hamiltonian = [=](double s) { return Operator(0.5 * (w0 * Z + w1 * std::sin(w * s * tau) * X)); };
    m.h.hamiltonian_rate = [=](double s) { return Operator(0.5 * w1 * w * std::cos(w * s * tau) * X); };
    m.eig = [=](double s) { return spin_half_eigen(w1 * std::sin(w * s * tau), 0.0, w0); };
    m.deig_dt = [=](double s) {
        const double t = s * tau;
        const double a = w1 * std::sin(w * t), ad = w1 * w * std::cos(w * t);
        const double thd = (ad * w0) / (a * a + w0 * w0);
        const double th = std::atan2(a, w0);
        Operator d(2, 2);
        d(0, 0) = -0.5 * thd * std::cos(th / 2);
        d(1, 0) = -0.5 * thd * std::sin(th / 2);
        d(0, 1) = -0.5 * thd * std::sin(th / 2);
        d(1, 1) = 0.5 * thd * std::cos(th / 2);
        return d;
    };
    m.frame = z_rotation(w, tau);
    m.frame_dot = z_rotation_dot(w, tau);
    return m;
}

Model oscillating_noninertial(double w0, double w1, double w, double tau)
{
    Model m;
    m.h.tau = tau;
    m.h.hamiltonian = [=](double s) {
        const double t = s * tau;
        return Operator(0.5 * (w0 - w) * Z + 0.5 * w1 * std::sin(w * t) * (std::cos(w * t) * X - std::sin(w * t) * Y));
    };
    m.h.hamiltonian_rate = [=](double s) {
        const double t = s * tau;
        return Operator(0.5 * w1 * w * (std::cos(2 * w * t) * X - std::sin(2 * w * t) * Y));
    };
    m.eig = [=](double s) {
        const double t = s * tau;
        return spin_half_eigen(w1 * std::sin(w * t), -w * t, w0 - w);
    };
    return m;
}

}  // namespace adlab
