// Transitionless driving: counter-diabatic synthesis, phase choices, energy accounting,
// controlled-evolution gates and the pulse compiler.
#pragma once

#include "adlab/models.hpp"

#include <array>
#include <string>

namespace adlab {

enum class PhaseMode { adiabatic, optimal, constant, user };

struct PhaseChoice {
    PhaseMode mode = PhaseMode::optimal;
    double value = 0;                          // constant mode, rad/s
    std::function<RVec<double>(double)> user;  // per-level phases at s, rad/s
};

PhaseChoice adiabatic_phases();
PhaseChoice optimal_phases();
PhaseChoice constant_phases(double theta);
PhaseChoice user_phases(std::function<RVec<double>(double)> fn);

// Per-level phases given eigenpairs and time derivatives at one instant.
RVec<double> phase_values(const PhaseChoice& p, double s, const RVec<double>& energies, const Operator& vecs,
                          const Operator& dvecs);

// i sum_n |dE_n><E_n| - sum_n theta_n |E_n><E_n|, Hermitized; residual is max|H - H^dag| / scale.
Operator tqd_hamiltonian(const RVec<double>& energies, const Operator& vecs, const Operator& dvecs,
                         const RVec<double>& theta, double* residual = nullptr);

// From analytic eigen-data (derivatives from the model or fourth-order differences).
Schedule<double> generalized_tqd(const Model& m, const PhaseChoice& p);
Schedule<double> standard_tqd(const Model& m);
// From a tracked grid frame; samples interpolated with cubic Lagrange polynomials.
Schedule<double> generalized_tqd(const SpectralFrame<double>& f, const PhaseChoice& p);
Schedule<double> standard_tqd(const SpectralFrame<double>& f);

// Eigenpairs and dE/dt of a model at s.
struct EigenSample {
    RVec<double> energies;
    Operator vecs, dvecs;
};
EigenSample eigen_sample(const Model& m, double s);

// H = delta (Z + tan(theta(s)) X), parallel-transported eigenvectors, ascending levels.
Model lz_model(double delta, std::function<double(double)> theta, std::function<double(double)> dtheta_ds,
               double tau);

// (1/tau) int sqrt(Tr H^2) dt by composite trapezoid on n_quad points.
double energy_cost_sigma(const Schedule<double>& h, int n_quad = 2001);

struct ConnectionConstancy {
    bool constant = false;
    double max_variation = 0;  // relative to max |<E_k|dE_m/dt>|
};
ConnectionConstancy connection_constancy(const SpectralFrame<double>& f, double tol = 1e-8);

struct LzIntensities {
    double i0 = 1, istd = 0, iopt = 0;  // relative to the adiabatic intensity
    double tau_b = 0;
};
LzIntensities lz_intensities(const std::function<double(double)>& theta, double delta, double tau,
                             int n_quad = 4001);

double nmr_field_ratio(double omega0, double omega1, double omega);
// b with H = b.sigma / 2
std::array<double, 3> field_vector(const Operator& h);
double field_norm(const Operator& h);

enum class GateVariant { adiabatic, standard, optimal };

struct GateSpec {
    std::array<double, 3> axis{0, 0, 1};  // rotation axis on the Bloch sphere
    double phi = M_PI;                    // rotation angle
    double phi0 = M_PI;                   // sets the success probability sin^2(phi0/2)
    double omega = 2 * M_PI * 35;         // ancilla field strength, rad/s
    GateVariant variant = GateVariant::optimal;
    bool controlled = false;
};

// Projector P_- = |n_-><n_-| for the rotation axis.
Operator axis_projector(const std::array<double, 3>& axis, int sign);
// Target (or control x target) unitary of the rotation.
Operator gate_unitary(const GateSpec& g);
// Ancilla Hamiltonian -w[Z cos(phi0 s) + sin(phi0 s)(X cos xi + Y sin xi)] and its counter-diabatic term.
Operator ancilla_hamiltonian(double omega, double phi0, double xi, double s);
Operator ancilla_counter_diabatic(double phi0, double xi, double tau);

// Composite schedule on target x ancilla (or control x target x ancilla).
Schedule<double> controlled_gate_schedule(const GateSpec& g, double tau);

struct GateRun {
    Ket output;  // post-selected on ancilla |1>
    double success_prob = 0;
    double fidelity = 0;  // |<psi_rot|output>|
    std::vector<double> branch_weight;  // ancilla |1> weight along the run
};
GateRun gate_run(const GateSpec& g, const Schedule<double>& h, const Ket& input, int n_steps);

// Phase-gate schedules on target x ancilla with w = 2 pi nu.
Schedule<double> phase_gate_schedule(GateVariant v, double tau, double nu_hz);

struct PulseItem {
    enum class Kind { rotation, free, zframe } kind = Kind::rotation;
    int spin = 1;      // 0 target, 1 ancilla
    double angle = 0;  // rad
    double phase = 0;  // rad, rotation axis cos(phase) X + sin(phase) Y
    double dt = 0;     // s
};

struct PulseSequence {
    std::vector<PulseItem> items;
    double coupling_hz = 0;

    int rotation_count() const;
    double energy() const { return rotation_count(); }  // units of the single-pulse energy
    std::string to_text() const;
    static PulseSequence from_text(const std::string& text, double coupling_hz);
    // Free evolution under (pi J / 2) Z x Z; virtual z-frames applied as rotations.
    Operator unitary() const;
};

PulseSequence compile_pulse_sequence(GateVariant v, int n, double tau, double nu_hz, double j_hz);

// |Tr(A^dag B)| / D
double unitary_overlap(const Operator& a, const Operator& b);

}  // namespace adlab
