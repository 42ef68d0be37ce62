// Heat, work and entropy bookkeeping for open-system trajectories.
#pragma once

#include "adlab/openad.hpp"

#include <vector>

namespace adlab {

inline constexpr double hbar_ev_s = 6.582119569e-16;

inline double ev_to_angular(double energy_ev) { return energy_ev / hbar_ev_s; }
inline double angular_to_ev(double omega) { return omega * hbar_ev_s; }

// Tr(L[rho] H)
double heat_rate(const OperatorMap<double>& gen, const Operator& rho, const Operator& h);
// (1/D) <<h|L|rho>>
double heat_rate(const Superoperator<double>& l, const CoherenceVector<double>& rho, const CVec<double>& h);
// Tr(rho dH/dt)
double work_rate(const Operator& h_dot, const Operator& rho);
double work_rate(const CVec<double>& h_dot, const CoherenceVector<double>& rho);

struct EntropyRate {
    double value = 0;
    bool floored = false;
};

// -Tr(L[rho] log rho), eigenvalues below log_floor are clamped and flagged.
EntropyRate entropy_rate(const OperatorMap<double>& gen, const Operator& rho, double log_floor = 1e-14);
double von_neumann_entropy(const Operator& rho, double log_floor = 1e-14);

struct ThermoLedger {
    std::vector<double> t;
    std::vector<Operator> rho;
    std::vector<double> energy, du, dq, dw, entropy, ds;
    std::vector<double> heat, work;  // cumulative
    double first_law_residual = 0;   // relative
    bool entropy_floored = false;
};

// RK4 on rho together with the heat and work accumulators.
ThermoLedger thermo_ledger(const Schedule<double>& l, const Operator& rho0, int n_steps, int stride = 1);

// (1/D) sum_b r_b e^{int Lambda_b} lambda_b <<h|D_b>> on the solution grid
std::vector<double> adiabatic_heat_1d(const AdiabaticOpenSolution& sol, const std::function<Operator(double)>& h);

struct DephasingHeat {
    ThermoLedger ledger;
    double q_total = 0;
    double q_closed = 0;   // hbar w tanh(beta hbar w)(1 - e^{-2 mean(gamma) tau})
    double q_max = 0;      // hbar w tanh(beta hbar w)
    std::vector<double> beta_deph;
};

// H = w X, thermal start, dephasing Z channel with rate gamma(t) over tau_dec; beta in seconds (beta hbar w = beta * w).
Schedule<double> dephasing_schedule(double omega, const std::function<double(double)>& gamma_of_t, double tau_dec);
Operator thermal_state(const Operator& h, double beta);
DephasingHeat dephasing_heat_scenario(double omega, double beta, const std::function<double(double)>& gamma_of_t,
                                      double tau_dec, int n_steps);

Schedule<double> unitary_conjugate_channel(const Schedule<double>& l, const Operator& u);

}  // namespace adlab
