// Open-system adiabaticity: Xi coefficients, adiabatic propagation, Deutsch scenario.
#pragma once

#include "adlab/spectral.hpp"

#include <string>
#include <vector>

namespace adlab {

// Liouvillian matrix of an open schedule at s in the given basis.
Operator liouvillian_matrix(const Schedule<double>& l, const BasisPtr<double>& basis, double s);
BasisPtr<double> basis_for(int dim);

// Running amplitude used inside F_ab: decoupled adiabatic solution from rho0, or unit initial weights.
enum class PClosure { adiabatic, unit };

struct XiReport {
    std::vector<double> s;
    double tau = 0;
    // [alpha][beta][point]; diagonal entries left empty
    std::vector<std::vector<std::vector<double>>> xi1, xi2;
    RMat<double> max1, max2;
    double max_value = 0;
};

XiReport xi_coefficients(const Schedule<double>& l, int n_points, PClosure closure, const Operator& rho0 = {},
                         const std::vector<cplx>& order_hint = {});
XiReport xi_coefficients(const TrackedLiouville<double>& tl, PClosure closure, const CVec<double>& r0 = {});

struct AdiabaticOpenSolution {
    std::vector<double> s;
    double tau = 0;
    CVec<double> r0;
    std::vector<CVec<double>> phase;  // integral of Lambda_a dt at each grid point
    std::vector<CVec<double>> coherence;
    std::vector<Operator> states;
    TrackedLiouville<double> spectrum;
};

AdiabaticOpenSolution adiabatic_propagate_1d(const Schedule<double>& l, const Operator& rho0, int n_points,
                                             const std::vector<cplx>& order_hint = {});

// dp/dt = (S - G(s)) p with S the upward shift (S p)_k = p_{k+1}; samples at n_steps + 1 uniform times.
std::vector<CVec<double>> jordan_block_coefficient_ode(const std::function<Operator(double)>& g,
                                                       const CVec<double>& p0, double tau, int n_steps);

struct InverseIdentityResiduals {
    double inverse = 0;       // max |u u~ - 1| over blocks
    double block_form = 0;    // max residual of the four block-diagonalization conditions
};

InverseIdentityResiduals adiabatic_propagator_inverse_identities(const std::vector<Operator>& u,
                                                                 const std::vector<Operator>& u_tilde);

// max over the grid of |U U^-1 - 1| and of the off-diagonal part of E(0) U^-1 L U D(0),
// with U the one-dimensional-block adiabatic propagator.
double propagator_conjugation_residual(const std::function<Operator(double)>& lmat, const TrackedLiouville<double>& tl);

struct DeutschResult {
    std::vector<double> s;
    double tau = 0;
    int F = 0;
    std::vector<Operator> rho;         // integrated
    std::vector<Operator> rho_ad;      // open-system adiabatic solution
    std::vector<Operator> rho_target;  // closed-system adiabatic state
    std::vector<double> f_os, f_cs;
};

Schedule<double> deutsch_schedule(int f0, int f1, double omega, const std::function<double(double)>& gamma, double tau);
// Eigenvalue order 0, -2g, -D+, -D- with D+ = g + i sqrt(w^2 - g^2).
std::vector<cplx> deutsch_order_hint(double omega, double gamma);
DeutschResult deutsch_scenario(int f0, int f1, double omega, const std::function<double(double)>& gamma, double tau,
                               int n_points = 401);

struct Certificate {
    bool certified = false;
    std::vector<std::string> reasons;
};

Certificate asymptotic_adiabaticity_certificate(const Schedule<double>& l, const Operator& rho0, int n_points = 401,
                                                const std::vector<cplx>& order_hint = {});

}  // namespace adlab
