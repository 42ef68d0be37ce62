// Closed-system adiabaticity conditions and frame-change validators.
#pragma once

#include "adlab/models.hpp"

#include <string>
#include <vector>

namespace adlab {

enum class TongAverage { max, mean };
enum class NormKind { spectral, frobenius };

struct TongTerms {
    double a = 0, b = 0, c = 0, value = 0;
};

struct AdiabaticityReport {
    std::string frame;
    std::vector<double> s;
    double tau = 0;
    double c_trad = 0;
    TongTerms c_tong;
    double c_wu = 0;
    double c_ar = 0;
    std::vector<std::string> notices;
};

double c_trad(const SpectralFrame<double>& f, const Schedule<double>& h);
TongTerms c_tong(const SpectralFrame<double>& f, const Schedule<double>& h, TongAverage avg = TongAverage::max);
// Skipped points (vanishing gamma_nm) are appended to notices when given.
double c_wu(const SpectralFrame<double>& f, const Schedule<double>& h, std::vector<std::string>* notices = nullptr);
// lambda(s) defaults to the gap E_1 - E_0.
double c_ar(const SpectralFrame<double>& f, const Schedule<double>& h,
            const std::function<double(double)>& lambda = {}, NormKind norm = NormKind::spectral);

AdiabaticityReport evaluate_conditions(const SpectralFrame<double>& f, const Schedule<double>& h,
                                       const std::string& label, TongAverage avg = TongAverage::max,
                                       NormKind norm = NormKind::spectral);

struct Theorem1Result {
    bool satisfied = false;
    double max_deviation = 0;
    std::vector<std::vector<double>> series;  // per level m, overlap modulus over the grid
};

struct Theorem2Result {
    bool satisfied = false;
    double max_deviation = 0;
};

// Condition |<E^O_m(t)|O(t)|E_k(t)>| = const on the grid, starting from eigenstate k.
Theorem1Result theorem1_check(const Schedule<double>& h, const std::function<Operator(double)>& o,
                              const std::function<Operator(double)>& o_dot, int k, double tol,
                              int n_points = 1001);

// U_O(t,0) = O(t)^dag exp(-i H_O t) O(0) with H_O verified constant.
Theorem2Result theorem2_check(const Schedule<double>& h, const std::function<Operator(double)>& o,
                              const std::function<Operator(double)>& o_dot, const Operator& h_o_const, int n,
                              double tol, int n_points = 1001);

struct TwoFrameResult {
    double inertial_deviation = 0;     // max | |<E_m(t)|psi>| - delta_mk |
    double noninertial_deviation = 0;  // max | |<E^O_m(t)|psi_O>| - value at t0 |
    double frame_mismatch = 0;         // max | psi_O - O psi | between the two integrations
};

// Integrates from eigenstate k in both frames and records eigenstate populations.
TwoFrameResult two_frame_populations(const Schedule<double>& h, const std::function<Operator(double)>& o,
                                     const std::function<Operator(double)>& o_dot, int k, int n_points = 1001);

// hbar w0 |1 - r|
double min_gap_noninertial(double omega0, double r);
// Smallest instantaneous gap over the grid, without tracking.
double instantaneous_min_gap(const Schedule<double>& h, int n_points);

Operator expm_hermitian(const Operator& h, double t);

}  // namespace adlab
