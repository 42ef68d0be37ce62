// Built-in qubit models of the closed-system chapter: rotating and oscillating fields.
#pragma once

#include "adlab/spectral.hpp"

namespace adlab {

// A schedule bundled with its analytic eigenpairs and natural rotating frame.
struct Model {
    Schedule<double> h;
    std::function<std::pair<RVec<double>, Operator>(double)> eig;
    std::function<Operator(double)> deig_dt;  // empty: grid differences
    std::function<Operator(double)> frame;
    std::function<Operator(double)> frame_dot;

    SpectralFrame<double> analytic(int n_points) const;
};

// O(t) = exp(i w t sigma_z / 2) and its time derivative.
std::function<Operator(double)> z_rotation(double omega, double tau);
std::function<Operator(double)> z_rotation_dot(double omega, double tau);

// H = w0 Z/2 + w1/2 (cos wt X + sin wt Y)
Model nmr_rotating(double omega0, double omega1, double omega, double tau);
// H_R = (w0 - w) Z/2 + w1 X/2
Model nmr_rotating_frame(double omega0, double omega1, double omega, double tau);
// H = (w0 Z + w1 sin(wt) X)/2
Model oscillating(double omega0, double omega1, double omega, double tau);
// H_O = (w0 - w) Z/2 + w1 sin(wt)/2 (cos wt X - sin wt Y)
Model oscillating_noninertial(double omega0, double omega1, double omega, double tau);

// Eigenpairs of b.sigma/2 with b = (bx, by, bz), ascending, continuous in the signed transverse amplitude.
std::pair<RVec<double>, Operator> spin_half_eigen(double transverse, double azimuth, double bz);

}  // namespace adlab
