#include "adlab/adcheck.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace adlab {

namespace {

double energy_scale(const SpectralFrame<double>& f)
{
    return std::max(f.energies.cwiseAbs().maxCoeff(), 1e-300);
}

void require_gaps(const SpectralFrame<double>& f, int k)
{
    const double thr = 1e-8 * energy_scale(f);
    for (int n = 0; n + 1 < f.levels(); ++n)
        if (std::abs(f.energies(k, n + 1) - f.energies(k, n)) <= thr)
            throw std::domain_error("degenerate gap at t = " + detail::fmt_time(f.time(k)) + " s");
}

// <E_m|Hdot|E_n> / (E_m - E_n)^2 over the grid, indexed [m][n][point].
std::vector<std::vector<std::vector<cplx>>> rate_ratios(const SpectralFrame<double>& f, const Schedule<double>& h)
{
    const int nl = f.levels(), np = f.points();
    std::vector<std::vector<std::vector<cplx>>> q(nl, std::vector<std::vector<cplx>>(nl, std::vector<cplx>(np)));
    for (int k = 0; k < np; ++k) {
        require_gaps(f, k);
        Operator m = f.vecs[k].adjoint() * h.h_dot(f.s[k]) * f.vecs[k];
        for (int a = 0; a < nl; ++a)
            for (int b = 0; b < nl; ++b) {
                if (a == b) continue;
                const double g = f.energies(k, a) - f.energies(k, b);
                q[a][b][k] = m(a, b) / (g * g);
            }
    }
    return q;
}

template <typename F>
double reduce(int np, TongAverage avg, F&& value)
{
    double acc = 0;
    for (int k = 0; k < np; ++k) {
        const double v = value(k);
        acc = avg == TongAverage::max ? std::max(acc, v) : acc + v;
    }
    return avg == TongAverage::max ? acc : acc / np;
}

std::vector<Operator> instantaneous_vectors(const Schedule<double>& h, const std::vector<double>& s)
{
    std::vector<Operator> out;
    out.reserve(s.size());
    for (double x : s) {
        Operator hx = h.h(x);
        Eigen::SelfAdjointEigenSolver<Operator> es((hx + hx.adjoint()) / 2.0);
        out.push_back(es.eigenvectors());
    }
    return out;
}

int aligned_steps(const Schedule<double>& h, int n_points)
{
    const int seg = n_points - 1;
    const int rec = recommended_steps(h);
    return seg * std::max(1, (rec + seg - 1) / seg);
}

}  // namespace

Operator expm_hermitian(const Operator& h, double t)
{
    Eigen::SelfAdjointEigenSolver<Operator> es((h + h.adjoint()) / 2.0);
    Ket ph(es.eigenvalues().size());
    for (Eigen::Index i = 0; i < ph.size(); ++i) ph(i) = std::polar(1.0, -es.eigenvalues()(i) * t);
    return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

double c_trad(const SpectralFrame<double>& f, const Schedule<double>& h)
{
    return c_tong(f, h).a;
}

TongTerms c_tong(const SpectralFrame<double>& f, const Schedule<double>& h, TongAverage avg)
{
    const int nl = f.levels(), np = f.points();
    const double ds = f.s[1] - f.s[0];
    auto q = rate_ratios(f, h);
    TongTerms t;
    for (int m = 0; m < nl; ++m)
        for (int n = 0; n < nl; ++n) {
            if (m == n) continue;
            const auto& qmn = q[m][n];
            auto dq = grid_derivative(qmn, ds);
            const double qa = reduce(np, avg, [&](int k) { return std::abs(qmn[k]); });
            const double qb = reduce(np, avg, [&](int k) { return std::abs(dq[k]) / f.tau; });
            t.a = std::max(t.a, qa);
            t.b = std::max(t.b, qb * f.tau);
            for (int l = 0; l < nl; ++l) {
                if (l == m) continue;
                const double conn = reduce(np, avg, [&](int k) {
                    return std::abs(cplx(f.vecs[k].col(m).dot(f.dvecs[k].col(l))));
                });
                t.c = std::max(t.c, qa * conn * f.tau);
            }
        }
    t.value = std::max({t.a, t.b, t.c});
    return t;
}

double c_wu(const SpectralFrame<double>& f, const Schedule<double>&, std::vector<std::string>* notices)
{
    const int nl = f.levels(), np = f.points();
    const double ds = f.s[1] - f.s[0];
    // gamma[n][m][k] = i <E_n|Edot_m>
    std::vector<std::vector<std::vector<cplx>>> g(nl, std::vector<std::vector<cplx>>(nl, std::vector<cplx>(np)));
    double gmax = 0;
    for (int k = 0; k < np; ++k) {
        require_gaps(f, k);
        Operator c = cplx(0, 1) * (f.vecs[k].adjoint() * f.dvecs[k]);
        for (int n = 0; n < nl; ++n)
            for (int m = 0; m < nl; ++m) {
                g[n][m][k] = c(n, m);
                if (n != m) gmax = std::max(gmax, std::abs(c(n, m)));
            }
    }
    if (gmax == 0) return 0;
    const double thr = 1e-10 * gmax;
    const double root = std::sqrt(double(nl - 1));
    double best = 0;
    int skipped = 0;
    for (int m = 0; m < nl; ++m)
        for (int n = 0; n < nl; ++n) {
            if (m == n) continue;
            auto dg = grid_derivative(g[n][m], ds);
            double prev = 0;
            for (int k = 0; k < np; ++k) {
                const cplx gnm = g[n][m][k];
                if (std::abs(gnm) <= thr) {
                    ++skipped;
                    prev = 0;
                    continue;
                }
                const double darg = std::imag(std::conj(gnm) * dg[k]) / std::norm(gnm) / f.tau;
                const double delta = std::real(g[m][m][k] - g[n][n][k]) + darg;
                double num = 0;
                for (int j = 0; j < nl; ++j) num = std::max(num, std::abs(g[j][m][k]));
                const double den = f.energies(k, n) - f.energies(k, m) + delta;
                if (den == 0 || prev * den < 0) {
                    if (notices)
                        notices->push_back("c_wu: shifted gap changes sign near t = " + detail::fmt_time(f.time(k)) +
                                           " s, condition unbounded");
                    return std::numeric_limits<double>::infinity();
                }
                prev = den;
                best = std::max(best, root * num / std::abs(den));
            }
        }
    if (skipped && notices)
        notices->push_back("c_wu: " + std::to_string(skipped) + " grid terms skipped where gamma_nm vanishes");
    return best;
}

double c_ar(const SpectralFrame<double>& f, const Schedule<double>& h, const std::function<double(double)>& lambda,
            NormKind norm)
{
    auto nrm = [norm](const Operator& a) {
        return norm == NormKind::spectral ? detail::spectral_norm(a) : a.norm();
    };
    double best = 0;
    for (int k = 0; k < f.points(); ++k) {
        const double lam = lambda ? lambda(f.s[k]) : f.energies(k, 1) - f.energies(k, 0);
        if (!(std::abs(lam) > 1e-8 * energy_scale(f)))
            throw std::domain_error("c_ar: vanishing gap at t = " + detail::fmt_time(f.time(k)) + " s");
        const double d1 = nrm(h.h_dot(f.s[k]));
        const double d2 = nrm(h.h_ddot(f.s[k]));
        const double l = std::abs(lam);
        best = std::max({best, d1 * d1 * d1 / (l * l * l * l), d1 * d2 / (l * l * l)});
    }
    return best * f.tau * f.tau;
}

AdiabaticityReport evaluate_conditions(const SpectralFrame<double>& f, const Schedule<double>& h,
                                       const std::string& label, TongAverage avg, NormKind norm)
{
    AdiabaticityReport r;
    r.frame = label;
    r.s = f.s;
    r.tau = f.tau;
    r.c_tong = c_tong(f, h, avg);
    r.c_trad = avg == TongAverage::max ? r.c_tong.a : c_trad(f, h);
    r.c_wu = c_wu(f, h, &r.notices);
    r.c_ar = c_ar(f, h, {}, norm);
    return r;
}

Theorem1Result theorem1_check(const Schedule<double>& h, const std::function<Operator(double)>& o,
                              const std::function<Operator(double)>& o_dot, int k, double tol, int n_points)
{
    auto ho = frame_transform<double>(h, o, o_dot);
    const auto s = uniform_grid<double>(n_points);
    auto va = instantaneous_vectors(h, s);
    auto vb = instantaneous_vectors(ho, s);
    const int d = h.dim();
    if (k < 0 || k >= d) throw std::invalid_argument("theorem1_check: eigenstate index out of range");
    Theorem1Result r;
    r.series.assign(d, std::vector<double>(n_points));
    for (int p = 0; p < n_points; ++p) {
        Ket ek = o(s[p]) * va[p].col(k);
        for (int m = 0; m < d; ++m) r.series[m][p] = std::abs(cplx(vb[p].col(m).dot(ek)));
    }
    for (int m = 0; m < d; ++m)
        for (int p = 0; p < n_points; ++p)
            r.max_deviation = std::max(r.max_deviation, std::abs(r.series[m][p] - r.series[m][0]));
    r.satisfied = r.max_deviation < tol;
    return r;
}

Theorem2Result theorem2_check(const Schedule<double>& h, const std::function<Operator(double)>& o,
                              const std::function<Operator(double)>& o_dot, const Operator& h_o_const, int n,
                              double tol, int n_points)
{
    auto ho = frame_transform<double>(h, o, o_dot);
    const auto s = uniform_grid<double>(n_points);
    const double scale = std::max(1.0, max_abs(h_o_const));
    for (double x : s)
        if (max_abs(ho.h(x) - h_o_const) > 1e-8 * scale)
            throw std::invalid_argument("theorem2_check: frame Hamiltonian is not constant at t = " +
                                        detail::fmt_time(x * h.tau) + " s");
    auto v = instantaneous_vectors(h, s);
    const int d = h.dim();
    if (n < 0 || n >= d) throw std::invalid_argument("theorem2_check: eigenstate index out of range");
    const Operator o0 = o(0.0);
    const Ket e0 = v[0].col(n);
    Theorem2Result r;
    for (int p = 0; p < n_points; ++p) {
        const double t = s[p] * h.tau;
        Ket psi = o(s[p]).adjoint() * expm_hermitian(h_o_const, t) * o0 * e0;
        for (int k = 0; k < d; ++k) {
            const double ref = std::abs(cplx(v[0].col(k).dot(e0)));
            r.max_deviation = std::max(r.max_deviation, std::abs(std::abs(cplx(v[p].col(k).dot(psi))) - ref));
        }
    }
    r.satisfied = r.max_deviation < tol;
    return r;
}

TwoFrameResult two_frame_populations(const Schedule<double>& h, const std::function<Operator(double)>& o,
                                     const std::function<Operator(double)>& o_dot, int k, int n_points)
{
    auto ho = frame_transform<double>(h, o, o_dot);
    const auto s = uniform_grid<double>(n_points);
    auto va = instantaneous_vectors(h, s);
    auto vb = instantaneous_vectors(ho, s);
    const int d = h.dim();
    const int steps = std::max(aligned_steps(h, n_points), aligned_steps(ho, n_points));
    const int stride = steps / (n_points - 1);

    std::vector<Ket> psi(n_points), psi_o(n_points);
    const Ket e0 = va[0].col(k);
    propagate(h, Operator(e0), steps, [&](int j, const Operator& x) {
        if (j % stride == 0) psi[j / stride] = x.col(0);
    });
    propagate(ho, Operator(o(0.0) * e0), steps, [&](int j, const Operator& x) {
        if (j % stride == 0) psi_o[j / stride] = x.col(0);
    });

    TwoFrameResult r;
    std::vector<double> q0(d);
    for (int m = 0; m < d; ++m) q0[m] = std::abs(cplx(vb[0].col(m).dot(psi_o[0])));
    for (int p = 0; p < n_points; ++p) {
        r.frame_mismatch = std::max(r.frame_mismatch, max_abs(psi_o[p] - o(s[p]) * psi[p]));
        for (int m = 0; m < d; ++m) {
            const double pa = std::abs(cplx(va[p].col(m).dot(psi[p])));
            r.inertial_deviation = std::max(r.inertial_deviation, std::abs(pa - (m == k ? 1.0 : 0.0)));
            const double qb = std::abs(cplx(vb[p].col(m).dot(psi_o[p])));
            r.noninertial_deviation = std::max(r.noninertial_deviation, std::abs(qb - q0[m]));
        }
    }
    return r;
}

double min_gap_noninertial(double omega0, double r)
{
    return std::abs(omega0 * (1 - r));
}

double instantaneous_min_gap(const Schedule<double>& h, int n_points)
{
    double g = std::numeric_limits<double>::infinity();
    for (double x : uniform_grid<double>(n_points)) {
        Operator hx = h.h(x);
        Eigen::SelfAdjointEigenSolver<Operator> es((hx + hx.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
        const auto& e = es.eigenvalues();
        for (Eigen::Index n = 0; n + 1 < e.size(); ++n) g = std::min(g, e(n + 1) - e(n));
    }
    return g;
}

}  // namespace adlab
