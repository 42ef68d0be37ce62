// Tracked eigensystems of Hamiltonian schedules and Liouvillian spectra.
#pragma once

#include "adlab/dynamics.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace adlab {

enum class Gauge { smooth, parallel_transport };

template <typename Real>
using RMat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using RVec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

template <typename Real>
struct SpectralFrame {
    std::vector<Real> s;
    Real tau = 1;
    RMat<Real> energies;             // (point, level)
    std::vector<CMat<Real>> vecs;    // columns |E_n(s_k)>
    std::vector<CMat<Real>> dvecs;   // columns d/dt |E_n(s_k)>
    Gauge gauge = Gauge::smooth;

    int points() const { return int(s.size()); }
    int levels() const { return int(energies.cols()); }
    Real time(int k) const { return s[k] * tau; }
};

template <typename Real>
std::vector<Real> uniform_grid(int n_points)
{
    if (n_points < 2) throw std::invalid_argument("grid needs at least two points");
    std::vector<Real> s(n_points);
    for (int k = 0; k < n_points; ++k) s[k] = Real(k) / Real(n_points - 1);
    return s;
}

// Fourth-order derivative on a uniform grid, one-sided stencils at the ends.
template <typename T, typename Real>
std::vector<T> grid_derivative(const std::vector<T>& f, Real h)
{
    const int m = int(f.size());
    if (m < 5) throw std::invalid_argument("grid_derivative: need at least five points");
    std::vector<T> d(m);
    const Real c = Real(1) / (12 * h);
    d[0] = (Real(-25) * f[0] + Real(48) * f[1] - Real(36) * f[2] + Real(16) * f[3] - Real(3) * f[4]) * c;
    d[1] = (Real(-3) * f[0] - Real(10) * f[1] + Real(18) * f[2] - Real(6) * f[3] + f[4]) * c;
    for (int k = 2; k < m - 2; ++k) d[k] = (f[k - 2] - Real(8) * f[k - 1] + Real(8) * f[k + 1] - f[k + 2]) * c;
    d[m - 2] = (-f[m - 5] + Real(6) * f[m - 4] - Real(18) * f[m - 3] + Real(10) * f[m - 2] + Real(3) * f[m - 1]) * c;
    d[m - 1] = (Real(3) * f[m - 5] - Real(16) * f[m - 4] + Real(36) * f[m - 3] - Real(48) * f[m - 2] +
                Real(25) * f[m - 1]) * c;
    return d;
}

template <typename T, typename Real>
std::vector<T> cumulative_trapezoid(const std::vector<T>& f, Real h)
{
    std::vector<T> out(f.size());
    if (f.empty()) return out;
    out[0] = f[0] * Real(0);
    for (std::size_t k = 1; k < f.size(); ++k) out[k] = out[k - 1] + (f[k - 1] + f[k]) * (h / 2);
    return out;
}

namespace detail {

template <typename Real>
void fix_leading_phase(CVec<Real>& v)
{
    Eigen::Index i;
    v.cwiseAbs().maxCoeff(&i);
    v *= std::conj(v(i)) / std::abs(v(i));
}

template <typename Real>
void frame_derivatives(SpectralFrame<Real>& f)
{
    const Real h = f.s[1] - f.s[0];
    auto d = grid_derivative(f.vecs, h);
    f.dvecs.resize(d.size());
    for (std::size_t k = 0; k < d.size(); ++k) f.dvecs[k] = d[k] / f.tau;
}

template <typename Real>
void smooth_phases(std::vector<CMat<Real>>& vecs)
{
    for (std::size_t k = 1; k < vecs.size(); ++k)
        for (Eigen::Index n = 0; n < vecs[k].cols(); ++n) {
            std::complex<Real> ov = vecs[k - 1].col(n).dot(vecs[k].col(n));
            if (std::abs(ov) > 0) vecs[k].col(n) *= std::conj(ov) / std::abs(ov);
        }
}

// Removes the residual connection <E|d_s E> left by the smooth gauge.
template <typename Real>
void parallel_transport(SpectralFrame<Real>& f)
{
    frame_derivatives(f);
    const int m = f.points(), nl = f.levels();
    const Real h = f.s[1] - f.s[0];
    for (int n = 0; n < nl; ++n) {
        std::vector<Real> a(m);
        for (int k = 0; k < m; ++k) a[k] = std::imag(f.vecs[k].col(n).dot(f.dvecs[k].col(n))) * f.tau;
        auto chi = cumulative_trapezoid(a, h);
        for (int k = 0; k < m; ++k) f.vecs[k].col(n) *= std::polar(Real(1), -chi[k]);
    }
    frame_derivatives(f);
}

inline std::string fmt_time(double t)
{
    std::ostringstream os;
    os.precision(6);
    os << t;
    return os.str();
}

}  // namespace detail

template <typename Real>
struct TrackOptions {
    Gauge gauge = Gauge::smooth;
    Real gap_tol_rel = Real(1e-8);
    bool require_gap = true;
    bool derivatives = true;
};

// Ascending-energy eigensystem followed by continuity in s and gauge fixing.
template <typename Real>
SpectralFrame<Real> tracked_eigensystem(const Schedule<Real>& h, int n_points, TrackOptions<Real> opt = {})
{
    SpectralFrame<Real> f;
    f.s = uniform_grid<Real>(n_points);
    f.tau = h.tau;
    f.gauge = opt.gauge;
    const int d = h.dim();
    f.energies.resize(n_points, d);
    f.vecs.resize(n_points);
    for (int k = 0; k < n_points; ++k) {
        CMat<Real> hk = h.h(f.s[k]);
        Eigen::SelfAdjointEigenSolver<CMat<Real>> es((hk + hk.adjoint()) / Real(2));
        f.energies.row(k) = es.eigenvalues().transpose();
        f.vecs[k] = es.eigenvectors();
        if (opt.require_gap && d > 1) {
            Real scale = std::max<Real>(es.eigenvalues().cwiseAbs().maxCoeff(), std::numeric_limits<Real>::min());
            for (int n = 0; n + 1 < d; ++n)
                if (es.eigenvalues()(n + 1) - es.eigenvalues()(n) < opt.gap_tol_rel * scale)
                    throw std::runtime_error("level crossing detected at t = " +
                                             detail::fmt_time(double(f.s[k] * h.tau)) + " s (levels " +
                                             std::to_string(n) + "," + std::to_string(n + 1) + ")");
        }
    }
    for (int n = 0; n < d; ++n) {
        CVec<Real> v = f.vecs[0].col(n);
        detail::fix_leading_phase(v);
        f.vecs[0].col(n) = v;
    }
    detail::smooth_phases(f.vecs);
    if (opt.require_gap)
        for (int k = 0; k + 1 < n_points; ++k)
            for (int n = 0; n < d; ++n)
                if (std::abs(f.vecs[k].col(n).dot(f.vecs[k + 1].col(n))) < Real(0.999))
                    throw std::runtime_error("eigenvector tracking lost continuity near t = " +
                                             detail::fmt_time(double(f.s[k] * h.tau)) + " s; increase n_points");
    if (opt.derivatives) {
        if (opt.gauge == Gauge::parallel_transport) detail::parallel_transport(f);
        else detail::frame_derivatives(f);
    }
    return f;
}

// Frame from analytic eigenpairs; derivatives analytic when supplied, else grid differences.
template <typename Real>
SpectralFrame<Real> analytic_frame(int n_points, Real tau,
                                   const std::function<std::pair<RVec<Real>, CMat<Real>>(Real)>& eig,
                                   const std::function<CMat<Real>(Real)>& deig_dt = {},
                                   Gauge gauge = Gauge::smooth)
{
    SpectralFrame<Real> f;
    f.s = uniform_grid<Real>(n_points);
    f.tau = tau;
    f.gauge = gauge;
    for (int k = 0; k < n_points; ++k) {
        auto [e, v] = eig(f.s[k]);
        if (k == 0) f.energies.resize(n_points, e.size());
        f.energies.row(k) = e.transpose();
        f.vecs.push_back(v);
    }
    if (deig_dt) {
        for (int k = 0; k < n_points; ++k) f.dvecs.push_back(deig_dt(f.s[k]));
    } else {
        detail::frame_derivatives(f);
    }
    return f;
}

template <typename Real>
Real min_gap(const SpectralFrame<Real>& f)
{
    Real g = std::numeric_limits<Real>::infinity();
    for (int k = 0; k < f.points(); ++k)
        for (int n = 0; n + 1 < f.levels(); ++n) g = std::min(g, f.energies(k, n + 1) - f.energies(k, n));
    return g;
}

// |<E^b_m(s_k)| O(s_k) |E^a_n(s_k)>| for each grid point.
template <typename Real>
std::vector<RMat<Real>> eigvec_overlap_matrix(const SpectralFrame<Real>& a, const SpectralFrame<Real>& b,
                                              const std::function<CMat<Real>(Real)>& o = {})
{
    if (a.points() != b.points()) throw std::invalid_argument("eigvec_overlap_matrix: grid mismatch");
    std::vector<RMat<Real>> out(a.points());
    for (int k = 0; k < a.points(); ++k) {
        if (std::abs(a.s[k] - b.s[k]) > Real(1e-12) || std::abs(a.tau - b.tau) > Real(1e-12) * a.tau)
            throw std::invalid_argument("eigvec_overlap_matrix: grid mismatch");
        CMat<Real> oa = o ? CMat<Real>(o(a.s[k]) * a.vecs[k]) : a.vecs[k];
        out[k] = (b.vecs[k].adjoint() * oa).cwiseAbs();
    }
    return out;
}

template <typename Real>
struct LiouvilleSpectrum {
    CVec<Real> eigenvalues;
    CMat<Real> right;  // columns
    CMat<Real> left;   // rows, left * right = 1
    std::vector<int> block_sizes;
    bool diagonalizable = true;
    bool near_defective = false;
    Real condition = 1;
};

namespace detail {

template <typename Real>
Real spectral_norm(const CMat<Real>& a)
{
    if (a.size() == 0) return 0;
    Eigen::JacobiSVD<CMat<Real>> svd(a);
    return svd.singularValues()(0);
}

template <typename Real>
int numeric_rank(const CMat<Real>& a, Real thr)
{
    Eigen::JacobiSVD<CMat<Real>> svd(a);
    int r = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > thr) ++r;
    return r;
}

template <typename Real>
CMat<Real> null_space(const CMat<Real>& a, Real thr)
{
    Eigen::JacobiSVD<CMat<Real>> svd(a, Eigen::ComputeFullV);
    int r = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > thr) ++r;
    return svd.matrixV().rightCols(a.cols() - r);
}

}  // namespace detail

namespace detail {

template <typename Real>
struct Clusters {
    std::vector<std::complex<Real>> centers;
    std::vector<int> mult;
};

template <typename Real>
Clusters<Real> cluster_eigenvalues(const CVec<Real>& ev, Real tol)
{
    const int n = int(ev.size());
    Clusters<Real> c;
    std::vector<int> id(n, -1);
    for (int i = 0; i < n; ++i) {
        if (id[i] >= 0) continue;
        id[i] = int(c.centers.size());
        std::complex<Real> sum = ev(i);
        int cnt = 1;
        for (int j = i + 1; j < n; ++j)
            if (id[j] < 0 && std::abs(ev(j) - ev(i)) <= tol) {
                id[j] = id[i];
                sum += ev(j);
                ++cnt;
            }
        c.centers.push_back(sum / Real(cnt));
        c.mult.push_back(cnt);
    }
    return c;
}

// Jordan block sizes of one cluster from the rank sequence of (L - lambda)^k.
template <typename Real>
std::vector<int> block_sizes_from_ranks(const CMat<Real>& l, std::complex<Real> lam, int mult, Real thr, Real lnorm)
{
    const int n = int(l.rows());
    CMat<Real> a = l - lam * CMat<Real>::Identity(n, n);
    std::vector<int> rk{n};
    CMat<Real> p = CMat<Real>::Identity(n, n);
    for (int k = 1; k <= mult; ++k) {
        p = p * a;
        rk.push_back(numeric_rank<Real>(p, thr * std::pow(std::max<Real>(lnorm, 1), Real(k - 1))));
        if (rk[k] == rk[k - 1]) break;
    }
    std::vector<int> at_least;
    for (std::size_t k = 1; k < rk.size(); ++k) at_least.push_back(rk[k - 1] - rk[k]);
    at_least.push_back(0);
    std::vector<int> sizes;
    for (std::size_t k = 0; k + 1 < at_least.size(); ++k)
        for (int b = 0; b < at_least[k] - at_least[k + 1]; ++b) sizes.push_back(int(k + 1));
    std::sort(sizes.rbegin(), sizes.rend());
    return sizes;
}

template <typename Real>
Real condition_number(const CMat<Real>& v)
{
    Eigen::JacobiSVD<CMat<Real>> svd(v);
    const auto& sv = svd.singularValues();
    return sv(0) / sv(sv.size() - 1);
}

}  // namespace detail

template <typename Real>
LiouvilleSpectrum<Real> liouville_spectrum(const CMat<Real>& l, Real tol_cluster_rel = Real(1e-7),
                                           Real rank_rel = Real(1e-8))
{
    const int n = int(l.rows());
    LiouvilleSpectrum<Real> out;
    const Real lnorm = detail::spectral_norm(l);
    Eigen::ComplexEigenSolver<CMat<Real>> es(l);
    const CVec<Real> ev = es.eigenvalues();
    CMat<Real> v = es.eigenvectors();
    for (int i = 0; i < n; ++i) v.col(i).normalize();
    out.condition = detail::condition_number<Real>(v);
    out.near_defective = !(out.condition <= Real(1e10));

    auto diagonal_result = [&]() {
        out.eigenvalues = ev;
        out.right = v;
        out.left = v.inverse();
        out.block_sizes.assign(n, 1);
        out.diagonalizable = true;
        return out;
    };
    if (!out.near_defective) return diagonal_result();

    // Ill-conditioned eigenvectors: look for Jordan structure, widening the cluster
    // tolerance because defective eigenvalues split like eps^(1/k).
    const Real thr = rank_rel * std::max(lnorm, std::numeric_limits<Real>::min());
    const CMat<Real> id = CMat<Real>::Identity(n, n);
    for (Real tol = tol_cluster_rel; tol <= Real(1e-3); tol *= 10) {
        auto cl = detail::cluster_eigenvalues<Real>(ev, tol * lnorm);
        std::vector<std::vector<int>> sizes_per(cl.centers.size());
        bool consistent = true, defective = false;
        for (std::size_t c = 0; c < cl.centers.size(); ++c) {
            sizes_per[c] = cl.mult[c] == 1 ? std::vector<int>{1}
                                           : detail::block_sizes_from_ranks<Real>(l, cl.centers[c], cl.mult[c], thr, lnorm);
            int total = std::accumulate(sizes_per[c].begin(), sizes_per[c].end(), 0);
            if (total != cl.mult[c]) consistent = false;
            if (int(sizes_per[c].size()) < cl.mult[c]) defective = true;
        }
        if (!consistent || !defective) continue;

        // Jordan chains ordered by depth: eigenvector first, then generalized vectors.
        std::vector<CVec<Real>> cols;
        std::vector<std::complex<Real>> vals;
        std::vector<int> blocks;
        for (std::size_t c = 0; c < cl.centers.size(); ++c) {
            CMat<Real> a = l - cl.centers[c] * id;
            const int top = sizes_per[c].front();
            std::vector<CMat<Real>> apow{id};
            for (int k = 1; k <= top; ++k) apow.push_back(apow.back() * a);
            auto kthr = [&](int k) { return thr * std::pow(std::max<Real>(lnorm, 1), Real(std::max(k - 1, 0))); };
            std::vector<CVec<Real>> heads;
            std::vector<int> head_size;
            for (int k = top; k >= 1; --k) {
                int want = int(std::count(sizes_per[c].begin(), sizes_per[c].end(), k));
                if (want == 0) continue;
                CMat<Real> nk = detail::null_space<Real>(apow[k], kthr(k));
                std::vector<CVec<Real>> span;
                if (k > 1) {
                    CMat<Real> nkm = detail::null_space<Real>(apow[k - 1], kthr(k - 1));
                    for (Eigen::Index j = 0; j < nkm.cols(); ++j) span.push_back(nkm.col(j));
                }
                for (std::size_t h = 0; h < heads.size(); ++h) span.push_back(apow[head_size[h] - k] * heads[h]);
                CMat<Real> proj = nk;
                if (!span.empty()) {
                    CMat<Real> w(n, span.size());
                    for (std::size_t j = 0; j < span.size(); ++j) w.col(j) = span[j].normalized();
                    Eigen::JacobiSVD<CMat<Real>> sw(w, Eigen::ComputeThinU);
                    int r = 0;
                    for (Eigen::Index i = 0; i < sw.singularValues().size(); ++i)
                        if (sw.singularValues()(i) > Real(1e-8)) ++r;
                    CMat<Real> q = sw.matrixU().leftCols(r);
                    proj = nk - q * (q.adjoint() * nk);
                }
                Eigen::JacobiSVD<CMat<Real>> svd(proj, Eigen::ComputeThinU);
                for (int b = 0; b < want && b < svd.matrixU().cols(); ++b) {
                    CVec<Real> head = svd.matrixU().col(b);
                    heads.push_back(head);
                    head_size.push_back(k);
                    for (int j = k - 1; j >= 0; --j) {
                        cols.push_back(apow[j] * head);
                        vals.push_back(cl.centers[c]);
                    }
                    blocks.push_back(k);
                }
            }
        }
        if (int(cols.size()) != n) continue;
        CMat<Real> right(n, n);
        CVec<Real> lam(n);
        for (int i = 0; i < n; ++i) {
            right.col(i) = cols[i];
            lam(i) = vals[i];
        }
        Real cond = detail::condition_number<Real>(right);
        if (!(cond <= Real(1e10))) continue;
        out.diagonalizable = false;
        out.near_defective = false;
        out.condition = cond;
        out.eigenvalues = lam;
        out.right = right;
        out.left = right.inverse();
        out.block_sizes = blocks;
        return out;
    }
    return diagonal_result();
}

// Liouvillian spectrum followed along s: labels by continuity, unit right vectors,
// phase chosen so successive right vectors overlap positively, left rows by inversion.
template <typename Real>
struct TrackedLiouville {
    std::vector<Real> s;
    Real tau = 1;
    std::vector<CVec<Real>> eigenvalues;
    std::vector<CMat<Real>> right;
    std::vector<CMat<Real>> left;
    std::vector<CMat<Real>> d_right;  // d/ds of right vectors

    int points() const { return int(s.size()); }
    int size() const { return int(eigenvalues.front().size()); }
};

template <typename Real>
TrackedLiouville<Real> tracked_liouville(const std::function<CMat<Real>(Real)>& lmat, int n_points, Real tau,
                                         const std::vector<std::complex<Real>>& order_hint = {},
                                         Real tol_cluster_rel = Real(1e-7))
{
    TrackedLiouville<Real> t;
    t.s = uniform_grid<Real>(n_points);
    t.tau = tau;
    for (int k = 0; k < n_points; ++k) {
        CMat<Real> l = lmat(t.s[k]);
        auto sp = liouville_spectrum<Real>(l, tol_cluster_rel);
        const int n = int(l.rows());
        if (!sp.diagonalizable) throw std::runtime_error("tracked_liouville: defective spectrum at s = " + detail::fmt_time(double(t.s[k])));
        const Real lnorm = detail::spectral_norm(l);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (std::abs(sp.eigenvalues(i) - sp.eigenvalues(j)) <= tol_cluster_rel * lnorm)
                    throw std::runtime_error("tracked_liouville: eigenvalue crossing at s = " + detail::fmt_time(double(t.s[k])));
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        if (k == 0) {
            if (!order_hint.empty()) {
                std::vector<bool> used(n, false);
                for (int a = 0; a < n && a < int(order_hint.size()); ++a) {
                    int best = -1;
                    for (int b = 0; b < n; ++b)
                        if (!used[b] && (best < 0 || std::abs(sp.eigenvalues(b) - order_hint[a]) <
                                                       std::abs(sp.eigenvalues(best) - order_hint[a])))
                            best = b;
                    perm[a] = best;
                    used[best] = true;
                }
            } else {
                std::stable_sort(perm.begin(), perm.end(), [&](int a, int b) {
                    auto x = sp.eigenvalues(a), y = sp.eigenvalues(b);
                    if (std::abs(x.real() - y.real()) > tol_cluster_rel * lnorm) return x.real() > y.real();
                    return x.imag() > y.imag();
                });
            }
        } else {
            const CMat<Real>& prev = t.right.back();
            std::vector<bool> used(n, false);
            for (int a = 0; a < n; ++a) {
                int best = -1;
                Real bs = -1;
                for (int b = 0; b < n; ++b) {
                    if (used[b]) continue;
                    Real sc = std::abs(prev.col(a).dot(sp.right.col(b)));
                    if (sc > bs) { bs = sc; best = b; }
                }
                perm[a] = best;
                used[best] = true;
            }
        }
        CVec<Real> ev(n);
        CMat<Real> r(n, n);
        for (int a = 0; a < n; ++a) {
            ev(a) = sp.eigenvalues(perm[a]);
            CVec<Real> v = sp.right.col(perm[a]);
            if (k == 0) detail::fix_leading_phase(v);
            else {
                std::complex<Real> ov = t.right.back().col(a).dot(v);
                if (std::abs(ov) > 0) v *= std::conj(ov) / std::abs(ov);
            }
            r.col(a) = v;
        }
        t.eigenvalues.push_back(ev);
        t.right.push_back(r);
        t.left.push_back(r.inverse());
    }
    t.d_right = grid_derivative(t.right, t.s[1] - t.s[0]);
    return t;
}

}  // namespace adlab
