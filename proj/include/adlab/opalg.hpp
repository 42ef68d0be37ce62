// Operator algebra: Pauli bases, coherence vectors, superoperator matrices.
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace adlab {

template <typename Real>
using CMat = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using CVec = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

using cplx = std::complex<double>;
using Operator = CMat<double>;
using Ket = CVec<double>;

struct Tolerances {
    double herm = 1e-10;
    double tr = 1e-10;
    double pos = 1e-9;
    double orth = 1e-12;
};

inline const Tolerances& default_tol()
{
    static const Tolerances t{};
    return t;
}

template <typename Real>
CMat<Real> pauli(char which)
{
    using C = std::complex<Real>;
    CMat<Real> m(2, 2);
    switch (which) {
    case 'I': m << C(1), C(0), C(0), C(1); break;
    case 'X': m << C(0), C(1), C(1), C(0); break;
    case 'Y': m << C(0), C(0, -1), C(0, 1), C(0); break;
    case 'Z': m << C(1), C(0), C(0), C(-1); break;
    default: throw std::invalid_argument(std::string("unknown Pauli label ") + which);
    }
    return m;
}

template <typename Real>
CMat<Real> kron(const CMat<Real>& a, const CMat<Real>& b)
{
    CMat<Real> out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// Kronecker product of a list, first factor most significant.
template <typename Real>
CMat<Real> kron_all(const std::vector<CMat<Real>>& factors)
{
    CMat<Real> out = CMat<Real>::Identity(1, 1);
    for (const auto& f : factors) out = kron<Real>(out, f);
    return out;
}

template <typename Real>
CMat<Real> commutator(const CMat<Real>& a, const CMat<Real>& b)
{
    return a * b - b * a;
}

template <typename Real>
CMat<Real> anticommutator(const CMat<Real>& a, const CMat<Real>& b)
{
    return a * b + b * a;
}

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m)
{
    return m.size() == 0 ? 0.0 : double(m.cwiseAbs().maxCoeff());
}

template <typename Real>
bool is_hermitian(const CMat<Real>& a, double tol = default_tol().herm)
{
    return a.rows() == a.cols() && max_abs(a - a.adjoint()) < tol;
}

template <typename Real>
bool is_unitary(const CMat<Real>& u, double tol = 1e-10)
{
    if (u.rows() != u.cols()) return false;
    return max_abs(u.adjoint() * u - CMat<Real>::Identity(u.rows(), u.cols())) < tol;
}

template <typename Real>
Real min_eigenvalue(const CMat<Real>& a)
{
    CMat<Real> h = (a + a.adjoint()) / Real(2);
    Eigen::SelfAdjointEigenSolver<CMat<Real>> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

template <typename Real>
bool is_density_matrix(const CMat<Real>& rho, const Tolerances& tol = default_tol())
{
    if (!is_hermitian(rho, tol.herm)) return false;
    if (std::abs(rho.trace() - std::complex<Real>(1)) >= tol.tr) return false;
    return min_eigenvalue(rho) >= -tol.pos;
}

template <typename Real>
struct OperatorBasis {
    int dim = 0;
    std::vector<CMat<Real>> elements;
    Real norm = 0;  // Tr(s_n s_m^dag) = norm * delta_nm

    std::size_t size() const { return elements.size(); }
};

template <typename Real>
using BasisPtr = std::shared_ptr<const OperatorBasis<Real>>;

// Tensor Pauli strings; index digits in base 4 with the first qubit most significant.
template <typename Real = double>
BasisPtr<Real> pauli_basis(int n_qubits, int max_qubits = 4)
{
    if (n_qubits < 1) throw std::invalid_argument("pauli_basis: n_qubits must be >= 1");
    if (n_qubits > max_qubits)
        throw std::invalid_argument("pauli_basis: n_qubits exceeds limit " + std::to_string(max_qubits));
    auto b = std::make_shared<OperatorBasis<Real>>();
    b->dim = 1 << n_qubits;
    b->norm = Real(b->dim);
    const char labels[4] = {'I', 'X', 'Y', 'Z'};
    const int count = 1 << (2 * n_qubits);
    b->elements.reserve(count);
    for (int idx = 0; idx < count; ++idx) {
        std::vector<CMat<Real>> f(n_qubits);
        int rest = idx;
        for (int q = n_qubits - 1; q >= 0; --q) {
            f[q] = pauli<Real>(labels[rest % 4]);
            rest /= 4;
        }
        b->elements.push_back(kron_all<Real>(f));
    }
    return b;
}

template <typename Real>
struct CoherenceVector {
    CVec<Real> comps;
    BasisPtr<Real> basis;
};

template <typename Real>
CoherenceVector<Real> to_coherence_vector(const CMat<Real>& rho, const BasisPtr<Real>& basis)
{
    if (rho.rows() != basis->dim || rho.cols() != basis->dim)
        throw std::invalid_argument("to_coherence_vector: dimension mismatch");
    CoherenceVector<Real> v{CVec<Real>(basis->size()), basis};
    for (std::size_t n = 0; n < basis->size(); ++n)
        v.comps(n) = (rho * basis->elements[n].adjoint()).trace();
    return v;
}

template <typename Real>
CMat<Real> from_coherence_vector(const CoherenceVector<Real>& v)
{
    const auto& b = *v.basis;
    if (std::size_t(v.comps.size()) != b.size())
        throw std::invalid_argument("from_coherence_vector: component count mismatch");
    CMat<Real> rho = CMat<Real>::Zero(b.dim, b.dim);
    for (std::size_t n = 0; n < b.size(); ++n) rho += v.comps(n) * b.elements[n];
    return rho / b.norm;
}

template <typename Real>
std::complex<Real> hs_inner(const CoherenceVector<Real>& a, const CoherenceVector<Real>& b)
{
    if (a.basis != b.basis && (a.basis->dim != b.basis->dim || a.basis->size() != b.basis->size()))
        throw std::invalid_argument("hs_inner: basis mismatch");
    return a.comps.dot(b.comps) / a.basis->norm;
}

template <typename Real>
struct Superoperator {
    CMat<Real> matrix;
    BasisPtr<Real> basis;
    bool trace_preserving = false;
};

template <typename Real>
using OperatorMap = std::function<CMat<Real>(const CMat<Real>&)>;

template <typename Real>
Superoperator<Real> superoperator_matrix(const OperatorMap<Real>& gen, const BasisPtr<Real>& basis,
                                         double tol = 1e-10)
{
    const auto& b = *basis;
    const std::size_t n = b.size();
    std::vector<CMat<Real>> images(n);
    Real scale = 0;
    for (std::size_t i = 0; i < n; ++i) {
        images[i] = gen(b.elements[i]);
        if (images[i].rows() != b.dim || images[i].cols() != b.dim)
            throw std::invalid_argument("superoperator_matrix: generator changes dimension");
        scale = std::max<Real>(scale, images[i].cwiseAbs().maxCoeff());
    }
    // superposition probe on consecutive element pairs with a complex weight
    const std::complex<Real> w(Real(0.7), Real(-1.3));
    for (std::size_t i = 0; i + 1 < n; i += std::max<std::size_t>(1, n / 8)) {
        CMat<Real> lhs = gen(b.elements[i] + w * b.elements[i + 1]);
        CMat<Real> rhs = images[i] + w * images[i + 1];
        if (max_abs(lhs - rhs) > tol * std::max<Real>(1, scale))
            throw std::invalid_argument("superoperator_matrix: generator is not linear");
    }
    Superoperator<Real> s{CMat<Real>(n, n), basis, false};
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            s.matrix(k, i) = (b.elements[k].adjoint() * images[i]).trace() / b.norm;
    s.trace_preserving = max_abs(s.matrix.row(0)) < tol * std::max<Real>(1, scale);
    return s;
}

template <typename Real>
CoherenceVector<Real> apply(const Superoperator<Real>& s, const CoherenceVector<Real>& v)
{
    return {s.matrix * v.comps, v.basis};
}

// Components of an observable in the same convention: h_n = Tr(A s_n^dag).
template <typename Real>
CVec<Real> observable_vector(const CMat<Real>& a, const BasisPtr<Real>& basis)
{
    return to_coherence_vector<Real>(a, basis).comps;
}

}  // namespace adlab
