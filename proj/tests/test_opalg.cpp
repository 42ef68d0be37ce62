#include "doctest.h"
#include "test_util.hpp"

#include "adlab/dynamics.hpp"

using namespace adlab;
using namespace testutil;

TEST_CASE("single-qubit Pauli basis is trace orthogonal")
{
    auto b = pauli_basis(1);
    REQUIRE(b->size() == 4);
    CHECK(b->norm == 2.0);
    for (int a = 0; a < 4; ++a) {
        if (a > 0) CHECK(std::abs(b->elements[a].trace()) < 1e-15);
        for (int c = 0; c < 4; ++c) {
            cplx t = (b->elements[a] * b->elements[c]).trace();
            CHECK(std::abs(t - cplx(a == c ? 2.0 : 0.0)) < 1e-15);
        }
    }
    CHECK(max_abs(b->elements[0] - Operator::Identity(2, 2)) == 0.0);
}

TEST_CASE("two-qubit Pauli strings are pairwise orthogonal with norm 4")
{
    auto b = pauli_basis(2);
    REQUIRE(b->size() == 16);
    for (int a = 0; a < 16; ++a)
        for (int c = 0; c < 16; ++c) {
            cplx t = (b->elements[a] * b->elements[c].adjoint()).trace();
            CHECK(std::abs(t - cplx(a == c ? 4.0 : 0.0)) < 1e-12);
        }
    // index 1*4+3 is X (x) Z
    CHECK(max_abs(b->elements[7] - kron<double>(pauli<double>('X'), pauli<double>('Z'))) == 0.0);
}

TEST_CASE("basis size guard")
{
    CHECK_THROWS_AS(pauli_basis(5), std::invalid_argument);
    CHECK_THROWS_AS(pauli_basis(0), std::invalid_argument);
    CHECK(pauli_basis(5, 5)->size() == 1024);
}

TEST_CASE("coherence vectors of simple states")
{
    auto b = pauli_basis(1);
    Operator mixed = Operator::Identity(2, 2) / 2.0;
    auto v = to_coherence_vector(mixed, b);
    CHECK(max_abs(v.comps - ket({1, 0, 0, 0})) < 1e-15);

    Ket plus = ket({1, 1}) / std::sqrt(2.0);
    auto w = to_coherence_vector<double>(projector<double>(plus), b);
    CHECK(max_abs(w.comps - ket({1, 1, 0, 0})) < 1e-15);

    CHECK(max_abs(from_coherence_vector(CoherenceVector<double>{ket({1, 0, 0, 0}), b}) - mixed) < 1e-15);
    CHECK(max_abs(from_coherence_vector(CoherenceVector<double>{ket({1, 1, 0, 0}), b}) -
                  projector<double>(plus)) < 1e-15);

    // dephased thermal state 1/2 (1 - g sigma_x)
    const double g = 0.37;
    Operator direct(2, 2);
    direct << 0.5, -0.5 * g, -0.5 * g, 0.5;
    CHECK(max_abs(from_coherence_vector(CoherenceVector<double>{ket({1, -g, 0, 0}), b}) - direct) < 1e-15);
}

TEST_CASE("coherence vector round trip on random states")
{
    std::mt19937 rng(7);
    for (int n = 1; n <= 2; ++n) {
        auto b = pauli_basis(n);
        for (int rep = 0; rep < 20; ++rep) {
            Operator rho = random_density(b->dim, rng);
            auto v = to_coherence_vector(rho, b);
            CHECK(std::abs(v.comps(0) - cplx(1)) < 1e-12);
            CHECK(v.comps.imag().cwiseAbs().maxCoeff() < 1e-12);
            CHECK(max_abs(from_coherence_vector(v) - rho) < 1e-12);
        }
    }
    CHECK_THROWS_AS(to_coherence_vector<double>(Operator::Identity(4, 4), pauli_basis(1)), std::invalid_argument);
}

TEST_CASE("dephasing generator matrix")
{
    const double w = 1.3, g = 0.2;
    auto b = pauli_basis(1);
    Operator h = w * pauli<double>('X');
    std::vector<Channel<double>> ch{{g, pauli<double>('Z')}};
    auto s = superoperator_matrix<double>([&](const Operator& x) { return lindblad_rhs<double>(h, ch, x); }, b);
    Operator expect(4, 4);
    expect << 0, 0, 0, 0,
              0, -2 * g, 0, 0,
              0, 0, -2 * g, -2 * w,
              0, 0, 2 * w, 0;
    CHECK(max_abs(s.matrix - expect) < 1e-14);
    CHECK(s.trace_preserving);

    auto z = superoperator_matrix<double>([](const Operator& x) { return Operator(Operator::Zero(x.rows(), x.cols())); }, b);
    CHECK(max_abs(z.matrix) == 0.0);
}

TEST_CASE("non-linear generators are rejected")
{
    auto b = pauli_basis(1);
    CHECK_THROWS_AS(superoperator_matrix<double>([](const Operator& x) { return Operator(x * x); }, b),
                    std::invalid_argument);
    CHECK_THROWS_AS(superoperator_matrix<double>([](const Operator& x) { return Operator(x.cwiseAbs().cast<cplx>()); }, b),
                    std::invalid_argument);
}

TEST_CASE("superoperator action matches vectorized generator")
{
    std::mt19937 rng(11);
    for (int rep = 0; rep < 20; ++rep) {
        const int n = 1 + rep % 2;
        auto b = pauli_basis(n);
        const int d = b->dim;
        Operator h = random_hermitian(d, rng);
        std::vector<Channel<double>> ch{{0.3, random_complex(d, rng)}, {0.7, random_complex(d, rng)}};
        auto gen = [&](const Operator& x) { return lindblad_rhs<double>(h, ch, x); };
        auto s = superoperator_matrix<double>(gen, b);
        CHECK(max_abs(s.matrix.row(0)) < 1e-12);
        Operator rho = random_density(d, rng);
        auto v = to_coherence_vector(rho, b);
        auto lhs = apply(s, v).comps;
        auto rhs = to_coherence_vector<double>(gen(rho), b).comps;
        CHECK(max_abs(lhs - rhs) < 1e-10);
    }
}

TEST_CASE("Hilbert-Schmidt inner product")
{
    auto b = pauli_basis(1);
    Ket psi = ket({cplx(0.6, 0), cplx(0, 0.8)});
    auto v = to_coherence_vector<double>(projector<double>(psi), b);
    CHECK(std::abs(hs_inner(v, v) - cplx(1)) < 1e-14);
    auto m = to_coherence_vector<double>(Operator::Identity(2, 2) / 2.0, b);
    CHECK(std::abs(hs_inner(m, m) - cplx(0.5)) < 1e-14);
    auto other = pauli_basis(2);
    CoherenceVector<double> big{Ket::Zero(16), other};
    CHECK_THROWS_AS(hs_inner(v, big), std::invalid_argument);
}

TEST_CASE("predicates")
{
    Operator rho = Operator::Identity(2, 2) / 2.0;
    CHECK(is_density_matrix(rho));
    rho(0, 0) = 0.7;
    CHECK_FALSE(is_density_matrix(rho));
    Operator neg(2, 2);
    neg << 1.1, 0, 0, -0.1;
    CHECK_FALSE(is_density_matrix(neg));
    CHECK(is_unitary<double>(pauli<double>('Y')));
    CHECK_FALSE(is_hermitian<double>(pauli<double>('Y') * cplx(0, 1)));
}
