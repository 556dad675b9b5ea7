#include <complex>
#include <vector>

#include "defectq/pauli.hpp"
#include "defectq/rng.hpp"
#include "doctest.h"

using namespace defectq;

namespace {

using cmat = std::vector<std::vector<std::complex<double>>>;

cmat pauli_mat(char p) {
    const std::complex<double> i(0, 1);
    switch (p) {
        case 'I': return {{1, 0}, {0, 1}};
        case 'X': return {{0, 1}, {1, 0}};
        case 'Y': return {{0, -i}, {i, 0}};
        default: return {{1, 0}, {0, -1}};
    }
}

cmat kron(const cmat& a, const cmat& b) {
    size_t na = a.size(), nb = b.size();
    cmat out(na * nb, std::vector<std::complex<double>>(na * nb));
    for (size_t i = 0; i < na; i++)
        for (size_t j = 0; j < na; j++)
            for (size_t k = 0; k < nb; k++)
                for (size_t l = 0; l < nb; l++) out[i * nb + k][j * nb + l] = a[i][j] * b[k][l];
    return out;
}

cmat matmul(const cmat& a, const cmat& b) {
    size_t n = a.size();
    cmat out(n, std::vector<std::complex<double>>(n, 0));
    for (size_t i = 0; i < n; i++)
        for (size_t k = 0; k < n; k++)
            for (size_t j = 0; j < n; j++) out[i][j] += a[i][k] * b[k][j];
    return out;
}

// Dense-matrix value of a PauliString, phases included.
cmat to_matrix(const PauliString& p) {
    cmat m = {{1}};
    for (int q = 0; q < p.n(); q++) {
        bool x = p.x_bit(q), z = p.z_bit(q);
        char c = x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I');
        m = kron(m, pauli_mat(c));
    }
    std::complex<double> ph(1, 0);
    for (int k = 0; k < p.phase_pow(); k++) ph *= std::complex<double>(0, 1);
    for (auto& row : m)
        for (auto& v : row) v *= ph;
    return m;
}

bool mat_eq(const cmat& a, const cmat& b) {
    for (size_t i = 0; i < a.size(); i++)
        for (size_t j = 0; j < a.size(); j++)
            if (std::abs(a[i][j] - b[i][j]) > 1e-12) return false;
    return true;
}

PauliString random_pauli(int n, Rng& rng, bool random_phase = false) {
    PauliString p(n);
    for (int q = 0; q < n; q++) {
        p.set_x(q, rng.bernoulli(0.5));
        p.set_z(q, rng.bernoulli(0.5));
    }
    if (random_phase) p.set_phase_pow(int(rng.next_below(4)));
    return p;
}

} // namespace

TEST_CASE("single-qubit products") {
    auto X = PauliString::from_str("X");
    auto Z = PauliString::from_str("Z");
    CHECK((X * X).str() == "+I");
    CHECK((X * Z).str() == "-iY");
    CHECK((Z * X).str() == "iY");
    CHECK((X * PauliString::from_str("Y")).str() == "iZ");
}

TEST_CASE("two-qubit product against matrix oracle") {
    auto a = PauliString::from_str("XZ");
    auto b = PauliString::from_str("ZZ");
    auto prod = a * b;
    CHECK(prod.same_bits(PauliString::from_str("YI"))); // X*Z on q0, Z*Z=I on q1
    CHECK(mat_eq(to_matrix(prod), matmul(to_matrix(a), to_matrix(b))));
}

TEST_CASE("multiply matches dense matrix oracle with phases, n<=4") {
    Rng rng(11);
    for (int trial = 0; trial < 300; trial++) {
        int n = 1 + int(rng.next_below(4));
        auto a = random_pauli(n, rng, true);
        auto b = random_pauli(n, rng, true);
        CHECK(mat_eq(to_matrix(a * b), matmul(to_matrix(a), to_matrix(b))));
    }
}

TEST_CASE("multiply associative, identity neutral") {
    Rng rng(12);
    for (int trial = 0; trial < 200; trial++) {
        int n = 1 + int(rng.next_below(8));
        auto a = random_pauli(n, rng, true);
        auto b = random_pauli(n, rng, true);
        auto c = random_pauli(n, rng, true);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * PauliString(n) == a);
        CHECK(PauliString(n) * a == a);
    }
}

TEST_CASE("commutes basics") {
    CHECK_FALSE(PauliString::from_str("X").commutes_with(PauliString::from_str("Z")));
    // X1X2 vs Z2Z3: one shared anticommuting qubit
    CHECK_FALSE(PauliString::from_str("XXI").commutes_with(PauliString::from_str("IZZ")));
    // triangular stabilizers on 8 qubits: Z1Z2Z3 vs X2X4X7 share only qubit 2
    auto z123 = PauliString::from_str("ZZZIIIII");
    auto x247 = PauliString::from_str("IXIXIIXI");
    CHECK_FALSE(z123.commutes_with(x247));
    // Z4Z5Z6 vs X2X4X7 share only qubit 4
    auto z456 = PauliString::from_str("IIIZZZII");
    CHECK_FALSE(z456.commutes_with(x247));
}

TEST_CASE("commutes equals anticommuting-position parity") {
    Rng rng(13);
    for (int trial = 0; trial < 10000; trial++) {
        int n = 1 + int(rng.next_below(8));
        auto a = random_pauli(n, rng);
        auto b = random_pauli(n, rng);
        int anti = 0;
        for (int q = 0; q < n; q++) {
            bool ax = a.x_bit(q), az = a.z_bit(q), bx = b.x_bit(q), bz = b.z_bit(q);
            bool a_id = !ax && !az, b_id = !bx && !bz;
            if (!a_id && !b_id && (ax != bx || az != bz)) anti ^= 1;
        }
        CHECK(a.commutes_with(b) == (anti == 0));
    }
}

TEST_CASE("conjugation textbook rules") {
    auto p = PauliString::from_str("XI");
    p.conjugate_inplace(CliffordGate::cnot(0, 1));
    CHECK(p.str() == "+XX");

    p = PauliString::from_str("Z");
    p.conjugate_inplace(CliffordGate::h(0));
    CHECK(p.str() == "+X");

    p = PauliString::from_str("XZ");
    p.conjugate_inplace(CliffordGate::swap(0, 1));
    CHECK(p.str() == "+ZX");

    p = PauliString::from_str("IZ");
    p.conjugate_inplace(CliffordGate::cnot(0, 1));
    CHECK(p.str() == "+ZZ");
}

TEST_CASE("conjugation matches matrix oracle on 2 qubits") {
    Rng rng(14);
    const std::complex<double> one(1, 0);
    cmat cnot = {{one, 0, 0, 0}, {0, one, 0, 0}, {0, 0, 0, one}, {0, 0, one, 0}};
    for (int trial = 0; trial < 100; trial++) {
        auto p = random_pauli(2, rng, true);
        auto conj = p.conjugated(CliffordGate::cnot(0, 1));
        // g P g^dagger with g = CNOT (self-inverse)
        auto expect = matmul(matmul(cnot, to_matrix(p)), cnot);
        CHECK(mat_eq(to_matrix(conj), expect));
    }
}

TEST_CASE("conjugation preserves commutation") {
    Rng rng(15);
    std::vector<CliffordGate> gates = {CliffordGate::h(2), CliffordGate::cnot(0, 3),
                                       CliffordGate::swap(1, 4), CliffordGate::cnot(4, 2)};
    for (int trial = 0; trial < 500; trial++) {
        auto a = random_pauli(5, rng);
        auto b = random_pauli(5, rng);
        const auto& g = gates[rng.next_below(gates.size())];
        CHECK(a.commutes_with(b) == a.conjugated(g).commutes_with(b.conjugated(g)));
    }
}

TEST_CASE("pauli frame composition is xor, involution") {
    Rng rng(16);
    PauliFrame f(70), g(70);
    for (int q = 0; q < 70; q++) {
        if (rng.bernoulli(0.3)) f.flip_x(q);
        if (rng.bernoulli(0.3)) f.flip_z(q);
        if (rng.bernoulli(0.3)) g.flip_x(q);
        if (rng.bernoulli(0.3)) g.flip_z(q);
    }
    PauliFrame ff = f;
    ff ^= f;
    CHECK(ff.empty());
    PauliFrame fg = f;
    fg ^= g;
    for (int q = 0; q < 70; q++) {
        CHECK(fg.x_bit(q) == (f.x_bit(q) ^ g.x_bit(q)));
        CHECK(fg.z_bit(q) == (f.z_bit(q) ^ g.z_bit(q)));
    }
}

TEST_CASE("length mismatch raises") {
    CHECK_THROWS(PauliString::from_str("XX") * PauliString::from_str("X"));
    CHECK_THROWS((void)PauliString::from_str("XX").commutes_with(PauliString::from_str("X")));
}
