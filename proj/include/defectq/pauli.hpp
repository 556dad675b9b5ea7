#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace defectq {

enum class GateKind { InitZ, H, Cnot, Swap, MeasureZ, Identity };

struct CliffordGate {
    GateKind kind;
    int q0 = -1;
    int q1 = -1; // second qubit for Cnot (target) and Swap

    static CliffordGate init_z(int q) { return {GateKind::InitZ, q, -1}; }
    static CliffordGate h(int q) { return {GateKind::H, q, -1}; }
    static CliffordGate cnot(int control, int target) { return {GateKind::Cnot, control, target}; }
    static CliffordGate swap(int a, int b) { return {GateKind::Swap, a, b}; }
    static CliffordGate measure_z(int q) { return {GateKind::MeasureZ, q, -1}; }
    static CliffordGate identity(int q) { return {GateKind::Identity, q, -1}; }

    bool two_qubit() const { return kind == GateKind::Cnot || kind == GateKind::Swap; }
    bool valid() const {
        if (two_qubit()) return q0 >= 0 && q1 >= 0 && q0 != q1;
        return q0 >= 0 && q1 == -1;
    }
};

// n-qubit Pauli operator i^phase_pow * prod_q W_q in symplectic form.
// Bit q of x/z selects W_q: (0,0)=I, (1,0)=X, (0,1)=Z, (1,1)=Y (the
// Hermitian Y, not XZ). phase_pow is the exponent of i, mod 4.
class PauliString {
public:
    PauliString() : n_(0), phase_pow_(0) {}
    explicit PauliString(int n) : n_(n), phase_pow_(0), x_(words(n), 0), z_(words(n), 0) {}

    // e.g. "+XIZ", "-Y", "iXZ", "-iZZ"; 'I' or '_' for identity
    static PauliString from_str(const std::string& s);
    std::string str() const;

    static PauliString single(int n, int q, char pauli);

    int n() const { return n_; }
    int phase_pow() const { return phase_pow_; }
    void set_phase_pow(int p) { phase_pow_ = ((p % 4) + 4) % 4; }
    bool hermitian() const { return phase_pow_ == 0 || phase_pow_ == 2; }
    // sign of a Hermitian Pauli: +1 or -1
    int sign() const {
        if (!hermitian()) throw std::logic_error("sign of non-Hermitian Pauli");
        return phase_pow_ == 0 ? +1 : -1;
    }

    bool x_bit(int q) const { return (x_[q >> 6] >> (q & 63)) & 1; }
    bool z_bit(int q) const { return (z_[q >> 6] >> (q & 63)) & 1; }
    void set_x(int q, bool v) { set_bit(x_, q, v); }
    void set_z(int q, bool v) { set_bit(z_, q, v); }
    bool identity_bits() const; // ignores phase
    bool is_identity() const { return phase_pow_ == 0 && identity_bits(); }
    int weight() const;

    PauliString& operator*=(const PauliString& rhs);
    friend PauliString operator*(PauliString a, const PauliString& b) { return a *= b; }
    bool operator==(const PauliString& o) const {
        return n_ == o.n_ && phase_pow_ == o.phase_pow_ && x_ == o.x_ && z_ == o.z_;
    }
    bool same_bits(const PauliString& o) const { return n_ == o.n_ && x_ == o.x_ && z_ == o.z_; }

    bool commutes_with(const PauliString& other) const;

    // Heisenberg propagation: returns g P g^dagger for H, CNOT, SWAP, IDENTITY.
    void conjugate_inplace(const CliffordGate& g);
    PauliString conjugated(const CliffordGate& g) const {
        PauliString p = *this;
        p.conjugate_inplace(g);
        return p;
    }

    const std::vector<uint64_t>& x_words() const { return x_; }
    const std::vector<uint64_t>& z_words() const { return z_; }

private:
    static int words(int n) { return (n + 63) / 64; }
    static void set_bit(std::vector<uint64_t>& w, int q, bool v) {
        if (v)
            w[q >> 6] |= uint64_t(1) << (q & 63);
        else
            w[q >> 6] &= ~(uint64_t(1) << (q & 63));
    }
    void check_same_n(const PauliString& o) const {
        if (n_ != o.n_) throw std::invalid_argument("PauliString length mismatch");
    }

    int n_;
    int phase_pow_;
    std::vector<uint64_t> x_, z_;
};

// Per-qubit pending X/Z corrections applied in software. Composition is
// bitwise XOR; applying a frame twice is the identity.
class PauliFrame {
public:
    PauliFrame() = default;
    explicit PauliFrame(int n) : n_(n), x_((n + 63) / 64, 0), z_((n + 63) / 64, 0) {}

    int n() const { return n_; }
    bool x_bit(int q) const { return (x_[q >> 6] >> (q & 63)) & 1; }
    bool z_bit(int q) const { return (z_[q >> 6] >> (q & 63)) & 1; }
    void flip_x(int q) { x_[q >> 6] ^= uint64_t(1) << (q & 63); }
    void flip_z(int q) { z_[q >> 6] ^= uint64_t(1) << (q & 63); }

    PauliFrame& operator^=(const PauliFrame& o) {
        for (size_t i = 0; i < x_.size(); i++) {
            x_[i] ^= o.x_[i];
            z_[i] ^= o.z_[i];
        }
        return *this;
    }
    bool empty() const;
    PauliString as_pauli() const;

private:
    int n_ = 0;
    std::vector<uint64_t> x_, z_;
};

} // namespace defectq
