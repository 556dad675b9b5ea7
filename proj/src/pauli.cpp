#include "defectq/pauli.hpp"

#include <bit>

namespace defectq {

PauliString PauliString::from_str(const std::string& s) {
    size_t i = 0;
    int phase = 0;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
        if (s[i] == '-') phase = 2;
        i++;
    }
    if (i < s.size() && s[i] == 'i') {
        phase += 1;
        i++;
    }
    PauliString p(int(s.size() - i));
    p.set_phase_pow(phase);
    for (int q = 0; i < s.size(); i++, q++) {
        switch (s[i]) {
            case 'I':
            case '_': break;
            case 'X': p.set_x(q, true); break;
            case 'Z': p.set_z(q, true); break;
            case 'Y':
                p.set_x(q, true);
                p.set_z(q, true);
                break;
            default: throw std::invalid_argument("bad Pauli char");
        }
    }
    return p;
}

std::string PauliString::str() const {
    std::string out;
    switch (phase_pow_) {
        case 0: out = "+"; break;
        case 1: out = "i"; break;
        case 2: out = "-"; break;
        case 3: out = "-i"; break;
    }
    for (int q = 0; q < n_; q++) {
        bool x = x_bit(q), z = z_bit(q);
        out += x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I');
    }
    return out;
}

PauliString PauliString::single(int n, int q, char pauli) {
    PauliString p(n);
    if (pauli == 'X' || pauli == 'Y') p.set_x(q, true);
    if (pauli == 'Z' || pauli == 'Y') p.set_z(q, true);
    return p;
}

bool PauliString::identity_bits() const {
    for (size_t i = 0; i < x_.size(); i++)
        if (x_[i] | z_[i]) return false;
    return true;
}

int PauliString::weight() const {
    int w = 0;
    for (size_t i = 0; i < x_.size(); i++) w += std::popcount(x_[i] | z_[i]);
    return w;
}

PauliString& PauliString::operator*=(const PauliString& rhs) {
    check_same_n(rhs);
    int plus = 0, minus = 0;
    for (size_t i = 0; i < x_.size(); i++) {
        uint64_t x1 = x_[i], z1 = z_[i], x2 = rhs.x_[i], z2 = rhs.z_[i];
        uint64_t p1_x = x1 & ~z1, p1_y = x1 & z1, p1_z = ~x1 & z1;
        // exponent of i from single-qubit products: XY=iZ, YZ=iX, ZX=iY
        uint64_t up = (p1_x & x2 & z2) | (p1_y & ~x2 & z2) | (p1_z & x2 & ~z2);
        uint64_t dn = (p1_x & ~x2 & z2) | (p1_y & x2 & ~z2) | (p1_z & x2 & z2);
        plus += std::popcount(up);
        minus += std::popcount(dn);
        x_[i] = x1 ^ x2;
        z_[i] = z1 ^ z2;
    }
    set_phase_pow(phase_pow_ + rhs.phase_pow_ + plus - minus);
    return *this;
}

bool PauliString::commutes_with(const PauliString& other) const {
    check_same_n(other);
    int parity = 0;
    for (size_t i = 0; i < x_.size(); i++)
        parity ^= std::popcount((x_[i] & other.z_[i]) ^ (z_[i] & other.x_[i])) & 1;
    return parity == 0;
}

void PauliString::conjugate_inplace(const CliffordGate& g) {
    if (!g.valid()) throw std::invalid_argument("malformed gate");
    switch (g.kind) {
        case GateKind::Identity: return;
        case GateKind::H: {
            int q = g.q0;
            bool x = x_bit(q), z = z_bit(q);
            set_x(q, z);
            set_z(q, x);
            if (x && z) set_phase_pow(phase_pow_ + 2); // HYH = -Y
            return;
        }
        case GateKind::Swap: {
            bool xa = x_bit(g.q0), za = z_bit(g.q0);
            bool xb = x_bit(g.q1), zb = z_bit(g.q1);
            set_x(g.q0, xb);
            set_z(g.q0, zb);
            set_x(g.q1, xa);
            set_z(g.q1, za);
            return;
        }
        case GateKind::Cnot: {
            int c = g.q0, t = g.q1;
            bool xc = x_bit(c), zc = z_bit(c), xt = x_bit(t), zt = z_bit(t);
            if (xc && zt && !(xt ^ zc)) set_phase_pow(phase_pow_ + 2);
            set_x(t, xt ^ xc);
            set_z(c, zc ^ zt);
            return;
        }
        default: throw std::invalid_argument("conjugate undefined for non-unitary gate");
    }
}

bool PauliFrame::empty() const {
    for (size_t i = 0; i < x_.size(); i++)
        if (x_[i] | z_[i]) return false;
    return true;
}

PauliString PauliFrame::as_pauli() const {
    PauliString p(n_);
    for (int q = 0; q < n_; q++) {
        if (x_bit(q)) p.set_x(q, true);
        if (z_bit(q)) p.set_z(q, true);
    }
    return p;
}

} // namespace defectq
