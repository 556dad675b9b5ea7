#include "defectq/noise.hpp"

namespace defectq {

PauliString sample_channel(const CliffordGate& g, const ErrorModel& m, Rng& rng) {
    if (g.two_qubit()) {
        PauliString p(2);
        auto e = sample_2q(m, rng);
        p.set_x(0, e[0]);
        p.set_z(0, e[1]);
        p.set_x(1, e[2]);
        p.set_z(1, e[3]);
        return p;
    }
    PauliString p(1);
    if (g.kind == GateKind::InitZ || g.kind == GateKind::MeasureZ) {
        p.set_x(0, rng.bernoulli(m.init_meas_flip()));
        return p;
    }
    if (g.kind == GateKind::Identity && !m.idle_errors) return p;
    auto [x, z] = sample_1q(m, rng);
    p.set_x(0, x);
    p.set_z(0, z);
    return p;
}

} // namespace defectq
