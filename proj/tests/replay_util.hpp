#pragma once

// Test oracle: Heisenberg replay of scheduled circuits. The operator
// effectively measured by each MEASURE event is reconstructed by dragging
// Z on the measured device backward through every earlier gate; a valid
// schedule must yield exactly the declared stabilizer operator.

#include <optional>
#include <vector>

#include "defectq/lattice.hpp"
#include "defectq/pauli.hpp"
#include "defectq/schedule.hpp"

namespace replay {

using namespace defectq;

struct Measured {
    int gate_index;
    PauliString effective; // on data sites only; empty() if invalid
    bool valid;
};

inline Measured effective_operator(const Lattice& l, const std::vector<ScheduledGate>& gates,
                                   size_t meas_index) {
    const auto& mg = gates[meas_index];
    PauliString p(l.sites());
    p.set_z(mg.gate.q0, true);
    bool valid = true;
    for (size_t k = meas_index; k-- > 0;) {
        const auto& g = gates[k].gate;
        switch (g.kind) {
            case GateKind::H:
            case GateKind::Cnot:
            case GateKind::Swap:
                p.conjugate_inplace(g);
                break;
            case GateKind::InitZ: {
                int q = g.q0;
                if (p.x_bit(q)) valid = false; // X/Y across an INIT is corruption
                p.set_z(q, false);             // Z acts as +1 on a fresh |0>
                p.set_x(q, false);
                break;
            }
            case GateKind::MeasureZ: {
                int q = g.q0;
                if (p.x_bit(q) || p.z_bit(q)) valid = false;
                break;
            }
            default: break;
        }
        if (!valid) break;
    }
    if (valid) {
        // devices never re-initialized inside the horizon started in |0>;
        // leftover Z on ancilla devices acts as +1 there
        for (int q = 0; q < l.sites(); q++) {
            if (!l.data_site(q) && p.z_bit(q)) p.set_z(q, false);
            if (!l.data_site(q) && p.x_bit(q)) valid = false;
        }
    }
    return {int(meas_index), p, valid};
}

// checks every measurement instance of every stabilizer in the schedule
inline bool all_measurements_match(const Lattice& l, const std::vector<StabilizerCircuit>& circs,
                                   const WholeCircuit& w, std::string* why = nullptr) {
    for (size_t k = 0; k < w.gates.size(); k++) {
        if (w.gates[k].gate.kind != GateKind::MeasureZ) continue;
        auto m = effective_operator(l, w.gates, k);
        const auto& c = circs[w.gates[k].stab_index];
        PauliString want(l.sites());
        for (int q : c.members) {
            if (c.kind == StabKind::Z)
                want.set_z(q, true);
            else
                want.set_x(q, true);
        }
        if (!m.valid || !(m.effective == want)) {
            if (why)
                *why = "measurement of stab " + std::to_string(w.gates[k].stab_index) +
                       " instance " + std::to_string(w.gates[k].instance) + " got " +
                       (m.valid ? m.effective.str() : std::string("INVALID")) + " want " +
                       want.str();
            return false;
        }
    }
    return true;
}

} // namespace replay
