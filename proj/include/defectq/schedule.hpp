#pragma once

#include <map>
#include <vector>

#include "defectq/circuit.hpp"

namespace defectq {

struct ScheduledGate {
    CliffordGate gate;
    int slot = 0;
    int stab_index = 0; // index into the input circuit list
    int instance = 0;
};

// Time-slotted whole circuit covering the lattice: repeated stabilizer
// instances woven by the deepest-first scheduler.
struct WholeCircuit {
    int n_sites = 0;
    int horizon = 0; // last used slot + 1
    std::vector<ScheduledGate> gates; // sorted by slot
    std::vector<std::vector<int>> measure_slots; // per stab index, ascending
    std::vector<int> cycle_boundaries; // slots closing each error-correction cycle

    double average_cycle(int stab_index) const; // mean inter-measurement gap
    double average_ec_cycle() const;            // mean steps per correction cycle
    int measurements_of(int stab_index) const { return int(measure_slots[stab_index].size()); }
};

struct HorizonError : std::runtime_error {
    explicit HorizonError(const std::string& w) : std::runtime_error(w) {}
};

// Algorithm: sort by depth (deepest first, ties to the lattice top-left),
// schedule the deepest, then repeatedly schedule everything whose ceiling
// has not passed the deepest stabilizer's ceiling. Data-qubit conflicts are
// resolved by waiting (identity insertion); any conflict on a syndrome
// device or with another instance's device span forces a full reschedule
// after the blocking stabilizer finishes.
WholeCircuit schedule(const std::vector<StabilizerCircuit>& circuits, int max_steps,
                      const std::vector<bool>& ancilla_role);
WholeCircuit schedule(const std::vector<StabilizerCircuit>& circuits, int max_steps,
                      const Lattice& l);

std::string whole_circuit_to_json(const WholeCircuit& w);

} // namespace defectq
