#pragma once

#include <string>
#include <vector>

#include "defectq/gate_event.hpp"
#include "defectq/lattice.hpp"

namespace defectq {

// Syndrome-extraction circuit for one (possibly merged) stabilizer. The
// ancilla variable is initialized on the first path device, travels by
// SWAPs gathering syndromes, and is measured on the last.
struct StabilizerCircuit {
    int stab_id = 0;
    StabKind kind = StabKind::Z;
    std::vector<int> members;
    std::vector<GateEvent> events; // ASAP slots, 0-based
    int depth = 0;
    std::vector<int> ancilla_path; // covering ancilla devices, visit order
    std::vector<int> device_path;  // full expanded device route
    bool heuristic_tsp = false;    // covering set exceeded the exact solver
};

struct UncoverableStabilizer : std::runtime_error {
    explicit UncoverableStabilizer(const std::string& what) : std::runtime_error(what) {}
};

StabilizerCircuit compose_stabilizer_circuit(const Lattice& l, const StabilizerLayout& layout,
                                             const StabilizerSpec& spec);

std::vector<StabilizerCircuit> compose_all(const Lattice& l, const StabilizerLayout& layout);

long long circuit_kq(const StabilizerCircuit& c);
long long circuit_kdq(const StabilizerCircuit& c, const Lattice& l);

// test support: minimal open-path traversal cost by exhaustive permutation
int tsp_brute_force(const std::vector<std::vector<int>>& dist);
int tsp_held_karp(const std::vector<std::vector<int>>& dist, std::vector<int>& order);

std::string circuit_to_json(const StabilizerCircuit& c);

// lattice + all stabilizer circuits, for the file-based CLI pipeline
std::string circuits_to_json(const Lattice& l, const std::vector<StabilizerCircuit>& circs);
std::pair<Lattice, std::vector<StabilizerCircuit>> circuits_from_json(const std::string& text);

} // namespace defectq
