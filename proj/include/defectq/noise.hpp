#pragma once

#include <array>
#include <utility>

#include "defectq/pauli.hpp"
#include "defectq/rng.hpp"

namespace defectq {

// Circuit-level Pauli noise. Two presets are used:
//  - lattice: X/Y/Z at p/3 after 1q gates, the 15 two-qubit Paulis at p/15
//    after 2q gates, X flip with probability p at INIT and before MEASURE,
//    no idle errors (identity gates are omitted from the circuits).
//  - purification: as above but INIT/measurement are X,Y,Z at p/3 and
//    explicit idle locations suffer memory error at p/3 per Pauli.
struct ErrorModel {
    double p = 0.0;
    bool idle_errors = false;
    bool init_meas_thirds = false; // false: X flip at p; true: X/Y/Z at p/3

    static ErrorModel lattice(double p) { return {p, false, false}; }
    static ErrorModel purification(double p) { return {p, true, true}; }

    // probability that an INIT or readout location flips the Z-basis value
    double init_meas_flip() const { return init_meas_thirds ? 2.0 * p / 3.0 : p; }
};

// single-qubit channel: returns (x, z) bits of the sampled Pauli
inline std::pair<bool, bool> sample_1q(const ErrorModel& m, Rng& rng) {
    double r = rng.next_double();
    if (r >= m.p) return {false, false};
    int k = int(r / m.p * 3.0);
    if (k == 0) return {true, false};  // X
    if (k == 1) return {true, true};   // Y
    return {false, true};              // Z
}

// two-qubit channel: ((x0,z0),(x1,z1)); the 15 nontrivial Paulis at p/15
inline std::array<bool, 4> sample_2q(const ErrorModel& m, Rng& rng) {
    double r = rng.next_double();
    if (r >= m.p) return {false, false, false, false};
    int k = int(r / m.p * 15.0) + 1; // 1..15, base-4 digits (I,X,Y,Z) per qubit
    int a = k / 4, b = k % 4;
    auto bits = [](int w) -> std::pair<bool, bool> {
        switch (w) {
            case 1: return {true, false};
            case 2: return {true, true};
            default: return {false, w == 3};
        }
    };
    auto [x0, z0] = bits(a);
    auto [x1, z1] = bits(b);
    return {x0, z0, x1, z1};
}

// Spec-level channel sampler returning a PauliString on the gate's qubits.
PauliString sample_channel(const CliffordGate& g, const ErrorModel& m, Rng& rng);

} // namespace defectq
