#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "defectq/gate_event.hpp"
#include "defectq/pauli.hpp"
#include "defectq/tableau.hpp"

namespace defectq {

// Concrete code: generators, logical pair, and the (non-fault-tolerant)
// encoding circuit with explicit slots. The input state rides on wire
// `input_wire`; all other wires start in |0>.
struct CodeDef {
    std::string name;
    int n = 0;
    std::vector<PauliString> generators;
    PauliString logical_x, logical_z;
    std::vector<GateEvent> encoding;
    int input_wire = 0;
    int layout_qubits = 0; // qubits incl. stabilizer-check ancillae (ledger KQ)

    long long encoding_kq() const { return (long long)layout_qubits * circuit_depth(encoding); }
    bool sanity() const; // abelian, independent, logicals commute/anticommute
};

const CodeDef& steane_code();
const CodeDef& surface_d3_code();

// Applies the encoding circuit to a tableau that starts as |0...0> with the
// input wire's generator replaced by `input` ('Z' for |0>, 'X' for |+>).
StabilizerTableau encode_tableau(const CodeDef& code, char input);

struct PatchCounts {
    int data_qubits;
    int z_stabilizers;
    int x_stabilizers_independent;
    int degrees_of_freedom; // exponent: log2 of the state-space freedom
};
// Distance-3 deformation-based reference patch: a 5x6 grid-graph fragment
// with the central edge unused and the adjacent faces/vertices merged.
PatchCounts deformation_patch_counts();
// The generators of that patch, for the commutation/dependency checks.
StabilizerTableau deformation_patch_tableau();

struct TraceReport {
    bool ok = true;
    std::vector<std::string> steps;
    std::vector<std::string> failures;
    void check(bool cond, const std::string& what) {
        steps.push_back(what);
        if (!cond) {
            ok = false;
            failures.push_back(what);
        }
    }
};

TraceReport verify_state_injection_trace();
TraceReport verify_lattice_surgery_cnot_trace();
TraceReport verify_zz_teleportation_trace();

struct CatReport {
    bool ok = true;
    int depth = 0;            // slots of the constant-depth creation circuit
    int cycles_linear = 0;    // ZZ-proof cycles, linear arrangement
    int cycles_circular = 0;  // and circular arrangement
    std::vector<std::string> failures;
};
CatReport cat_state_check(int n, int code_distance);

struct ResourceReport {
    int d;
    long long planar_qubits_per_logical;        // (4d-2)^2
    long long deformation_qubits_per_logical;   // (25d^2+170d+289)/4 at d_e=d
    long long rotated_qubits_per_logical;       // 2d^2-1
    long long superstabilizer_steps;            // 4d+5
    long long superstabilizer_steps_improved;   // 4d+9
    long long braiding_cnot_steps;              // 32d
    long long deformation_cnot_steps;           // 4d^2+9d
    long long planar_cnot_steps;                // 24d
    int d_opt, d_short, d_eff;                  // d_o = d+3, d_s = d+2, d_e = d
    long long redundant_logical_ops_num;        // d^3-11d^2+35d-25 (over 8)
    bool redundant_integral;                    // numerator divisible by 8
    long long redundant_logical_ops;            // the quotient when integral
    int cat_cycles_linear, cat_cycles_circular; // d and ceil(d/2)
};
ResourceReport resource_formulas(int d);

} // namespace defectq
