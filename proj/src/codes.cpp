#include "defectq/codes.hpp"

#include <map>
#include <set>
#include <stdexcept>

namespace defectq {

namespace {

PauliString on(int n, char p, std::initializer_list<int> qubits, int sign = +1) {
    PauliString out(n);
    for (int q : qubits) {
        if (p == 'X' || p == 'Y') out.set_x(q, true);
        if (p == 'Z' || p == 'Y') out.set_z(q, true);
    }
    if (sign < 0) out.set_phase_pow(2);
    return out;
}

std::vector<CliffordGate> in_order(const std::vector<GateEvent>& events) {
    std::vector<CliffordGate> gates;
    for (const auto& e : sorted_by_slot(events)) gates.push_back(e.gate);
    return gates;
}

// All 2^k signed elements of the group generated by `gens` (gray-code walk).
std::vector<PauliString> group_elements(const std::vector<PauliString>& gens, int n) {
    size_t k = gens.size();
    std::vector<PauliString> out;
    out.reserve(size_t(1) << k);
    PauliString cur(n);
    out.push_back(cur);
    uint64_t prev = 0;
    for (uint64_t i = 1; i < (uint64_t(1) << k); i++) {
        uint64_t code = i ^ (i >> 1);
        uint64_t toggled = code ^ prev;
        int bit = 0;
        while (!((toggled >> bit) & 1)) bit++;
        cur *= gens[bit];
        out.push_back(cur);
        prev = code;
    }
    return out;
}

std::string key_of(const PauliString& p) {
    std::string k;
    for (uint64_t w : p.x_words()) k += std::to_string(w) + ",";
    for (uint64_t w : p.z_words()) k += std::to_string(w) + ",";
    k += std::to_string(p.phase_pow());
    return k;
}

// Greedy minimal-weight independent set spanning the same space.
std::vector<PauliString> min_weight_basis(std::vector<PauliString> elems, size_t want) {
    std::sort(elems.begin(), elems.end(),
              [](const PauliString& a, const PauliString& b) { return a.weight() < b.weight(); });
    std::vector<PauliString> basis;
    StabilizerTableau probe(elems.empty() ? 0 : elems[0].n());
    for (const auto& e : elems) {
        if (e.identity_bits()) continue;
        if (probe.contains_up_to_sign(e)) continue;
        probe.add_generator(e);
        basis.push_back(e);
        if (basis.size() == want) break;
    }
    return basis;
}

bool pure_type(const PauliString& p, char t) {
    for (int q = 0; q < p.n(); q++) {
        if (t == 'X' && p.z_bit(q)) return false;
        if (t == 'Z' && p.x_bit(q)) return false;
    }
    return true;
}

// Derives generators and minimal-weight logicals from the encoder itself:
// the code group is the intersection of the |0>-encode and |+>-encode
// stabilizer groups.
void derive_from_encoder(CodeDef& code) {
    StabilizerTableau t0 = encode_tableau(code, 'Z');
    StabilizerTableau t1 = encode_tableau(code, 'X');
    auto e0 = group_elements(t0.generators(), code.n);
    auto e1 = group_elements(t1.generators(), code.n);
    std::set<std::string> in1;
    for (const auto& p : e1) in1.insert(key_of(p));

    std::vector<PauliString> common, only0;
    for (const auto& p : e0) {
        if (in1.count(key_of(p)))
            common.push_back(p);
        else
            only0.push_back(p);
    }
    if (common.size() != e0.size() / 2)
        throw std::logic_error(code.name + ": encoder groups do not intersect in half");

    std::vector<PauliString> xs, zs;
    for (const auto& p : common) {
        if (pure_type(p, 'X')) xs.push_back(p);
        if (pure_type(p, 'Z')) zs.push_back(p);
    }
    auto bx = min_weight_basis(xs, code.n);
    auto bz = min_weight_basis(zs, code.n);
    code.generators.clear();
    for (auto& g : bx) code.generators.push_back(g);
    for (auto& g : bz) code.generators.push_back(g);
    if (int(code.generators.size()) != code.n - 1)
        throw std::logic_error(code.name + ": expected n-1 independent generators");

    // minimal-weight logicals: lightest elements of one encode group that
    // are missing from the other
    auto lz = min_weight_basis(only0, 1);
    std::set<std::string> in_common;
    for (const auto& p : common) in_common.insert(key_of(p));
    std::vector<PauliString> only1;
    for (const auto& p : e1)
        if (!in_common.count(key_of(p))) only1.push_back(p);
    auto lx = min_weight_basis(only1, 1);
    if (lz.empty() || lx.empty()) throw std::logic_error(code.name + ": missing logicals");
    code.logical_z = lz[0];
    code.logical_x = lx[0];
    if (code.logical_x.commutes_with(code.logical_z))
        throw std::logic_error(code.name + ": logicals commute");
}

} // namespace

bool CodeDef::sanity() const {
    StabilizerTableau t(n);
    for (const auto& g : generators) t.add_generator(g);
    if (!t.mutually_commuting() || !t.independent()) return false;
    for (const auto& g : generators)
        if (!logical_x.commutes_with(g) || !logical_z.commutes_with(g)) return false;
    return !logical_x.commutes_with(logical_z);
}

StabilizerTableau encode_tableau(const CodeDef& code, char input) {
    StabilizerTableau t(code.n);
    for (int q = 0; q < code.n; q++) {
        if (q == code.input_wire)
            t.add_generator(PauliString::single(code.n, q, input));
        else
            t.add_generator(PauliString::single(code.n, q, 'Z'));
    }
    t.apply_circuit(in_order(code.encoding));
    return t;
}

const CodeDef& steane_code() {
    static const CodeDef code = [] {
        CodeDef c;
        c.name = "steane";
        c.n = 7;
        c.input_wire = 3;
        c.layout_qubits = 7;
        auto add = [&](CliffordGate g, int slot) { c.encoding.push_back({g, slot}); };
        add(CliffordGate::h(4), 0);
        add(CliffordGate::h(5), 0);
        add(CliffordGate::h(6), 0);
        add(CliffordGate::cnot(3, 1), 0);
        add(CliffordGate::cnot(3, 2), 1);
        add(CliffordGate::cnot(4, 0), 1);
        add(CliffordGate::cnot(4, 2), 2);
        add(CliffordGate::cnot(5, 0), 2);
        add(CliffordGate::cnot(4, 3), 3);
        add(CliffordGate::cnot(5, 1), 3);
        add(CliffordGate::cnot(6, 0), 3);
        add(CliffordGate::cnot(5, 3), 4);
        add(CliffordGate::cnot(6, 1), 4);
        add(CliffordGate::cnot(6, 2), 5);
        derive_from_encoder(c);
        return c;
    }();
    return code;
}

// Distance-3 planar layout on 13 data qubits. Wire k sits at grid site:
//   0:(0,0) 1:(0,2) 2:(0,4) 3:(1,1) 4:(1,3)
//   5:(2,0) 6:(2,2) 7:(2,4) 8:(3,1) 9:(3,3)
//   10:(4,0) 11:(4,2) 12:(4,4)
// The input state enters at wire 0 and fans out along the logical X string
// {0,5,10}; one Hadamard seed per X plaquette spreads the code projector.
const CodeDef& surface_d3_code() {
    static const CodeDef code = [] {
        CodeDef c;
        c.name = "surface3";
        c.n = 13;
        c.input_wire = 0;
        c.layout_qubits = 25; // 13 data plus 12 stabilizer-check ancillae
        auto add = [&](CliffordGate g, int slot) { c.encoding.push_back({g, slot}); };
        add(CliffordGate::h(1), 0);
        add(CliffordGate::h(2), 0);
        add(CliffordGate::h(6), 0);
        add(CliffordGate::h(7), 0);
        add(CliffordGate::h(11), 0);
        add(CliffordGate::h(12), 0);
        add(CliffordGate::cnot(0, 5), 0);
        add(CliffordGate::cnot(0, 10), 1);
        add(CliffordGate::cnot(1, 0), 2);
        add(CliffordGate::cnot(6, 3), 2);
        add(CliffordGate::cnot(1, 3), 3);
        add(CliffordGate::cnot(6, 5), 3);
        add(CliffordGate::cnot(2, 1), 4);
        add(CliffordGate::cnot(6, 8), 4);
        add(CliffordGate::cnot(2, 4), 5);
        add(CliffordGate::cnot(11, 8), 5);
        add(CliffordGate::cnot(7, 6), 6);
        add(CliffordGate::cnot(11, 10), 6);
        add(CliffordGate::cnot(7, 4), 7);
        add(CliffordGate::cnot(12, 11), 7);
        add(CliffordGate::cnot(7, 9), 8);
        add(CliffordGate::cnot(12, 9), 9);
        derive_from_encoder(c);
        return c;
    }();
    return code;
}

// 5x6 grid-graph fragment: data qubits on edges, Z stabilizers on faces,
// X stabilizers on vertices. The central edge is unused; the two faces and
// the two vertices containing it merge into 6-qubit superstabilizers.
StabilizerTableau deformation_patch_tableau() {
    const int rows = 5, cols = 6;
    std::map<std::pair<std::pair<int, int>, std::pair<int, int>>, int> edge_id;
    auto edge = [&](int r1, int c1, int r2, int c2) {
        auto key = std::make_pair(std::make_pair(r1, c1), std::make_pair(r2, c2));
        auto it = edge_id.find(key);
        if (it != edge_id.end()) return it->second;
        int id = int(edge_id.size());
        edge_id[key] = id;
        return id;
    };
    // enumerate edges row-major: horizontal then vertical per vertex
    for (int r = 0; r < rows; r++)
        for (int c = 0; c < cols; c++) {
            if (c + 1 < cols) edge(r, c, r, c + 1);
            if (r + 1 < rows) edge(r, c, r + 1, c);
        }
    const int n = int(edge_id.size()); // 49
    const int unused = edge(2, 2, 2, 3); // central horizontal edge

    auto face_support = [&](int r, int c) { // face with corner (r,c)
        return std::vector<int>{edge(r, c, r, c + 1), edge(r + 1, c, r + 1, c + 1),
                                edge(r, c, r + 1, c), edge(r, c + 1, r + 1, c + 1)};
    };
    auto vertex_support = [&](int r, int c) {
        std::vector<int> s;
        if (c > 0) s.push_back(edge(r, c - 1, r, c));
        if (c + 1 < cols) s.push_back(edge(r, c, r, c + 1));
        if (r > 0) s.push_back(edge(r - 1, c, r, c));
        if (r + 1 < rows) s.push_back(edge(r, c, r + 1, c));
        return s;
    };
    auto strip_unused = [&](std::vector<int> s) {
        std::erase(s, unused);
        return s;
    };
    auto make = [&](char t, const std::vector<int>& support) {
        PauliString p(n);
        for (int q : support) {
            if (t == 'X') p.set_x(q, true);
            if (t == 'Z') p.set_z(q, true);
        }
        return p;
    };

    StabilizerTableau t(n);
    // faces: merge (1,2) and (2,2) which share the unused edge
    std::vector<int> merged_face = strip_unused(face_support(1, 2));
    for (int q : strip_unused(face_support(2, 2)))
        if (q != edge(2, 2, 2, 3)) merged_face.push_back(q);
    std::sort(merged_face.begin(), merged_face.end());
    merged_face.erase(std::unique(merged_face.begin(), merged_face.end()), merged_face.end());
    t.add_generator(make('Z', merged_face));
    for (int r = 0; r + 1 < rows; r++)
        for (int c = 0; c + 1 < cols; c++) {
            if ((r == 1 && c == 2) || (r == 2 && c == 2)) continue;
            t.add_generator(make('Z', face_support(r, c)));
        }
    // vertices: merge (2,2) and (2,3)
    std::vector<int> merged_vertex = strip_unused(vertex_support(2, 2));
    for (int q : strip_unused(vertex_support(2, 3))) merged_vertex.push_back(q);
    std::sort(merged_vertex.begin(), merged_vertex.end());
    merged_vertex.erase(std::unique(merged_vertex.begin(), merged_vertex.end()),
                        merged_vertex.end());
    t.add_generator(make('X', merged_vertex));
    bool skipped_dependent = false;
    for (int r = 0; r < rows; r++)
        for (int c = 0; c < cols; c++) {
            if ((r == 2 && c == 2) || (r == 2 && c == 3)) continue;
            // any single vertex operator is the product of all the others
            if (!skipped_dependent) {
                skipped_dependent = true;
                continue;
            }
            t.add_generator(make('X', vertex_support(r, c)));
        }
    return t;
}

PatchCounts deformation_patch_counts() {
    StabilizerTableau t = deformation_patch_tableau();
    PatchCounts pc;
    pc.data_qubits = 49 - 1; // one unused edge stays idle in the fragment
    int z = 0, x = 0;
    for (const auto& g : t.generators()) {
        bool has_z = false;
        for (int q = 0; q < g.n(); q++) has_z |= g.z_bit(q);
        (has_z ? z : x)++;
    }
    pc.z_stabilizers = z;
    pc.x_stabilizers_independent = x;
    pc.degrees_of_freedom = pc.data_qubits - int(t.generators().size());
    return pc;
}

TraceReport verify_state_injection_trace() {
    TraceReport rep;
    const int n = 9;
    auto fresh = [&] {
        StabilizerTableau t(n);
        t.add_generator(on(n, 'X', {0, 1, 2, 4}));
        t.add_generator(on(n, 'X', {4, 6, 7, 8}));
        t.add_generator(on(n, 'Z', {1, 3, 4, 6}));
        t.add_generator(on(n, 'Z', {2, 4, 5, 7}));
        return t;
    };

    for (int branch : {+1, -1}) {
        StabilizerTableau t = fresh();
        auto x5 = on(n, 'X', {4});
        auto r = t.measure(x5, branch);
        rep.check(r.sign == branch, "first X5 measurement honors forced outcome");
        if (branch < 0) t.apply_pauli(on(n, 'Z', {1, 3, 4, 6})); // Z2Z4Z5Z7
        rep.check(t.contains(on(n, 'X', {0, 1, 2})), "contains +X1X2X3 after X5 measurement");
        rep.check(t.contains(on(n, 'X', {6, 7, 8})), "contains +X7X8X9 after X5 measurement");
        rep.check(t.contains(x5), "X5 restored to +1");

        // qubit 5 now carries the injected state: X5 stops being a stabilizer
        t.release_generator(x5);
        t.add_logical("Z", on(n, 'Z', {4}));
        t.add_logical("X", x5);

        auto z2457 = on(n, 'Z', {1, 3, 4, 6});
        auto z3568 = on(n, 'Z', {2, 4, 5, 7});
        auto m1 = t.measure(z2457, branch);
        if (branch < 0) t.apply_pauli(on(n, 'X', {0, 1, 2}));
        auto m2 = t.measure(z3568);
        rep.check(m2.was_determined, "second defect measurement is determined");
        rep.check(m2.sign == +1, "Z3Z5Z6Z8 sign follows the corrected Z2Z4Z5Z7");
        rep.check(m1.sign == branch, "Z2Z4Z5Z7 honors forced outcome");
        rep.check(t.contains(on(n, 'X', {0, 1, 2, 6, 7, 8})), "X rows merge across the defects");

        // conversion: measure qubit 5 in X again, merging the two defects
        auto r2 = t.measure(x5, branch);
        rep.check(!r2.was_determined, "second X5 measurement is fresh");
        if (branch < 0) t.apply_pauli(z2457);
        rep.check(t.contains(x5), "X5 sign restored after conversion");
        rep.check(t.contains(on(n, 'Z', {1, 2, 3, 5, 6, 7})),
                  "superstabilizer Z2Z3Z4Z6Z7Z8 is measurable");
        const PauliString* lz = nullptr;
        for (const auto& [label, l] : t.logicals())
            if (label == "Z") lz = &l;
        rep.check(lz && lz->same_bits(on(n, 'Z', {1, 3, 6})), "logical Z becomes Z2Z4Z7");
        if (lz) {
            auto alt = *lz * on(n, 'Z', {1, 2, 3, 5, 6, 7});
            rep.check(alt.same_bits(on(n, 'Z', {2, 5, 7})), "alternative logical Z is Z3Z6Z8");
        }
        const PauliString* lx = nullptr;
        for (const auto& [label, l] : t.logicals())
            if (label == "X") lx = &l;
        rep.check(lx && lx->same_bits(on(n, 'X', {0, 1, 2, 4})), "logical X tracks X1X2X3X5");
    }
    return rep;
}

TraceReport verify_lattice_surgery_cnot_trace() {
    TraceReport rep;
    const int n = 17; // labels 1..9 -> 0..8, S -> 9, a..g -> 10..16
    auto fresh = [&] {
        StabilizerTableau t(n);
        t.add_generator(on(n, 'Z', {0, 1, 2, 4, 5, 6}));       // Z1Z2Z3Z5Z6Z7
        t.add_generator(on(n, 'X', {1, 2, 3, 4, 5, 9}));       // X2X3X4X5X6XS
        t.add_generator(on(n, 'Z', {10, 11, 12, 14, 15, 16})); // ZaZbZcZeZfZg
        t.add_generator(on(n, 'X', {9, 11, 12, 13, 14, 15}));  // XSXbXcXdXeXf
        t.add_generator(on(n, 'Z', {2, 7, 9, 11}));            // Z3Z8ZSZb
        t.add_generator(on(n, 'Z', {5, 8, 9, 14}));            // Z6Z9ZSZe
        t.add_generator(on(n, 'Z', {4, 5, 6}));                // |0_I>
        t.add_generator(on(n, 'Z', {14, 15, 16}));             // |0_T>
        return t;
    };

    {
        StabilizerTableau probe = fresh();
        rep.check(probe.mutually_commuting() && probe.independent(),
                  "initial merged-region tableau is a valid stabilizer set");
    }

    for (int branch : {+1, -1}) {
        StabilizerTableau t = fresh();
        // 1: measure S in Z; X-correct via a superstabilizer through S
        t.measure(on(n, 'Z', {9}), branch);
        if (branch < 0) t.apply_pauli(on(n, 'X', {1, 2, 3, 4, 5, 9}));
        rep.check(t.contains(on(n, 'Z', {9})), "Z_S restored to +1");
        rep.check(t.contains(on(n, 'X', {1, 2, 3, 4, 5, 11, 12, 13, 14, 15})),
                  "X superstabilizers fuse across S");
        rep.check(t.contains(on(n, 'Z', {2, 7, 11})), "+Z3Z8Zb survives");
        rep.check(t.contains(on(n, 'Z', {5, 8, 14})), "+Z6Z9Ze survives");

        // 2: measure X3
        t.measure(on(n, 'X', {2}), branch);
        if (branch < 0) t.apply_pauli(on(n, 'Z', {2, 7, 11})); // Z3Z8Zb
        rep.check(t.contains(on(n, 'X', {2})), "X3 sign +");
        rep.check(t.contains(on(n, 'Z', {0, 1, 4, 5, 6, 7, 11})), "+Z1Z2Z5Z6Z7Z8Zb");

        // 3: measure Xb
        t.measure(on(n, 'X', {11}), branch);
        if (branch < 0) t.apply_pauli(on(n, 'Z', {10, 11, 12, 14, 15, 16})); // ZaZbZcZeZfZg
        rep.check(t.contains(on(n, 'X', {11})), "Xb sign +");
        rep.check(t.contains(on(n, 'Z', {0, 1, 4, 5, 6, 7, 10, 12, 14, 15, 16})),
                  "Z rows fuse through b");

        // 4: measure X6
        t.measure(on(n, 'X', {5}), branch);
        if (branch < 0) t.apply_pauli(on(n, 'Z', {0, 1, 4, 5, 6, 7, 10, 12, 14, 15, 16}));
        rep.check(t.contains(on(n, 'X', {5})), "X6 sign +");
        rep.check(t.contains(on(n, 'Z', {0, 1, 4, 6, 7, 8, 10, 12, 15, 16})),
                  "qubit e cancels out of the fused Z row");
        rep.check(t.contains(on(n, 'Z', {4, 6, 8, 14})), "+Z5Z7Z9Ze appears");

        // 5: measure Xe; on -1 the I-side logical Z chain reconnects signs
        auto re = t.measure(on(n, 'X', {14}), branch);
        rep.check(!re.was_determined, "Xe measurement is fresh");
        if (branch < 0) {
            t.apply_pauli(on(n, 'Z', {4, 6, 8})); // Z5Z7Z9 as Z_I
            rep.check(t.contains(on(n, 'X', {14}, -1)), "Xe keeps its -1 record");
        }
        rep.check(t.contains(on(n, 'Z', {4, 6, 8, 15, 16})) ||
                      t.contains_up_to_sign(on(n, 'Z', {4, 6, 8, 15, 16})),
                  "merged logical |0_m> = Z5Z7Z9ZfZg present");
        if (branch > 0) {
            rep.check(t.contains(on(n, 'Z', {4, 6, 8, 15, 16})),
                      "merged logical has + sign on the all-+1 branch");
            rep.check(t.contains(on(n, 'X', {1, 3, 4, 12, 13, 15})),
                      "final X superstabilizer X2X4X5XcXdXf");
        }
    }

    // Abstract 3-qubit lattice-surgery protocol: ZZ then XX measurement.
    // C=0, I=1 (always |+>), T=2. Verify CNOT truth-table action.
    struct Case {
        char c, t;          // input stabilizer of control/target: Z sign via lower/upper
        int csign, tsign;   // +1: |0>/|+>, -1: |1>/|->
        char oc, ot;        // expected output types
        int osc, ost;       // expected output signs
    };
    const Case cases[] = {
        {'Z', 'Z', +1, +1, 'Z', 'Z', +1, +1}, // |00> -> |00>
        {'Z', 'Z', -1, +1, 'Z', 'Z', -1, -1}, // |10> -> |11>
        {'Z', 'Z', -1, -1, 'Z', 'Z', -1, +1}, // |11> -> |10>
        {'X', 'X', +1, +1, 'X', 'X', +1, +1}, // |++> -> |++>
        {'X', 'X', +1, -1, 'X', 'X', -1, -1}, // |+-> -> |-->  (phase kickback)
        {'Z', 'X', +1, +1, 'Z', 'X', +1, +1}, // |0+> -> |0+>
    };
    for (const auto& cs : cases) {
        StabilizerTableau t(3);
        t.add_generator(on(3, cs.c, {0}, cs.csign));
        t.add_generator(on(3, 'X', {1}));
        t.add_generator(on(3, cs.t, {2}, cs.tsign));
        auto zz = on(3, 'Z', {0, 1});
        auto r1 = t.measure(zz, +1);
        if (!r1.was_determined && r1.sign < 0) t.apply_pauli(on(3, 'X', {1}));
        auto xx = on(3, 'X', {1, 2});
        auto r2 = t.measure(xx, +1);
        if (!r2.was_determined && r2.sign < 0) t.apply_pauli(zz);
        // merged qubit m: Z_m = Z_I Z_T (X_I X_T is now a stabilizer)
        PauliString out_c = on(3, cs.oc, {0}, cs.osc);
        PauliString out_m = cs.ot == 'Z' ? on(3, 'Z', {1, 2}, cs.ost) : on(3, 'X', {2}, cs.ost);
        rep.check(t.contains(out_c), "abstract protocol: control output");
        rep.check(t.contains(out_m), "abstract protocol: merged-target output");
    }
    // Bell case: |+0> -> X_C X_m and Z_C Z_m correlations
    {
        StabilizerTableau t(3);
        t.add_generator(on(3, 'X', {0}));
        t.add_generator(on(3, 'X', {1}));
        t.add_generator(on(3, 'Z', {2}));
        t.measure(on(3, 'Z', {0, 1}), +1);
        t.measure(on(3, 'X', {1, 2}), +1);
        rep.check(t.contains(on(3, 'X', {0, 1})), "Bell: X_C X_m");
        rep.check(t.contains(on(3, 'Z', {0, 1, 2})), "Bell: Z_C Z_m");
    }
    return rep;
}

TraceReport verify_zz_teleportation_trace() {
    TraceReport rep;
    const int q = 0, b0 = 1, b1 = 2, a = 3, n = 4;
    for (char input : {'Z', 'X'}) {
        std::vector<std::string> finals;
        for (int bits = 0; bits < 8; bits++) {
            int m_a = (bits & 1) ? -1 : +1;
            int m_q = (bits & 2) ? -1 : +1;
            int m_b0 = (bits & 4) ? -1 : +1;
            StabilizerTableau t(n);
            t.add_generator(on(n, input, {q}));
            t.add_generator(on(n, 'X', {b0, b1}));
            t.add_generator(on(n, 'Z', {b0, b1}));
            t.add_generator(on(n, 'Z', {a}));
            t.apply(CliffordGate::cnot(q, a));
            t.apply(CliffordGate::cnot(b0, a));
            t.measure(on(n, 'Z', {a}), m_a);
            if (m_a < 0) t.apply_pauli(on(n, 'X', {b0}) * on(n, 'X', {b1}));
            t.measure(on(n, 'X', {q}), m_q);
            if (m_q < 0) t.apply_pauli(on(n, 'Z', {b1}));
            t.measure(on(n, 'X', {b0}), m_b0);
            if (m_b0 < 0) t.apply_pauli(on(n, 'Z', {b1}));
            auto expect = on(n, input, {b1});
            rep.check(t.contains(expect), std::string("teleported ") + input +
                                              " stabilizer lands on b1 (branch " +
                                              std::to_string(bits) + ")");
            finals.push_back(expect.str());
        }
        for (const auto& f : finals) rep.check(f == finals[0], "branches agree on the output");
    }
    return rep;
}

CatReport cat_state_check(int n, int code_distance) {
    CatReport rep;
    if (n < 2) throw std::invalid_argument("cat state needs n >= 2");
    const int total = 2 * n - 1; // members 0..n-1, ancilla for pair i at n+i
    std::vector<GateEvent> circuit;
    for (int i = 0; i < n; i++) circuit.push_back({CliffordGate::h(i), 0});
    for (int i = 0; i + 1 < n; i++) {
        circuit.push_back({CliffordGate::cnot(i, n + i), 1});
        circuit.push_back({CliffordGate::cnot(i + 1, n + i), 2});
    }
    rep.depth = circuit_depth(circuit) + 2; // plus measurement and correction steps

    for (int pattern = 0; pattern < 2; pattern++) { // all-plus and alternating outcomes
        StabilizerTableau t(total);
        for (int i = 0; i < total; i++) t.add_generator(PauliString::single(total, i, 'Z'));
        t.apply_circuit([&] {
            std::vector<CliffordGate> gs;
            for (const auto& e : sorted_by_slot(circuit)) gs.push_back(e.gate);
            return gs;
        }());
        // measure every pair ancilla, then fix members by prefix parity
        std::vector<int> outcomes;
        for (int i = 0; i + 1 < n; i++) {
            int forced = (pattern == 1 && (i % 2 == 0)) ? -1 : +1;
            outcomes.push_back(t.measure(PauliString::single(total, n + i, 'Z'), forced).sign);
        }
        bool parity = false;
        for (int i = 0; i + 1 < n; i++) {
            parity ^= outcomes[i] < 0;
            if (parity) t.apply_pauli(PauliString::single(total, i + 1, 'X'));
        }
        auto check = [&](bool c, const std::string& s) {
            if (!c) {
                rep.ok = false;
                rep.failures.push_back(s);
            }
        };
        for (int i = 0; i + 1 < n; i++) {
            PauliString zz(total);
            zz.set_z(i, true);
            zz.set_z(i + 1, true);
            check(t.contains(zz), "ZZ stabilizer on members " + std::to_string(i));
        }
        PauliString all_x(total);
        for (int i = 0; i < n; i++) all_x.set_x(i, true);
        check(t.contains(all_x), "X^n stabilizer is +1 (even number of |->)");

        // a single Z flips the X^n parity
        t.apply_pauli(PauliString::single(total, n / 2, 'Z'));
        PauliString minus_all_x = all_x;
        minus_all_x.set_phase_pow(2);
        check(t.contains(minus_all_x), "single Z flips X^n to -1");
    }

    rep.cycles_linear = code_distance;
    rep.cycles_circular = (code_distance + 1) / 2;
    return rep;
}

ResourceReport resource_formulas(int d) {
    if (d < 3) throw std::invalid_argument("d >= 3");
    ResourceReport r;
    r.d = d;
    r.planar_qubits_per_logical = (long long)(4 * d - 2) * (4 * d - 2);
    r.deformation_qubits_per_logical = (25LL * d * d + 170 * d + 289) / 4;
    r.rotated_qubits_per_logical = 2LL * d * d - 1;
    r.superstabilizer_steps = 4LL * d + 5;
    r.superstabilizer_steps_improved = 4LL * d + 9;
    r.braiding_cnot_steps = 32LL * d;
    r.deformation_cnot_steps = 4LL * d * d + 9 * d;
    r.planar_cnot_steps = 24LL * d;
    r.d_opt = d + 3;
    r.d_short = d + 2;
    r.d_eff = d;
    r.redundant_logical_ops_num = (long long)d * d * d - 11LL * d * d + 35 * d - 25;
    r.redundant_integral = r.redundant_logical_ops_num % 8 == 0;
    r.redundant_logical_ops = r.redundant_integral ? r.redundant_logical_ops_num / 8 : -1;
    r.cat_cycles_linear = d;
    r.cat_cycles_circular = (d + 1) / 2;
    return r;
}

} // namespace defectq
