#include <bit>
#include <set>

#include "defectq/codes.hpp"
#include "doctest.h"

using namespace defectq;

namespace {

PauliString on(int n, char p, std::initializer_list<int> qubits) {
    PauliString out(n);
    for (int q : qubits) {
        if (p == 'X' || p == 'Y') out.set_x(q, true);
        if (p == 'Z' || p == 'Y') out.set_z(q, true);
    }
    return out;
}

// brute-force code distance over the X-type (or Z-type) logical coset
int css_distance(const CodeDef& c, char type) {
    StabilizerTableau group(c.n);
    for (const auto& g : c.generators) group.add_generator(g);
    int best = c.n + 1;
    for (uint32_t mask = 1; mask < (1u << c.n); mask++) {
        PauliString p(c.n);
        int w = 0;
        for (int q = 0; q < c.n; q++)
            if ((mask >> q) & 1) {
                if (type == 'X')
                    p.set_x(q, true);
                else
                    p.set_z(q, true);
                w++;
            }
        if (w >= best) continue;
        bool commutes = true;
        for (const auto& g : c.generators) commutes &= p.commutes_with(g);
        if (!commutes) continue;
        if (group.contains_up_to_sign(p)) continue;
        best = w;
    }
    return best;
}

} // namespace

TEST_CASE("steane code structure and encoder") {
    const auto& c = steane_code();
    CHECK(c.sanity());
    CHECK(c.n == 7);
    CHECK(c.generators.size() == 6);
    CHECK(c.encoding_kq() == 42);

    // encoder output stabilizes all generators plus the input logical
    auto t0 = encode_tableau(c, 'Z');
    for (const auto& g : c.generators) CHECK(t0.contains(g));
    CHECK(t0.contains(c.logical_z));
    auto t1 = encode_tableau(c, 'X');
    for (const auto& g : c.generators) CHECK(t1.contains(g));
    CHECK(t1.contains(c.logical_x));
    CHECK_FALSE(c.logical_x.commutes_with(c.logical_z));

    // Steane structure up to qubit relabeling: the X supports form the
    // [7,3] simplex code (every nonzero combination has weight 4) and the
    // Z supports span the same classical code (self-dual CSS).
    StabilizerTableau group(7);
    for (const auto& g : c.generators) group.add_generator(g);
    std::vector<uint32_t> xsup, zsup;
    for (const auto& g : c.generators) {
        uint32_t m = 0;
        bool is_x = false;
        for (int q = 0; q < 7; q++) {
            if (g.x_bit(q)) {
                m |= 1u << q;
                is_x = true;
            }
            if (g.z_bit(q)) m |= 1u << q;
        }
        (is_x ? xsup : zsup).push_back(m);
    }
    REQUIRE(xsup.size() == 3);
    REQUIRE(zsup.size() == 3);
    std::set<uint32_t> xwords, zwords;
    for (int c3 = 1; c3 < 8; c3++) {
        uint32_t xw = 0, zw = 0;
        for (int b = 0; b < 3; b++)
            if ((c3 >> b) & 1) {
                xw ^= xsup[b];
                zw ^= zsup[b];
            }
        CHECK(std::popcount(xw) == 4);
        CHECK(std::popcount(zw) == 4);
        xwords.insert(xw);
        zwords.insert(zw);
    }
    CHECK(xwords == zwords);

    CHECK(css_distance(c, 'X') == 3);
    CHECK(css_distance(c, 'Z') == 3);

    // pairwise products of generators stay in the group
    for (size_t i = 0; i < c.generators.size(); i++)
        for (size_t j = i + 1; j < c.generators.size(); j++)
            CHECK(group.contains(c.generators[i] * c.generators[j]));
}

TEST_CASE("surface d3 code structure and encoder") {
    const auto& c = surface_d3_code();
    CHECK(c.sanity());
    CHECK(c.n == 13);
    CHECK(c.generators.size() == 12); // rank check: n - #generators = 1
    CHECK(c.encoding_kq() == 250);

    auto t0 = encode_tableau(c, 'Z');
    for (const auto& g : c.generators) CHECK(t0.contains(g));
    CHECK(t0.contains(c.logical_z));
    auto t1 = encode_tableau(c, 'X');
    CHECK(t1.contains(c.logical_x));

    CHECK(css_distance(c, 'X') == 3);
    CHECK(css_distance(c, 'Z') == 3);
}

TEST_CASE("deformation patch counting") {
    auto pc = deformation_patch_counts();
    CHECK(pc.data_qubits == 48);
    CHECK(pc.z_stabilizers == 19);
    CHECK(pc.x_stabilizers_independent == 28);
    CHECK(pc.degrees_of_freedom == 1);

    auto t = deformation_patch_tableau();
    CHECK(t.mutually_commuting());
    CHECK(t.independent());
    // the skipped vertex operator is the product of all the others
    PauliString all(49);
    bool first = true;
    for (const auto& g : t.generators()) {
        bool xtype = true;
        for (int q = 0; q < 49; q++) xtype &= !g.z_bit(q);
        if (!xtype) continue;
        if (first) {
            all = g;
            first = false;
        } else {
            all *= g;
        }
    }
    // product of the 28 independent vertex operators = the omitted vertex
    CHECK(all.weight() >= 2);
    CHECK(t.contains(all));
}

TEST_CASE("state injection trace") {
    auto rep = verify_state_injection_trace();
    for (const auto& f : rep.failures) MESSAGE(f);
    CHECK(rep.ok);
}

TEST_CASE("lattice surgery cnot trace") {
    auto rep = verify_lattice_surgery_cnot_trace();
    for (const auto& f : rep.failures) MESSAGE(f);
    CHECK(rep.ok);
}

TEST_CASE("zz teleportation trace") {
    auto rep = verify_zz_teleportation_trace();
    for (const auto& f : rep.failures) MESSAGE(f);
    CHECK(rep.ok);
}

TEST_CASE("cat state stabilizers and cycle counts") {
    auto rep = cat_state_check(3, 5);
    for (const auto& f : rep.failures) MESSAGE(f);
    CHECK(rep.ok);
    CHECK(rep.depth == 5);
    CHECK(rep.cycles_linear == 5);
    CHECK(rep.cycles_circular == 3);

    auto rep8 = cat_state_check(8, 9);
    CHECK(rep8.ok);
    CHECK(rep8.depth == 5); // constant depth regardless of length
    CHECK(rep8.cycles_circular == 5);
}

TEST_CASE("resource formulas") {
    auto r3 = resource_formulas(3);
    CHECK(r3.planar_qubits_per_logical == 100);
    CHECK(r3.deformation_qubits_per_logical == 256);
    CHECK(r3.rotated_qubits_per_logical == 17);

    auto r5 = resource_formulas(5);
    CHECK(r5.braiding_cnot_steps == 160);
    CHECK(r5.deformation_cnot_steps == 145);
    CHECK(r5.superstabilizer_steps == 25);
    CHECK(r5.superstabilizer_steps_improved == 29);
    CHECK(r5.d_opt == 8);
    CHECK(r5.d_short == 7);
    CHECK(r5.redundant_integral);
    CHECK(r5.redundant_logical_ops == 0);

    CHECK(resource_formulas(7).redundant_logical_ops == 3);
    CHECK(resource_formulas(19).redundant_logical_ops == 441);
    CHECK(resource_formulas(29).redundant_logical_ops == 2016);
    for (int d = 5; d <= 29; d += 2) CHECK(resource_formulas(d).redundant_integral);

    // closed forms expand correctly: (5d+17)^2 = 25d^2+170d+289, etc.
    for (int d = 3; d <= 31; d += 2) {
        auto r = resource_formulas(d);
        CHECK(r.deformation_qubits_per_logical * 4 == (5LL * d + 17) * (5LL * d + 17));
        CHECK(r.planar_qubits_per_logical == 16LL * d * d - 16 * d + 4);
    }

    // qubit ratio at d_e = 25: about half the planar requirement
    auto r25 = resource_formulas(25);
    CHECK(r25.deformation_qubits_per_logical == 5041);
    CHECK(r25.planar_qubits_per_logical == 9604);
}
