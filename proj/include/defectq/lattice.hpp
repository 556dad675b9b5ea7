#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "defectq/rng.hpp"

namespace defectq {

enum class Role { Data, Ancilla };
enum class Status { Working, Faulty };
enum class StabKind { Z, X };

// Planar-code lattice on a (2d-1)x(2d-1) grid. Data qubits sit on sites
// with even row+col, ancillas on odd. Z-stabilizer ancillas occupy
// (odd row, even col), X-stabilizer ancillas (even row, odd col); the west
// and east boundaries terminate the logical Z operator, north and south
// the logical X operator.
struct Lattice {
    int distance = 0;
    uint64_t seed = 0;
    std::vector<Status> status; // indexed row * side + col

    int side() const { return 2 * distance - 1; }
    int sites() const { return side() * side(); }
    int idx(int r, int c) const { return r * side() + c; }
    int row(int i) const { return i / side(); }
    int col(int i) const { return i % side(); }
    bool in_bounds(int r, int c) const { return r >= 0 && c >= 0 && r < side() && c < side(); }
    Role role(int i) const {
        return ((row(i) + col(i)) % 2 == 0) ? Role::Data : Role::Ancilla;
    }
    bool working(int i) const { return status[i] == Status::Working; }
    bool data_site(int i) const { return role(i) == Role::Data; }
    std::vector<int> neighbors(int i) const;

    int count(Role r, Status s) const;

    std::string to_json() const;
    static Lattice from_json(const std::string& text);
};

Lattice generate_perfect(int d);
Lattice apply_yield(const Lattice& l, double y, uint64_t seed);

struct StabilizerSpec {
    int id = 0;
    StabKind kind = StabKind::Z;
    std::vector<int> members;  // working data sites
    std::vector<int> ancillas; // working ancilla sites of the merged plaquettes
    int merged_from = 1;
};

struct StabilizerLayout {
    int distance = 0;
    std::vector<StabilizerSpec> stabilizers;
    // boundary data sites after removal-driven advancement, per logical side
    std::vector<int> north, south, west, east;
    int removed_z = 0, removed_x = 0;
    bool boundaries_collided = false; // opposite boundaries touched: distance 0
    // removal applied before merging; recorded for reproducibility
    std::string reconfiguration_order = "boundary-removal-then-merge";

    std::vector<const StabilizerSpec*> of_kind(StabKind k) const;
};

StabilizerLayout reconfigure(const Lattice& l);

struct Encodability {
    bool encodable;
    int reduced_d_x; // minimal X-logical weight: north-south hops over Z stabilizers
    int reduced_d_z; // minimal Z-logical weight: west-east hops over X stabilizers
};
Encodability encodability_check(const Lattice& l, const StabilizerLayout& layout);

// Representative minimal logical operator supports (data sites), derived
// from the same boundary-to-boundary shortest paths.
struct LogicalOps {
    std::vector<int> logical_x; // crosses north-south
    std::vector<int> logical_z; // crosses west-east
};
LogicalOps logical_operators(const Lattice& l, const StabilizerLayout& layout);

} // namespace defectq
