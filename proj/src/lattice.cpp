#include "defectq/lattice.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>

#include "json.hpp"

namespace defectq {

std::vector<int> Lattice::neighbors(int i) const {
    std::vector<int> out;
    int r = row(i), c = col(i);
    const int dr[4] = {-1, 0, 0, 1};
    const int dc[4] = {0, -1, 1, 0};
    for (int k = 0; k < 4; k++)
        if (in_bounds(r + dr[k], c + dc[k])) out.push_back(idx(r + dr[k], c + dc[k]));
    return out;
}

int Lattice::count(Role r, Status s) const {
    int n = 0;
    for (int i = 0; i < sites(); i++)
        if (role(i) == r && status[i] == s) n++;
    return n;
}

std::string Lattice::to_json() const {
    nlohmann::json j;
    j["distance"] = distance;
    j["grid_rows"] = side();
    j["seed"] = seed;
    nlohmann::json sites = nlohmann::json::array();
    for (int i = 0; i < this->sites(); i++) {
        sites.push_back({{"x", col(i)},
                         {"y", row(i)},
                         {"role", role(i) == Role::Data ? "data" : "ancilla"},
                         {"status", working(i) ? "working" : "faulty"}});
    }
    j["sites"] = sites;
    return j.dump(2);
}

Lattice Lattice::from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    Lattice l;
    l.distance = j.at("distance").get<int>();
    l.seed = j.value("seed", uint64_t(0));
    l.status.assign(l.sites(), Status::Working);
    for (const auto& s : j.at("sites")) {
        int i = l.idx(s.at("y").get<int>(), s.at("x").get<int>());
        std::string role = s.at("role").get<std::string>();
        if ((role == "data") != l.data_site(i))
            throw std::invalid_argument("site role does not match the checkerboard layout");
        if (s.at("status").get<std::string>() == "faulty") l.status[i] = Status::Faulty;
    }
    return l;
}

Lattice generate_perfect(int d) {
    if (d < 3 || d % 2 == 0) throw std::invalid_argument("distance must be odd and >= 3");
    Lattice l;
    l.distance = d;
    l.status.assign(l.sites(), Status::Working);
    return l;
}

Lattice apply_yield(const Lattice& l, double y, uint64_t seed) {
    if (y <= 0.0 || y > 1.0) throw std::invalid_argument("yield must be in (0, 1]");
    Lattice out = l;
    out.seed = seed;
    Rng rng(Rng::derive(seed, 0x1a77));
    for (int i = 0; i < out.sites(); i++)
        if (rng.bernoulli(1.0 - y)) out.status[i] = Status::Faulty;
    return out;
}

namespace {

struct Plaquette {
    StabKind kind;
    int ancilla;              // home ancilla site (may be faulty)
    std::vector<int> members; // all data neighbors, faulty included at first
    bool removed = false;
};

int find_root(std::vector<int>& up, int i) {
    while (up[i] != i) {
        up[i] = up[up[i]];
        i = up[i];
    }
    return i;
}

} // namespace

StabilizerLayout reconfigure(const Lattice& l) {
    const int side = l.side();
    StabilizerLayout layout;
    layout.distance = l.distance;

    std::vector<Plaquette> plaq;
    std::map<int, int> by_ancilla;
    for (int r = 0; r < side; r++)
        for (int c = 0; c < side; c++) {
            if ((r + c) % 2 == 0) continue;
            Plaquette p;
            p.kind = (r % 2 == 1) ? StabKind::Z : StabKind::X;
            p.ancilla = l.idx(r, c);
            for (int n : l.neighbors(p.ancilla)) p.members.push_back(n);
            by_ancilla[p.ancilla] = int(plaq.size());
            plaq.push_back(std::move(p));
        }

    // Boundary sets per stabilizer type. Z stabilizers terminate on the
    // north/south lattice edges, X stabilizers on west/east. Removing an
    // unmergeable boundary stabilizer advances the corresponding boundary.
    std::set<int> bound_n, bound_s, bound_w, bound_e;
    for (int c = 0; c < side; c += 2) {
        bound_n.insert(l.idx(0, c));
        bound_s.insert(l.idx(side - 1, c));
    }
    for (int r = 0; r < side; r += 2) {
        bound_w.insert(l.idx(r, 0));
        bound_e.insert(l.idx(r, side - 1));
    }

    auto stabs_containing = [&](int data_site, StabKind k) {
        std::vector<int> out;
        for (int n : l.neighbors(data_site)) {
            auto it = by_ancilla.find(n);
            if (it == by_ancilla.end()) continue;
            const auto& p = plaq[it->second];
            if (p.kind == k && !p.removed) out.push_back(it->second);
        }
        return out;
    };

    // removal cascade, applied before any merging
    auto run_removal = [&](StabKind k, std::set<int>& lo, std::set<int>& hi, int& removed) {
        bool changed = true;
        while (changed) {
            changed = false;
            for (int i = 0; i < l.sites(); i++) {
                if (!l.data_site(i) || l.working(i)) continue;
                if (!lo.count(i) && !hi.count(i)) continue;
                auto owners = stabs_containing(i, k);
                if (owners.size() != 1) continue;
                Plaquette& p = plaq[owners[0]];
                bool in_lo = lo.count(i) > 0, in_hi = hi.count(i) > 0;
                p.removed = true;
                removed++;
                for (int m : p.members) {
                    if (in_lo) lo.insert(m);
                    if (in_hi) hi.insert(m);
                }
                changed = true;
            }
        }
    };
    run_removal(StabKind::Z, bound_n, bound_s, layout.removed_z);
    run_removal(StabKind::X, bound_w, bound_e, layout.removed_x);

    for (int i : bound_n)
        if (bound_s.count(i)) layout.boundaries_collided = true;
    for (int i : bound_w)
        if (bound_e.count(i)) layout.boundaries_collided = true;

    // transitive merging across every remaining faulty data qubit
    std::vector<int> up(plaq.size());
    for (size_t i = 0; i < up.size(); i++) up[i] = int(i);
    for (int i = 0; i < l.sites(); i++) {
        if (!l.data_site(i) || l.working(i)) continue;
        for (StabKind k : {StabKind::Z, StabKind::X}) {
            auto owners = stabs_containing(i, k);
            for (size_t j = 1; j < owners.size(); j++)
                up[find_root(up, owners[j])] = find_root(up, owners[0]);
        }
    }

    std::map<int, StabilizerSpec> merged;
    std::map<int, int> count_from;
    for (size_t i = 0; i < plaq.size(); i++) {
        if (plaq[i].removed) continue;
        int root = find_root(up, int(i));
        count_from[root]++;
        auto& spec = merged[root];
        spec.kind = plaq[i].kind;
        if (l.working(plaq[i].ancilla)) spec.ancillas.push_back(plaq[i].ancilla);
        for (int m : plaq[i].members)
            if (l.working(m)) spec.members.push_back(m);
    }
    for (auto& [root, spec] : merged) {
        std::sort(spec.members.begin(), spec.members.end());
        spec.members.erase(std::unique(spec.members.begin(), spec.members.end()),
                           spec.members.end());
        std::sort(spec.ancillas.begin(), spec.ancillas.end());
        spec.merged_from = count_from[root];
        if (spec.members.empty()) continue; // fully swallowed by faults
        spec.id = int(layout.stabilizers.size());
        layout.stabilizers.push_back(spec);
    }

    auto keep_working = [&](const std::set<int>& s) {
        std::vector<int> out;
        for (int i : s)
            if (l.working(i) && l.data_site(i)) out.push_back(i);
        return out;
    };
    layout.north = keep_working(bound_n);
    layout.south = keep_working(bound_s);
    layout.west = keep_working(bound_w);
    layout.east = keep_working(bound_e);
    return layout;
}

std::vector<const StabilizerSpec*> StabilizerLayout::of_kind(StabKind k) const {
    std::vector<const StabilizerSpec*> out;
    for (const auto& s : stabilizers)
        if (s.kind == k) out.push_back(&s);
    return out;
}

namespace {

struct PathResult {
    int hops;               // boundary-to-boundary edge count, -1 if none
    std::vector<int> chain; // data sites realizing the crossing
};

// Shortest boundary-to-boundary path over same-kind stabilizers, where an
// edge is a shared working data qubit and a superunit counts as one node.
PathResult stabilizer_graph_distance(const Lattice& l, const StabilizerLayout& layout,
                                     StabKind kind, const std::vector<int>& lo,
                                     const std::vector<int>& hi) {
    auto stabs = layout.of_kind(kind);
    int n = int(stabs.size());
    std::map<int, std::vector<int>> member_of;
    for (int i = 0; i < n; i++)
        for (int m : stabs[i]->members) member_of[m].push_back(i);

    std::set<int> lo_set(lo.begin(), lo.end()), hi_set(hi.begin(), hi.end());
    for (int site : lo)
        if (hi_set.count(site)) return {0, {}};

    const int SRC = n, DST = n + 1;
    std::vector<std::vector<std::pair<int, int>>> adj(n + 2);
    for (const auto& [site, owners] : member_of) {
        for (size_t a = 0; a < owners.size(); a++)
            for (size_t b = a + 1; b < owners.size(); b++) {
                adj[owners[a]].push_back({owners[b], site});
                adj[owners[b]].push_back({owners[a], site});
            }
        if (lo_set.count(site))
            for (int o : owners) adj[SRC].push_back({o, site});
        if (hi_set.count(site))
            for (int o : owners) adj[o].push_back({DST, site});
    }

    std::vector<int> dist(n + 2, -1), prev(n + 2, -1), via(n + 2, -1);
    std::deque<int> q;
    dist[SRC] = 0;
    q.push_back(SRC);
    while (!q.empty()) {
        int u = q.front();
        q.pop_front();
        for (auto [v, site] : adj[u]) {
            if (dist[v] >= 0) continue;
            dist[v] = dist[u] + 1;
            prev[v] = u;
            via[v] = site;
            q.push_back(v);
        }
    }
    if (dist[DST] < 0) return {-1, {}};
    PathResult res;
    res.hops = dist[DST];
    for (int v = DST; v != SRC; v = prev[v]) res.chain.push_back(via[v]);
    std::reverse(res.chain.begin(), res.chain.end());
    return res;
}

} // namespace

Encodability encodability_check(const Lattice& l, const StabilizerLayout& layout) {
    if (layout.boundaries_collided) return {false, 0, 0};
    auto px = stabilizer_graph_distance(l, layout, StabKind::Z, layout.north, layout.south);
    auto pz = stabilizer_graph_distance(l, layout, StabKind::X, layout.west, layout.east);
    int dx = px.hops < 0 ? 0 : px.hops;
    int dz = pz.hops < 0 ? 0 : pz.hops;
    return {dx >= 1 && dz >= 1, dx, dz};
}

LogicalOps logical_operators(const Lattice& l, const StabilizerLayout& layout) {
    auto pz = stabilizer_graph_distance(l, layout, StabKind::X, layout.west, layout.east);
    LogicalOps ops;
    ops.logical_z = pz.chain;
    std::set<int> zset(pz.chain.begin(), pz.chain.end());

    // The two chains must share an odd number of sites; with junk degrees
    // of freedom from double merges a particular crossing can come out
    // even, so scan north entry points until the overlap is odd.
    auto overlap_odd = [&](const std::vector<int>& chain) {
        int k = 0;
        for (int q : chain) k += zset.count(q);
        return k % 2 == 1;
    };
    auto px = stabilizer_graph_distance(l, layout, StabKind::Z, layout.north, layout.south);
    if (overlap_odd(px.chain)) {
        ops.logical_x = px.chain;
        return ops;
    }
    for (int entry : layout.north) {
        auto alt = stabilizer_graph_distance(l, layout, StabKind::Z, {entry}, layout.south);
        if (alt.hops > 0 && overlap_odd(alt.chain)) {
            ops.logical_x = alt.chain;
            return ops;
        }
    }
    // fall back on the unconstrained chain; callers assert the pairing
    ops.logical_x = px.chain;
    return ops;
}

} // namespace defectq
