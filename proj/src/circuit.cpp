#include "defectq/circuit.hpp"

#include <algorithm>
#include <functional>
#include <deque>
#include <limits>
#include <map>
#include <set>

#include "json.hpp"

namespace defectq {

namespace {

// BFS over working devices; deterministic tie-break by site index.
std::vector<int> bfs_path(const Lattice& l, int from, int to) {
    if (from == to) return {from};
    std::vector<int> prev(l.sites(), -2);
    std::deque<int> q;
    prev[from] = -1;
    q.push_back(from);
    while (!q.empty()) {
        int u = q.front();
        q.pop_front();
        auto nb = l.neighbors(u);
        std::sort(nb.begin(), nb.end());
        for (int v : nb) {
            if (!l.working(v) || prev[v] != -2) continue;
            prev[v] = u;
            if (v == to) {
                std::vector<int> path = {v};
                for (int w = u; w != -1; w = prev[w]) path.push_back(w);
                std::reverse(path.begin(), path.end());
                return path;
            }
            q.push_back(v);
        }
    }
    return {};
}

std::vector<int> bfs_dist_from(const Lattice& l, int from) {
    std::vector<int> dist(l.sites(), -1);
    std::deque<int> q;
    dist[from] = 0;
    q.push_back(from);
    while (!q.empty()) {
        int u = q.front();
        q.pop_front();
        for (int v : l.neighbors(u)) {
            if (!l.working(v) || dist[v] >= 0) continue;
            dist[v] = dist[u] + 1;
            q.push_back(v);
        }
    }
    return dist;
}

void enumerate_combinations(int pool, int k, std::vector<int>& cur,
                            const std::function<void(const std::vector<int>&)>& fn, int start) {
    if (int(cur.size()) == k) {
        fn(cur);
        return;
    }
    for (int i = start; i < pool; i++) {
        cur.push_back(i);
        enumerate_combinations(pool, k, cur, fn, i + 1);
        cur.pop_back();
    }
}

} // namespace

int tsp_held_karp(const std::vector<std::vector<int>>& dist, std::vector<int>& order) {
    int n = int(dist.size());
    order.clear();
    if (n == 1) {
        order = {0};
        return 0;
    }
    const int INF = std::numeric_limits<int>::max() / 4;
    std::vector<std::vector<int>> dp(size_t(1) << n, std::vector<int>(n, INF));
    std::vector<std::vector<int>> par(size_t(1) << n, std::vector<int>(n, -1));
    for (int i = 0; i < n; i++) dp[1u << i][i] = 0; // open path, free start
    for (uint32_t mask = 1; mask < (1u << n); mask++)
        for (int last = 0; last < n; last++) {
            if (!((mask >> last) & 1) || dp[mask][last] >= INF) continue;
            for (int nxt = 0; nxt < n; nxt++) {
                if ((mask >> nxt) & 1) continue;
                if (dist[last][nxt] < 0) continue; // unreachable
                uint32_t m2 = mask | (1u << nxt);
                int cost = dp[mask][last] + dist[last][nxt];
                if (cost < dp[m2][nxt]) {
                    dp[m2][nxt] = cost;
                    par[m2][nxt] = last;
                }
            }
        }
    uint32_t full = (1u << n) - 1;
    int best = INF, best_last = -1;
    for (int i = 0; i < n; i++)
        if (dp[full][i] < best) {
            best = dp[full][i];
            best_last = i;
        }
    if (best >= INF) return -1;
    uint32_t mask = full;
    for (int cur = best_last; cur != -1;) {
        order.push_back(cur);
        int p = par[mask][cur];
        mask &= ~(1u << cur);
        cur = p;
    }
    std::reverse(order.begin(), order.end());
    return best;
}

int tsp_brute_force(const std::vector<std::vector<int>>& dist) {
    int n = int(dist.size());
    std::vector<int> perm(n);
    for (int i = 0; i < n; i++) perm[i] = i;
    int best = std::numeric_limits<int>::max();
    do {
        int cost = 0;
        bool ok = true;
        for (int i = 0; i + 1 < n; i++) {
            if (dist[perm[i]][perm[i + 1]] < 0) {
                ok = false;
                break;
            }
            cost += dist[perm[i]][perm[i + 1]];
        }
        if (ok) best = std::min(best, cost);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

namespace {

// nearest-neighbor start plus 2-opt, for covering sets past the exact bound
int tsp_heuristic(const std::vector<std::vector<int>>& dist, std::vector<int>& order) {
    int n = int(dist.size());
    order.clear();
    std::vector<bool> used(n, false);
    order.push_back(0);
    used[0] = true;
    while (int(order.size()) < n) {
        int best = -1, bd = std::numeric_limits<int>::max();
        for (int i = 0; i < n; i++)
            if (!used[i] && dist[order.back()][i] >= 0 && dist[order.back()][i] < bd) {
                bd = dist[order.back()][i];
                best = i;
            }
        if (best < 0) return -1;
        used[best] = true;
        order.push_back(best);
    }
    auto cost_of = [&](const std::vector<int>& o) {
        int c = 0;
        for (size_t i = 0; i + 1 < o.size(); i++) c += dist[o[i]][o[i + 1]];
        return c;
    };
    bool improved = true;
    while (improved) {
        improved = false;
        for (int i = 0; i < n - 1; i++)
            for (int j = i + 1; j < n; j++) {
                auto alt = order;
                std::reverse(alt.begin() + i, alt.begin() + j + 1);
                if (cost_of(alt) < cost_of(order)) {
                    order = alt;
                    improved = true;
                }
            }
    }
    return cost_of(order);
}

struct CoverSearch {
    std::vector<int> path_ancillas; // best covering set in visit order
    int move_cost = -1;
    bool heuristic = false;
};

CoverSearch find_cover(const Lattice& l, const StabilizerSpec& spec) {
    // candidate ancillas: working ancilla devices neighboring any member
    std::set<int> pool_set;
    for (int m : spec.members)
        for (int n : l.neighbors(m))
            if (!l.data_site(n) && l.working(n)) pool_set.insert(n);
    std::vector<int> pool(pool_set.begin(), pool_set.end());

    std::map<int, uint64_t> covers; // ancilla -> member bitmask
    for (size_t mi = 0; mi < spec.members.size(); mi++)
        for (int n : l.neighbors(spec.members[mi]))
            if (pool_set.count(n)) covers[n] |= uint64_t(1) << mi;
    uint64_t all = spec.members.size() >= 64 ? ~uint64_t(0)
                                             : (uint64_t(1) << spec.members.size()) - 1;

    std::map<std::pair<int, int>, int> pair_dist;
    auto dist_between = [&](int a, int b) {
        auto key = std::minmax(a, b);
        auto it = pair_dist.find(key);
        if (it != pair_dist.end()) return it->second;
        auto d = bfs_dist_from(l, key.first);
        for (int other : pool) pair_dist[std::minmax(key.first, other)] = d[other];
        return d[key.second];
    };

    CoverSearch best;
    for (int k = 1; k <= int(pool.size()); k++) {
        std::vector<int> cur;
        enumerate_combinations(
            int(pool.size()), k, cur,
            [&](const std::vector<int>& pick) {
                uint64_t got = 0;
                for (int i : pick) got |= covers[pool[i]];
                if (got != all) return;
                std::vector<std::vector<int>> d(k, std::vector<int>(k, 0));
                for (int a = 0; a < k; a++)
                    for (int b = a + 1; b < k; b++)
                        d[a][b] = d[b][a] = dist_between(pool[pick[a]], pool[pick[b]]);
                std::vector<int> order;
                bool heur = k > 12;
                int cost = heur ? tsp_heuristic(d, order) : tsp_held_karp(d, order);
                if (cost < 0) return;
                if (best.move_cost < 0 || cost < best.move_cost) {
                    best.move_cost = cost;
                    best.heuristic = heur;
                    best.path_ancillas.clear();
                    for (int o : order) best.path_ancillas.push_back(pool[pick[o]]);
                }
            },
            0);
        if (best.move_cost >= 0) break; // smallest covering size wins
    }
    return best;
}

} // namespace

StabilizerCircuit compose_stabilizer_circuit(const Lattice& l, const StabilizerLayout& layout,
                                             const StabilizerSpec& spec) {
    (void)layout;
    StabilizerCircuit c;
    c.stab_id = spec.id;
    c.kind = spec.kind;
    c.members = spec.members;
    if (spec.members.empty()) throw UncoverableStabilizer("stabilizer has no members");

    CoverSearch cover = find_cover(l, spec);
    if (cover.move_cost < 0)
        throw UncoverableStabilizer("no working ancilla set covers stabilizer " +
                                    std::to_string(spec.id));
    c.ancilla_path = cover.path_ancillas;
    c.heuristic_tsp = cover.heuristic;

    // expand the covering-set traversal into a device route
    std::vector<int> route = {c.ancilla_path[0]};
    for (size_t i = 0; i + 1 < c.ancilla_path.size(); i++) {
        auto hop = bfs_path(l, c.ancilla_path[i], c.ancilla_path[i + 1]);
        route.insert(route.end(), hop.begin() + 1, hop.end());
    }
    c.device_path = route;

    // Algorithm: INIT the ancilla variable, travel the route gathering from
    // adjacent not-yet-gathered members at each ancilla device; SWAPs move
    // the variable forward and return displaced data variables home.
    std::vector<CliffordGate> ops;
    ops.push_back(CliffordGate::init_z(route[0]));
    if (spec.kind == StabKind::X) ops.push_back(CliffordGate::h(route[0]));
    std::set<int> gathered;
    std::set<int> member_set(spec.members.begin(), spec.members.end());
    // Gather order within a stop follows a fixed direction pattern per
    // stabilizer type (Z: N,W,S,E; X: W,N,E,S). The two patterns interleave
    // without collisions when every stabilizer starts in step, which is what
    // keeps the perfect lattice on its eight-step cycle, and they satisfy
    // the shared-qubit ordering rule between diagonal neighbors.
    auto direction_rank = [&](int from, int to) {
        int diff = to - from;
        const int side = l.side();
        if (spec.kind == StabKind::Z) {
            if (diff == -side) return 0; // N
            if (diff == -1) return 1;    // W
            if (diff == side) return 2;  // S
            return 3;                    // E
        }
        if (diff == -1) return 0;    // W
        if (diff == -side) return 1; // N
        if (diff == 1) return 2;     // E
        return 3;                    // S
    };
    for (size_t i = 0; i < route.size(); i++) {
        int q = route[i];
        if (!l.data_site(q)) {
            auto nb = l.neighbors(q);
            std::sort(nb.begin(), nb.end(), [&](int a, int b) {
                return direction_rank(q, a) < direction_rank(q, b);
            });
            for (int d : nb) {
                if (!member_set.count(d) || gathered.count(d)) continue;
                gathered.insert(d);
                if (spec.kind == StabKind::Z)
                    ops.push_back(CliffordGate::cnot(d, q));
                else
                    ops.push_back(CliffordGate::cnot(q, d));
            }
        }
        if (i + 1 < route.size()) ops.push_back(CliffordGate::swap(q, route[i + 1]));
        if (l.data_site(q) && i > 0) ops.push_back(CliffordGate::swap(route[i - 1], q));
    }
    if (gathered.size() != spec.members.size())
        throw UncoverableStabilizer("route failed to gather every member");
    if (spec.kind == StabKind::X) ops.push_back(CliffordGate::h(route.back()));
    ops.push_back(CliffordGate::measure_z(route.back()));

    if (route.size() == 1) {
        // Stationary circuit: pin the gathers to their pattern slots even
        // when boundary members are missing, so every stabilizer on the
        // lattice stays in step with its neighbors.
        const int gather_base = spec.kind == StabKind::Z ? 0 : 1;
        const int meas_slot = spec.kind == StabKind::Z ? 5 : 7;
        for (const auto& g : ops) {
            int slot = 0;
            switch (g.kind) {
                case GateKind::InitZ: slot = 0; break;
                case GateKind::H: slot = c.events.size() <= 1 ? 1 : meas_slot - 1; break;
                case GateKind::Cnot: {
                    int data = spec.kind == StabKind::Z ? g.q0 : g.q1;
                    slot = gather_base + 1 + direction_rank(route[0], data);
                    break;
                }
                case GateKind::MeasureZ: slot = meas_slot; break;
                default: break;
            }
            c.events.push_back({g, slot});
        }
    } else {
        // travelling circuit: one operation per step, in emission order
        for (size_t k = 0; k < ops.size(); k++) c.events.push_back({ops[k], int(k)});
    }
    c.depth = circuit_depth(c.events);
    return c;
}

std::vector<StabilizerCircuit> compose_all(const Lattice& l, const StabilizerLayout& layout) {
    std::vector<StabilizerCircuit> out;
    for (const auto& s : layout.stabilizers) out.push_back(compose_stabilizer_circuit(l, layout, s));
    return out;
}

long long circuit_kq(const StabilizerCircuit& c) {
    if (c.events.empty()) return 0;
    return (long long)circuit_qubits(c.events).size() * c.depth;
}

long long circuit_kdq(const StabilizerCircuit& c, const Lattice& l) {
    if (c.events.empty()) return 0;
    long long dq = 0;
    for (int q : circuit_qubits(c.events))
        if (l.data_site(q)) dq++;
    return dq * c.depth;
}

std::string circuit_to_json(const StabilizerCircuit& c) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& e : sorted_by_slot(c.events)) {
        const char* name = "";
        switch (e.gate.kind) {
            case GateKind::InitZ: name = "INIT"; break;
            case GateKind::H: name = "H"; break;
            case GateKind::Cnot: name = "CNOT"; break;
            case GateKind::Swap: name = "SWAP"; break;
            case GateKind::MeasureZ: name = "MEASURE"; break;
            case GateKind::Identity: name = "I"; break;
        }
        nlohmann::json qubits = nlohmann::json::array();
        qubits.push_back(e.gate.q0);
        if (e.gate.two_qubit()) qubits.push_back(e.gate.q1);
        j.push_back({{"slot", e.slot}, {"gate", name}, {"qubits", qubits}});
    }
    return j.dump(2);
}

namespace {

nlohmann::json gate_json(const CliffordGate& g) {
    const char* name = "";
    switch (g.kind) {
        case GateKind::InitZ: name = "INIT"; break;
        case GateKind::H: name = "H"; break;
        case GateKind::Cnot: name = "CNOT"; break;
        case GateKind::Swap: name = "SWAP"; break;
        case GateKind::MeasureZ: name = "MEASURE"; break;
        case GateKind::Identity: name = "I"; break;
    }
    nlohmann::json qubits = nlohmann::json::array();
    qubits.push_back(g.q0);
    if (g.two_qubit()) qubits.push_back(g.q1);
    return {{"gate", name}, {"qubits", qubits}};
}

CliffordGate gate_from_json(const nlohmann::json& j) {
    std::string name = j.at("gate").get<std::string>();
    auto q = j.at("qubits");
    int q0 = q[0].get<int>();
    int q1 = q.size() > 1 ? q[1].get<int>() : -1;
    if (name == "INIT") return CliffordGate::init_z(q0);
    if (name == "H") return CliffordGate::h(q0);
    if (name == "CNOT") return CliffordGate::cnot(q0, q1);
    if (name == "SWAP") return CliffordGate::swap(q0, q1);
    if (name == "MEASURE") return CliffordGate::measure_z(q0);
    return CliffordGate::identity(q0);
}

} // namespace

std::string circuits_to_json(const Lattice& l, const std::vector<StabilizerCircuit>& circs) {
    nlohmann::json j;
    j["lattice"] = nlohmann::json::parse(l.to_json());
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : circs) {
        nlohmann::json jc;
        jc["stab_id"] = c.stab_id;
        jc["kind"] = c.kind == StabKind::Z ? "Z" : "X";
        jc["members"] = c.members;
        jc["ancilla_path"] = c.ancilla_path;
        jc["device_path"] = c.device_path;
        jc["heuristic_tsp"] = c.heuristic_tsp;
        nlohmann::json evs = nlohmann::json::array();
        for (const auto& e : c.events) {
            auto ev = gate_json(e.gate);
            ev["slot"] = e.slot;
            evs.push_back(ev);
        }
        jc["events"] = evs;
        arr.push_back(jc);
    }
    j["circuits"] = arr;
    return j.dump();
}

std::pair<Lattice, std::vector<StabilizerCircuit>> circuits_from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    Lattice l = Lattice::from_json(j.at("lattice").dump());
    std::vector<StabilizerCircuit> circs;
    for (const auto& jc : j.at("circuits")) {
        StabilizerCircuit c;
        c.stab_id = jc.at("stab_id").get<int>();
        c.kind = jc.at("kind").get<std::string>() == "Z" ? StabKind::Z : StabKind::X;
        c.members = jc.at("members").get<std::vector<int>>();
        c.ancilla_path = jc.at("ancilla_path").get<std::vector<int>>();
        c.device_path = jc.at("device_path").get<std::vector<int>>();
        c.heuristic_tsp = jc.at("heuristic_tsp").get<bool>();
        for (const auto& ev : jc.at("events")) c.events.push_back({gate_from_json(ev), ev.at("slot").get<int>()});
        c.depth = circuit_depth(c.events);
        circs.push_back(std::move(c));
    }
    return {l, circs};
}

} // namespace defectq
