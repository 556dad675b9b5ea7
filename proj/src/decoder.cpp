#include "defectq/decoder.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <deque>
#include <map>
#include <queue>
#include <set>

#include "json.hpp"

namespace defectq {

TrialState run_trial(const WholeCircuit& w, int n_sites, const ErrorModel& m, Rng& rng) {
    TrialState t;
    t.res_x.assign(n_sites, 0);
    t.res_z.assign(n_sites, 0);
    t.syndrome.assign(w.measure_slots.size(), {});
    for (const auto& sg : w.gates) {
        const auto& g = sg.gate;
        switch (g.kind) {
            case GateKind::InitZ: {
                t.res_x[g.q0] = 0;
                t.res_z[g.q0] = 0;
                if (rng.bernoulli(m.init_meas_flip())) t.res_x[g.q0] = 1;
                break;
            }
            case GateKind::MeasureZ: {
                bool flip = t.res_x[g.q0];
                flip ^= rng.bernoulli(m.init_meas_flip());
                t.syndrome[sg.stab_index].push_back(flip ? -1 : +1);
                break;
            }
            case GateKind::H: {
                std::swap(t.res_x[g.q0], t.res_z[g.q0]);
                auto [ex, ez] = sample_1q(m, rng);
                t.res_x[g.q0] ^= ex;
                t.res_z[g.q0] ^= ez;
                break;
            }
            case GateKind::Swap: {
                std::swap(t.res_x[g.q0], t.res_x[g.q1]);
                std::swap(t.res_z[g.q0], t.res_z[g.q1]);
                auto e = sample_2q(m, rng);
                t.res_x[g.q0] ^= e[0];
                t.res_z[g.q0] ^= e[1];
                t.res_x[g.q1] ^= e[2];
                t.res_z[g.q1] ^= e[3];
                break;
            }
            case GateKind::Cnot: {
                t.res_x[g.q1] ^= t.res_x[g.q0];
                t.res_z[g.q0] ^= t.res_z[g.q1];
                auto e = sample_2q(m, rng);
                t.res_x[g.q0] ^= e[0];
                t.res_z[g.q0] ^= e[1];
                t.res_x[g.q1] ^= e[2];
                t.res_z[g.q1] ^= e[3];
                break;
            }
            case GateKind::Identity: {
                if (m.idle_errors) {
                    auto [ex, ez] = sample_1q(m, rng);
                    t.res_x[g.q0] ^= ex;
                    t.res_z[g.q0] ^= ez;
                }
                break;
            }
        }
    }
    return t;
}

TrialState run_trial_injected(const WholeCircuit& w, int n_sites, size_t gate_index,
                              bool x0, bool z0, bool x1, bool z1) {
    TrialState t;
    t.res_x.assign(n_sites, 0);
    t.res_z.assign(n_sites, 0);
    t.syndrome.assign(w.measure_slots.size(), {});
    for (size_t i = 0; i < w.gates.size(); i++) {
        const auto& sg = w.gates[i];
        const auto& g = sg.gate;
        switch (g.kind) {
            case GateKind::InitZ:
                t.res_x[g.q0] = 0;
                t.res_z[g.q0] = 0;
                break;
            case GateKind::MeasureZ:
                t.syndrome[sg.stab_index].push_back(t.res_x[g.q0] ? -1 : +1);
                break;
            case GateKind::H:
                std::swap(t.res_x[g.q0], t.res_z[g.q0]);
                break;
            case GateKind::Swap:
                std::swap(t.res_x[g.q0], t.res_x[g.q1]);
                std::swap(t.res_z[g.q0], t.res_z[g.q1]);
                break;
            case GateKind::Cnot:
                t.res_x[g.q1] ^= t.res_x[g.q0];
                t.res_z[g.q0] ^= t.res_z[g.q1];
                break;
            default: break;
        }
        if (i == gate_index) {
            t.res_x[g.q0] ^= x0;
            t.res_z[g.q0] ^= z0;
            if (g.two_qubit()) {
                t.res_x[g.q1] ^= x1;
                t.res_z[g.q1] ^= z1;
            }
        }
    }
    return t;
}

namespace {

// ---- symbolic error propagation for nest construction ----

struct GateMeta {
    std::vector<std::vector<int>> dev_gates; // per device: gate indices
    std::vector<int> meas_k;                 // per gate: measurement index or -1
};

GateMeta build_meta(const WholeCircuit& w, int n_sites) {
    GateMeta meta;
    meta.dev_gates.assign(n_sites, {});
    meta.meas_k.assign(w.gates.size(), -1);
    std::vector<int> counts(w.measure_slots.size(), 0);
    for (size_t i = 0; i < w.gates.size(); i++) {
        const auto& g = w.gates[i].gate;
        meta.dev_gates[g.q0].push_back(int(i));
        if (g.two_qubit()) meta.dev_gates[g.q1].push_back(int(i));
    }
    for (size_t i = 0; i < w.gates.size(); i++)
        if (w.gates[i].gate.kind == GateKind::MeasureZ)
            meta.meas_k[i] = counts[w.gates[i].stab_index]++;
    return meta;
}

// Sparse Pauli propagation from one injected error; records which
// measurements flip and the surviving data residual at the horizon end.
struct Propagation {
    std::vector<std::pair<int, int>> flips; // (stab, measurement index)
    std::map<int, std::pair<bool, bool>> final_residual;
};

Propagation propagate(const WholeCircuit& w, const GateMeta& meta, int start_gate,
                      std::map<int, std::pair<bool, bool>> support) {
    Propagation out;
    auto cleaned = [&](std::map<int, std::pair<bool, bool>>& s) {
        for (auto it = s.begin(); it != s.end();)
            it = (!it->second.first && !it->second.second) ? s.erase(it) : std::next(it);
    };
    cleaned(support);
    // per supported device, a cursor into its gate list
    auto next_gate_after = [&](int dev, int after) {
        const auto& lst = meta.dev_gates[dev];
        auto it = std::upper_bound(lst.begin(), lst.end(), after);
        return it == lst.end() ? INT32_MAX : *it;
    };
    int cursor = start_gate;
    while (!support.empty()) {
        int nxt = INT32_MAX;
        for (const auto& [dev, bits] : support) nxt = std::min(nxt, next_gate_after(dev, cursor));
        if (nxt == INT32_MAX) break;
        cursor = nxt;
        const auto& sg = w.gates[cursor];
        const auto& g = sg.gate;
        auto bit = [&](int dev) -> std::pair<bool, bool>& {
            return support[dev]; // creates I if absent
        };
        switch (g.kind) {
            case GateKind::InitZ: support.erase(g.q0); break;
            case GateKind::MeasureZ: {
                auto it = support.find(g.q0);
                if (it != support.end() && it->second.first)
                    out.flips.push_back({sg.stab_index, meta.meas_k[cursor]});
                break;
            }
            case GateKind::H: {
                auto& b = bit(g.q0);
                std::swap(b.first, b.second);
                break;
            }
            case GateKind::Swap: {
                auto b0 = support.count(g.q0) ? support[g.q0] : std::make_pair(false, false);
                auto b1 = support.count(g.q1) ? support[g.q1] : std::make_pair(false, false);
                support[g.q0] = b1;
                support[g.q1] = b0;
                break;
            }
            case GateKind::Cnot: {
                auto c = support.count(g.q0) ? support[g.q0] : std::make_pair(false, false);
                auto t = support.count(g.q1) ? support[g.q1] : std::make_pair(false, false);
                if (c.first) t.first = !t.first;  // X on control copies to target
                if (t.second) c.second = !c.second; // Z on target copies to control
                support[g.q0] = c;
                support[g.q1] = t;
                break;
            }
            default: break;
        }
        cleaned(support);
    }
    out.final_residual = std::move(support);
    return out;
}

struct EdgeKey {
    int u, v;
    bool operator<(const EdgeKey& o) const { return std::tie(u, v) < std::tie(o.u, o.v); }
};

void merge_edge(std::map<EdgeKey, NestEdge>& acc, int u, int v, double prob,
                std::vector<int> corr) {
    if (u > v) std::swap(u, v);
    EdgeKey key{u, v};
    auto it = acc.find(key);
    if (it == acc.end()) {
        NestEdge e;
        e.u = u;
        e.v = v;
        e.prob = prob;
        e.correction = std::move(corr);
        acc.emplace(key, std::move(e));
    } else {
        double p1 = it->second.prob;
        it->second.prob = p1 * (1 - prob) + prob * (1 - p1);
    }
}

} // namespace

Nest build_nest(const Lattice& l, const std::vector<StabilizerCircuit>& circs,
                const WholeCircuit& w, const ErrorModel& m, StabKind side) {
    Nest nest;
    nest.side = side;
    nest.offset.assign(circs.size(), -1);
    for (size_t i = 0; i < circs.size(); i++) {
        if (circs[i].kind != side) continue;
        nest.offset[i] = nest.n_vertices;
        // one extra vertex represents the closing noiseless extraction
        nest.n_vertices += int(w.measure_slots[i].size()) + 1;
        for (size_t k = 0; k <= w.measure_slots[i].size(); k++) {
            nest.stab_of.push_back(int(i));
            nest.index_of.push_back(int(k));
        }
    }

    GateMeta meta = build_meta(w, l.sites());
    std::map<EdgeKey, NestEdge> acc;

    auto process_location = [&](int gate_idx, std::map<int, std::pair<bool, bool>> support,
                                double prob,
                                std::vector<std::pair<int, int>> direct_flips = {}) {
        Propagation pr = propagate(w, meta, gate_idx, std::move(support));
        for (auto f : direct_flips) pr.flips.push_back(f);
        // group flips by stabilizer of this side
        std::map<int, std::set<int>> by_stab;
        for (auto [stab, k] : pr.flips) {
            if (circs[stab].kind != side) continue;
            auto& s = by_stab[stab];
            if (s.count(k))
                s.erase(k); // double flip cancels
            else
                s.insert(k);
        }
        // persistent data residual flips the closing perfect extraction too
        for (size_t i = 0; i < circs.size(); i++) {
            if (circs[i].kind != side) continue;
            int parity = 0;
            for (const auto& [dev, bits] : pr.final_residual) {
                bool hit = side == StabKind::Z ? bits.first : bits.second;
                if (!hit) continue;
                if (std::binary_search(circs[i].members.begin(), circs[i].members.end(), dev))
                    parity ^= 1;
            }
            if (parity) {
                auto& s = by_stab[int(i)];
                int kperf = int(w.measure_slots[i].size());
                if (s.count(kperf))
                    s.erase(kperf);
                else
                    s.insert(kperf);
            }
        }
        // detection events: boundaries of flip runs per stabilizer
        std::vector<int> events;
        for (const auto& [stab, ks] : by_stab) {
            std::vector<int> sorted(ks.begin(), ks.end());
            int last_meas = int(w.measure_slots[stab].size()); // perfect round index
            for (size_t a = 0; a < sorted.size();) {
                size_t b = a;
                while (b + 1 < sorted.size() && sorted[b + 1] == sorted[b] + 1) b++;
                events.push_back(nest.vertex(stab, sorted[a]));
                if (sorted[b] + 1 <= last_meas) events.push_back(nest.vertex(stab, sorted[b] + 1));
                a = b + 1;
            }
        }
        if (events.empty()) return;
        std::sort(events.begin(), events.end());
        std::vector<int> corr;
        for (const auto& [dev, bits] : pr.final_residual) {
            bool hit = side == StabKind::Z ? bits.first : bits.second;
            if (hit && l.data_site(dev)) corr.push_back(dev);
        }
        if (events.size() == 1) {
            merge_edge(acc, -1, events[0], prob, corr);
        } else if (events.size() == 2) {
            merge_edge(acc, events[0], events[1], prob, corr);
        } else {
            // rare multi-flip locations decompose into a path of edges
            for (size_t i = 0; i + 1 < events.size(); i++)
                merge_edge(acc, events[i], events[i + 1], prob, i == 0 ? corr : std::vector<int>{});
        }
    };

    for (size_t gi = 0; gi < w.gates.size(); gi++) {
        const auto& g = w.gates[gi].gate;
        switch (g.kind) {
            case GateKind::InitZ:
                process_location(int(gi), {{g.q0, {true, false}}}, m.p);
                break;
            case GateKind::MeasureZ:
                // readout flip plus the X left on the device afterwards
                process_location(int(gi), {{g.q0, {true, false}}}, m.p,
                                 {{w.gates[gi].stab_index, meta.meas_k[gi]}});
                break;
            case GateKind::H: {
                const std::pair<bool, bool> paulis[3] = {{true, false}, {true, true}, {false, true}};
                for (auto pb : paulis) process_location(int(gi), {{g.q0, pb}}, m.p / 3);
                break;
            }
            case GateKind::Cnot:
            case GateKind::Swap: {
                for (int k = 1; k < 16; k++) {
                    int a = k / 4, b = k % 4;
                    auto bits = [](int wv) -> std::pair<bool, bool> {
                        switch (wv) {
                            case 1: return {true, false};
                            case 2: return {true, true};
                            default: return {false, wv == 3};
                        }
                    };
                    std::map<int, std::pair<bool, bool>> s;
                    if (a) s[g.q0] = bits(a);
                    if (b) s[g.q1] = bits(b);
                    process_location(int(gi), std::move(s), m.p / 15);
                }
                break;
            }
            default: break;
        }
    }

    nest.adj.assign(nest.n_vertices + 1, {}); // last id = boundary
    for (auto& [key, e] : acc) {
        e.prob = std::min(e.prob, 0.499999);
        e.weight = -std::log(e.prob / (1.0 - e.prob));
        int id = int(nest.edges.size());
        nest.edges.push_back(e);
        int u = e.u < 0 ? nest.n_vertices : e.u;
        nest.adj[u].push_back(id);
        nest.adj[e.v].push_back(id);
    }
    return nest;
}

std::vector<DetectionEvent> extract_events(const TrialState& t, StabKind side,
                                           const std::vector<StabilizerCircuit>& circs) {
    std::vector<DetectionEvent> events;
    for (size_t i = 0; i < t.syndrome.size(); i++) {
        if (circs[i].kind != side) continue;
        int prev = +1;
        for (size_t k = 0; k < t.syndrome[i].size(); k++) {
            if (t.syndrome[i][k] != prev) events.push_back({int(i), int(k)});
            prev = t.syndrome[i][k];
        }
    }
    return events;
}

// ---- shortest paths over the nest ----

namespace {

struct Dijkstra {
    std::vector<double> dist;
    std::vector<int> via_edge;
    void run(const Nest& nest, int src) {
        int n = nest.n_vertices + 1; // boundary is the extra node
        dist.assign(n, std::numeric_limits<double>::infinity());
        via_edge.assign(n, -1);
        std::priority_queue<std::pair<double, int>, std::vector<std::pair<double, int>>,
                            std::greater<>> pq;
        dist[src] = 0;
        pq.push({0, src});
        while (!pq.empty()) {
            auto [d, u] = pq.top();
            pq.pop();
            if (d > dist[u] + 1e-12) continue;
            if (u == nest.n_vertices) continue; // boundary is a sink
            for (int eid : nest.adj[u]) {
                const auto& e = nest.edges[eid];
                int a = e.u < 0 ? nest.n_vertices : e.u;
                int v = (a == u) ? e.v : a;
                if (dist[u] + e.weight < dist[v] - 1e-12) {
                    dist[v] = dist[u] + e.weight;
                    via_edge[v] = eid;
                    pq.push({dist[v], v});
                }
            }
        }
    }
    std::vector<int> path_edges(const Nest& nest, int src, int dst) const {
        std::vector<int> out;
        int cur = dst;
        while (cur != src) {
            int eid = via_edge[cur];
            if (eid < 0) break;
            out.push_back(eid);
            const auto& e = nest.edges[eid];
            int a = e.u < 0 ? nest.n_vertices : e.u;
            cur = (a == cur) ? e.v : a;
        }
        return out;
    }
};

// Maximum-weight general matching (O(n^3) primal-dual with blossoms),
// used through the standard minimization reduction.
struct WeightedBlossom {
    struct E {
        int u, v;
        long long w;
    };
    int n = 0, n_x = 0;
    std::vector<std::vector<E>> g;
    std::vector<long long> lab;
    std::vector<int> match, slack, st, pa, S, vis;
    std::vector<std::vector<int>> flower, flower_from;
    std::deque<int> q;
    static constexpr long long INF = std::numeric_limits<long long>::max() / 4;

    void init(int n_) {
        n = n_;
        int cap = 2 * n + 4;
        g.assign(cap, std::vector<E>(cap));
        for (int u = 0; u < cap; u++)
            for (int v = 0; v < cap; v++) g[u][v] = {u, v, 0};
        lab.assign(cap, 0);
        match.assign(cap, 0);
        slack.assign(cap, 0);
        st.assign(cap, 0);
        pa.assign(cap, 0);
        S.assign(cap, 0);
        vis.assign(cap, 0);
        flower.assign(cap, {});
        flower_from.assign(cap, std::vector<int>(cap, 0));
    }
    void add_edge(int u, int v, long long w) { g[u][v].w = g[v][u].w = w; }

    long long e_delta(const E& e) { return lab[e.u] + lab[e.v] - g[e.u][e.v].w * 2; }
    void update_slack(int u, int x) {
        if (!slack[x] || e_delta(g[u][x]) < e_delta(g[slack[x]][x])) slack[x] = u;
    }
    void set_slack(int x) {
        slack[x] = 0;
        for (int u = 1; u <= n; u++)
            if (g[u][x].w > 0 && st[u] != x && S[st[u]] == 0) update_slack(u, x);
    }
    void q_push(int x) {
        if (x <= n)
            q.push_back(x);
        else
            for (int y : flower[x]) q_push(y);
    }
    void set_st(int x, int b) {
        st[x] = b;
        if (x > n)
            for (int y : flower[x]) set_st(y, b);
    }
    int get_pr(int b, int xr) {
        int pr = int(std::find(flower[b].begin(), flower[b].end(), xr) - flower[b].begin());
        if (pr % 2 == 1) {
            std::reverse(flower[b].begin() + 1, flower[b].end());
            return int(flower[b].size()) - pr;
        }
        return pr;
    }
    void set_match(int u, int v) {
        match[u] = g[u][v].v;
        if (u > n) {
            const E& e = g[u][v];
            int xr = flower_from[u][e.u];
            int pr = get_pr(u, xr);
            for (int i = 0; i < pr; i++) set_match(flower[u][i], flower[u][i ^ 1]);
            set_match(xr, v);
            std::rotate(flower[u].begin(), flower[u].begin() + pr, flower[u].end());
        }
    }
    void augment(int u, int v) {
        for (;;) {
            int xnv = st[match[u]];
            set_match(u, v);
            if (!xnv) return;
            set_match(xnv, st[pa[xnv]]);
            u = st[pa[xnv]];
            v = xnv;
        }
    }
    int get_lca(int u, int v) {
        static thread_local int t = 0;
        for (++t; u || v; std::swap(u, v)) {
            if (u == 0) continue;
            if (vis[u] == t) return u;
            vis[u] = t;
            u = st[match[u]];
            if (u) u = st[pa[u]];
        }
        return 0;
    }
    void add_blossom(int u, int lca, int v) {
        int b = n + 1;
        while (b <= n_x && st[b]) b++;
        if (b > n_x) n_x++;
        lab[b] = 0;
        S[b] = 0;
        match[b] = match[lca];
        flower[b].clear();
        flower[b].push_back(lca);
        for (int x = u, y; x != lca; x = st[pa[y]]) {
            flower[b].push_back(x);
            flower[b].push_back(y = st[match[x]]);
            q_push(y);
        }
        std::reverse(flower[b].begin() + 1, flower[b].end());
        for (int x = v, y; x != lca; x = st[pa[y]]) {
            flower[b].push_back(x);
            flower[b].push_back(y = st[match[x]]);
            q_push(y);
        }
        set_st(b, b);
        for (int x = 1; x <= n_x; x++) g[b][x].w = g[x][b].w = 0;
        for (int x = 1; x <= n; x++) flower_from[b][x] = 0;
        for (int xs : flower[b]) {
            for (int x = 1; x <= n_x; x++)
                if (g[b][x].w == 0 || e_delta(g[xs][x]) < e_delta(g[b][x])) {
                    g[b][x] = g[xs][x];
                    g[x][b] = g[x][xs];
                }
            for (int x = 1; x <= n; x++)
                if (flower_from[xs][x]) flower_from[b][x] = xs;
        }
        set_slack(b);
    }
    void expand_blossom(int b) {
        for (int y : flower[b]) set_st(y, y);
        int xr = flower_from[b][g[b][pa[b]].u];
        int pr = get_pr(b, xr);
        for (int i = 0; i < pr; i += 2) {
            int xs = flower[b][i], xns = flower[b][i + 1];
            pa[xs] = g[xns][xs].u;
            S[xs] = 1;
            S[xns] = 0;
            slack[xs] = 0;
            set_slack(xns);
            q_push(xns);
        }
        S[xr] = 1;
        pa[xr] = pa[b];
        for (size_t i = pr + 1; i < flower[b].size(); i++) {
            int xs = flower[b][i];
            S[xs] = -1;
            set_slack(xs);
        }
        st[b] = 0;
    }
    bool on_found_edge(const E& e) {
        int u = st[e.u], v = st[e.v];
        if (S[v] == -1) {
            pa[v] = e.u;
            S[v] = 1;
            int nu = st[match[v]];
            slack[v] = slack[nu] = 0;
            S[nu] = 0;
            q_push(nu);
        } else if (S[v] == 0) {
            int lca = get_lca(u, v);
            if (!lca) {
                augment(u, v);
                augment(v, u);
                return true;
            }
            add_blossom(u, lca, v);
        }
        return false;
    }
    bool matching() {
        std::fill(S.begin() + 1, S.begin() + n_x + 1, -1);
        std::fill(slack.begin() + 1, slack.begin() + n_x + 1, 0);
        q.clear();
        for (int x = 1; x <= n_x; x++)
            if (st[x] == x && !match[x]) {
                pa[x] = 0;
                S[x] = 0;
                q_push(x);
            }
        if (q.empty()) return false;
        for (;;) {
            while (!q.empty()) {
                int u = q.front();
                q.pop_front();
                if (S[st[u]] == 1) continue;
                for (int v = 1; v <= n; v++)
                    if (g[u][v].w > 0 && st[u] != st[v]) {
                        if (e_delta(g[u][v]) == 0) {
                            if (on_found_edge(g[u][v])) return true;
                        } else {
                            update_slack(u, st[v]);
                        }
                    }
            }
            long long d = INF;
            for (int b = n + 1; b <= n_x; b++)
                if (st[b] == b && S[b] == 1) d = std::min(d, lab[b] / 2);
            for (int x = 1; x <= n_x; x++)
                if (st[x] == x && slack[x]) {
                    if (S[x] == -1)
                        d = std::min(d, e_delta(g[slack[x]][x]));
                    else if (S[x] == 0)
                        d = std::min(d, e_delta(g[slack[x]][x]) / 2);
                }
            for (int u = 1; u <= n; u++) {
                if (S[st[u]] == 0) {
                    if (lab[u] <= d) return false;
                    lab[u] -= d;
                } else if (S[st[u]] == 1) {
                    lab[u] += d;
                }
            }
            for (int b = n + 1; b <= n_x; b++)
                if (st[b] == b) {
                    if (S[st[b]] == 0)
                        lab[b] += d * 2;
                    else if (S[st[b]] == 1)
                        lab[b] -= d * 2;
                }
            q.clear();
            for (int x = 1; x <= n_x; x++)
                if (st[x] == x && slack[x] && st[slack[x]] != x && e_delta(g[slack[x]][x]) == 0)
                    if (on_found_edge(g[slack[x]][x])) return true;
            for (int b = n + 1; b <= n_x; b++)
                if (st[b] == b && S[b] == 1 && lab[b] == 0) expand_blossom(b);
        }
        return false;
    }
    void solve() {
        std::fill(match.begin() + 1, match.begin() + n + 1, 0);
        n_x = n;
        long long w_max = 0;
        for (int u = 0; u <= n; u++) {
            st[u] = u;
            flower[u].clear();
        }
        for (int u = 1; u <= n; u++)
            for (int v = 1; v <= n; v++) {
                flower_from[u][v] = (u == v ? u : 0);
                w_max = std::max(w_max, g[u][v].w);
            }
        for (int u = 1; u <= n; u++) lab[u] = w_max;
        while (matching()) {
        }
    }
};

constexpr double kWeightScale = 1e6;

} // namespace

Matching mwpm(const std::vector<int>& event_vertices, const Nest& nest) {
    Matching out;
    int k = int(event_vertices.size());
    if (k == 0) return out;

    std::vector<Dijkstra> dj(k);
    for (int i = 0; i < k; i++) dj[i].run(nest, event_vertices[i]);

    // nodes: events 1..k, their boundary copies k+1..2k
    long long cmax = 0;
    auto scaled = [&](double w) { return (long long)std::llround(w * kWeightScale); };
    std::vector<std::vector<long long>> cost(k, std::vector<long long>(k, -1));
    std::vector<long long> bcost(k, -1);
    for (int i = 0; i < k; i++) {
        double b = dj[i].dist[nest.n_vertices];
        if (std::isfinite(b)) bcost[i] = scaled(b);
        for (int j = i + 1; j < k; j++) {
            double d = dj[i].dist[event_vertices[j]];
            if (std::isfinite(d)) cost[i][j] = scaled(d);
        }
    }
    for (int i = 0; i < k; i++) {
        if (bcost[i] >= 0) cmax = std::max(cmax, bcost[i]);
        for (int j = i + 1; j < k; j++) cmax = std::max(cmax, cost[i][j] < 0 ? 0 : cost[i][j]);
    }
    bool any_connection = false;
    const long long C = cmax * (2 * k + 2) + 1;
    WeightedBlossom wb;
    wb.init(2 * k);
    for (int i = 0; i < k; i++) {
        if (bcost[i] >= 0) {
            wb.add_edge(i + 1, k + i + 1, C - bcost[i]);
            any_connection = true;
        }
        for (int j = i + 1; j < k; j++) {
            if (cost[i][j] >= 0) {
                wb.add_edge(i + 1, j + 1, C - cost[i][j]);
                any_connection = true;
            }
            wb.add_edge(k + i + 1, k + j + 1, C);
        }
    }
    if (!any_connection) throw std::runtime_error("detection event disconnected from the nest");
    wb.solve();

    std::vector<bool> used(k, false);
    for (int i = 0; i < k; i++) {
        if (used[i]) continue;
        int m = wb.match[i + 1];
        if (m == 0) throw std::runtime_error("matching left an event unpaired");
        if (m == k + i + 1) {
            out.to_boundary.push_back(i);
            out.total_weight += dj[i].dist[nest.n_vertices];
        } else {
            int j = m - 1;
            used[i] = used[j] = true;
            out.pairs.push_back({i, j});
            out.total_weight += dj[std::min(i, j)].dist[event_vertices[std::max(i, j)]];
        }
    }
    return out;
}

Matching mwpm_brute_force(const std::vector<int>& event_vertices, const Nest& nest) {
    int k = int(event_vertices.size());
    std::vector<Dijkstra> dj(k);
    for (int i = 0; i < k; i++) dj[i].run(nest, event_vertices[i]);
    Matching best;
    best.total_weight = std::numeric_limits<double>::infinity();
    std::vector<int> assign(k, -2); // -2 unset, -1 boundary, else partner
    std::function<void(int, double, Matching&)> rec = [&](int i, double acc, Matching& cur) {
        if (acc >= best.total_weight) return;
        while (i < k && assign[i] != -2) i++;
        if (i == k) {
            best = cur;
            best.total_weight = acc;
            return;
        }
        double b = dj[i].dist[nest.n_vertices];
        if (std::isfinite(b)) {
            assign[i] = -1;
            cur.to_boundary.push_back(i);
            rec(i + 1, acc + b, cur);
            cur.to_boundary.pop_back();
            assign[i] = -2;
        }
        for (int j = i + 1; j < k; j++) {
            if (assign[j] != -2) continue;
            double d = dj[i].dist[event_vertices[j]];
            if (!std::isfinite(d)) continue;
            assign[i] = j;
            assign[j] = i;
            cur.pairs.push_back({i, j});
            rec(i + 1, acc + d, cur);
            cur.pairs.pop_back();
            assign[i] = assign[j] = -2;
        }
    };
    Matching cur;
    rec(0, 0.0, cur);
    return best;
}

DecoderContext build_context(const Lattice& l, double p, int cycles) {
    DecoderContext ctx;
    ctx.lattice = l;
    ctx.layout = reconfigure(l);
    ctx.circuits = compose_all(l, ctx.layout);
    // probe the cycle length, then build the requested horizon
    auto probe = schedule(ctx.circuits, 80, l);
    double c = probe.cycle_boundaries.size() >= 2 ? probe.average_ec_cycle() : 8.0;
    ctx.whole = schedule(ctx.circuits, std::max(8, int(std::ceil(c * cycles))), l);
    ctx.model = ErrorModel::lattice(p);
    ctx.nest_x = build_nest(l, ctx.circuits, ctx.whole, ctx.model, StabKind::Z);
    ctx.nest_z = build_nest(l, ctx.circuits, ctx.whole, ctx.model, StabKind::X);
    ctx.logicals = logical_operators(l, ctx.layout);
    return ctx;
}

namespace {

// one side of the sliding-window decode
void decode_side(const DecoderContext& ctx, const TrialState& t, StabKind side,
                 PauliFrame& frame) {
    const Nest& nest = side == StabKind::Z ? ctx.nest_x : ctx.nest_z;
    // syndrome extended by the closing noiseless extraction
    std::vector<int> event_vertices;
    std::vector<int> event_cycle;
    const auto& bounds = ctx.whole.cycle_boundaries;
    int n_cycles = int(bounds.size());
    auto cycle_of_slot = [&](int slot) {
        return int(std::lower_bound(bounds.begin(), bounds.end(), slot) - bounds.begin());
    };
    for (size_t i = 0; i < t.syndrome.size(); i++) {
        if (ctx.circuits[i].kind != side) continue;
        int prev = +1;
        for (size_t k = 0; k < t.syndrome[i].size(); k++) {
            if (t.syndrome[i][k] != prev) {
                event_vertices.push_back(nest.vertex(int(i), int(k)));
                event_cycle.push_back(cycle_of_slot(ctx.whole.measure_slots[i][k]));
            }
            prev = t.syndrome[i][k];
        }
        // closing noiseless extraction of the raw residual
        int perfect = +1;
        {
            int parity = 0;
            for (int mdev : ctx.circuits[i].members)
                parity ^= side == StabKind::Z ? t.res_x[mdev] : t.res_z[mdev];
            perfect = parity ? -1 : +1;
        }
        if (perfect != prev) {
            event_vertices.push_back(nest.vertex(int(i), int(t.syndrome[i].size())));
            event_cycle.push_back(n_cycles);
        }
    }
    if (event_vertices.empty()) return;

    const int window = ctx.lattice.distance;
    std::vector<bool> committed(event_vertices.size(), false);
    auto apply_path = [&](int src_idx, int dst_vertex) {
        Dijkstra dj;
        dj.run(nest, event_vertices[src_idx]);
        for (int eid : dj.path_edges(nest, event_vertices[src_idx], dst_vertex))
            for (int site : nest.edges[eid].correction) {
                if (side == StabKind::Z)
                    frame.flip_x(site);
                else
                    frame.flip_z(site);
            }
    };

    for (int c = 0; c <= n_cycles; c++) {
        bool final_pass = c == n_cycles;
        std::vector<int> active;
        for (size_t i = 0; i < event_vertices.size(); i++)
            if (!committed[i] && event_cycle[i] <= c) active.push_back(int(i));
        if (active.empty()) continue;
        if (!final_pass) {
            bool any_retiring = false;
            for (int i : active) any_retiring |= event_cycle[i] <= c - window;
            if (!any_retiring) continue;
        }
        std::vector<int> verts;
        for (int i : active) verts.push_back(event_vertices[i]);
        Matching m = mwpm(verts, nest);
        for (auto [a, b] : m.pairs) {
            int ia = active[a], ib = active[b];
            bool retire = final_pass || (event_cycle[ia] <= c - window && event_cycle[ib] <= c - window);
            if (!retire) continue; // retained until its pair is deleted
            apply_path(ia, event_vertices[ib]);
            committed[ia] = committed[ib] = true;
        }
        for (int b : m.to_boundary) {
            int ib = active[b];
            bool retire = final_pass || event_cycle[ib] <= c - window;
            if (!retire) continue;
            apply_path(ib, nest.n_vertices);
            committed[ib] = true;
        }
    }
    (void)window;
}

// static one-round nest over the layout for the cleanup decode
Nest static_nest(const DecoderContext& ctx, StabKind side) {
    Nest nest;
    nest.side = side;
    nest.offset.assign(ctx.circuits.size(), -1);
    for (size_t i = 0; i < ctx.circuits.size(); i++) {
        if (ctx.circuits[i].kind != side) continue;
        nest.offset[i] = nest.n_vertices++;
        nest.stab_of.push_back(int(i));
        nest.index_of.push_back(0);
    }
    std::map<int, std::vector<int>> member_of;
    for (size_t i = 0; i < ctx.circuits.size(); i++) {
        if (ctx.circuits[i].kind != side) continue;
        for (int mdev : ctx.circuits[i].members) member_of[mdev].push_back(nest.offset[i]);
    }
    const auto& lo = side == StabKind::Z ? ctx.layout.north : ctx.layout.west;
    const auto& hi = side == StabKind::Z ? ctx.layout.south : ctx.layout.east;
    std::set<int> boundary(lo.begin(), lo.end());
    boundary.insert(hi.begin(), hi.end());
    std::map<EdgeKey, NestEdge> acc;
    for (const auto& [site, owners] : member_of) {
        if (owners.size() == 2) merge_edge(acc, owners[0], owners[1], 0.1, {site});
        if (owners.size() == 1 && boundary.count(site)) merge_edge(acc, -1, owners[0], 0.1, {site});
    }
    nest.adj.assign(nest.n_vertices + 1, {});
    for (auto& [key, e] : acc) {
        e.weight = 1.0;
        int id = int(nest.edges.size());
        nest.edges.push_back(e);
        nest.adj[e.u < 0 ? nest.n_vertices : e.u].push_back(id);
        nest.adj[e.v].push_back(id);
    }
    return nest;
}

} // namespace

PauliFrame decode_trial(const DecoderContext& ctx, const TrialState& t) {
    PauliFrame frame(ctx.lattice.sites());
    decode_side(ctx, t, StabKind::Z, frame);
    decode_side(ctx, t, StabKind::X, frame);
    return frame;
}

LogicalVerdict assess_logical(const DecoderContext& ctx, const TrialState& t,
                              const PauliFrame& frame) {
    std::vector<uint8_t> rx(t.res_x), rz(t.res_z);
    for (int q = 0; q < ctx.lattice.sites(); q++) {
        rx[q] ^= frame.x_bit(q);
        rz[q] ^= frame.z_bit(q);
    }
    // noiseless extraction and a final static cleanup for each side
    static thread_local std::map<const DecoderContext*, std::pair<Nest, Nest>> cache;
    auto it = cache.find(&ctx);
    if (it == cache.end())
        it = cache.emplace(&ctx, std::make_pair(static_nest(ctx, StabKind::Z),
                                                static_nest(ctx, StabKind::X))).first;
    for (StabKind side : {StabKind::Z, StabKind::X}) {
        const Nest& nest = side == StabKind::Z ? it->second.first : it->second.second;
        auto& bits = side == StabKind::Z ? rx : rz;
        std::vector<int> events;
        for (size_t i = 0; i < ctx.circuits.size(); i++) {
            if (ctx.circuits[i].kind != side) continue;
            int parity = 0;
            for (int mdev : ctx.circuits[i].members) parity ^= bits[mdev];
            if (parity) events.push_back(nest.offset[i]);
        }
        if (events.empty()) continue;
        Matching m = mwpm(events, nest);
        std::vector<Dijkstra> dj(events.size());
        for (size_t i = 0; i < events.size(); i++) dj[i].run(nest, events[i]);
        auto apply = [&](int i, int dst) {
            for (int eid : dj[i].path_edges(nest, events[i], dst))
                for (int site : nest.edges[eid].correction) bits[site] ^= 1;
        };
        for (auto [a, b] : m.pairs) apply(a, events[b]);
        for (int b : m.to_boundary) apply(b, nest.n_vertices);
    }

    LogicalVerdict v;
    int px = 0, pz = 0;
    for (int q : ctx.logicals.logical_z) px ^= rx[q]; // X residual flips logical Z
    for (int q : ctx.logicals.logical_x) pz ^= rz[q];
    v.x_error = px;
    v.z_error = pz;
    return v;
}

static RateResult run_rate(const DecoderContext& ctx, long trials, uint64_t seed, bool parallel) {
    RateResult r;
    r.trials = trials;
    r.cycles_per_trial = double(ctx.whole.cycle_boundaries.size());
    long x = 0, z = 0, e = 0;
#pragma omp parallel for schedule(dynamic, 8) reduction(+ : x, z, e) if (parallel)
    for (long i = 0; i < trials; i++) {
        Rng rng(Rng::derive(seed, 0xdec0de, uint64_t(i)));
        TrialState t = run_trial(ctx.whole, ctx.lattice.sites(), ctx.model, rng);
        PauliFrame f = decode_trial(ctx, t);
        LogicalVerdict v = assess_logical(ctx, t, f);
        x += v.x_error;
        z += v.z_error;
        e += (v.x_error || v.z_error);
    }
    r.x_errors = x;
    r.z_errors = z;
    r.either = e;
    return r;
}

RateResult logical_error_rate(const DecoderContext& ctx, long trials, uint64_t seed) {
    return run_rate(ctx, trials, seed, true);
}
RateResult logical_error_rate_serial(const DecoderContext& ctx, long trials, uint64_t seed) {
    return run_rate(ctx, trials, seed, false);
}

std::string nest_to_json(const Nest& nest) {
    nlohmann::json j;
    j["side"] = nest.side == StabKind::Z ? "Z" : "X";
    j["vertices"] = nest.n_vertices;
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : nest.edges)
        edges.push_back({{"u", e.u}, {"v", e.v}, {"p", e.prob}, {"w", e.weight}});
    j["edges"] = edges;
    return j.dump();
}

} // namespace defectq
