#include "defectq/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace defectq {

ChipMetrics compute_metrics(const Lattice& l, const StabilizerLayout& layout,
                            const std::vector<StabilizerCircuit>& circs, const WholeCircuit& w) {
    ChipMetrics m;
    m.n_stabs = int(layout.stabilizers.size());
    m.faulty_data = l.count(Role::Data, Status::Faulty);
    m.faulty_ancilla = l.count(Role::Ancilla, Status::Faulty);
    m.faulty_total = m.faulty_data + m.faulty_ancilla;
    auto enc = encodability_check(l, layout);
    m.reduced_distance = std::min(enc.reduced_d_x, enc.reduced_d_z);

    long z_meas_total = 0;
    double sum_q = 0, sum_dq = 0, sum_depth = 0, sum_kq = 0, sum_kdq = 0;
    double sum_cycle = 0, sum_cq = 0, sum_cdq = 0;
    for (size_t i = 0; i < circs.size(); i++) {
        if (circs[i].kind != StabKind::Z) continue;
        m.z_stabs++;
        int nq = int(circuit_qubits(circs[i].events).size());
        int dq = int(circs[i].members.size());
        long long kq = circuit_kq(circs[i]);
        long long kdq = circuit_kdq(circs[i], l);
        double cycle = w.measurements_of(int(i)) >= 2 ? w.average_cycle(int(i)) : circs[i].depth;
        double cq = cycle * nq, cdq = cycle * dq;
        z_meas_total += w.measurements_of(int(i));
        m.biggest_qubits_z = std::max(m.biggest_qubits_z, nq);
        m.biggest_dataq_z = std::max(m.biggest_dataq_z, dq);
        m.deepest_z = std::max(m.deepest_z, circs[i].depth);
        m.biggest_kq_z = std::max(m.biggest_kq_z, kq);
        m.biggest_kdq_z = std::max(m.biggest_kdq_z, kdq);
        m.biggest_cycle_z = std::max(m.biggest_cycle_z, cycle);
        m.biggest_cq_z = std::max(m.biggest_cq_z, cq);
        m.biggest_cdq_z = std::max(m.biggest_cdq_z, cdq);
        sum_q += nq;
        sum_dq += dq;
        sum_depth += circs[i].depth;
        sum_kq += double(kq);
        sum_kdq += double(kdq);
        sum_cycle += cycle;
        sum_cq += cq;
        sum_cdq += cdq;
    }
    if (m.z_stabs) {
        m.ave_qubits_z = sum_q / m.z_stabs;
        m.ave_dataq_z = sum_dq / m.z_stabs;
        m.ave_depth_z = sum_depth / m.z_stabs;
        m.ave_kq_z = sum_kq / m.z_stabs;
        m.ave_kdq_z = sum_kdq / m.z_stabs;
        m.ave_cycle_z = sum_cycle / m.z_stabs;
        m.ave_cq_z = sum_cq / m.z_stabs;
        m.ave_cdq_z = sum_cdq / m.z_stabs;
    }
    if (w.horizon > 0) m.ave_z_meas_per_step = double(z_meas_total) / w.horizon;
    return m;
}

std::map<std::string, double> ChipMetrics::columns() const {
    return {
        {"n_stabs", double(n_stabs)},
        {"faulty_qubits", double(faulty_total)},
        {"faulty_dataq", double(faulty_data)},
        {"faulty_synq", double(faulty_ancilla)},
        {"reduced_distance", double(reduced_distance)},
        {"z_stabs", double(z_stabs)},
        {"biggest_qubits_z", double(biggest_qubits_z)},
        {"ave_qubits_z", ave_qubits_z},
        {"biggest_dataq_z", double(biggest_dataq_z)},
        {"ave_dataq_z", ave_dataq_z},
        {"deepest_z", double(deepest_z)},
        {"ave_depth_z", ave_depth_z},
        {"biggest_kq_z", double(biggest_kq_z)},
        {"ave_kq_z", ave_kq_z},
        {"biggest_kdq_z", double(biggest_kdq_z)},
        {"ave_kdq_z", ave_kdq_z},
        {"biggest_cycle_z", biggest_cycle_z},
        {"ave_cycle_z", ave_cycle_z},
        {"biggest_cq_z", biggest_cq_z},
        {"ave_cq_z", ave_cq_z},
        {"biggest_cdq_z", biggest_cdq_z},
        {"ave_cdq_z", ave_cdq_z},
        {"ave_z_meas_per_step", ave_z_meas_per_step},
    };
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.size() < 2) throw std::invalid_argument("bad series");
    double ma = 0, mb = 0;
    for (size_t i = 0; i < a.size(); i++) {
        ma += a[i];
        mb += b[i];
    }
    ma /= double(a.size());
    mb /= double(b.size());
    double saa = 0, sbb = 0, sab = 0;
    for (size_t i = 0; i < a.size(); i++) {
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
        sab += (a[i] - ma) * (b[i] - mb);
    }
    if (saa == 0 || sbb == 0) return std::nan("");
    return sab / std::sqrt(saa * sbb);
}

CorrelationTable correlate(const std::vector<ChipMetrics>& chips,
                           const std::vector<double>& rates, bool log_target) {
    if (chips.size() != rates.size() || chips.size() < 3)
        throw std::invalid_argument("need at least three rated lattices");
    std::vector<double> target;
    for (double r : rates) target.push_back(log_target ? std::log(r) : r);
    CorrelationTable table;
    for (const auto& [name, first] : chips[0].columns()) {
        std::vector<double> col;
        for (const auto& c : chips) col.push_back(c.columns().at(name));
        table.names.push_back(name);
        table.correlation.push_back(pearson(col, target));
    }
    return table;
}

std::vector<int> cull(int generated, const std::vector<std::pair<int, double>>& rated,
                      double fraction) {
    if (fraction < 0.0 || fraction >= 1.0) throw std::invalid_argument("fraction in [0,1)");
    int keep = int(std::ceil(generated * (1.0 - fraction)));
    auto sorted = rated;
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.second < b.second; });
    std::vector<int> out;
    for (int i = 0; i < int(sorted.size()) && i < keep; i++) out.push_back(sorted[i].first);
    std::sort(out.begin(), out.end());
    return out;
}

double geometric_mean(const std::vector<double>& v) {
    if (v.empty()) throw std::invalid_argument("empty");
    double s = 0;
    for (double x : v) s += std::log(x);
    return std::exp(s / double(v.size()));
}

} // namespace defectq
