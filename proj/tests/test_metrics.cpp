#include <cmath>

#include "defectq/metrics.hpp"
#include "doctest.h"

using namespace defectq;

TEST_CASE("single-fault static metrics match the reported row") {
    auto l = generate_perfect(5);
    l.status[l.idx(4, 4)] = Status::Faulty;
    auto layout = reconfigure(l);
    auto circs = compose_all(l, layout);
    auto w = schedule(circs, 7 * 32, l);
    auto m = compute_metrics(l, layout, circs, w);
    CHECK(m.n_stabs == 38);
    CHECK(m.z_stabs == 19);
    CHECK(m.biggest_dataq_z == 6);
    CHECK(m.ave_dataq_z == doctest::Approx(70.0 / 19.0));
    CHECK(m.reduced_distance == 4);
    CHECK(m.faulty_total == 1);
    CHECK(m.ave_z_meas_per_step > 0);
    // the superunit dominates cycle-based metrics
    CHECK(m.biggest_cdq_z == doctest::Approx(m.biggest_cycle_z * 6));
}

TEST_CASE("perfect lattice metrics") {
    auto l = generate_perfect(5);
    auto layout = reconfigure(l);
    auto circs = compose_all(l, layout);
    auto w = schedule(circs, 60, l);
    auto m = compute_metrics(l, layout, circs, w);
    CHECK(m.biggest_dataq_z == 4);
    CHECK(m.reduced_distance == 5);
    CHECK(m.faulty_total == 0);
}

TEST_CASE("pearson correlation endpoints") {
    std::vector<double> x = {1, 2, 3, 4, 5};
    std::vector<double> y = {2, 4, 6, 8, 10};
    CHECK(pearson(x, y) == doctest::Approx(1.0));
    std::vector<double> ny = {10, 8, 6, 4, 2};
    CHECK(pearson(x, ny) == doctest::Approx(-1.0));
    std::vector<double> flat = {3, 3, 3, 3, 3};
    CHECK(std::isnan(pearson(x, flat)));
}

TEST_CASE("pearson against the direct formula on random data") {
    Rng rng(77);
    for (int trial = 0; trial < 100; trial++) {
        int n = 5 + int(rng.next_below(20));
        std::vector<double> a, b;
        for (int i = 0; i < n; i++) {
            a.push_back(rng.next_double() * 10);
            b.push_back(rng.next_double() * 10 + a.back() * (trial % 3));
        }
        double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
        for (int i = 0; i < n; i++) {
            sa += a[i];
            sb += b[i];
            saa += a[i] * a[i];
            sbb += b[i] * b[i];
            sab += a[i] * b[i];
        }
        double num = n * sab - sa * sb;
        double den = std::sqrt(n * saa - sa * sa) * std::sqrt(n * sbb - sb * sb);
        if (den == 0) continue;
        CHECK(pearson(a, b) == doctest::Approx(num / den).epsilon(1e-12));
    }
}

TEST_CASE("culling keeps the best of the original count") {
    std::vector<std::pair<int, double>> rated;
    for (int i = 0; i < 25; i++) rated.push_back({i, double(i)}); // 5 unencodable missing
    auto kept = cull(30, rated, 0.9); // keep best 3 of 30 generated
    CHECK(kept.size() == 3);
    CHECK(kept == std::vector<int>{0, 1, 2});
    CHECK(cull(30, rated, 0.0).size() == 25); // identity on the rated set

    auto half = cull(30, rated, 0.5);
    CHECK(half.size() == 15);
    std::vector<double> culled_rates, all_rates;
    for (int i : half) culled_rates.push_back(rated[i].second + 1);
    for (auto& [i, r] : rated) all_rates.push_back(r + 1);
    CHECK(geometric_mean(culled_rates) <= geometric_mean(all_rates));
}

TEST_CASE("cdq correlates best on a synthetic ensemble") {
    // build an ensemble from random defective lattices and a synthetic rate
    // proportional to ave CDQ to validate the plumbing end to end
    std::vector<ChipMetrics> chips;
    std::vector<double> rates;
    for (uint64_t s = 0; s < 8; s++) {
        auto l = apply_yield(generate_perfect(5), 0.95, 4000 + s);
        auto layout = reconfigure(l);
        if (!encodability_check(l, layout).encodable) continue;
        auto circs = compose_all(l, layout);
        auto w = schedule(circs, 7 * 32, l);
        chips.push_back(compute_metrics(l, layout, circs, w));
        rates.push_back(1e-4 * chips.back().ave_cdq_z);
    }
    REQUIRE(chips.size() >= 3);
    auto table = correlate(chips, rates, false);
    double cdq = 0;
    for (size_t i = 0; i < table.names.size(); i++)
        if (table.names[i] == "ave_cdq_z") cdq = table.correlation[i];
    CHECK(cdq == doctest::Approx(1.0).epsilon(1e-9));
}
