#include <doctest.h>

#include "lossforecast/errors.hpp"
#include "lossforecast/features.hpp"
#include "lossforecast/rng.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace lossforecast;

namespace {

QuarterlySeries positive_walk(const std::string& id, std::size_t n, std::uint64_t seed,
                              Quarter start = Quarter(1985, 1)) {
    auto engine = make_engine(seed, 0x6665);
    std::normal_distribution<double> step(0.01, 0.05);
    std::vector<double> v(n);
    v[0] = 10.0;
    for (std::size_t i = 1; i < n; ++i)
        v[i] = std::max(1.0, v[i - 1] * (1.0 + step(engine)));
    return QuarterlySeries(id, start, std::move(v));
}

} // namespace

TEST_CASE("build_lag_table produces 5 features per indicator") {
    QuarterlySeries target = positive_walk("target", 60, 1);
    std::vector<QuarterlySeries> one{positive_walk("a", 60, 2)};
    LagTable table = build_lag_table(one, target);
    CHECK(table.features.size() == 5);
    for (int lagk = 0; lagk < 5; ++lagk) {
        CHECK(table.features[static_cast<std::size_t>(lagk)].lag == lagk);
        CHECK(table.features[static_cast<std::size_t>(lagk)].indicator_id == "a");
    }
    // all columns and target share one range
    for (const LaggedFeature& f : table.features) {
        CHECK(f.yoy_values.start() == table.target_yoy.start());
        CHECK(f.yoy_values.size() == table.target_yoy.size());
    }

    std::vector<QuarterlySeries> three{positive_walk("a", 60, 2), positive_walk("b", 60, 3),
                                       positive_walk("c", 60, 4)};
    CHECK(build_lag_table(three, target).features.size() == 15);
}

TEST_CASE("build_lag_table rejects short overlap") {
    QuarterlySeries target = positive_walk("target", 60, 1);
    std::vector<QuarterlySeries> ind{positive_walk("a", 20, 2, Quarter(1994, 3))};
    CHECK_THROWS_AS(build_lag_table(ind, target), SeriesTooShort);
}

TEST_CASE("correlation on an exact linear relation") {
    QuarterlySeries target = positive_walk("t", 60, 5);
    QuarterlySeries target_yoy = yoy_change(target);
    std::vector<double> doubled;
    for (double v : target_yoy.values())
        doubled.push_back(2.0 * v + 3.0);
    LaggedFeature f{"x", 0, TransformSpec{},
                    QuarterlySeries("x", target_yoy.start(), doubled)};
    CorrelationRecord rec = correlation(f, target_yoy);
    CHECK(rec.r == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(rec.p_value < 1e-10);
    CHECK(rec.significant_at_10pct);
}

TEST_CASE("optimal lag selection picks max |r|, ties to smaller lag") {
    std::vector<CorrelationRecord> recs;
    double rs[5] = {0.1, 0.75, 0.3, 0.2, 0.4};
    for (int lagk = 0; lagk < 5; ++lagk)
        recs.push_back({"a", lagk, rs[lagk], 0.5, false});
    auto pick = optimal_lag_selection(recs);
    CHECK(pick.at("a") == 1);

    std::vector<CorrelationRecord> equal;
    for (int lagk = 0; lagk < 5; ++lagk)
        equal.push_back({"b", lagk, -0.5, 0.5, false});
    CHECK(optimal_lag_selection(equal).at("b") == 0);

    std::vector<CorrelationRecord> single{{"c", 3, 0.2, 0.5, false}};
    CHECK(optimal_lag_selection(single).at("c") == 3);

    // order independence
    std::vector<CorrelationRecord> reversed(recs.rbegin(), recs.rend());
    CHECK(optimal_lag_selection(reversed) == optimal_lag_selection(recs));
}

TEST_CASE("assemble_matrix shapes") {
    QuarterlySeries target = positive_walk("target", 60, 1);
    std::vector<QuarterlySeries> inds{positive_walk("a", 60, 2), positive_walk("b", 60, 3)};
    LagTable table = build_lag_table(inds, target);
    FeatureMatrix all = assemble_matrix(table.features, table.target_yoy);
    CHECK(all.X.size() == 10);
    CHECK(all.y.size() == all.rows);
    for (const auto& col : all.X)
        CHECK(col.size() == all.rows);
    CHECK(all.row_of(all.start) == 0);
    CHECK(all.quarter_of(2) == all.start.plus(2));
}
