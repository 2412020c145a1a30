#include <doctest.h>

#include <cmath>

#include "rng.hpp"
#include "signals.hpp"

using namespace locgate;

namespace {

const SignalConstants kC;

Fix fix_at(double lat, double lon, int64_t t_ms, double acc = 15.0) {
    Fix f;
    f.session_id = "s";
    f.t_ms = t_ms;
    f.lat = lat;
    f.lon = lon;
    f.accuracy_m = acc;
    return f;
}

// A fix `meters` north of the origin fix.
Fix fix_north(const Fix& from, double meters, int64_t t_ms, double acc = 15.0) {
    double lat, lon;
    offset_meters(from.lat, from.lon, meters, 0.0, &lat, &lon);
    Fix f = fix_at(lat, lon, t_ms, acc);
    return f;
}

// History whose consecutive implied speeds are all `speed` m/s at 1 Hz.
std::vector<Fix> history_at_speed(int count, double speed) {
    std::vector<Fix> h;
    Fix base = fix_at(10.0, 20.0, 0);
    h.push_back(base);
    for (int i = 1; i < count; ++i) h.push_back(fix_north(h.back(), speed, i * 1000));
    return h;
}

std::vector<RawSample> cross_samples(double lat, double lon, double radius_m, double acc) {
    // four samples at N/E/S/W: RMS distance from the centroid equals radius
    std::vector<RawSample> out;
    const double offsets[4][2] = {{radius_m, 0}, {0, radius_m}, {-radius_m, 0}, {0, -radius_m}};
    for (auto& o : offsets) {
        double la, lo;
        offset_meters(lat, lon, o[0], o[1], &la, &lo);
        out.push_back({la, lo, acc});
    }
    return out;
}

}  // namespace

TEST_CASE("s1: full trust below the knee, linear decay, floor at teleport speeds") {
    const Fix a = fix_at(0, 0, 0);
    CHECK(s1_movement(a, fix_north(a, 10.0, 1000), kC) == doctest::Approx(1.0));
    CHECK(s1_movement(a, fix_north(a, 75.0, 1000), kC) == doctest::Approx(0.5).epsilon(1e-6));
    const Fix tokyo = fix_at(35.68, 139.77, 0);
    Fix miami = fix_at(25.76, -80.19, 1000);
    CHECK(s1_movement(tokyo, miami, kC) == 0.0);
}

TEST_CASE("s1: monotonically non-increasing in speed") {
    const Fix a = fix_at(0, 0, 0);
    double prev = 1.1;
    for (double v = 0; v <= 160.0; v += 2.5) {
        const double s = s1_movement(a, fix_north(a, v, 1000), kC);
        CHECK(s <= prev + 1e-12);
        CHECK(s >= 0.0);
        CHECK(s <= 1.0);
        prev = s;
    }
}

TEST_CASE("s2: accuracy ramp") {
    CHECK(s2_accuracy(fix_at(0, 0, 0, 15.0), kC) == 1.0);
    CHECK(s2_accuracy(fix_at(0, 0, 0, 0.01), kC) == doctest::Approx(0.005));
    CHECK(s2_accuracy(fix_at(0, 0, 0, 1.0), kC) == doctest::Approx(0.5));

    // non-decreasing up to the knee, constant after
    double prev = -1.0;
    for (double acc = 0.01; acc < 2.0; acc += 0.05) {
        const double s = s2_accuracy(fix_at(0, 0, 0, acc), kC);
        CHECK(s >= prev);
        prev = s;
    }
    CHECK(s2_accuracy(fix_at(0, 0, 0, 2.0), kC) == 1.0);
    CHECK(s2_accuracy(fix_at(0, 0, 0, 500.0), kC) == 1.0);
    CHECK_THROWS_AS(s2_accuracy(fix_at(0, 0, 0, 0.0), kC), Error);
}

TEST_CASE("s3: violation counting over history pairs plus the current pair") {
    SUBCASE("10 pairs, no violations") {
        const auto h = history_at_speed(10, 5.0);
        const Fix cur = fix_north(h.back(), 5.0, 10'000);
        CHECK(s3_temporal(cur, h, kC) == doctest::Approx(1.0));
    }
    SUBCASE("10 pairs, one violation scores 0.9") {
        auto h = history_at_speed(10, 5.0);  // 9 internal pairs, all calm
        const Fix cur = fix_north(h.back(), 150.0, 10'000);  // the 10th pair violates
        CHECK(s3_temporal(cur, h, kC) == doctest::Approx(0.9));
    }
    SUBCASE("all pairs violating scores 0") {
        const auto h = history_at_speed(6, 180.0);
        const Fix cur = fix_north(h.back(), 180.0, 6000);
        CHECK(s3_temporal(cur, h, kC) == doctest::Approx(0.0));
    }
    SUBCASE("empty history is an argument error at this level") {
        CHECK_THROWS_AS(s3_temporal(fix_at(0, 0, 1000), {}, kC), Error);
    }
}

TEST_CASE("s4: scatter-vs-accuracy band") {
    SUBCASE("identical samples (zero scatter) score 0") {
        std::vector<RawSample> raw(4, RawSample{10.0, 20.0, 0.01});
        CHECK(s4_fix_consistency(raw, kC) == 0.0);
    }
    SUBCASE("scatter 8 m at mean accuracy 10 m is inside the band") {
        const auto raw = cross_samples(10.0, 20.0, 8.0, 10.0);
        CHECK(s4_fix_consistency(raw, kC) == doctest::Approx(1.0));
    }
    SUBCASE("scatter 100 m at mean accuracy 10 m hits the upper knee") {
        const auto raw = cross_samples(10.0, 20.0, 100.0, 10.0);
        CHECK(s4_fix_consistency(raw, kC) == doctest::Approx(0.0).epsilon(1e-6));
    }
    SUBCASE("decay midpoint between the band edge and the ceiling") {
        const auto raw = cross_samples(10.0, 20.0, 65.0, 10.0);  // rho = 6.5
        CHECK(s4_fix_consistency(raw, kC) == doctest::Approx(0.5).epsilon(1e-4));
    }
    SUBCASE("fewer than 3 samples is an argument error at this level") {
        std::vector<RawSample> raw(2, RawSample{10.0, 20.0, 5.0});
        CHECK_THROWS_AS(s4_fix_consistency(raw, kC), Error);
    }
}

TEST_CASE("s5: distance relative to hint accuracy") {
    const Fix cur = fix_at(40.0, 30.0, 0);
    SUBCASE("zero distance") {
        NetworkHint h{cur.lat, cur.lon, 150.0};
        CHECK(s5_network(cur, h, kC) == 1.0);
    }
    SUBCASE("midpoint of the decay band") {
        double lat, lon;
        offset_meters(cur.lat, cur.lon, 6.5 * 150.0, 0.0, &lat, &lon);
        NetworkHint h{lat, lon, 150.0};
        CHECK(s5_network(cur, h, kC) == doctest::Approx(0.5).epsilon(1e-4));
    }
    SUBCASE("a 10,000 km mismatch zeroes the signal") {
        Fix miami = fix_at(25.76, -80.19, 0);
        NetworkHint h{35.68, 139.77, 1500.0};
        CHECK(s5_network(miami, h, kC) == 0.0);
    }
    SUBCASE("monotone non-increasing in distance") {
        double prev = 1.1;
        for (double d = 0.0; d < 2000.0; d += 25.0) {
            double lat, lon;
            offset_meters(cur.lat, cur.lon, d, 0.0, &lat, &lon);
            const double s = s5_network(cur, NetworkHint{lat, lon, 150.0}, kC);
            CHECK(s <= prev + 1e-12);
            prev = s;
        }
    }
}

TEST_CASE("evaluate_all: availability tracks the context") {
    const Fix base = fix_at(10.0, 20.0, 0);

    SUBCASE("first fix of a session: only S2 (plus S4/S5 when supplied)") {
        SignalContext ctx;
        const auto sv = evaluate_all(base, ctx, kC);
        CHECK(sv.mask() == signal_bit(SignalId::s2_accuracy));

        Fix with_extras = base;
        with_extras.raw_fixes = cross_samples(10.0, 20.0, 8.0, 10.0);
        SignalContext ctx2;
        ctx2.raw_fixes = std::span<const RawSample>(with_extras.raw_fixes);
        ctx2.net_hint = NetworkHint{10.0, 20.0, 200.0};
        const auto sv2 = evaluate_all(with_extras, ctx2, kC);
        CHECK(sv2.present(SignalId::s2_accuracy));
        CHECK(sv2.present(SignalId::s4_fix_consistency));
        CHECK(sv2.present(SignalId::s5_network));
        CHECK_FALSE(sv2.present(SignalId::s1_movement));
        CHECK_FALSE(sv2.present(SignalId::s3_temporal));
    }

    SUBCASE("history only: exactly S1, S2, S3") {
        const auto h = history_at_speed(5, 2.0);
        const Fix cur = fix_north(h.back(), 2.0, 5000);
        SignalContext ctx;
        ctx.history = std::span<const Fix>(h);
        const auto sv = evaluate_all(cur, ctx, kC);
        CHECK(sv.mask() == (signal_bit(SignalId::s1_movement) | signal_bit(SignalId::s2_accuracy) |
                            signal_bit(SignalId::s3_temporal)));
    }

    SUBCASE("full context: all five") {
        const auto h = history_at_speed(5, 2.0);
        Fix cur = fix_north(h.back(), 2.0, 5000);
        cur.raw_fixes = cross_samples(cur.lat, cur.lon, 8.0, 10.0);
        SignalContext ctx;
        ctx.history = std::span<const Fix>(h);
        ctx.raw_fixes = std::span<const RawSample>(cur.raw_fixes);
        ctx.net_hint = NetworkHint{cur.lat, cur.lon, 200.0};
        CHECK(evaluate_all(cur, ctx, kC).mask() == kAllSignalsMask);
    }

    SUBCASE("two raw samples are not enough for S4") {
        Fix cur = base;
        cur.raw_fixes = {{10.0, 20.0, 5.0}, {10.0, 20.0, 5.0}};
        SignalContext ctx;
        ctx.raw_fixes = std::span<const RawSample>(cur.raw_fixes);
        CHECK_FALSE(evaluate_all(cur, ctx, kC).present(SignalId::s4_fix_consistency));
    }
}

TEST_CASE("signals: fuzz keeps every emitted score in [0, 1]") {
    Rng rng(99);
    for (int i = 0; i < 400; ++i) {
        const double lat = rng.uniform(-80, 80), lon = rng.uniform(-175, 175);
        std::vector<Fix> h;
        const int hist_n = static_cast<int>(rng.next_u64() % 11);
        int64_t t = 0;
        for (int k = 0; k < hist_n; ++k) {
            t += 200 + static_cast<int64_t>(rng.next_u64() % 5000);
            Fix f = fix_at(lat + rng.uniform(-0.5, 0.5), lon + rng.uniform(-0.5, 0.5), t,
                           rng.uniform(0.001, 50.0));
            h.push_back(f);
        }
        t += 200 + static_cast<int64_t>(rng.next_u64() % 5000);
        Fix cur = fix_at(lat + rng.uniform(-0.5, 0.5), lon + rng.uniform(-0.5, 0.5), t,
                         rng.uniform(0.001, 50.0));
        const int raw_n = static_cast<int>(rng.next_u64() % 6);
        for (int k = 0; k < raw_n; ++k)
            cur.raw_fixes.push_back({lat + rng.uniform(-0.01, 0.01), lon + rng.uniform(-0.01, 0.01),
                                     rng.uniform(0.001, 50.0)});
        SignalContext ctx;
        ctx.history = std::span<const Fix>(h);
        ctx.raw_fixes = std::span<const RawSample>(cur.raw_fixes);
        if (rng.bernoulli(0.5))
            ctx.net_hint = NetworkHint{lat + rng.uniform(-1, 1), lon + rng.uniform(-1, 1),
                                       rng.uniform(1.0, 2000.0)};

        const auto sv = evaluate_all(cur, ctx, kC);
        CHECK(sv.present(SignalId::s1_movement) == !h.empty());
        CHECK(sv.present(SignalId::s3_temporal) == !h.empty());
        CHECK(sv.present(SignalId::s2_accuracy));
        CHECK(sv.present(SignalId::s4_fix_consistency) == (raw_n >= 3));
        CHECK(sv.present(SignalId::s5_network) == ctx.net_hint.has_value());
        for (int b = 0; b < kSignalCount; ++b) {
            const auto id = static_cast<SignalId>(b);
            if (sv.present(id)) {
                CHECK(sv.get(id) >= 0.0);
                CHECK(sv.get(id) <= 1.0);
            }
        }
    }
}
