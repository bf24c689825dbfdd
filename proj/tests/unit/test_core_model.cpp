#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dsep/error.hpp"
#include "dsep/phasor.hpp"
#include "dsep/types.hpp"
#include "dsep/window.hpp"
#include "test_support.hpp"

using namespace dsep;

namespace {

ErrorCode code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_SUITE("core-model") {
    TEST_CASE("phasor polar round trip") {
        for (double mag : {1e-3, 1.0, 480.0})
            for (double ang : {-3.0, -0.5, 0.0, 1.2, 3.1}) {
                const Phasor p = Phasor::from_polar(mag, ang);
                CHECK(p.finite());
                CHECK(p.magnitude() == doctest::Approx(mag).epsilon(1e-12));
                CHECK(p.angle() == doctest::Approx(ang).epsilon(1e-12));
            }
    }

    TEST_CASE("minimal window") {
        const SampledWindow w = make_window(5e-4, std::map<std::string, std::vector<double>>{
                                                      {"v", {0.0, 1.0, 0.0}}, {"i", {0.0, 2.0, 0.0}}});
        CHECK(w.size() == 3);
        CHECK(w.dt() == 5e-4);
        CHECK(w.channel(Channel::i)[1] == 2.0);
    }

    TEST_CASE("window at the single-phase sample rate") {
        const auto s = testing::sampled(1.0, 2 * std::numbers::pi * 60, 0.0, 1e-4, 100);
        const SampledWindow w = make_window(1e-4, {{Channel::v, s}, {Channel::i, s}});
        CHECK(w.size() == 100);
        CHECK(w.time(99) == doctest::Approx(9.9e-3));
    }

    TEST_CASE("window shape errors") {
        using Named = std::map<std::string, std::vector<double>>;
        CHECK(code_of([] { make_window(5e-4, Named{{"va", {1, 2, 3}}, {"ia", {1, 2}}}); }) ==
              ErrorCode::LengthMismatch);
        CHECK(code_of([] { make_window(5e-4, Named{{"vx", {1, 2, 3}}}); }) == ErrorCode::UnknownChannel);
        CHECK(code_of([] { make_window(0.0, Named{{"v", {1, 2, 3}}}); }) == ErrorCode::NonPositiveDt);
        CHECK(code_of([] { make_window(-1.0, Named{{"v", {1, 2, 3}}}); }) == ErrorCode::NonPositiveDt);
        CHECK(code_of([] { make_window(1e-3, Named{{"v", {1, 2}}}); }) == ErrorCode::LengthMismatch);
        CHECK(code_of([] { make_window(1e-3, Named{{"v", {1, NAN, 2}}}); }) == ErrorCode::NonFinite);
        CHECK(code_of([] { make_window(1e-3, Named{}); }) == ErrorCode::LengthMismatch);
    }

    TEST_CASE("channel vocabulary is closed and round-trips") {
        for (Channel c : kAllChannels) CHECK(parse_channel(channel_name(c)) == c);
        CHECK_FALSE(parse_channel("t").has_value());
        CHECK_FALSE(parse_channel("VA").has_value());
    }

    TEST_CASE("slice and scale") {
        const auto s = testing::sampled(2.0, 377.0, 0.3, 5e-4, 40);
        const SampledWindow w = make_window(5e-4, {{Channel::va, s}});
        const SampledWindow part = w.slice(10, 20);
        CHECK(part.size() == 20);
        CHECK(part.t0() == doctest::Approx(10 * 5e-4));
        CHECK(part.channel(Channel::va)[0] == s[10]);
        CHECK(code_of([&] { w.slice(38, 3); }) == ErrorCode::WindowTooShort);
        CHECK(w.scaled(3.0).channel(Channel::va)[7] == 3.0 * s[7]);
    }

    TEST_CASE("zero noise is the identity") {
        const auto s = testing::sampled(1.0, 377.0, 0.0, 5e-4, 50);
        const SampledWindow w = make_window(5e-4, {{Channel::va, s}, {Channel::ia, s}});
        const SampledWindow n = inject_noise(w, 0.0, 7);
        CHECK(n.channel(Channel::va)[13] == w.channel(Channel::va)[13]);
        for (std::size_t k = 0; k < w.size(); ++k) CHECK(n.channel(Channel::ia)[k] == s[k]);
    }

    TEST_CASE("seeded noise is reproducible") {
        const auto s = testing::sampled(1.0, 377.0, 0.0, 5e-4, 200);
        const SampledWindow w = make_window(5e-4, {{Channel::v, s}, {Channel::i, s}});
        const SampledWindow a = inject_noise(w, 0.1, 42);
        const SampledWindow b = inject_noise(w, 0.1, 42);
        const SampledWindow c = inject_noise(w, 0.1, 43);
        bool differs = false;
        for (std::size_t k = 0; k < w.size(); ++k) {
            CHECK(a.channel(Channel::v)[k] == b.channel(Channel::v)[k]);
            differs = differs || a.channel(Channel::v)[k] != c.channel(Channel::v)[k];
        }
        CHECK(differs);
    }

    TEST_CASE("noise is bounded by the channel peak and zero mean") {
        const std::size_t n = 20000;
        const auto s = testing::sampled(1.0, 2 * std::numbers::pi * 60, 0.0, 1e-5, n);
        std::vector<double> big(s);
        for (double& x : big) x *= 50.0;
        const SampledWindow w = make_window(1e-5, {{Channel::v, s}, {Channel::i, big}});
        const SampledWindow noisy = inject_noise(w, 0.1, 1);
        double peak = 0.0;
        for (double x : s) peak = std::max(peak, std::abs(x));
        double sum = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double d = noisy.channel(Channel::v)[k] - s[k];
            CHECK(std::abs(d) <= 0.1 * peak);
            CHECK(std::abs(noisy.channel(Channel::i)[k] - big[k]) <= 0.1 * 50.0 * peak * (1 + 1e-12));
            sum += d;
        }
        // uniform on [-a, a]: sd of the mean is a / sqrt(3 n)
        const double mean_sd = 0.1 * peak / std::sqrt(3.0 * static_cast<double>(n));
        CHECK(std::abs(sum / static_cast<double>(n)) < 3.0 * mean_sd);
    }

    TEST_CASE("fundamental phasor of a unit sinusoid") {
        const double w = 2 * std::numbers::pi * 60;
        const auto s = testing::sampled(1.0, w, 0.0, 5e-4, 400);
        const Phasor p = fundamental_phasor(s, 5e-4, 60.0);
        CHECK(p.magnitude() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-6));
        CHECK(std::abs(p.angle()) < 1e-6);
        const auto shifted = testing::sampled(3.0, w, -0.7, 5e-4, 400);
        const Phasor q = fundamental_phasor(shifted, 5e-4, 60.0);
        CHECK(q.magnitude() == doctest::Approx(3.0 / std::sqrt(2.0)).epsilon(1e-9));
        CHECK(q.angle() == doctest::Approx(-0.7).epsilon(1e-9));
    }

    TEST_CASE("load parameter validation") {
        CHECK_NOTHROW(LoadParams{1.0, 1e-3, std::nullopt}.validate());
        CHECK(code_of([] { LoadParams{0.0, 1e-3, std::nullopt}.validate(); }) == ErrorCode::InvalidArgument);
        CHECK(code_of([] { LoadParams{1.0, -1e-3, std::nullopt}.validate(); }) == ErrorCode::InvalidArgument);
        CHECK(code_of([] { LoadParams{1.0, 1e-3, 0.0}.validate(); }) == ErrorCode::InvalidArgument);
    }

    TEST_CASE("fault and connection text") {
        for (Phase p : kPhases) CHECK(parse_fault(to_string(FaultKind::line_ground(p))) == FaultKind::line_ground(p));
        for (PhasePair p : kPairs) CHECK(parse_fault(to_string(FaultKind::line_line(p))) == FaultKind::line_line(p));
        CHECK(parse_fault("None") == FaultKind::none());
        CHECK_FALSE(parse_fault("LG-D").has_value());
        CHECK(parse_connection("gwye") == ConnectionKind::GroundedWye);
        CHECK(parse_connection(to_string(ConnectionKind::Delta)) == ConnectionKind::Delta);
        CHECK_FALSE(parse_connection("wye-ungrounded").has_value());
        CHECK(rotate(Phase::C, 1) == Phase::A);
        CHECK(rotate(PhasePair::AB, -1) == PhasePair::CA);
    }
}
