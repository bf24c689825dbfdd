#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dsep/error.hpp"
#include "dsep/gauss_newton.hpp"
#include "dsep/models/dynamic_models.hpp"
#include "dsep/tdsim.hpp"
#include "test_support.hpp"

using namespace dsep;

using testing::steady_state_error;

TEST_SUITE("tdsim") {
    TEST_CASE("reference scenario sample counts") {
        CHECK(simulate(reference_scenario(ConnectionKind::GroundedWye)).size() == 400);
        CHECK(simulate(reference_scenario(ConnectionKind::Delta)).size() == 400);
        const SampledWindow sp = simulate(reference_scenario(ConnectionKind::SinglePhase));
        CHECK(sp.size() == 100);
        CHECK(sp.dt() == doctest::Approx(1e-4));
        CHECK(sp.has(Channel::v));
        CHECK(sp.has(Channel::i));
    }

    TEST_CASE("grounded-wye steady state matches the phasor oracle") {
        CHECK(steady_state_error(reference_scenario(ConnectionKind::GroundedWye), 0.1) < 5e-3);
        CHECK(steady_state_error(reference_scenario(ConnectionKind::Delta), 0.1) < 5e-3);
    }

    TEST_CASE("post-fault steady state matches the faulted oracle") {
        for (ConnectionKind conn : {ConnectionKind::GroundedWye, ConnectionKind::Delta})
            for (FaultKind f : {FaultKind::line_ground(Phase::B), FaultKind::line_line(PhasePair::CA)}) {
                CAPTURE(to_string(f));
                CHECK(steady_state_error(reference_scenario(conn, f), 0.1) < 5e-3);
            }
    }

    TEST_CASE("trapezoidal integration is second order") {
        CircuitScenario s = reference_scenario(ConnectionKind::GroundedWye);
        s.t_end = 0.1;
        // a coarse step makes the discretisation error dominate the DFT floor
        s.dt_sim = 250e-6;
        s.dt_sample = 500e-6;
        const double coarse = steady_state_error(s, 0.05);
        s.dt_sim = 125e-6;
        const double fine = steady_state_error(s, 0.05);
        CAPTURE(coarse);
        CAPTURE(fine);
        CHECK(coarse / fine == doctest::Approx(4.0).epsilon(0.15));
    }

    TEST_CASE("zero source voltage gives an all-zero record") {
        CircuitScenario s = reference_scenario(ConnectionKind::GroundedWye, FaultKind::line_ground(Phase::A));
        s.vll_rms = 0.0;
        const SampledWindow w = simulate(s);
        for (const auto& [c, samples] : w.channels())
            for (double x : samples) CHECK(x == 0.0);
    }

    TEST_CASE("single-phase record fits back to the load") {
        const SampledWindow w = simulate(reference_scenario(ConnectionKind::SinglePhase));
        const models::ModelId id{models::Family::Dynamic, ConnectionKind::SinglePhase, FaultKind::none(), false};
        const models::ModelProblem mp = models::build_dynamic_problem(id, w);
        const FitResult r = solve(mp.problem, mp.x0);
        const models::Estimates e = mp.estimates(r.x_hat);
        CHECK(testing::rel_err(e.r, 19.2) < 5e-3);
        CHECK(testing::rel_err(e.l, 25.465e-3) < 5e-3);
    }

    TEST_CASE("pre-fault samples equal the no-fault run") {
        for (ConnectionKind conn : {ConnectionKind::GroundedWye, ConnectionKind::Delta}) {
            const CircuitScenario base = reference_scenario(conn);
            const SampledWindow clean = simulate(base);
            const SampledWindow faulted = simulate(reference_scenario(conn, FaultKind::line_ground(Phase::A)));
            const auto last = static_cast<std::size_t>(std::floor(base.t_fault / base.dt_sample));
            for (const auto& [c, samples] : clean.channels())
                for (std::size_t k = 0; k < last; ++k) CHECK(std::abs(faulted.channel(c)[k] - samples[k]) <= 1e-10);
        }
    }

    TEST_CASE("delta line currents sum to zero without a ground fault") {
        for (FaultKind f : {FaultKind::none(), FaultKind::line_line(PhasePair::BC)}) {
            const SampledWindow w = simulate(reference_scenario(ConnectionKind::Delta, f));
            double peak = 0.0;
            for (double x : w.channel(Channel::ia)) peak = std::max(peak, std::abs(x));
            for (std::size_t k = 0; k < w.size(); ++k) {
                const double sum = w.channel(Channel::ia)[k] + w.channel(Channel::ib)[k] + w.channel(Channel::ic)[k];
                CHECK(std::abs(sum) <= 1e-9 * peak);
            }
        }
    }

    TEST_CASE("delta line-ground current sum is the fault current") {
        const CircuitScenario s = reference_scenario(ConnectionKind::Delta, FaultKind::line_ground(Phase::A));
        const SampledWindow w = simulate(s);
        double peak = 0.0;
        for (double x : w.channel(Channel::ia)) peak = std::max(peak, std::abs(x));
        for (std::size_t k = 0; k < w.size(); ++k) {
            const double sum = w.channel(Channel::ia)[k] + w.channel(Channel::ib)[k] + w.channel(Channel::ic)[k];
            const double fault = w.time(k) >= s.t_fault + s.dt_sample ? w.channel(Channel::va)[k] / (*s.load.rf + s.rg) : 0.0;
            if (w.time(k) < s.t_fault) CHECK(std::abs(sum) <= 1e-9 * peak);
            if (w.time(k) > s.t_fault + s.dt_sample) CHECK(std::abs(sum - fault) <= 1e-6 * std::max(peak, std::abs(fault)));
        }
    }

    TEST_CASE("steady-state extraction of a pure sinusoid") {
        const double w = 2 * std::numbers::pi * 60;
        const auto s = testing::sampled(1.0, w, 0.0, 5e-4, 400);
        const SampledWindow win = make_window(5e-4, {{Channel::v, s}, {Channel::i, s}});
        const SteadyStatePhasors p = steady_state_phasors(win, ConnectionKind::SinglePhase, 60.0, 0.0);
        CHECK(p.v[0].magnitude() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-6));
        CHECK(std::abs(p.v[0].angle()) < 1e-6);
        CHECK_THROWS_AS(steady_state_phasors(win, ConnectionKind::SinglePhase, 60.0, 0.19), Error);
    }

    TEST_CASE("scenario validation") {
        CircuitScenario s = reference_scenario(ConnectionKind::GroundedWye);
        s.t_end = 0.0;
        CHECK_THROWS_AS(simulate(s), Error);
        s = reference_scenario(ConnectionKind::GroundedWye);
        s.dt_sim = 1e-3;
        s.dt_sample = 1e-3;
        try {
            simulate(s);
            FAIL("expected StepTooLarge");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::StepTooLarge);
        }
        s = reference_scenario(ConnectionKind::GroundedWye);
        s.rs = -1.0;
        CHECK_THROWS_AS(simulate(s), Error);
        s = reference_scenario(ConnectionKind::GroundedWye);
        s.dt_sample = 5e-6;
        CHECK_THROWS_AS(simulate(s), Error);
    }
}
