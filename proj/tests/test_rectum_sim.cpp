#include <gtest/gtest.h>

#include <cmath>

#include "pouchsim/rectum_sim.hpp"

using namespace pouchsim::rectum;
using pouchsim::ValidationError;

namespace {

BolusSpec cylinder(double d, double l) { return {BolusShape::Cylinder, d, l, 0.09}; }
BolusSpec sphere(double d) { return {BolusShape::Sphere, d, 0.0, 0.09}; }
BolusSpec liquid(double l) { return {BolusShape::Liquid, 20.0, l, 0.09}; }

const CutFeces kCut{12, 2, 2, 30, 1};
const LongFeces kLong{1, 1, 30, 1};
const Diarrhea kDiarrhea{10};

void expect_conserved(const SimTrace& tr) {
    for (const auto& r : tr.rows) ASSERT_NEAR(r.expelled_mm + r.retained_mm, tr.initial_length_mm, 1e-9) << r.time_s;
}

}  // namespace

TEST(Geometry, Constants) {
    const auto g = build_geometry();
    EXPECT_EQ(g.segment(5).entrance_radius_mm, 32.5);
    EXPECT_EQ(g.segment(5).exit_radius_mm, 32.5);
    EXPECT_EQ(g.segment(1).exit_radius_mm, 15);
    EXPECT_EQ(g.segment(2).entrance_radius_mm, 17);
    EXPECT_EQ(g.segment(2).exit_radius_mm, 21);
    EXPECT_EQ(g.segment(3).exit_radius_mm, 28);
    EXPECT_EQ(g.segment(4).exit_radius_mm, 32);
    EXPECT_EQ(g.anorectal_angle_deg, 165);
    EXPECT_EQ(g.total_length_mm(), 200);
    EXPECT_EQ(g.segment(4).max_occlusion, 0.97);
    EXPECT_EQ(g.segment(5).max_occlusion, 0.65);
    EXPECT_EQ(g.ring_position_mm(1), 180);
    EXPECT_EQ(g.ring_position_mm(5), 20);
}

TEST(Schedule, CutFecesWindows) {
    const auto s = schedule_for_scenario(kCut, 60);
    EXPECT_EQ(s.pressure_at(1, 11.9), 0);
    EXPECT_EQ(s.pressure_at(1, 13.0), 30);
    EXPECT_EQ(s.pressure_at(1, 14.5), 0);
    EXPECT_EQ(s.pressure_at(1, 16.0), 30);
    for (double t : {0.0, 7.3, 59.9}) EXPECT_EQ(s.pressure_at(5, t), 1);
}

TEST(Schedule, LongFecesWindows) {
    const auto s = schedule_for_scenario(kLong, 30);
    EXPECT_EQ(s.pressure_at(1, 0.5), 30);
    EXPECT_EQ(s.pressure_at(1, 1.5), 0);
    EXPECT_EQ(s.pressure_at(1, 2.5), 30);
}

TEST(Schedule, PeristalticWave) {
    const auto s = schedule_for_scenario(kLong, 40);
    // A4 leads, A3 and A2 follow one and two quarters later.
    EXPECT_EQ(s.pressure_at(4, 0.5), 30);
    EXPECT_EQ(s.pressure_at(3, 0.5), 0);
    EXPECT_EQ(s.pressure_at(3, 1.5), 30);
    EXPECT_EQ(s.pressure_at(2, 1.5), 0);
    EXPECT_EQ(s.pressure_at(2, 2.5), 30);
    EXPECT_EQ(s.pressure_at(4, 2.5), 0);
    for (int a = 2; a <= 4; ++a) {
        double on = 0;
        for (const auto& iv : s.actuators[static_cast<std::size_t>(a - 1)])
            if (iv.start_s >= 8 && iv.start_s < 12) on += iv.end_s - iv.start_s;
        EXPECT_DOUBLE_EQ(on, 2.0) << "A" << a;
    }
}

TEST(Schedule, DiarrheaHoldsOnlyA1) {
    const auto s = schedule_for_scenario(kDiarrhea, 30);
    EXPECT_EQ(s.pressure_at(1, 9.99), 30);
    EXPECT_EQ(s.pressure_at(1, 10.0), 0);
    for (int a = 2; a <= 5; ++a) EXPECT_EQ(s.pressure_at(a, 5), 0);
}

TEST(Schedule, Errors) {
    EXPECT_THROW(schedule_for_scenario(LongFeces{1, 1, 30, 0.05}, 10, 0.05), ValidationError);
    EXPECT_THROW(schedule_for_scenario(CutFeces{-1, 2, 2, 30, 1}, 10), ValidationError);
    EXPECT_THROW(schedule_for_scenario(CutFeces{0, 0, 2, 30, 1}, 10), ValidationError);
    EXPECT_THROW(schedule_for_scenario(LongFeces{1, 1, 130, 1}, 10), ValidationError);
    EXPECT_THROW(schedule_for_scenario(kLong, 0), ValidationError);
    EXPECT_NO_THROW(schedule_for_scenario(CutFeces{0, 2, 2, 30, 1}, 10));
}

TEST(Occlusion, Targets) {
    const auto g = build_geometry();
    EXPECT_DOUBLE_EQ(occlusion_target(g.segment(4), 30), 0.97);
    EXPECT_DOUBLE_EQ(occlusion_target(g.segment(5), 30), 0.65);
    EXPECT_DOUBLE_EQ(occlusion_target(g.segment(2), 10), 0.50);
    EXPECT_EQ(occlusion_target(g.segment(2), 0), 0.0);
    EXPECT_THROW(occlusion_target(g.segment(2), -1), ValidationError);
}

TEST(StepActuator, FixedPointAndNoOvershoot) {
    ActuatorState s{1, 30, 0.4, 3.0};
    EXPECT_EQ(step_actuator(s, 0.4, 0.05).occlusion, 0.4);
    ActuatorState up{1, 30, 0.0, 3.0};
    for (int i = 0; i < 400; ++i) {
        const auto next = step_actuator(up, 0.97, 0.05);
        EXPECT_GE(next.occlusion, up.occlusion);
        EXPECT_LE(next.occlusion, 0.97);
        up = next;
    }
    ActuatorState down{1, 0, 1.0, 3.0};
    for (int i = 0; i < 400; ++i) {
        const auto next = step_actuator(down, 0.2, 0.05);
        EXPECT_LE(next.occlusion, down.occlusion);
        EXPECT_GE(next.occlusion, 0.2);
        down = next;
    }
}

TEST(StepActuator, RecoveryInThreeTau) {
    ActuatorState s{1, 0, 1.0, 3.0};  // tau_fall = 1 s
    for (int i = 0; i < 60; ++i) s = step_actuator(s, 0.0, 0.05);
    EXPECT_LE(s.occlusion, 0.05);
    EXPECT_NEAR(s.occlusion, std::exp(-3.0), 1e-12);
}

TEST(StepActuator, Errors) {
    EXPECT_THROW(step_actuator({}, 1.2, 0.05), ValidationError);
    EXPECT_THROW(step_actuator({}, 0.5, 0.0), ValidationError);
}

TEST(SlipEfficiency, Values) {
    EXPECT_DOUBLE_EQ(slip_efficiency(30, 0.09), 1.0);
    EXPECT_DOUBLE_EQ(slip_efficiency(15, 0.09), 0.5);
    EXPECT_DOUBLE_EQ(slip_efficiency(30, 0.0), 0.2);
    EXPECT_DOUBLE_EQ(slip_efficiency(60, 0.2), 1.0);
    EXPECT_THROW(slip_efficiency(-1, 0.09), ValidationError);
}

TEST(Passable, Diameters) {
    const auto g = build_geometry();
    EXPECT_TRUE(passable(cylinder(20, 70), g));
    EXPECT_FALSE(passable(sphere(35), g));
    EXPECT_FALSE(passable(cylinder(30, 70), g));
    EXPECT_TRUE(passable(sphere(29.9), g));
    EXPECT_TRUE(passable({BolusShape::Liquid, 80, 75, 0.09}, g));
}

TEST(Bolus, Validation) {
    EXPECT_THROW(run(kLong, cylinder(0, 70)), ValidationError);
    EXPECT_THROW(run(kLong, cylinder(20, 0)), ValidationError);
    EXPECT_THROW(run(kLong, {BolusShape::Cylinder, 20, 70, 0.3}), ValidationError);
    EXPECT_NO_THROW(run(kLong, sphere(20)));
}

TEST(Run, TimeStepErrors) {
    EXPECT_THROW(run(kLong, cylinder(20, 70), 0.3, 10), ValidationError);  // > t_quarter/4
    EXPECT_THROW(run(kLong, cylinder(20, 70), 0.0, 10), ValidationError);
    EXPECT_THROW(run(kLong, cylinder(20, 70), 0.05, 0), ValidationError);
    EXPECT_NO_THROW(run(kLong, cylinder(20, 70), 0.25, 10));
}

TEST(Run, DiarrheaExpelsLiquidAfterRelease) {
    const auto tr = run(kDiarrhea, liquid(75));
    ASSERT_EQ(tr.status, SimStatus::Expelled);
    EXPECT_NEAR(tr.expelled_mm(), 75.0, 1e-12);
    for (const auto& r : tr.rows)
        if (r.time_s <= 9.9 + 1e-9) {
            EXPECT_EQ(r.expelled_mm, 0.0);
        }
    // Release, drain time, and three fall time constants.
    EXPECT_LE(tr.rows.back().time_s, 10 + 75.0 / 50.0 + 3.0);
}

TEST(Run, CutFecesSeversAfterT0) {
    const auto tr = run(kCut, cylinder(20, 70));
    ASSERT_GE(tr.severed_count(), 1u);
    EXPECT_GE(tr.pieces.front().time_s, 12.0);
    expect_conserved(tr);
}

TEST(Run, LongFecesLeavesLongerPieces) {
    const auto cut = run(kCut, cylinder(20, 150));
    const auto lng = run(kLong, cylinder(20, 150));
    EXPECT_EQ(lng.status, SimStatus::Expelled);
    EXPECT_GT(lng.max_piece_mm(), cut.max_piece_mm());
    expect_conserved(cut);
    expect_conserved(lng);
}

TEST(Run, LargeSphereBlockedEverywhere) {
    for (const ScenarioScript& s : {ScenarioScript{kCut}, ScenarioScript{kLong}, ScenarioScript{kDiarrhea}}) {
        const auto tr = run(s, sphere(35));
        EXPECT_EQ(tr.status, SimStatus::Blocked);
        EXPECT_EQ(tr.expelled_mm(), 0.0);
    }
}

TEST(Run, SolidDoesNotMoveWithoutPeristalsis) {
    const auto tr = run(kDiarrhea, cylinder(20, 70), 0.05, 30);
    EXPECT_EQ(tr.status, SimStatus::Timeout);
    EXPECT_EQ(tr.expelled_mm(), 0.0);
}

TEST(Run, TraceInvariants) {
    for (const ScenarioScript& s : {ScenarioScript{kCut}, ScenarioScript{kLong}})
        for (const auto& b : {cylinder(20, 70), cylinder(25, 150), sphere(25)}) {
            const auto tr = run(s, b);
            double prev = 0.0;
            for (const auto& r : tr.rows) {
                EXPECT_GE(r.expelled_mm, prev);
                prev = r.expelled_mm;
                EXPECT_GE(r.front_mm, 0.0);
                EXPECT_LE(r.front_mm, 200.0);
                for (double o : r.occlusion) {
                    EXPECT_GE(o, 0.0);
                    EXPECT_LE(o, 1.0);
                }
            }
            expect_conserved(tr);
        }
}

TEST(Run, Deterministic) {
    const auto a = run(kCut, cylinder(20, 150));
    const auto b = run(kCut, cylinder(20, 150));
    EXPECT_EQ(trace_to_csv(a), trace_to_csv(b));
    EXPECT_EQ(cuts_to_csv(a), cuts_to_csv(b));
}

TEST(Run, HalvingDtKeepsExpelledLength) {
    const std::vector<std::pair<ScenarioScript, BolusSpec>> cases{
        {kCut, cylinder(20, 70)}, {kLong, cylinder(20, 150)}, {kDiarrhea, liquid(75)}};
    for (const auto& [s, b] : cases) {
        const double coarse = run(s, b, 0.05).expelled_mm();
        const double fine = run(s, b, 0.025).expelled_mm();
        EXPECT_LT(std::abs(fine - coarse), 0.02 * coarse);
    }
}

TEST(Run, SteadyStateOcclusionsAfterHold) {
    // Diarrhea holds A1 at 30 kPa; a long wave-free hold on A2..A5 is not
    // scripted, so drive the actuator model directly with the 30 kPa targets.
    const auto g = build_geometry();
    for (int id = 1; id <= 5; ++id) {
        ActuatorState s{id, 30, 0.0, 3.0};
        const double target = occlusion_target(g.segment(id), 30);
        for (int i = 0; i < 200; ++i) s = step_actuator(s, target, 0.05);
        EXPECT_NEAR(s.occlusion, g.segment(id).max_occlusion, 1e-6);
    }
}

TEST(Run, ScheduledReleaseRecovers) {
    const auto tr = run(kDiarrhea, sphere(35), 0.05, 30);  // blocked: trace has one row only
    EXPECT_EQ(tr.rows.size(), 1u);
    Simulator sim(kDiarrhea, cylinder(20, 70), 0.05, 20);
    const auto full = sim.run();
    double at_release = 0.0;
    for (const auto& r : full.rows)
        if (std::abs(r.time_s - 10.0) < 1e-9) at_release = r.occlusion[0];
    ASSERT_GT(at_release, 0.9);
    for (const auto& r : full.rows)
        if (r.time_s >= 10.0 + 1.1 * 3.0 - 1e-9) {
            EXPECT_LT(r.occlusion[0], 0.05 * at_release);
        }
}

TEST(DefecationSpeed, Definition) {
    SimTrace tr;
    tr.status = SimStatus::Expelled;
    tr.first_motion_s = 4.0;
    tr.last_expulsion_s = 18.0;
    tr.rows.push_back({});
    tr.rows.back().expelled_mm = 70.0;
    EXPECT_DOUBLE_EQ(*defecation_speed(tr), 5.0);
    tr.status = SimStatus::Timeout;
    EXPECT_FALSE(defecation_speed(tr));
}

TEST(DefecationSpeed, MonotoneInPressureAndQuarterPeriod) {
    const auto bolus = cylinder(20, 70);
    double prev = 0.0;
    for (double p : {10.0, 15.0, 20.0, 30.0}) {
        const auto v = defecation_speed(run(LongFeces{1, 1, p, 1}, bolus));
        ASSERT_TRUE(v) << p;
        EXPECT_GE(*v, prev) << p;
        prev = *v;
    }
    prev = 1e9;
    for (double tq : {0.5, 1.0, 2.0}) {
        const auto v = defecation_speed(run(LongFeces{1, 1, 30, tq}, bolus, std::min(0.05, tq / 4)));
        ASSERT_TRUE(v) << tq;
        EXPECT_LE(*v, prev) << tq;
        prev = *v;
    }
}

TEST(DefecationSpeed, LubricationHelps) {
    const auto dry = defecation_speed(run(kLong, {BolusShape::Cylinder, 20, 70, 0.0}));
    const auto wet = defecation_speed(run(kLong, cylinder(20, 70)));
    ASSERT_TRUE(dry && wet);
    EXPECT_LT(*dry, *wet);
}

TEST(TraceCsv, Schema) {
    const auto tr = run(kCut, cylinder(20, 70));
    const auto lines = pouchsim::text::split_lines(trace_to_csv(tr));
    EXPECT_EQ(lines[0], kTraceHeader);
    EXPECT_EQ(pouchsim::text::split_fields(lines[1]).size(), 13u);
    EXPECT_EQ(lines.size(), tr.rows.size() + 1);
    const auto cuts = pouchsim::text::split_lines(cuts_to_csv(tr));
    EXPECT_EQ(cuts[0], kCutsHeader);
    EXPECT_EQ(cuts.size(), tr.pieces.size() + 1);
}
