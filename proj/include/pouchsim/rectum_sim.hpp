#pragma once

/**
 * @file rectum_sim.hpp
 * @brief Fixed-step simulator of the five-segment rectal module.
 *
 * Axis convention: position 0 is the S5 inlet and the anus plane sits at
 * 200 mm. Segment S-k spans [(5-k)*40, (6-k)*40] and its ring actuator A-k
 * acts at the segment centre. A1 is the anal sphincter, A2..A4 drive the
 * peristaltic wave (A4 -> A3 -> A2), and A5 holds a constant low pressure
 * as a backflow barrier.
 *
 * Each step:
 *   1. read commanded pressures from the schedule at the step start time;
 *   2. move every occlusion one first-order-lag step toward its target;
 *   3. move the bolus (solids by peristaltic push, liquids by draining);
 *   4. sever whatever protrudes past the anus when A1 closes through 0.9;
 *   5. release a solid whose tail has cleared the anus.
 *
 * Solid transport rules:
 *   - a ring is "engaged" once it is commanded and has reached at least half
 *     of its commanded target occlusion;
 *   - the bolus is pushed when an engaged A2..A4 ring sits inside the bolus
 *     body, or when an engaged A1 squeezes a bolus that occupies S-1;
 *   - the bolus is held while the first ring ahead of its head is occluded
 *     beyond 0.5;
 *   - while a solid occupies S-1, A1 closes with the slower sever time
 *     constant, so short A1 pulses squeeze the bolus without cutting it.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "pouchsim/errors.hpp"
#include "pouchsim/text.hpp"

namespace pouchsim::rectum {

inline constexpr std::size_t kSegmentCount = 5;

struct SegmentSpec {
    int id = 1;  // S-id, 1 = anal end
    double entrance_radius_mm = 0.0;
    double exit_radius_mm = 0.0;
    double length_mm = 40.0;
    double max_occlusion = 1.0;  // steady-state contraction ratio at 30 kPa
};

struct RectumGeometry {
    std::array<SegmentSpec, kSegmentCount> segments;  // [0] = S-1 ... [4] = S-5
    double anorectal_angle_deg = 165.0;               // metadata only
    std::string_view tissue_material = "Ecoflex 00-30";

    const SegmentSpec& segment(int id) const { return segments.at(static_cast<std::size_t>(id - 1)); }

    double total_length_mm() const {
        double s = 0.0;
        for (const auto& seg : segments) s += seg.length_mm;
        return s;
    }
    double anus_position_mm() const { return total_length_mm(); }

    /// Axial start (inlet side) of segment S-id.
    double segment_start_mm(int id) const {
        double s = 0.0;
        for (int k = kSegmentCount; k > id; --k) s += segment(k).length_mm;
        return s;
    }
    double ring_position_mm(int id) const { return segment_start_mm(id) + 0.5 * segment(id).length_mm; }
};

inline RectumGeometry build_geometry() {
    RectumGeometry g;
    g.segments = {{
        {1, 15.0, 15.0, 40.0, 1.00},
        {2, 17.0, 21.0, 40.0, 1.00},
        {3, 21.0, 28.0, 40.0, 1.00},
        {4, 28.0, 32.0, 40.0, 0.97},
        {5, 32.5, 32.5, 40.0, 0.65},
    }};
    return g;
}

// ---- actuators ------------------------------------------------------------

inline constexpr double kSaturationKpa = 20.0;

inline double occlusion_target(const SegmentSpec& seg, double p_kpa) {
    if (!(p_kpa >= 0.0)) throw ValidationError("occlusion_target: pressure must be >= 0");
    return seg.max_occlusion * std::min(p_kpa, kSaturationKpa) / kSaturationKpa;
}

struct ActuatorState {
    int id = 1;  // A-id drives S-id
    double commanded_pressure_kpa = 0.0;
    double occlusion = 0.0;
    double recovery_time_s = 3.0;
};

inline constexpr double kRiseTauS = 0.3;

/// First-order lag toward `target`; falls with tau = recovery_time / 3.
inline ActuatorState step_actuator(ActuatorState s, double target, double dt_s, double rise_tau_s = kRiseTauS) {
    if (!(target >= 0.0 && target <= 1.0)) throw ValidationError("step_actuator: target must lie in [0, 1]");
    if (!(dt_s > 0.0)) throw ValidationError("step_actuator: dt must be > 0");
    const double tau = target > s.occlusion ? rise_tau_s : s.recovery_time_s / 3.0;
    s.occlusion += (target - s.occlusion) * (1.0 - std::exp(-dt_s / tau));
    s.occlusion = std::clamp(s.occlusion, 0.0, 1.0);
    return s;
}

// ---- schedules ------------------------------------------------------------

struct PressureInterval {
    double start_s = 0.0;
    double end_s = 0.0;
    double pressure_kpa = 0.0;
};

/// Piecewise-constant pressure per actuator; uncovered times read 0 kPa.
struct ControlSchedule {
    std::array<std::vector<PressureInterval>, kSegmentCount> actuators;  // [0] = A1
    double total_duration_s = 0.0;

    double pressure_at(int actuator_id, double t) const {
        const auto& iv = actuators.at(static_cast<std::size_t>(actuator_id - 1));
        auto it = std::upper_bound(iv.begin(), iv.end(), t,
                                   [](double x, const PressureInterval& p) { return x < p.start_s; });
        if (it == iv.begin()) return 0.0;
        --it;
        return t < it->end_s ? it->pressure_kpa : 0.0;
    }

    void validate() const {
        for (std::size_t a = 0; a < actuators.size(); ++a) {
            double last_end = 0.0;
            for (const auto& p : actuators[a]) {
                if (!(p.start_s >= last_end && p.end_s > p.start_s && p.end_s <= total_duration_s + 1e-12))
                    throw ValidationError("schedule: A" + std::to_string(a + 1) +
                                          " intervals overlap or leave [0, duration]");
                if (!(p.pressure_kpa >= 0.0 && p.pressure_kpa <= 100.0))
                    throw ValidationError("schedule: pressures must lie in [0, 100] kPa");
                last_end = p.end_s;
            }
        }
    }
};

struct Diarrhea {
    double hold_s = 10.0;
};

struct CutFeces {
    double t0_s = 12.0;
    double t1_s = 2.0;
    double t2_s = 2.0;
    double p_kpa = 30.0;
    double t_quarter_s = 1.0;
};

struct LongFeces {
    double t1_s = 1.0;
    double t2_s = 1.0;
    double p_kpa = 30.0;
    double t_quarter_s = 1.0;
};

using ScenarioScript = std::variant<Diarrhea, CutFeces, LongFeces>;

inline constexpr double kSphincterKpa = 30.0;
inline constexpr double kBarrierKpa = 1.0;

inline void validate_script(const ScenarioScript& s) {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0 && std::isfinite(v))) throw ValidationError(std::string(name) + " must be > 0");
    };
    auto pressure = [](double v) {
        if (!(v >= 0.0 && v <= 100.0)) throw ValidationError("p_kpa must lie in [0, 100]");
    };
    std::visit(
        [&](const auto& sc) {
            using T = std::decay_t<decltype(sc)>;
            if constexpr (std::is_same_v<T, Diarrhea>) {
                positive(sc.hold_s, "hold_s");
            } else if constexpr (std::is_same_v<T, CutFeces>) {
                if (!(sc.t0_s >= 0.0 && std::isfinite(sc.t0_s))) throw ValidationError("t0_s must be >= 0");
                positive(sc.t1_s, "t1_s");
                positive(sc.t2_s, "t2_s");
                positive(sc.t_quarter_s, "t_quarter_s");
                pressure(sc.p_kpa);
            } else {
                positive(sc.t1_s, "t1_s");
                positive(sc.t2_s, "t2_s");
                positive(sc.t_quarter_s, "t_quarter_s");
                pressure(sc.p_kpa);
            }
        },
        s);
}

/// Quarter period of the peristaltic wave; empty for scenarios without one.
inline std::optional<double> quarter_period(const ScenarioScript& s) {
    if (const auto* c = std::get_if<CutFeces>(&s)) return c->t_quarter_s;
    if (const auto* l = std::get_if<LongFeces>(&s)) return l->t_quarter_s;
    return std::nullopt;
}

inline double wave_pressure(const ScenarioScript& s) {
    if (const auto* c = std::get_if<CutFeces>(&s)) return c->p_kpa;
    if (const auto* l = std::get_if<LongFeces>(&s)) return l->p_kpa;
    return 0.0;
}

namespace detail {

inline void add_interval(std::vector<PressureInterval>& v, double start, double end, double total, double p) {
    if (start >= total) return;
    v.push_back({start, std::min(end, total), p});
}

inline void add_wave(ControlSchedule& sch, double p, double tq, double total) {
    const double period = 4.0 * tq;
    // A4 leads, A3 and A2 follow at one and two quarter periods.
    const std::array<std::pair<int, double>, 3> phases{{{4, 0.0}, {3, tq}, {2, 2.0 * tq}}};
    for (const auto& [id, offset] : phases)
        for (long k = 0;; ++k) {
            const double start = static_cast<double>(k) * period + offset;
            if (start >= total) break;
            add_interval(sch.actuators[static_cast<std::size_t>(id - 1)], start, start + 2.0 * tq, total, p);
        }
}

inline void add_sphincter_cycle(ControlSchedule& sch, double t0, double on, double off, double total) {
    const double period = on + off;
    for (long k = 0;; ++k) {
        const double start = t0 + static_cast<double>(k) * period;
        if (start >= total) break;
        add_interval(sch.actuators[0], start, start + on, total, kSphincterKpa);
    }
}

}  // namespace detail

inline ControlSchedule schedule_for_scenario(const ScenarioScript& script, double total_duration_s,
                                             double dt_s = 0.05) {
    validate_script(script);
    if (!(total_duration_s > 0.0)) throw ValidationError("schedule: duration must be > 0");
    if (const auto tq = quarter_period(script); tq && *tq <= dt_s)
        throw ValidationError("schedule: t_quarter_s must exceed dt_s");

    ControlSchedule sch;
    sch.total_duration_s = total_duration_s;
    std::visit(
        [&](const auto& sc) {
            using T = std::decay_t<decltype(sc)>;
            if constexpr (std::is_same_v<T, Diarrhea>) {
                detail::add_interval(sch.actuators[0], 0.0, sc.hold_s, total_duration_s, kSphincterKpa);
            } else {
                detail::add_interval(sch.actuators[4], 0.0, total_duration_s, total_duration_s, kBarrierKpa);
                detail::add_wave(sch, sc.p_kpa, sc.t_quarter_s, total_duration_s);
                double t0 = 0.0;
                if constexpr (std::is_same_v<T, CutFeces>) t0 = sc.t0_s;
                detail::add_sphincter_cycle(sch, t0, sc.t1_s, sc.t2_s, total_duration_s);
            }
        },
        script);
    sch.validate();
    return sch;
}

/// Actuator occlusions only, for an arbitrary schedule and no bolus. Row i
/// holds the state after i steps.
inline std::vector<std::array<double, kSegmentCount>> actuator_response(
    const ControlSchedule& schedule, double dt_s, const RectumGeometry& geometry = build_geometry(),
    const std::array<double, kSegmentCount>& recovery_time_s = {3.0, 3.0, 3.0, 3.0, 3.0}) {
    schedule.validate();
    if (!(dt_s > 0.0)) throw ValidationError("dt_s must be > 0");
    std::array<ActuatorState, kSegmentCount> act{};
    for (std::size_t a = 0; a < kSegmentCount; ++a) act[a] = {static_cast<int>(a + 1), 0.0, 0.0, recovery_time_s[a]};
    const auto steps = static_cast<long>(std::llround(schedule.total_duration_s / dt_s));
    std::vector<std::array<double, kSegmentCount>> rows(1);
    for (long i = 0; i < steps; ++i) {
        const double t = static_cast<double>(i) * dt_s;
        std::array<double, kSegmentCount> occ{};
        for (std::size_t a = 0; a < kSegmentCount; ++a) {
            act[a].commanded_pressure_kpa = schedule.pressure_at(act[a].id, t);
            act[a] = step_actuator(act[a], occlusion_target(geometry.segments[a], act[a].commanded_pressure_kpa), dt_s);
            occ[a] = act[a].occlusion;
        }
        rows.push_back(occ);
    }
    return rows;
}

// ---- bolus ----------------------------------------------------------------

enum class BolusShape { Cylinder, Sphere, Liquid };

struct BolusSpec {
    BolusShape shape = BolusShape::Cylinder;
    double diameter_mm = 20.0;
    double length_mm = 70.0;       // equivalent length for liquids, ignored for spheres
    double oil_mass_ratio = 0.09;  // oil to clay

    bool solid() const { return shape != BolusShape::Liquid; }

    /// Axial extent used by the transport model.
    double effective_length_mm() const { return shape == BolusShape::Sphere ? diameter_mm : length_mm; }
};

inline void validate_bolus(const BolusSpec& b) {
    if (!(b.diameter_mm > 0.0)) throw ValidationError("bolus diameter must be > 0");
    if (b.shape != BolusShape::Sphere && !(b.length_mm > 0.0))
        throw ValidationError("bolus length must be > 0 for cylinders and liquids");
    if (!(b.oil_mass_ratio >= 0.0 && b.oil_mass_ratio <= 0.2))
        throw ValidationError("oil_mass_ratio must lie in [0, 0.2]");
}

inline constexpr double kSlipSaturationRatio = 0.09;
inline constexpr double kDryFrictionFloor = 0.2;

/// Transport efficiency in [0, 1]: rises with pressure to 30 kPa and with
/// lubrication to a 9% oil ratio.
inline double slip_efficiency(double p_kpa, double oil_mass_ratio) {
    if (!(p_kpa >= 0.0) || !(oil_mass_ratio >= 0.0))
        throw ValidationError("slip_efficiency: pressure and ratio must be >= 0");
    const double pressure_factor = std::min(p_kpa, 30.0) / 30.0;
    const double lube = std::min(oil_mass_ratio, kSlipSaturationRatio) / kSlipSaturationRatio;
    return pressure_factor * (kDryFrictionFloor + (1.0 - kDryFrictionFloor) * lube);
}

inline bool passable(const BolusSpec& b, const RectumGeometry& g) {
    if (b.shape == BolusShape::Liquid) return true;
    return b.diameter_mm < 2.0 * g.segment(1).exit_radius_mm;
}

// ---- simulation -----------------------------------------------------------

struct TransportConstants {
    double rise_tau_s = kRiseTauS;
    double sever_tau_s = 0.75;
    std::array<double, kSegmentCount> recovery_time_s{3.0, 3.0, 3.0, 3.0, 3.0};
    double engage_fraction = 0.5;
    double block_threshold = 0.5;
    double cut_threshold = 0.9;
    double liquid_release_threshold = 0.1;
    double liquid_drain_mm_s = 50.0;
};

enum class SimStatus { Expelled, Blocked, Timeout };

inline std::string_view to_string(SimStatus s) {
    switch (s) {
        case SimStatus::Expelled: return "expelled";
        case SimStatus::Blocked: return "blocked";
        case SimStatus::Timeout: return "timeout";
    }
    return "unknown";
}

struct TraceRow {
    double time_s = 0.0;
    std::array<double, kSegmentCount> pressure_kpa{};
    std::array<double, kSegmentCount> occlusion{};
    double front_mm = 0.0;
    double expelled_mm = 0.0;
    double retained_mm = 0.0;
};

struct Piece {
    double time_s = 0.0;
    double length_mm = 0.0;
    bool severed = false;  // false when the piece left whole
};

struct SimTrace {
    double dt_s = 0.05;
    double initial_length_mm = 0.0;
    std::vector<TraceRow> rows;
    std::vector<Piece> pieces;
    SimStatus status = SimStatus::Timeout;
    std::optional<double> first_motion_s;
    std::optional<double> last_expulsion_s;

    double expelled_mm() const { return rows.empty() ? 0.0 : rows.back().expelled_mm; }
    double retained_mm() const { return rows.empty() ? 0.0 : rows.back().retained_mm; }
    std::size_t severed_count() const {
        return static_cast<std::size_t>(std::count_if(pieces.begin(), pieces.end(), [](const Piece& p) { return p.severed; }));
    }
    double max_piece_mm() const {
        double m = 0.0;
        for (const auto& p : pieces) m = std::max(m, p.length_mm);
        return m;
    }
};

inline constexpr double kDefaultDtS = 0.05;

class Simulator {
public:
    Simulator(ScenarioScript script, BolusSpec bolus, double dt_s, double duration_s,
              RectumGeometry geometry = build_geometry(), TransportConstants k = {})
        : script_(script), bolus_(bolus), dt_(dt_s), duration_(duration_s), geom_(geometry), k_(k) {
        validate_script(script_);
        validate_bolus(bolus_);
        if (!(dt_ > 0.0) || !std::isfinite(dt_)) throw ValidationError("dt_s must be > 0");
        if (!(duration_ > 0.0) || !std::isfinite(duration_)) throw ValidationError("duration_s must be > 0");
        const auto* diarrhea = std::get_if<Diarrhea>(&script_);
        const double resolution = diarrhea ? diarrhea->hold_s : *quarter_period(script_);
        if (dt_ > resolution / 4.0 + 1e-12)
            throw ValidationError("dt_s must lie in (0, t_quarter/4] (" + text::format_real(resolution / 4.0) + " s)");
        schedule_ = schedule_for_scenario(script_, duration_, dt_);
        for (std::size_t a = 0; a < kSegmentCount; ++a) {
            actuators_[a].id = static_cast<int>(a + 1);
            actuators_[a].recovery_time_s = k_.recovery_time_s[a];
        }
        anus_ = geom_.anus_position_mm();
        canal_start_ = geom_.segment_start_mm(1);
        length_ = bolus_.effective_length_mm();
        if (bolus_.solid()) {
            // Loaded with the head at the S2/S1 boundary at most; longer
            // boluses trail back past the inlet.
            const double head = std::min(length_, canal_start_);
            tail_ = head - length_;
            attached_ = length_;
        } else {
            liquid_left_ = length_;
        }
        const auto tq = quarter_period(script_);
        speed_ = tq ? slip_efficiency(wave_pressure(script_), bolus_.oil_mass_ratio) *
                          geom_.segment(2).length_mm / *tq
                    : 0.0;
    }

    SimTrace run() {
        SimTrace tr;
        tr.dt_s = dt_;
        tr.initial_length_mm = length_;
        record(tr, 0.0);
        if (!passable(bolus_, geom_)) {
            tr.status = SimStatus::Blocked;
            return tr;
        }
        const auto steps = static_cast<long>(std::llround(duration_ / dt_));
        for (long i = 0; i < steps; ++i) {
            const double t = static_cast<double>(i) * dt_;
            const double t_end = static_cast<double>(i + 1) * dt_;
            step_actuators(t);
            if (bolus_.solid())
                step_solid(tr, t, t_end);
            else
                step_liquid(tr, t, t_end);
            record(tr, t_end);
            if (done_) {
                tr.status = SimStatus::Expelled;
                return tr;
            }
        }
        tr.status = SimStatus::Timeout;
        return tr;
    }

private:
    double head() const { return tail_ + attached_; }
    bool in_canal() const { return bolus_.solid() && !done_ && tail_ < anus_ && head() > canal_start_; }

    void step_actuators(double t) {
        const bool canal = in_canal();
        prev_a1_ = actuators_[0].occlusion;
        for (std::size_t a = 0; a < kSegmentCount; ++a) {
            auto& s = actuators_[a];
            s.commanded_pressure_kpa = schedule_.pressure_at(s.id, t);
            targets_[a] = occlusion_target(geom_.segments[a], s.commanded_pressure_kpa);
            const double rise = (a == 0 && canal) ? k_.sever_tau_s : k_.rise_tau_s;
            s = step_actuator(s, targets_[a], dt_, rise);
        }
    }

    bool engaged(std::size_t a) const {
        return actuators_[a].commanded_pressure_kpa > 0.0 && targets_[a] > 0.0 &&
               actuators_[a].occlusion >= k_.engage_fraction * targets_[a];
    }

    void step_solid(SimTrace& tr, double t, double t_end) {
        const double h = head();
        bool push = false;
        for (int id = 2; id <= 4; ++id) {
            const double c = geom_.ring_position_mm(id);
            if (engaged(static_cast<std::size_t>(id - 1)) && tail_ < c && c < std::min(h, anus_)) push = true;
        }
        if (engaged(0) && in_canal()) push = true;

        bool blocked = false;
        if (h <= anus_) {
            // First ring at or ahead of the head, A4 toward A1.
            for (int id = 4; id >= 1; --id)
                if (geom_.ring_position_mm(id) >= h) {
                    blocked = actuators_[static_cast<std::size_t>(id - 1)].occlusion > k_.block_threshold;
                    break;
                }
        }

        if (push && !blocked && speed_ > 0.0) {
            if (!tr.first_motion_s) tr.first_motion_s = t;
            tail_ += speed_ * dt_;
            if (head() > anus_) tr.last_expulsion_s = t_end;
        }

        const double a1 = actuators_[0].occlusion;
        if (tail_ < anus_ && head() > anus_ && prev_a1_ <= k_.cut_threshold && a1 > k_.cut_threshold) {
            const double piece = head() - anus_;
            tr.pieces.push_back({t_end, piece, true});
            cut_total_ += piece;
            attached_ -= piece;
        }
        if (tail_ >= anus_) {
            tr.pieces.push_back({t_end, attached_, false});
            cut_total_ += attached_;
            attached_ = 0.0;
            tr.last_expulsion_s = t_end;
            done_ = true;
        }
    }

    void step_liquid(SimTrace& tr, double t, double t_end) {
        if (actuators_[0].occlusion < k_.liquid_release_threshold && liquid_left_ > 0.0) {
            if (!tr.first_motion_s) tr.first_motion_s = t;
            const double m = std::min(liquid_left_, k_.liquid_drain_mm_s * dt_);
            liquid_left_ -= m;
            liquid_out_ += m;
            tr.last_expulsion_s = t_end;
            if (liquid_left_ <= 1e-12) {
                liquid_out_ = length_;
                liquid_left_ = 0.0;
                done_ = true;
            }
        }
    }

    void record(SimTrace& tr, double t) const {
        TraceRow row;
        row.time_s = t;
        for (std::size_t a = 0; a < kSegmentCount; ++a) {
            row.pressure_kpa[a] = actuators_[a].commanded_pressure_kpa;
            row.occlusion[a] = actuators_[a].occlusion;
        }
        if (bolus_.solid()) {
            const double h = head();
            row.front_mm = done_ ? anus_ : std::clamp(h, 0.0, anus_);
            row.expelled_mm = cut_total_ + std::max(0.0, h - anus_) * (done_ ? 0.0 : 1.0);
            row.retained_mm = done_ ? 0.0 : std::min(h, anus_) - tail_;
        } else {
            row.front_mm = anus_;
            row.expelled_mm = liquid_out_;
            row.retained_mm = liquid_left_;
        }
        tr.rows.push_back(row);
    }

    ScenarioScript script_;
    BolusSpec bolus_;
    double dt_;
    double duration_;
    RectumGeometry geom_;
    TransportConstants k_;
    ControlSchedule schedule_;
    std::array<ActuatorState, kSegmentCount> actuators_{};
    std::array<double, kSegmentCount> targets_{};
    double prev_a1_ = 0.0;
    double anus_ = 200.0;
    double canal_start_ = 160.0;
    double length_ = 0.0;
    double speed_ = 0.0;
    double tail_ = 0.0;
    double attached_ = 0.0;
    double cut_total_ = 0.0;
    double liquid_left_ = 0.0;
    double liquid_out_ = 0.0;
    bool done_ = false;
};

inline SimTrace run(const ScenarioScript& script, const BolusSpec& bolus, double dt_s = kDefaultDtS,
                    double duration_s = 120.0) {
    return Simulator(script, bolus, dt_s, duration_s).run();
}

/// Expelled length over the time from first motion to last expulsion.
inline std::optional<double> defecation_speed(const SimTrace& tr) {
    if (tr.status != SimStatus::Expelled || !tr.first_motion_s || !tr.last_expulsion_s) return std::nullopt;
    const double span = *tr.last_expulsion_s - *tr.first_motion_s;
    if (!(span > 0.0)) return std::nullopt;
    return tr.expelled_mm() / span;
}

// ---- trace files ----------------------------------------------------------

inline constexpr std::string_view kTraceHeader =
    "time_s,a1_kpa,a2_kpa,a3_kpa,a4_kpa,a5_kpa,a1_occ,a2_occ,a3_occ,a4_occ,a5_occ,front_mm,expelled_mm";
inline constexpr std::string_view kCutsHeader = "cut_time_s,piece_mm,severed";

inline std::string trace_to_csv(const SimTrace& tr) {
    std::string s(kTraceHeader);
    s += '\n';
    for (const auto& r : tr.rows) {
        s += text::format_real(r.time_s);
        for (double p : r.pressure_kpa) s += ',' + text::format_real(p);
        for (double o : r.occlusion) s += ',' + text::format_real(o);
        s += ',' + text::format_real(r.front_mm) + ',' + text::format_real(r.expelled_mm) + '\n';
    }
    return s;
}

inline std::string cuts_to_csv(const SimTrace& tr) {
    std::string s(kCutsHeader);
    s += '\n';
    for (const auto& p : tr.pieces)
        s += text::format_real(p.time_s) + ',' + text::format_real(p.length_mm) + ',' + (p.severed ? "1" : "0") + '\n';
    return s;
}

}  // namespace pouchsim::rectum
