// pouchsim command-line front end.
//
// Exit codes: 0 success, 2 argument/validation error, 3 I/O or parse error,
// 4 no feasible design.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "pouchsim/pouchsim.hpp"

namespace fs = std::filesystem;
using namespace pouchsim;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;
constexpr int kExitNoFeasible = 4;

struct GridFlags {
    std::string grid_file;
    std::vector<double> lengths, widths, pressures;
    std::vector<int> turns;
    std::vector<std::string> covers, structures;

    void attach(CLI::App* cmd) {
        cmd->add_option("--grid-file", grid_file, "JSON grid config (see README)");
        cmd->add_option("--lengths", lengths, "comma list of lengths in mm")->delimiter(',');
        cmd->add_option("--widths", widths, "comma list of widths in mm")->delimiter(',');
        cmd->add_option("--turns", turns, "comma list of coil turns")->delimiter(',');
        cmd->add_option("--pressures", pressures, "comma list of pressures in kPa")->delimiter(',');
        cmd->add_option("--covers", covers, "comma list of none,paper,a80")->delimiter(',');
        cmd->add_option("--structures", structures, "comma list of type1..type4")->delimiter(',');
    }

    DesignGrid resolve() const {
        DesignGrid g = grid_file.empty() ? DesignGrid::default_grid() : read_grid_file(grid_file);
        if (!lengths.empty()) g.lengths_mm = lengths;
        if (!widths.empty()) g.widths_mm = widths;
        if (!turns.empty()) g.turns = turns;
        if (!pressures.empty()) g.pressures_kpa = pressures;
        if (!covers.empty()) {
            g.covers.clear();
            for (const auto& t : covers) {
                const auto c = parse_cover(t);
                if (!c) throw ValidationError("unknown cover '" + t + "' (expected none, paper, a80)");
                g.covers.push_back(*c);
            }
        }
        if (!structures.empty()) {
            g.structures.clear();
            for (const auto& t : structures) {
                const auto s = parse_structure(t);
                if (!s) throw ValidationError("unknown structure '" + t + "' (expected type1..type4)");
                g.structures.push_back(*s);
            }
        }
        validate_grid(g);
        return g;
    }
};

std::string in_dir(const std::string& dir, const std::string& name) { return (fs::path(dir) / name).string(); }

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
}

PouchMaterial material_from(const std::string& token) {
    const auto m = parse_material(token);
    if (!m) throw ValidationError("unknown material '" + token + "' (expected pp, bopp, hdpe)");
    return *m;
}

constexpr int kHistogramBins = 20;

std::string histogram_csv(const std::vector<double>& errors) {
    std::string s = "bin_lo,bin_hi,count\n";
    if (errors.empty()) return s;
    auto [mn, mx] = std::minmax_element(errors.begin(), errors.end());
    double lo = *mn, hi = *mx;
    if (!(hi > lo)) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double w = (hi - lo) / kHistogramBins;
    std::vector<std::size_t> counts(kHistogramBins, 0);
    for (double e : errors) {
        auto b = static_cast<int>(std::floor((e - lo) / w));
        ++counts[static_cast<std::size_t>(std::clamp(b, 0, kHistogramBins - 1))];
    }
    for (int b = 0; b < kHistogramBins; ++b)
        s += text::format_real(lo + b * w) + ',' + text::format_real(lo + (b + 1) * w) + ',' +
             std::to_string(counts[static_cast<std::size_t>(b)]) + '\n';
    return s;
}

std::string metrics_line(std::string_view name, const Metrics& m) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-24s mae=%-12s mse=%-12s r2=%s\n", std::string(name).c_str(),
                  text::format_real(m.mae, 6).c_str(), text::format_real(m.mse, 6).c_str(),
                  m.r2 ? text::format_real(*m.r2, 6).c_str() : "undefined");
    return buf;
}

std::string metrics_csv(const EvaluationReport& rep) {
    std::string s = "output,mae,mse,r2\n";
    auto row = [&](std::string_view name, const Metrics& m) {
        s += std::string(name) + ',' + text::format_real(m.mae) + ',' + text::format_real(m.mse) + ',' +
             (m.r2 ? text::format_real(*m.r2) : std::string("undefined")) + '\n';
    };
    for (std::size_t k = 0; k < kOutputCount; ++k) row(kOutputNames[k], rep.per_output[k]);
    row("aggregate", rep.aggregate);
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pouch actuator design pipeline and rectal module simulator"};
    app.require_subcommand(1);

    std::uint64_t seed = 42;
    std::string out_dir = ".";
    app.add_option("--seed", seed, "global RNG seed")->capture_default_str();
    app.add_option("--out-dir", out_dir, "directory for all outputs")->capture_default_str();

    // gen-data
    auto* gen = app.add_subcommand("gen-data", "synthesize a bench dataset over a design grid");
    GridFlags gen_grid;
    gen_grid.attach(gen);
    bool noisy = true;
    std::string gen_out = "dataset.csv";
    gen->add_option("--noisy", noisy, "add measurement noise")->capture_default_str();
    gen->add_option("--out", gen_out, "dataset file name under --out-dir")->capture_default_str();

    // train
    auto* tr = app.add_subcommand("train", "fit the surrogate MLP");
    std::string data_path, model_out = "model.json";
    TrainConfig cfg;
    tr->add_option("--data", data_path, "dataset CSV")->required();
    tr->add_option("--model-out", model_out, "model file name under --out-dir")->capture_default_str();
    tr->add_option("--epochs", cfg.epochs)->capture_default_str();
    tr->add_option("--batch-size", cfg.batch_size)->capture_default_str();
    tr->add_option("--lr", cfg.learning_rate)->capture_default_str();
    tr->add_option("--train-fraction", cfg.train_fraction)->capture_default_str();

    // optimize
    auto* opt = app.add_subcommand("optimize", "grid search for the design minimizing t/(P_g*alpha)");
    GridFlags opt_grid;
    opt_grid.attach(opt);
    std::string opt_model, material_token = "pp";
    bool use_oracle = false;
    std::size_t top_k = 10;
    auto* model_opt = opt->add_option("--model", opt_model, "surrogate model file");
    auto* oracle_flag = opt->add_flag("--use-oracle", use_oracle, "score with the bench oracle");
    model_opt->excludes(oracle_flag);
    opt->add_option("--material", material_token, "pouch material: pp, bopp, hdpe")->capture_default_str();
    opt->add_option("--top-k", top_k)->capture_default_str();

    // importance
    auto* imp = app.add_subcommand("importance", "permutation feature importance");
    std::string imp_model, imp_data;
    int repeats = 10;
    double imp_fraction = 0.8;
    bool all_rows = false;
    imp->add_option("--model", imp_model)->required();
    imp->add_option("--data", imp_data)->required();
    imp->add_option("--repeats", repeats)->capture_default_str();
    imp->add_option("--train-fraction", imp_fraction, "split used to pick the held-out rows")
        ->capture_default_str();
    imp->add_flag("--all-rows", all_rows, "score on every row instead of the held-out split");

    // simulate
    auto* sim = app.add_subcommand("simulate", "run a rectal-module scenario");
    std::string scenario = "cut", shape_token;
    std::optional<double> t0, t1, t2, p, tq, hold, bolus_len;
    double bolus_d = 20.0, oil = 0.09, dt = rectum::kDefaultDtS, duration = 120.0;
    sim->add_option("--scenario", scenario, "cut, long, or diarrhea")
        ->check(CLI::IsMember({"cut", "long", "diarrhea"}))
        ->capture_default_str();
    sim->add_option("--t0", t0, "A1 initial closed time (cut)");
    sim->add_option("--t1", t1, "A1 on time");
    sim->add_option("--t2", t2, "A1 off time");
    sim->add_option("--p", p, "peristaltic pressure in kPa");
    sim->add_option("--t-quarter", tq, "peristaltic quarter period in s");
    sim->add_option("--hold", hold, "A1 hold time (diarrhea)");
    sim->add_option("--bolus-shape", shape_token, "cylinder, sphere, or liquid")
        ->check(CLI::IsMember({"cylinder", "sphere", "liquid"}));
    sim->add_option("--bolus-diameter", bolus_d)->capture_default_str();
    sim->add_option("--bolus-length", bolus_len, "length in mm (equivalent length for liquid)");
    sim->add_option("--oil-ratio", oil)->capture_default_str();
    sim->add_option("--dt", dt)->capture_default_str();
    sim->add_option("--duration", duration)->capture_default_str();

    // predict
    auto* pred = app.add_subcommand("predict", "query the surrogate at one design");
    std::string pred_model, cover_token = "paper", structure_token = "type4";
    ActuatorDesign design;
    pred->add_option("--model", pred_model)->required();
    pred->add_option("--length", design.length_mm)->capture_default_str();
    pred->add_option("--width", design.width_mm)->capture_default_str();
    pred->add_option("--turns", design.turns)->capture_default_str();
    pred->add_option("--pressure", design.pressure_kpa)->capture_default_str();
    pred->add_option("--cover", cover_token)->capture_default_str();
    pred->add_option("--structure", structure_token)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (*gen) {
            const auto grid = gen_grid.resolve();
            ensure_dir(out_dir);
            const auto path = in_dir(out_dir, gen_out);
            const auto data = generate_dataset(grid, seed, noisy);
            write_dataset_csv(path, data);
            std::cout << "wrote " << data.size() << " rows to " << path << "\n";
        } else if (*tr) {
            const auto data = read_dataset_csv(data_path);
            cfg.seed = seed;
            validate_train_config(cfg, data.size());
            ensure_dir(out_dir);
            const auto res = train(data, cfg);
            const auto val = gather(data, res.split.validation);
            const auto rep = evaluate(res.model, val);
            save_model(res.model, in_dir(out_dir, model_out));
            text::write_file(in_dir(out_dir, "metrics.csv"), metrics_csv(rep));
            std::string hist = "epoch,loss\n";
            for (std::size_t e = 0; e < res.history.epoch_loss.size(); ++e)
                hist += std::to_string(e + 1) + ',' + text::format_real(res.history.epoch_loss[e]) + '\n';
            text::write_file(in_dir(out_dir, "loss_history.csv"), hist);
            for (std::size_t k = 0; k < kOutputCount; ++k)
                text::write_file(in_dir(out_dir, "hist_" + std::string(kOutputNames[k]) + ".csv"),
                                 histogram_csv(rep.errors[k]));
            if (res.history.degenerate())
                std::cerr << "warning: an output has zero variance in the training split; scale clamped to 1\n";
            std::cout << "train=" << res.split.train.size() << " validation=" << val.size()
                      << " final_loss=" << text::format_real(res.history.epoch_loss.back(), 6) << "\n";
            for (std::size_t k = 0; k < kOutputCount; ++k) std::cout << metrics_line(kOutputNames[k], rep.per_output[k]);
            std::cout << metrics_line("aggregate", rep.aggregate);
        } else if (*opt) {
            if (opt_model.empty() && !use_oracle) throw ValidationError("optimize needs --model or --use-oracle");
            const auto grid = opt_grid.resolve();
            const auto material = material_from(material_token);
            if (top_k < 1) throw ValidationError("--top-k must be >= 1");
            std::optional<MlpModel> model;
            if (!use_oracle) model = load_model(opt_model);
            const Predictor predictor = use_oracle ? Predictor(oracle_triple)
                                                   : Predictor([&](const ActuatorDesign& d) {
                                                         return predict_triple(*model, d);
                                                     });
            const auto rep = optimize(predictor, grid, material, top_k);
            ensure_dir(out_dir);
            const auto report = format_report(rep);
            text::write_file(in_dir(out_dir, "report.txt"), report);
            text::write_file(in_dir(out_dir, "ranking.csv"), ranking_to_csv(rep));
            std::cout << report;
        } else if (*imp) {
            const auto model = load_model(imp_model);
            const auto data = read_dataset_csv(imp_data);
            std::vector<PerformanceSample> rows;
            if (all_rows) {
                rows = data;
            } else {
                if (!(imp_fraction > 0.0 && imp_fraction < 1.0))
                    throw ValidationError("--train-fraction must lie in (0, 1)");
                rows = gather(data, split_indices(data.size(), seed, imp_fraction).validation);
            }
            const auto res = permutation_importance(model, rows, seed, repeats);
            ensure_dir(out_dir);
            const auto csv = importance_to_csv(res);
            text::write_file(in_dir(out_dir, "importance.csv"), csv);
            std::cout << csv;
        } else if (*sim) {
            rectum::ScenarioScript script;
            if (scenario == "cut") {
                rectum::CutFeces c;
                c.t0_s = t0.value_or(c.t0_s);
                c.t1_s = t1.value_or(c.t1_s);
                c.t2_s = t2.value_or(c.t2_s);
                c.p_kpa = p.value_or(c.p_kpa);
                c.t_quarter_s = tq.value_or(c.t_quarter_s);
                script = c;
            } else if (scenario == "long") {
                rectum::LongFeces l;
                l.t1_s = t1.value_or(l.t1_s);
                l.t2_s = t2.value_or(l.t2_s);
                l.p_kpa = p.value_or(l.p_kpa);
                l.t_quarter_s = tq.value_or(l.t_quarter_s);
                script = l;
            } else {
                script = rectum::Diarrhea{hold.value_or(10.0)};
            }
            rectum::BolusSpec bolus;
            if (shape_token.empty()) shape_token = scenario == "diarrhea" ? "liquid" : "cylinder";
            bolus.shape = shape_token == "sphere"   ? rectum::BolusShape::Sphere
                          : shape_token == "liquid" ? rectum::BolusShape::Liquid
                                                    : rectum::BolusShape::Cylinder;
            bolus.diameter_mm = bolus_d;
            bolus.length_mm = bolus_len.value_or(bolus.shape == rectum::BolusShape::Liquid ? 75.0 : 70.0);
            bolus.oil_mass_ratio = oil;
            const auto trace = rectum::run(script, bolus, dt, duration);
            ensure_dir(out_dir);
            text::write_file(in_dir(out_dir, "trace.csv"), rectum::trace_to_csv(trace));
            text::write_file(in_dir(out_dir, "cuts.csv"), rectum::cuts_to_csv(trace));
            const auto speed = rectum::defecation_speed(trace);
            std::cout << "status=" << rectum::to_string(trace.status)
                      << " expelled_mm=" << text::format_real(trace.expelled_mm(), 6)
                      << " pieces=" << trace.pieces.size() << " cuts=" << trace.severed_count()
                      << " max_piece_mm=" << text::format_real(trace.max_piece_mm(), 6)
                      << " speed_mm_s=" << (speed ? text::format_real(*speed, 6) : std::string("undefined")) << "\n";
        } else if (*pred) {
            const auto cover = parse_cover(cover_token);
            const auto structure = parse_structure(structure_token);
            if (!cover) throw ValidationError("unknown cover '" + cover_token + "'");
            if (!structure) throw ValidationError("unknown structure '" + structure_token + "'");
            design.cover = *cover;
            design.structure = *structure;
            require_valid(design);
            const auto model = load_model(pred_model);
            const auto t = predict_triple(model, design);
            const auto f = objective(t);
            std::cout << "alpha=" << text::format_real(t.alpha, 6)
                      << " pg_kpa=" << text::format_real(t.generated_pressure_kpa, 6)
                      << " t_s=" << text::format_real(t.recovery_time_s, 6)
                      << " f=" << (f ? text::format_real(*f, 6) : std::string("infeasible")) << "\n";
        }
    } catch (const NoFeasibleDesign& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNoFeasible;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return 0;
}
