#include "nmfkit/cli/commands.hpp"

#include "nmfkit/fixtures.hpp"
#include "nmfkit/io.hpp"
#include "nmfkit/merge.hpp"
#include "nmfkit/metrics.hpp"
#include "nmfkit/recovery.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>
#include <vector>

namespace nmfkit::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct MeanStd {
    double mean = 0.0;
    double stddev = 0.0;
};

MeanStd mean_std(const std::vector<double>& xs) {
    MeanStd out;
    if (xs.empty()) return out;
    for (double x : xs) out.mean += x;
    out.mean /= static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - out.mean) * (x - out.mean);
        out.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    }
    return out;
}

double median(std::vector<double> xs) {
    if (xs.empty()) return 0.0;
    std::sort(xs.begin(), xs.end());
    const std::size_t n = xs.size();
    return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

json mean_std_json(const std::vector<double>& xs) {
    const MeanStd ms = mean_std(xs);
    return json{{"mean", ms.mean}, {"std", ms.stddev}};
}

/// Run fn(i) for i in [0, count), at most `threads` at a time. Results land
/// in caller-owned slots, so output order is independent of scheduling.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    };
    std::vector<std::thread> pool;
    const int n = std::min<int>(threads, static_cast<int>(count));
    pool.reserve(n);
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

struct SeedOutcome {
    json row;           // deterministic per-run record
    json timing;        // wall-clock observations, kept out of the report
    std::string error;  // nonempty on failure
    std::vector<std::pair<std::string, RunTrace>> traces;  // name -> trace
    double seconds_per_iteration = 0.0;
};

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot write " + path.string());
    out << text;
}

void write_trace_csv(const fs::path& path, const RunTrace& trace,
                     double seconds_per_iteration) {
    std::ostringstream os;
    os.precision(17);
    os << "iteration,reconstructed_seconds,objective\n";
    for (const auto& s : trace.samples)
        os << s.iteration << ","
           << static_cast<double>(s.iteration) * seconds_per_iteration << ","
           << s.objective << "\n";
    write_text(path, os.str());
}

std::string csv_escape(const json& v) {
    if (v.is_null()) return "";
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

/// report.json (or report.csv) in out_dir. The CSV flattening keeps the
/// manifest and aggregates as '#'-prefixed JSON comment lines.
void write_report(const RunManifest& m, const json& doc) {
    fs::create_directories(m.out_dir);
    if (m.format == "csv") {
        std::ostringstream os;
        os << "# manifest " << doc.at("manifest").dump() << "\n";
        if (doc.contains("aggregate"))
            os << "# aggregate " << doc.at("aggregate").dump() << "\n";
        if (doc.contains("failures") && !doc.at("failures").empty())
            os << "# failures " << doc.at("failures").dump() << "\n";
        const json& rows = doc.at("runs");
        if (!rows.empty()) {
            bool first = true;
            for (auto& [key, value] : rows.front().items()) {
                (void)value;
                os << (first ? "" : ",") << key;
                first = false;
            }
            os << "\n";
            for (const json& row : rows) {
                bool f = true;
                for (auto& [key, value] : row.items()) {
                    (void)key;
                    os << (f ? "" : ",") << csv_escape(value);
                    f = false;
                }
                os << "\n";
            }
        }
        write_text(fs::path(m.out_dir) / "report.csv", os.str());
    } else {
        write_text(fs::path(m.out_dir) / "report.json", doc.dump(2) + "\n");
    }
}

void write_timing(const RunManifest& m, const json& timing) {
    fs::create_directories(m.out_dir);
    write_text(fs::path(m.out_dir) / "timing.json", timing.dump(2) + "\n");
}

int finish(const RunManifest& m, json doc, json timing,
           const std::vector<SeedOutcome>& outcomes) {
    json failures = json::array();
    for (const auto& o : outcomes)
        if (!o.error.empty()) failures.push_back(o.error);
    doc["failures"] = failures;
    write_report(m, doc);
    write_timing(m, timing);
    for (const auto& f : failures) std::cerr << "error: " << f.get<std::string>() << "\n";
    return failures.empty() ? 0 : 1;
}

void dump_traces(const RunManifest& m, const std::vector<SeedOutcome>& outcomes) {
    if (!m.trace) return;
    fs::create_directories(m.out_dir);
    for (const auto& o : outcomes)
        for (const auto& [name, trace] : o.traces)
            write_trace_csv(fs::path(m.out_dir) / (name + ".csv"), trace,
                            o.seconds_per_iteration);
}

json merge_log_json(const std::vector<MergeRecord>& log) {
    json out = json::array();
    for (const auto& rec : log)
        out.push_back(json{{"id_a", rec.id_a},
                           {"id_b", rec.id_b},
                           {"penalty", rec.penalty},
                           {"resulting_rank", rec.resulting_rank}});
    return out;
}

}  // namespace

int cmd_factorize(const RunManifest& m) {
    const DataMatrix X = load_input(m);
    std::vector<SeedOutcome> outcomes(m.seeds.size());

    parallel_for(m.seeds.size(), m.parallel, [&](std::size_t i) {
        SeedOutcome& out = outcomes[i];
        const std::uint64_t seed = m.seeds[i];
        try {
            const Factorization F0 = make_init(X, m.rank, parse_init(m.init, seed));
            // timing run first, untraced
            SolverConfig timed_cfg = solver_config(m);
            timed_cfg.trace_stride = 0;
            const auto t0 = Clock::now();
            SolveResult res = solve(X, F0, timed_cfg);
            const double wall = seconds_since(t0);
            out.seconds_per_iteration =
                res.iterations > 0 ? wall / static_cast<double>(res.iterations) : 0.0;
            if (m.trace) {
                SolveResult traced = solve(X, F0, solver_config(m));
                out.traces.emplace_back("trace_seed" + std::to_string(seed),
                                        std::move(traced.trace));
            }
            out.row = json{{"seed", seed},
                           {"fitting_error_percent", fitting_error_percent(X, res.factors)},
                           {"iterations", res.iterations},
                           {"converged", res.converged}};
            out.timing = json{{"seed", seed},
                              {"wall_seconds", wall},
                              {"seconds_per_iteration", out.seconds_per_iteration}};
        } catch (const std::exception& e) {
            out.error = "seed " + std::to_string(seed) + ": " + e.what();
        }
    });

    json doc;
    doc["command"] = "factorize";
    doc["manifest"] = manifest_json(m);
    json runs = json::array();
    std::vector<double> errors;
    for (const auto& o : outcomes)
        if (o.error.empty()) {
            runs.push_back(o.row);
            errors.push_back(o.row.at("fitting_error_percent").get<double>());
        }
    doc["runs"] = runs;
    doc["aggregate"] = json{{"fitting_error_percent", mean_std_json(errors)}};

    json timing;
    timing["command"] = "factorize";
    timing["runs"] = json::array();
    for (const auto& o : outcomes)
        if (o.error.empty()) timing["runs"].push_back(o.timing);

    dump_traces(m, outcomes);
    return finish(m, std::move(doc), std::move(timing), outcomes);
}

int cmd_pipeline(const RunManifest& m) {
    const DataMatrix X = load_input(m);
    std::vector<SeedOutcome> outcomes(m.seeds.size());

    parallel_for(m.seeds.size(), m.parallel, [&](std::size_t i) {
        SeedOutcome& out = outcomes[i];
        const std::uint64_t seed = m.seeds[i];
        try {
            const PipelineResult res = run_pipeline(X, pipeline_config(m, seed));
            out.row = json{
                {"seed", seed},
                {"fitting_error_percent", res.fitting_error_percent},
                {"initial_iterations", res.stage_iterations[0]},
                {"overcomplete_iterations", res.stage_iterations[1]},
                {"final_iterations", res.stage_iterations[2]},
                {"merge_candidate_evaluations", res.merge_candidate_evaluations},
                {"merge_candidate_estimate",
                 candidate_evaluation_estimate(
                     m.rank + pipeline_config(m, seed).effective_extra_k(), m.rank)},
                {"merge_log", merge_log_json(res.merge_log)}};
            out.timing = json{{"seed", seed},
                              {"stage_seconds",
                               {{"initial_nmf", res.stage_seconds[0]},
                                {"feature_recovery", res.stage_seconds[1]},
                                {"overcomplete_nmf", res.stage_seconds[2]},
                                {"merge", res.stage_seconds[3]},
                                {"final_nmf", res.stage_seconds[4]}}}};
            if (m.trace) {
                int stage_idx = 0;
                for (const auto& trace : res.stage_traces)
                    out.traces.emplace_back("trace_seed" + std::to_string(seed) + "_" +
                                                (trace.stage_label.empty()
                                                     ? std::to_string(stage_idx++)
                                                     : trace.stage_label),
                                            trace);
            }
        } catch (const std::exception& e) {
            out.error = "seed " + std::to_string(seed) + ": " + e.what();
        }
    });

    json doc;
    doc["command"] = "pipeline";
    doc["manifest"] = manifest_json(m);
    json runs = json::array();
    std::vector<double> errors;
    for (const auto& o : outcomes)
        if (o.error.empty()) {
            runs.push_back(o.row);
            errors.push_back(o.row.at("fitting_error_percent").get<double>());
        }
    doc["runs"] = runs;
    doc["aggregate"] = json{{"fitting_error_percent", mean_std_json(errors)}};

    json timing;
    timing["command"] = "pipeline";
    timing["runs"] = json::array();
    for (const auto& o : outcomes)
        if (o.error.empty()) timing["runs"].push_back(o.timing);

    dump_traces(m, outcomes);
    return finish(m, std::move(doc), std::move(timing), outcomes);
}

namespace {

struct CompareCell {
    json runs = json::array();
    json aggregate;
    json timing_runs = json::array();
    std::vector<std::string> errors;
    std::vector<double> pipeline_errors;
    std::vector<double> differences;  // standard minus pipeline
};

/// Paired standard-vs-pipeline ensemble from identical initializations.
CompareCell run_compare_cell(const DataMatrix& X, const RunManifest& m) {
    struct Row {
        json row, timing;
        std::string error;
        double pipeline_error = 0.0, difference = 0.0;
    };
    std::vector<Row> rows(m.seeds.size());

    parallel_for(m.seeds.size(), m.parallel, [&](std::size_t i) {
        Row& out = rows[i];
        const std::uint64_t seed = m.seeds[i];
        try {
            const Factorization F0 = make_init(X, m.rank, parse_init(m.init, seed));
            SolverConfig std_cfg = solver_config(m);
            std_cfg.trace_stride = 0;
            auto t0 = Clock::now();
            const SolveResult standard = solve(X, F0, std_cfg);
            const double standard_wall = seconds_since(t0);
            const double standard_err = fitting_error_percent(X, standard.factors);

            PipelineConfig pcfg = pipeline_config(m, seed);
            pcfg.trace_stride = 0;
            t0 = Clock::now();
            const PipelineResult pipe = run_pipeline_from(X, F0, pcfg);
            const double pipeline_wall = seconds_since(t0);

            const double diff = standard_err - pipe.fitting_error_percent;
            out.pipeline_error = pipe.fitting_error_percent;
            out.difference = diff;
            out.row = json{{"seed", seed},
                           {"standard_error_percent", standard_err},
                           {"pipeline_error_percent", pipe.fitting_error_percent},
                           {"difference_percent", diff},
                           {"diagonal_distance", diff / std::sqrt(2.0)}};
            out.timing = json{{"seed", seed},
                              {"standard_wall_seconds", standard_wall},
                              {"pipeline_wall_seconds", pipeline_wall},
                              {"stage_seconds",
                               {{"initial_nmf", pipe.stage_seconds[0]},
                                {"feature_recovery", pipe.stage_seconds[1]},
                                {"overcomplete_nmf", pipe.stage_seconds[2]},
                                {"merge", pipe.stage_seconds[3]},
                                {"final_nmf", pipe.stage_seconds[4]}}}};
        } catch (const std::exception& e) {
            out.error = "seed " + std::to_string(seed) + ": " + e.what();
        }
    });

    CompareCell cell;
    std::vector<double> standard_errors, pipeline_errors;
    std::int64_t not_worse = 0, strictly_better = 0;
    for (auto& r : rows) {
        if (!r.error.empty()) {
            cell.errors.push_back(r.error);
            continue;
        }
        cell.runs.push_back(std::move(r.row));
        cell.timing_runs.push_back(std::move(r.timing));
        standard_errors.push_back(r.pipeline_error + r.difference);
        pipeline_errors.push_back(r.pipeline_error);
        cell.pipeline_errors.push_back(r.pipeline_error);
        cell.differences.push_back(r.difference);
        if (r.difference >= -1e-6) ++not_worse;
        if (r.difference > 1e-6) ++strictly_better;
    }
    cell.aggregate = json{
        {"standard_error_percent", mean_std_json(standard_errors)},
        {"pipeline_error_percent", mean_std_json(pipeline_errors)},
        {"difference_percent", mean_std_json(cell.differences)},
        {"pipeline_not_worse_count", not_worse},
        {"pipeline_strictly_better_count", strictly_better},
        {"total", static_cast<std::int64_t>(cell.runs.size())}};
    return cell;
}

}  // namespace

int cmd_compare(const RunManifest& m) {
    const DataMatrix X = load_input(m);
    CompareCell cell = run_compare_cell(X, m);

    json doc;
    doc["command"] = "compare";
    doc["manifest"] = manifest_json(m);
    doc["runs"] = cell.runs;
    doc["aggregate"] = cell.aggregate;
    doc["failures"] = cell.errors;
    write_report(m, doc);

    json timing;
    timing["command"] = "compare";
    timing["runs"] = cell.timing_runs;
    write_timing(m, timing);

    for (const auto& e : cell.errors) std::cerr << "error: " << e << "\n";
    return cell.errors.empty() ? 0 : 1;
}

int cmd_consistency(const RunManifest& m) {
    const DataMatrix X = load_input(m);
    const std::size_t s = m.seeds.size();

    struct Run {
        Factorization factors;
        double error = 0.0;
        bool ok = false;
        std::string what;
    };
    std::vector<Run> standard(s), pipeline(s);

    parallel_for(s, m.parallel, [&](std::size_t i) {
        const std::uint64_t seed = m.seeds[i];
        try {
            const Factorization F0 = make_init(X, m.rank, parse_init(m.init, seed));
            SolverConfig std_cfg = solver_config(m);
            std_cfg.trace_stride = 0;
            standard[i].factors = solve(X, F0, std_cfg).factors;
            standard[i].error = fitting_error_percent(X, standard[i].factors);
            standard[i].ok = true;

            PipelineConfig pcfg = pipeline_config(m, seed);
            pcfg.trace_stride = 0;
            pipeline[i].factors = run_pipeline_from(X, F0, pcfg).final;
            pipeline[i].error = fitting_error_percent(X, pipeline[i].factors);
            pipeline[i].ok = true;
        } catch (const std::exception& e) {
            const std::string msg = "seed " + std::to_string(seed) + ": " + e.what();
            if (!standard[i].ok) standard[i].what = msg;
            pipeline[i].what = msg;
        }
    });

    json runs = json::array();
    json failures = json::array();
    auto emit_pairs = [&](const char* method, const std::vector<Run>& ensemble) {
        for (std::size_t i = 0; i < s; ++i)
            for (std::size_t j = i + 1; j < s; ++j) {
                if (!ensemble[i].ok || !ensemble[j].ok) continue;
                const ConsistencyReport rep =
                    compare_runs(X, ensemble[i].factors, ensemble[j].factors);
                json row{{"method", method},
                         {"seed_a", m.seeds[i]},
                         {"seed_b", m.seeds[j]},
                         {"subspace_D", rep.subspace_D},
                         {"fit_error_delta", rep.fit_error_delta}};
                if (std::abs(rep.fit_error_delta) < 1e-5) {
                    row["pc_R1"] = rep.pc_R1;
                    row["pc_R2"] = rep.pc_R2;
                } else {
                    row["pc_R1"] = nullptr;
                    row["pc_R2"] = nullptr;
                }
                runs.push_back(std::move(row));
            }
    };
    emit_pairs("standard", standard);
    emit_pairs("pipeline", pipeline);
    for (const auto& r : pipeline)
        if (!r.ok) failures.push_back(r.what);

    json doc;
    doc["command"] = "consistency";
    doc["manifest"] = manifest_json(m);
    doc["runs"] = runs;
    std::vector<double> std_D, pipe_D;
    for (const json& row : runs) {
        const double d = row.at("subspace_D").get<double>();
        (row.at("method") == "standard" ? std_D : pipe_D).push_back(d);
    }
    doc["aggregate"] = json{{"standard_subspace_D", mean_std_json(std_D)},
                            {"pipeline_subspace_D", mean_std_json(pipe_D)},
                            {"pair_count_per_method",
                             static_cast<std::int64_t>(std_D.size())}};
    doc["failures"] = failures;
    write_report(m, doc);
    write_timing(m, json{{"command", "consistency"}, {"runs", json::array()}});

    for (const auto& f : failures) std::cerr << "error: " << f.get<std::string>() << "\n";
    return failures.empty() ? 0 : 1;
}

int cmd_sweep(const RunManifest& m) {
    const DataMatrix X = load_input(m);
    if (m.sweep_values.empty()) {
        std::cerr << "error: sweep requires --values\n";
        return 2;
    }

    json groups = json::array();
    json timing_groups = json::array();
    json failures = json::array();

    for (const double value : m.sweep_values) {
        RunManifest cell_manifest = m;
        if (m.sweep_kind == "extra-k") {
            cell_manifest.extra_k = static_cast<Eigen::Index>(value);
        } else if (m.sweep_kind == "tolerances") {
            cell_manifest.eps1 = value;
            cell_manifest.eps2 = value;
        } else if (m.sweep_kind == "rank") {
            cell_manifest.rank = static_cast<Eigen::Index>(value);
        } else {
            std::cerr << "error: unknown sweep kind '" << m.sweep_kind << "'\n";
            return 2;
        }

        CompareCell cell = run_compare_cell(X, cell_manifest);
        json group;
        group["parameter"] = m.sweep_kind;
        group["value"] = value;
        group["runs"] = cell.runs;
        group["aggregate"] = cell.aggregate;
        group["aggregate"]["pipeline_error_median"] = median(cell.pipeline_errors);
        groups.push_back(std::move(group));

        // Table-style five-stage timing columns live in the timing sidecar so
        // the report stays deterministic.
        std::array<std::vector<double>, 5> stage_cols;
        for (const json& t : cell.timing_runs) {
            const json& ss = t.at("stage_seconds");
            stage_cols[0].push_back(ss.at("initial_nmf").get<double>());
            stage_cols[1].push_back(ss.at("feature_recovery").get<double>());
            stage_cols[2].push_back(ss.at("overcomplete_nmf").get<double>());
            stage_cols[3].push_back(ss.at("merge").get<double>());
            stage_cols[4].push_back(ss.at("final_nmf").get<double>());
        }
        timing_groups.push_back(
            json{{"parameter", m.sweep_kind},
                 {"value", value},
                 {"stage_seconds",
                  {{"initial_nmf", mean_std_json(stage_cols[0])},
                   {"feature_recovery", mean_std_json(stage_cols[1])},
                   {"overcomplete_nmf", mean_std_json(stage_cols[2])},
                   {"merge", mean_std_json(stage_cols[3])},
                   {"final_nmf", mean_std_json(stage_cols[4])}}},
                 {"runs", cell.timing_runs}});

        for (const auto& e : cell.errors) failures.push_back(e);
    }

    json doc;
    doc["command"] = "sweep";
    doc["manifest"] = manifest_json(m);
    // flat view for CSV export: one row per (value, seed)
    json runs = json::array();
    for (const json& g : groups)
        for (const json& r : g.at("runs")) {
            json row{{"parameter", g.at("parameter")}, {"value", g.at("value")}};
            row.update(r);
            runs.push_back(std::move(row));
        }
    doc["runs"] = runs;
    doc["groups"] = groups;
    doc["failures"] = failures;
    write_report(m, doc);
    write_timing(m, json{{"command", "sweep"}, {"groups", timing_groups}});

    for (const auto& f : failures) std::cerr << "error: " << f.get<std::string>() << "\n";
    return failures.empty() ? 0 : 1;
}

int cmd_export_fixture(const RunManifest& m) {
    if (m.fixture != "plateau") {
        std::cerr << "error: unknown fixture '" << m.fixture << "'\n";
        return 2;
    }
    const PlantedProblem problem = plateau_fixture();
    fs::create_directories(m.out_dir);
    const bool mm = m.format == "mtx";
    auto write = [&](const std::string& stem, const Matrix& M) {
        std::ostringstream os;
        if (mm) write_matrix_market(M, os);
        else write_matrix_csv(M, os);
        write_text(fs::path(m.out_dir) / (stem + (mm ? ".mtx" : ".csv")), os.str());
    };
    write("X", problem.X.values());
    write("W_true", problem.truth.W);
    write("H_true", problem.truth.H);
    return 0;
}

}  // namespace nmfkit::cli
