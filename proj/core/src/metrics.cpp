#include "repage/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "repage/engine.hpp"

namespace repage {

namespace {

std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

void append_record(std::string& out, const MetricsRecord& r) {
    out += std::to_string(r.turn);
    out += ',';
    out += fmt6(r.avg_quality);
    out += ',';
    out += std::to_string(r.idk_count);
    out += ',';
    out += std::to_string(r.good_sellers_discovered);
    out += ',';
    out += std::to_string(r.contracts);
    out += '\n';
}

// Strided deterministic fan-out: results land in job order no matter how
// many workers ran.
template <typename Job, typename Result>
std::vector<Result> run_jobs(const std::vector<Job>& jobs, int workers,
                             Result (*fn)(const Job&)) {
    std::vector<Result> results(jobs.size());
    if (workers < 1) workers = 1;
    auto n_workers = std::min<std::size_t>(static_cast<std::size_t>(workers), jobs.size());
    if (n_workers <= 1) {
        for (std::size_t i = 0; i < jobs.size(); ++i) results[i] = fn(jobs[i]);
        return results;
    }
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < jobs.size(); i += n_workers) results[i] = fn(jobs[i]);
        });
    }
    for (auto& t : pool) t.join();
    return results;
}

}  // namespace

int metric_idk_count(const TurnEvents& events) {
    int n = 0;
    for (const AnswerEvent& a : events.answers)
        if (a.answer.is_idk()) ++n;
    return n;
}

int metric_good_sellers_discovered(const TurnEvents& events, std::set<AgentId>& contracted_before,
                                   double good_seller_threshold) {
    int discovered = 0;
    std::set<AgentId> seen_this_turn;
    for (const Contract& c : events.contracts) {
        if (contracted_before.count(c.seller) || !seen_this_turn.insert(c.seller).second) continue;
        if (c.quality >= good_seller_threshold) ++discovered;
    }
    contracted_before.insert(seen_this_turn.begin(), seen_this_turn.end());
    return discovered;
}

MetricsRecord compute_metrics(const TurnEvents& events, std::set<AgentId>& contracted_before,
                              double good_seller_threshold) {
    MetricsRecord r;
    r.turn = events.turn;
    r.contracts = static_cast<int>(events.contracts.size());
    double sum = 0.0;
    for (const Contract& c : events.contracts) sum += c.quality;
    r.avg_quality = r.contracts > 0 ? sum / r.contracts : 0.0;
    r.idk_count = metric_idk_count(events);
    r.good_sellers_discovered =
        metric_good_sellers_discovered(events, contracted_before, good_seller_threshold);
    return r;
}

double steady_quality(const std::vector<MetricsRecord>& records) {
    if (records.empty()) return 0.0;
    std::size_t window = (records.size() + 3) / 4;  // ceil(n/4)
    double sum = 0.0;
    for (std::size_t i = records.size() - window; i < records.size(); ++i)
        sum += records[i].avg_quality;
    return sum / static_cast<double>(window);
}

namespace {

struct SweepJob {
    SimConfig config;
    double fraction = 0.0;
    std::uint64_t seed = 0;
};

SweepRow run_sweep_job(const SweepJob& job) {
    return SweepRow{job.fraction, job.config.level, job.seed, steady_quality(run(job.config))};
}

struct CompareJob {
    SimConfig config;
    std::uint64_t seed = 0;
};

std::vector<CompareRow> run_compare_job(const CompareJob& job) {
    std::vector<CompareRow> rows;
    for (const MetricsRecord& r : run(job.config))
        rows.push_back({job.config.level, job.seed, r});
    return rows;
}

}  // namespace

std::vector<SweepRow> sweep_cheaters(const SimConfig& base, const std::vector<double>& fractions,
                                     const std::vector<std::uint64_t>& seeds, int workers) {
    std::vector<SweepJob> jobs;
    jobs.reserve(fractions.size() * 2 * seeds.size());
    std::vector<double> sorted_fractions = fractions;
    std::sort(sorted_fractions.begin(), sorted_fractions.end());
    for (double fraction : sorted_fractions) {
        if (fraction < 0.0 || fraction > 1.0)
            throw std::invalid_argument("sweep fractions must lie in [0,1]");
        for (ScenarioLevel level : {ScenarioLevel::L1, ScenarioLevel::L2}) {
            for (std::uint64_t seed : seeds) {
                SweepJob job;
                job.config = base;
                job.config.cheater_fraction = fraction;
                job.config.level = level;
                job.config.seed = seed;
                job.fraction = fraction;
                job.seed = seed;
                jobs.push_back(std::move(job));
            }
        }
    }
    auto rows = run_jobs(jobs, workers, +[](const SweepJob& j) { return run_sweep_job(j); });
    std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
        return std::tie(a.cheater_fraction, a.level, a.seed) <
               std::tie(b.cheater_fraction, b.level, b.seed);
    });
    return rows;
}

std::vector<CompareRow> compare_levels(const SimConfig& base,
                                       const std::vector<std::uint64_t>& seeds, int workers) {
    std::vector<CompareJob> jobs;
    for (ScenarioLevel level : {ScenarioLevel::L1, ScenarioLevel::L2}) {
        for (std::uint64_t seed : seeds) {
            CompareJob job;
            job.config = base;
            job.config.level = level;
            job.config.seed = seed;
            job.seed = seed;
            jobs.push_back(std::move(job));
        }
    }
    auto nested =
        run_jobs(jobs, workers, +[](const CompareJob& j) { return run_compare_job(j); });
    std::vector<CompareRow> rows;
    for (auto& part : nested) rows.insert(rows.end(), part.begin(), part.end());
    std::sort(rows.begin(), rows.end(), [](const CompareRow& a, const CompareRow& b) {
        return std::tie(a.level, a.seed, a.record.turn) <
               std::tie(b.level, b.seed, b.record.turn);
    });
    return rows;
}

std::string to_csv(const std::vector<MetricsRecord>& records) {
    std::string out = "turn,avg_quality,idk_count,good_sellers_discovered,contracts\n";
    for (const MetricsRecord& r : records) append_record(out, r);
    return out;
}

std::string to_csv(const std::vector<CompareRow>& rows) {
    std::string out = "level,seed,turn,avg_quality,idk_count,good_sellers_discovered,contracts\n";
    for (const CompareRow& row : rows) {
        out += to_string(row.level);
        out += ',';
        out += std::to_string(row.seed);
        out += ',';
        append_record(out, row.record);
    }
    return out;
}

std::string to_csv(const std::vector<SweepRow>& rows) {
    std::string out = "cheater_fraction,level,seed,steady_quality\n";
    for (const SweepRow& row : rows) {
        out += fmt6(row.cheater_fraction);
        out += ',';
        out += to_string(row.level);
        out += ',';
        out += std::to_string(row.seed);
        out += ',';
        out += fmt6(row.steady_quality);
        out += '\n';
    }
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + path);
}

void emit_csv(const std::vector<MetricsRecord>& records, const std::string& path) {
    write_file(path, to_csv(records));
}
void emit_csv(const std::vector<CompareRow>& rows, const std::string& path) {
    write_file(path, to_csv(rows));
}
void emit_csv(const std::vector<SweepRow>& rows, const std::string& path) {
    write_file(path, to_csv(rows));
}

std::vector<std::string> plot_kinds() { return {"fig2", "fig3", "fig4", "fig5"}; }

std::string plot_script(std::string_view kind, const std::string& csv_path) {
    struct Spec {
        const char* kind;
        const char* title;
        const char* ylabel;
        int column;  // y column in the compare CSV
    };
    // fig2/3/4 read the compare CSV (level,seed,turn,...); fig5 reads the
    // sweep CSV. `smooth unique` averages duplicate x values, i.e. the
    // per-turn (or per-fraction) mean over seeds.
    static constexpr Spec kTurnSpecs[] = {
        {"fig2", "Average contract quality per turn", "average quality", 4},
        {"fig3", "Good sellers discovered per turn", "good sellers discovered", 6},
        {"fig4", "I-don't-know answers per turn", "I-don't-know answers", 5},
    };
    std::string out;
    out += "set datafile separator ','\n";
    out += "set key top right\n";
    out += "set grid\n";
    for (const Spec& spec : kTurnSpecs) {
        if (kind != spec.kind) continue;
        out += std::string("set title '") + spec.title + "'\n";
        out += "set xlabel 'turn'\n";
        out += std::string("set ylabel '") + spec.ylabel + "'\n";
        out += std::string("set output '") + std::string(kind) + ".png'\n";
        out += "set terminal pngcairo size 900,600\n";
        char line[512];
        std::snprintf(line, sizeof line,
                      "plot '%s' using 3:(strcol(1) eq 'L1' ? $%d : 1/0) smooth unique "
                      "with lines lw 2 title 'L1', \\\n"
                      "     '%s' using 3:(strcol(1) eq 'L2' ? $%d : 1/0) smooth unique "
                      "with lines lw 2 title 'L2'\n",
                      csv_path.c_str(), spec.column, csv_path.c_str(), spec.column);
        out += line;
        return out;
    }
    if (kind == "fig5") {
        out += "set title 'Steady-state quality vs cheater fraction'\n";
        out += "set xlabel 'cheater fraction'\n";
        out += "set ylabel 'steady-state average quality'\n";
        out += "set output 'fig5.png'\n";
        out += "set terminal pngcairo size 900,600\n";
        char line[512];
        std::snprintf(line, sizeof line,
                      "plot '%s' using 1:(strcol(2) eq 'L1' ? $4 : 1/0) smooth unique "
                      "with linespoints lw 2 title 'L1', \\\n"
                      "     '%s' using 1:(strcol(2) eq 'L2' ? $4 : 1/0) smooth unique "
                      "with linespoints lw 2 title 'L2'\n",
                      csv_path.c_str(), csv_path.c_str());
        out += line;
        return out;
    }
    std::string valid;
    for (const std::string& k : plot_kinds()) {
        if (!valid.empty()) valid += ", ";
        valid += k;
    }
    throw std::invalid_argument("unknown plot kind '" + std::string(kind) +
                                "' (valid kinds: " + valid + ")");
}

void emit_plot_script(const std::string& csv_path, std::string_view kind,
                      const std::string& script_path) {
    write_file(script_path, plot_script(kind, csv_path));
}

}  // namespace repage
