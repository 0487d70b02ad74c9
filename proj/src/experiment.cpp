#include "matchkit/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "matchkit/baselines.hpp"
#include "matchkit/lab.hpp"
#include "matchkit/numerics.hpp"
#include "matchkit/offline.hpp"
#include "matchkit/paw.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace matchkit {

namespace {

int sweep_workers() {
    int workers = 1;
#ifdef _OPENMP
    workers = omp_get_max_threads();
#endif
    if (const char* env = std::getenv("MATCHKIT_WORKERS")) {
        int lim = std::atoi(env);
        if (lim >= 1) workers = lim;
    }
    return workers;
}

} // namespace

void SweepConfig::resolve() {
    if (trials < 1) throw RunError("sweep: trials must be >= 1");
    if (noise_reps < 1) throw RunError("sweep: noise_reps must be >= 1");
    if (gamma_points < 1) throw RunError("sweep: gamma grid must be nonempty");
    if (generator != "er" && generator != "ut" && generator != "instance")
        throw RunError("sweep: generator must be er|ut|instance");
    const double c_min = 1.0 - std::exp(-1.0);
    for (double c : consistency_targets)
        if (c <= c_min || c > 1.0 + 1e-12)
            throw RunError("sweep: consistency target outside (1-1/e, 1]");
    if (algorithms.empty()) {
        algorithms.push_back({"balance", 0.0, 0.0});
        algorithms.push_back({"greedy", 0.0, 0.0});
        for (double c : consistency_targets)
            algorithms.push_back({"lab", lambda_lab_for_consistency(c), 0.0});
        for (double c : consistency_targets)
            algorithms.push_back({"paw", lambda_paw_for_consistency(c), 0.0});
    }
}

std::string SweepConfig::describe() const {
    std::ostringstream out;
    out << "generator=" << generator << "\n";
    if (generator == "instance") out << "instance=" << instance_path << "\n";
    else out << "n=" << n << "\n";
    if (generator == "er") out << "p=" << format_double(p) << "\n";
    out << "weighted=" << (weighted ? 1 : 0) << "\n";
    out << "gamma_points=" << gamma_points << "\n";
    out << "trials=" << trials << "\n";
    out << "noise_reps=" << noise_reps << "\n";
    out << "seed_base=" << seed_base << "\n";
    for (const AlgSpec& a : algorithms) {
        out << "algorithm=" << a.name;
        if (a.name == "lab" || a.name == "paw")
            out << " lambda=" << format_double(a.lambda);
        if (a.name == "coinflip") out << " mix=" << format_double(a.mix);
        out << "\n";
    }
    return out.str();
}

namespace {

SweepRow run_cell_alg(const AlgSpec& alg, const GraphInstance& advised,
                      double opt) {
    SweepRow row;
    row.algorithm = alg.name;
    row.lambda = alg.lambda;
    try {
        RunResult res;
        if (alg.name == "lab") res = lab_run(advised, alg.lambda);
        else if (alg.name == "paw") res = paw_run(advised, alg.lambda);
        else if (alg.name == "balance") res = balance_run(advised, 0.0);
        else if (alg.name == "greedy") res = greedy_run(advised);
        else if (alg.name == "advice") res = follow_advice_run(advised);
        else if (alg.name == "coinflip") res = coinflip_run(advised, alg.mix);
        else if (alg.name == "advicefill") res = advice_waterfill_run(advised);
        else throw RunError("unknown algorithm: " + alg.name);
        row.alg_value = res.value;
        row.opt_value = opt;
        row.ratio = opt > 0.0 ? res.value / opt : 1.0;
    } catch (const std::exception& e) {
        row.error = e.what();
    }
    return row;
}

} // namespace

std::vector<SweepRow> run_sweep(SweepConfig cfg) {
    cfg.resolve();
    namespace fs = std::filesystem;
    if (!cfg.out_dir.empty()) fs::create_directories(cfg.out_dir);

    // Instances depend on the trial only (so advice-free algorithms are
    // constant across gamma); advice depends on (gamma, trial).
    std::vector<GraphInstance> instances(cfg.trials);
    std::vector<double> opts(cfg.trials, 0.0);
    for (int trial = 0; trial < cfg.trials; ++trial) {
        std::uint64_t seed = cfg.seed_base + 1000003ULL * trial;
        GraphInstance g;
        if (cfg.generator == "er") g = gen_er(cfg.n, cfg.p, seed);
        else if (cfg.generator == "ut") g = gen_ut(cfg.n);
        else g = load_instance(cfg.instance_path);
        if (cfg.weighted) g = gen_weights(std::move(g), seed ^ 0x9e3779b97f4a7c15ULL);
        opts[trial] = opt_matching(g).value;
        if (!cfg.out_dir.empty())
            save_instance(g, cfg.out_dir + "/instance_t" +
                                 std::to_string(trial) + ".txt");
        instances[trial] = std::move(g);
    }

    struct Cell {
        int gi, trial;
        double gamma;
    };
    std::vector<Cell> cells;
    for (int gi = 0; gi < cfg.gamma_points; ++gi) {
        double gamma = cfg.gamma_points == 1
                           ? 0.0
                           : static_cast<double>(gi) / (cfg.gamma_points - 1);
        for (int trial = 0; trial < cfg.trials; ++trial)
            cells.push_back({gi, trial, gamma});
    }

    const size_t per_cell = cfg.algorithms.size();
    std::vector<SweepRow> rows(cells.size() * per_cell);
    std::vector<std::string> cell_errors(cells.size());
    const int workers = sweep_workers();
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(workers)
#endif
    for (size_t ci = 0; ci < cells.size(); ++ci) {
        const Cell& cell = cells[ci];
        try {
            for (int rep = 0; rep < cfg.noise_reps; ++rep) {
                // The noise seed depends on the trial (and replicate) only,
                // so the corrupted graphs for one trial are nested across
                // gamma (perturb_graph couples them through shared
                // priorities) and mean curves degrade smoothly instead of
                // re-rolling the noise per cell.
                NoiseModel noise{cell.gamma,
                                 cfg.seed_base + 7919ULL * cell.trial +
                                     31337ULL * rep + 17ULL};
                GraphInstance advised =
                    generate_advice(instances[cell.trial], noise);
                if (!cfg.out_dir.empty() && rep == 0) {
#ifdef _OPENMP
#pragma omp critical
#endif
                    save_instance(advised,
                                  cfg.out_dir + "/advice_g" +
                                      std::to_string(cell.gi) + "_t" +
                                      std::to_string(cell.trial) + ".txt");
                }
                for (size_t ai = 0; ai < per_cell; ++ai) {
                    SweepRow& acc = rows[ci * per_cell + ai];
                    if (rep > 0 && !acc.error.empty()) continue;
                    SweepRow row = run_cell_alg(cfg.algorithms[ai], advised,
                                                opts[cell.trial]);
                    if (rep == 0) {
                        acc = std::move(row);
                        acc.gamma = cell.gamma;
                        acc.trial = cell.trial;
                    } else if (!row.error.empty()) {
                        acc.error = std::move(row.error);
                        acc.alg_value = acc.opt_value = acc.ratio = 0.0;
                    } else {
                        acc.alg_value += row.alg_value;
                        acc.ratio += row.ratio;
                    }
                }
            }
            if (cfg.noise_reps > 1) {
                for (size_t ai = 0; ai < per_cell; ++ai) {
                    SweepRow& acc = rows[ci * per_cell + ai];
                    if (!acc.error.empty()) continue;
                    acc.alg_value /= cfg.noise_reps;
                    acc.ratio /= cfg.noise_reps;
                }
            }
        } catch (const std::exception& e) {
            cell_errors[ci] = e.what();
        }
    }
    (void)workers;
    for (size_t ci = 0; ci < cells.size(); ++ci) {
        if (cell_errors[ci].empty()) continue;
        for (size_t ai = 0; ai < per_cell; ++ai) {
            SweepRow& row = rows[ci * per_cell + ai];
            row.algorithm = cfg.algorithms[ai].name;
            row.lambda = cfg.algorithms[ai].lambda;
            row.gamma = cells[ci].gamma;
            row.trial = cells[ci].trial;
            row.error = cell_errors[ci];
        }
    }

    // Order-stable output: (algorithm position, gamma index, trial).
    std::vector<SweepRow> ordered;
    ordered.reserve(rows.size());
    for (size_t ai = 0; ai < per_cell; ++ai)
        for (size_t ci = 0; ci < cells.size(); ++ci)
            ordered.push_back(rows[ci * per_cell + ai]);

    if (!cfg.out_dir.empty()) {
        std::ofstream csv(cfg.out_dir + "/sweep.csv");
        csv << sweep_csv(ordered);
        std::ofstream conf(cfg.out_dir + "/resolved_config.txt");
        conf << cfg.describe();
    }
    return ordered;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << kSweepCsvHeader << "\n";
    for (const SweepRow& r : rows) {
        if (!r.error.empty()) {
            out << "# error " << r.algorithm << " gamma="
                << format_double(r.gamma) << " trial=" << r.trial << ": "
                << r.error << "\n";
            continue;
        }
        out << r.algorithm << ',' << format_double(r.lambda) << ','
            << format_double(r.gamma) << ',' << r.trial << ','
            << format_double(r.alg_value) << ',' << format_double(r.opt_value)
            << ',' << format_double(r.ratio) << "\n";
    }
    return out.str();
}

std::vector<SweepRow> parse_sweep_csv(const std::string& text) {
    std::vector<SweepRow> rows;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        if (line_no == 1 && line == kSweepCsvHeader) continue;
        std::istringstream ls(line);
        std::string tok;
        std::vector<std::string> fields;
        while (std::getline(ls, tok, ',')) fields.push_back(tok);
        if (fields.size() != 7)
            throw ParseError("csv line " + std::to_string(line_no) +
                             ": expected 7 fields");
        SweepRow r;
        r.algorithm = fields[0];
        r.lambda = std::strtod(fields[1].c_str(), nullptr);
        r.gamma = std::strtod(fields[2].c_str(), nullptr);
        r.trial = std::atoi(fields[3].c_str());
        r.alg_value = std::strtod(fields[4].c_str(), nullptr);
        r.opt_value = std::strtod(fields[5].c_str(), nullptr);
        r.ratio = std::strtod(fields[6].c_str(), nullptr);
        rows.push_back(std::move(r));
    }
    return rows;
}

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
                          "#bcbd22", "#e377c2"};

struct Frame {
    double w = 800, h = 560, ml = 70, mr = 200, mt = 30, mb = 55;
    double x0 = 0, x1 = 1, y0 = 0, y1 = 1.05;
    double px(double x) const {
        return ml + (x - x0) / (x1 - x0) * (w - ml - mr);
    }
    double py(double y) const {
        return h - mb - (y - y0) / (y1 - y0) * (h - mt - mb);
    }
};

std::string pt(const Frame& f, double x, double y) {
    return format_double(f.px(x)) + "," + format_double(f.py(y));
}

void axes(std::ostringstream& s, const Frame& f, const std::string& xlabel,
          const std::string& ylabel) {
    s << "<rect x='" << format_double(f.ml) << "' y='" << format_double(f.mt)
      << "' width='" << format_double(f.w - f.ml - f.mr) << "' height='"
      << format_double(f.h - f.mt - f.mb)
      << "' fill='none' stroke='#333'/>\n";
    for (int i = 0; i <= 10; ++i) {
        double x = f.x0 + i * (f.x1 - f.x0) / 10.0;
        double y = f.y0 + i * (f.y1 - f.y0) / 10.0;
        s << "<line x1='" << format_double(f.px(x)) << "' y1='"
          << format_double(f.h - f.mb) << "' x2='" << format_double(f.px(x))
          << "' y2='" << format_double(f.h - f.mb + 5)
          << "' stroke='#333'/>\n";
        s << "<text x='" << format_double(f.px(x)) << "' y='"
          << format_double(f.h - f.mb + 18)
          << "' font-size='11' text-anchor='middle'>" << format_double(x)
          << "</text>\n";
        s << "<line x1='" << format_double(f.ml - 5) << "' y1='"
          << format_double(f.py(y)) << "' x2='" << format_double(f.ml)
          << "' y2='" << format_double(f.py(y)) << "' stroke='#333'/>\n";
        s << "<text x='" << format_double(f.ml - 8) << "' y='"
          << format_double(f.py(y) + 4)
          << "' font-size='11' text-anchor='end'>" << format_double(y)
          << "</text>\n";
    }
    s << "<text x='" << format_double(f.ml + (f.w - f.ml - f.mr) / 2)
      << "' y='" << format_double(f.h - 12)
      << "' font-size='13' text-anchor='middle'>" << xlabel << "</text>\n";
    s << "<text x='16' y='" << format_double(f.mt + (f.h - f.mt - f.mb) / 2)
      << "' font-size='13' text-anchor='middle' transform='rotate(-90 16 "
      << format_double(f.mt + (f.h - f.mt - f.mb) / 2) << ")'>" << ylabel
      << "</text>\n";
}

std::string series_label(const std::string& alg, double lambda) {
    if (alg == "lab" || alg == "paw")
        return alg + " (lambda=" + format_double(lambda) + ")";
    return alg;
}

std::string chart_noise(const std::vector<SweepRow>& rows) {
    if (rows.empty()) throw RunError("chart: no data rows");
    // (algorithm, lambda) -> gamma -> ratios
    std::map<std::pair<std::string, double>, std::map<double, std::vector<double>>>
        series;
    for (const SweepRow& r : rows) {
        if (!r.error.empty()) continue;
        series[{r.algorithm, r.lambda}][r.gamma].push_back(r.ratio);
    }
    if (series.empty()) throw RunError("chart: no usable data rows");

    Frame f;
    std::ostringstream s;
    s << "<svg xmlns='http://www.w3.org/2000/svg' width='"
      << format_double(f.w) << "' height='" << format_double(f.h) << "'>\n";
    s << "<rect width='100%' height='100%' fill='white'/>\n";
    axes(s, f, "noise parameter gamma", "competitive ratio ALG/OPT");
    int ci = 0;
    double legend_y = f.mt + 14;
    for (const auto& [key, by_gamma] : series) {
        const char* color = kPalette[ci % 10];
        std::string band_top, band_bot, mid;
        for (const auto& [gamma, vals] : by_gamma) {
            double lo = vals[0], hi = vals[0], sum = 0.0;
            for (double v : vals) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
                sum += v;
            }
            band_top += pt(f, gamma, hi) + " ";
            band_bot = pt(f, gamma, lo) + " " + band_bot;
            mid += pt(f, gamma, sum / vals.size()) + " ";
        }
        s << "<polygon points='" << band_top << band_bot << "' fill='" << color
          << "' fill-opacity='0.15' stroke='none'/>\n";
        s << "<polyline points='" << mid << "' fill='none' stroke='" << color
          << "' stroke-width='2'/>\n";
        s << "<rect x='" << format_double(f.w - f.mr + 10) << "' y='"
          << format_double(legend_y - 9) << "' width='14' height='4' fill='"
          << color << "'/>\n";
        s << "<text x='" << format_double(f.w - f.mr + 30) << "' y='"
          << format_double(legend_y) << "' font-size='11'>"
          << series_label(key.first, key.second) << "</text>\n";
        legend_y += 16;
        ++ci;
    }
    s << "</svg>\n";
    return s.str();
}

std::string chart_curve(const std::vector<SweepRow>& rows) {
    Frame f;
    f.x0 = 0.0;
    f.x1 = 0.7;
    f.y0 = 0.55;
    f.y1 = 1.02;
    std::ostringstream s;
    s << "<svg xmlns='http://www.w3.org/2000/svg' width='"
      << format_double(f.w) << "' height='" << format_double(f.h) << "'>\n";
    s << "<rect width='100%' height='100%' fill='white'/>\n";
    axes(s, f, "robustness r", "consistency c");
    const double re = 1.0 - std::exp(-1.0);
    // Coin-flip segments.
    s << "<polyline points='" << pt(f, 0.0, 1.0) << " " << pt(f, re, re)
      << "' fill='none' stroke='#999' stroke-width='1.5' "
         "stroke-dasharray='6,4'/>\n";
    s << "<polyline points='" << pt(f, 0.5, 1.0) << " " << pt(f, re, re)
      << "' fill='none' stroke='#999' stroke-width='1.5' "
         "stroke-dasharray='2,3'/>\n";
    // Closed-form parametric curves.
    std::string lab_pts, paw_pts;
    for (int i = 0; i <= 400; ++i) {
        double lam = i / 400.0;
        lab_pts += pt(f, r_lab(lam), c_lab(lam)) + " ";
        paw_pts += pt(f, r_paw(lam), c_paw(lam)) + " ";
    }
    s << "<polyline points='" << lab_pts
      << "' fill='none' stroke='#1f77b4' stroke-width='2'/>\n";
    s << "<polyline points='" << paw_pts
      << "' fill='none' stroke='#d62728' stroke-width='2'/>\n";
    // Published n=1000 factor-revealing-LP upper bounds.
    const double ub[][2] = {{0.500, 1.000}, {0.525, 0.974}, {0.550, 0.944},
                            {0.575, 0.908}, {0.600, 0.862}, {0.625, 0.788},
                            {re, 0.731}};
    for (const auto& p : ub)
        s << "<circle cx='" << format_double(f.px(p[0])) << "' cy='"
          << format_double(f.py(p[1])) << "' r='4' fill='none' stroke='#000' "
             "stroke-width='1.5'/>\n";
    // Measured points, if supplied: (alg_value, opt_value) = (r-hat, c-hat).
    std::map<std::string, std::vector<std::pair<double, double>>> scatter;
    for (const SweepRow& r : rows)
        if (r.error.empty())
            scatter[r.algorithm].push_back({r.alg_value, r.opt_value});
    int ci = 2;
    double legend_y = f.mt + 14;
    auto legend = [&](const std::string& color, const std::string& label) {
        s << "<rect x='" << format_double(f.w - f.mr + 10) << "' y='"
          << format_double(legend_y - 9) << "' width='14' height='4' fill='"
          << color << "'/>\n";
        s << "<text x='" << format_double(f.w - f.mr + 30) << "' y='"
          << format_double(legend_y) << "' font-size='11'>" << label
          << "</text>\n";
        legend_y += 16;
    };
    legend("#1f77b4", "LAB closed form");
    legend("#d62728", "PAW closed form");
    legend("#999", "coin-flip segments");
    legend("#000", "LP upper bound (n=1000)");
    for (const auto& [alg, pts] : scatter) {
        const char* color = kPalette[ci % 10];
        for (const auto& [x, y] : pts)
            s << "<circle cx='" << format_double(f.px(x)) << "' cy='"
              << format_double(f.py(y)) << "' r='3' fill='" << color
              << "'/>\n";
        legend(color, alg + " measured");
        ++ci;
    }
    s << "</svg>\n";
    return s.str();
}

} // namespace

std::string emit_chart(const std::vector<SweepRow>& rows,
                       const std::string& style) {
    if (style == "curve") return chart_curve(rows);
    if (style == "noise" || style.empty()) return chart_noise(rows);
    throw RunError("chart: unknown style '" + style + "' (noise|curve)");
}

SweepConfig parse_sweep_config(const std::string& text) {
    SweepConfig cfg;
    cfg.consistency_targets.clear();
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    bool saw_targets = false;
    while (std::getline(in, line)) {
        ++line_no;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        size_t eq = line.find('=');
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (eq == std::string::npos)
            throw ParseError("config line " + std::to_string(line_no) +
                             ": expected key=value");
        std::string key = line.substr(0, eq);
        std::string val = line.substr(eq + 1);
        auto trim = [](std::string s) {
            size_t a = s.find_first_not_of(" \t\r");
            size_t b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        key = trim(key);
        val = trim(val);
        if (key == "generator") cfg.generator = val;
        else if (key == "n") cfg.n = std::atoi(val.c_str());
        else if (key == "p") cfg.p = std::strtod(val.c_str(), nullptr);
        else if (key == "instance") cfg.instance_path = val;
        else if (key == "weighted") cfg.weighted = val == "1" || val == "true";
        else if (key == "gamma_points") cfg.gamma_points = std::atoi(val.c_str());
        else if (key == "trials") cfg.trials = std::atoi(val.c_str());
        else if (key == "noise_reps") cfg.noise_reps = std::atoi(val.c_str());
        else if (key == "seed_base") cfg.seed_base = std::strtoull(val.c_str(), nullptr, 10);
        else if (key == "out_dir") cfg.out_dir = val;
        else if (key == "consistency_target") {
            cfg.consistency_targets.push_back(std::strtod(val.c_str(), nullptr));
            saw_targets = true;
        } else if (key == "algorithm") {
            // value: "<name> [lambda=L] [mix=M]"
            std::istringstream vs(val);
            AlgSpec a;
            vs >> a.name;
            std::string tok;
            while (vs >> tok) {
                size_t e = tok.find('=');
                if (e == std::string::npos)
                    throw ParseError("config line " + std::to_string(line_no) +
                                     ": bad algorithm option");
                std::string k = tok.substr(0, e);
                double v = std::strtod(tok.c_str() + e + 1, nullptr);
                if (k == "lambda") a.lambda = v;
                else if (k == "mix") a.mix = v;
                else
                    throw ParseError("config line " + std::to_string(line_no) +
                                     ": unknown option " + k);
            }
            cfg.algorithms.push_back(std::move(a));
        } else {
            throw ParseError("config line " + std::to_string(line_no) +
                             ": unknown key '" + key + "'");
        }
    }
    if (!saw_targets) cfg.consistency_targets = {0.7, 0.8, 0.9, 1.0};
    return cfg;
}

} // namespace matchkit
