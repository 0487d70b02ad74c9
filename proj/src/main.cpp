#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "matchkit/adversary.hpp"
#include "matchkit/adwords.hpp"
#include "matchkit/baselines.hpp"
#include "matchkit/experiment.hpp"
#include "matchkit/frlp.hpp"
#include "matchkit/lab.hpp"
#include "matchkit/numerics.hpp"
#include "matchkit/offline.hpp"
#include "matchkit/paw.hpp"

using namespace matchkit;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw RunError("cannot write file: " + path);
    out << text;
}

void print_cert_summary(const RunResult& res, const GraphInstance& g,
                        const std::string& alg, double lambda) {
    if (alg == "lab") {
        LabCertReport rep = lab_certify(res, g, lambda);
        std::cout << "certificate: dual_total=" << format_double(rep.dual_total)
                  << " gap_rel=" << format_double(rep.equality_gap_rel)
                  << " min_edge=" << format_double(rep.min_edge_ratio)
                  << " (r_lab=" << format_double(r_lab(lambda)) << ")";
        if (rep.has_advice)
            std::cout << " min_consistency="
                      << format_double(rep.min_consistency_ratio)
                      << " (c_lab=" << format_double(c_lab(lambda)) << ")";
        std::cout << " pass=" << (rep.pass() ? "yes" : "no") << "\n";
    } else if (alg == "paw") {
        PawCertReport rep = paw_certify(res, g, lambda);
        std::cout << "certificate: gap_r=" << format_double(rep.gap_r_rel)
                  << " gap_c=" << format_double(rep.gap_c_rel)
                  << " min_edge_robust=" << format_double(rep.min_edge_robust)
                  << " (r_paw=" << format_double(r_paw(lambda)) << ")";
        if (rep.has_advice)
            std::cout << " min_advised="
                      << format_double(rep.min_advised_consistent)
                      << " (c_paw=" << format_double(c_paw(lambda)) << ")";
        std::cout << " pass=" << (rep.pass() ? "yes" : "no") << "\n";
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"matchkit: learning-augmented online bipartite fractional "
                 "matching toolkit"};
    app.require_subcommand(1);

    // ---- curve ----
    auto* curve = app.add_subcommand(
        "curve", "closed-form robustness/consistency tradeoff curves");
    int curve_points = 101;
    double map_target = -1.0;
    curve->add_option("--points", curve_points, "lambda grid size");
    curve->add_option("--consistency", map_target,
                      "print lambdas achieving this consistency target");

    // ---- run ----
    auto* run = app.add_subcommand("run", "run one algorithm on an instance");
    std::string run_instance, run_alg = "lab";
    double run_lambda = 0.5, run_mix = 0.5;
    bool run_certify = false;
    run->add_option("--instance", run_instance, "instance file")->required();
    run->add_option("--alg", run_alg,
                    "lab|paw|balance|greedy|advice|coinflip|advicefill");
    run->add_option("--lambda", run_lambda, "tradeoff parameter");
    run->add_option("--mix", run_mix, "coinflip mix in [0,1]");
    run->add_flag("--certify", run_certify, "print dual certificate checks");

    // ---- adversary ----
    auto* adv = app.add_subcommand(
        "adversary", "run the adaptive adversaries against an algorithm");
    std::string adv_alg = "lab", adv_which = "both", adv_grid, adv_csv;
    double adv_lambda = 0.5, adv_mix = 0.5;
    int adv_n = 100;
    adv->add_option("--alg", adv_alg, "lab|paw|balance|advice|coinflip");
    adv->add_option("--lambda", adv_lambda, "tradeoff parameter");
    adv->add_option("--mix", adv_mix, "coinflip mix");
    adv->add_option("--n", adv_n, "half the number of offline vertices");
    adv->add_option("--which", adv_which, "R|C|both");
    adv->add_option("--grid", adv_grid,
                    "comma-separated lambda grid: emit tradeoff CSV");
    adv->add_option("--out", adv_csv, "write CSV here instead of stdout");

    // ---- frlp ----
    auto* frlp = app.add_subcommand(
        "frlp", "factor-revealing LP: export or solve at desk scale");
    int frlp_n = 10;
    double frlp_r = 0.55;
    std::string frlp_export;
    bool frlp_solve = false, frlp_dense = false, frlp_table = false;
    frlp->add_option("--n", frlp_n, "LP size parameter");
    frlp->add_option("--r", frlp_r, "robustness target");
    frlp->add_option("--export", frlp_export, "write CPLEX-LP file");
    frlp->add_flag("--solve", frlp_solve, "solve with the embedded solver");
    frlp->add_flag("--dense", frlp_dense,
                   "solve the full model with the dense simplex (small n)");
    frlp->add_flag("--table", frlp_table,
                   "solve the published r grid {0.500..0.625, 1-1/e}");

    // ---- gen ----
    auto* gen = app.add_subcommand("gen", "generate synthetic instances");
    std::string gen_er_spec, gen_out;
    int gen_ut_n = 0;
    bool gen_weighted = false;
    std::uint64_t gen_seed = 1;
    gen->add_option("--er", gen_er_spec, "Erdos-Renyi: n,p");
    gen->add_option("--ut", gen_ut_n, "upper-triangular instance of size n");
    gen->add_flag("--weighted", gen_weighted, "attach U[0,1000] weights");
    gen->add_option("--seed", gen_seed, "rng seed");
    gen->add_option("--out", gen_out, "output instance file")->required();

    // ---- ingest ----
    auto* ingest = app.add_subcommand(
        "ingest", "build a bipartite instance from an undirected edge list");
    std::string ingest_edges, ingest_out;
    std::uint64_t ingest_seed = 1;
    ingest->add_option("--edges", ingest_edges, "edge list file")->required();
    ingest->add_option("--seed", ingest_seed, "shuffle seed");
    ingest->add_option("--out", ingest_out, "output instance file")->required();

    // ---- advise ----
    auto* advise = app.add_subcommand(
        "advise", "attach noisy-prediction advice to an instance");
    std::string advise_instance, advise_out;
    double advise_gamma = 0.0;
    std::uint64_t advise_seed = 1;
    advise->add_option("--instance", advise_instance, "instance file")
        ->required();
    advise->add_option("--gamma", advise_gamma, "noise parameter in [0,1]");
    advise->add_option("--seed", advise_seed, "rng seed");
    advise->add_option("--out", advise_out, "output instance file")->required();

    // ---- sweep ----
    auto* sweep = app.add_subcommand(
        "sweep", "noise sweep: algorithms x gamma grid x trials -> CSV");
    std::string sweep_config, sweep_er, sweep_out_dir;
    int sweep_trials = -1, sweep_gammas = -1;
    std::uint64_t sweep_seed = 0;
    bool sweep_seed_set = false;
    sweep->add_option("--config", sweep_config, "key=value config file");
    sweep->add_option("--er", sweep_er, "Erdos-Renyi generator: n,p");
    sweep->add_option("--trials", sweep_trials, "trials per cell");
    sweep->add_option("--gammas", sweep_gammas, "gamma grid size");
    sweep
        ->add_option("--seed", sweep_seed, "seed base")
        ->each([&](const std::string&) { sweep_seed_set = true; });
    sweep->add_option("--out", sweep_out_dir, "output directory");

    // ---- chart ----
    auto* chart = app.add_subcommand("chart", "render a sweep CSV as SVG");
    std::string chart_csv, chart_style = "noise", chart_out;
    chart->add_option("--csv", chart_csv, "sweep CSV file");
    chart->add_option("--style", chart_style, "noise|curve");
    chart->add_option("--out", chart_out, "output SVG file")->required();

    // ---- adwords ----
    auto* adw = app.add_subcommand(
        "adwords", "fractional AdWords run plus randomized rounding");
    std::string adw_instance;
    double adw_lambda = 0.0, adw_epsilon = 0.01;
    int adw_trials = 1000;
    std::uint64_t adw_seed = 1;
    adw->add_option("--instance", adw_instance, "adwords instance file")
        ->required();
    adw->add_option("--lambda", adw_lambda, "tradeoff parameter");
    adw->add_option("--epsilon", adw_epsilon, "small-bids parameter");
    adw->add_option("--trials", adw_trials, "rounding trials");
    adw->add_option("--seed", adw_seed, "base rounding seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*curve) {
            if (map_target > 0.0) {
                std::cout << "consistency_target,lambda_lab,lambda_paw\n"
                          << format_double(map_target) << ','
                          << format_double(lambda_lab_for_consistency(map_target))
                          << ','
                          << format_double(lambda_paw_for_consistency(map_target))
                          << "\n";
                return 0;
            }
            std::cout << "lambda,r_lab,c_lab,r_paw,c_paw\n";
            for (int i = 0; i < curve_points; ++i) {
                double lam = curve_points == 1
                                 ? 0.0
                                 : static_cast<double>(i) / (curve_points - 1);
                std::cout << format_double(lam) << ','
                          << format_double(r_lab(lam)) << ','
                          << format_double(c_lab(lam)) << ','
                          << format_double(r_paw(lam)) << ','
                          << format_double(c_paw(lam)) << "\n";
            }
        } else if (*run) {
            GraphInstance g = load_instance(run_instance);
            RunResult res;
            if (run_alg == "lab") res = lab_run(g, run_lambda);
            else if (run_alg == "paw") res = paw_run(g, run_lambda);
            else if (run_alg == "balance") res = balance_run(g, 0.0);
            else if (run_alg == "greedy") res = greedy_run(g);
            else if (run_alg == "advice") res = follow_advice_run(g);
            else if (run_alg == "coinflip") res = coinflip_run(g, run_mix);
            else if (run_alg == "advicefill") res = advice_waterfill_run(g);
            else throw RunError("unknown algorithm: " + run_alg);
            double opt = opt_matching(g).value;
            std::cout << "alg_value=" << format_double(res.value)
                      << " opt=" << format_double(opt) << " ratio="
                      << format_double(opt > 0 ? res.value / opt : 1.0)
                      << " advice_value=" << format_double(g.advice_value())
                      << "\n";
            if (run_certify) print_cert_summary(res, g, run_alg, run_lambda);
        } else if (*adv) {
            auto make = [&](double lam) {
                std::vector<double> w(2 * adv_n, 1.0);
                return make_policy(adv_alg, w, lam, adv_mix);
            };
            if (!adv_grid.empty()) {
                std::vector<double> grid;
                std::istringstream gs(adv_grid);
                std::string tok;
                while (std::getline(gs, tok, ','))
                    grid.push_back(std::strtod(tok.c_str(), nullptr));
                auto points = empirical_tradeoff(
                    [&](double lam) { return make(lam); }, adv_n, grid);
                std::ostringstream out;
                out << kSweepCsvHeader << "\n";
                for (const TradeoffPoint& p : points)
                    out << adv_alg << ',' << format_double(p.lambda)
                        << ",0,0," << format_double(p.r_hat) << ','
                        << format_double(p.c_hat) << ",0\n";
                if (adv_csv.empty()) std::cout << out.str();
                else spit(adv_csv, out.str());
                return 0;
            }
            if (adv_which == "R" || adv_which == "both") {
                auto pol = make(adv_lambda);
                AdversaryTranscript tr = run_adversary_R(*pol, adv_n);
                std::cout << "R: alg=" << format_double(tr.alg_value)
                          << " opt=" << format_double(tr.opt)
                          << " ratio=" << format_double(tr.ratio);
                if (!tr.feasible) std::cout << " VIOLATION: " << tr.violation;
                std::cout << "\n";
            }
            if (adv_which == "C" || adv_which == "both") {
                auto pol = make(adv_lambda);
                AdversaryTranscript tc = run_adversary_C(*pol, adv_n);
                std::cout << "C: alg=" << format_double(tc.alg_value)
                          << " opt=" << format_double(tc.opt)
                          << " ratio=" << format_double(tc.ratio);
                if (!tc.feasible) std::cout << " VIOLATION: " << tc.violation;
                std::cout << "\n";
            }
            if (adv_which != "R" && adv_which != "C" && adv_which != "both")
                throw RunError("--which must be R|C|both");
        } else if (*frlp) {
            if (frlp_table) {
                const double re = 1.0 - std::exp(-1.0);
                FrlpCutPool pool;
                std::cout << "n,r,c_star,cuts\n";
                for (double rr : {0.500, 0.525, 0.550, 0.575, 0.600, 0.625, re}) {
                    FrlpModel m = build_frlp(frlp_n, rr);
                    FrlpSolution s = solve_frlp_embedded(m, &pool);
                    std::cout << frlp_n << ',' << format_double(rr) << ','
                              << (s.feasible ? format_double(s.c_star)
                                             : std::string("infeasible"))
                              << ',' << s.cuts_used << "\n";
                }
                return 0;
            }
            FrlpModel m = build_frlp(frlp_n, frlp_r);
            if (!frlp_export.empty()) {
                spit(frlp_export, export_lp(m));
                std::cout << "wrote " << frlp_export << " (" << m.num_vars()
                          << " variables, " << m.lp.rows.size() << " rows)\n";
            }
            if (frlp_dense) {
                FrlpSolution s = solve_frlp_dense(m);
                if (!s.feasible) std::cout << "dense: infeasible\n";
                else
                    std::cout << "dense: c_star=" << format_double(s.c_star)
                              << " max_violation="
                              << format_double(s.max_violation) << "\n";
            }
            if (frlp_solve) {
                FrlpSolution s = solve_frlp_embedded(m);
                if (!s.feasible) std::cout << "embedded: infeasible\n";
                else
                    std::cout << "embedded: c_star=" << format_double(s.c_star)
                              << " cuts=" << s.cuts_used << " max_violation="
                              << format_double(s.max_violation) << "\n";
            }
            if (frlp_export.empty() && !frlp_solve && !frlp_dense)
                throw RunError("frlp: pass --export FILE, --solve, --dense, "
                               "or --table");
        } else if (*gen) {
            GraphInstance g;
            if (!gen_er_spec.empty()) {
                size_t comma = gen_er_spec.find(',');
                if (comma == std::string::npos)
                    throw RunError("--er expects n,p");
                int n = std::atoi(gen_er_spec.substr(0, comma).c_str());
                double p =
                    std::strtod(gen_er_spec.c_str() + comma + 1, nullptr);
                g = gen_er(n, p, gen_seed);
            } else if (gen_ut_n > 0) {
                g = gen_ut(gen_ut_n);
            } else {
                throw RunError("gen: pass --er n,p or --ut n");
            }
            if (gen_weighted) g = gen_weights(std::move(g), gen_seed);
            save_instance(g, gen_out);
            std::cout << "wrote " << gen_out << " (" << g.n_offline
                      << " offline, " << g.n_online() << " online)\n";
        } else if (*ingest) {
            GraphInstance g = ingest_real(slurp(ingest_edges), ingest_seed);
            save_instance(g, ingest_out);
            std::cout << "wrote " << ingest_out << " (" << g.n_offline
                      << " offline, " << g.n_online() << " online)\n";
        } else if (*advise) {
            GraphInstance g = load_instance(advise_instance);
            GraphInstance advised =
                generate_advice(g, {advise_gamma, advise_seed});
            save_instance(advised, advise_out);
            std::cout << "wrote " << advise_out << " (advice value "
                      << format_double(advised.advice_value()) << ")\n";
        } else if (*sweep) {
            SweepConfig cfg;
            if (!sweep_config.empty()) cfg = parse_sweep_config(slurp(sweep_config));
            if (!sweep_er.empty()) {
                size_t comma = sweep_er.find(',');
                if (comma == std::string::npos)
                    throw RunError("--er expects n,p");
                cfg.generator = "er";
                cfg.n = std::atoi(sweep_er.substr(0, comma).c_str());
                cfg.p = std::strtod(sweep_er.c_str() + comma + 1, nullptr);
            }
            if (sweep_trials > 0) cfg.trials = sweep_trials;
            if (sweep_gammas > 0) cfg.gamma_points = sweep_gammas;
            if (sweep_seed_set) cfg.seed_base = sweep_seed;
            if (!sweep_out_dir.empty()) cfg.out_dir = sweep_out_dir;
            std::vector<SweepRow> rows = run_sweep(cfg);
            if (cfg.out_dir.empty()) std::cout << sweep_csv(rows);
            else
                std::cout << "wrote " << cfg.out_dir << "/sweep.csv ("
                          << rows.size() << " rows)\n";
        } else if (*chart) {
            std::vector<SweepRow> rows;
            if (!chart_csv.empty()) rows = parse_sweep_csv(slurp(chart_csv));
            spit(chart_out, emit_chart(rows, chart_style));
            std::cout << "wrote " << chart_out << "\n";
        } else if (*adw) {
            AdwordsInstance inst = load_adwords(adw_instance);
            AdwordsFracResult frac = adwords_frac_run(inst, adw_lambda);
            AdwordsCertReport rep = adwords_certify(frac, inst, adw_lambda);
            double eps0 = adwords_epsilon0();
            std::cout << "fractional revenue=" << format_double(frac.revenue)
                      << " eps_hat=" << format_double(inst.epsilon_hat())
                      << " eps0=" << format_double(eps0) << "\n";
            std::cout << "certificate: gap_rel="
                      << format_double(rep.equality_gap_rel)
                      << " min_edge=" << format_double(rep.min_edge_ratio)
                      << " pass=" << (rep.pass() ? "yes" : "no") << "\n";
            if (adw_trials > 0) {
                double gamma = adwords_gamma(adw_epsilon);
                double sum = 0.0, lo = 1e300, hi = -1e300;
                for (int t = 0; t < adw_trials; ++t) {
                    double v = adwords_round(inst, frac.x, adw_epsilon,
                                             adw_seed + t);
                    sum += v;
                    lo = std::min(lo, v);
                    hi = std::max(hi, v);
                }
                double bound =
                    (1.0 - 3.0 * std::sqrt(adw_epsilon *
                                           std::log(1.0 / adw_epsilon))) *
                    frac.revenue;
                std::cout << "rounding: gamma=" << format_double(gamma)
                          << " trials=" << adw_trials
                          << " mean=" << format_double(sum / adw_trials)
                          << " min=" << format_double(lo)
                          << " max=" << format_double(hi)
                          << " bound=" << format_double(bound) << "\n";
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
