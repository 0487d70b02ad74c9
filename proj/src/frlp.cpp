#include "matchkit/frlp.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <sstream>

#include "matchkit/core.hpp"

namespace matchkit {

FrlpModel build_frlp(int n, double r) {
    if (n < 1) throw RunError("frlp: n must be >= 1");
    if (r < 0.0 || r > 1.0) throw RunError("frlp: r must lie in [0,1]");
    FrlpModel m;
    m.n = n;
    m.r = r;
    m.names.resize(m.num_vars());
    m.lp.num_vars = m.num_vars();
    m.lp.objective.assign(m.lp.num_vars, 0.0);
    m.lp.upper.assign(m.lp.num_vars, 1.0); // all boxes are [0,1]
    m.lp.objective[m.idx_c()] = 1.0;

    for (int t = 1; t <= n; ++t) {
        m.names[m.idx_x(t)] = "x" + std::to_string(t);
        m.names[m.idx_xbar(t)] = "xb" + std::to_string(t);
        m.names[m.idx_d(t)] = "d" + std::to_string(t);
        m.names[m.idx_dbar(t)] = "db" + std::to_string(t);
        for (int i = t; i <= n; ++i) {
            m.names[m.idx_y(i, t)] =
                "y_" + std::to_string(i) + "_" + std::to_string(t);
            m.names[m.idx_D(t, i)] =
                "D_" + std::to_string(t) + "_" + std::to_string(i);
        }
    }
    m.names[m.idx_c()] = "c";

    auto& rows = m.lp.rows;
    // (1) degree of common-phase arrivals.
    for (int t = 1; t <= n; ++t)
        rows.push_back({{{m.idx_x(t), 1.0},
                         {m.idx_xbar(t), static_cast<double>(2 * n - 2 * t + 1)}},
                        'L',
                        1.0,
                        "cap_v" + std::to_string(t)});
    // (2) definition of d_t.
    for (int t = 1; t <= n; ++t) {
        LpRow row;
        row.coeffs.push_back({m.idx_d(t), 1.0});
        row.coeffs.push_back({m.idx_x(t), -1.0});
        for (int i = 1; i < t; ++i) row.coeffs.push_back({m.idx_xbar(i), -1.0});
        row.sense = 'E';
        row.rhs = 0.0;
        row.name = "def_d" + std::to_string(t);
        rows.push_back(std::move(row));
    }
    // (3) definition of dbar_t.
    for (int t = 1; t <= n; ++t) {
        LpRow row;
        row.coeffs.push_back({m.idx_dbar(t), 1.0});
        for (int i = 1; i <= t; ++i) row.coeffs.push_back({m.idx_xbar(i), -1.0});
        row.sense = 'E';
        row.rhs = 0.0;
        row.name = "def_db" + std::to_string(t);
        rows.push_back(std::move(row));
    }
    // (4) monotonicity of d.
    for (int t = 1; t < n; ++t)
        rows.push_back({{{m.idx_d(t), 1.0}, {m.idx_d(t + 1), -1.0}},
                        'L',
                        0.0,
                        "mono_d" + std::to_string(t)});
    // (5) degree of robustness-phase arrivals.
    for (int t = 1; t <= n; ++t) {
        LpRow row;
        for (int i = t; i <= n; ++i) row.coeffs.push_back({m.idx_y(i, t), 1.0});
        row.sense = 'L';
        row.rhs = 1.0;
        row.name = "cap_w" + std::to_string(t);
        rows.push_back(std::move(row));
    }
    // (6) definition of D^{(t)}_i.
    for (int t = 1; t <= n; ++t)
        for (int i = t; i <= n; ++i) {
            LpRow row;
            row.coeffs.push_back({m.idx_D(t, i), 1.0});
            row.coeffs.push_back({m.idx_d(i), -1.0});
            for (int s = 1; s <= t; ++s)
                row.coeffs.push_back({m.idx_y(i, s), -1.0});
            row.sense = 'E';
            row.rhs = 0.0;
            row.name = "def_D" + std::to_string(t) + "_" + std::to_string(i);
            rows.push_back(std::move(row));
        }
    // (7) monotonicity of D^{(t)}.
    for (int t = 1; t <= n; ++t)
        for (int i = t; i < n; ++i)
            rows.push_back({{{m.idx_D(t, i), 1.0}, {m.idx_D(t, i + 1), -1.0}},
                            'L',
                            0.0,
                            "mono_D" + std::to_string(t) + "_" +
                                std::to_string(i)});
    // (8) robustness.
    {
        LpRow row;
        for (int t = 1; t <= n; ++t) {
            row.coeffs.push_back({m.idx_d(t), 1.0});
            row.coeffs.push_back({m.idx_dbar(t), 1.0});
            for (int i = t; i <= n; ++i) row.coeffs.push_back({m.idx_y(i, t), 1.0});
        }
        row.sense = 'G';
        row.rhs = 2.0 * n * r;
        row.name = "robust";
        rows.push_back(std::move(row));
    }
    // (9) consistency.
    {
        LpRow row;
        for (int t = 1; t <= n; ++t) row.coeffs.push_back({m.idx_d(t), 1.0});
        row.coeffs.push_back({m.idx_c(), -2.0 * n});
        row.sense = 'G';
        row.rhs = -static_cast<double>(n);
        row.name = "consist";
        rows.push_back(std::move(row));
    }
    return m;
}

namespace {

void append_term(std::ostringstream& out, bool first, double coef,
                 const std::string& name) {
    if (coef == 0.0) return;
    double mag = std::abs(coef);
    if (first) {
        if (coef < 0.0) out << "- ";
    } else {
        out << (coef < 0.0 ? " - " : " + ");
    }
    if (mag != 1.0) out << format_double(mag) << ' ';
    out << name;
}

} // namespace

std::string export_lp(const FrlpModel& model) {
    std::ostringstream out;
    out << "\\ factor-revealing LP, n=" << model.n
        << ", r=" << format_double(model.r) << "\n";
    out << "Maximize\n obj: ";
    bool first = true;
    for (int j = 0; j < model.lp.num_vars; ++j)
        if (model.lp.objective[j] != 0.0) {
            append_term(out, first, model.lp.objective[j], model.names[j]);
            first = false;
        }
    out << "\nSubject To\n";
    for (const LpRow& row : model.lp.rows) {
        out << ' ' << row.name << ": ";
        first = true;
        for (const auto& [j, a] : row.coeffs) {
            append_term(out, first, a, model.names[j]);
            first = false;
        }
        out << (row.sense == 'L' ? " <= " : row.sense == 'G' ? " >= " : " = ")
            << format_double(row.rhs) << "\n";
    }
    out << "Bounds\n";
    for (int j = 0; j < model.lp.num_vars; ++j)
        out << " 0 <= " << model.names[j] << " <= "
            << format_double(model.lp.upper[j]) << "\n";
    out << "End\n";
    return out.str();
}

namespace {

bool is_number_start(const std::string& tok) {
    return !tok.empty() && (std::isdigit(static_cast<unsigned char>(tok[0])) ||
                            tok[0] == '.');
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

} // namespace

LinearProgram parse_lp(const std::string& text,
                       std::vector<std::string>& names_out) {
    LinearProgram lp;
    names_out.clear();
    std::map<std::string, int> index;
    auto var_id = [&](const std::string& name) {
        auto it = index.find(name);
        if (it != index.end()) return it->second;
        int id = lp.add_var(0.0, kLpInf);
        index[name] = id;
        names_out.push_back(name);
        return id;
    };

    enum Section { NONE, OBJ, ROWS, BOUNDS, DONE } section = NONE;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        size_t cmt = line.find('\\');
        if (cmt != std::string::npos) line.erase(cmt);
        std::istringstream probe(line);
        std::string w1, w2;
        probe >> w1;
        if (w1.empty()) continue;
        std::string lw1 = lower(w1);
        if (lw1 == "maximize" || lw1 == "max") {
            section = OBJ;
            continue;
        }
        if (lw1 == "subject" || lw1 == "st" || lw1 == "st:" ||
            lw1 == "such") {
            section = ROWS;
            continue;
        }
        if (lw1 == "bounds") {
            section = BOUNDS;
            continue;
        }
        if (lw1 == "end") {
            section = DONE;
            break;
        }
        if (lw1 == "minimize" || lw1 == "min")
            throw ParseError("lp line " + std::to_string(line_no) +
                             ": only maximization supported");

        if (section == OBJ || section == ROWS) {
            // [name:] term { +|- term } [sense rhs]
            std::istringstream ls(line);
            std::vector<std::string> toks;
            std::string tok;
            while (ls >> tok) toks.push_back(tok);
            size_t pos = 0;
            if (!toks.empty() && toks[0].back() == ':') {
                ++pos;
            } else if (toks.size() > 1 && toks[1] == ":") {
                pos += 2;
            }
            std::vector<std::pair<int, double>> terms;
            char sense = 0;
            double rhs = 0.0;
            double sign = 1.0;
            bool pending_sign = false;
            double coef = 1.0;
            bool pending_coef = false;
            for (; pos < toks.size(); ++pos) {
                const std::string& t = toks[pos];
                if (t == "+" || t == "-") {
                    sign = (t == "-") ? -1.0 : 1.0;
                    pending_sign = true;
                } else if (t == "<=" || t == "=<" || t == "<") {
                    sense = 'L';
                } else if (t == ">=" || t == "=>" || t == ">") {
                    sense = 'G';
                } else if (t == "=") {
                    sense = 'E';
                } else if (is_number_start(t) ||
                           ((t[0] == '+' || t[0] == '-') && t.size() > 1 &&
                            is_number_start(t.substr(1)))) {
                    char* end = nullptr;
                    double v = std::strtod(t.c_str(), &end);
                    if (*end != '\0')
                        throw ParseError("lp line " + std::to_string(line_no) +
                                         ": bad number '" + t + "'");
                    if (sense != 0) {
                        rhs = v;
                    } else {
                        coef = v;
                        pending_coef = true;
                    }
                } else { // variable name
                    double c = sign * (pending_coef ? coef : 1.0);
                    terms.emplace_back(var_id(t), c);
                    sign = 1.0;
                    pending_sign = false;
                    pending_coef = false;
                    coef = 1.0;
                }
            }
            (void)pending_sign;
            if (section == OBJ) {
                for (auto [j, a] : terms) lp.objective[j] += a;
            } else {
                if (sense == 0)
                    throw ParseError("lp line " + std::to_string(line_no) +
                                     ": constraint missing sense");
                LpRow row;
                row.coeffs = std::move(terms);
                row.sense = sense;
                row.rhs = rhs;
                lp.rows.push_back(std::move(row));
            }
        } else if (section == BOUNDS) {
            // forms: "lo <= var <= up", "var <= up", "var >= lo", "var free"
            std::istringstream ls(line);
            std::vector<std::string> toks;
            std::string tok;
            while (ls >> tok) toks.push_back(tok);
            auto as_num = [&](const std::string& s, double& v) {
                char* end = nullptr;
                v = std::strtod(s.c_str(), &end);
                return end != s.c_str() && *end == '\0';
            };
            double lo = 0.0, up = kLpInf, v;
            if (toks.size() == 5 && toks[1] == "<=" && toks[3] == "<=" &&
                as_num(toks[0], v)) {
                lo = v;
                int j = var_id(toks[2]);
                if (!as_num(toks[4], up))
                    throw ParseError("lp line " + std::to_string(line_no) +
                                     ": bad bound");
                lp.upper[j] = up;
            } else if (toks.size() == 3 && toks[1] == "<=") {
                int j = var_id(toks[0]);
                if (!as_num(toks[2], up))
                    throw ParseError("lp line " + std::to_string(line_no) +
                                     ": bad bound");
                lp.upper[j] = up;
            } else if (toks.size() == 3 && toks[1] == ">=") {
                var_id(toks[0]);
                if (!as_num(toks[2], lo))
                    throw ParseError("lp line " + std::to_string(line_no) +
                                     ": bad bound");
            } else if (toks.size() == 2 && lower(toks[1]) == "free") {
                throw ParseError("lp line " + std::to_string(line_no) +
                                 ": free variables not supported");
            } else {
                throw ParseError("lp line " + std::to_string(line_no) +
                                 ": unrecognized bound");
            }
            if (lo != 0.0)
                throw ParseError("lp line " + std::to_string(line_no) +
                                 ": only lower bound 0 supported");
        } else {
            throw ParseError("lp line " + std::to_string(line_no) +
                             ": content outside any section");
        }
    }
    if (section != DONE) throw ParseError("lp file missing End");
    return lp;
}

double frlp_check(const FrlpModel& model, const std::vector<double>& var) {
    double worst = 0.0;
    for (const LpRow& row : model.lp.rows) {
        double act = 0.0;
        for (const auto& [j, a] : row.coeffs) act += a * var[j];
        if (row.sense == 'L') worst = std::max(worst, act - row.rhs);
        else if (row.sense == 'G') worst = std::max(worst, row.rhs - act);
        else worst = std::max(worst, std::abs(act - row.rhs));
    }
    for (int j = 0; j < model.lp.num_vars; ++j) {
        worst = std::max(worst, -var[j]);
        worst = std::max(worst, var[j] - model.lp.upper[j]);
    }
    return worst;
}

FrlpSolution solve_frlp_dense(const FrlpModel& model, int cap) {
    if (model.n > cap)
        throw RunError("frlp dense solver capped at n=" + std::to_string(cap));
    LpSolution sol = solve_lp_dense(model.lp);
    FrlpSolution out;
    if (sol.status != LpStatus::Optimal) return out; // infeasible/unbounded
    out.feasible = true;
    out.c_star = sol.objective;
    out.var = sol.x;
    out.max_violation = frlp_check(model, out.var);
    return out;
}

double frlp_waterfill(const std::vector<double>& d, std::vector<double>& grad) {
    const int n = static_cast<int>(d.size());
    std::vector<double> lev = d;
    // G[i][j] = d lev_i / d d_j.
    std::vector<std::vector<double>> G(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) G[i][i] = 1.0;
    double total = 0.0;
    grad.assign(n, 0.0);

    for (int t = 0; t < n; ++t) { // round t serves u_i for i >= t
        double cap = 0.0;
        for (int i = t; i < n; ++i) cap += 1.0 - lev[i];
        if (cap <= 1.0) {
            total += cap;
            for (int i = t; i < n; ++i) {
                for (int j = 0; j < n; ++j) grad[j] -= G[i][j];
                lev[i] = 1.0;
                std::fill(G[i].begin(), G[i].end(), 0.0);
            }
        } else {
            // Pour exactly one unit into the lowest levels; levels stay
            // sorted (input d nondecreasing, each round flattens a prefix).
            total += 1.0;
            double prefix = 0.0;
            int k = n - t;
            double line = 1.0;
            for (int j = 0; j < n - t; ++j) {
                prefix += lev[t + j];
                double hi = (t + j + 1 < n) ? lev[t + j + 1] : 1.0;
                if ((j + 1) * hi - prefix >= 1.0) {
                    line = (1.0 + prefix) / (j + 1);
                    k = j + 1;
                    break;
                }
            }
            std::vector<double> gline(n, 0.0);
            for (int i = t; i < t + k; ++i)
                for (int j = 0; j < n; ++j) gline[j] += G[i][j] / k;
            for (int i = t; i < t + k; ++i) {
                lev[i] = line;
                G[i] = gline;
            }
        }
    }
    return total;
}

namespace {

// Coefficient expansion of d_i over master variables:
// d_i = x_i + sum_{j < i} xbar_j   (1-based i, j).
void add_d_terms(LpRow& row, int n, int i, double coef) {
    row.coeffs.push_back({i - 1, coef});                       // x_i
    for (int j = 1; j < i; ++j) row.coeffs.push_back({n + j - 1, coef});
}

} // namespace

FrlpSolution solve_frlp_embedded(const FrlpModel& model, FrlpCutPool* pool,
                                 int cap) {
    const int n = model.n;
    const double r = model.r;
    if (n > cap)
        throw RunError("frlp embedded solver capped at n=" +
                       std::to_string(cap) +
                       "; use export_lp and an external solver");
    FrlpCutPool local;
    if (pool == nullptr) pool = &local;
    if (pool->n != n) {
        pool->n = n;
        pool->cuts.clear();
    }

    // Master variables: x_1..x_n (0..n-1), xbar_1..xbar_n (n..2n-1),
    // rho (2n), c (2n+1).
    const int v_rho = 2 * n, v_c = 2 * n + 1;

    FrlpSolution out;
    for (int iter = 0; iter < 2000; ++iter) {
        LinearProgram master;
        // x/xbar upper bounds are implied by the degree rows, and rho <= n by
        // the t = n+1 seed cut, so only c carries an explicit upper bound.
        for (int t = 0; t < 2 * n; ++t) master.add_var(0.0, kLpInf);
        master.add_var(0.0, kLpInf); // rho
        master.add_var(1.0, 1.0);    // c (objective)

        for (int t = 1; t <= n; ++t)
            master.rows.push_back(
                {{{t - 1, 1.0}, {n + t - 1, static_cast<double>(2 * n - 2 * t + 1)}},
                 'L',
                 1.0,
                 ""});
        for (int t = 1; t < n; ++t) // d_t <= d_{t+1}
            master.rows.push_back(
                {{{t - 1, 1.0}, {t, -1.0}, {n + t - 1, -1.0}}, 'L', 0.0, ""});
        {
            LpRow row; // d_n <= 1
            add_d_terms(row, n, n, 1.0);
            row.sense = 'L';
            row.rhs = 1.0;
            master.rows.push_back(std::move(row));
        }
        {
            LpRow row; // dbar_n <= 1
            for (int j = 1; j <= n; ++j) row.coeffs.push_back({n + j - 1, 1.0});
            row.sense = 'L';
            row.rhs = 1.0;
            master.rows.push_back(std::move(row));
        }
        {
            LpRow row; // sum d + sum dbar + rho >= 2nr
            for (int t = 1; t <= n; ++t) add_d_terms(row, n, t, 1.0);
            for (int j = 1; j <= n; ++j)
                row.coeffs.push_back({n + j - 1, static_cast<double>(n - j + 1)});
            row.coeffs.push_back({v_rho, 1.0});
            row.sense = 'G';
            row.rhs = 2.0 * n * r;
            master.rows.push_back(std::move(row));
        }
        {
            LpRow row; // 2n c - sum d <= n
            row.coeffs.push_back({v_c, 2.0 * n});
            for (int t = 1; t <= n; ++t) add_d_terms(row, n, t, -1.0);
            row.sense = 'L';
            row.rhs = static_cast<double>(n);
            master.rows.push_back(std::move(row));
        }
        // Seed cuts: rho <= (t-1) + sum_{i>=t} (1 - d_i)  =>
        // rho + sum_{i>=t} d_i <= n, for t = 1..n+1.
        for (int t = 1; t <= n + 1; ++t) {
            LpRow row;
            row.coeffs.push_back({v_rho, 1.0});
            for (int i = t; i <= n; ++i) add_d_terms(row, n, i, 1.0);
            row.sense = 'L';
            row.rhs = static_cast<double>(n);
            master.rows.push_back(std::move(row));
        }
        for (const FrlpCutPool::Cut& cut : pool->cuts) {
            LpRow row; // rho - g . d <= rhs
            row.coeffs.push_back({v_rho, 1.0});
            for (int i = 1; i <= n; ++i)
                if (cut.grad[i - 1] != 0.0) add_d_terms(row, n, i, -cut.grad[i - 1]);
            row.sense = 'L';
            row.rhs = cut.rhs;
            master.rows.push_back(std::move(row));
        }

        LpSolution sol = solve_lp_dense(master);
        if (sol.status == LpStatus::Infeasible) return out; // feasible=false
        if (sol.status != LpStatus::Optimal)
            throw RunError("frlp embedded: master LP solve failed");

        std::vector<double> d(n, 0.0);
        for (int i = 1; i <= n; ++i) {
            double v = sol.x[i - 1];
            for (int j = 1; j < i; ++j) v += sol.x[n + j - 1];
            d[i - 1] = std::clamp(v, 0.0, 1.0);
            if (i > 1) d[i - 1] = std::max(d[i - 1], d[i - 2]);
        }
        std::vector<double> g;
        double T = frlp_waterfill(d, g);
        double rho = sol.x[v_rho];
        if (rho <= T + 1e-9) {
            // Certified: master is a relaxation and the waterfill y realizes
            // total >= rho, so the master optimum is attained.
            out.feasible = true;
            out.c_star = sol.x[v_c];
            out.cuts_used = static_cast<int>(pool->cuts.size());
            // Reconstruct a full primal solution.
            out.var.assign(model.num_vars(), 0.0);
            for (int t = 1; t <= n; ++t) {
                out.var[model.idx_x(t)] = sol.x[t - 1];
                out.var[model.idx_xbar(t)] = sol.x[n + t - 1];
                out.var[model.idx_d(t)] = d[t - 1];
                double db = 0.0;
                for (int j = 1; j <= t; ++j) db += sol.x[n + j - 1];
                out.var[model.idx_dbar(t)] = std::min(db, 1.0);
            }
            out.var[model.idx_c()] = out.c_star;
            // Replay the waterfill, recording per-round pours.
            std::vector<double> lev = d;
            for (int t = 1; t <= n; ++t) {
                double cap = 0.0;
                for (int i = t; i <= n; ++i) cap += 1.0 - lev[i - 1];
                if (cap <= 1.0) {
                    for (int i = t; i <= n; ++i) {
                        out.var[model.idx_y(i, t)] = 1.0 - lev[i - 1];
                        lev[i - 1] = 1.0;
                    }
                } else {
                    double prefix = 0.0, line = 1.0;
                    int k = n - t + 1;
                    for (int j = 0; j < n - t + 1; ++j) {
                        prefix += lev[t - 1 + j];
                        double hi = (t + j < n) ? lev[t + j] : 1.0;
                        if ((j + 1) * hi - prefix >= 1.0) {
                            line = (1.0 + prefix) / (j + 1);
                            k = j + 1;
                            break;
                        }
                    }
                    for (int i = t; i < t + k; ++i) {
                        out.var[model.idx_y(i, t)] = line - lev[i - 1];
                        lev[i - 1] = line;
                    }
                }
                for (int i = t; i <= n; ++i)
                    out.var[model.idx_D(t, i)] = lev[i - 1];
            }
            out.max_violation = frlp_check(model, out.var);
            return out;
        }
        // Supergradient cut: T(d) <= T(d*) + g . (d - d*).
        FrlpCutPool::Cut cut;
        cut.grad = g;
        double gd = 0.0;
        for (int i = 0; i < n; ++i) gd += g[i] * d[i];
        cut.rhs = T - gd + 1e-10;
        pool->cuts.push_back(std::move(cut));
    }
    throw RunError("frlp embedded: cutting-plane iteration limit reached");
}

} // namespace matchkit
