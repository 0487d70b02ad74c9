#include "matchkit/adwords.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "matchkit/offline.hpp" // Rng

namespace matchkit {

double AdwordsArrival::bid_of(OfflineId u) const {
    auto it = std::lower_bound(advertisers.begin(), advertisers.end(), u);
    if (it == advertisers.end() || *it != u) return 0.0;
    return bids[it - advertisers.begin()];
}

void AdwordsInstance::validate() const {
    const int n = n_advertisers();
    for (double b : budgets)
        if (!(b > 0.0)) throw ParseError("adwords: budget must be positive");
    std::vector<double> adv_frac(n, 0.0);
    for (size_t t = 0; t < arrivals.size(); ++t) {
        const AdwordsArrival& ev = arrivals[t];
        if (ev.bids.size() != ev.advertisers.size())
            throw ParseError("adwords arrival " + std::to_string(t) +
                             ": bids misaligned");
        if (!std::is_sorted(ev.advertisers.begin(), ev.advertisers.end()) ||
            std::adjacent_find(ev.advertisers.begin(), ev.advertisers.end()) !=
                ev.advertisers.end())
            throw ParseError("adwords arrival " + std::to_string(t) +
                             ": advertisers not sorted/unique");
        for (size_t i = 0; i < ev.advertisers.size(); ++i) {
            OfflineId u = ev.advertisers[i];
            if (u < 0 || u >= n)
                throw ParseError("adwords arrival " + std::to_string(t) +
                                 ": advertiser out of range");
            if (!(ev.bids[i] >= 0.0))
                throw ParseError("adwords arrival " + std::to_string(t) +
                                 ": negative bid");
        }
        double s = 0.0;
        for (const auto& [u, a] : ev.advice) {
            double b = ev.bid_of(u);
            if (b <= 0.0 && a > 0.0)
                throw ParseError("adwords arrival " + std::to_string(t) +
                                 ": advice on advertiser without bid");
            if (a < -kTol || a > 1.0 + kTol)
                throw ParseError("adwords arrival " + std::to_string(t) +
                                 ": advice value outside [0,1]");
            s += a;
            adv_frac[u] += b * a / budgets[u];
            if (adv_frac[u] > 1.0 + kTol)
                throw ParseError("adwords: cumulative advice spend on " +
                                 std::to_string(u) + " exceeds budget");
        }
        if (s > 1.0 + kTol)
            throw ParseError("adwords arrival " + std::to_string(t) +
                             ": advice sum exceeds 1");
    }
}

double AdwordsInstance::epsilon_hat() const {
    double eps = 0.0;
    for (const AdwordsArrival& ev : arrivals)
        for (size_t i = 0; i < ev.advertisers.size(); ++i)
            eps = std::max(eps, ev.bids[i] / budgets[ev.advertisers[i]]);
    return eps;
}

double AdwordsInstance::advice_value() const {
    double s = 0.0;
    for (const AdwordsArrival& ev : arrivals)
        for (const auto& [u, a] : ev.advice) s += ev.bid_of(u) * a;
    return s;
}

namespace {

[[noreturn]] void fail(int line_no, const std::string& msg) {
    throw ParseError("line " + std::to_string(line_no) + ": " + msg);
}

double parse_real(const std::string& tok, int line_no) {
    char* end = nullptr;
    double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0')
        fail(line_no, "bad number '" + tok + "'");
    return v;
}

long parse_int(const std::string& tok, int line_no) {
    char* end = nullptr;
    long v = std::strtol(tok.c_str(), &end, 10);
    if (end == tok.c_str() || *end != '\0')
        fail(line_no, "bad integer '" + tok + "'");
    return v;
}

// Parses "u=val u=val ..." pairs.
std::vector<std::pair<OfflineId, double>> parse_pairs(const std::string& text,
                                                      int n, int line_no) {
    std::vector<std::pair<OfflineId, double>> out;
    std::istringstream ps(text);
    std::string tok;
    while (ps >> tok) {
        size_t eq = tok.find('=');
        if (eq == std::string::npos) fail(line_no, "expected u=value token");
        long u = parse_int(tok.substr(0, eq), line_no);
        double val = parse_real(tok.substr(eq + 1), line_no);
        if (u < 0 || u >= n) fail(line_no, "advertiser index out of range");
        out.emplace_back(static_cast<OfflineId>(u), val);
    }
    std::sort(out.begin(), out.end());
    for (size_t i = 1; i < out.size(); ++i)
        if (out[i].first == out[i - 1].first) fail(line_no, "duplicate key");
    return out;
}

} // namespace

AdwordsInstance parse_adwords(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    AdwordsInstance inst;

    auto next_line = [&](std::string& out) {
        while (std::getline(in, line)) {
            ++line_no;
            size_t hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            size_t last = line.find_last_not_of(" \t\r");
            if (last == std::string::npos) continue;
            line.erase(last + 1);
            out = line;
            return true;
        }
        return false;
    };

    std::string cur;
    if (!next_line(cur) || cur != "MATCHKIT v1")
        fail(line_no == 0 ? 1 : line_no, "expected header 'MATCHKIT v1'");

    int n = 0;
    if (!next_line(cur)) fail(line_no, "expected 'offline <n> adwords'");
    {
        std::istringstream ls(cur);
        std::string kw, n_tok, mode;
        ls >> kw >> n_tok >> mode;
        if (kw != "offline" || mode != "adwords")
            fail(line_no, "expected 'offline <n> adwords'");
        long v = parse_int(n_tok, line_no);
        if (v < 1) fail(line_no, "need at least one advertiser");
        n = static_cast<int>(v);
    }

    if (!next_line(cur)) fail(line_no, "expected budgets line");
    {
        std::istringstream ls(cur);
        std::string kw, tok;
        ls >> kw;
        if (kw != "budgets") fail(line_no, "expected budgets line");
        for (int i = 0; i < n; ++i) {
            if (!(ls >> tok)) fail(line_no, "too few budgets");
            inst.budgets.push_back(parse_real(tok, line_no));
        }
        if (ls >> tok) fail(line_no, "too many budgets");
    }

    int expected = 0;
    while (next_line(cur)) {
        std::istringstream ls(cur);
        std::string kw, k_tok;
        ls >> kw >> k_tok;
        if (kw != "arrival") fail(line_no, "unknown directive '" + kw + "'");
        if (!k_tok.empty() && k_tok.back() == ':') k_tok.pop_back();
        if (parse_int(k_tok, line_no) != expected)
            fail(line_no, "arrival index out of order");
        size_t colon = cur.find(':');
        std::string body = cur.substr(colon + 1);

        // Sections separated by '|': bids ("b: ..."), optional advice ("a: ...").
        AdwordsArrival ev;
        bool saw_bids = false;
        std::string section;
        std::istringstream bs(body);
        while (std::getline(bs, section, '|')) {
            std::istringstream ss(section);
            std::string tag;
            if (!(ss >> tag)) continue;
            std::string rest;
            std::getline(ss, rest);
            if (tag == "b:") {
                saw_bids = true;
                for (auto [u, b] : parse_pairs(rest, n, line_no)) {
                    if (b < 0.0) fail(line_no, "negative bid");
                    ev.advertisers.push_back(u);
                    ev.bids.push_back(b);
                }
            } else if (tag == "a:") {
                ev.advice = parse_pairs(rest, n, line_no);
            } else {
                fail(line_no, "expected 'b:' or 'a:' section");
            }
        }
        if (!saw_bids) fail(line_no, "arrival missing 'b:' section");
        inst.arrivals.push_back(std::move(ev));
        ++expected;
    }
    inst.validate();
    return inst;
}

std::string serialize_adwords(const AdwordsInstance& inst) {
    std::ostringstream out;
    out << "MATCHKIT v1\n";
    out << "offline " << inst.n_advertisers() << " adwords\n";
    out << "budgets";
    for (double b : inst.budgets) out << ' ' << format_double(b);
    out << "\n";
    for (size_t t = 0; t < inst.arrivals.size(); ++t) {
        const AdwordsArrival& ev = inst.arrivals[t];
        out << "arrival " << t << ": b:";
        for (size_t i = 0; i < ev.advertisers.size(); ++i)
            out << ' ' << ev.advertisers[i] << '='
                << format_double(ev.bids[i]);
        if (!ev.advice.empty()) {
            out << " | a:";
            for (const auto& [u, a] : ev.advice)
                out << ' ' << u << '=' << format_double(a);
        }
        out << "\n";
    }
    return out.str();
}

AdwordsInstance load_adwords(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open adwords instance file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_adwords(ss.str());
}

AdwordsFracResult adwords_frac_run(const AdwordsInstance& inst, double lambda) {
    inst.validate();
    const PenaltyParams p(lambda);
    const int n = inst.n_advertisers();
    const std::vector<double>& B = inst.budgets;
    AdwordsFracResult res;
    res.spend.assign(n, 0.0);
    res.certificate.mode = DualCertificate::Mode::ADWORDS;
    res.certificate.alpha.assign(n, 0.0);
    std::vector<double> A(n, 0.0);

    for (const AdwordsArrival& ev : inst.arrivals) {
        // Advice accumulates first, in budget-fraction units.
        for (const auto& [u, a] : ev.advice) {
            A[u] += ev.bid_of(u) * a / B[u];
            if (A[u] > 1.0 + kTol)
                throw RunError("adwords: advice overruns budget fraction");
            A[u] = std::min(A[u], 1.0);
        }

        const size_t k = ev.advertisers.size();
        std::vector<double> x(k, 0.0);

        // Potentials b(1 - f(A,X)) are fixed during the level search; cache
        // the f evaluation per advertiser.
        std::vector<double> phi(k, 0.0);
        double max_phi = 0.0;
        for (size_t i = 0; i < k; ++i) {
            OfflineId u = ev.advertisers[i];
            if (ev.bids[i] <= 0.0) continue;
            phi[i] = ev.bids[i] * (1.0 - f(A[u], res.spend[u] / B[u], p));
            max_phi = std::max(max_phi, phi[i]);
        }

        // Impression mass that brings u's potential down to `level`;
        // dX from the LAB inverse, mass = dX * B/b.
        auto need = [&](size_t i, double level) {
            if (level >= phi[i]) return 0.0;
            OfflineId u = ev.advertisers[i];
            double b = ev.bids[i];
            if (b <= 0.0) return 0.0;
            double X0 = res.spend[u] / B[u];
            double y = 1.0 - level / b;
            if (y > 1.0) return (1.0 - X0) * B[u] / b;
            double Xstar = std::min(f1_inv(y, p), A[u] + f0_inv(y, p));
            Xstar = std::clamp(Xstar, X0, 1.0);
            return (Xstar - X0) * B[u] / b;
        };
        auto total_need = [&](double level) {
            double s = 0.0;
            for (size_t i = 0; i < k; ++i) s += need(i, level);
            return s;
        };
        double lstar = 0.0;
        if (total_need(0.0) > 1.0) {
            double lo = 0.0, hi = max_phi;
            for (int it = 0;
                 it < 100 && hi - lo > 1e-16 * std::max(1.0, max_phi); ++it) {
                double mid = 0.5 * (lo + hi);
                (total_need(mid) <= 1.0 ? hi : lo) = mid;
            }
            lstar = hi;
        }
        double assigned = 0.0;
        for (size_t i = 0; i < k; ++i) {
            x[i] = need(i, lstar);
            assigned += x[i];
        }
        // Same dual split as the matching waterfill: the arrival keeps the
        // water level (scaled by its unit impression mass) when saturated and
        // each advertiser is credited its revenue above the level, keeping
        // revenue = sum(alpha) + sum(beta) exact even when an advertiser is
        // pinned at the advice boundary, where f jumps.
        double beta_v = assigned >= 1.0 - 1e-9 ? lstar : 0.0;
        for (size_t i = 0; i < k; ++i) {
            if (x[i] <= 0.0) continue;
            OfflineId u = ev.advertisers[i];
            double b = ev.bids[i];
            res.spend[u] = std::min(res.spend[u] + b * x[i], B[u]);
            res.revenue += b * x[i];
            res.certificate.alpha[u] += x[i] * (b - beta_v);
        }
        res.certificate.beta.push_back(beta_v);
        res.x.push_back(std::move(x));
    }
    return res;
}

AdwordsCertReport adwords_certify(const AdwordsFracResult& result,
                                  const AdwordsInstance& inst, double lambda) {
    AdwordsCertReport rep;
    rep.revenue = result.revenue;
    rep.dual_total = result.certificate.total();
    rep.equality_gap_rel =
        std::abs(rep.revenue - rep.dual_total) / std::max(1.0, rep.revenue);
    const std::vector<double>& alpha = result.certificate.alpha;
    const std::vector<double>& beta = result.certificate.beta;
    std::vector<double> adv_frac(inst.n_advertisers(), 0.0);
    std::vector<double> adv_beta(inst.n_advertisers(), 0.0);
    for (size_t t = 0; t < inst.arrivals.size(); ++t) {
        const AdwordsArrival& ev = inst.arrivals[t];
        for (size_t i = 0; i < ev.advertisers.size(); ++i) {
            OfflineId u = ev.advertisers[i];
            double b = ev.bids[i];
            if (b <= 0.0) continue;
            double lhs = (b / inst.budgets[u]) * alpha[u] + beta[t];
            rep.min_edge_ratio = std::min(rep.min_edge_ratio, lhs / b);
        }
        for (const auto& [u, a] : ev.advice) {
            adv_frac[u] += ev.bid_of(u) * a / inst.budgets[u];
            adv_beta[u] += a * beta[t];
        }
    }
    for (int u = 0; u < inst.n_advertisers(); ++u) {
        if (adv_frac[u] <= 0.0) continue;
        rep.has_advice = true;
        double denom = inst.budgets[u] * std::min(adv_frac[u], 1.0);
        rep.min_consistency_ratio = std::min(
            rep.min_consistency_ratio, (alpha[u] + adv_beta[u]) / denom);
    }
    rep.pass_gap = rep.equality_gap_rel <= 1e-8;
    rep.pass_robust = rep.min_edge_ratio >= r_lab(lambda) - 1e-6;
    rep.pass_consistent =
        !rep.has_advice || rep.min_consistency_ratio >= c_lab(lambda) - 1e-6;
    return rep;
}

double adwords_epsilon0() {
    // Root of 1 - e - sqrt(e ln(1/e)) on (0, 1/2).
    double lo = 1e-12, hi = 0.5;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double g = 1.0 - mid - std::sqrt(mid * std::log(1.0 / mid));
        (g > 0.0 ? lo : hi) = mid;
    }
    return lo;
}

double adwords_gamma(double epsilon) {
    if (!(epsilon > 0.0) || epsilon >= adwords_epsilon0())
        throw RunError(
            "adwords: epsilon must lie in (0, " +
            format_double(adwords_epsilon0()) +
            ") so that gamma = 1 - eps - sqrt(eps ln(1/eps)) is positive; "
            "use a smaller epsilon");
    return 1.0 - epsilon - std::sqrt(epsilon * std::log(1.0 / epsilon));
}

double adwords_round(const AdwordsInstance& inst,
                     const std::vector<std::vector<double>>& frac_trace,
                     double epsilon, std::uint64_t seed) {
    const double gamma = adwords_gamma(epsilon);
    if (inst.epsilon_hat() > epsilon + kTol)
        throw RunError("adwords: instance bid/budget ratio exceeds epsilon");
    if (frac_trace.size() != inst.arrivals.size())
        throw RunError("adwords: fractional trace misaligned");
    Rng rng(seed);
    std::vector<double> remaining = inst.budgets;
    double revenue = 0.0;
    for (size_t t = 0; t < inst.arrivals.size(); ++t) {
        const AdwordsArrival& ev = inst.arrivals[t];
        if (frac_trace[t].size() != ev.advertisers.size())
            throw RunError("adwords: fractional trace misaligned");
        double r = rng.uniform();
        double acc = 0.0;
        int pick = -1;
        for (size_t i = 0; i < ev.advertisers.size(); ++i) {
            acc += gamma * frac_trace[t][i];
            if (r < acc) {
                pick = static_cast<int>(i);
                break;
            }
        }
        if (pick < 0) continue; // residual probability: no assignment
        OfflineId u = ev.advertisers[pick];
        double b = ev.bids[pick];
        if (remaining[u] >= b) { // hard budget guard, exact
            remaining[u] -= b;
            revenue += b;
        }
    }
    return revenue;
}

} // namespace matchkit
