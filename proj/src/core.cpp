#include "matchkit/core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace matchkit {

bool ArrivalEvent::has_neighbor(OfflineId u) const {
    return std::binary_search(neighborhood.begin(), neighborhood.end(), u);
}

double ArrivalEvent::advice_sum() const {
    double s = 0.0;
    for (const auto& [u, v] : advice) s += v;
    return s;
}

void GraphInstance::validate() const {
    if (n_offline < 0) throw ParseError("negative offline count");
    if (static_cast<int>(weights.size()) != n_offline)
        throw ParseError("weights size mismatch");
    for (double w : weights) {
        if (!(w >= 0.0)) throw ParseError("negative or NaN weight");
        if (!weighted && w != 1.0)
            throw ParseError("unweighted instance with weight != 1");
    }
    for (size_t t = 0; t < arrivals.size(); ++t) {
        const ArrivalEvent& ev = arrivals[t];
        if (!std::is_sorted(ev.neighborhood.begin(), ev.neighborhood.end()) ||
            std::adjacent_find(ev.neighborhood.begin(), ev.neighborhood.end()) !=
                ev.neighborhood.end())
            throw ParseError("arrival " + std::to_string(t) +
                             ": neighborhood not sorted/unique");
        for (OfflineId u : ev.neighborhood)
            if (u < 0 || u >= n_offline)
                throw ParseError("arrival " + std::to_string(t) +
                                 ": neighbor index out of range");
        double s = 0.0;
        for (const auto& [u, val] : ev.advice) {
            if (!ev.has_neighbor(u))
                throw ParseError("arrival " + std::to_string(t) +
                                 ": advice key not in neighborhood");
            if (val < -kTol || val > 1.0 + kTol)
                throw ParseError("arrival " + std::to_string(t) +
                                 ": advice value outside [0,1]");
            s += val;
        }
        if (s > 1.0 + kTol)
            throw ParseError("arrival " + std::to_string(t) +
                             ": advice sum exceeds 1");
    }
    // Advice must be a feasible fractional matching offline-side too.
    std::vector<double> acc(n_offline, 0.0);
    for (size_t t = 0; t < arrivals.size(); ++t)
        for (const auto& [u, val] : arrivals[t].advice) {
            acc[u] += val;
            if (acc[u] > 1.0 + kTol)
                throw ParseError("arrival " + std::to_string(t) +
                                 ": cumulative advice on offline " +
                                 std::to_string(u) + " exceeds 1");
        }
}

double GraphInstance::advice_value() const {
    double s = 0.0;
    for (const auto& ev : arrivals)
        for (const auto& [u, val] : ev.advice) s += weights[u] * val;
    return s;
}

bool GraphInstance::advice_integral() const {
    for (const auto& ev : arrivals) {
        if (ev.advice.size() > 1) return false;
        if (ev.advice.size() == 1 && ev.advice[0].second != 1.0) return false;
    }
    return true;
}

Allocation Allocation::zeros(const GraphInstance& g) {
    Allocation a;
    a.levels.assign(g.n_offline, 0.0);
    a.x.resize(g.arrivals.size());
    for (size_t t = 0; t < g.arrivals.size(); ++t)
        a.x[t].assign(g.arrivals[t].neighborhood.size(), 0.0);
    return a;
}

double DualCertificate::total() const {
    double s = 0.0;
    for (double a : alpha) s += a;
    for (double b : beta) s += b;
    return s;
}

std::string format_double(double v) {
    char buf[64];
    // integers print without an exponent ("10", not "1e+01")
    if (v == static_cast<long long>(v) && std::abs(v) < 1e15) {
        std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(v));
        return buf;
    }
    // shortest representation that round-trips
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        double back = std::strtod(buf, nullptr);
        if (back == v) return buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

[[noreturn]] void fail(int line_no, const std::string& msg) {
    throw ParseError("line " + std::to_string(line_no) + ": " + msg);
}

double parse_real(const std::string& tok, int line_no) {
    char* end = nullptr;
    double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0') fail(line_no, "bad number '" + tok + "'");
    return v;
}

long parse_int(const std::string& tok, int line_no) {
    char* end = nullptr;
    long v = std::strtol(tok.c_str(), &end, 10);
    if (end == tok.c_str() || *end != '\0') fail(line_no, "bad integer '" + tok + "'");
    return v;
}

} // namespace

GraphInstance parse_instance(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    GraphInstance g;

    auto next_line = [&](std::string& out) {
        while (std::getline(in, line)) {
            ++line_no;
            // strip comments and trailing whitespace
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

    if (!next_line(cur)) fail(line_no, "expected 'offline <n> weighted|unweighted'");
    {
        std::istringstream ls(cur);
        std::string kw, mode, n_tok;
        ls >> kw >> n_tok >> mode;
        if (kw != "offline") fail(line_no, "expected 'offline' line");
        long n = parse_int(n_tok, line_no);
        if (n < 0) fail(line_no, "negative offline count");
        g.n_offline = static_cast<int>(n);
        if (mode == "weighted") g.weighted = true;
        else if (mode == "unweighted") g.weighted = false;
        else fail(line_no, "mode must be weighted|unweighted");
    }

    g.weights.assign(g.n_offline, 1.0);
    int expected_arrival = 0;
    bool saw_weights = false;
    while (next_line(cur)) {
        std::istringstream ls(cur);
        std::string kw;
        ls >> kw;
        if (kw == "weights") {
            if (!g.weighted) fail(line_no, "weights line in unweighted instance");
            if (saw_weights || expected_arrival > 0)
                fail(line_no, "misplaced weights line");
            saw_weights = true;
            for (int i = 0; i < g.n_offline; ++i) {
                std::string tok;
                if (!(ls >> tok)) fail(line_no, "too few weights");
                g.weights[i] = parse_real(tok, line_no);
                if (!(g.weights[i] >= 0.0)) fail(line_no, "negative weight");
            }
            std::string extra;
            if (ls >> extra) fail(line_no, "too many weights");
        } else if (kw == "arrival") {
            std::string k_tok;
            ls >> k_tok;
            if (!k_tok.empty() && k_tok.back() == ':') k_tok.pop_back();
            long k = parse_int(k_tok, line_no);
            if (k != expected_arrival)
                fail(line_no, "arrival index " + std::to_string(k) +
                                  ", expected " + std::to_string(expected_arrival));
            std::string rest;
            std::getline(ls, rest);
            size_t colon = cur.find(':');
            if (colon == std::string::npos) fail(line_no, "missing ':' in arrival");
            std::string body = cur.substr(colon + 1);
            std::string nbr_part = body, adv_part;
            size_t bar = body.find('|');
            if (bar != std::string::npos) {
                nbr_part = body.substr(0, bar);
                adv_part = body.substr(bar + 1);
            }
            ArrivalEvent ev;
            {
                std::istringstream ns(nbr_part);
                std::string tok;
                while (ns >> tok) {
                    long u = parse_int(tok, line_no);
                    if (u < 0 || u >= g.n_offline)
                        fail(line_no, "neighbor index out of range");
                    ev.neighborhood.push_back(static_cast<OfflineId>(u));
                }
                std::sort(ev.neighborhood.begin(), ev.neighborhood.end());
                if (std::adjacent_find(ev.neighborhood.begin(),
                                       ev.neighborhood.end()) !=
                    ev.neighborhood.end())
                    fail(line_no, "duplicate neighbor");
            }
            if (!adv_part.empty()) {
                std::istringstream as(adv_part);
                std::string tok;
                as >> tok;
                if (tok != "a:") fail(line_no, "expected 'a:' after '|'");
                double sum = 0.0;
                while (as >> tok) {
                    size_t eq = tok.find('=');
                    if (eq == std::string::npos) fail(line_no, "advice needs u=val");
                    long u = parse_int(tok.substr(0, eq), line_no);
                    double val = parse_real(tok.substr(eq + 1), line_no);
                    if (u < 0 || u >= g.n_offline)
                        fail(line_no, "advice index out of range");
                    if (!std::binary_search(ev.neighborhood.begin(),
                                            ev.neighborhood.end(),
                                            static_cast<OfflineId>(u)))
                        fail(line_no, "advice key " + std::to_string(u) +
                                          " not in neighborhood");
                    if (val < 0.0 || val > 1.0 + kTol)
                        fail(line_no, "advice value outside [0,1]");
                    ev.advice.emplace_back(static_cast<OfflineId>(u), val);
                    sum += val;
                }
                std::sort(ev.advice.begin(), ev.advice.end());
                for (size_t i = 1; i < ev.advice.size(); ++i)
                    if (ev.advice[i].first == ev.advice[i - 1].first)
                        fail(line_no, "duplicate advice key");
                if (sum > 1.0 + kTol) fail(line_no, "advice sum exceeds 1");
            }
            g.arrivals.push_back(std::move(ev));
            ++expected_arrival;
        } else {
            fail(line_no, "unknown directive '" + kw + "'");
        }
    }
    if (g.weighted && !saw_weights)
        throw ParseError("weighted instance missing weights line");
    g.validate();
    return g;
}

std::string serialize_instance(const GraphInstance& g) {
    std::ostringstream out;
    out << "MATCHKIT v1\n";
    out << "offline " << g.n_offline << (g.weighted ? " weighted" : " unweighted")
        << "\n";
    if (g.weighted) {
        out << "weights";
        for (double w : g.weights) out << ' ' << format_double(w);
        out << "\n";
    }
    for (size_t t = 0; t < g.arrivals.size(); ++t) {
        const ArrivalEvent& ev = g.arrivals[t];
        out << "arrival " << t << ":";
        for (OfflineId u : ev.neighborhood) out << ' ' << u;
        if (!ev.advice.empty()) {
            out << " | a:";
            for (const auto& [u, val] : ev.advice)
                out << ' ' << u << '=' << format_double(val);
        }
        out << "\n";
    }
    return out.str();
}

GraphInstance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open instance file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_instance(ss.str());
}

void save_instance(const GraphInstance& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw RunError("cannot write instance file: " + path);
    out << serialize_instance(g);
}

ViolationReport validate_fractional_matching(const GraphInstance& g,
                                             const Allocation& alloc) {
    ViolationReport rep;
    auto add = [&](const std::string& s) {
        rep.ok = false;
        rep.violations.push_back(s);
    };
    if (alloc.x.size() != g.arrivals.size()) {
        add("allocation arrival count mismatch");
        return rep;
    }
    std::vector<double> levels(g.n_offline, 0.0);
    for (size_t t = 0; t < g.arrivals.size(); ++t) {
        const auto& nbrs = g.arrivals[t].neighborhood;
        if (alloc.x[t].size() != nbrs.size()) {
            add("arrival " + std::to_string(t) + ": allocation size mismatch");
            continue;
        }
        double s = 0.0;
        for (size_t i = 0; i < nbrs.size(); ++i) {
            double xv = alloc.x[t][i];
            if (xv < -kTol)
                add("arrival " + std::to_string(t) + ": negative allocation on " +
                    std::to_string(nbrs[i]));
            s += xv;
            levels[nbrs[i]] += xv;
        }
        if (s > 1.0 + kTol)
            add("arrival " + std::to_string(t) + ": online degree " +
                format_double(s) + " exceeds 1");
    }
    for (int u = 0; u < g.n_offline; ++u)
        if (levels[u] > 1.0 + kTol)
            add("offline vertex " + std::to_string(u) + ": level " +
                format_double(levels[u]) + " exceeds 1");
    return rep;
}

} // namespace matchkit
