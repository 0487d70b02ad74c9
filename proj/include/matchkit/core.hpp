#ifndef MATCHKIT_CORE_HPP
#define MATCHKIT_CORE_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace matchkit {

inline constexpr double kTol = 1e-9;

class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

class RunError : public std::runtime_error {
public:
    explicit RunError(const std::string& what) : std::runtime_error(what) {}
};

using OfflineId = int;

struct ArrivalEvent {
    std::vector<OfflineId> neighborhood;             // sorted ascending
    std::vector<std::pair<OfflineId, double>> advice; // keys subset of neighborhood, sorted

    bool has_neighbor(OfflineId u) const;
    double advice_sum() const;
};

struct GraphInstance {
    int n_offline = 0;
    bool weighted = false;
    std::vector<double> weights; // size n_offline; all 1.0 when unweighted
    std::vector<ArrivalEvent> arrivals;

    int n_online() const { return static_cast<int>(arrivals.size()); }
    void validate() const; // throws ParseError on invariant violation
    // Sum over arrivals of w_u * a_{u,v} (the ADVICE benchmark value).
    double advice_value() const;
    bool advice_integral() const;
};

struct Allocation {
    // x[t] aligned with arrivals[t].neighborhood.
    std::vector<std::vector<double>> x;
    std::vector<double> levels; // per-offline cumulative X_u

    static Allocation zeros(const GraphInstance& g);
};

struct DualCertificate {
    enum class Mode { LAB, PAW_ROBUST, PAW_CONSISTENT, ADWORDS };
    Mode mode = Mode::LAB;
    std::vector<double> alpha; // per offline
    std::vector<double> beta;  // per online
    // Optional per-arrival snapshot of alpha restricted to the arrival's
    // neighborhood (strict certificate mode); aligned with neighborhoods.
    std::vector<std::vector<double>> alpha_at_arrival;

    double total() const;
};

struct RunResult {
    double value = 0.0;
    Allocation allocation;
    std::optional<DualCertificate> certificate;
    std::optional<DualCertificate> certificate2; // PAW's g_c certificate
};

struct ViolationReport {
    bool ok = true;
    std::vector<std::string> violations;
};

GraphInstance parse_instance(const std::string& text);
std::string serialize_instance(const GraphInstance& g);
GraphInstance load_instance(const std::string& path);
void save_instance(const GraphInstance& g, const std::string& path);

ViolationReport validate_fractional_matching(const GraphInstance& g,
                                             const Allocation& x);

// Shortest round-trip-exact decimal rendering of a double.
std::string format_double(double v);

} // namespace matchkit

#endif
