#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "otcert/barrier.hpp"
#include "otcert/bounds.hpp"
#include "otcert/system.hpp"

namespace otcert {

using ordered_json = nlohmann::ordered_json;

/// Everything one run needs: the system, the certificate, and the sweep /
/// sampling parameters. output_path is supplied by the command line, not the
/// config file.
struct RunConfig {
    SystemSpec spec;
    BarrierCertificate certificate;
    std::vector<Horizon> horizons;
    std::vector<long> visit_counts;
    long long samples = 100000;
    std::uint64_t seed = 42;
    int depth = 40;
    double slack = 0.0;
    std::string output_path;
};

namespace detail {

inline const ordered_json& require_key(const ordered_json& j, const std::string& key,
                                       const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) {
        throw std::invalid_argument(where + ": missing key '" + key + "'");
    }
    return *it;
}

inline double require_number(const ordered_json& j, const std::string& where) {
    if (!j.is_number()) throw std::invalid_argument(where + ": expected a number");
    return j.get<double>();
}

inline std::vector<double> require_number_array(const ordered_json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) {
        throw std::invalid_argument(where + ": expected a nonempty array of numbers");
    }
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& e : j) out.push_back(require_number(e, where));
    return out;
}

inline IntervalSet parse_interval_set(const ordered_json& j, const std::string& where) {
    if (!j.is_array()) {
        throw std::invalid_argument(where + ": expected an array of [lo, hi] pairs");
    }
    std::vector<Interval> parts;
    for (const auto& e : j) {
        if (!e.is_array() || e.size() != 2) {
            throw std::invalid_argument(where + ": each interval must be a [lo, hi] pair");
        }
        parts.push_back(Interval{require_number(e[0], where), require_number(e[1], where)});
    }
    return IntervalSet(std::move(parts));
}

inline ordered_json interval_set_json(const IntervalSet& set) {
    ordered_json arr = ordered_json::array();
    for (const Interval& iv : set.intervals()) {
        arr.push_back(ordered_json::array({iv.lo, iv.hi}));
    }
    return arr;
}

inline BarrierKind parse_kind(const std::string& s) {
    if (s == "dissipative") return BarrierKind::dissipative;
    if (s == "attractive") return BarrierKind::attractive;
    if (s == "weighted_attractive") return BarrierKind::weighted_attractive;
    throw std::invalid_argument(
        "certificate.kind: expected one of dissipative, attractive, weighted_attractive, got '" +
        s + "'");
}

inline Horizon parse_horizon(const ordered_json& j, const std::string& where) {
    if (j.is_string()) {
        if (j.get<std::string>() == "inf") return Horizon::inf();
        throw std::invalid_argument(where + ": expected an integer or \"inf\"");
    }
    if (!j.is_number_integer() || j.get<long long>() < 0) {
        throw std::invalid_argument(where + ": expected a nonnegative integer or \"inf\"");
    }
    return Horizon::finite(j.get<long>());
}

}  // namespace detail

/// Builds a validated RunConfig from a parsed JSON tree. Every structural or
/// semantic problem throws std::invalid_argument naming the offending field.
inline RunConfig parse_config(const ordered_json& root) {
    if (!root.is_object()) throw std::invalid_argument("config: expected a JSON object");
    RunConfig cfg;

    const ordered_json& sys = detail::require_key(root, "system", "config");
    const ordered_json& modes_json = detail::require_key(sys, "modes", "system");
    if (!modes_json.is_array() || modes_json.empty()) {
        throw std::invalid_argument("system.modes: expected a nonempty array");
    }
    std::vector<DisturbanceMode> modes;
    for (std::size_t j = 0; j < modes_json.size(); ++j) {
        std::string where = "system.modes[" + std::to_string(j) + "]";
        const ordered_json& m = modes_json[j];
        modes.push_back(DisturbanceMode{
            Polynomial(detail::require_number_array(
                detail::require_key(m, "coefficients", where), where + ".coefficients")),
            detail::require_number(detail::require_key(m, "probability", where),
                                   where + ".probability")});
    }
    IntervalSet safe =
        detail::parse_interval_set(detail::require_key(sys, "safe", "system"), "system.safe");
    IntervalSet target =
        detail::parse_interval_set(detail::require_key(sys, "target", "system"), "system.target");
    IntervalSet augmented;  // optional; empty defaults to the reachable set
    if (auto it = sys.find("augmented"); it != sys.end()) {
        augmented = detail::parse_interval_set(*it, "system.augmented");
    }
    double x0 = detail::require_number(detail::require_key(sys, "x0", "system"), "system.x0");
    cfg.spec = make_system_spec(std::move(modes), std::move(safe), std::move(target),
                                std::move(augmented), x0);

    const ordered_json& cert = detail::require_key(root, "certificate", "config");
    const ordered_json& kind_json = detail::require_key(cert, "kind", "certificate");
    if (!kind_json.is_string()) throw std::invalid_argument("certificate.kind: expected a string");
    BarrierKind kind = detail::parse_kind(kind_json.get<std::string>());
    double alpha = detail::require_number(detail::require_key(cert, "alpha", "certificate"),
                                          "certificate.alpha");
    double beta = detail::require_number(detail::require_key(cert, "beta", "certificate"),
                                         "certificate.beta");
    std::vector<double> breakpoints = detail::require_number_array(
        detail::require_key(cert, "breakpoints", "certificate"), "certificate.breakpoints");
    const ordered_json& pieces_json = detail::require_key(cert, "pieces", "certificate");
    if (!pieces_json.is_array() || pieces_json.empty()) {
        throw std::invalid_argument("certificate.pieces: expected a nonempty array");
    }
    std::vector<Polynomial> pieces;
    for (std::size_t i = 0; i < pieces_json.size(); ++i) {
        pieces.push_back(Polynomial(detail::require_number_array(
            pieces_json[i], "certificate.pieces[" + std::to_string(i) + "]")));
    }
    cfg.certificate =
        make_barrier_certificate(make_piecewise_barrier(std::move(breakpoints), std::move(pieces)),
                                 kind, alpha, beta);
    require_barrier_covers(cfg.certificate.barrier, cfg.spec.augmented);

    const ordered_json& run = detail::require_key(root, "run", "config");
    const ordered_json& horizons_json = detail::require_key(run, "horizons", "run");
    if (!horizons_json.is_array() || horizons_json.empty()) {
        throw std::invalid_argument("run.horizons: expected a nonempty array");
    }
    for (const auto& h : horizons_json) cfg.horizons.push_back(detail::parse_horizon(h, "run.horizons"));
    const ordered_json& visits_json = detail::require_key(run, "visit_counts", "run");
    if (!visits_json.is_array() || visits_json.empty()) {
        throw std::invalid_argument("run.visit_counts: expected a nonempty array");
    }
    for (const auto& k : visits_json) {
        if (!k.is_number_integer() || k.get<long long>() < 1) {
            throw std::invalid_argument("run.visit_counts: each entry must be an integer >= 1");
        }
        cfg.visit_counts.push_back(k.get<long>());
    }
    const ordered_json& samples_json = detail::require_key(run, "samples", "run");
    if (!samples_json.is_number_integer() || samples_json.get<long long>() < 1) {
        throw std::invalid_argument("run.samples: expected an integer >= 1");
    }
    cfg.samples = samples_json.get<long long>();
    const ordered_json& seed_json = detail::require_key(run, "seed", "run");
    if (!seed_json.is_number_integer()) {
        throw std::invalid_argument("run.seed: expected an integer");
    }
    cfg.seed = seed_json.get<std::uint64_t>();
    const ordered_json& depth_json = detail::require_key(run, "depth", "run");
    if (!depth_json.is_number_integer() || depth_json.get<long long>() < 0) {
        throw std::invalid_argument("run.depth: expected an integer >= 0");
    }
    cfg.depth = depth_json.get<int>();
    const ordered_json& slack_json = detail::require_key(run, "slack", "run");
    double slack = detail::require_number(slack_json, "run.slack");
    if (slack < 0.0) throw std::invalid_argument("run.slack: must be >= 0");
    cfg.slack = slack;
    return cfg;
}

/// Inverse of parse_config: emits the fully resolved config (augmented set
/// included) with a fixed key order, so parse -> serialize is a fixed point
/// on serializer output.
inline ordered_json serialize_config(const RunConfig& cfg) {
    ordered_json root;
    ordered_json sys;
    ordered_json modes = ordered_json::array();
    for (const DisturbanceMode& m : cfg.spec.modes) {
        ordered_json mode;
        mode["coefficients"] = m.dynamics.coefficients();
        mode["probability"] = m.probability;
        modes.push_back(std::move(mode));
    }
    sys["modes"] = std::move(modes);
    sys["safe"] = detail::interval_set_json(cfg.spec.safe);
    sys["target"] = detail::interval_set_json(cfg.spec.target);
    sys["augmented"] = detail::interval_set_json(cfg.spec.augmented);
    sys["x0"] = cfg.spec.x0;
    root["system"] = std::move(sys);

    ordered_json cert;
    cert["kind"] = to_string(cfg.certificate.kind);
    cert["alpha"] = cfg.certificate.alpha;
    cert["beta"] = cfg.certificate.beta;
    cert["breakpoints"] = cfg.certificate.barrier.breakpoints;
    ordered_json pieces = ordered_json::array();
    for (const Polynomial& p : cfg.certificate.barrier.pieces) {
        pieces.push_back(p.coefficients());
    }
    cert["pieces"] = std::move(pieces);
    root["certificate"] = std::move(cert);

    ordered_json run;
    ordered_json horizons = ordered_json::array();
    for (const Horizon& h : cfg.horizons) {
        if (h.infinite) horizons.push_back("inf");
        else horizons.push_back(h.steps);
    }
    run["horizons"] = std::move(horizons);
    run["visit_counts"] = cfg.visit_counts;
    run["samples"] = cfg.samples;
    run["seed"] = cfg.seed;
    run["depth"] = cfg.depth;
    run["slack"] = cfg.slack;
    root["run"] = std::move(run);
    return root;
}

inline std::string config_to_string(const RunConfig& cfg) {
    return serialize_config(cfg).dump(2) + "\n";
}

/// Loads and validates a config file.
inline RunConfig parse_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open file '" + path + "'");
    ordered_json root;
    try {
        root = ordered_json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument("config: " + std::string(e.what()));
    }
    return parse_config(root);
}

}  // namespace otcert
