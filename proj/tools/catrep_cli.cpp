// catrep: figure datasets, Monte Carlo timing and oracle verification.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "catrep/errors.hpp"
#include "catrep/fock_oracle.hpp"
#include "catrep/herald.hpp"
#include "catrep/link_gen.hpp"
#include "catrep/photodetect.hpp"
#include "catrep/swap.hpp"
#include "catrep/teleport.hpp"
#include "catrep/timing.hpp"
#include "json.hpp"

using namespace catrep;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitVerify = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Defaults match the figure parameters.
struct RunConfig {
    std::string a = "0:3:31";
    std::string r_bs = "0.2";
    std::string eta = "0.95";
    std::string xi = "0.9";
    std::string eta_m = "0.8";
    std::string length = "10:60:11";  // node-to-relay distance L, km
    double kappa = 0.2;
    double velocity = 2.0e5;
    std::string parity = "both";
    std::string pair = "all";
    bool per_detector = false;

    // teleport
    std::string beta = "";  // fixed |beta|^2 for the comparison curves; empty = 0.04
    bool truth_table = false;
    double tele_amp = 0.25;
    double m = 1.0;

    // simulate
    double p1 = -1.0, p2 = -1.0;
    double length1 = 50.0, length2 = 50.0;
    std::uint64_t trials = 1000000;
    std::uint64_t seed = 1;
    unsigned workers = 0;

    // verify
    std::string quantity = "all";

    std::string format = "csv";
    std::string out;
    std::string output_dir;
    std::string config;
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::vector<double> parse_grid(const std::string& text, const std::string& name) {
    std::vector<double> out;
    auto num = [&](const std::string& s) {
        try {
            std::size_t pos = 0;
            const double v = std::stod(s, &pos);
            if (pos != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw UsageError("--" + name + ": cannot parse '" + s + "'");
        }
    };
    if (text.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(text);
        for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
        if (parts.size() != 3) throw UsageError("--" + name + ": range must be start:stop:count");
        const double lo = num(parts[0]), hi = num(parts[1]);
        const double cnt = num(parts[2]);
        if (cnt < 1 || cnt != std::floor(cnt)) throw UsageError("--" + name + ": count must be a positive integer");
        const int n = static_cast<int>(cnt);
        for (int i = 0; i < n; ++i) out.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
    } else {
        std::stringstream ss(text);
        for (std::string p; std::getline(ss, p, ',');) out.push_back(num(p));
    }
    if (out.empty()) throw UsageError("--" + name + ": empty grid");
    return out;
}

std::vector<ClickParity> parse_parities(const std::string& s) {
    if (s == "even") return {ClickParity::Even};
    if (s == "odd") return {ClickParity::Odd};
    if (s == "both") return {ClickParity::Even, ClickParity::Odd};
    throw UsageError("--parity must be even, odd or both");
}

struct NamedPair {
    std::string name;
    PairSymmetry pair;
};

std::vector<NamedPair> parse_pairs(const std::string& s) {
    const NamedPair oo{"odd-odd", PairSymmetry::both_odd()};
    const NamedPair ee{"even-even", PairSymmetry::both_even()};
    const NamedPair cr{"cross", PairSymmetry::cross()};
    if (s == "all") return {oo, ee, cr};
    if (s == "odd-odd") return {oo};
    if (s == "even-even") return {ee};
    if (s == "cross") return {cr};
    throw UsageError("--pair must be odd-odd, even-even, cross or all");
}

const char* parity_name(ClickParity p) {
    return p == ClickParity::Even ? "even" : p == ClickParity::Odd ? "odd" : "none";
}

struct Table {
    std::string command;
    std::vector<std::pair<std::string, std::string>> params;
    std::vector<std::string> notes;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

std::string render(const Table& t, const std::string& format) {
    std::ostringstream os;
    if (format == "json") {
        json j;
        j["command"] = t.command;
        json params = json::object();
        for (const auto& [k, v] : t.params) params[k] = v;
        j["parameters"] = params;
        j["defaults"] = {{"r_bs", 0.2}, {"xi", 0.9}, {"eta", 0.95}, {"kappa_db_per_km", 0.2}};
        j["notes"] = t.notes;
        j["columns"] = t.columns;
        json rows = json::array();
        for (const auto& r : t.rows) {
            json row = json::object();
            for (std::size_t i = 0; i < r.size(); ++i) {
                const std::string& cell = r[i];
                char* end = nullptr;
                const double v = std::strtod(cell.c_str(), &end);
                if (end && *end == '\0' && !cell.empty())
                    row[t.columns[i]] = v;
                else
                    row[t.columns[i]] = cell;
            }
            rows.push_back(row);
        }
        j["rows"] = rows;
        os << j.dump(2) << "\n";
        return os.str();
    }
    os << "# catrep " << t.command << "\n";
    os << "# defaults: r_bs=0.2 xi=0.9 eta=0.95 kappa_db_per_km=0.2\n";
    for (const auto& [k, v] : t.params) os << "# " << k << "=" << v << "\n";
    for (const auto& n : t.notes) os << "# " << n << "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << "\n";
    for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
        os << "\n";
    }
    return os.str();
}

void emit(const std::string& text, const RunConfig& cfg, const std::string& stem) {
    std::string path = cfg.out;
    if (path.empty() && !cfg.output_dir.empty())
        path = (std::filesystem::path(cfg.output_dir) / (stem + (cfg.format == "json" ? ".json" : ".csv"))).string();
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
}

void check_unit_grid(const std::vector<double>& g, const std::string& name) {
    for (double v : g)
        if (!(v >= 0.0 && v <= 1.0)) throw UsageError("--" + name + " values must lie in [0, 1]");
}

void check_nonneg_grid(const std::vector<double>& g, const std::string& name) {
    for (double v : g)
        if (!(v >= 0.0) || !std::isfinite(v)) throw UsageError("--" + name + " values must be finite and >= 0");
}

Table fig_link_probs(const RunConfig& cfg) {
    const auto as = parse_grid(cfg.a, "a");
    const auto rs = parse_grid(cfg.r_bs, "r-bs");
    check_nonneg_grid(as, "a");
    check_unit_grid(rs, "r-bs");
    Table t{"fig link-probs", {{"a", cfg.a}, {"r_bs", cfg.r_bs}, {"pair", cfg.pair}},
            {"p_plus and p_minus are per output arm; 2 p_plus + 2 p_minus + p_vac = 1"},
            {"pair", "r_bs [-]", "a [photons]", "p_plus [prob]", "p_minus [prob]", "p_vac [prob]"}, {}};
    for (const auto& np : parse_pairs(cfg.pair))
        for (double r : rs)
            for (double a : as) {
                const OutcomeProbs p = outcome_probs(np.pair, r, a);
                t.rows.push_back({np.name, fmt(r), fmt(a), fmt(p.p_plus), fmt(p.p_minus), fmt(p.p_vac)});
            }
    return t;
}

Table fig_click_probs(const RunConfig& cfg) {
    const auto as = parse_grid(cfg.a, "a");
    const auto rs = parse_grid(cfg.r_bs, "r-bs");
    const auto etas = parse_grid(cfg.eta, "eta");
    const auto xis = parse_grid(cfg.xi, "xi");
    check_nonneg_grid(as, "a");
    check_unit_grid(rs, "r-bs");
    check_unit_grid(etas, "eta");
    check_unit_grid(xis, "xi");
    Table t{"fig click-probs",
            {{"a", cfg.a}, {"r_bs", cfg.r_bs}, {"eta", cfg.eta}, {"xi", cfg.xi}},
            {"relay cat mean photon number before loss is 2 r_bs a"},
            {"relay_state", "r_bs [-]", "eta [-]", "xi [-]", "a [photons]", "p_no_click [prob]", "p_even [prob]",
             "p_odd [prob]"},
            {}};
    for (RelayState st : {RelayState::PlusCat, RelayState::MinusCat})
        for (double r : rs)
            for (double eta : etas)
                for (double xi : xis)
                    for (double a : as) {
                        const double n = 2.0 * r * a;
                        std::vector<std::string> row{st == RelayState::PlusCat ? "plus" : "minus", fmt(r), fmt(eta),
                                                     fmt(xi), fmt(a)};
                        for (ClickParity p : {ClickParity::NoClick, ClickParity::Even, ClickParity::Odd}) {
                            if (n == 0.0) {
                                row.push_back("nan");
                                continue;
                            }
                            row.push_back(fmt(parity_prob(p, st, n, ChannelParams{eta}, DetectorParams{xi})));
                        }
                        t.rows.push_back(row);
                    }
    return t;
}

Table fig_success_or_fidelity(const RunConfig& cfg, bool fidelity) {
    const auto as = parse_grid(cfg.a, "a");
    const auto rs = parse_grid(cfg.r_bs, "r-bs");
    const auto etas = parse_grid(cfg.eta, "eta");
    const auto xis = parse_grid(cfg.xi, "xi");
    check_nonneg_grid(as, "a");
    check_unit_grid(rs, "r-bs");
    check_unit_grid(etas, "eta");
    check_unit_grid(xis, "xi");
    const ReportOptions ro{!cfg.per_detector};
    Table t;
    t.command = fidelity ? "fig fidelity" : "fig success";
    t.params = {{"a", cfg.a}, {"r_bs", cfg.r_bs}, {"eta", cfg.eta}, {"xi", cfg.xi}, {"parity", cfg.parity},
                {"pair", cfg.pair}};
    if (!fidelity)
        t.params.push_back({"both_detectors", ro.both_detectors ? "true" : "false"});
    t.notes.push_back("zeta = xi eta r_bs");
    if (fidelity)
        t.columns = {"pair", "parity", "r_bs [-]", "eta [-]", "xi [-]", "zeta [-]", "a [photons]", "f_plus [-]",
                     "f_minus [-]"};
    else
        t.columns = {"pair", "parity", "r_bs [-]", "eta [-]", "xi [-]", "zeta [-]", "a [photons]",
                     "p_success [prob]"};
    for (const auto& np : parse_pairs(cfg.pair))
        for (ClickParity parity : parse_parities(cfg.parity))
            for (double r : rs)
                for (double eta : etas)
                    for (double xi : xis)
                        for (double a : as) {
                            const LinkConfig lc{a, r, eta, xi};
                            std::vector<std::string> row{np.name, parity_name(parity), fmt(r), fmt(eta), fmt(xi),
                                                         fmt(lc.zeta()), fmt(a)};
                            if (fidelity) {
                                try {
                                    const auto [fp, fm] = heralded_fidelity(np.pair, parity, lc);
                                    row.push_back(fmt(fp));
                                    row.push_back(fmt(fm));
                                } catch (const DegenerateInput&) {
                                    row.push_back("nan");
                                    row.push_back("nan");
                                }
                            } else {
                                row.push_back(fmt(reported_success(success_prob(np.pair, parity, lc), ro)));
                            }
                            t.rows.push_back(row);
                        }
    return t;
}

Table fig_timing(const RunConfig& cfg, const std::string& command) {
    const auto ls = parse_grid(cfg.length, "L");
    check_nonneg_grid(ls, "L");
    const auto as = parse_grid(cfg.a, "a");
    const auto rs = parse_grid(cfg.r_bs, "r-bs");
    const auto xis = parse_grid(cfg.xi, "xi");
    if (as.size() != 1 || rs.size() != 1 || xis.size() != 1)
        throw UsageError("timing takes a single value for --a, --r-bs and --xi");
    if (!(cfg.kappa >= 0.0)) throw UsageError("--kappa must be >= 0");
    if (!(cfg.velocity > 0.0)) throw UsageError("--v must be > 0");
    const auto pairs = parse_pairs(cfg.pair == "all" ? "odd-odd" : cfg.pair);
    const auto parities = parse_parities(cfg.parity == "both" ? "odd" : cfg.parity);
    const LinkConfig tmpl{as[0], rs[0], 1.0, xis[0]};
    check_unit_grid(rs, "r-bs");
    check_unit_grid(xis, "xi");

    Table t{command,
            {{"L", cfg.length}, {"kappa_db_per_km", fmt(cfg.kappa)}, {"a", cfg.a}, {"r_bs", cfg.r_bs}, {"xi", cfg.xi},
             {"v_km_per_s", fmt(cfg.velocity)}, {"pair", pairs[0].name}, {"parity", parity_name(parities[0])}},
            {"L is the node-to-relay distance; the elementary link spans 2L",
             "p_link = 2 P_s (both relay detectors); both links share the same length",
             "t_wait_c uses v = 3e5 km/s"},
            {"L [km]", "eta [-]", "p_link [prob]", "n_w [attempts]", "n_t [attempts]", "n_max [attempts]",
             "n_min [attempts]", "T [s]", "t_prep [s]", "t_wait [s]", "t_wait_c [s]"},
            {}};
    for (double l : ls) {
        FiberModel fiber{cfg.kappa, l, cfg.velocity};
        const double p = link_success_from_distance(tmpl, fiber, pairs[0].pair, parities[0]);
        if (!(p > 0.0)) {
            t.rows.push_back({fmt(l), fmt(transmittance(l, cfg.kappa)), fmt(p), "inf", "inf", "inf", "inf",
                              fmt(fiber.attempt_period()), "inf", "inf", "inf"});
            continue;
        }
        const AttemptModel model{p, p};
        const TimingStats s = attempt_stats(model, fiber);
        FiberModel light{cfg.kappa, l, 3.0e5};
        const TimingStats sc = attempt_stats(model, light);
        t.rows.push_back({fmt(l), fmt(transmittance(l, cfg.kappa)), fmt(p), fmt(s.n_w), fmt(s.n_t), fmt(s.n_max),
                          fmt(s.n_min), fmt(fiber.attempt_period()), fmt(s.t_prep), fmt(s.t_wait), fmt(sc.t_wait)});
    }
    return t;
}

Table fig_teleport(const RunConfig& cfg) {
    if (cfg.truth_table) {
        TeleportConfig tmpl;
        tmpl.alpha_mag = cfg.tele_amp;
        tmpl.m = cfg.m;
        Table t{"fig teleport --truth-table",
                {{"alpha_mag", fmt(cfg.tele_amp)}, {"m", fmt(cfg.m)}, {"nu", "+"}, {"phi_a", "0"}},
                {"Bob's heralded state classified by the closest of |alpha>, |-alpha>, |i alpha>, |-i alpha>"},
                {"phase_offset [rad]", "detector", "sideband", "state", "fidelity [-]"},
                {}};
        for (const auto& e : truth_table(tmpl))
            t.rows.push_back({fmt(e.phase_offset), e.detector == Detector::D1 ? "D1" : "D2", std::to_string(e.mu),
                              to_string(e.label), fmt(e.fidelity)});
        return t;
    }
    const auto as = parse_grid(cfg.a, "a");
    check_nonneg_grid(as, "a");
    const double beta2 = cfg.beta.empty() ? 0.04 : std::stod(cfg.beta);
    if (!(beta2 >= 0.0)) throw UsageError("--beta must be >= 0");
    constexpr double half_pi = 0.5 * std::numbers::pi;
    Table t{"fig teleport",
            {{"a", cfg.a}, {"beta2", fmt(beta2)}},
            {"a = |alpha|^2 = |gamma|^2; equal: |beta| = |alpha|; fixed: |beta|^2 = beta2",
             "phase fidelity at phi = psi = -pi/2 (exact and second-order series)"},
            {"a [photons]", "p_tlp_plus_equal [prob]", "p_tlp_minus_equal [prob]", "p_tlp_plus_fixed [prob]",
             "p_tlp_minus_fixed [prob]", "phase_fidelity [-]", "phase_fidelity_series [-]"},
            {}};
    for (double a : as) {
        std::vector<std::string> row{fmt(a)};
        for (double b2 : {a, beta2})
            for (CatSymmetry nu : {CatSymmetry::Even, CatSymmetry::Odd}) {
                try {
                    row.push_back(fmt(teleport_p_total(a, a, b2, nu)));
                } catch (const DegenerateInput&) {
                    row.push_back("nan");
                }
            }
        row.push_back(fmt(phase_fidelity(-half_pi, -half_pi, a)));
        row.push_back(fmt(phase_fidelity_series(-half_pi, -half_pi, a)));
        t.rows.push_back(row);
    }
    return t;
}

Table simulate(const RunConfig& cfg) {
    const auto as = parse_grid(cfg.a, "a");
    const auto rs = parse_grid(cfg.r_bs, "r-bs");
    const auto xis = parse_grid(cfg.xi, "xi");
    if (as.size() != 1 || rs.size() != 1 || xis.size() != 1)
        throw UsageError("simulate takes a single value for --a, --r-bs and --xi");
    const LinkConfig tmpl{as[0], rs[0], 1.0, xis[0]};
    const double p1 = cfg.p1 > 0.0 ? cfg.p1
                                   : link_success_from_distance(tmpl, {cfg.kappa, cfg.length1, cfg.velocity},
                                                                PairSymmetry::both_odd(), ClickParity::Odd);
    const double p2 = cfg.p2 > 0.0 ? cfg.p2
                                   : link_success_from_distance(tmpl, {cfg.kappa, cfg.length2, cfg.velocity},
                                                                PairSymmetry::both_odd(), ClickParity::Odd);
    if (cfg.trials == 0) throw UsageError("--trials must be >= 1");
    const AttemptModel model{p1, p2};
    FiberModel fiber{cfg.kappa, 0.5 * (cfg.length1 + cfg.length2), cfg.velocity};
    const TimingStats an = attempt_stats(model, fiber);
    const SimulatedStats mc = simulate_attempts(model, cfg.trials, cfg.seed, fiber, cfg.workers);

    Table t{"simulate",
            {{"p1", fmt(p1)}, {"p2", fmt(p2)}, {"trials", std::to_string(cfg.trials)}, {"seed", std::to_string(cfg.seed)}},
            {"results do not depend on the worker count"},
            {"quantity", "analytic [attempts]", "empirical [attempts]", "std_error [attempts]", "z [-]"},
            {}};
    auto row = [&](const char* name, double a, double e, double se) {
        t.rows.push_back({name, fmt(a), fmt(e), fmt(se), fmt(se > 0.0 ? (e - a) / se : 0.0)});
    };
    row("n_w", an.n_w, mc.mean.n_w, mc.se_w);
    row("n_t", an.n_t, mc.mean.n_t, mc.se_t);
    row("n_max", an.n_max, mc.mean.n_max, mc.se_max);
    row("n_min", an.n_min, mc.mean.n_min, mc.se_min);
    return t;
}

// The default oracle suite: every quantity on a small grid.
std::vector<fock::OracleReport> run_verify(const RunConfig& cfg) {
    using fock::Quantity;
    std::vector<Quantity> qs;
    if (cfg.quantity == "all")
        qs = {Quantity::LinkProbs, Quantity::ParityProbs, Quantity::Herald, Quantity::Swap,
              Quantity::TeleportProb, Quantity::TeleportState, Quantity::EnvTrace};
    else
        qs = {fock::parse_quantity(cfg.quantity)};

    std::vector<fock::OracleReport> all;
    for (Quantity q : qs) {
        fock::OracleParams p;
        const std::vector<double> amps = q == Quantity::Swap ? std::vector<double>{0.25, 0.625} : std::vector<double>{0.5, 2.0};
        for (double a : amps) {
            for (const auto& np : parse_pairs("all")) {
                p.pair = np.pair;
                p.link.a = a;
                p.relay = np.pair.same() ? CatSymmetry::Odd : CatSymmetry::Even;
                if (q == Quantity::TeleportProb || q == Quantity::TeleportState) {
                    const double amp = q == Quantity::TeleportState ? 0.3 : std::sqrt(a);
                    p.tele = TeleportConfig{amp, amp, amp, 0.5 * std::numbers::pi, 0.0,
                                            np.pair.alice, 0.5, 1, Detector::D1};
                }
                const auto r = fock::verify(q, p);
                all.insert(all.end(), r.begin(), r.end());
            }
        }
    }
    return all;
}

void apply_config_file(const std::string& path, CLI::App* sub) {
    std::ifstream f(path);
    if (!f) throw UsageError("cannot read config file " + path);
    json j;
    try {
        j = json::parse(f);
    } catch (const std::exception& e) {
        throw UsageError(std::string("invalid config JSON: ") + e.what());
    }
    if (!j.is_object()) throw UsageError("config file must hold a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        std::string flag = it.key();
        for (auto& c : flag)
            if (c == '_') c = '-';
        CLI::Option* opt = sub->get_option_no_throw("--" + flag);
        if (!opt) throw UsageError("config key not accepted by this command: " + it.key());
        if (opt->count() > 0) continue;  // command line wins
        const json& v = it.value();
        std::string text;
        if (v.is_string())
            text = v.get<std::string>();
        else if (v.is_boolean())
            text = v.get<bool>() ? "true" : "false";
        else
            text = v.dump();
        opt->clear();
        opt->add_result(text);
        opt->run_callback();
    }
}

void add_common(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", cfg.out, "Output file ('-' for stdout)");
    sub->add_option("--output-dir", cfg.output_dir, "Output directory (default $CATREP_OUTPUT_DIR)");
    sub->add_option("--config", cfg.config, "JSON file with option values; command-line flags take precedence");
}

void add_link_grid(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--a", cfg.a, "Mean photon number |alpha|^2: value, list a,b,c or start:stop:count");
    sub->add_option("--r-bs", cfg.r_bs, "Photon-number ratio sent to the relay");
}

void add_loss_grid(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--eta", cfg.eta, "Channel transmittance");
    sub->add_option("--xi", cfg.xi, "Detector efficiency");
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    if (const char* dir = std::getenv("CATREP_OUTPUT_DIR")) cfg.output_dir = dir;

    CLI::App app{"Cat-state repeater link models: figure datasets, timing, oracle verification"};
    app.require_subcommand(1);

    auto* fig = app.add_subcommand("fig", "Emit a figure dataset");
    fig->require_subcommand(1);

    auto* link = fig->add_subcommand("link-probs", "Relay outcome probabilities");
    add_link_grid(link, cfg);
    link->add_option("--pair", cfg.pair, "odd-odd, even-even, cross or all");
    add_common(link, cfg);

    auto* click = fig->add_subcommand("click-probs", "Parity click probabilities of the relay cats");
    add_link_grid(click, cfg);
    add_loss_grid(click, cfg);
    add_common(click, cfg);

    auto* success = fig->add_subcommand("success", "Heralding success probabilities");
    auto* fidelity = fig->add_subcommand("fidelity", "Heralded-state fidelities");
    for (auto* s : {success, fidelity}) {
        add_link_grid(s, cfg);
        add_loss_grid(s, cfg);
        s->add_option("--parity", cfg.parity, "even, odd or both");
        s->add_option("--pair", cfg.pair, "odd-odd, even-even, cross or all");
        add_common(s, cfg);
    }
    success->add_flag("--per-detector", cfg.per_detector, "Report one detector instead of both");

    auto* fig_time = fig->add_subcommand("timing", "Attempt counts and waiting times versus distance");
    auto* timing_cmd = app.add_subcommand("timing", "Same as 'fig timing'");
    for (auto* s : {fig_time, timing_cmd}) {
        s->add_option("--L", cfg.length, "Node-to-relay distance grid, km");
        s->add_option("--kappa", cfg.kappa, "Fiber attenuation, dB/km");
        s->add_option("--v", cfg.velocity, "Signal velocity, km/s");
        s->add_option("--a", cfg.a, "Mean photon number |alpha|^2");
        s->add_option("--r-bs", cfg.r_bs, "Photon-number ratio sent to the relay");
        s->add_option("--xi", cfg.xi, "Detector efficiency");
        s->add_option("--parity", cfg.parity, "Heralding parity (default odd)");
        s->add_option("--pair", cfg.pair, "Input pairing (default odd-odd)");
        add_common(s, cfg);
    }

    auto* tele = fig->add_subcommand("teleport", "Teleportation success probabilities and truth table");
    tele->add_option("--a", cfg.a, "|alpha|^2 grid");
    tele->add_option("--beta", cfg.beta, "Fixed |beta|^2 for the comparison curves (default 0.04)");
    tele->add_flag("--truth-table", cfg.truth_table, "Emit the 16-entry heralded-state table instead");
    tele->add_option("--alpha-mag", cfg.tele_amp, "|alpha| used by the truth table");
    tele->add_option("--m", cfg.m, "Modulation index used by the truth table");
    add_common(tele, cfg);

    auto* sim = app.add_subcommand("simulate", "Monte Carlo attempt counts for two links");
    sim->add_option("--p1", cfg.p1, "Link 1 success probability per attempt (overrides --L1)");
    sim->add_option("--p2", cfg.p2, "Link 2 success probability per attempt (overrides --L2)");
    sim->add_option("--L1", cfg.length1, "Link 1 node-to-relay distance, km");
    sim->add_option("--L2", cfg.length2, "Link 2 node-to-relay distance, km");
    sim->add_option("--kappa", cfg.kappa, "Fiber attenuation, dB/km");
    sim->add_option("--v", cfg.velocity, "Signal velocity, km/s");
    sim->add_option("--a", cfg.a, "Mean photon number |alpha|^2")->default_str("0.01");
    sim->add_option("--r-bs", cfg.r_bs, "Photon-number ratio sent to the relay");
    sim->add_option("--xi", cfg.xi, "Detector efficiency");
    sim->add_option("--trials", cfg.trials, "Number of trials");
    sim->add_option("--seed", cfg.seed, "Generator seed");
    sim->add_option("--workers", cfg.workers, "Worker threads (0 = hardware concurrency)");
    add_common(sim, cfg);

    auto* ver = app.add_subcommand("verify", "Compare analytic results with the number-basis oracle");
    ver->add_option("--quantity", cfg.quantity,
                    "all, link_probs, parity_probs, herald, swap, teleport_prob, teleport_state, env_trace");
    ver->add_option("--out", cfg.out, "Output file ('-' for stdout)");
    ver->add_option("--output-dir", cfg.output_dir, "Output directory (default $CATREP_OUTPUT_DIR)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        CLI::App* leaf = nullptr;
        for (CLI::App* s : {link, click, success, fidelity, fig_time, timing_cmd, tele, sim, ver})
            if (s->parsed()) leaf = s;
        if (!cfg.config.empty()) apply_config_file(cfg.config, leaf);

        if (leaf == ver) {
            const auto reports = run_verify(cfg);
            cfg.format = "json";
            emit(fock::to_json(reports) + "\n", cfg, "verify");
            bool ok = true;
            for (const auto& r : reports) ok = ok && r.passed;
            if (!ok) {
                std::cerr << "verification failed\n";
                return kExitVerify;
            }
            return 0;
        }
        if (leaf == sim && !sim->get_option("--a")->count() && cfg.config.empty()) cfg.a = "0.01";
        if ((leaf == fig_time || leaf == timing_cmd) && !leaf->get_option("--a")->count() && cfg.config.empty())
            cfg.a = "0.01";

        Table t;
        std::string stem;
        if (leaf == link) t = fig_link_probs(cfg), stem = "link_probs";
        else if (leaf == click) t = fig_click_probs(cfg), stem = "click_probs";
        else if (leaf == success) t = fig_success_or_fidelity(cfg, false), stem = "success";
        else if (leaf == fidelity) t = fig_success_or_fidelity(cfg, true), stem = "fidelity";
        else if (leaf == fig_time) t = fig_timing(cfg, "fig timing"), stem = "timing";
        else if (leaf == timing_cmd) t = fig_timing(cfg, "timing"), stem = "timing";
        else if (leaf == tele) t = fig_teleport(cfg), stem = cfg.truth_table ? "teleport_table" : "teleport";
        else if (leaf == sim) t = simulate(cfg), stem = "simulate";
        emit(render(t, cfg.format), cfg, stem);
        return 0;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
