#pragma once

// Experiment drivers behind the command-line tool. Each cmd_* takes a resolved
// RunConfig, returns its tables and a JSON summary, and writes them under the
// configured output directory (nothing is written when that is empty).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qnnlab/bounds.hpp"
#include "qnnlab/circuit.hpp"
#include "qnnlab/errors.hpp"
#include "qnnlab/finance.hpp"
#include "qnnlab/hardware.hpp"
#include "qnnlab/noise.hpp"
#include "qnnlab/optim.hpp"
#include "qnnlab/rng.hpp"
#include "qnnlab/sampler.hpp"
#include "qnnlab/train.hpp"
#include "qnnlab/ucr.hpp"

namespace qnnlab::experiments {

using json = nlohmann::json;
using circuit::CircuitConfig;
using circuit::QnnParams;

inline constexpr const char* tool_version = "0.3.0";

// ---------------------------------------------------------------- config

inline json default_config() {
    return json::parse(R"({
  "seed": 20240601,
  "shots": 8192,
  "threads": 1,
  "out": "",
  "train": {
    "method": "A",
    "iterations": 500,
    "generations": 300,
    "learning_rate": 0.02,
    "population_factor": 15,
    "mutation": 0.7,
    "crossover": 0.9,
    "polish": true,
    "signal": "analytic",
    "freq_box": 10.0,
    "phase_box": 3.141592653589793,
    "angle_box": 3.141592653589793
  },
  "bounds": {
    "families": ["gaussian", "bachelier", "bs-truncated", "levy"],
    "sweep": false,
    "sweep_points": 61,
    "sweep_range": [0.01, 100.0]
  },
  "gaussian": {
    "sigma": 1.0,
    "blocks": [1, 2, 4, 8, 12, 16],
    "points": 100,
    "domain": [-4.0, 4.0],
    "method": "DE",
    "restarts": 1,
    "table_sigmas": [0.5, 1.0, 2.0],
    "table_blocks": 8
  },
  "bs": {
    "blocks": 8,
    "train_points": 1024,
    "grid": 40,
    "spot": 100.0,
    "rate": 0.03,
    "maturity": 1.0,
    "strike_range": [85.0, 115.0],
    "vol_range": [0.05, 0.35],
    "histogram_bins": 20,
    "test_points": 64,
    "methods": ["A", "B"],
    "scaling_blocks": [2, 4, 6, 8]
  },
  "noise": {
    "eps": [0.0, 0.001, 0.005, 0.01, 0.02],
    "test_points": 20,
    "check_tol": 1e-10
  },
  "hardware": {
    "presets": ["ibm-fez", "quantinuum-h2", "rigetti-cepheus", "noiseless"],
    "blocks": [8],
    "corner": "pessimistic",
    "test_points": 10,
    "profile": ""
  },
  "validate": {
    "ucr_tol": 1e-9,
    "exact_tol": 1e-10,
    "shot_configs": 100,
    "shot_sigmas": 3.0,
    "shot_fraction": 0.95
  }
})");
}

namespace detail {

inline std::string kind(const json& v) {
    if (v.is_number()) return "number";
    if (v.is_boolean()) return "boolean";
    if (v.is_string()) return "string";
    if (v.is_array()) return "array";
    if (v.is_object()) return "object";
    return "null";
}

// Every key must exist in the defaults and carry the same JSON kind.
inline void check_schema(const json& value, const json& schema, const std::string& path) {
    if (kind(value) != kind(schema)) {
        throw usage_error("config: " + (path.empty() ? "/" : path) + " must be " + kind(schema) + ", got " + kind(value));
    }
    if (schema.is_object()) {
        for (auto it = value.begin(); it != value.end(); ++it) {
            if (!schema.contains(it.key())) throw usage_error("config: unknown field " + path + "/" + it.key());
            check_schema(it.value(), schema.at(it.key()), path + "/" + it.key());
        }
    } else if (schema.is_array() && !schema.empty()) {
        for (std::size_t i = 0; i < value.size(); ++i)
            check_schema(value[i], schema.front(), path + "/" + std::to_string(i));
    }
}

}  // namespace detail

class RunConfig {
public:
    RunConfig() : doc_(default_config()) {}

    /// Merges a (partial) document over the current values.
    void merge(const json& patch) {
        detail::check_schema(patch, default_config(), "");
        doc_.merge_patch(patch);
        validate();
    }

    void merge_file(const std::filesystem::path& path) {
        std::ifstream in(path);
        if (!in) throw usage_error("config: cannot open " + path.string());
        json j;
        try {
            j = json::parse(in);
        } catch (const json::parse_error& e) {
            throw usage_error("config: " + path.string() + ": " + e.what());
        }
        merge(j);
    }

    /// Sets one field from a JSON pointer and a textual value (parsed as JSON
    /// when possible, otherwise taken as a string).
    void set(const std::string& pointer, const std::string& text) {
        json v;
        try {
            v = json::parse(text);
        } catch (const json::parse_error&) {
            v = text;
        }
        set(pointer, v);
    }

    void set(const std::string& pointer, const json& v) {
        json patch;
        try {
            patch[json::json_pointer(pointer)] = v;
        } catch (const json::exception& e) {
            throw usage_error("config: bad field path '" + pointer + "': " + e.what());
        }
        merge(patch);
    }

    template <class T>
    T get(const std::string& pointer) const {
        return doc_.at(json::json_pointer(pointer)).get<T>();
    }

    const json& doc() const { return doc_; }

    void validate() const {
        auto positive = [&](const char* p) {
            if (!(get<double>(p) > 0)) throw usage_error(std::string("config: ") + p + " must be > 0");
        };
        positive("/shots");
        positive("/threads");
        positive("/gaussian/sigma");
        positive("/gaussian/points");
        positive("/bs/blocks");
        positive("/bs/train_points");
        positive("/bs/grid");
        positive("/bs/test_points");
        positive("/bs/histogram_bins");
        positive("/noise/test_points");
        positive("/hardware/test_points");
        positive("/validate/shot_configs");
        train::parse_method(get<std::string>("/train/method"));
        train::parse_method(get<std::string>("/gaussian/method"));
        for (const auto& m : doc_.at("bs").at("methods")) train::parse_method(m.get<std::string>());
        parse_signal(get<std::string>("/train/signal"));
        parse_corner(get<std::string>("/hardware/corner"));
        const auto dom = get<std::vector<double>>("/gaussian/domain");
        if (dom.size() != 2 || !(dom[1] > dom[0])) throw usage_error("config: /gaussian/domain must be [lo, hi]");
        for (const char* p : {"/bs/strike_range", "/bs/vol_range", "/bounds/sweep_range"}) {
            const auto r = get<std::vector<double>>(p);
            if (r.size() != 2 || !(r[1] > r[0]) || !(r[0] > 0)) throw usage_error(std::string("config: ") + p + " must be [lo, hi] with 0 < lo < hi");
        }
        for (const char* p : {"/gaussian/blocks", "/bs/scaling_blocks", "/hardware/blocks"}) {
            for (int n : get<std::vector<int>>(p))
                if (n < 1) throw usage_error(std::string("config: ") + p + " entries must be >= 1");
        }
        for (double e : get<std::vector<double>>("/noise/eps"))
            if (!(e >= 0.0 && e < 1.0)) throw usage_error("config: /noise/eps entries must be in [0, 1)");
        for (const auto& b : doc_.at("bounds").at("families")) {
            const auto f = b.get<std::string>();
            if (f != "gaussian" && f != "bachelier" && f != "bs-truncated" && f != "levy")
                throw usage_error("config: unknown bound family '" + f + "'");
        }
    }

    static train::Signal parse_signal(const std::string& s) {
        if (s == "analytic") return train::Signal::analytic;
        if (s == "exact") return train::Signal::exact;
        if (s == "shots") return train::Signal::shots;
        throw usage_error("config: /train/signal must be analytic, exact or shots");
    }

    static hardware::Corner parse_corner(const std::string& s) {
        if (s == "pessimistic") return hardware::Corner::pessimistic;
        if (s == "optimistic") return hardware::Corner::optimistic;
        throw usage_error("config: /hardware/corner must be pessimistic or optimistic");
    }

    std::uint64_t seed() const { return get<std::uint64_t>("/seed"); }
    std::uint64_t shots() const { return get<std::uint64_t>("/shots"); }
    unsigned threads() const { return get<unsigned>("/threads"); }
    std::string out() const { return get<std::string>("/out"); }

    train::Budget budget() const {
        train::Budget b;
        b.iterations = get<std::size_t>("/train/iterations");
        b.generations = get<std::size_t>("/train/generations");
        b.learning_rate = get<double>("/train/learning_rate");
        b.population_factor = get<std::size_t>("/train/population_factor");
        b.mutation = get<double>("/train/mutation");
        b.crossover = get<double>("/train/crossover");
        b.polish = get<bool>("/train/polish");
        b.threads = threads();
        b.signal = parse_signal(get<std::string>("/train/signal"));
        b.shots = shots();
        return b;
    }

    train::Boxes boxes() const {
        return {get<double>("/train/freq_box"), get<double>("/train/phase_box"), get<double>("/train/angle_box")};
    }

private:
    json doc_;
};

// ---------------------------------------------------------------- tables

inline std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class Table {
public:
    Table() = default;
    explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    template <class... Cells>
    void add(const Cells&... cells) {
        std::vector<std::string> r;
        r.reserve(sizeof...(cells));
        (r.push_back(to_cell(cells)), ...);
        if (r.size() != columns_.size()) throw usage_error("Table: row width does not match header");
        rows_.push_back(std::move(r));
    }

    const std::vector<std::string>& columns() const { return columns_; }
    const std::vector<std::vector<std::string>>& rows() const { return rows_; }
    std::size_t size() const { return rows_.size(); }

    std::size_t column(const std::string& name) const {
        const auto it = std::find(columns_.begin(), columns_.end(), name);
        if (it == columns_.end()) throw usage_error("Table: no column '" + name + "'");
        return static_cast<std::size_t>(it - columns_.begin());
    }

    double number(std::size_t row, const std::string& name) const { return std::stod(rows_.at(row).at(column(name))); }
    const std::string& text(std::size_t row, const std::string& name) const { return rows_.at(row).at(column(name)); }

    void write(std::ostream& os, const std::string& comment = {}) const {
        if (!comment.empty()) os << "# " << comment << '\n';
        write_row(os, columns_);
        for (const auto& r : rows_) write_row(os, r);
    }

private:
    static std::string to_cell(double v) { return format_number(v); }
    static std::string to_cell(float v) { return format_number(v); }
    static std::string to_cell(int v) { return std::to_string(v); }
    static std::string to_cell(long v) { return std::to_string(v); }
    static std::string to_cell(long long v) { return std::to_string(v); }
    static std::string to_cell(unsigned v) { return std::to_string(v); }
    static std::string to_cell(unsigned long v) { return std::to_string(v); }
    static std::string to_cell(unsigned long long v) { return std::to_string(v); }
    static std::string to_cell(bool v) { return v ? "true" : "false"; }
    static std::string to_cell(const std::string& v) { return v; }
    static std::string to_cell(const char* v) { return v; }

    static void write_row(std::ostream& os, const std::vector<std::string>& r) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) os << ',';
            const bool quote = r[i].find_first_of(",\"\n") != std::string::npos;
            if (!quote) {
                os << r[i];
                continue;
            }
            os << '"';
            for (char c : r[i]) os << (c == '"' ? "\"\"" : std::string(1, c));
            os << '"';
        }
        os << '\n';
    }

    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

struct CommandResult {
    std::string command;
    std::map<std::string, Table> tables;
    json summary = json::object();
    int exit_code = 0;
    std::vector<std::string> files;
};

inline json metadata(const std::string& command, const RunConfig& cfg) {
    return {{"tool", "qnnlab"}, {"version", tool_version}, {"command", command}, {"seed", cfg.seed()},
            {"config", cfg.doc()}};
}

/// Writes every table as <command>_<name>.csv and the summary as
/// <command>_summary.json under cfg.out(); records the paths in res.files.
inline void emit(CommandResult& res, const RunConfig& cfg) {
    const std::string out = cfg.out();
    if (out.empty()) return;
    namespace fs = std::filesystem;
    fs::create_directories(out);
    const json meta = metadata(res.command, cfg);
    const std::string stem = [&] {
        std::string s = res.command;
        std::replace(s.begin(), s.end(), '-', '_');
        return s;
    }();
    for (const auto& [name, table] : res.tables) {
        const fs::path p = fs::path(out) / (stem + "_" + name + ".csv");
        std::ofstream os(p, std::ios::binary);
        if (!os) throw usage_error("cannot write " + p.string());
        table.write(os, meta.dump());
        res.files.push_back(p.string());
    }
    const fs::path p = fs::path(out) / (stem + "_summary.json");
    std::ofstream os(p, std::ios::binary);
    if (!os) throw usage_error("cannot write " + p.string());
    json doc = res.summary;
    doc["metadata"] = meta;
    doc["exit_code"] = res.exit_code;
    os << doc.dump(2) << '\n';
    res.files.push_back(p.string());
}

inline json to_json(const train::FitReport& r) {
    return {{"method", train::method_name(r.method)},
            {"seed", r.seed},
            {"iterations", r.iterations},
            {"evaluations", r.evaluations},
            {"final_loss", r.final_loss},
            {"stage1_loss", r.stage1_loss ? json(*r.stage1_loss) : json()},
            {"boxes", {{"freq", r.boxes.freq}, {"phase", r.boxes.phase}, {"angle", r.boxes.angle}}},
            {"init", r.init},
            {"loss_trace", r.loss_trace},
            {"params",
             {{"blocks", r.params.blocks()},
              {"dim", r.params.dim()},
              {"frequencies", r.params.frequencies()},
              {"phases", r.params.phases()},
              {"angles", r.params.angles()}}}};
}

inline json to_json(const noise::BoundReport& r) {
    json j = json::object();
    for (const auto& [k, v] : r.fields()) j[k] = v;
    return j;
}

// ---------------------------------------------------------------- shared pieces

inline std::vector<double> linspace(double lo, double hi, std::size_t count) {
    std::vector<double> v(count);
    for (std::size_t i = 0; i < count; ++i)
        v[i] = count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    return v;
}

inline double mean_abs(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return a.empty() ? 0.0 : s / static_cast<double>(a.size());
}

inline double rms(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return a.empty() ? 0.0 : std::sqrt(s / static_cast<double>(a.size()));
}

inline std::vector<double> model_outputs(const QnnParams& p, const std::vector<std::vector<double>>& xs, double scale) {
    std::vector<double> f(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) f[i] = circuit::analytic_output(p, xs[i], scale);
    return f;
}

/// Worst-case constants of the truncated-put bound over a normalisation box:
/// strike K_max/S_min, K_low = 0.4 K, sigma_min, T_min.
struct BsBoundConstants {
    double strike = 0.0;
    double strike_low = 0.0;
    double sigma = 0.0;
    double maturity = 0.0;
    double split = 0.0;
    double frak_b = 0.0;   // B(a*)
    double l1 = 0.0;       // L1 of the transform in spot units: B S_max / (2 pi)

    double eps_n(int n) const { return l1 / std::sqrt(static_cast<double>(n)); }
    json to_json() const {
        return {{"strike", strike}, {"strike_low", strike_low}, {"sigma", sigma}, {"maturity", maturity},
                {"split", split}, {"B", frak_b}, {"l1", l1}};
    }
};

inline BsBoundConstants bs_worst_case(const finance::NormalisationBox& box) {
    BsBoundConstants c;
    c.strike = box.hi[1] / box.lo[0];
    c.strike_low = 0.4 * c.strike;
    c.sigma = box.lo[4];
    c.maturity = box.lo[2];
    c.split = bounds::bs_truncated_optimal_split(c.strike, c.strike_low);
    c.frak_b = bounds::bs_truncated_put_bound(c.strike, c.strike_low, c.sigma, c.maturity, c.split).value;
    c.l1 = c.frak_b * box.hi[0] / (2.0 * std::numbers::pi);
    return c;
}

inline std::vector<double> to_vector(const std::array<double, 5>& a) { return {a.begin(), a.end()}; }

/// Low-discrepancy scenarios over the box, with discounted put prices.
inline train::TrainingSet bs_dataset(std::size_t count, std::uint64_t skip, const finance::NormalisationBox& box) {
    train::TrainingSet t;
    for (const auto& u : optim::halton_points(count, 5, skip)) {
        std::array<double, 5> a{};
        std::copy(u.begin(), u.end(), a.begin());
        t.inputs.push_back(u);
        t.targets.push_back(finance::bs_put_price(finance::denormalise(a, box), finance::Discounting::discounted));
    }
    t.scale = finance::scale_R(t.targets);
    return t;
}

inline std::uint64_t test_skip(std::uint64_t seed) { return 20000 + seed % 10000; }

struct BsModel {
    CircuitConfig cfg;
    train::FitReport fit;
    finance::NormalisationBox box;
    std::size_t train_points = 0;

    double price(std::span<const double> x) const { return circuit::analytic_output(fit.params, x, cfg.scale); }
};

inline BsModel train_bs_model(const RunConfig& rc, int blocks, train::Method method, std::uint64_t tag) {
    BsModel m;
    m.box = finance::default_bs_box();
    m.train_points = rc.get<std::size_t>("/bs/train_points");
    const auto data = bs_dataset(m.train_points, 1, m.box);
    m.cfg = {blocks, 0, data.scale};
    m.fit = train::fit(method, data, m.cfg, rc.budget(), Rng::stream(rc.seed(), tag)(), rc.boxes());
    return m;
}

// ---------------------------------------------------------------- bounds

inline CommandResult cmd_bounds(const RunConfig& rc) {
    CommandResult res{"bounds", {}, json::object(), 0, {}};
    Table t({"family", "K", "K_low", "sigma", "T", "a", "a_star", "erf_term", "e1_term", "bound", "quoted_value",
             "flag"});
    const double nan = std::nan("");
    json rows = json::array();
    auto push = [&](const std::string& fam, double k, double kl, double s, double tt, double a, double astar,
                    double erf_t, double e1_t, double bound, double quoted, const std::string& flag) {
        t.add(fam, k, kl, s, tt, a, astar, erf_t, e1_t, bound, quoted, flag);
        rows.push_back({{"family", fam}, {"bound", bound}, {"a_star", astar}, {"quoted_value", quoted}, {"flag", flag}});
    };
    for (const auto& fam_j : rc.doc().at("bounds").at("families")) {
        const auto fam = fam_j.get<std::string>();
        if (fam == "gaussian") {
            const double s = rc.get<double>("/gaussian/sigma");
            push(fam, nan, nan, s, nan, nan, nan, nan, nan, bounds::gaussian_fourier_l1(s), nan, "");
        } else if (fam == "bachelier") {
            const double a = bounds::bachelier_optimal_split(1.0);
            const auto b = bounds::bachelier_put_bound(1.0, 0.2, 1.0, a);
            const double quoted = 0.1986;
            const bool differs = std::abs(b.value - quoted) > 0.01 * quoted;
            push(fam, 1.0, nan, 0.2, 1.0, a, a, b.erf_term, b.e1_term, b.value, quoted,
                 differs ? "discrepancy: formula value differs from quoted value" : "");
        } else if (fam == "bs-truncated") {
            const double a = bounds::bs_truncated_optimal_split(1.0, 0.4);
            const auto b = bounds::bs_truncated_put_bound(1.0, 0.4, 0.2, 1.0, a);
            push(fam, 1.0, 0.4, 0.2, 1.0, a, a, b.erf_term, b.e1_term, b.value, 2.316, "");
        } else if (fam == "levy") {
            const double sigma = 0.2;
            const double v = bounds::levy_generic_bound(0.5, sigma * sigma / 2, 1.0, 1);
            push(fam, 1.0, nan, sigma, 1.0, nan, nan, nan, nan, v, nan, "");
        }
    }
    res.tables["table"] = std::move(t);
    res.summary["rows"] = rows;

    if (rc.get<bool>("/bounds/sweep")) {
        const auto range = rc.get<std::vector<double>>("/bounds/sweep_range");
        const auto count = rc.get<std::size_t>("/bounds/sweep_points");
        Table s({"family", "a", "erf_term", "e1_term", "bound"});
        for (std::size_t i = 0; i < count; ++i) {
            const double u = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
            const double a = range[0] * std::pow(range[1] / range[0], u);
            const auto b = bounds::bs_truncated_put_bound(1.0, 0.4, 0.2, 1.0, a);
            s.add("bs-truncated", a, b.erf_term, b.e1_term, b.value);
            const auto c = bounds::bachelier_put_bound(1.0, 0.2, 1.0, a);
            s.add("bachelier", a, c.erf_term, c.e1_term, c.value);
        }
        res.tables["sweep"] = std::move(s);
    }
    emit(res, rc);
    return res;
}

// ---------------------------------------------------------------- gaussian

struct GaussianFit {
    int blocks = 0;
    CircuitConfig cfg;
    train::FitReport fit;
    std::vector<double> approx;
    double rmse = 0.0;
    double mae = 0.0;
    double bound = 0.0;
    int restarts = 0;
};

inline GaussianFit fit_gaussian(const RunConfig& rc, double sigma, int n, std::uint64_t tag) {
    const auto dom = rc.get<std::vector<double>>("/gaussian/domain");
    const auto xs = linspace(dom[0], dom[1], rc.get<std::size_t>("/gaussian/points"));
    train::TrainingSet data;
    for (double x : xs) {
        data.inputs.push_back({x});
        data.targets.push_back(finance::gaussian_density(x, sigma));
    }
    data.scale = finance::scale_R(data.targets);
    GaussianFit g;
    g.blocks = n;
    g.cfg = {n, 0, data.scale};
    g.bound = bounds::gaussian_fourier_l1(sigma) / std::sqrt(static_cast<double>(n));
    const auto method = train::parse_method(rc.get<std::string>("/gaussian/method"));
    const int max_restarts = rc.get<int>("/gaussian/restarts");
    for (int attempt = 0;; ++attempt) {
        g.fit = train::fit(method, data, g.cfg, rc.budget(), Rng::stream(rc.seed(), tag + 7919 * attempt)(),
                           rc.boxes());
        g.approx = model_outputs(g.fit.params, data.inputs, data.scale);
        g.rmse = rms(g.approx, data.targets);
        g.mae = mean_abs(g.approx, data.targets);
        g.restarts = attempt;
        if (g.rmse <= g.bound || attempt >= max_restarts) break;
    }
    return g;
}

inline CommandResult cmd_gaussian(const RunConfig& rc) {
    CommandResult res{"gaussian", {}, json::object(), 0, {}};
    const double sigma = rc.get<double>("/gaussian/sigma");
    Table conv({"sigma", "n", "qubits", "rmse", "mae", "bound", "ratio", "rmse_within_bound", "converged", "seed",
                "restarts"});
    json fits = json::array();
    bool all_below = true;
    for (int n : rc.get<std::vector<int>>("/gaussian/blocks")) {
        const auto g = fit_gaussian(rc, sigma, n, 100 + static_cast<std::uint64_t>(n));
        const double ratio = g.mae / g.bound;
        const bool within = g.rmse <= g.bound;
        all_below = all_below && ratio < 1.0;
        conv.add(sigma, n, g.cfg.qubits(), g.rmse, g.mae, g.bound, ratio, within, within, g.fit.seed, g.restarts);
        json f = to_json(g.fit);
        f["n"] = n;
        f["restarts"] = g.restarts;
        fits.push_back(std::move(f));
    }
    res.tables["convergence"] = std::move(conv);

    Table fn({"sigma", "n", "x", "true", "approx", "abs_error"});
    const int tn = rc.get<int>("/gaussian/table_blocks");
    const auto dom = rc.get<std::vector<double>>("/gaussian/domain");
    const auto xs = linspace(dom[0], dom[1], rc.get<std::size_t>("/gaussian/points"));
    json multi = json::array();
    for (double s : rc.get<std::vector<double>>("/gaussian/table_sigmas")) {
        const auto g = fit_gaussian(rc, s, tn, 500 + static_cast<std::uint64_t>(std::llround(s * 1000)));
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double truth = finance::gaussian_density(xs[i], s);
            fn.add(s, tn, xs[i], truth, g.approx[i], std::abs(g.approx[i] - truth));
        }
        multi.push_back({{"sigma", s}, {"n", tn}, {"rmse", g.rmse}, {"mae", g.mae}, {"bound", g.bound},
                         {"l1", bounds::gaussian_fourier_l1(s)}});
    }
    res.tables["functions"] = std::move(fn);
    res.summary["ratio_below_one"] = all_below;
    res.summary["fits"] = fits;
    res.summary["multi_sigma"] = multi;
    emit(res, rc);
    return res;
}

// ---------------------------------------------------------------- Black-Scholes

inline CommandResult cmd_bs_surface(const RunConfig& rc) {
    CommandResult res{"bs-surface", {}, json::object(), 0, {}};
    const auto model = train_bs_model(rc, rc.get<int>("/bs/blocks"), train::parse_method(rc.get<std::string>("/train/method")), 1);
    const double s0 = rc.get<double>("/bs/spot");
    const double r = rc.get<double>("/bs/rate");
    const double tm = rc.get<double>("/bs/maturity");
    const auto kr = rc.get<std::vector<double>>("/bs/strike_range");
    const auto vr = rc.get<std::vector<double>>("/bs/vol_range");
    const auto grid = rc.get<std::size_t>("/bs/grid");
    Table t({"K", "sigma_sqrt_T", "true_price", "qnn_price", "abs_error", "in_box"});
    std::vector<double> errs, errs_in;
    for (double k : linspace(kr[0], kr[1], grid)) {
        for (double v : linspace(vr[0], vr[1], grid)) {
            const finance::MarketScenario sc{1.0, k / s0, tm, r, v / std::sqrt(tm)};
            const double truth = s0 * finance::bs_put_price(sc, finance::Discounting::discounted);
            const auto x = to_vector(finance::normalise(sc, model.box));
            const double q = s0 * model.price(x);
            const auto raw = sc.as_array();
            bool in_box = true;
            for (std::size_t i = 0; i < 5; ++i) in_box = in_box && raw[i] >= model.box.lo[i] && raw[i] <= model.box.hi[i];
            const double e = std::abs(q - truth);
            t.add(k, v, truth, q, e, in_box);
            errs.push_back(e);
            if (in_box) errs_in.push_back(e);
        }
    }
    res.tables["grid"] = std::move(t);

    const double max_err = *std::max_element(errs.begin(), errs.end());
    const auto bins = rc.get<std::size_t>("/bs/histogram_bins");
    std::vector<std::size_t> counts(bins, 0);
    for (double e : errs) {
        auto b = max_err > 0 ? static_cast<std::size_t>(e / max_err * static_cast<double>(bins)) : 0;
        counts[std::min(b, bins - 1)]++;
    }
    Table h({"bin_lo", "bin_hi", "count"});
    for (std::size_t b = 0; b < bins; ++b)
        h.add(max_err * b / bins, max_err * (b + 1) / bins, counts[b]);
    res.tables["histogram"] = std::move(h);

    const auto wc = bs_worst_case(model.box);
    const double mae = std::accumulate(errs.begin(), errs.end(), 0.0) / static_cast<double>(errs.size());
    res.summary["mae"] = mae;
    res.summary["max_error"] = max_err;
    res.summary["mae_in_box"] = errs_in.empty() ? 0.0 : std::accumulate(errs_in.begin(), errs_in.end(), 0.0) / static_cast<double>(errs_in.size());
    res.summary["grid_points_in_box"] = errs_in.size();
    res.summary["bound_envelope"] = s0 * wc.frak_b / std::sqrt(static_cast<double>(model.cfg.blocks));
    res.summary["eps_n"] = s0 * wc.eps_n(model.cfg.blocks);
    res.summary["worst_case"] = wc.to_json();
    res.summary["price_units"] = "spot = " + format_number(s0);
    res.summary["fit"] = to_json(model.fit);
    res.summary["qubits"] = model.cfg.qubits();
    res.summary["R"] = model.cfg.scale;
    emit(res, rc);
    return res;
}

inline CommandResult cmd_bs_test(const RunConfig& rc) {
    CommandResult res{"bs-test", {}, json::object(), 0, {}};
    const auto box = finance::default_bs_box();
    const auto test = bs_dataset(rc.get<std::size_t>("/bs/test_points"), test_skip(rc.seed()), box);
    const auto wc = bs_worst_case(box);
    const int n = rc.get<int>("/bs/blocks");
    Table t({"method", "index", "S", "K", "T", "r", "sigma", "true", "qnn", "abs_error", "bound", "within"});
    json methods = json::object();
    std::uint64_t tag = 10;
    for (const auto& mj : rc.doc().at("bs").at("methods")) {
        const auto method = train::parse_method(mj.get<std::string>());
        const auto model = train_bs_model(rc, n, method, tag++);
        const double bound = wc.eps_n(n) + sampler::stat_error(model.cfg.scale, 0.5, rc.shots());
        std::size_t inside = 0;
        std::vector<double> f;
        for (std::size_t i = 0; i < test.size(); ++i) {
            std::array<double, 5> a{};
            std::copy(test.inputs[i].begin(), test.inputs[i].end(), a.begin());
            const auto sc = finance::denormalise(a, box);
            const double q = model.price(test.inputs[i]);
            f.push_back(q);
            const double e = std::abs(q - test.targets[i]);
            inside += e <= bound;
            t.add(train::method_name(method), i, sc.spot, sc.strike, sc.maturity, sc.rate, sc.vol, test.targets[i], q, e,
                  bound, e <= bound);
        }
        methods[train::method_name(method)] = {{"mae", mean_abs(f, test.targets)},
                                                {"rmse", rms(f, test.targets)},
                                                {"bound", bound},
                                                {"fraction_within", static_cast<double>(inside) / static_cast<double>(test.size())},
                                                {"fit", to_json(model.fit)}};
    }
    res.tables["points"] = std::move(t);

    Table sc({"n", "qubits", "mae", "eps_n", "ratio"});
    json scaling = json::array();
    bool below = true;
    for (int m : rc.get<std::vector<int>>("/bs/scaling_blocks")) {
        const auto model = train_bs_model(rc, m, train::Method::A, 40 + static_cast<std::uint64_t>(m));
        const double mae = mean_abs(model_outputs(model.fit.params, test.inputs, model.cfg.scale), test.targets);
        const double ratio = mae / wc.eps_n(m);
        below = below && ratio < 1.0;
        sc.add(m, model.cfg.qubits(), mae, wc.eps_n(m), ratio);
        scaling.push_back({{"n", m}, {"mae", mae}, {"eps_n", wc.eps_n(m)}, {"ratio", ratio}});
    }
    res.tables["scaling"] = std::move(sc);
    res.summary["methods"] = methods;
    res.summary["scaling"] = scaling;
    res.summary["ratio_below_one"] = below;
    res.summary["worst_case"] = wc.to_json();
    res.summary["test_set"] = {{"sampler", "halton"}, {"skip", test_skip(rc.seed())}, {"size", test.size()}};
    emit(res, rc);
    return res;
}

// ---------------------------------------------------------------- noise sweep

/// Per-rate depolarising strengths used by the sweep: every gate at error eps.
inline noise::DepolarisingSpec sweep_spec(double eps, const CircuitConfig& cfg) {
    const int q = cfg.qubits();
    const double lv = 1.0 - std::pow(1.0 - eps, std::max(0, q - 2));
    const double lu = 1.0 - std::pow(1.0 - eps, static_cast<double>(hardware::n_two_qubit(cfg.blocks, q)));
    return {lv, lu};
}

/// Samples the noisy diagonal and returns the output estimate.
inline double sampled_noisy_output(const noise::DensityMatrix& rho, const CircuitConfig& cfg, std::uint64_t shots,
                                   std::uint64_t seed) {
    std::vector<double> dist(static_cast<std::size_t>(rho.dim()));
    double s = 0.0;
    for (Eigen::Index i = 0; i < rho.dim(); ++i) s += dist[static_cast<std::size_t>(i)] = std::max(0.0, rho(i, i).real());
    for (auto& d : dist) d /= s;
    return sampler::sampled_output(dist, cfg, shots, seed);
}

inline CommandResult cmd_noise_sweep(const RunConfig& rc) {
    CommandResult res{"noise-sweep", {}, json::object(), 0, {}};
    const auto model = train_bs_model(rc, rc.get<int>("/bs/blocks"), train::parse_method(rc.get<std::string>("/train/method")), 1);
    const auto test = bs_dataset(rc.get<std::size_t>("/noise/test_points"), test_skip(rc.seed()), model.box);
    const double tol = rc.get<double>("/noise/check_tol");
    const auto& cfg = model.cfg;
    Table t({"eps", "point", "lambda_v", "lambda_u", "alpha", "true", "ideal", "closed_form", "density_matrix",
             "sampled", "bias", "deviation"});
    Table m({"eps", "alpha", "bias", "mae_closed", "mae_sampled", "mae_vs_ideal", "mean_distance_to_bias"});
    double worst = 0.0;
    std::uint64_t seq = 0;
    for (double eps : rc.get<std::vector<double>>("/noise/eps")) {
        const auto spec = sweep_spec(eps, cfg);
        const double alpha = spec.alpha();
        const double bias = noise::bias_constant(alpha, cfg);
        const std::size_t count = test.size();
        std::vector<double> ideal(count), closed(count), dm(count), sampled(count);
        optim::parallel_for(count, rc.threads(), [&](std::size_t i) {
            const auto& x = test.inputs[i];
            ideal[i] = circuit::evaluate(model.fit.params, x, cfg, circuit::EvalMode::exact);
            closed[i] = noise::noisy_output(ideal[i], alpha, cfg);
            const auto rho = noise::depolarised_pipeline(model.fit.params, x, cfg, spec);
            dm[i] = circuit::circuit_output(noise::grouped_probabilities(rho, cfg), cfg.scale);
            sampled[i] = sampled_noisy_output(rho, cfg, rc.shots(), Rng::stream(rc.seed(), 1000 + seq * 1000 + i)());
        });
        ++seq;
        double dist_bias = 0.0;
        for (std::size_t i = 0; i < count; ++i) {
            const double dev = std::abs(closed[i] - dm[i]);
            worst = std::max(worst, dev);
            dist_bias += std::abs(closed[i] - bias);
            t.add(eps, i, spec.lambda_v, spec.lambda_u, alpha, test.targets[i], ideal[i], closed[i], dm[i], sampled[i],
                  bias, dev);
        }
        m.add(eps, alpha, bias, mean_abs(closed, test.targets), mean_abs(sampled, test.targets), mean_abs(closed, ideal),
              dist_bias / static_cast<double>(count));
    }
    res.tables["points"] = std::move(t);
    res.tables["mae"] = std::move(m);
    res.summary["max_closed_vs_density"] = worst;
    res.summary["tolerance"] = tol;
    res.summary["agreement"] = worst <= tol;
    res.summary["fit"] = to_json(model.fit);
    res.summary["qubits"] = cfg.qubits();
    res.summary["R"] = cfg.scale;
    if (worst > tol) res.exit_code = 2;
    emit(res, rc);
    return res;
}

// ---------------------------------------------------------------- hardware

inline hardware::HardwareProfile load_profile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw usage_error("cannot open hardware profile " + path);
    if (std::filesystem::path(path).extension() == ".json") {
        json j;
        try {
            j = json::parse(in);
        } catch (const json::parse_error& e) {
            throw usage_error("hardware profile " + path + ": " + e.what());
        }
        if (!j.is_object()) throw usage_error("hardware profile " + path + ": expected an object");
        hardware::HardwareProfile p = j.contains("preset") ? hardware::preset(j.at("preset").get<std::string>())
                                                           : hardware::noiseless();
        if (!j.contains("preset")) p.name = "custom";
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (it.key() == "preset") continue;
            hardware::set_field(p, it.key(), it->is_string() ? it->get<std::string>() : it->dump());
        }
        hardware::validate(p);
        return p;
    }
    return hardware::parse_profile(in);
}

/// One simulated run of the noisy circuit under a budget: depolarised grouped
/// probabilities, readout confusion, then `shots` samples of the five-way
/// outcome (four labels plus discarded mass).
inline double simulate_backend(const QnnParams& params, std::span<const double> x, const CircuitConfig& cfg,
                               const hardware::BackendBudget& b, double readout_p, std::uint64_t shots,
                               std::uint64_t seed) {
    const auto ideal = circuit::grouped_probabilities(circuit::final_state(params, x, cfg), cfg);
    const auto noisy = noise::apply_readout(noise::noisy_probs(ideal, b.alpha, cfg), noise::readout_confusion(readout_p));
    std::vector<double> dist{noisy.p[0], noisy.p[1], noisy.p[2], noisy.p[3], std::max(0.0, noisy.discarded)};
    double s = 0.0;
    for (double d : dist) s += d;
    for (auto& d : dist) d /= s;
    const auto r = sampler::sample(dist, shots, seed);
    const double n = static_cast<double>(r.shots);
    return cfg.scale * (1.0 - 2.0 * static_cast<double>(r.counts[1] + r.counts[2]) / n);
}

inline CommandResult cmd_hardware(const RunConfig& rc) {
    CommandResult res{"hardware", {}, json::object(), 0, {}};
    std::vector<hardware::HardwareProfile> profiles;
    for (const auto& nm : rc.doc().at("hardware").at("presets")) profiles.push_back(hardware::preset(nm.get<std::string>()));
    if (const auto path = rc.get<std::string>("/hardware/profile"); !path.empty()) profiles.push_back(load_profile(path));
    const auto corner = RunConfig::parse_corner(rc.get<std::string>("/hardware/corner"));
    const auto box = finance::default_bs_box();
    const auto wc = bs_worst_case(box);
    const auto test = bs_dataset(rc.get<std::size_t>("/hardware/test_points"), test_skip(rc.seed()), box);
    const auto method = train::parse_method(rc.get<std::string>("/train/method"));

    Table t({"profile", "corner", "n", "qubits", "lambda_v", "lambda_u_gates", "t_circ", "p_t1", "p_t2", "lambda_u",
             "alpha", "statistical", "systematic", "offset", "readout", "total", "largest_noise_term", "empirical_mae",
             "max_error", "fraction_within"});
    json budgets = json::array();
    std::map<int, BsModel> models;
    for (int n : rc.get<std::vector<int>>("/hardware/blocks")) {
        models.emplace(n, train_bs_model(rc, n, method, n == rc.get<int>("/bs/blocks") ? 1 : 60 + static_cast<std::uint64_t>(n)));
    }
    std::uint64_t seq = 0;
    for (const auto& prof : profiles) {
        for (const auto& [n, model] : models) {
            const auto& cfg = model.cfg;
            const auto f = model_outputs(model.fit.params, test.inputs, cfg.scale);
            double fn = 0.0;
            for (double v : f) fn += v * v;
            fn = std::sqrt(fn / static_cast<double>(f.size()));
            const auto b = hardware::backend_budget(prof, cfg, wc.l1, fn, corner);
            const double p = prof.readout_at(corner);
            std::vector<double> sim(test.size());
            optim::parallel_for(test.size(), rc.threads(), [&](std::size_t i) {
                sim[i] = simulate_backend(model.fit.params, test.inputs[i], cfg, b, p, rc.shots(),
                                          Rng::stream(rc.seed(), 50000 + seq * 1000 + i)());
            });
            ++seq;
            std::size_t inside = 0;
            double max_err = 0.0;
            for (std::size_t i = 0; i < sim.size(); ++i) {
                const double e = std::abs(sim[i] - test.targets[i]);
                inside += e <= b.report.total;
                max_err = std::max(max_err, e);
            }
            const double mae = mean_abs(sim, test.targets);
            const double frac = static_cast<double>(inside) / static_cast<double>(sim.size());
            const auto& r = b.report;
            std::string largest = "none";
            double top = 0.0;
            const std::array<std::pair<const char*, double>, 3> terms{
                {{"systematic", r.systematic}, {"offset", r.offset}, {"readout", r.readout}}};
            for (const auto& [name, v] : terms) {
                if (v > top) {
                    top = v;
                    largest = name;
                }
            }
            t.add(prof.name, corner == hardware::Corner::pessimistic ? "pessimistic" : "optimistic", n, cfg.qubits(),
                  b.lambda_v, b.lambda_u_gates, b.t_circ, b.decoherence.p_t1, b.decoherence.p_t2, b.lambda_u, b.alpha,
                  r.statistical, r.systematic, r.offset, r.readout, r.total, largest, mae, max_err, frac);
            budgets.push_back({{"profile", prof.name}, {"n", n}, {"report", to_json(r)}, {"empirical_mae", mae},
                               {"fraction_within", frac}, {"largest_noise_term", largest}, {"notes", b.notes},
                               {"f_norm", fn}});
        }
    }
    res.tables["budget"] = std::move(t);
    res.summary["budgets"] = budgets;
    res.summary["worst_case"] = wc.to_json();
    json fits = json::object();
    for (const auto& [n, model] : models) fits[std::to_string(n)] = to_json(model.fit);
    res.summary["fits"] = fits;
    emit(res, rc);
    return res;
}

// ---------------------------------------------------------------- validation

struct CheckResult {
    std::string name;
    std::size_t cases = 0;
    std::size_t passed = 0;
    double max_deviation = 0.0;
    double tolerance = 0.0;
    bool ok = false;
    json extra = json::object();
};

namespace detail {
inline QnnParams random_params(Rng& rng, int n, int d, double scale = 1.0) {
    std::vector<double> a(static_cast<std::size_t>(n) * d), b(n), g(n);
    for (auto& v : a) v = scale * rng.uniform(-std::numbers::pi, std::numbers::pi);
    for (auto& v : b) v = scale * rng.uniform(-std::numbers::pi, std::numbers::pi);
    for (auto& v : g) v = scale * rng.uniform(-std::numbers::pi, std::numbers::pi);
    return QnnParams(d, std::move(a), std::move(b), std::move(g));
}
inline std::vector<double> random_x(Rng& rng, int d) {
    std::vector<double> x(d);
    for (auto& v : x) v = rng.uniform();
    return x;
}
}  // namespace detail

/// |<psi_UCR|psi_naive>| = 1 over n in {2,4,8} x d in {1,5} x scales {0.1,1,5}, three draws each.
inline CheckResult ucr_equivalence_check(std::uint64_t seed, double tol = 1e-9) {
    CheckResult c{"ucr-equivalence", 0, 0, 0.0, tol, false, json::object()};
    Rng rng = Rng::stream(seed, 1);
    for (int n : {2, 4, 8})
        for (int d : {1, 5})
            for (double scale : {0.1, 1.0, 5.0})
                for (int rep = 0; rep < 3; ++rep) {
                    const CircuitConfig cfg{n, 0, 1.0};
                    const auto p = detail::random_params(rng, n, d, scale);
                    const auto x = detail::random_x(rng, d);
                    const auto seq = ucr::ucr_compile(p, x, cfg);
                    c.extra["gate_counts"][std::to_string(n)] = {{"qubits", cfg.qubits()},
                                                                 {"cnot", seq.two_qubit_count()},
                                                                 {"one_qubit", seq.one_qubit_count()}};
                    const auto a = ucr::ucr_apply(seq, circuit::initial_state(cfg));
                    const auto b = circuit::final_state(p, x, cfg);
                    const double dev = std::abs(1.0 - std::abs(circuit::inner_product(a, b)));
                    ++c.cases;
                    c.passed += dev <= tol;
                    c.max_deviation = std::max(c.max_deviation, dev);
                }
    c.ok = c.passed == c.cases;
    return c;
}

/// Statevector output against the closed form at `draws` random points for
/// every n in {1,2,8} and d in {1,5}.
inline CheckResult exact_analytic_check(std::uint64_t seed, double tol = 1e-10, int draws = 100) {
    CheckResult c{"exact-vs-analytic", 0, 0, 0.0, tol, false, json::object()};
    Rng rng = Rng::stream(seed, 2);
    for (int n : {1, 2, 8})
        for (int d : {1, 5})
            for (int t = 0; t < draws; ++t) {
                const CircuitConfig cfg{n, 0, 1.0 + rng.uniform()};
                const auto p = detail::random_params(rng, n, d);
                const auto x = detail::random_x(rng, d);
                const double dev = std::abs(circuit::evaluate(p, x, cfg, circuit::EvalMode::exact) -
                                            circuit::analytic_output(p, x, cfg.scale));
                ++c.cases;
                c.passed += dev <= tol;
                c.max_deviation = std::max(c.max_deviation, dev);
            }
    c.ok = c.passed == c.cases;
    return c;
}

/// Sampled against analytic output over random configurations. Reports the
/// fraction inside R/sqrt(N) and inside k standard deviations of the binomial
/// estimate; `ok` gates on the latter.
inline CheckResult shot_noise_check(std::uint64_t seed, std::uint64_t shots, std::size_t configs, double k_sigma,
                                    double fraction) {
    CheckResult c{"shot-noise", 0, 0, 0.0, k_sigma, false, json::object()};
    Rng rng = Rng::stream(seed, 3);
    std::size_t within_flat = 0;
    const int block_choices[] = {1, 2, 4, 8};
    const int dim_choices[] = {1, 2, 5};
    double max_z = 0.0;
    for (std::size_t i = 0; i < configs; ++i) {
        const int n = block_choices[rng.below(4)];
        const int d = dim_choices[rng.below(3)];
        const CircuitConfig cfg{n, 0, 1.0};
        const auto p = detail::random_params(rng, n, d);
        const auto x = detail::random_x(rng, d);
        const auto state = circuit::final_state(p, x, cfg);
        const auto g = circuit::grouped_probabilities(state, cfg);
        const double f = circuit::circuit_output(g, cfg.scale);
        const double est = sampler::sampled_output(circuit::outcome_distribution(state), cfg, shots,
                                                   Rng::stream(seed, 100 + i)());
        const double dev = std::abs(est - f);
        const double sd = 2.0 * sampler::stat_error(cfg.scale, g.p[1] + g.p[2], shots);
        within_flat += dev <= cfg.scale / std::sqrt(static_cast<double>(shots));
        const bool in_band = dev <= k_sigma * sd + 1e-15;
        c.passed += in_band;
        ++c.cases;
        c.max_deviation = std::max(c.max_deviation, dev);
        if (sd > 0) max_z = std::max(max_z, dev / sd);
    }
    const double frac_band = static_cast<double>(c.passed) / static_cast<double>(c.cases);
    c.ok = frac_band >= fraction;
    c.extra = {{"shots", shots},
               {"fraction_within_R_over_sqrt_shots", static_cast<double>(within_flat) / static_cast<double>(c.cases)},
               {"fraction_within_k_sigma", frac_band},
               {"k_sigma", k_sigma},
               {"required_fraction", fraction},
               {"max_z", max_z}};
    return c;
}

inline CommandResult cmd_validate(const RunConfig& rc) {
    CommandResult res{"validate", {}, json::object(), 0, {}};
    const std::vector<CheckResult> checks{
        ucr_equivalence_check(rc.seed(), rc.get<double>("/validate/ucr_tol")),
        exact_analytic_check(rc.seed(), rc.get<double>("/validate/exact_tol")),
        shot_noise_check(rc.seed(), rc.shots(), rc.get<std::size_t>("/validate/shot_configs"),
                         rc.get<double>("/validate/shot_sigmas"), rc.get<double>("/validate/shot_fraction"))};
    Table t({"check", "cases", "passed", "max_deviation", "tolerance", "status", "seed"});
    json arr = json::array();
    bool ok = true;
    for (const auto& c : checks) {
        t.add(c.name, c.cases, c.passed, c.max_deviation, c.tolerance, c.ok ? "pass" : "fail", rc.seed());
        arr.push_back({{"check", c.name}, {"cases", c.cases}, {"passed", c.passed}, {"max_deviation", c.max_deviation},
                       {"tolerance", c.tolerance}, {"ok", c.ok}, {"details", c.extra}});
        ok = ok && c.ok;
    }
    res.tables["checks"] = std::move(t);
    res.summary["checks"] = arr;
    res.summary["seed"] = rc.seed();
    res.summary["all_passed"] = ok;
    res.exit_code = ok ? 0 : 2;
    emit(res, rc);
    return res;
}

inline std::vector<std::string> command_names() {
    return {"bounds", "gaussian", "bs-surface", "bs-test", "noise-sweep", "hardware", "validate"};
}

inline CommandResult run_command(const std::string& name, const RunConfig& rc) {
    if (name == "bounds") return cmd_bounds(rc);
    if (name == "gaussian") return cmd_gaussian(rc);
    if (name == "bs-surface") return cmd_bs_surface(rc);
    if (name == "bs-test") return cmd_bs_test(rc);
    if (name == "noise-sweep") return cmd_noise_sweep(rc);
    if (name == "hardware") return cmd_hardware(rc);
    if (name == "validate") return cmd_validate(rc);
    throw usage_error("unknown command '" + name + "'");
}

}  // namespace qnnlab::experiments
