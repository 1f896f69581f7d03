#include "rmtlab/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <locale>
#include <map>
#include <set>
#include <sstream>

#include "rmtlab/covariance.hpp"
#include "rmtlab/delocalization.hpp"
#include "rmtlab/error.hpp"
#include "rmtlab/locallaw.hpp"
#include "rmtlab/parallel.hpp"
#include "rmtlab/spectral.hpp"

namespace rmtlab {

using nlohmann::json;

std::string_view to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::tail: return "tail";
        case ExperimentKind::localscan: return "localscan";
        case ExperimentKind::deloc: return "deloc";
        case ExperimentKind::identities: return "identities";
        case ExperimentKind::covariance: return "covariance";
        case ExperimentKind::pv: return "pv";
    }
    return "unknown";
}

ExperimentKind experiment_kind_from_string(std::string_view name) {
    for (auto k : {ExperimentKind::tail, ExperimentKind::localscan, ExperimentKind::deloc,
                   ExperimentKind::identities, ExperimentKind::covariance, ExperimentKind::pv})
        if (to_string(k) == name) return k;
    throw ConfigError("unknown experiment '" + std::string(name) + "'", "experiment");
}

namespace {

std::string_view to_string(StatisticKind k) { return k == StatisticKind::quadratic ? "quadratic" : "projection"; }

std::string_view to_string(MatrixKind k) {
    switch (k) {
        case MatrixKind::random_symmetric: return "random_symmetric";
        case MatrixKind::identity: return "identity";
        case MatrixKind::gaussian: return "gaussian";
    }
    return "unknown";
}

// ---- config parsing ------------------------------------------------------

[[noreturn]] void bad_type(const std::string& field, const char* want) {
    throw ConfigError("field '" + field + "' must be " + want, field);
}

double as_double(const json& v, const std::string& field) {
    if (!v.is_number()) bad_type(field, "a number");
    return v.get<double>();
}

std::int64_t as_int(const json& v, const std::string& field) {
    if (!v.is_number_integer()) bad_type(field, "an integer");
    if (v.is_number_unsigned() && v.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX))
        throw ConfigError("field '" + field + "' is too large", field);
    return v.get<std::int64_t>();
}

std::uint64_t as_u64(const json& v, const std::string& field) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) throw ConfigError("field '" + field + "' must be non-negative", field);
    bad_type(field, "a non-negative integer");
}

std::string as_string(const json& v, const std::string& field) {
    if (!v.is_string()) bad_type(field, "a string");
    return v.get<std::string>();
}

std::vector<double> as_double_list(const json& v, const std::string& field) {
    if (v.is_number()) return {v.get<double>()};
    if (!v.is_array()) bad_type(field, "a number or an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) out.push_back(as_double(e, field));
    return out;
}

std::vector<std::int64_t> as_int_list(const json& v, const std::string& field) {
    if (v.is_number_integer()) return {as_int(v, field)};
    if (!v.is_array()) bad_type(field, "an integer or an array of integers");
    std::vector<std::int64_t> out;
    for (const auto& e : v) out.push_back(as_int(e, field));
    return out;
}

template <class T>
std::array<T, 2> as_pair(const json& v, const std::string& field) {
    if (!v.is_array() || v.size() != 2) bad_type(field, "a two-element array");
    if constexpr (std::is_same_v<T, double>)
        return {as_double(v[0], field), as_double(v[1], field)};
    else
        return {as_int(v[0], field), as_int(v[1], field)};
}

DistSpec dist_from_json(const json& v) {
    DistSpec d;
    if (v.is_string()) {
        try {
            d.kind = dist_kind_from_string(v.get<std::string>());
        } catch (const Error& e) {
            throw ConfigError(e.what(), "dist");
        }
        return d;
    }
    if (!v.is_object()) bad_type("dist", "a string or an object");
    static const std::set<std::string> known{"kind", "K", "alpha", "a", "b"};
    for (const auto& [key, _] : v.items())
        if (!known.count(key)) throw ConfigError("unknown key 'dist." + key + "'", "dist." + key);
    if (!v.contains("kind")) throw ConfigError("dist.kind is required", "dist.kind");
    try {
        d.kind = dist_kind_from_string(as_string(v["kind"], "dist.kind"));
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(e.what(), "dist.kind");
    }
    if (v.contains("K")) d.K = as_double(v["K"], "dist.K");
    if (v.contains("alpha")) d.alpha = as_double(v["alpha"], "dist.alpha");
    if (v.contains("a")) d.a = as_double(v["a"], "dist.a");
    if (v.contains("b")) d.b = as_double(v["b"], "dist.b");
    return d;
}

json dist_to_json(const DistSpec& d) {
    return json{{"kind", std::string(to_string(d.kind))}, {"K", d.K}, {"alpha", d.alpha}, {"a", d.a}, {"b", d.b}};
}

int line_of(std::string_view text, std::size_t byte) {
    const std::size_t end = std::min(byte, text.size());
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(end), '\n'));
}

}  // namespace

json parse_json_text(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end(), nullptr, true, true);
    } catch (const json::parse_error& e) {
        // e.byte is 1-based and points just past the offending character.
        const int line = line_of(text, e.byte == 0 ? 0 : e.byte - 1);
        throw ConfigError("config parse error at line " + std::to_string(line) + ": " + e.what(), {}, line);
    }
}

ExperimentConfig config_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    static const std::set<std::string> known{
        "experiment", "label", "dist", "n", "p", "n_range", "p_range", "trials", "base_seed", "delta",
        "eps", "eta_multiple", "scales", "stride_frac", "bulk", "t_grid", "envelopes", "statistic",
        "matrix", "d", "envelope_K", "y", "excision", "workers", "out_dir"};
    for (const auto& [key, _] : j.items())
        if (!known.count(key)) throw ConfigError("unknown key '" + key + "'", key);
    if (!j.contains("experiment")) throw ConfigError("field 'experiment' is required", "experiment");

    ExperimentConfig c;
    c.experiment = experiment_kind_from_string(as_string(j["experiment"], "experiment"));
    if (j.contains("label")) c.label = as_string(j["label"], "label");
    if (j.contains("dist")) c.dist = dist_from_json(j["dist"]);
    if (j.contains("n")) c.n = as_int_list(j["n"], "n");
    if (j.contains("p")) c.p = as_int(j["p"], "p");
    if (j.contains("n_range")) c.n_range = as_pair<std::int64_t>(j["n_range"], "n_range");
    if (j.contains("p_range")) c.p_range = as_pair<std::int64_t>(j["p_range"], "p_range");
    if (j.contains("trials")) c.trials = as_int(j["trials"], "trials");
    if (j.contains("base_seed")) c.base_seed = as_u64(j["base_seed"], "base_seed");
    if (j.contains("delta")) c.delta = as_double(j["delta"], "delta");
    if (j.contains("eps")) c.eps = as_double(j["eps"], "eps");
    if (j.contains("eta_multiple")) c.eta_multiple = as_double(j["eta_multiple"], "eta_multiple");
    if (j.contains("scales")) c.scales = as_double_list(j["scales"], "scales");
    if (j.contains("stride_frac")) c.stride_frac = as_double(j["stride_frac"], "stride_frac");
    if (j.contains("bulk")) c.bulk = as_pair<double>(j["bulk"], "bulk");
    if (j.contains("t_grid")) c.t_grid = as_double_list(j["t_grid"], "t_grid");
    if (j.contains("envelopes")) {
        const auto& v = j["envelopes"];
        if (!v.is_array()) bad_type("envelopes", "an array of strings");
        for (const auto& e : v) {
            try {
                c.envelopes.push_back(envelope_kind_from_string(as_string(e, "envelopes")));
            } catch (const ConfigError&) {
                throw;
            } catch (const Error& err) {
                throw ConfigError(err.what(), "envelopes");
            }
        }
    }
    if (j.contains("statistic")) {
        const auto s = as_string(j["statistic"], "statistic");
        if (s == "quadratic") c.statistic = StatisticKind::quadratic;
        else if (s == "projection") c.statistic = StatisticKind::projection;
        else throw ConfigError("unknown statistic '" + s + "'", "statistic");
    }
    if (j.contains("matrix")) {
        const auto s = as_string(j["matrix"], "matrix");
        if (s == "random_symmetric") c.matrix = MatrixKind::random_symmetric;
        else if (s == "identity") c.matrix = MatrixKind::identity;
        else if (s == "gaussian") c.matrix = MatrixKind::gaussian;
        else throw ConfigError("unknown matrix '" + s + "'", "matrix");
    }
    if (j.contains("d")) c.d = as_int(j["d"], "d");
    if (j.contains("envelope_K")) c.envelope_K = as_double(j["envelope_K"], "envelope_K");
    if (j.contains("y")) c.y = as_double_list(j["y"], "y");
    if (j.contains("excision")) c.excision = as_double(j["excision"], "excision");
    if (j.contains("workers")) {
        const auto w = as_int(j["workers"], "workers");
        if (w < 1 || w > 1024) throw ConfigError("workers must lie in [1, 1024]", "workers");
        c.workers = static_cast<int>(w);
    }
    if (j.contains("out_dir")) c.out_dir = as_string(j["out_dir"], "out_dir");

    // Validate what the user wrote before defaults can mask it.
    if (c.trials && *c.trials < 1) throw ConfigError("trials must be >= 1", "trials");
    c = c.with_defaults();
    c.validate();
    return c;
}

ExperimentConfig parse_config(std::string_view text) { return config_from_json(parse_json_text(text)); }

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

ExperimentConfig ExperimentConfig::with_defaults() const {
    ExperimentConfig c = *this;
    auto fill_n = [&](std::vector<std::int64_t> v) {
        if (c.n.empty()) c.n = std::move(v);
    };
    auto fill_trials = [&](std::int64_t t) {
        if (!c.trials) c.trials = t;
    };
    switch (experiment) {
        case ExperimentKind::tail:
            if (!c.dist) c.dist = DistSpec::rademacher();
            fill_n({50});
            fill_trials(10000);
            if (c.envelopes.empty()) {
                if (c.statistic == StatisticKind::quadratic) c.envelopes = {EnvelopeKind::hw, EnvelopeKind::hkz};
                else c.envelopes = {EnvelopeKind::projection_tv};
            }
            if (c.statistic == StatisticKind::projection && !c.d) c.d = std::max<std::int64_t>(1, c.n.at(0) / 2);
            break;
        case ExperimentKind::localscan:
            if (!c.dist) c.dist = DistSpec::rademacher();
            fill_n({2000});
            fill_trials(5);
            if (!c.bulk) c.bulk = std::array<double, 2>{-1.8, 1.8};
            break;
        case ExperimentKind::deloc:
            if (!c.dist) c.dist = DistSpec::rademacher();
            fill_n({256, 512, 1024, 2048});
            fill_trials(5);
            break;
        case ExperimentKind::identities:
            if (!c.dist) c.dist = DistSpec::gaussian();
            fill_trials(200);
            break;
        case ExperimentKind::covariance:
            if (!c.dist) c.dist = DistSpec::rademacher();
            fill_n({800});
            fill_trials(5);
            if (!c.p) c.p = std::max<std::int64_t>(1, c.n.at(0) / 2);
            if (!c.bulk && c.n.at(0) > 0 && *c.p > 0 && *c.p <= c.n.at(0)) {
                const auto [a, b] = mp_edges(static_cast<double>(*c.p) / static_cast<double>(c.n.at(0)));
                c.bulk = std::array<double, 2>{a + 0.2, b - 0.2};
            }
            break;
        case ExperimentKind::pv:
            if (!c.dist) c.dist = DistSpec::rademacher();
            fill_trials(1);
            break;
    }
    return c;
}

void ExperimentConfig::validate() const {
    auto fail = [](const std::string& field, const std::string& what) { throw ConfigError(what, field); };
    if (!dist) fail("dist", "dist is unset");
    try {
        dist->validate();
    } catch (const Error& e) {
        throw ConfigError(e.what(), "dist");
    }
    if (!trials || *trials < 1) fail("trials", "trials must be >= 1");
    if (!(delta > 0.0)) fail("delta", "delta must be positive");
    if (!(eps > 0.0 && eps < 2.0)) fail("eps", "eps must lie in (0, 2)");
    if (!(eta_multiple > 0.0)) fail("eta_multiple", "eta_multiple must be positive");
    if (scales.empty()) fail("scales", "scales must be non-empty");
    for (std::size_t i = 0; i < scales.size(); ++i) {
        if (!(scales[i] > 0.0)) fail("scales", "scales must be positive");
        if (i > 0 && !(scales[i] > scales[i - 1])) fail("scales", "scales must be strictly ascending");
    }
    if (!(stride_frac > 0.0 && stride_frac <= 1.0)) fail("stride_frac", "stride_frac must lie in (0, 1]");
    if (bulk && !((*bulk)[0] < (*bulk)[1])) fail("bulk", "bulk must satisfy lo < hi");
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (!(t_grid[i] >= 0.0)) fail("t_grid", "t_grid values must be non-negative");
        if (i > 0 && !(t_grid[i] > t_grid[i - 1])) fail("t_grid", "t_grid must be strictly ascending");
    }
    if (envelope_K && !(*envelope_K > 0.0)) fail("envelope_K", "envelope_K must be positive");
    if (y.empty()) fail("y", "y must be non-empty");
    for (double v : y)
        if (!(v > 0.0 && v <= 1.0)) fail("y", "every y must lie in (0, 1]");
    if (!(excision > 0.0)) fail("excision", "excision must be positive");
    if (workers < 1) fail("workers", "workers must be >= 1");
    if (out_dir.empty()) fail("out_dir", "out_dir must be non-empty");
    if (label == "." || label == ".." || label.find_first_of("/\\") != std::string::npos)
        fail("label", "label must be a plain directory name");

    const bool needs_n = experiment != ExperimentKind::identities && experiment != ExperimentKind::pv;
    if (needs_n && n.empty()) fail("n", "n must be non-empty");
    for (auto v : n)
        if (v < 2) fail("n", "every n must be >= 2");
    if (needs_n && experiment != ExperimentKind::deloc && n.size() != 1)
        fail("n", "this experiment takes a single n");
    if (experiment == ExperimentKind::deloc)
        for (std::size_t i = 1; i < n.size(); ++i)
            if (!(n[i] > n[i - 1])) fail("n", "the n grid must be strictly ascending");

    switch (experiment) {
        case ExperimentKind::tail:
            if (*trials < 100) fail("trials", "tail needs trials >= 100");
            if (statistic == StatisticKind::projection) {
                if (!d || *d < 1 || *d > n[0]) fail("d", "d must lie in [1, n]");
                for (auto k : envelopes)
                    if (k != EnvelopeKind::projection && k != EnvelopeKind::projection_tv)
                        fail("envelopes", "the projection statistic takes projection envelopes only");
            } else {
                for (auto k : envelopes)
                    if (k == EnvelopeKind::projection || k == EnvelopeKind::projection_tv)
                        fail("envelopes", "projection envelopes need statistic = projection");
            }
            break;
        case ExperimentKind::localscan:
        case ExperimentKind::covariance: {
            if (experiment == ExperimentKind::covariance && (!p || *p < 1 || *p > n[0])) fail("p", "p must lie in [1, n]");
            if (!bulk) fail("bulk", "bulk is unset");
            if (experiment == ExperimentKind::localscan) {
                if ((*bulk)[0] < -2.0 || (*bulk)[1] > 2.0) fail("bulk", "bulk must lie inside [-2, 2]");
            } else {
                const auto [a, b] = mp_edges(static_cast<double>(*p) / static_cast<double>(n[0]));
                if ((*bulk)[0] < a || (*bulk)[1] > b) fail("bulk", "bulk must lie inside the MP support");
            }
            break;
        }
        case ExperimentKind::identities:
            if (n_range[0] < 2 || n_range[0] > n_range[1]) fail("n_range", "n_range must satisfy 2 <= lo <= hi");
            if (p_range[0] < 1 || p_range[0] > p_range[1]) fail("p_range", "p_range must satisfy 1 <= lo <= hi");
            if (p_range[0] > n_range[1]) fail("p_range", "p_range lower end exceeds n_range upper end");
            break;
        case ExperimentKind::deloc:
        case ExperimentKind::pv: break;
    }
}

json to_json(const ExperimentConfig& c) {
    json j;
    j["experiment"] = std::string(to_string(c.experiment));
    j["label"] = c.label;
    if (c.dist) j["dist"] = dist_to_json(*c.dist);
    j["n"] = c.n;
    if (c.p) j["p"] = *c.p;
    j["n_range"] = c.n_range;
    j["p_range"] = c.p_range;
    if (c.trials) j["trials"] = *c.trials;
    j["base_seed"] = c.base_seed;
    j["delta"] = c.delta;
    j["eps"] = c.eps;
    j["eta_multiple"] = c.eta_multiple;
    j["scales"] = c.scales;
    j["stride_frac"] = c.stride_frac;
    if (c.bulk) j["bulk"] = *c.bulk;
    j["t_grid"] = c.t_grid;
    j["envelopes"] = json::array();
    for (auto k : c.envelopes) j["envelopes"].push_back(std::string(to_string(k)));
    j["statistic"] = std::string(to_string(c.statistic));
    j["matrix"] = std::string(to_string(c.matrix));
    if (c.d) j["d"] = *c.d;
    if (c.envelope_K) j["envelope_K"] = *c.envelope_K;
    j["y"] = c.y;
    j["excision"] = c.excision;
    j["workers"] = c.workers;
    j["out_dir"] = c.out_dir;
    return j;
}

std::string serialize_config(const ExperimentConfig& cfg) { return to_json(cfg).dump(2) + "\n"; }

std::string config_hash(const ExperimentConfig& cfg) {
    json j = to_json(cfg);
    j.erase("workers");
    j.erase("out_dir");
    const std::string text = j.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream ss;
    ss << std::hex << std::setw(16) << std::setfill('0') << h;
    return ss.str();
}

namespace {

// ---- CSV -------------------------------------------------------------------

class Csv {
public:
    explicit Csv(std::initializer_list<std::string_view> header) {
        out_.imbue(std::locale::classic());
        out_ << std::setprecision(17);
        bool first = true;
        for (auto h : header) {
            if (!first) out_ << ',';
            out_ << h;
            first = false;
        }
        out_ << '\n';
    }

    template <class... Ts>
    void row(const Ts&... values) {
        bool first = true;
        ((put(values, first)), ...);
        out_ << '\n';
    }

    std::string str() const { return out_.str(); }

private:
    template <class T>
    void put(const T& v, bool& first) {
        if (!first) out_ << ',';
        first = false;
        if constexpr (std::is_floating_point_v<T>) {
            if (std::isnan(v)) out_ << "nan";
            else if (std::isinf(v)) out_ << (v > 0 ? "inf" : "-inf");
            else out_ << v;
        } else {
            out_ << v;
        }
    }

    std::ostringstream out_;
};

double log_n(std::int64_t n) { return std::log(static_cast<double>(n)); }

/// Stream for fixed per-run objects (the tail matrix, the projection frame).
/// Disjoint from every trial stream derive_seed(base, i) with i < 2^64 - 1.
std::uint64_t fixture_seed(std::uint64_t base) { return derive_seed(base, ~std::uint64_t{0}); }

struct Outcome {
    std::string records;
    std::vector<std::pair<std::string, std::string>> extra;
    json summary;
    std::vector<std::string> failures;
};

// ---- tail ----------------------------------------------------------------

CMatrix tail_matrix(const ExperimentConfig& c) {
    const auto n = static_cast<Eigen::Index>(c.first_n());
    Rng rng(fixture_seed(c.base_seed));
    switch (c.matrix) {
        case MatrixKind::identity: return CMatrix::Identity(n, n);
        case MatrixKind::gaussian: {
            CMatrix a(n, n);
            for (Eigen::Index j = 0; j < n; ++j)
                for (Eigen::Index i = 0; i < n; ++i) a(i, j) = rng.normal();
            return a;
        }
        case MatrixKind::random_symmetric: {
            CMatrix a(n, n);
            for (Eigen::Index j = 0; j < n; ++j)
                for (Eigen::Index i = 0; i <= j; ++i) a(i, j) = a(j, i) = rng.normal();
            return a;
        }
    }
    throw ExperimentError("unknown matrix kind");
}

WeightedFrame tail_frame(const ExperimentConfig& c) {
    const auto n = static_cast<Eigen::Index>(c.first_n());
    const auto d = static_cast<Eigen::Index>(*c.d);
    Rng rng(fixture_seed(c.base_seed));
    CMatrix g(n, d);
    for (Eigen::Index j = 0; j < d; ++j)
        for (Eigen::Index i = 0; i < n; ++i) g(i, j) = rng.normal();
    const CMatrix q = g.householderQr().householderQ() * CMatrix::Identity(n, d);
    return WeightedFrame(q, std::vector<double>(static_cast<std::size_t>(d), 1.0));
}

Outcome run_tail(const ExperimentConfig& c) {
    const std::int64_t n = c.first_n();
    const DistSpec& dist = c.distribution();
    const bool quadratic = c.statistic == StatisticKind::quadratic;
    std::optional<CMatrix> a;
    if (quadratic) a = tail_matrix(c);
    const Statistic stat = quadratic ? Statistic(QuadraticStatistic{*a}) : Statistic(ProjectionStatistic{tail_frame(c)});
    const MatrixNorms norms = quadratic ? MatrixNorms::of(*a) : MatrixNorms{};

    std::vector<double> grid = c.t_grid;
    if (grid.empty()) {
        const double top = quadratic ? 5.0 * (*norms.frobenius * std::sqrt(log_n(n)) + *norms.spectral * log_n(n))
                                     : 10.0;
        for (int i = 0; i <= 20; ++i) grid.push_back(top * i / 20.0);
    }

    const auto trials = static_cast<std::size_t>(c.trial_count());
    const auto values = sample_statistic(stat, dist, trials, c.base_seed, c.workers);
    const EmpiricalTail tail = survival_from_samples(values, grid);

    std::vector<TailEnvelope> envs;
    for (auto kind : c.envelopes) {
        TailEnvelope env = TailEnvelope::make(kind);
        env.norms = norms;
        env.n = n;
        env.alpha = dist.alpha;
        if (c.envelope_K) env.K = *c.envelope_K;
        else if (kind == EnvelopeKind::projection || kind == EnvelopeKind::projection_tv) env.K = projection_lemma_K(dist);
        else env.K = std::isfinite(dist.bound()) ? dist.bound() : 1.0;
        // eps1 = 0 once K covers the support; otherwise truncation_stats needs K > 1
        if (kind == EnvelopeKind::vw2 && env.K < dist.bound())
            env.n_eps1 = static_cast<double>(n) * truncation_stats(dist, env.K).eps1;
        env.validate();
        envs.push_back(env);
    }

    std::ostringstream header;
    header << "t,survival,stderr,trials";
    for (auto k : c.envelopes) header << ",envelope_" << to_string(k);
    Csv csv({header.str()});
    std::vector<std::size_t> violations(envs.size(), 0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        std::ostringstream line;
        line.imbue(std::locale::classic());
        line << std::setprecision(17) << grid[i] << ',' << tail.survival[i] << ',' << tail.std_error[i] << ','
             << trials;
        for (std::size_t e = 0; e < envs.size(); ++e) {
            const double v = tail_envelope_eval(envs[e], grid[i]);
            line << ',' << v;
            if (tail.survival[i] > v) ++violations[e];
        }
        csv.row(line.str());
    }

    double mean_re = 0.0, mean_im = 0.0;
    for (const auto& v : values) {
        mean_re += v.real();
        mean_im += v.imag();
    }
    mean_re /= static_cast<double>(trials);
    mean_im /= static_cast<double>(trials);
    double var = 0.0;
    for (const auto& v : values) var += std::norm(v - Complex(mean_re, mean_im));
    var /= static_cast<double>(trials - 1);
    const double se = std::sqrt(var / static_cast<double>(trials));

    Outcome out;
    out.records = csv.str();
    json s;
    s["n"] = n;
    s["trials"] = trials;
    s["statistic"] = std::string(to_string(c.statistic));
    s["mean"] = mean_re;
    s["mean_imag"] = mean_im;
    s["variance"] = var;
    s["stderr_mean"] = se;
    json env_json = json::object();
    for (std::size_t e = 0; e < envs.size(); ++e)
        env_json[std::string(to_string(envs[e].kind))] = {{"K", envs[e].K}, {"C", envs[e].C},
                                                          {"Cprime", envs[e].Cprime}, {"violations", violations[e]}};
    s["envelopes"] = env_json;

    if (quadratic) {
        // X*AX - tr A is centred, so the mean of the deviation should be 0.
        const double F = *norms.frobenius, S = *norms.spectral;
        const double t_star = 4.0 * (F * std::sqrt(log_n(n)) + S * log_n(n));
        std::size_t above = 0;
        for (const auto& v : values)
            if (std::abs(v) >= t_star) ++above;
        const double surv_star = static_cast<double>(above) / static_cast<double>(trials);
        s["trace"] = a->trace().real();
        s["frobenius"] = F;
        s["spectral"] = S;
        s["gaussian_variance"] = 2.0 * F * F;
        s["t_star"] = t_star;
        s["survival_at_t_star"] = surv_star;
        if (std::abs(mean_re) > 3.0 * se) out.failures.push_back("mean of X*AX - tr A exceeds 3 stderr");
        if (surv_star >= 0.01) out.failures.push_back("survival at t* is not below 0.01");
        const bool symmetric = (*a - a->adjoint()).norm() == 0.0;
        if (dist.kind == DistKind::gaussian && symmetric && std::abs(var / (2.0 * F * F) - 1.0) > 0.05)
            out.failures.push_back("variance differs from 2|A|_F^2 by more than 5%");
    } else {
        s["d"] = *c.d;
        for (std::size_t e = 0; e < envs.size(); ++e)
            if (envs[e].kind == EnvelopeKind::projection_tv && violations[e] > 0)
                out.failures.push_back("survival exceeds the projection_tv envelope");
    }
    out.summary = std::move(s);
    return out;
}

// ---- localscan -------------------------------------------------------------

Outcome run_localscan(const ExperimentConfig& c) {
    const std::int64_t n = c.first_n();
    const Interval bulk((*c.bulk)[0], (*c.bulk)[1]);
    const auto est = threshold_scan(c.distribution(), n, c.scales, c.delta,
                                    static_cast<std::size_t>(c.trial_count()), bulk, c.base_seed, c.workers);
    Csv csv({"scale,trial,window_lo,window_hi,N_I,expected_mass,rel_dev"});
    for (const auto& r : est.rows)
        csv.row(r.scale, r.trial, r.window.lo, r.window.hi, r.window.count, r.window.expected, r.window.rel_dev);

    Outcome out;
    out.records = csv.str();
    const double viol = max_monotonicity_violation(est.max_rel_dev);
    json s;
    s["n"] = n;
    s["trials"] = c.trial_count();
    s["unit"] = est.unit;
    s["multiples"] = est.multiples;
    s["max_rel_dev"] = est.max_rel_dev;
    s["delta"] = est.delta;
    s["threshold_scale"] = est.threshold_scale ? json(*est.threshold_scale) : json(nullptr);
    s["threshold_multiple"] = est.threshold_multiple ? json(*est.threshold_multiple) : json(nullptr);
    s["monotonicity_violation"] = viol;
    out.summary = std::move(s);
    if (!est.threshold_scale) out.failures.push_back("no scanned scale meets delta");
    if (viol > 0.05) out.failures.push_back("deviation curve increases by more than 0.05");
    return out;
}

// ---- deloc -----------------------------------------------------------------

void deloc_row(Csv& csv, const DelocRecord& r) {
    csv.row(r.n, r.seed, r.index, r.lambda, to_string(r.region), r.inf_norm, r.scaled_bulk, r.scaled_edge);
}

Outcome run_deloc(const ExperimentConfig& c) {
    const auto trials = static_cast<std::size_t>(c.trial_count());
    const std::size_t cells = c.n.size() * trials;
    const DistSpec& dist = c.distribution();
    auto per_cell = parallel_map(cells, c.workers, [&](std::size_t cell) {
        const std::int64_t n = c.n[cell / trials];
        const std::uint64_t seed = derive_seed(c.base_seed, cell);
        const auto w = sample_wigner(dist, n, seed, true);
        return eigvec_inf_norms(eig_decompose(w), n, seed, c.eps);
    });
    std::vector<DelocRecord> all;
    Csv csv({"n,seed,index,lambda,region,inf_norm,scaled_bulk,scaled_edge"});
    for (const auto& recs : per_cell)
        for (const auto& r : recs) {
            deloc_row(csv, r);
            all.push_back(r);
        }

    Outcome out;
    out.records = csv.str();
    json s;
    s["trials"] = trials;
    s["eps"] = c.eps;
    json rows = json::array();
    DelocFit fit;
    bool have_fit = false;
    try {
        fit = deloc_scaling_fit(all);
        have_fit = true;
    } catch (const InsufficientDataError&) {
        // fewer than three n values: report the table without a slope
        std::map<std::int64_t, DelocFitRow> by_n;
        for (const auto& r : all) {
            auto& row = by_n[r.n];
            row.n = r.n;
            if (r.region == Region::bulk) {
                row.max_scaled_bulk = std::max(row.max_scaled_bulk, r.scaled_bulk);
                ++row.bulk_records;
            } else if (r.region == Region::edge) {
                row.max_scaled_edge = std::max(row.max_scaled_edge.value_or(0.0), r.scaled_edge);
                ++row.edge_records;
            }
        }
        for (auto& [_, row] : by_n) fit.rows.push_back(row);
    }
    for (const auto& row : fit.rows) {
        rows.push_back({{"n", row.n},
                        {"max_scaled_bulk", row.max_scaled_bulk},
                        {"max_scaled_edge", row.max_scaled_edge ? json(*row.max_scaled_edge) : json(nullptr)},
                        {"bulk_records", row.bulk_records},
                        {"edge_records", row.edge_records}});
        if (row.bulk_records > 0 && !(row.max_scaled_bulk >= 0.5 && row.max_scaled_bulk <= 4.0))
            out.failures.push_back("max bulk scaled norm outside [0.5, 4] at n = " + std::to_string(row.n));
        if (row.max_scaled_edge && *row.max_scaled_edge > 4.0)
            out.failures.push_back("edge scaled norm above 4 at n = " + std::to_string(row.n));
    }
    s["rows"] = rows;
    s["slope"] = have_fit ? json(fit.slope) : json(nullptr);
    if (have_fit && !(fit.slope >= 0.2 && fit.slope <= 0.8))
        out.failures.push_back("log-log slope outside [0.2, 0.8]");
    out.summary = std::move(s);
    return out;
}

// ---- identities ------------------------------------------------------------

struct IdentityRow {
    std::size_t instance = 0;
    std::string identity;
    Eigen::Index n = 0, p = 0, index = 0;
    double lhs = 0.0, lhs_im = 0.0, rhs = 0.0, rhs_im = 0.0;
    double rel_error = 0.0;
    double gap = HUGE_VAL;
    std::string status;
};

constexpr double kIdentityTol = 1e-8;
constexpr double kIdentityGap = 1e-6;

const std::vector<std::string>& identity_names() {
    static const std::vector<std::string> names{
        "eigvec_entry",        "eigvec_interlacing", "singular_entry_right", "singular_entry_left",
        "singular_interlacing_right", "singular_interlacing_left", "spectral_quadratic", "schur_wigner",
        "schur_covariance"};
    return names;
}

IdentityRow check_row(std::size_t inst, std::string name, Eigen::Index n, Eigen::Index p, Eigen::Index idx,
                      const IdentityCheck& chk) {
    IdentityRow r{inst, std::move(name), n, p, idx, chk.lhs, 0.0, chk.rhs, 0.0, chk.rel_error(), chk.collision_gap, ""};
    r.status = r.gap <= kIdentityGap ? "skipped" : (r.rel_error < kIdentityTol ? "pass" : "fail");
    return r;
}

IdentityRow complex_row(std::size_t inst, std::string name, Eigen::Index n, Eigen::Index p, Complex lhs,
                        Complex rhs) {
    IdentityRow r{inst, std::move(name), n, p, 0, lhs.real(), lhs.imag(), rhs.real(), rhs.imag(), 0.0, HUGE_VAL, ""};
    const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
    r.rel_error = std::abs(lhs - rhs) / scale;
    r.status = r.rel_error < kIdentityTol ? "pass" : "fail";
    return r;
}

template <class Fn>
void guarded(std::vector<IdentityRow>& rows, std::size_t inst, const std::string& name, Eigen::Index n,
             Eigen::Index p, Eigen::Index idx, Fn&& fn) {
    try {
        rows.push_back(check_row(inst, name, n, p, idx, fn()));
    } catch (const NearCollisionError& e) {
        IdentityRow r{inst, name, n, p, idx, NAN, 0.0, NAN, 0.0, NAN, e.gap(), "skipped"};
        rows.push_back(r);
    }
}

std::vector<IdentityRow> identity_instance(const ExperimentConfig& c, std::size_t inst) {
    const std::uint64_t seed = derive_seed(c.base_seed, inst);
    Rng rng(seed);
    const std::int64_t p_hi = std::min(c.p_range[1], c.n_range[1]);
    const auto p = static_cast<Eigen::Index>(c.p_range[0] + static_cast<std::int64_t>(
                                                 rng.next_u64() % static_cast<std::uint64_t>(p_hi - c.p_range[0] + 1)));
    const std::int64_t n_lo = std::max<std::int64_t>(c.n_range[0], p);
    const auto n = static_cast<Eigen::Index>(
        n_lo + static_cast<std::int64_t>(rng.next_u64() % static_cast<std::uint64_t>(c.n_range[1] - n_lo + 1)));
    const Complex z(-2.5 + 5.0 * rng.uniform(), 0.05 + 0.95 * rng.uniform());
    const DistSpec& dist = c.distribution();

    std::vector<IdentityRow> rows;
    const HermitianMatrix m = sample_wigner(dist, n, derive_seed(seed, 0), false);
    const HermitianMatrix w = m.scaled(1.0 / std::sqrt(static_cast<double>(n)));
    for (Eigen::Index i = 0; i < n; ++i) {
        guarded(rows, inst, "eigvec_entry", n, 0, i, [&] { return entry_identity(w, i); });
        guarded(rows, inst, "eigvec_interlacing", n, 0, i, [&] { return interlacing_identity(w, i); });
    }

    const RectMatrix r = sample_rect(dist, p, n, derive_seed(seed, 1));
    for (Eigen::Index i = 0; i < p; ++i) {
        guarded(rows, inst, "singular_entry_right", n, p, i, [&] { return singular_entry_identity(r, i, Side::right); });
        guarded(rows, inst, "singular_entry_left", n, p, i, [&] { return singular_entry_identity(r, i, Side::left); });
        guarded(rows, inst, "singular_interlacing_right", n, p, i,
                [&] { return singular_interlacing_identity(r, i, Side::right); });
        guarded(rows, inst, "singular_interlacing_left", n, p, i,
                [&] { return singular_interlacing_identity(r, i, Side::left); });
    }

    {
        // PSD A = R*R/n and an independent X.
        const HermitianMatrix a = form_covariance(r);
        const RandomVector x = sample_vector(dist, n, derive_seed(seed, 2));
        const double direct = quadratic_deviation(x, a.dense()).real();
        const double spectral = spectral_quadratic_deviation(x, a);
        IdentityCheck chk;
        chk.lhs = direct;
        chk.rhs = spectral;
        chk.collision_gap = HUGE_VAL;
        chk.scale = std::max({std::abs(direct), std::abs(spectral), std::abs(a.dense().trace())});
        rows.push_back(check_row(inst, "spectral_quadratic", n, p, 0, chk));
    }

    {
        Complex sum = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
            const auto t = schur_terms(m, z, k);
            sum += 1.0 / (t.diag - z - t.Yk);
        }
        sum /= static_cast<double>(n);
        rows.push_back(complex_row(inst, "schur_wigner", n, 0, sum, stieltjes_empirical(eigvalsh(w), z)));
    }
    {
        Complex sum = 0.0;
        for (Eigen::Index k = 0; k < p; ++k) {
            const auto t = covariance_schur_terms(r, z, k);
            sum += 1.0 / (t.xi_kk - z - t.Yk);
        }
        sum /= static_cast<double>(p);
        rows.push_back(complex_row(inst, "schur_covariance", n, p, sum,
                                   stieltjes_empirical(covariance_eigenvalues(r), z)));
    }
    return rows;
}

Outcome run_identities(const ExperimentConfig& c) {
    const auto count = static_cast<std::size_t>(c.trial_count());
    auto per = parallel_map(count, c.workers, [&](std::size_t i) { return identity_instance(c, i); });
    Csv csv({"instance,identity,n,p,index,lhs,lhs_im,rhs,rhs_im,rel_error,gap,status"});
    struct Tally {
        std::size_t checked = 0, skipped = 0, failed = 0;
        double max_rel_error = 0.0;
    };
    std::map<std::string, Tally> tally;
    for (const auto& name : identity_names()) tally[name];
    for (const auto& rows : per)
        for (const auto& r : rows) {
            csv.row(r.instance, r.identity, r.n, r.p, r.index, r.lhs, r.lhs_im, r.rhs, r.rhs_im, r.rel_error, r.gap,
                    r.status);
            auto& t = tally[r.identity];
            if (r.status == "skipped") {
                ++t.skipped;
                continue;
            }
            ++t.checked;
            if (r.status == "fail") ++t.failed;
            t.max_rel_error = std::max(t.max_rel_error, r.rel_error);
        }

    Outcome out;
    out.records = csv.str();
    json s;
    s["instances"] = count;
    s["tolerance"] = kIdentityTol;
    s["min_gap"] = kIdentityGap;
    std::size_t failures = 0;
    json per_id = json::object();
    for (const auto& [name, t] : tally) {
        per_id[name] = {{"checked", t.checked}, {"skipped", t.skipped}, {"failed", t.failed},
                        {"max_rel_error", t.max_rel_error}};
        failures += t.failed;
        if (t.failed > 0) out.failures.push_back(name + ": " + std::to_string(t.failed) + " failures");
        if (t.checked == 0) out.failures.push_back(name + ": nothing checked");
    }
    s["identities"] = per_id;
    s["failures"] = failures;
    out.summary = std::move(s);
    return out;
}

// ---- covariance ------------------------------------------------------------

struct CovTrial {
    double ks = 0.0;
    double self_consistency = 0.0;
    std::vector<LawDeviation> devs;
    std::vector<DelocRecord> records;
};

Outcome run_covariance(const ExperimentConfig& c) {
    const std::int64_t n = c.first_n();
    const std::int64_t p = *c.p;
    const double y = static_cast<double>(p) / static_cast<double>(n);
    const Density mp = Density::marchenko_pastur(y);
    const Interval bulk((*c.bulk)[0], (*c.bulk)[1]);
    const double unit = log_n(n) / static_cast<double>(n);
    const double eta = c.eta_multiple * unit;
    const auto trials = static_cast<std::size_t>(c.trial_count());
    const DistSpec& dist = c.distribution();

    auto per = parallel_map(trials, c.workers, [&](std::size_t t) {
        const std::uint64_t seed = derive_seed(c.base_seed, t);
        const RectMatrix m = sample_rect(dist, p, n, seed);
        CovTrial out;
        const auto eigs = covariance_eigenvalues(m);
        out.ks = ks_distance(eigs, mp);
        for (double s : c.scales) out.devs.push_back(law_deviation(eigs, mp, s * unit, bulk, c.stride_frac));
        constexpr int grid = 50;
        for (int g = 0; g < grid; ++g) {
            const double x = bulk.lo + bulk.length() * (g + 0.5) / grid;
            out.self_consistency = std::max(out.self_consistency, mp_self_consistency_residual(eigs, {x, eta}, y));
        }
        out.records = singular_vec_inf_norms(m, c.eps, seed);
        return out;
    });

    Csv csv({"n,seed,index,lambda,region,inf_norm,scaled_bulk,scaled_edge,side,scaled_bulk_dim"});
    Csv scan({"scale,trial,window_lo,window_hi,N_I,expected_mass,rel_dev,y"});
    std::vector<double> max_rel(c.scales.size(), 0.0);
    json ks = json::array(), sc = json::array();
    double right_bulk = 0.0, left_bulk = 0.0, left_bulk_dim = 0.0;
    std::size_t right_count = 0, left_count = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        const auto& tr = per[t];
        ks.push_back(tr.ks);
        sc.push_back(tr.self_consistency);
        for (std::size_t s = 0; s < c.scales.size(); ++s) {
            max_rel[s] = std::max(max_rel[s], tr.devs[s].max_rel_dev);
            for (const auto& w : tr.devs[s].windows)
                scan.row(c.scales[s] * unit, t, w.lo, w.hi, w.count, w.expected, w.rel_dev, y);
        }
        for (const auto& r : tr.records) {
            csv.row(r.n, r.seed, r.index, r.lambda, to_string(r.region), r.inf_norm, r.scaled_bulk, r.scaled_edge,
                    to_string(*r.side), r.scaled_bulk_dim);
            if (r.region != Region::bulk) continue;
            if (*r.side == Side::right) {
                right_bulk = std::max(right_bulk, r.scaled_bulk);
                ++right_count;
            } else {
                left_bulk = std::max(left_bulk, r.scaled_bulk);
                left_bulk_dim = std::max(left_bulk_dim, r.scaled_bulk_dim);
                ++left_count;
            }
        }
    }

    Outcome out;
    out.records = csv.str();
    out.extra.emplace_back("scan.csv", scan.str());
    json s;
    s["n"] = n;
    s["p"] = p;
    s["y"] = y;
    s["trials"] = trials;
    s["ks"] = ks;
    s["eta"] = eta;
    s["self_consistency"] = sc;
    s["unit"] = unit;
    s["multiples"] = c.scales;
    s["max_rel_dev"] = max_rel;
    std::optional<double> threshold;
    for (std::size_t i = 0; i < c.scales.size(); ++i)
        if (max_rel[i] <= c.delta) {
            threshold = c.scales[i];
            break;
        }
    s["delta"] = c.delta;
    s["threshold_multiple"] = threshold ? json(*threshold) : json(nullptr);
    s["right_bulk_max_scaled"] = right_bulk;
    s["left_bulk_max_scaled"] = left_bulk;
    s["left_bulk_max_scaled_dim"] = left_bulk_dim;
    s["bulk_records"] = {{"right", right_count}, {"left", left_count}};
    out.summary = std::move(s);

    for (std::size_t t = 0; t < trials; ++t) {
        if (!(per[t].ks < 0.05)) out.failures.push_back("KS distance >= 0.05 in trial " + std::to_string(t));
        if (!(per[t].self_consistency < 0.1))
            out.failures.push_back("MP self-consistency residual >= 0.1 in trial " + std::to_string(t));
    }
    for (std::size_t i = 0; i < c.scales.size(); ++i)
        if (c.scales[i] == 20.0 && max_rel[i] > 0.25)
            out.failures.push_back("MP local deviation above 0.25 at scale 20 log n / n");
    if (right_count > 0 && !(right_bulk >= 0.5 && right_bulk <= 4.0))
        out.failures.push_back("right singular vectors: max bulk scaled norm outside [0.5, 4]");
    if (left_count > 0 && !(left_bulk_dim >= 0.5 && left_bulk_dim <= 4.0))
        out.failures.push_back("left singular vectors: max bulk sqrt(p)-scaled norm outside [0.5, 4]");
    return out;
}

// ---- pv --------------------------------------------------------------------

Outcome run_pv(const ExperimentConfig& c) {
    struct Point {
        std::string density;
        double y;
        double lambda;
    };
    std::vector<Point> pts;
    for (int i = 0; i <= 24; ++i) pts.push_back({"semicircle", 0.0, -3.0 + 0.25 * i});
    for (double y : c.y) {
        const auto [a, b] = mp_edges(y);
        for (int i = 0; i <= 40; ++i) pts.push_back({"mp", y, a - 0.5 + (b - a + 1.0) * i / 40.0});
        pts.push_back({"mp", y, a});
        pts.push_back({"mp", y, b});
    }
    const auto values = parallel_map(pts.size(), c.workers, [&](std::size_t i) {
        const auto& pt = pts[i];
        return pt.density == "semicircle" ? pv_semicircle(pt.lambda) : pv_mp(pt.lambda, pt.y, c.excision);
    });

    Csv csv({"density,y,lambda,pv"});
    for (std::size_t i = 0; i < pts.size(); ++i) csv.row(pts[i].density, pts[i].y, pts[i].lambda, values[i]);

    Outcome out;
    out.records = csv.str();
    json edges = json::array();
    for (double y : c.y) {
        const auto [a, b] = mp_edges(y);
        const double at_a = pv_mp(a, y, c.excision);
        const double at_b = pv_mp(b, y, c.excision);
        edges.push_back({{"y", y}, {"a", a}, {"b", b}, {"pv_at_a", at_a}, {"pv_at_b", at_b}, {"sqrt_y", std::sqrt(y)}});
        if (a > 0.0 && std::abs(at_a - std::sqrt(y)) > 0.05)
            out.failures.push_back("pv at the left edge differs from sqrt(y) for y = " + std::to_string(y));
        if (std::abs(at_b + std::sqrt(y)) > 0.05)
            out.failures.push_back("pv at the right edge differs from -sqrt(y) for y = " + std::to_string(y));
    }
    out.summary = {{"excision", c.excision}, {"edges", edges}};
    return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw ExperimentError("cannot open " + path.string() + " for writing");
    f << content;
    if (!f.flush()) throw ExperimentError("write failed for " + path.string());
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& raw, bool write) {
    const ExperimentConfig cfg = raw.with_defaults();
    cfg.validate();

    ExperimentReport rep;
    rep.config = cfg;
    const std::string hash = config_hash(cfg);
    rep.version = std::string(kVersion) + "+" + hash;
    rep.dir = std::filesystem::path(cfg.out_dir) / std::string(to_string(cfg.experiment)) /
              (cfg.label.empty() ? hash : cfg.label);
    if (write) {
        std::error_code ec;
        std::filesystem::create_directories(rep.dir, ec);
        if (ec) throw ExperimentError("cannot create " + rep.dir.string() + ": " + ec.message());
        std::filesystem::remove(rep.dir / "PARTIAL", ec);
    }

    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
        switch (cfg.experiment) {
            case ExperimentKind::tail: out = run_tail(cfg); break;
            case ExperimentKind::localscan: out = run_localscan(cfg); break;
            case ExperimentKind::deloc: out = run_deloc(cfg); break;
            case ExperimentKind::identities: out = run_identities(cfg); break;
            case ExperimentKind::covariance: out = run_covariance(cfg); break;
            case ExperimentKind::pv: out = run_pv(cfg); break;
        }
    } catch (const std::exception& e) {
        if (write) {
            std::ofstream f(rep.dir / "PARTIAL", std::ios::trunc);
            f << "experiment aborted: " << e.what() << '\n';
        }
        throw;
    }
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    rep.records_csv = std::move(out.records);
    rep.extra_csv = std::move(out.extra);
    rep.assertion_failures = std::move(out.failures);
    rep.summary = std::move(out.summary);
    rep.summary["experiment"] = std::string(to_string(cfg.experiment));
    rep.summary["version"] = rep.version;
    rep.summary["config"] = to_json(cfg);
    rep.summary["wall_seconds"] = rep.wall_seconds;
    rep.summary["assertion_failures"] = rep.assertion_failures;

    if (write) {
        write_file(rep.dir / "records.csv", rep.records_csv);
        for (const auto& [name, content] : rep.extra_csv) write_file(rep.dir / name, content);
        write_file(rep.dir / "config.json", serialize_config(cfg));
        write_file(rep.dir / "summary.json", rep.summary.dump(2) + "\n");
    }
    return rep;
}

}  // namespace rmtlab
