#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rmtlab/concentration.hpp"
#include "rmtlab/ensembles.hpp"

namespace rmtlab {

inline constexpr std::string_view kVersion = "0.1.0";

enum class ExperimentKind { tail, localscan, deloc, identities, covariance, pv };

std::string_view to_string(ExperimentKind kind);
/// Throws ConfigError for an unknown name.
ExperimentKind experiment_kind_from_string(std::string_view name);

enum class StatisticKind { quadratic, projection };
/// Matrix used by the quadratic statistic.
enum class MatrixKind {
    random_symmetric,  ///< symmetric with N(0, 1) entries, drawn from base_seed
    identity,
    gaussian,          ///< non-symmetric N(0, 1) entries
};

/// One experiment. Every field has a default except `experiment`; the
/// per-experiment defaults are filled in by `with_defaults`:
///
///   field        tail            localscan   deloc                 identities covariance  pv
///   dist         rademacher      rademacher  rademacher            gaussian   rademacher  -
///   n            50              2000        256,512,1024,2048     [3,16]     800         -
///   p            -               -           -                     [2,10]     n/2         -
///   trials       10000           5           5                     200        5           -
///   bulk         -               (-1.8,1.8)  -                     -          (a+.2,b-.2) -
///
/// Shared defaults: base_seed 1, delta 0.2, eps 0.1, eta_multiple 10,
/// scales {1,2,5,10,20,50}, stride_frac 0.25, workers 1, out_dir "runs",
/// y {0.25,0.5,1}, excision 0.01, statistic quadratic, matrix
/// random_symmetric, envelopes {hw,hkz} (projection_tv for the projection
/// statistic), projection dimension d = n/2. An empty t_grid is replaced by
/// 21 points spaced over [0, 5 (|A|_F sqrt(log n) + |A|_2 log n)] for the
/// quadratic statistic and [0, 10] for the projection one.
struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::identities;
    std::string label;
    std::optional<DistSpec> dist;
    std::vector<std::int64_t> n;      ///< one value, or the grid for deloc
    std::optional<std::int64_t> p;    ///< covariance only
    std::array<std::int64_t, 2> n_range{3, 16};  ///< identities
    std::array<std::int64_t, 2> p_range{2, 10};  ///< identities
    std::optional<std::int64_t> trials;
    std::uint64_t base_seed = 1;
    double delta = 0.2;
    double eps = 0.1;
    double eta_multiple = 10.0;
    std::vector<double> scales{1, 2, 5, 10, 20, 50};
    double stride_frac = 0.25;
    std::optional<std::array<double, 2>> bulk;
    std::vector<double> t_grid;
    std::vector<EnvelopeKind> envelopes;
    StatisticKind statistic = StatisticKind::quadratic;
    MatrixKind matrix = MatrixKind::random_symmetric;
    std::optional<std::int64_t> d;
    std::optional<double> envelope_K;
    std::vector<double> y{0.25, 0.5, 1.0};
    double excision = 1e-2;
    int workers = 1;
    std::string out_dir = "runs";

    bool operator==(const ExperimentConfig&) const = default;

    /// Copy with every experiment-dependent default resolved.
    ExperimentConfig with_defaults() const;

    /// Throws ConfigError naming the offending field.
    void validate() const;

    std::int64_t first_n() const { return n.at(0); }
    const DistSpec& distribution() const { return dist.value(); }
    std::int64_t trial_count() const { return trials.value(); }
};

/// Parse JSON text (comments allowed). Unknown keys, wrong types and invalid
/// values raise ConfigError; parse failures carry the line number. The result
/// has defaults filled in and is validated.
ExperimentConfig parse_config(std::string_view text);
/// JSON text (comments allowed) to a JSON value; ConfigError with the line
/// number on failure.
nlohmann::json parse_json_text(std::string_view text);
/// Same checks as parse_config, starting from a JSON value.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

nlohmann::json to_json(const ExperimentConfig& cfg);
/// Pretty-printed, stable key order.
std::string serialize_config(const ExperimentConfig& cfg);

/// FNV-1a over the serialized config with `workers` and `out_dir` removed,
/// as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

struct ExperimentReport {
    ExperimentConfig config;
    std::filesystem::path dir;      ///< out_dir/<experiment>/<label or hash>
    std::string version;            ///< "<semver>+<config hash>"
    nlohmann::json summary;
    std::string records_csv;
    /// Other CSVs written next to records.csv, as (file name, contents).
    std::vector<std::pair<std::string, std::string>> extra_csv;
    double wall_seconds = 0.0;
    /// Acceptance checks that did not hold (the CLI's --assert).
    std::vector<std::string> assertion_failures;
};

/// Runs the experiment, writes records.csv, summary.json and config.json
/// (plus scan.csv for covariance) and returns the report. On failure a PARTIAL
/// file describing the error is written to the run directory and the
/// exception is rethrown. With write = false nothing touches the disk.
ExperimentReport run_experiment(const ExperimentConfig& cfg, bool write = true);

}  // namespace rmtlab
