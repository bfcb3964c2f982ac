#pragma once

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qcx/extensions.hpp"
#include "qcx/mapexpr.hpp"
#include "qcx/render.hpp"

namespace qcx {

inline constexpr int kReportSchema = 1;
inline constexpr const char* kToolVersion = "0.1.0";

/// Process exit codes.
enum ExitCode : int { kExitPass = 0, kExitFail = 1, kExitUsage = 2, kExitSingular = 3 };

/// Bad flags or parameter values; exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using ParamMap = std::map<std::string, double>;

/// Parameter names accepted by --param.
const std::vector<std::string>& known_params();

enum class Theorem { t1, t2, t3, t4, cor1, brown, t5, krzyz, convex, psi };

std::string_view theorem_id(Theorem t);
std::optional<Theorem> theorem_from_id(std::string_view id);

struct BuiltinExample {
  std::string id;
  std::string description;
  ParamMap defaults;
  /// Grammar text with the parameters substituted.
  std::function<std::string(const ParamMap&)> expression;
  Theorem theorem;
  std::optional<std::string> chain;
  /// Negative control: the default pipeline is expected to fail.
  bool negative = false;
};

const std::vector<BuiltinExample>& builtin_examples();
const BuiltinExample* find_builtin(std::string_view id);

/// Poles of f on |z| <= 1, located by Newton iteration on z/f from a
/// polar grid of seeds.
std::vector<Complex> poles_in_closed_disc(const MapExpr& f);

struct RunOptions {
  std::optional<std::string> map_text;
  std::optional<std::string> builtin;
  std::optional<std::string> theorem;
  std::optional<std::string> chain;
  ParamMap params;
  /// NRxNT; verify defaults to 400x400, chain to the ChainGrid mesh.
  std::optional<std::pair<int, int>> grid;
  double t_max = 5.0;
  bool timestamp = true;
};

/// The map a run acts on, after template substitution.
struct ResolvedMap {
  std::string text;
  MapExpr map;
  ParamMap params;
  const BuiltinExample* builtin = nullptr;
};

/// Throws UsageError for missing or conflicting map flags and unknown
/// parameter names; ParseError for malformed text.
ResolvedMap resolve_map(const RunOptions& opts);

/// Bound the theorem claims for this map and parameter set.
double claimed_bound(Theorem t, const MapExpr& map, const ParamMap& params);

/// Extension named by the theorem. Throws PreconditionError when the map
/// does not fit the theorem's shape.
ExtendedMap build_extension(Theorem t, const MapExpr& map, const ParamMap& params);

struct RunResult {
  nlohmann::json report;
  bool passed = false;
};

/// Class inequality, extension and dilatation checks.
RunResult run_verify(const RunOptions& opts);
/// Loewner chain checks.
RunResult run_chain(const RunOptions& opts);

/// Indented JSON with every real at 17 significant digits; non-finite
/// reals become null.
std::string dump_report(const nlohmann::json& report);

/// Human-readable summary of a report.
std::string report_text(const nlohmann::json& report);

/// Parses "NRxNT"; throws UsageError.
std::pair<int, int> parse_grid(std::string_view text);
/// Parses "name=value"; throws UsageError.
std::pair<std::string, double> parse_param(std::string_view text);

/// Exit code for an exception escaping a run.
int exit_code_for(const std::exception& e);

}  // namespace qcx
