#pragma once

// JSON documents: an envelope {"format_version": "1", "kind": ..., "payload": ...}
// around one value. Output is canonical: sorted keys, tables as flat integer
// arrays (row-major, last axis fastest) and reals with 17 significant digits.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "hopf/core.hpp"
#include "hopf/search.hpp"

namespace hopf {

inline constexpr std::string_view kFormatVersion = "1";

/// Discounted reward attached to a simulated trajectory.
struct DiscountSummary {
  double gamma = 0.0;
  double value = 0.0;
  bool exact = true;
  std::optional<double> error_bound;  // truncated sums only
  std::size_t steps = 0;              // truncated sums only
  bool operator==(const DiscountSummary&) const = default;
};

struct TrajectoryRecord {
  Trajectory trajectory;
  std::optional<DiscountSummary> discounted;
  bool operator==(const TrajectoryRecord&) const = default;
};

using Payload = std::variant<DetPomdp, DecPomdp, Agent, ProcessFunction1, ProcessFunctionN,
                             SearchReport, TrajectoryRecord>;

struct Document {
  Payload payload;
  /// One of pomdp, dec_pomdp, agent, process_function_1, process_function_n,
  /// search_report, trajectory.
  std::string_view kind() const;
};

/// Canonical text, newline terminated.
std::string dump_document(const Document& doc);

/// Parses and eagerly validates. `source` prefixes error messages. Stored
/// "valid"/"invalid" statuses are re-checked.
Document parse_document(std::string_view text, std::string_view source = "<input>");

Document load(const std::filesystem::path& path);
void save(const Document& doc, const std::filesystem::path& path);

/// One header line plus one line per reported strategy (general, ordered).
std::string report_csv(const SearchReport& report);

}  // namespace hopf
