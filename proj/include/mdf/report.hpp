#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mdf/allocations.hpp"
#include "mdf/game.hpp"
#include "mdf/stability.hpp"

namespace mdf {

enum class Format { Text, Csv, Json };

struct Column {
  std::string name;
  bool explicit_sign = false;  // text mode prints "+560.75"
  int decimals = 2;            // text mode only
  friend bool operator==(const Column&, const Column&) = default;
};

struct Row {
  std::string label;
  std::vector<std::optional<double>> cells;  // one per column after the label
  friend bool operator==(const Row&, const Row&) = default;
};

/// columns[0] names the label column.
struct ResultTable {
  std::string title;
  std::vector<Column> columns;
  std::vector<Row> rows;
  std::vector<std::string> notes;  // text mode only, printed under the table
};

/// Text: aligned columns joined by " | ", 2 decimals, "-" for empty cells.
/// CSV: header plus rows, %.17g, empty for missing. JSON: an object with title,
/// columns and rows ({label, values}, null for missing).
std::string emit_table(const ResultTable& table, Format format);

/// Reads the CSV produced by emit_table. Titles and notes are not carried.
ResultTable parse_csv_table(std::string_view csv);

/// Columns S, q_1..q_n, r(S), r(S)-C, v(S) in enumerate_coalitions order.
ResultTable solve_table(const MdfGame& game);

std::string solve_report(const MdfGame& game, Format format);
std::string allocate_report(const MdfGame& game, std::span<const AllocationRule> rules, Format format);

struct CheckOutcome {
  std::string document;
  bool pass = false;  // assumptions, shape, oracle and structure all hold
};
CheckOutcome check_report(const MdfGame& game, int samples, std::uint64_t seed, Format format);

std::string core_report(const MdfGame& game, std::span<const double> payoffs, std::string_view rule, Format format);
std::string sweep_report(const MdfGame& game, double from, double to, int steps, Format format);
/// Summary of a situation that loaded and validated, with shape diagnostics.
std::string situation_report(const MdfSituation& sit, Format format);

}  // namespace mdf
