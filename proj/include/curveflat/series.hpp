#pragma once

// Daily case series: CSV ingestion, invariant checks, and the
// cumulative <-> incremental transforms the rest of the library builds on.

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace curveflat {

using Count = std::int64_t;

struct DailyRecord {
  int day_id = 0;
  std::optional<std::chrono::year_month_day> date;
  Count all_cases = 0;
  Count new_cases = 0;
  Count new_deaths = 0;
  Count recovered = 0;
  Count icu = 0;
  Count active_cases_delta = 0;  // signed
  Count tests = 0;

  friend bool operator==(const DailyRecord&, const DailyRecord&) = default;
};

struct ObservationSeries {
  std::vector<DailyRecord> records;
  std::string label;

  std::size_t size() const noexcept { return records.size(); }
  bool empty() const noexcept { return records.empty(); }
  int first_day() const { return records.front().day_id; }
  int last_day() const { return records.back().day_id; }

  std::vector<Count> cumulative() const;
  std::vector<Count> increments() const;
  std::vector<double> day_axis() const;
  // Records with first <= day_id <= last, keeping the label.
  ObservationSeries slice(int first, int last) const;

  friend bool operator==(const ObservationSeries&, const ObservationSeries&) = default;
};

struct ValidationIssue {
  int day_id = 0;
  std::string rule;
  std::string message;

  friend bool operator==(const ValidationIssue&, const ValidationIssue&) = default;
};

struct ValidationReport {
  bool ok = true;
  std::vector<ValidationIssue> issues;

  friend bool operator==(const ValidationReport&, const ValidationReport&) = default;
};

// Canonical column names, matched case-insensitively.
enum class Column { day_id, date, all_cases, new_cases, new_deaths, recovered, icu, active_cases, tests };

const char* canonical_name(Column c) noexcept;

// Maps a canonical column to the header text used in a particular file.
using HeaderMap = std::map<Column, std::string>;

struct ParseReport {
  std::vector<std::string> zero_filled;  // canonical names of absent optional columns
  bool new_cases_derived = false;
};

struct ParsedSeries {
  ObservationSeries series;
  ParseReport report;
};

ParsedSeries parse_csv(std::istream& in, const std::optional<HeaderMap>& header_map = std::nullopt);
ParsedSeries load_csv(const std::string& path, const std::optional<HeaderMap>& header_map = std::nullopt);

// Writes every column in canonical order; parse_csv(write_csv(s)) == s.
std::string write_csv(const ObservationSeries& series);

ValidationReport validate(const ObservationSeries& series);

// [c0, c1 - c0, c2 - c1, ...]. Throws on a decreasing step.
std::vector<Count> to_incremental(std::span<const Count> cumulative);
// out[0] = first, out[i] = out[i-1] + increments[i]. Throws on a negative increment.
std::vector<Count> to_cumulative(std::span<const Count> increments, Count first);
std::vector<Count> to_cumulative(std::span<const Count> increments);

std::optional<std::chrono::year_month_day> parse_iso_date(std::string_view text);
std::string format_iso_date(std::chrono::year_month_day date);

}  // namespace curveflat
