#include "curveflat/series.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>

#include "curveflat/error.hpp"

namespace curveflat {

namespace {

constexpr std::array<Column, 9> kColumns{Column::day_id,     Column::date,      Column::all_cases,
                                         Column::new_cases,  Column::new_deaths, Column::recovered,
                                         Column::icu,        Column::active_cases, Column::tests};

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

[[noreturn]] void fail(const std::string& message) { throw Error("series_core", message); }

Count parse_count(std::string_view field, std::size_t line_no, Column column) {
  Count value = 0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc() || ptr != end) {
    fail("malformed row " + std::to_string(line_no) + ": column " + canonical_name(column) +
         " is not an integer ('" + std::string(field) + "')");
  }
  if (value < 0 && column != Column::active_cases) {
    fail("negative count at row " + std::to_string(line_no) + " in column " + canonical_name(column));
  }
  return value;
}

Count& field_of(DailyRecord& r, Column c) {
  switch (c) {
    case Column::all_cases: return r.all_cases;
    case Column::new_cases: return r.new_cases;
    case Column::new_deaths: return r.new_deaths;
    case Column::recovered: return r.recovered;
    case Column::icu: return r.icu;
    case Column::active_cases: return r.active_cases_delta;
    case Column::tests: return r.tests;
    default: break;
  }
  fail("column has no count field");
}

Count field_of(const DailyRecord& r, Column c) { return field_of(const_cast<DailyRecord&>(r), c); }

}  // namespace

const char* canonical_name(Column c) noexcept {
  switch (c) {
    case Column::day_id: return "Day_ID";
    case Column::date: return "Date";
    case Column::all_cases: return "All_Cases";
    case Column::new_cases: return "New_Cases";
    case Column::new_deaths: return "New_Deaths";
    case Column::recovered: return "Recovered";
    case Column::icu: return "ICU";
    case Column::active_cases: return "Active_Cases";
    case Column::tests: return "Tests";
  }
  return "?";
}

std::optional<std::chrono::year_month_day> parse_iso_date(std::string_view text) {
  int y = 0;
  unsigned m = 0;
  unsigned d = 0;
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  auto num = [&](std::size_t pos, std::size_t len, auto& out) {
    const auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + len, out);
    return ec == std::errc() && ptr == text.data() + pos + len;
  };
  if (!num(0, 4, y) || !num(5, 2, m) || !num(8, 2, d)) return std::nullopt;
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!ymd.ok()) return std::nullopt;
  return ymd;
}

std::string format_iso_date(std::chrono::year_month_day date) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
  return buf;
}

std::vector<Count> ObservationSeries::cumulative() const {
  std::vector<Count> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.all_cases);
  return out;
}

std::vector<Count> ObservationSeries::increments() const {
  std::vector<Count> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.new_cases);
  return out;
}

std::vector<double> ObservationSeries::day_axis() const {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.day_id);
  return out;
}

ObservationSeries ObservationSeries::slice(int first, int last) const {
  ObservationSeries out{{}, label};
  for (const auto& r : records) {
    if (r.day_id >= first && r.day_id <= last) out.records.push_back(r);
  }
  return out;
}

ParsedSeries parse_csv(std::istream& in, const std::optional<HeaderMap>& header_map) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) break;
  }
  if (trim(line).empty()) fail("input is empty");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

  const auto header = split(line);
  std::map<Column, std::size_t> index;
  for (Column c : kColumns) {
    std::string wanted = canonical_name(c);
    if (header_map) {
      if (auto it = header_map->find(c); it != header_map->end()) wanted = it->second;
    }
    const std::string key = lower(wanted);
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (lower(header[i]) == key) {
        index[c] = i;
        break;
      }
    }
  }
  for (Column c : {Column::day_id, Column::all_cases}) {
    if (!index.contains(c)) fail(std::string("required column absent: ") + canonical_name(c));
  }

  ParsedSeries result;
  for (Column c : kColumns) {
    if (c == Column::day_id || c == Column::all_cases || index.contains(c)) continue;
    if (c == Column::new_cases) {
      result.report.new_cases_derived = true;
    } else {
      result.report.zero_filled.emplace_back(canonical_name(c));
    }
  }

  auto& records = result.series.records;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    if (fields.size() != header.size()) {
      fail("malformed row " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
           " fields, found " + std::to_string(fields.size()));
    }
    DailyRecord r;
    for (const auto& [column, pos] : index) {
      const auto field = fields[pos];
      if (column == Column::day_id) {
        const Count id = parse_count(field, line_no, column);
        r.day_id = static_cast<int>(id);
      } else if (column == Column::date) {
        if (field.empty()) continue;
        r.date = parse_iso_date(field);
        if (!r.date) fail("malformed row " + std::to_string(line_no) + ": bad date '" + std::string(field) + "'");
      } else {
        field_of(r, column) = parse_count(field, line_no, column);
      }
    }
    if (!records.empty() && r.day_id != records.back().day_id + 1) {
      if (r.day_id <= records.back().day_id) {
        fail("non-monotone Day_ID at row " + std::to_string(line_no) + ": " + std::to_string(r.day_id) +
             " follows " + std::to_string(records.back().day_id));
      }
      fail("Day_ID gap at row " + std::to_string(line_no) + ": " + std::to_string(records.back().day_id) + " -> " +
           std::to_string(r.day_id));
    }
    records.push_back(r);
  }
  if (records.empty()) fail("no data rows");

  if (result.report.new_cases_derived) {
    const auto inc = to_incremental(result.series.cumulative());
    for (std::size_t i = 0; i < records.size(); ++i) records[i].new_cases = inc[i];
  }
  return result;
}

ParsedSeries load_csv(const std::string& path, const std::optional<HeaderMap>& header_map) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open " + path);
  auto parsed = parse_csv(in, header_map);
  parsed.series.label = path;
  return parsed;
}

std::string write_csv(const ObservationSeries& series) {
  std::ostringstream out;
  for (std::size_t i = 0; i < kColumns.size(); ++i) out << (i ? "," : "") << canonical_name(kColumns[i]);
  out << '\n';
  for (const auto& r : series.records) {
    out << r.day_id << ',' << (r.date ? format_iso_date(*r.date) : std::string{}) << ',' << r.all_cases << ','
        << r.new_cases << ',' << r.new_deaths << ',' << r.recovered << ',' << r.icu << ',' << r.active_cases_delta
        << ',' << r.tests << '\n';
  }
  return out.str();
}

ValidationReport validate(const ObservationSeries& series) {
  if (series.empty()) fail("cannot validate an empty series");
  ValidationReport report;
  auto add = [&](int day, const char* rule, std::string message) {
    report.issues.push_back({day, rule, std::move(message)});
  };
  const auto& recs = series.records;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const auto& r = recs[i];
    for (Column c : {Column::all_cases, Column::new_cases, Column::new_deaths, Column::recovered, Column::icu,
                     Column::tests}) {
      if (field_of(r, c) < 0) {
        add(r.day_id, "non-negative", std::string(canonical_name(c)) + " is negative");
      }
    }
    if (i == 0) continue;
    const auto& prev = recs[i - 1];
    if (r.day_id != prev.day_id + 1) {
      add(r.day_id, "day sequence",
          "Day_ID " + std::to_string(r.day_id) + " does not follow " + std::to_string(prev.day_id));
    }
    if (r.all_cases < prev.all_cases) {
      add(r.day_id, "monotonicity",
          "cumulative count fell from " + std::to_string(prev.all_cases) + " to " + std::to_string(r.all_cases));
    }
    if (r.all_cases - prev.all_cases != r.new_cases) {
      add(r.day_id, "difference mismatch",
          "All_Cases step " + std::to_string(r.all_cases - prev.all_cases) + " != New_Cases " +
              std::to_string(r.new_cases));
    }
  }
  report.ok = report.issues.empty();
  return report;
}

std::vector<Count> to_incremental(std::span<const Count> cumulative) {
  std::vector<Count> out;
  out.reserve(cumulative.size());
  for (std::size_t i = 0; i < cumulative.size(); ++i) {
    if (i == 0) {
      out.push_back(cumulative[0]);
      continue;
    }
    if (cumulative[i] < cumulative[i - 1]) {
      fail("cumulative series decreases at index " + std::to_string(i));
    }
    out.push_back(cumulative[i] - cumulative[i - 1]);
  }
  return out;
}

std::vector<Count> to_cumulative(std::span<const Count> increments, Count first) {
  std::vector<Count> out;
  out.reserve(increments.size());
  for (std::size_t i = 0; i < increments.size(); ++i) {
    if (i == 0) {
      out.push_back(first);
      continue;
    }
    if (increments[i] < 0) fail("negative increment at index " + std::to_string(i));
    out.push_back(out.back() + increments[i]);
  }
  return out;
}

std::vector<Count> to_cumulative(std::span<const Count> increments) {
  if (increments.empty()) return {};
  return to_cumulative(increments, increments[0]);
}

}  // namespace curveflat
