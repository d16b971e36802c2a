#include "causalts/csv.hpp"

#include "causalts/error.hpp"
#include "causalts/prep.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace causalts {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::string cell_ref(std::size_t data_row, const std::string& column) {
  // Data row 0 sits on file line 2, below the header.
  return "row " + std::to_string(data_row + 2) + ", column '" + column + "'";
}

std::optional<double> parse_number(const std::string& s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) return std::nullopt;
  return v;
}

// Days since 1970-01-01 of an ISO date YYYY-MM-DD (proleptic Gregorian).
std::optional<long> parse_iso_date(const std::string& s) {
  int y = 0;
  unsigned m = 0;
  unsigned d = 0;
  char tail = 0;
  if (s.size() != 10 || std::sscanf(s.c_str(), "%4d-%2u-%2u%c", &y, &m, &d, &tail) != 3) {
    return std::nullopt;
  }
  if (m < 1 || m > 12 || d < 1 || d > 31) return std::nullopt;
  y -= m <= 2 ? 1 : 0;
  const long era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<long>(doe) - 719468;
}

}  // namespace

CsvTable parse_csv(const std::string& text_in) {
  std::string text = text_in;
  if (text.rfind("\xEF\xBB\xBF", 0) == 0) text.erase(0, 3);

  std::vector<std::vector<std::string>> records;
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      fields.push_back(trim(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        fields.push_back(trim(field));
        records.push_back(std::move(fields));
      }
      fields.clear();
      field.clear();
      any = false;
    } else {
      field += c;
    }
  }
  if (quoted) throw InputError("unterminated quoted field in CSV");
  if (any || !field.empty()) {
    fields.push_back(trim(field));
    records.push_back(std::move(fields));
  }
  if (records.empty()) throw InputError("CSV file is empty");

  CsvTable table;
  table.header = std::move(records.front());
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != table.header.size()) {
      throw InputError("row " + std::to_string(r + 1) + " has " +
                       std::to_string(records[r].size()) + " fields, header has " +
                       std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(records[r]));
  }
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read CSV file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str());
}

Eigen::MatrixXd IngestedData::exog_values() const {
  return exog ? exog->values() : Eigen::MatrixXd(endog.rows(), 0);
}

IngestedData ingest_csv(const CsvTable& table, const AnalysisConfig& config) {
  const auto column_of = [&](const std::string& name) {
    for (std::size_t j = 0; j < table.header.size(); ++j) {
      if (table.header[j] == name) return j;
    }
    throw InputError("column '" + name + "' not found in the CSV header");
  };
  const std::size_t rows = table.rows.size();
  if (rows == 0) throw InputError("CSV file has a header but no data rows");

  long t0 = 1;
  if (!config.time_column.empty()) {
    const std::size_t tc = column_of(config.time_column);
    std::vector<long> stamps(rows);
    bool dates = false;
    for (std::size_t r = 0; r < rows; ++r) {
      const std::string& cell = table.rows[r][tc];
      if (cell.empty()) {
        throw InputError(cell_ref(r, config.time_column) + ": missing time index");
      }
      if (r == 0) dates = parse_iso_date(cell).has_value();
      std::optional<long> v;
      if (dates) {
        v = parse_iso_date(cell);
      } else {
        long iv = 0;
        const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), iv);
        if (ec == std::errc() && ptr == cell.data() + cell.size()) v = iv;
      }
      if (!v) {
        throw InputError(cell_ref(r, config.time_column) + ": time index '" + cell +
                         "' is neither an integer nor an ISO date");
      }
      stamps[r] = *v;
    }
    if (!dates) t0 = stamps[0];
    if (rows >= 2) {
      const long step = stamps[1] - stamps[0];
      for (std::size_t r = 1; r < rows; ++r) {
        const long diff = stamps[r] - stamps[r - 1];
        if (diff == 0) {
          throw InputError(cell_ref(r, config.time_column) + ": duplicated time index '" +
                           table.rows[r][tc] + "'");
        }
        if (diff < 0) {
          throw InputError(cell_ref(r, config.time_column) +
                           ": time index is not strictly increasing");
        }
        if (diff != step) {
          throw InputError(cell_ref(r, config.time_column) + ": gap in the time index (step " +
                           std::to_string(diff) + " where " + std::to_string(step) +
                           " was expected)");
        }
      }
    }
  }

  const auto extract = [&](const std::vector<std::string>& names) {
    Eigen::MatrixXd values(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(names.size()));
    for (std::size_t j = 0; j < names.size(); ++j) {
      const std::size_t c = column_of(names[j]);
      for (std::size_t r = 0; r < rows; ++r) {
        const std::string& cell = table.rows[r][c];
        if (cell.empty()) throw InputError(cell_ref(r, names[j]) + ": missing value");
        const auto v = parse_number(cell);
        if (!v) throw InputError(cell_ref(r, names[j]) + ": non-numeric value '" + cell + "'");
        values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = *v;
      }
    }
    TimeSeriesMatrix panel(std::move(values), names, t0, config.season_period);
    for (std::size_t j = 0; j < names.size(); ++j) {
      const auto it = config.transforms.find(names[j]);
      if (it == config.transforms.end()) continue;
      const int col = static_cast<int>(j);
      for (const TransformStep& step : it->second) {
        switch (step.kind) {
          case TransformStep::Kind::Log: panel = apply_log(panel, col); break;
          case TransformStep::Kind::Logit:
            panel = apply_logit(panel, col, step.lower, step.upper);
            break;
          case TransformStep::Kind::Deseasonalize:
            panel = apply_seasonal(panel, col, config.season_harmonics);
            break;
        }
      }
    }
    return panel;
  };

  IngestedData out{extract(config.endogenous), std::nullopt};
  if (config.standardize) out.endog = standardize(out.endog);
  if (!config.exogenous.empty()) out.exog = extract(config.exogenous);
  return out;
}

IngestedData ingest_csv(const std::filesystem::path& path, const AnalysisConfig& config) {
  return ingest_csv(read_csv(path), config);
}

std::string to_csv(const Eigen::MatrixXd& values, const std::vector<std::string>& names,
                   const std::string& time_column, long t0) {
  std::ostringstream os;
  os << time_column;
  for (const auto& n : names) os << ',' << n;
  os << '\n';
  char buf[32];
  for (Eigen::Index r = 0; r < values.rows(); ++r) {
    os << (t0 + r);
    for (Eigen::Index c = 0; c < values.cols(); ++c) {
      const auto res = std::to_chars(buf, buf + sizeof buf, values(r, c));
      os << ',' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf));
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace causalts
