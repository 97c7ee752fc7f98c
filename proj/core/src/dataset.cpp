#include "swad/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "swad/error.hpp"
#include "swad/random.hpp"

namespace swad {

namespace {

std::vector<std::string> default_names(std::size_t cols) {
  std::vector<std::string> names(cols);
  for (std::size_t j = 0; j < cols; ++j) names[j] = "c" + std::to_string(j);
  return names;
}

void append_double(std::string& out, double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  out.append(buf, res.ptr);
}

// Quotes a header field only when it would otherwise break the row.
void append_field(std::string& out, const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) {
    out += field;
    return;
  }
  out += '"';
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
}

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.emplace_back(line);
    if (end == text.size()) break;
    start = end + 1;
  }
  while (!lines.empty() && lines.back().find_first_not_of(" \t") == std::string::npos) {
    lines.pop_back();
  }
  return lines;
}

// RFC-4180 field splitting on a single physical line.
std::vector<std::string> split_fields(const std::string& line, std::size_t row) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current += c;
    }
  }
  if (quoted) throw ParseError("unterminated quoted field on row " + std::to_string(row), row, fields.size());
  fields.push_back(std::move(current));
  return fields;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

double parse_cell(std::string_view raw, std::size_t row, std::size_t col) {
  std::string_view cell = trim(raw);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (cell.empty() || res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
    throw ParseError("non-numeric cell '" + std::string(raw) + "' at row " + std::to_string(row) +
                         ", column " + std::to_string(col),
                     row, col);
  }
  if (!std::isfinite(value)) {
    throw NonFiniteCell("non-finite value '" + std::string(raw) + "' at row " + std::to_string(row) +
                            ", column " + std::to_string(col),
                        row, col);
  }
  return value;
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.close();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace

Dataset::Dataset(std::vector<double> values, std::size_t cols, std::vector<std::string> column_names,
                 std::vector<std::uint64_t> row_ids)
    : values_(std::move(values)),
      cols_(cols),
      column_names_(std::move(column_names)),
      row_ids_(std::move(row_ids)) {
  if (cols_ == 0) throw InvalidArgument("Dataset: need at least one column");
  if (values_.empty() || values_.size() % cols_ != 0) {
    throw InvalidArgument("Dataset: need at least one row and a rectangular matrix");
  }
  const std::size_t n = values_.size() / cols_;
  if (column_names_.empty()) column_names_ = default_names(cols_);
  if (column_names_.size() != cols_) throw InvalidArgument("Dataset: column name count mismatch");
  if (row_ids_.empty()) {
    row_ids_.resize(n);
    for (std::size_t i = 0; i < n; ++i) row_ids_[i] = i;
  }
  if (row_ids_.size() != n) throw InvalidArgument("Dataset: row id count mismatch");
  std::set<std::uint64_t> seen(row_ids_.begin(), row_ids_.end());
  if (seen.size() != n) throw InvalidArgument("Dataset: row ids must be unique");
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!std::isfinite(values_[k])) {
      throw NumericError("Dataset: non-finite value at row " + std::to_string(k / cols_) + ", column " +
                             std::to_string(k % cols_),
                         k / cols_, k % cols_);
    }
  }
}

Dataset Dataset::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw InvalidArgument("Dataset: no rows");
  const std::size_t cols = rows.front().size();
  std::vector<double> values;
  values.reserve(rows.size() * cols);
  for (const auto& r : rows) {
    if (r.size() != cols) throw InvalidArgument("Dataset: ragged rows");
    values.insert(values.end(), r.begin(), r.end());
  }
  return Dataset(std::move(values), cols);
}

Dataset Dataset::select_rows(std::span<const std::size_t> rows) const {
  std::vector<double> values;
  values.reserve(rows.size() * cols_);
  std::vector<std::uint64_t> ids;
  ids.reserve(rows.size());
  for (std::size_t r : rows) {
    if (r >= this->rows()) throw InvalidArgument("Dataset::select_rows: row out of range");
    const auto src = row(r);
    values.insert(values.end(), src.begin(), src.end());
    ids.push_back(row_ids_[r]);
  }
  return Dataset(std::move(values), cols_, column_names_, std::move(ids));
}

std::pair<Dataset, std::vector<double>> Dataset::split_column(std::string_view name) const {
  const auto it = std::find(column_names_.begin(), column_names_.end(), name);
  if (it == column_names_.end()) throw InvalidArgument("no column named '" + std::string(name) + "'");
  if (cols_ == 1) throw InvalidArgument("cannot remove the only column");
  const auto drop = static_cast<std::size_t>(it - column_names_.begin());
  std::vector<double> values;
  values.reserve(rows() * (cols_ - 1));
  std::vector<double> column(rows());
  for (std::size_t i = 0; i < rows(); ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      if (j == drop) {
        column[i] = at(i, j);
      } else {
        values.push_back(at(i, j));
      }
    }
  }
  std::vector<std::string> names = column_names_;
  names.erase(names.begin() + static_cast<std::ptrdiff_t>(drop));
  return {Dataset(std::move(values), cols_ - 1, std::move(names), row_ids_), std::move(column)};
}

EmpiricalDistribution Dataset::distribution() const {
  std::vector<std::size_t> sources(rows());
  for (std::size_t i = 0; i < rows(); ++i) sources[i] = i;
  return EmpiricalDistribution(values_, cols_, std::move(sources));
}

std::pair<Dataset, ScalingState> standardize(const Dataset& data) {
  const std::size_t n = data.rows();
  const std::size_t d = data.cols();
  if (n < 2) throw InvalidArgument("standardize: need at least two rows");
  ScalingState state{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0), std::vector<bool>(d, false)};
  for (std::size_t j = 0; j < d; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += data.at(i, j);
    const double mean = sum / static_cast<double>(n);
    double sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double c = data.at(i, j) - mean;
      sq += c * c;
    }
    state.mean[j] = mean;
    state.stddev[j] = std::sqrt(sq / static_cast<double>(n));
    state.constant[j] = state.stddev[j] < kConstantColumnTolerance;
  }
  std::vector<double> values(data.values().begin(), data.values().end());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      if (state.constant[j]) continue;
      auto& v = values[i * d + j];
      v = (v - state.mean[j]) / state.stddev[j];
    }
  }
  return {Dataset(std::move(values), d, data.column_names(), data.row_ids()), std::move(state)};
}

Dataset inverse_transform(const Dataset& data, const ScalingState& state) {
  const std::size_t d = data.cols();
  if (state.mean.size() != d || state.stddev.size() != d || state.constant.size() != d) {
    throw InvalidArgument("inverse_transform: scaling state does not match column count");
  }
  std::vector<double> values(data.values().begin(), data.values().end());
  for (std::size_t i = 0; i < data.rows(); ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      if (state.constant[j]) continue;
      auto& v = values[i * d + j];
      v = v * state.stddev[j] + state.mean[j];
    }
  }
  return Dataset(std::move(values), d, data.column_names(), data.row_ids());
}

std::string_view to_string(ComponentTag tag) {
  switch (tag) {
    case ComponentTag::Majority: return "majority";
    case ComponentTag::Minority: return "minority";
    case ComponentTag::Outlier: return "outlier";
  }
  return "unknown";
}

MixtureSpec default_mixture_spec(std::uint64_t seed) {
  MixtureSpec spec;
  spec.seed = seed;
  spec.components = {
      {100, {0.0, 0.0}, {1.0, 1.0}, ComponentTag::Majority},
      {20, {4.0, 4.0}, {0.5, 0.5}, ComponentTag::Minority},
      {5, {12.0, -12.0}, {1.0, 1.0}, ComponentTag::Outlier},
  };
  return spec;
}

std::vector<bool> LabeledDataset::outlier_truth() const {
  std::vector<bool> truth(tags.size());
  for (std::size_t i = 0; i < tags.size(); ++i) truth[i] = tags[i] == ComponentTag::Outlier;
  return truth;
}

LabeledDataset generate_mixture(const MixtureSpec& spec) {
  if (spec.components.empty()) throw InvalidArgument("generate_mixture: no components");
  const std::size_t d = spec.components.front().mean.size();
  if (d == 0) throw InvalidArgument("generate_mixture: zero-dimensional mean");
  std::size_t total = 0;
  for (const auto& c : spec.components) {
    if (c.count == 0) throw InvalidArgument("generate_mixture: component count must be >= 1");
    if (c.mean.size() != d || c.variance.size() != d) {
      throw InvalidArgument("generate_mixture: inconsistent component dimensions");
    }
    for (double v : c.variance) {
      if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument("generate_mixture: variances must be > 0");
    }
    total += c.count;
  }

  Rng rng(spec.seed);
  std::vector<double> values;
  values.reserve(total * d);
  std::vector<ComponentTag> tags;
  tags.reserve(total);
  for (const auto& c : spec.components) {
    for (std::size_t k = 0; k < c.count; ++k) {
      for (std::size_t j = 0; j < d; ++j) values.push_back(c.mean[j] + std::sqrt(c.variance[j]) * rng.normal());
      tags.push_back(c.tag);
    }
  }

  std::vector<std::size_t> order(total);
  for (std::size_t i = 0; i < total; ++i) order[i] = i;
  for (std::size_t i = total; i > 1; --i) std::swap(order[i - 1], order[rng.uniform_index(i)]);

  std::vector<double> shuffled(total * d);
  std::vector<ComponentTag> shuffled_tags(total);
  for (std::size_t i = 0; i < total; ++i) {
    std::copy_n(values.begin() + static_cast<std::ptrdiff_t>(order[i] * d), d,
                shuffled.begin() + static_cast<std::ptrdiff_t>(i * d));
    shuffled_tags[i] = tags[order[i]];
  }
  std::vector<std::string> names(d);
  for (std::size_t j = 0; j < d; ++j) names[j] = "x" + std::to_string(j);
  return {Dataset(std::move(shuffled), d, std::move(names)), std::move(shuffled_tags)};
}

Dataset parse_csv(std::string_view text, bool has_header) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw ParseError("empty CSV input", 0, 0);

  std::vector<std::string> names;
  std::size_t first = 0;
  if (has_header) {
    for (auto& f : split_fields(lines[0], 0)) names.emplace_back(trim(f));
    first = 1;
    if (lines.size() == 1) throw ParseError("CSV has a header but no data rows", 0, 0);
  }

  std::vector<double> values;
  std::size_t cols = names.size();
  for (std::size_t li = first; li < lines.size(); ++li) {
    const std::size_t row = li - first;
    const auto fields = split_fields(lines[li], row);
    if (cols == 0) cols = fields.size();
    if (fields.size() != cols) {
      throw ParseError("row " + std::to_string(row) + " has " + std::to_string(fields.size()) +
                           " cells, expected " + std::to_string(cols),
                       row, std::min(fields.size(), cols));
    }
    for (std::size_t j = 0; j < cols; ++j) values.push_back(parse_cell(fields[j], row, j));
  }
  return Dataset(std::move(values), cols, std::move(names));
}

Dataset load_csv(const std::filesystem::path& path, bool has_header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), has_header);
}

std::string format_csv(const Dataset& data) {
  std::string out;
  for (std::size_t j = 0; j < data.cols(); ++j) {
    if (j) out += ',';
    append_field(out, data.column_names()[j]);
  }
  out += '\n';
  for (std::size_t i = 0; i < data.rows(); ++i) {
    for (std::size_t j = 0; j < data.cols(); ++j) {
      if (j) out += ',';
      append_double(out, data.at(i, j));
    }
    out += '\n';
  }
  return out;
}

void save_csv(const Dataset& data, const std::filesystem::path& path) { write_file(path, format_csv(data)); }

std::string format_report(const OutlierReport& report, const Dataset& data) {
  if (report.size() != data.rows() || report.is_outlier.size() != data.rows()) {
    throw InvalidArgument("save_report: report has " + std::to_string(report.size()) + " rows, dataset has " +
                          std::to_string(data.rows()));
  }
  std::string out = "row_id,vote_fraction,is_outlier";
  for (const auto& name : data.column_names()) {
    out += ',';
    append_field(out, name);
  }
  out += '\n';
  char buf[64];
  for (std::size_t i = 0; i < data.rows(); ++i) {
    out += std::to_string(data.row_ids()[i]);
    std::snprintf(buf, sizeof(buf), ",%.9f,%d", report.vote_fraction[i], report.is_outlier[i] ? 1 : 0);
    out += buf;
    for (std::size_t j = 0; j < data.cols(); ++j) {
      out += ',';
      append_double(out, data.at(i, j));
    }
    out += '\n';
  }
  return out;
}

void save_report(const OutlierReport& report, const Dataset& data, const std::filesystem::path& path) {
  write_file(path, format_report(report, data));
}

}  // namespace swad
