#include "sdkit/dataset_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <vector>

namespace sdkit {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

double parse_real(const std::string& cell, std::size_t line, const std::string& column) {
  double v = 0.0;
  const char* end = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (cell.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw DatasetFormatError("line " + std::to_string(line) + ": column '" + column +
                                 "': not a finite number: '" + cell + "'",
                             line);
  }
  return v;
}

long parse_int(const std::string& cell, std::size_t line, const std::string& column) {
  long v = 0;
  const char* end = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (cell.empty() || ec != std::errc() || ptr != end) {
    throw DatasetFormatError("line " + std::to_string(line) + ": column '" + column +
                                 "': not an integer: '" + cell + "'",
                             line);
  }
  return v;
}

}  // namespace

LabeledDataset read_dataset_csv(std::istream& in, const std::string& name, const CsvReadOptions& options) {
  std::string line;
  std::size_t lineno = 0;
  // Skip leading blank lines; an entirely empty file is an empty dataset.
  while (std::getline(in, line)) {
    ++lineno;
    if (!trim(line).empty()) break;
  }
  if (trim(line).empty()) return LabeledDataset(name, {}, {}, 0);

  const auto header = split(line);
  const bool has_id = !header.empty() && header.front() == "id";
  const bool has_label = !header.empty() && header.back() == "label";
  if (!has_label && options.require_label_column) {
    throw DatasetFormatError("line 1: missing 'label' column (must be the last header cell)", 1);
  }
  const std::size_t first_feature = has_id ? 1 : 0;
  const std::size_t end_feature = header.size() - (has_label ? 1 : 0);
  if (end_feature <= first_feature) {
    throw DatasetFormatError("line 1: header declares no feature columns", 1);
  }
  for (std::size_t c = first_feature; c < end_feature; ++c) {
    if (header[c].empty()) throw DatasetFormatError("line 1: empty feature column name", 1);
  }

  std::vector<Point> points;
  std::vector<ClassLabel> labels;
  int n_classes = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) {
      throw DatasetFormatError("line " + std::to_string(lineno) + ": expected " +
                                   std::to_string(header.size()) + " cells, found " +
                                   std::to_string(cells.size()),
                               lineno);
    }
    std::optional<PointId> id = static_cast<PointId>(points.size());
    if (has_id) {
      const long v = parse_int(cells[0], lineno, "id");
      if (v < 0 || v > std::numeric_limits<PointId>::max()) {
        throw DatasetFormatError("line " + std::to_string(lineno) + ": id out of range", lineno);
      }
      id = static_cast<PointId>(v);
    }
    std::vector<double> coords;
    for (std::size_t c = first_feature; c < end_feature; ++c) {
      coords.push_back(parse_real(cells[c], lineno, header[c]));
    }
    ClassLabel label = 0;
    if (has_label && !cells.back().empty()) {
      const long v = parse_int(cells.back(), lineno, "label");
      if (v < 1 || v > 1'000'000) {
        throw DatasetFormatError("line " + std::to_string(lineno) + ": label must be an integer >= 1",
                                 lineno);
      }
      label = static_cast<ClassLabel>(v);
      n_classes = std::max(n_classes, label);
    } else if (options.require_labels) {
      throw DatasetFormatError("line " + std::to_string(lineno) + ": missing label", lineno);
    }
    points.emplace_back(std::move(coords), id);
    labels.push_back(label);
  }
  return LabeledDataset(name, std::move(points), std::move(labels), n_classes);
}

LabeledDataset read_dataset_csv(const std::filesystem::path& path, const CsvReadOptions& options) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path.string());
  return read_dataset_csv(in, path.stem().string(), options);
}

void write_dataset_csv(std::ostream& out, const LabeledDataset& ds) {
  out << "id";
  for (std::size_t a = 0; a < ds.dimension(); ++a) out << ",x" << a;
  out << ",label\n";
  std::ostringstream row;
  row << std::setprecision(17);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const Point& p = ds.points()[i];
    row.str({});
    row << (p.id() ? *p.id() : static_cast<PointId>(i));
    for (double x : p.coords()) row << ',' << x;
    row << ',';
    if (ds.labels()[i] > 0) row << ds.labels()[i];
    out << row.str() << '\n';
  }
}

}  // namespace sdkit
