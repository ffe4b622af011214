#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "sdkit/geometry.hpp"

namespace sdkit {

/// Malformed dataset file. `line()` is 1-based (the header is line 1), 0 when
/// the problem is not tied to a line.
class DatasetFormatError : public std::runtime_error {
 public:
  DatasetFormatError(const std::string& what, std::size_t line)
      : std::runtime_error(what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct CsvReadOptions {
  /// Reject files without a `label` column.
  bool require_label_column = true;
  /// Reject rows whose label cell is empty.
  bool require_labels = true;
};

/// Reads the dataset CSV: header row, optional leading `id` column, one column
/// per feature, trailing `label` column (integer >= 1, or empty for unlabeled).
/// Points without an `id` column get their 0-based row index as id.
LabeledDataset read_dataset_csv(std::istream& in, const std::string& name,
                                const CsvReadOptions& options = {});
LabeledDataset read_dataset_csv(const std::filesystem::path& path, const CsvReadOptions& options = {});

void write_dataset_csv(std::ostream& out, const LabeledDataset& ds);

}  // namespace sdkit
