#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "pcmclust/pcm.hpp"

namespace pcmclust {

enum class DatasetFormat { Csv, Json };

DatasetFormat parse_format(std::string_view text);

/// Guess from the file extension (".json" -> Json, anything else -> Csv).
DatasetFormat format_for(const std::filesystem::path& path);

/// A collection of PCMs of one order with unique labels.
struct Dataset {
  std::vector<Pcm> pcms;
  std::size_t order = 0;
  std::string source;
  std::vector<std::string> warnings;

  std::size_t size() const noexcept { return pcms.size(); }
  bool complete() const noexcept;
};

struct IngestOptions {
  /// Fix slightly non-reciprocal pairs (rounded printed values) with a warning.
  bool repair = true;
};

/**
 * CSV: matrices are blocks separated by blank lines. A block starts with
 * `# label` followed by n rows of n comma-separated cells; an empty cell is a
 * missing comparison and `p/q` fractions are accepted.
 *
 * JSON: an array of {"label": ..., "n": ..., "entries": [[...]]} with null
 * for missing comparisons.
 *
 * Syntax errors raise ParseError with a line number (CSV) or an element index
 * (JSON); invalid matrices raise the validation error with the matrix label.
 */
Dataset parse_dataset(std::istream& is, DatasetFormat format, const IngestOptions& options = {},
                      std::string source = "<stream>");

/// Reads a file; Io if it cannot be opened.
Dataset ingest(const std::filesystem::path& path, DatasetFormat format,
               const IngestOptions& options = {});

/// Writes entries with 17 significant digits so that parsing the output
/// reproduces the dataset exactly.
void write_dataset(std::ostream& os, const Dataset& dataset, DatasetFormat format);

}  // namespace pcmclust
