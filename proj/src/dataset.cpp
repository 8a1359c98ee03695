#include "pcmclust/dataset.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "pcmclust/error.hpp"
#include "pcmclust/format.hpp"

namespace pcmclust {

DatasetFormat parse_format(std::string_view text) {
  if (text == "csv") return DatasetFormat::Csv;
  if (text == "json") return DatasetFormat::Json;
  throw Error(Errc::InvalidArgument, "unknown format '" + std::string(text) + "' (csv|json)");
}

DatasetFormat format_for(const std::filesystem::path& path) {
  return path.extension() == ".json" ? DatasetFormat::Json : DatasetFormat::Csv;
}

bool Dataset::complete() const noexcept {
  for (const auto& p : pcms)
    if (!p.is_complete()) return false;
  return true;
}

namespace {

struct PendingMatrix {
  std::string label;
  std::size_t line = 0;
  RawGrid grid;
};

void add_matrix(Dataset& ds, const PendingMatrix& pending, const IngestOptions& options,
                std::set<std::string>& seen) {
  const std::string at = pending.line > 0 ? " (line " + std::to_string(pending.line) + ")" : "";
  if (!seen.insert(pending.label).second) {
    throw Error(Errc::DuplicateLabel, "duplicate matrix label '" + pending.label + "'" + at);
  }
  ValidationOptions vo;
  vo.repair = options.repair;
  Pcm pcm = [&] {
    try {
      return validate_pcm(pending.grid, pending.label, vo, &ds.warnings);
    } catch (const Error& e) {
      throw Error(e.code(), std::string(e.what()) + at);
    }
  }();
  if (ds.pcms.empty()) {
    ds.order = pcm.order();
  } else if (pcm.order() != ds.order) {
    throw Error(Errc::OrderMismatch, "matrix '" + pcm.label() + "' has order " +
                                         std::to_string(pcm.order()) + ", dataset order is " +
                                         std::to_string(ds.order) + at);
  }
  ds.pcms.push_back(std::move(pcm));
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(line.substr(start));
      break;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return cells;
}

Dataset parse_csv(std::istream& is, const IngestOptions& options, std::string source) {
  Dataset ds;
  ds.source = std::move(source);
  std::set<std::string> seen;
  std::optional<PendingMatrix> pending;
  std::size_t expected = 0;

  auto finish = [&](std::size_t lineno) {
    if (!pending) return;
    if (pending->grid.empty() || pending->grid.size() != expected) {
      throw Error(Errc::ParseError,
                  "line " + std::to_string(lineno) + ": matrix '" + pending->label + "' has " +
                      std::to_string(pending->grid.size()) + " row(s), expected " +
                      std::to_string(expected));
    }
    add_matrix(ds, *pending, options, seen);
    pending.reset();
  };

  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(is, raw)) {
    ++lineno;
    const std::string_view line = trim(raw);
    if (line.empty()) {
      finish(lineno);
      continue;
    }
    if (line.front() == '#') {
      finish(lineno);
      const std::string label(trim(line.substr(1)));
      if (label.empty()) {
        throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": empty matrix label");
      }
      pending = PendingMatrix{label, lineno, {}};
      expected = 0;
      continue;
    }
    if (!pending) {
      throw Error(Errc::ParseError,
                  "line " + std::to_string(lineno) + ": expected '# label' before matrix rows");
    }
    const auto cells = split_commas(line);
    if (expected == 0) expected = cells.size();
    if (cells.size() != expected) {
      throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": " +
                                        std::to_string(cells.size()) + " cells, expected " +
                                        std::to_string(expected));
    }
    if (pending->grid.size() == expected) {
      throw Error(Errc::ParseError,
                  "line " + std::to_string(lineno) + ": too many rows for matrix '" +
                      pending->label + "'");
    }
    std::vector<std::optional<double>> row;
    row.reserve(cells.size());
    for (const auto cell : cells) {
      if (trim(cell).empty()) {
        row.emplace_back(std::nullopt);
        continue;
      }
      const auto v = parse_number(cell);
      if (!v) {
        throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": bad number '" +
                                          std::string(trim(cell)) + "'");
      }
      row.emplace_back(*v);
    }
    pending->grid.push_back(std::move(row));
  }
  finish(lineno + 1);
  if (ds.pcms.empty()) throw Error(Errc::EmptyInput, ds.source + ": no matrices found");
  return ds;
}

Dataset parse_json(std::istream& is, const IngestOptions& options, std::string source) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(is);
  } catch (const json::parse_error& e) {
    throw Error(Errc::ParseError, e.what());
  }
  if (!doc.is_array()) throw Error(Errc::ParseError, "top-level JSON value must be an array");

  Dataset ds;
  ds.source = std::move(source);
  std::set<std::string> seen;
  for (std::size_t idx = 0; idx < doc.size(); ++idx) {
    const auto& item = doc[idx];
    const std::string at = "element " + std::to_string(idx) + ": ";
    if (!item.is_object() || !item.contains("label") || !item["label"].is_string() ||
        !item.contains("entries") || !item["entries"].is_array()) {
      throw Error(Errc::ParseError, at + "expected {label, n, entries}");
    }
    PendingMatrix pending{item["label"].get<std::string>(), 0, {}};
    const auto& rows = item["entries"];
    if (item.contains("n")) {
      if (!item["n"].is_number_unsigned() || item["n"].get<std::size_t>() != rows.size()) {
        throw Error(Errc::ParseError, at + "'n' does not match the number of rows");
      }
    }
    for (const auto& row : rows) {
      if (!row.is_array()) throw Error(Errc::ParseError, at + "rows must be arrays");
      std::vector<std::optional<double>> r;
      for (const auto& cell : row) {
        if (cell.is_null()) {
          r.emplace_back(std::nullopt);
        } else if (cell.is_number()) {
          r.emplace_back(cell.get<double>());
        } else {
          throw Error(Errc::ParseError, at + "entries must be numbers or null");
        }
      }
      pending.grid.push_back(std::move(r));
    }
    try {
      add_matrix(ds, pending, options, seen);
    } catch (const Error& e) {
      throw Error(e.code(), at + e.what());
    }
  }
  if (ds.pcms.empty()) throw Error(Errc::EmptyInput, ds.source + ": no matrices found");
  return ds;
}

}  // namespace

Dataset parse_dataset(std::istream& is, DatasetFormat format, const IngestOptions& options,
                      std::string source) {
  return format == DatasetFormat::Csv ? parse_csv(is, options, std::move(source))
                                      : parse_json(is, options, std::move(source));
}

Dataset ingest(const std::filesystem::path& path, DatasetFormat format,
               const IngestOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open '" + path.string() + "'");
  return parse_dataset(in, format, options, path.string());
}

void write_dataset(std::ostream& os, const Dataset& dataset, DatasetFormat format) {
  if (format == DatasetFormat::Csv) {
    for (std::size_t k = 0; k < dataset.pcms.size(); ++k) {
      const Pcm& p = dataset.pcms[k];
      if (k > 0) os << '\n';
      os << "# " << p.label() << '\n';
      for (std::size_t i = 0; i < p.order(); ++i) {
        for (std::size_t j = 0; j < p.order(); ++j) {
          if (j > 0) os << ',';
          if (const auto v = p.at(i, j)) os << format_exact(*v);
        }
        os << '\n';
      }
    }
    return;
  }

  using nlohmann::json;
  json doc = json::array();
  for (const Pcm& p : dataset.pcms) {
    json rows = json::array();
    for (std::size_t i = 0; i < p.order(); ++i) {
      json row = json::array();
      for (std::size_t j = 0; j < p.order(); ++j) {
        if (const auto v = p.at(i, j)) {
          row.push_back(*v);
        } else {
          row.push_back(nullptr);
        }
      }
      rows.push_back(std::move(row));
    }
    doc.push_back({{"label", p.label()}, {"n", p.order()}, {"entries", std::move(rows)}});
  }
  os << doc.dump(2) << '\n';
}

}  // namespace pcmclust
