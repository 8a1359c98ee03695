#include "pcmclust/run.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "pcmclust/aggregation.hpp"
#include "pcmclust/error.hpp"
#include "pcmclust/format.hpp"
#include "pcmclust/mds.hpp"
#include "pcmclust/plot.hpp"

namespace pcmclust {

void RunConfig::validate(std::size_t m) const {
  if (m == 0) throw Error(Errc::EmptyInput, "empty dataset");
  if (k == 0 || k > m) {
    throw Error(Errc::InvalidArgument,
                "k = " + std::to_string(k) + " outside [1, " + std::to_string(m) + "]");
  }
  if (k_max && (*k_max == 0 || *k_max > m)) {
    throw Error(Errc::InvalidArgument,
                "k-max = " + std::to_string(*k_max) + " outside [1, " + std::to_string(m) + "]");
  }
  if (cr_threshold && !(*cr_threshold >= 0.0)) {
    throw Error(Errc::InvalidArgument, "CR threshold must be non-negative");
  }
  if (outlier_max_size == 0) throw Error(Errc::InvalidArgument, "outlier size must be positive");
}

std::size_t RunConfig::effective_k_max(std::size_t m) const {
  return k_max ? *k_max : std::min<std::size_t>(m, 10);
}

namespace {

class OutputDir {
 public:
  explicit OutputDir(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw Error(Errc::Io, "cannot create '" + dir_.string() + "': " + ec.message());
  }

  template <typename Fn>
  void write(const std::string& name, Fn&& fn) {
    const auto path = dir_ / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::Io, "cannot write '" + path.string() + "'");
    fn(out);
    out.flush();
    if (!out) throw Error(Errc::Io, "write failed for '" + path.string() + "'");
    files_.push_back(path);
  }

  std::vector<std::filesystem::path> files() const { return files_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::filesystem::path> files_;
};

ClusteringSolution solve(const KMedoidsProblem& problem, const RunConfig& config,
                         std::vector<std::string>& warnings) {
  try {
    return solve_exact(problem, config.exact);
  } catch (const Error& e) {
    if (e.code() != Errc::SearchBudgetExceeded || !config.heuristic_fallback) throw;
    warnings.push_back("k = " + std::to_string(problem.k) +
                       ": exact search budget exhausted, using PAM (not proven optimal)");
    return solve_pam(problem, config.seed);
  }
}

EmbeddingResult embed_any(const DissimilarityMatrix& delta, std::uint64_t seed) {
  const std::size_t m = delta.size();
  if (m < 2) {
    EmbeddingResult r;
    r.coords.assign(2 * m, 0.0);
    return r;
  }
  MdsOptions options;
  options.seed = seed;
  options.dim = m >= 3 ? 2 : 1;
  return embed(delta, options);
}

void write_matrix_md(std::ostream& os, const Pcm& p) {
  const std::size_t n = p.order();
  os << '|';
  for (std::size_t j = 0; j < n; ++j) os << ' ' << j + 1 << " |";
  os << "\n|";
  for (std::size_t j = 0; j < n; ++j) os << "---:|";
  os << '\n';
  for (std::size_t i = 0; i < n; ++i) {
    os << '|';
    for (std::size_t j = 0; j < n; ++j) {
      const auto v = p.at(i, j);
      os << ' ' << (v ? format_fixed(*v) : "-") << " |";
    }
    os << '\n';
  }
}

std::string weights_text(const WeightVector& w) {
  std::string s = "(";
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i > 0) s += ", ";
    s += format_fixed(w[i]);
  }
  return s + ")";
}

std::string cr_text(const std::optional<double>& cr) { return cr ? format_fixed(*cr) : "n/a"; }

struct AggregationSection {
  std::optional<AggregationOutcome> geometric;
  std::optional<AggregationOutcome> medoid;
  std::vector<std::string> notes;
};

AggregationSection aggregate_all(const Dataset& dataset, Measure measure) {
  AggregationSection s;
  try {
    s.geometric = aggregate_geometric(dataset.pcms);
  } catch (const Error& e) {
    s.notes.push_back(std::string("geometric-mean aggregation unavailable: ") + e.what());
  }
  try {
    s.medoid = aggregate_by_medoid(dataset.pcms, measure);
  } catch (const Error& e) {
    s.notes.push_back(std::string("medoid aggregation unavailable: ") + e.what());
  }
  return s;
}

void write_report(std::ostream& os, const Dataset& dataset, const RunConfig& config,
                  const DissimilarityMatrix& delta, const ClusteringSolution& solution,
                  const std::vector<std::optional<double>>& cr,
                  const std::optional<ClusterInconsistencySummary>& boxes,
                  const std::optional<SilhouetteReport>& sil,
                  const std::vector<std::size_t>& outliers, const AggregationSection& agg,
                  const std::vector<std::string>& warnings) {
  const auto& labels = delta.labels();
  const auto sizes = solution.cluster_sizes();

  os << "# Clustering report\n\n";
  os << "- source: " << dataset.source << '\n';
  os << "- matrices: " << dataset.size() << " of order " << dataset.order
     << (dataset.complete() ? "" : " (some incomplete)") << '\n';
  os << "- measure: " << to_string(config.measure) << '\n';
  os << "- k: " << solution.k() << '\n';
  if (config.cr_threshold) {
    os << "- medoid CR threshold: " << format_fixed(*config.cr_threshold) << '\n';
  }
  os << "- solver: " << to_string(solution.solver)
     << (solution.optimal ? " (optimal)" : " (not proven optimal)") << '\n';
  os << "- objective: " << format_fixed(solution.objective) << '\n';
  if (sil) os << "- mean silhouette: " << format_fixed(sil->mean) << '\n';
  os << '\n';

  os << "## Clusters\n\n";
  os << "| cluster | medoid | size | medoid CR |\n|---:|---|---:|---:|\n";
  for (std::size_t c = 0; c < solution.k(); ++c) {
    const std::size_t med = solution.medoids[c];
    os << "| " << c + 1 << " | " << labels[med] << " | " << sizes[c] << " | " << cr_text(cr[med])
       << " |\n";
  }
  os << '\n';

  os << "## Cluster centres\n\n";
  for (std::size_t c = 0; c < solution.k(); ++c) {
    const Pcm& centre = dataset.pcms[solution.medoids[c]];
    os << "### Cluster " << c + 1 << ": " << centre.label() << "\n\n";
    write_matrix_md(os, centre);
    os << '\n';
    if (centre.is_complete()) {
      const auto w = llsm_weights(centre);
      const auto ranking = ranking_from_weights(w);
      os << "- weights: " << weights_text(w) << '\n';
      os << "- ranking: " << format_ranking(ranking) << '\n';
      os << "- CR: " << cr_text(cr[solution.medoids[c]]) << "\n\n";
    } else {
      os << "- incomplete centre, no weights\n\n";
    }
  }

  os << "## Inconsistency by cluster\n\n";
  if (boxes) {
    os << "| cluster | min | q1 | median | q3 | max |\n|---:|---:|---:|---:|---:|---:|\n";
    for (std::size_t c = 0; c < boxes->clusters.size(); ++c) {
      const auto& b = boxes->clusters[c].cr;
      os << "| " << c + 1 << " | " << format_fixed(b.min) << " | " << format_fixed(b.q1) << " | "
         << format_fixed(b.median) << " | " << format_fixed(b.q3) << " | " << format_fixed(b.max)
         << " |\n";
    }
    os << '\n';
  } else {
    os << "Not available: the dataset contains incomplete matrices.\n\n";
  }

  os << "## Outliers\n\n";
  if (outliers.empty()) {
    os << "No cluster has at most " << config.outlier_max_size << " member(s).\n\n";
  } else {
    os << "Clusters with at most " << config.outlier_max_size << " member(s):\n\n";
    for (std::size_t med : outliers) {
      os << "- " << labels[med] << " (cluster " << solution.cluster_of(med) + 1
         << ", CR " << cr_text(cr[med]) << ")\n";
    }
    os << '\n';
  }

  os << "## Aggregation of all matrices\n\n";
  if (agg.geometric) {
    os << "- geometric mean: weights " << weights_text(agg.geometric->weights) << ", ranking "
       << format_ranking(agg.geometric->ranking) << '\n';
  }
  if (agg.medoid) {
    os << "- one-cluster medoid (" << to_string(config.measure) << "): "
       << labels[*agg.medoid->medoid] << ", objective " << format_fixed(*agg.medoid->objective)
       << ", weights " << weights_text(agg.medoid->weights) << ", ranking "
       << format_ranking(agg.medoid->ranking) << '\n';
  }
  if (agg.geometric && agg.medoid) {
    const auto cmp = compare_rankings(agg.geometric->ranking, agg.medoid->ranking);
    if (cmp.equal) {
      os << "- the two rankings agree\n";
    } else {
      os << "- the rankings differ on";
      for (const auto& [x, y] : cmp.reversals) os << " (" << x + 1 << ", " << y + 1 << ")";
      os << '\n';
    }
  }
  for (const auto& note : agg.notes) os << "- " << note << '\n';
  os << '\n';

  if (!warnings.empty()) {
    os << "## Warnings\n\n";
    for (const auto& w : warnings) os << "- " << w << '\n';
    os << '\n';
  }
}

}  // namespace

RunSummary run_cluster(const Dataset& dataset, const RunConfig& config) {
  const std::size_t m = dataset.size();
  config.validate(m);

  RunSummary summary;
  summary.warnings = dataset.warnings;

  const auto delta = [&] {
    if (m >= 2) return build_delta(dataset.pcms, config.measure);
    return DissimilarityMatrix({0.0}, {dataset.pcms[0].label()}, config.measure);
  }();

  std::set<std::size_t> forbidden;
  if (config.cr_threshold) {
    forbidden = eligible_medoids_by_cr(dataset.pcms, *config.cr_threshold, config.random_index);
  }
  const KMedoidsProblem problem{delta, config.k, forbidden};
  summary.solution = solve(problem, config, summary.warnings);
  const ClusteringSolution& solution = summary.solution;

  std::vector<std::optional<double>> cr(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (dataset.pcms[i].is_complete()) {
      cr[i] = consistency_report(dataset.pcms[i], config.random_index).cr;
    }
  }

  // Elbow series over every k, with the mean silhouette of each optimum.
  ElbowOptions elbow_options;
  elbow_options.exact = config.exact;
  elbow_options.heuristic_fallback = config.heuristic_fallback;
  elbow_options.seed = config.seed;
  const auto series = elbow(delta, config.effective_k_max(m), forbidden, elbow_options);
  std::vector<std::optional<double>> elbow_silhouette;
  for (const auto& p : series.points) {
    if (p.k < 2) {
      elbow_silhouette.emplace_back();
    } else {
      elbow_silhouette.emplace_back(silhouette(delta, assign_to_medoids(delta, p.medoids)).mean);
    }
    if (!p.optimal) {
      summary.warnings.push_back("elbow k = " + std::to_string(p.k) + " solved heuristically");
    }
  }

  std::optional<SilhouetteReport> sil;
  if (solution.k() >= 2) sil = silhouette(delta, solution);

  std::optional<ClusterInconsistencySummary> boxes;
  if (dataset.complete()) {
    boxes = cluster_cr_summary(dataset.pcms, solution, config.random_index);
  } else {
    summary.warnings.push_back("incomplete matrices: CR boxplots skipped");
  }

  const auto outliers = detect_outliers(solution, config.outlier_max_size);
  const auto embedding = embed_any(delta, config.seed);
  const auto agg = aggregate_all(dataset, config.measure);

  OutputDir out(config.out_dir);
  out.write("solution.json", [&](std::ostream& os) { write_solution_json(os, solution, delta); });
  out.write("delta.tsv", [&](std::ostream& os) { write_delta_tsv(os, delta); });
  out.write("mds.tsv",
            [&](std::ostream& os) { write_mds_tsv(os, embedding, delta, &solution, cr); });
  out.write("mds.svg", [&](std::ostream& os) { write_mds_svg(os, embedding, delta, &solution); });
  out.write("silhouette.tsv", [&](std::ostream& os) {
    if (sil) {
      write_silhouette_tsv(os, *sil, delta, solution);
      return;
    }
    os << "label\tcluster\tsilhouette\n";
    for (std::size_t i = 0; i < m; ++i) os << delta.labels()[i] << "\t1\tNA\n";
  });
  out.write("elbow.tsv", [&](std::ostream& os) { write_elbow_tsv(os, series, elbow_silhouette); });
  out.write("elbow.svg", [&](std::ostream& os) { write_elbow_svg(os, series); });

  if (m >= 2) {
    const auto tree = agglomerate(delta, config.linkage, config.dendrogram_transform);
    out.write("dendrogram.nwk", [&](std::ostream& os) { os << to_newick(tree); });
    out.write("dendrogram.tsv", [&](std::ostream& os) { write_merge_table(os, tree); });
  } else {
    out.write("dendrogram.nwk", [&](std::ostream& os) { os << delta.labels()[0] << ";\n"; });
  }

  out.write("boxplots.tsv", [&](std::ostream& os) {
    os << "cluster\tmedoid\tsize\tmin\tq1\tmedian\tq3\tmax\twhisker_low\twhisker_high\t"
          "outliers\n";
    if (!boxes) return;
    for (std::size_t c = 0; c < boxes->clusters.size(); ++c) {
      const auto& s = boxes->clusters[c];
      os << c + 1 << '\t' << delta.labels()[s.medoid] << '\t' << s.size << '\t'
         << format_exact(s.cr.min) << '\t' << format_exact(s.cr.q1) << '\t'
         << format_exact(s.cr.median) << '\t' << format_exact(s.cr.q3) << '\t'
         << format_exact(s.cr.max) << '\t' << format_exact(s.cr.whisker_low) << '\t'
         << format_exact(s.cr.whisker_high) << '\t';
      for (std::size_t t = 0; t < s.outliers.size(); ++t) {
        os << (t > 0 ? "," : "") << delta.labels()[s.outliers[t]];
      }
      os << '\n';
    }
  });

  out.write("outliers.json", [&](std::ostream& os) {
    using nlohmann::json;
    json small = json::array();
    for (std::size_t med : outliers) {
      json entry{{"label", delta.labels()[med]},
                 {"cluster", solution.cluster_of(med) + 1},
                 {"size", solution.cluster_sizes()[solution.cluster_of(med)]}};
      entry["cr"] = cr[med] ? json(*cr[med]) : json(nullptr);
      small.push_back(std::move(entry));
    }
    json by_cr = json::array();
    if (boxes) {
      for (std::size_t c = 0; c < boxes->clusters.size(); ++c) {
        for (std::size_t i : boxes->clusters[c].outliers) {
          by_cr.push_back({{"label", delta.labels()[i]}, {"cluster", c + 1}, {"cr", *cr[i]}});
        }
      }
    }
    json doc{{"max_cluster_size", config.outlier_max_size},
             {"small_clusters", std::move(small)},
             {"cr_outliers", std::move(by_cr)}};
    os << doc.dump(2) << '\n';
  });

  out.write("report.md", [&](std::ostream& os) {
    write_report(os, dataset, config, delta, solution, cr, boxes, sil, outliers, agg,
                 summary.warnings);
  });

  summary.files = out.files();
  return summary;
}

}  // namespace pcmclust
