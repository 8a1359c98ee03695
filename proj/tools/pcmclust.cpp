// pcmclust: clustering of pairwise comparison matrices from the command line.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "pcmclust/aggregation.hpp"
#include "pcmclust/dataset.hpp"
#include "pcmclust/diagnostics.hpp"
#include "pcmclust/dissimilarity.hpp"
#include "pcmclust/error.hpp"
#include "pcmclust/format.hpp"
#include "pcmclust/kmedoids.hpp"
#include "pcmclust/mds.hpp"
#include "pcmclust/pcm.hpp"
#include "pcmclust/plot.hpp"
#include "pcmclust/run.hpp"

namespace {

using namespace pcmclust;

struct Options {
  std::string input;
  std::string format;
  std::string measure = "d1";
  std::size_t k = 2;
  std::optional<std::size_t> k_max;
  std::optional<double> cr_threshold;
  std::string linkage = "average";
  std::uint64_t seed = 0;
  std::string out;
  bool strict = false;
  std::string ri;
  bool square = false;
  bool table = false;
  std::string method = "geometric";
  std::size_t max_size = 1;
};

/// "4=0.89,5=1.12" on top of the default table.
RandomIndexTable parse_ri(const std::string& text) {
  RandomIndexTable table = default_random_index();
  std::string_view rest = text;
  while (!trim(rest).empty()) {
    const auto comma = rest.find(',');
    const auto item = trim(rest.substr(0, comma));
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    const auto eq = item.find('=');
    const auto n = eq == std::string_view::npos ? std::nullopt : parse_number(item.substr(0, eq));
    const auto v = eq == std::string_view::npos ? std::nullopt : parse_number(item.substr(eq + 1));
    if (!n || !v || *n < 1 || *n != static_cast<double>(static_cast<std::size_t>(*n)) ||
        !(*v > 0.0)) {
      throw Error(Errc::InvalidArgument, "bad RI entry '" + std::string(item) + "' (want n=value)");
    }
    table[static_cast<std::size_t>(*n)] = *v;
  }
  return table;
}

Dataset load(const Options& o, bool warn = true) {
  const auto format = o.format.empty() ? format_for(o.input) : parse_format(o.format);
  IngestOptions io;
  io.repair = !o.strict;
  auto ds = ingest(o.input, format, io);
  if (warn)
    for (const auto& w : ds.warnings) std::cerr << "warning: " << w << '\n';
  return ds;
}

/// Output stream for --out, stdout when unset.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (path.empty()) return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw Error(Errc::Io, "cannot write '" + path + "'");
  }
  std::ostream& get() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

RunConfig make_config(const Options& o) {
  RunConfig c;
  c.measure = parse_measure(o.measure);
  c.k = o.k;
  c.k_max = o.k_max;
  c.cr_threshold = o.cr_threshold;
  c.linkage = parse_linkage(o.linkage);
  c.dendrogram_transform = o.square ? HeightTransform::Square : HeightTransform::Identity;
  if (!o.ri.empty()) c.random_index = parse_ri(o.ri);
  c.out_dir = o.out.empty() ? "out" : o.out;
  c.seed = o.seed;
  c.outlier_max_size = o.max_size;
  return c;
}

ClusteringSolution cluster(const Dataset& ds, const DissimilarityMatrix& delta,
                           const RunConfig& c) {
  c.validate(ds.size());
  std::set<std::size_t> forbidden;
  if (c.cr_threshold) {
    forbidden = eligible_medoids_by_cr(ds.pcms, *c.cr_threshold, c.random_index);
  }
  const KMedoidsProblem problem{delta, c.k, forbidden};
  try {
    return solve_exact(problem, c.exact);
  } catch (const Error& e) {
    if (e.code() != Errc::SearchBudgetExceeded) throw;
    std::cerr << "warning: exact search budget exhausted, using PAM\n";
    return solve_pam(problem, c.seed);
  }
}

int cmd_validate(const Options& o) {
  const auto ds = load(o);
  const RandomIndexTable ri = o.ri.empty() ? default_random_index() : parse_ri(o.ri);
  std::cout << "label\torder\tmissing_pairs\tcr\n";
  for (const auto& p : ds.pcms) {
    std::cout << p.label() << '\t' << p.order() << '\t' << p.missing_pairs() << '\t';
    if (p.is_complete()) {
      std::cout << format_exact(consistency_report(p, ri).cr);
    } else {
      std::cout << "NA";
    }
    std::cout << '\n';
  }
  std::cerr << ds.size() << " matrices of order " << ds.order << " ok\n";
  return 0;
}

int cmd_dissim(const Options& o) {
  const auto ds = load(o);
  const auto measure = parse_measure(o.measure);
  const auto delta = build_delta(ds.pcms, measure);
  Sink sink(o.out);
  write_delta_tsv(sink.get(), delta);
  const auto violations = check_triangle(delta);
  for (const auto& v : violations) {
    std::cerr << "triangle violation: " << delta.labels()[v.from] << " -> "
              << delta.labels()[v.via] << " -> " << delta.labels()[v.to] << " exceeds by "
              << format_exact(v.excess) << '\n';
  }
  return 0;
}

int cmd_cluster(const Options& o) {
  const auto ds = load(o, false);
  const auto summary = run_cluster(ds, make_config(o));
  for (const auto& w : summary.warnings) std::cerr << "warning: " << w << '\n';
  for (const auto& f : summary.files) std::cout << f.string() << '\n';
  return 0;
}

int cmd_elbow(const Options& o) {
  const auto ds = load(o);
  const auto c = make_config(o);
  c.validate(ds.size());
  const auto delta = build_delta(ds.pcms, c.measure);
  std::set<std::size_t> forbidden;
  if (c.cr_threshold) {
    forbidden = eligible_medoids_by_cr(ds.pcms, *c.cr_threshold, c.random_index);
  }
  ElbowOptions eo;
  eo.heuristic_fallback = true;
  eo.seed = c.seed;
  const auto series = elbow(delta, c.effective_k_max(ds.size()), forbidden, eo);
  std::vector<std::optional<double>> sil;
  for (const auto& p : series.points) {
    if (p.k < 2) {
      sil.emplace_back();
    } else {
      sil.emplace_back(silhouette(delta, assign_to_medoids(delta, p.medoids)).mean);
    }
  }
  Sink sink(o.out);
  write_elbow_tsv(sink.get(), series, sil);
  return 0;
}

int cmd_silhouette(const Options& o) {
  const auto ds = load(o);
  const auto c = make_config(o);
  const auto delta = build_delta(ds.pcms, c.measure);
  const auto solution = cluster(ds, delta, c);
  const auto report = silhouette(delta, solution);
  Sink sink(o.out);
  write_silhouette_tsv(sink.get(), report, delta, solution);
  std::cerr << "mean silhouette " << format_fixed(report.mean) << '\n';
  return 0;
}

int cmd_dendro(const Options& o) {
  const auto ds = load(o);
  const auto c = make_config(o);
  const auto tree =
      agglomerate(build_delta(ds.pcms, c.measure), c.linkage, c.dendrogram_transform);
  Sink sink(o.out);
  if (o.table) {
    write_merge_table(sink.get(), tree);
  } else {
    sink.get() << to_newick(tree);
  }
  return 0;
}

int cmd_mds(const Options& o) {
  const auto ds = load(o);
  const auto c = make_config(o);
  const auto delta = build_delta(ds.pcms, c.measure);
  const auto solution = cluster(ds, delta, c);
  MdsOptions mo;
  mo.seed = c.seed;
  const auto embedding = embed(delta, mo);
  std::vector<std::optional<double>> cr;
  for (const auto& p : ds.pcms) {
    cr.push_back(p.is_complete() ? std::optional(consistency_report(p, c.random_index).cr)
                                 : std::nullopt);
  }
  Sink sink(o.out);
  write_mds_tsv(sink.get(), embedding, delta, &solution, cr);
  std::cerr << "stress " << format_fixed(embedding.stress, 6) << " after "
            << embedding.iterations << " iterations\n";
  return 0;
}

int cmd_weights(const Options& o) {
  const auto ds = load(o);
  Sink sink(o.out);
  auto& os = sink.get();
  os << "label";
  for (std::size_t i = 0; i < ds.order; ++i) os << "\tw" << i + 1;
  os << "\tranking\n";
  for (const auto& p : ds.pcms) {
    const auto w = llsm_weights(p);
    os << p.label();
    for (double x : w.values()) os << '\t' << format_exact(x);
    os << '\t' << format_ranking(ranking_from_weights(w)) << '\n';
  }
  return 0;
}

int cmd_cr(const Options& o) {
  const auto ds = load(o);
  const RandomIndexTable ri = o.ri.empty() ? default_random_index() : parse_ri(o.ri);
  Sink sink(o.out);
  auto& os = sink.get();
  os << "label\tlambda_max\tci\tri\tcr\n";
  for (const auto& p : ds.pcms) {
    const auto r = consistency_report(p, ri);
    os << p.label() << '\t' << format_exact(r.lambda_max) << '\t' << format_exact(r.ci) << '\t'
       << format_exact(r.ri_used) << '\t' << format_exact(r.cr) << '\n';
  }
  return 0;
}

int cmd_aggregate(const Options& o) {
  const auto ds = load(o);
  Sink sink(o.out);
  if (o.method == "geometric") {
    write_aggregation_json(sink.get(), aggregate_geometric(ds.pcms));
  } else if (o.method == "medoid") {
    write_aggregation_json(sink.get(), aggregate_by_medoid(ds.pcms, parse_measure(o.measure)));
  } else if (o.method == "priorities") {
    const auto w = aggregate_priorities(ds.pcms);
    nlohmann::json ranking = nlohmann::json::array();
    for (std::size_t r : ranking_from_weights(w)) ranking.push_back(r + 1);
    nlohmann::json doc{{"method", "priorities"}, {"weights", w.values()}, {"ranking", ranking}};
    sink.get() << doc.dump(2) << '\n';
  } else {
    throw Error(Errc::InvalidArgument, "unknown method '" + o.method + "'");
  }
  return 0;
}

int cmd_outliers(const Options& o) {
  const auto ds = load(o);
  const auto c = make_config(o);
  const auto delta = build_delta(ds.pcms, c.measure);
  const auto solution = cluster(ds, delta, c);
  nlohmann::json list = nlohmann::json::array();
  for (std::size_t med : detect_outliers(solution, o.max_size)) {
    list.push_back({{"label", delta.labels()[med]},
                    {"cluster", solution.cluster_of(med) + 1},
                    {"size", solution.cluster_sizes()[solution.cluster_of(med)]}});
  }
  Sink sink(o.out);
  sink.get() << nlohmann::json{{"max_cluster_size", o.max_size}, {"small_clusters", list}}.dump(2)
             << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clustering and aggregation of pairwise comparison matrices"};
  app.require_subcommand(1);
  Options o;

  auto input = [&](CLI::App* sub) {
    sub->add_option("input", o.input, "Dataset file (CSV or JSON)")->required();
    sub->add_option("--format", o.format, "Input format, csv|json (default: by extension)")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_flag("--strict", o.strict, "Reject slightly non-reciprocal entries");
  };
  auto measure = [&](CLI::App* sub) {
    sub->add_option("--measure", o.measure, "Dissimilarity measure d1..d7")
        ->check(CLI::IsMember({"d1", "d2", "d3", "d4", "d5", "d6", "d7"}));
  };
  auto clustering = [&](CLI::App* sub) {
    measure(sub);
    sub->add_option("--k", o.k, "Number of clusters");
    sub->add_option("--cr-threshold", o.cr_threshold,
                    "Matrices with a larger CR may not be medoids");
    sub->add_option("--seed", o.seed, "Seed for heuristic fallbacks");
    sub->add_option("--ri", o.ri, "Random index overrides, e.g. 4=0.89,5=1.12");
  };
  auto out = [&](CLI::App* sub, const std::string& what) {
    sub->add_option("--out", o.out, what);
  };

  std::vector<std::pair<CLI::App*, int (*)(const Options&)>> commands;
  auto add = [&](const char* name, const char* help, int (*fn)(const Options&)) {
    auto* sub = app.add_subcommand(name, help);
    input(sub);
    commands.emplace_back(sub, fn);
    return sub;
  };

  {
    auto* s = add("validate", "Check matrices and print their order and CR", cmd_validate);
    s->add_option("--ri", o.ri, "Random index overrides, e.g. 4=0.89");
  }
  {
    auto* s = add("dissim", "Pairwise dissimilarity matrix as TSV", cmd_dissim);
    measure(s);
    out(s, "Output file (default stdout)");
  }
  {
    auto* s = add("cluster", "Full analysis into an output directory", cmd_cluster);
    clustering(s);
    s->add_option("--k-max", o.k_max, "Largest k of the elbow series");
    s->add_option("--linkage", o.linkage, "average|single|complete")
        ->check(CLI::IsMember({"average", "single", "complete"}));
    s->add_flag("--square", o.square, "Cluster squared dissimilarities in the dendrogram");
    s->add_option("--max-size", o.max_size, "Largest cluster size flagged as outlier");
    out(s, "Output directory (default ./out)");
  }
  {
    auto* s = add("elbow", "Optimal objective for k = 1..k-max", cmd_elbow);
    measure(s);
    s->add_option("--k-max", o.k_max, "Largest k");
    s->add_option("--cr-threshold", o.cr_threshold, "Matrices with a larger CR may not be medoids");
    s->add_option("--seed", o.seed, "Seed for heuristic fallbacks");
    s->add_option("--ri", o.ri, "Random index overrides");
    out(s, "Output file (default stdout)");
  }
  {
    auto* s = add("silhouette", "Silhouette values of the optimal clustering", cmd_silhouette);
    clustering(s);
    out(s, "Output file (default stdout)");
  }
  {
    auto* s = add("dendro", "Agglomerative clustering as Newick", cmd_dendro);
    measure(s);
    s->add_option("--linkage", o.linkage, "average|single|complete")
        ->check(CLI::IsMember({"average", "single", "complete"}));
    s->add_flag("--square", o.square, "Cluster squared dissimilarities");
    s->add_flag("--table", o.table, "Print the merge table instead of Newick");
    out(s, "Output file (default stdout)");
  }
  {
    auto* s = add("mds", "Two-dimensional embedding as TSV", cmd_mds);
    clustering(s);
    out(s, "Output file (default stdout)");
  }
  {
    auto* s = add("weights", "Geometric-mean weights and rankings", cmd_weights);
    out(s, "Output file (default stdout)");
  }
  {
    auto* s = add("cr", "Perron root, CI and CR per matrix", cmd_cr);
    s->add_option("--ri", o.ri, "Random index overrides, e.g. 4=0.89");
    out(s, "Output file (default stdout)");
  }
  {
    auto* s = add("aggregate", "Aggregate all matrices into one", cmd_aggregate);
    measure(s);
    s->add_option("--method", o.method, "geometric|medoid|priorities")
        ->check(CLI::IsMember({"geometric", "medoid", "priorities"}));
    out(s, "Output file (default stdout)");
  }
  {
    auto* s = add("outliers", "Medoids of clusters with few members", cmd_outliers);
    clustering(s);
    s->add_option("--max-size", o.max_size, "Largest cluster size flagged");
    out(s, "Output file (default stdout)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : exit_code(Errc::InvalidArgument);
  }

  try {
    for (const auto& [sub, fn] : commands)
      if (sub->parsed()) return fn(o);
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
