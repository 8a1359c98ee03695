#include "pcmclust/mds.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

#include <Eigen/Dense>

#include "pcmclust/error.hpp"
#include "pcmclust/format.hpp"

namespace pcmclust {

namespace {

using Matrix = Eigen::MatrixXd;

double distance(const Matrix& x, Eigen::Index i, Eigen::Index j) {
  return (x.row(i) - x.row(j)).norm();
}

double stress_of(const DissimilarityMatrix& delta, const Matrix& x) {
  double num = 0.0;
  double den = 0.0;
  const auto m = static_cast<Eigen::Index>(delta.size());
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) {
      const double t = delta(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      const double r = t - distance(x, i, j);
      num += r * r;
      den += t * t;
    }
  }
  return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

/// Guttman transform for unit weights: X <- B(X) X / m.
Matrix guttman(const DissimilarityMatrix& delta, const Matrix& x) {
  const auto m = x.rows();
  Matrix b = Matrix::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) {
      const double d = distance(x, i, j);
      const double v =
          d > 0.0 ? -delta(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) / d : 0.0;
      b(i, j) = v;
      b(j, i) = v;
    }
  }
  for (Eigen::Index i = 0; i < m; ++i) b(i, i) = -b.row(i).sum();
  return b * x / static_cast<double>(m);
}

void center(Matrix& x) {
  const Eigen::RowVectorXd mean = x.colwise().mean();
  x.rowwise() -= mean;
}

}  // namespace

double kruskal_stress(const DissimilarityMatrix& delta, const std::vector<double>& coords,
                      std::size_t dim) {
  const auto m = static_cast<Eigen::Index>(delta.size());
  Matrix x(m, static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index a = 0; a < x.cols(); ++a)
      x(i, a) = coords[static_cast<std::size_t>(i) * dim + static_cast<std::size_t>(a)];
  return stress_of(delta, x);
}

EmbeddingResult embed(const DissimilarityMatrix& delta, const MdsOptions& options) {
  const std::size_t m = delta.size();
  const std::size_t dim = options.dim;
  if (dim == 0 || m < dim + 1) {
    throw Error(Errc::InvalidArgument, "embedding into " + std::to_string(dim) +
                                           " dimensions needs at least " +
                                           std::to_string(dim + 1) + " objects");
  }
  const auto mi = static_cast<Eigen::Index>(m);
  const auto di = static_cast<Eigen::Index>(dim);

  Matrix sq(mi, mi);
  for (Eigen::Index i = 0; i < mi; ++i)
    for (Eigen::Index j = 0; j < mi; ++j) {
      const double t = delta(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      sq(i, j) = t * t;
    }
  const Matrix centering =
      Matrix::Identity(mi, mi) - Matrix::Constant(mi, mi, 1.0 / static_cast<double>(m));
  const Matrix gram = -0.5 * centering * sq * centering;

  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
  // Eigen returns ascending eigenvalues.
  const Eigen::VectorXd values = eig.eigenvalues().reverse();
  const Matrix vectors = eig.eigenvectors().rowwise().reverse();

  EmbeddingResult result;
  result.dim = dim;
  result.eigenvalue_spectrum.assign(values.data(), values.data() + values.size());

  Matrix x = Matrix::Zero(mi, di);
  for (Eigen::Index a = 0; a < di; ++a) {
    const double lambda = values(a);
    if (lambda <= 0.0) continue;
    Eigen::VectorXd v = vectors.col(a);
    // Fix the eigenvector sign so output does not depend on solver internals.
    Eigen::Index pivot = 0;
    v.cwiseAbs().maxCoeff(&pivot);
    if (v(pivot) < 0.0) v = -v;
    x.col(a) = v * std::sqrt(lambda);
  }

  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) total += delta(i, j);

  if (total > 0.0 && x.isZero(0.0)) {
    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (Eigen::Index i = 0; i < mi; ++i)
      for (Eigen::Index a = 0; a < di; ++a) x(i, a) = normal(rng);
  }
  center(x);

  double stress = stress_of(delta, x);
  result.classical_stress = stress;
  result.stress_history.push_back(stress);

  if (total > 0.0) {
    for (std::size_t it = 0; it < options.max_iterations; ++it) {
      Matrix next = guttman(delta, x);
      center(next);
      const double next_stress = stress_of(delta, next);
      x = std::move(next);
      result.stress_history.push_back(next_stress);
      ++result.iterations;
      const double change = stress - next_stress;
      stress = next_stress;
      if (stress == 0.0 || change <= options.relative_tolerance * stress) break;
    }
  }

  result.stress = stress;
  result.coords.resize(m * dim);
  for (Eigen::Index i = 0; i < mi; ++i)
    for (Eigen::Index a = 0; a < di; ++a)
      result.coords[static_cast<std::size_t>(i) * dim + static_cast<std::size_t>(a)] = x(i, a);
  return result;
}

void write_mds_tsv(std::ostream& os, const EmbeddingResult& embedding,
                   const DissimilarityMatrix& delta, const ClusteringSolution* solution,
                   const std::vector<std::optional<double>>& cr) {
  os << "label\tx\ty\tcluster\tcr\n";
  for (std::size_t i = 0; i < delta.size(); ++i) {
    os << delta.labels()[i] << '\t' << format_exact(embedding.coord(i, 0)) << '\t'
       << format_exact(embedding.dim > 1 ? embedding.coord(i, 1) : 0.0) << '\t';
    if (solution != nullptr) {
      os << solution->cluster_of(i) + 1;
    } else {
      os << "NA";
    }
    os << '\t';
    if (i < cr.size() && cr[i]) {
      os << format_exact(*cr[i]);
    } else {
      os << "NA";
    }
    os << '\n';
  }
}

}  // namespace pcmclust
